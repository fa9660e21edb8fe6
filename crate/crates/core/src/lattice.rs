//! Short-vector enumeration for integer positive-definite quadratic forms
//! (Fincke–Pohst), plus the minimum-distance searches built on it.

use std::collections::HashSet;

use crate::numberfield::quadratic_form;

/// Visit every `z ∈ Z^N` with `zᵀ Q z <= bound`, passing the exact value.
///
/// `Q` must be symmetric positive definite. Floating point only prunes the
/// search; every reported vector is checked with exact integer arithmetic.
pub fn enumerate_short(q: &[Vec<i64>], bound: i128, mut visit: impl FnMut(&[i64], i128)) {
    let n = q.len();
    if bound < 0 {
        return;
    }
    // q_ii and q_ij (j > i) with Q(x) = Σ_i q_ii (x_i + Σ_{j>i} q_ij x_j)²
    let mut a: Vec<Vec<f64>> = q.iter().map(|r| r.iter().map(|&v| v as f64).collect()).collect();
    for i in 0..n {
        for j in i + 1..n {
            a[j][i] = a[i][j];
            a[i][j] /= a[i][i];
        }
        for k in i + 1..n {
            for l in k..n {
                a[k][l] -= a[k][i] * a[i][l];
            }
        }
    }
    let diag: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    let slack = bound as f64 * 1e-9 + 1e-6;
    let mut x = vec![0i64; n];
    let mut partial = vec![0.0f64; n + 1];
    recurse(&a, &diag, n, bound as f64 + slack, &mut x, &mut partial, &mut |z| {
        let v = quadratic_form(q, z);
        if v <= bound {
            visit(z, v);
        }
    });
}

fn recurse(
    a: &[Vec<f64>],
    diag: &[f64],
    level: usize,
    bound: f64,
    x: &mut Vec<i64>,
    partial: &mut Vec<f64>,
    visit: &mut dyn FnMut(&[i64]),
) {
    if level == 0 {
        visit(x);
        return;
    }
    let i = level - 1;
    let n = x.len();
    let center: f64 = -(i + 1..n).map(|j| a[i][j] * x[j] as f64).sum::<f64>();
    let remaining = bound - partial[level];
    if remaining < 0.0 {
        return;
    }
    let radius = (remaining / diag[i]).sqrt();
    let lo = (center - radius).ceil() as i64;
    let hi = (center + radius).floor() as i64;
    for v in lo..=hi {
        x[i] = v;
        let t = v as f64 - center;
        partial[i] = partial[level] + diag[i] * t * t;
        if partial[i] <= bound {
            recurse(a, diag, i, bound, x, partial, visit);
        }
    }
    x[i] = 0;
}

/// Volume of the unit ball in `R^n`.
pub fn ball_volume(n: usize) -> f64 {
    // Γ(n/2 + 1) by the recursion from Γ(1) or Γ(3/2)
    let (mut g, mut x) = if n.is_multiple_of(2) {
        (1.0, 1.0)
    } else {
        (std::f64::consts::PI.sqrt() / 2.0, 1.5)
    };
    while x < n as f64 / 2.0 + 0.75 {
        g *= x;
        x += 1.0;
    }
    std::f64::consts::PI.powf(n as f64 / 2.0) / g
}

/// Smallest value of `Q` over nonzero vectors accepted by `member`, searched
/// up to `upper` (which must be attained by some member). Returns the value
/// and a minimizing vector.
pub fn sublattice_minimum(q: &[Vec<i64>], upper: i128, member: impl Fn(&[i64]) -> bool) -> Option<(i128, Vec<i64>)> {
    let mut best: Option<(i128, Vec<i64>)> = None;
    enumerate_short(q, upper, |z, v| {
        if v == 0 || !member(z) {
            return;
        }
        let better = match &best {
            None => true,
            Some((bv, bz)) => v < *bv || (v == *bv && z < bz.as_slice()),
        };
        if better {
            best = Some((v, z.to_vec()));
        }
    });
    best
}

/// `Bᵀ Q B` for a basis given as the columns of `basis` (row-major).
pub fn gram_of_basis(q: &[Vec<i64>], basis: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = basis.len();
    let cols = basis.first().map_or(0, |r| r.len());
    let qb: Vec<Vec<i128>> = (0..n)
        .map(|i| {
            (0..cols)
                .map(|j| (0..n).map(|k| q[i][k] as i128 * basis[k][j] as i128).sum())
                .collect()
        })
        .collect();
    (0..cols)
        .map(|a| {
            (0..cols)
                .map(|b| {
                    let v: i128 = (0..n).map(|k| basis[k][a] as i128 * qb[k][b]).sum();
                    i64::try_from(v).expect("Gram entry overflow")
                })
                .collect()
        })
        .collect()
}

/// `B z`.
pub fn apply_basis(basis: &[Vec<i64>], z: &[i64]) -> Vec<i64> {
    basis
        .iter()
        .map(|row| row.iter().zip(z).map(|(&b, &c)| b * c).sum())
        .collect()
}

/// Minimum of `Q(x_a - x_b)` over distinct points of a finite set whose
/// pairwise differences all lie in the sublattice spanned by the columns of
/// `basis`; `gram` is `Bᵀ Q B`.
///
/// Scans sublattice vectors by increasing length starting from `start`
/// (any lower bound, e.g. the sublattice minimum) and stops at the first one
/// realized as a difference of two points.
pub fn min_pair_distance(points: &[Vec<i64>], basis: &[Vec<i64>], gram: &[Vec<i64>], start: i128) -> Option<i128> {
    if points.len() < 2 {
        return None;
    }
    let set: HashSet<&[i64]> = points.iter().map(|p| p.as_slice()).collect();
    let mut lower = 0i128;
    let mut bound = start.max(1);
    loop {
        let mut cands: Vec<(i128, Vec<i64>)> = Vec::new();
        enumerate_short(gram, bound, |z, v| {
            if v > lower {
                cands.push((v, apply_basis(basis, z)));
            }
        });
        cands.sort();
        let mut shifted = vec![0i64; basis.len()];
        for (v, d) in &cands {
            let hit = points.iter().any(|p| {
                for ((s, a), b) in shifted.iter_mut().zip(p).zip(d) {
                    *s = a + b;
                }
                set.contains(shifted.as_slice())
            });
            if hit {
                return Some(*v);
            }
        }
        lower = bound;
        bound *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_points_in_square_lattice() {
        let q = vec![vec![1, 0], vec![0, 1]];
        let mut count = 0;
        enumerate_short(&q, 2, |_, _| count += 1);
        // (0,0), 4 of norm 1, 4 of norm 2
        assert_eq!(count, 9);
    }

    #[test]
    fn skewed_form_matches_brute_force() {
        let q = vec![vec![4, 3, 1], vec![3, 5, 2], vec![1, 2, 3]];
        let bound = 20;
        let mut found = Vec::new();
        enumerate_short(&q, bound, |z, _| found.push(z.to_vec()));
        let mut brute = Vec::new();
        for a in -10..=10 {
            for b in -10..=10 {
                for c in -10..=10 {
                    let z = [a, b, c];
                    if quadratic_form(&q, &z) <= bound {
                        brute.push(z.to_vec());
                    }
                }
            }
        }
        found.sort();
        brute.sort();
        assert_eq!(found, brute);
    }

    #[test]
    fn unit_ball_volumes() {
        let pi = std::f64::consts::PI;
        assert!((ball_volume(1) - 2.0).abs() < 1e-12);
        assert!((ball_volume(2) - pi).abs() < 1e-12);
        assert!((ball_volume(3) - 4.0 * pi / 3.0).abs() < 1e-12);
        assert!((ball_volume(4) - pi * pi / 2.0).abs() < 1e-12);
    }

    #[test]
    fn pair_distance_on_line() {
        let q = vec![vec![1]];
        let pts = vec![vec![0], vec![3], vec![7]];
        assert_eq!(min_pair_distance(&pts, &q, &q, 1), Some(9));
        assert_eq!(min_pair_distance(&pts[..1], &q, &q, 1), None);
        // differences restricted to 2Z in a Z^2 setting
        let basis = vec![vec![2, 0], vec![0, 2]];
        let gram = gram_of_basis(&[vec![1, 0], vec![0, 1]], &basis);
        assert_eq!(gram, vec![vec![4, 0], vec![0, 4]]);
        let pts = vec![vec![0, 0], vec![2, 2], vec![6, 0]];
        assert_eq!(min_pair_distance(&pts, &basis, &gram, 4), Some(8));
    }
}
