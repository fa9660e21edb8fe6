//! Column Hermite normal forms of full-rank sublattices of `Z^n`.
//!
//! The output `H` is upper triangular with positive diagonal, and for `j > i`
//! the entry `H[i][j]` is reduced into `[0, H[i][i])`. Columns of `H` are a
//! basis of the lattice.

use crate::arith::ext_gcd;

fn combine(a: &[i128], s: i128, b: &[i128], t: i128) -> Vec<i128> {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| {
            x.checked_mul(s)
                .and_then(|u| y.checked_mul(t).and_then(|v| u.checked_add(v)))
                .expect("integer overflow in HNF")
        })
        .collect()
}

struct Column {
    v: Vec<i128>,
    combo: Vec<i128>,
}

/// Core elimination. When `modulus` is set, the lattice must contain
/// `modulus · Z^n`; those vectors are appended explicitly and entries above
/// the active row are kept reduced against them.
fn eliminate(mut active: Vec<Column>, n: usize, modulus: Option<i128>) -> Vec<Column> {
    let mut pivots: Vec<Option<Column>> = (0..n).map(|_| None).collect();
    for i in (0..n).rev() {
        let mut pivot: Option<Column> = None;
        let mut rest = Vec::with_capacity(active.len());
        for c in active.drain(..) {
            if c.v[i] == 0 {
                rest.push(c);
                continue;
            }
            match pivot.as_mut() {
                None => pivot = Some(c),
                Some(a) => {
                    let (g, s, t) = ext_gcd(a.v[i], c.v[i]);
                    let (x, y) = (a.v[i] / g, c.v[i] / g);
                    let mut na = Column {
                        v: combine(&a.v, s, &c.v, t),
                        combo: combine(&a.combo, s, &c.combo, t),
                    };
                    let mut nc = Column {
                        v: combine(&c.v, x, &a.v, -y),
                        combo: combine(&c.combo, x, &a.combo, -y),
                    };
                    if let Some(d) = modulus {
                        for r in 0..i {
                            na.v[r] = na.v[r].rem_euclid(d);
                            nc.v[r] = nc.v[r].rem_euclid(d);
                        }
                    }
                    *a = na;
                    if nc.v.iter().any(|&e| e != 0) {
                        rest.push(nc);
                    }
                }
            }
        }
        let mut p = pivot.expect("lattice is not of full rank");
        if p.v[i] < 0 {
            p.v.iter_mut().for_each(|e| *e = -*e);
            p.combo.iter_mut().for_each(|e| *e = -*e);
        }
        pivots[i] = Some(p);
        active = rest;
    }
    let mut cols: Vec<Column> = pivots.into_iter().map(|p| p.unwrap()).collect();
    for j in 0..n {
        for i in (0..j).rev() {
            let q = cols[j].v[i].div_euclid(cols[i].v[i]);
            if q != 0 {
                let (vi, ci) = (cols[i].v.clone(), cols[i].combo.clone());
                cols[j].v = combine(&cols[j].v, 1, &vi, -q);
                cols[j].combo = combine(&cols[j].combo, 1, &ci, -q);
            }
        }
    }
    cols
}

fn to_rows(cols: &[Column], n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|i| {
            cols.iter()
                .map(|c| i64::try_from(c.v[i]).expect("HNF entry overflow"))
                .collect()
        })
        .collect()
}

/// HNF of the lattice spanned by `gens` (each of length `n`), given a
/// positive integer `modulus` with `modulus · Z^n` inside the lattice.
pub fn hnf_mod(gens: &[Vec<i128>], n: usize, modulus: i128) -> Vec<Vec<i64>> {
    assert!(modulus > 0);
    let mut active: Vec<Column> = gens
        .iter()
        .map(|g| Column {
            v: g.iter().map(|e| e.rem_euclid(modulus)).collect(),
            combo: Vec::new(),
        })
        .collect();
    for j in 0..n {
        let mut v = vec![0i128; n];
        v[j] = modulus;
        active.push(Column { v, combo: Vec::new() });
    }
    to_rows(&eliminate(active, n, Some(modulus)), n)
}

/// HNF of the lattice spanned by `gens`, together with, for every HNF
/// column, its integer coefficients over `gens`.
pub fn hnf_with_transform(gens: &[Vec<i128>], n: usize) -> (Vec<Vec<i64>>, Vec<Vec<i128>>) {
    let m = gens.len();
    let active = gens
        .iter()
        .enumerate()
        .map(|(k, g)| {
            let mut combo = vec![0i128; m];
            combo[k] = 1;
            Column { v: g.clone(), combo }
        })
        .collect();
    let cols = eliminate(active, n, None);
    let combos = cols.iter().map(|c| c.combo.clone()).collect();
    (to_rows(&cols, n), combos)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hnf_of_simple_lattice() {
        // columns (2, 0), (1, 3): lattice of index 6
        let gens = vec![vec![2, 0], vec![1, 3]];
        let h = hnf_mod(&gens, 2, 6);
        assert_eq!(h, vec![vec![2, 1], vec![0, 3]]);
        let (h2, combos) = hnf_with_transform(&gens, 2);
        assert_eq!(h2, h);
        for (j, c) in combos.iter().enumerate() {
            for i in 0..2 {
                let v: i128 = c.iter().zip(&gens).map(|(a, g)| a * g[i]).sum();
                assert_eq!(v, h[i][j] as i128);
            }
        }
    }

    #[test]
    fn modular_and_plain_agree() {
        let gens = vec![vec![4, 6, 2], vec![0, 3, 9], vec![5, 1, 7], vec![2, 2, 2]];
        let (plain, _) = hnf_with_transform(&gens, 3);
        let det: i64 = (0..3).map(|i| plain[i][i]).product();
        let modular = hnf_mod(&gens, 3, det as i128);
        assert_eq!(plain, modular);
    }
}
