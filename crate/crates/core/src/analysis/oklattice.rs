//! Index codes from `O_K`-lattices `Λ = Ψ(G̃·O_K^m)` with the shaping
//! lattice `Ψ(G̃·I^m)`, `I = Π p_k`.

use serde::{Deserialize, Serialize};

use super::{bounds_for_norms, DistanceSource, GainBounds, SquaredDistance};
use crate::arith::det_bareiss;
use crate::codec::{as_prime, crt_idempotents, SideInfo, DEFAULT_MAX_POINTS};
use crate::error::{Error, Result};
use crate::lattice::{ball_volume, enumerate_short, gram_of_basis, min_pair_distance, sublattice_minimum};
use crate::numberfield::{AlgebraicInt, Ideal, NumberField};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OkPoint {
    /// Per message `k`: the residues of `v_1, …, v_m` modulo `p_k`, packed in
    /// radix `N(p_k)` (first component least significant).
    pub labels: Vec<u64>,
    /// `v ∈ O_K^m`; the point is `G̃·v`.
    pub coords: Vec<AlgebraicInt>,
    pub energy_numerator: i64,
    /// `Ψ(G̃·v)`, un-normalized, `m·n` reals.
    pub embedded: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OkGain {
    pub side_info: SideInfo,
    pub d0_sq: SquaredDistance,
    pub ds_sq: SquaredDistance,
    pub ds_source: DistanceSource,
    pub rate: f64,
    pub gamma_db: f64,
    pub bounds: Option<GainBounds>,
}

#[derive(Clone, Debug)]
pub struct OkLatticeCode {
    field: NumberField,
    m: usize,
    generator: Vec<Vec<AlgebraicInt>>,
    primes: Vec<Ideal>,
    /// Energy form on the `m·n` integer coordinates of `v`.
    gram: Vec<Vec<i64>>,
    points: Vec<OkPoint>,
}

fn block_diag(block: &[Vec<i64>], m: usize) -> Vec<Vec<i64>> {
    let n = block.len();
    let mut out = vec![vec![0i64; m * n]; m * n];
    for b in 0..m {
        for i in 0..n {
            for j in 0..n {
                out[b * n + i][b * n + j] = block[i][j];
            }
        }
    }
    out
}

fn flatten(v: &[AlgebraicInt]) -> Vec<i64> {
    v.iter().flat_map(|x| x.coords().iter().copied()).collect()
}

/// Build the finite code `Λ / Λ_s` with minimum-energy coset representatives.
pub fn build_oklattice_code(
    field: &NumberField,
    primes: &[Ideal],
    generator: &[Vec<AlgebraicInt>],
) -> Result<OkLatticeCode> {
    let m = generator.len();
    let n = field.degree();
    if m == 0
        || generator
            .iter()
            .any(|r| r.len() != m || r.iter().any(|x| x.degree() != n))
    {
        return Err(Error::InvalidArgument(
            "generator must be a square matrix over O_K".into(),
        ));
    }
    if primes.is_empty() {
        return Err(Error::InvalidDesign("at least one prime ideal is required".into()));
    }
    let primes = primes.iter().map(|p| as_prime(field, p)).collect::<Result<Vec<_>>>()?;
    crt_idempotents(field, &primes)?;
    let modulus = field.multiply_all(&primes)?;
    let total = (modulus.norm() as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
    if total > DEFAULT_MAX_POINTS as u128 {
        return Err(Error::TooLarge {
            size: total,
            cap: DEFAULT_MAX_POINTS,
        });
    }
    let total = total as usize;

    // integer matrix of v ↦ G̃·v on power-basis coordinates
    let dim = m * n;
    let mut a = vec![vec![0i64; dim]; dim];
    for (bi, row) in generator.iter().enumerate() {
        for (bj, g) in row.iter().enumerate() {
            let mm = field.multiplication_matrix(g);
            for i in 0..n {
                for j in 0..n {
                    a[bi * n + i][bj * n + j] = mm[i][j] as i64;
                }
            }
        }
    }
    let det = det_bareiss(a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect());
    if det == 0 {
        return Err(Error::InvalidDesign("generator matrix is singular".into()));
    }
    let gram = gram_of_basis(&block_diag(field.trace_form(), m), &a);

    let det_q = det_bareiss(gram.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect());
    let ball = ball_volume(dim);
    let radius = (2.0 * total as f64 * (det_q as f64).sqrt() / ball).powf(1.0 / dim as f64);
    let mut bound = (radius * radius).ceil().max(1.0) as i128;
    let coset_of = |z: &[i64]| -> usize {
        z.chunks(n).rev().fold(0usize, |acc, c| {
            acc * modulus.norm() as usize + modulus.residue_index(&AlgebraicInt::new(c.to_vec())) as usize
        })
    };
    let best = loop {
        let mut best: Vec<Option<(i128, Vec<i64>)>> = vec![None; total];
        let mut filled = 0usize;
        enumerate_short(&gram, bound, |z, v| match &mut best[coset_of(z)] {
            slot @ None => {
                *slot = Some((v, z.to_vec()));
                filled += 1;
            }
            Some((bv, bz)) => {
                if v < *bv || (v == *bv && z < bz.as_slice()) {
                    *bv = v;
                    *bz = z.to_vec();
                }
            }
        });
        if filled == total {
            break best;
        }
        bound = bound * 3 / 2 + 1;
    };

    let radices: Vec<u64> = primes.iter().map(|p| p.norm().pow(m as u32)).collect();
    let mut points: Vec<Option<OkPoint>> = vec![None; total];
    for slot in best {
        let (v, z) = slot.expect("every coset covered");
        let coords: Vec<AlgebraicInt> = z.chunks(n).map(|c| AlgebraicInt::new(c.to_vec())).collect();
        let labels: Vec<u64> = primes
            .iter()
            .map(|p| {
                coords
                    .iter()
                    .rev()
                    .fold(0u64, |acc, x| acc * p.norm() + p.residue_index(x))
            })
            .collect();
        let idx = labels
            .iter()
            .zip(&radices)
            .rev()
            .fold(0u64, |acc, (&l, &r)| acc * r + l) as usize;
        let embedded = generator
            .iter()
            .flat_map(|row| {
                let x = row
                    .iter()
                    .zip(&coords)
                    .fold(field.zero(), |acc, (g, c)| &acc + &field.mul(g, c));
                field.canonical_embed(&x)
            })
            .collect();
        points[idx] = Some(OkPoint {
            labels,
            coords,
            energy_numerator: i64::try_from(v).expect("energy fits i64"),
            embedded,
        });
    }
    Ok(OkLatticeCode {
        field: field.clone(),
        m,
        generator: generator.to_vec(),
        primes,
        gram,
        points: points.into_iter().map(|p| p.expect("bijective labels")).collect(),
    })
}

impl OkLatticeCode {
    pub fn field(&self) -> &NumberField {
        &self.field
    }

    /// Rank `m` over `O_K`.
    pub fn rank(&self) -> usize {
        self.m
    }

    pub fn generator(&self) -> &[Vec<AlgebraicInt>] {
        &self.generator
    }

    pub fn primes(&self) -> &[Ideal] {
        &self.primes
    }

    pub fn points(&self) -> &[OkPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `N(p_k)^m` per message.
    pub fn alphabet(&self) -> Vec<u64> {
        self.primes.iter().map(|p| p.norm().pow(self.m as u32)).collect()
    }

    fn check(&self, s: SideInfo) -> Result<()> {
        match s.indices().into_iter().find(|&k| k >= self.primes.len()) {
            Some(k) => Err(Error::IndexOutOfRange(k + 1)),
            None => Ok(()),
        }
    }

    /// `(1/n) Σ_{k∈S} log2 N(p_k)` bits per real dimension.
    pub fn rate(&self, s: SideInfo) -> Result<f64> {
        self.check(s)?;
        let bits: f64 = s.indices().iter().map(|&k| (self.primes[k].norm() as f64).log2()).sum();
        Ok(bits / self.field.degree() as f64)
    }

    pub fn subcode(&self, s: SideInfo, fixed: &[u64]) -> Result<Vec<usize>> {
        self.check(s)?;
        let idx = s.indices();
        if idx.iter().any(|&k| k >= fixed.len()) {
            return Err(Error::InvalidArgument("side-information value missing".into()));
        }
        Ok(self
            .points
            .iter()
            .enumerate()
            .filter(|(_, p)| idx.iter().all(|&k| p.labels[k] == fixed[k]))
            .map(|(i, _)| i)
            .collect())
    }

    /// Basis (in `v` coordinates) and Gram matrix of `(Π_{k∈S} p_k)^m`.
    fn side_lattice(&self, s: SideInfo) -> Result<(Vec<Vec<i64>>, Vec<Vec<i64>>)> {
        let chosen: Vec<Ideal> = s.indices().iter().map(|&k| self.primes[k].clone()).collect();
        let ideal = self.field.multiply_all(&chosen)?;
        let basis = block_diag(ideal.hnf(), self.m);
        let gram = gram_of_basis(&self.gram, &basis);
        Ok((basis, gram))
    }

    fn lattice_min(gram: &[Vec<i64>]) -> i128 {
        let upper = (0..gram.len()).map(|i| gram[i][i] as i128).min().unwrap_or(0);
        sublattice_minimum(gram, upper, |_| true).expect("nonzero lattice").0
    }

    /// Minimum squared distance after `S` is revealed with value zero.
    pub fn min_distance(&self, s: SideInfo) -> Result<SquaredDistance> {
        let idx = self.subcode(s, &vec![0; self.primes.len()])?;
        if idx.len() < 2 {
            return Err(Error::UndefinedDistance);
        }
        let (basis, gram) = self.side_lattice(s)?;
        let pts: Vec<Vec<i64>> = idx.iter().map(|&i| flatten(&self.points[i].coords)).collect();
        let v = min_pair_distance(&pts, &basis, &gram, Self::lattice_min(&gram)).expect("two points");
        Ok(SquaredDistance {
            numerator: v,
            denominator: self.field.energy_denominator(),
        })
    }

    pub fn side_info_gain(&self, s: SideInfo) -> Result<OkGain> {
        if s.is_empty() {
            return Err(Error::EmptySideInfo);
        }
        let d0 = self.min_distance(SideInfo::EMPTY)?;
        let (ds, source) = match self.min_distance(s) {
            Ok(d) => (d, DistanceSource::Subcode),
            Err(Error::UndefinedDistance) => {
                let (_, gram) = self.side_lattice(s)?;
                let d = SquaredDistance {
                    numerator: Self::lattice_min(&gram),
                    denominator: self.field.energy_denominator(),
                };
                (d, DistanceSource::IdealLattice)
            }
            Err(e) => return Err(e),
        };
        let rate = self.rate(s)?;
        let norms: Vec<u64> = s.indices().iter().map(|&k| self.primes[k].norm()).collect();
        Ok(OkGain {
            side_info: s,
            d0_sq: d0,
            ds_sq: ds,
            ds_source: source,
            rate,
            gamma_db: super::gain_db(d0, ds, rate),
            bounds: bounds_for_norms(&self.field, &norms).ok(),
        })
    }

    /// `v` flattened to `m·n` integers, for point `i`.
    pub fn flat_coords(&self, i: usize) -> Vec<i64> {
        flatten(&self.points[i].coords)
    }

    /// Exact energy numerator of an arbitrary `v`.
    pub fn energy_numerator(&self, v: &[i64]) -> i128 {
        crate::numberfield::quadratic_form(&self.gram, v)
    }
}
