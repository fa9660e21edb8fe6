use serde::{Deserialize, Serialize};

use super::hnf::{hnf_mod, hnf_with_transform};
use super::{AlgebraicInt, FieldFamily, NumberField};
use crate::arith;
use crate::error::{Error, Result};

/// Residue characteristic and splitting data of a prime ideal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeInfo {
    pub p: u64,
    /// Ramification index.
    pub e: u32,
    /// Inertial degree.
    pub f: u32,
}

/// A nonzero ideal of `O_K`, stored as the column HNF of a Z-basis over the
/// power basis. Equality compares the HNF only.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Ideal {
    family: FieldFamily,
    hnf: Vec<Vec<i64>>,
    norm: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    generators: Option<(i64, AlgebraicInt)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    prime: Option<PrimeInfo>,
}

impl PartialEq for Ideal {
    fn eq(&self, other: &Self) -> bool {
        self.family == other.family && self.hnf == other.hnf
    }
}

impl Eq for Ideal {}

impl Ideal {
    pub(crate) fn from_hnf(family: FieldFamily, hnf: Vec<Vec<i64>>) -> Self {
        let norm = (0..hnf.len()).map(|i| hnf[i][i] as u64).product();
        Self {
            family,
            hnf,
            norm,
            generators: None,
            prime: None,
        }
    }

    pub(crate) fn with_generators(mut self, p: i64, g: AlgebraicInt) -> Self {
        self.generators = Some((p, g));
        self
    }

    pub(crate) fn with_prime(mut self, info: PrimeInfo) -> Self {
        self.prime = Some(info);
        self
    }

    pub fn family(&self) -> FieldFamily {
        self.family
    }

    /// Row-major HNF; columns are the Z-basis.
    pub fn hnf(&self) -> &[Vec<i64>] {
        &self.hnf
    }

    /// `N(I) = |O_K / I|`, the product of the HNF diagonal.
    pub fn norm(&self) -> u64 {
        self.norm
    }

    pub fn degree(&self) -> usize {
        self.hnf.len()
    }

    /// Two-element presentation `(p, g)` when known.
    pub fn generators(&self) -> Option<(i64, &AlgebraicInt)> {
        self.generators.as_ref().map(|(p, g)| (*p, g))
    }

    pub fn prime_info(&self) -> Option<PrimeInfo> {
        self.prime
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.norm == 1
    }

    /// Smallest positive rational integer in the ideal.
    pub fn min_integer(&self) -> i64 {
        self.hnf[0][0]
    }

    /// The Z-basis (HNF columns).
    pub fn basis(&self) -> Vec<AlgebraicInt> {
        let n = self.degree();
        (0..n)
            .map(|j| AlgebraicInt::new((0..n).map(|i| self.hnf[i][j]).collect()))
            .collect()
    }

    /// Canonical residue of `x` modulo the ideal: each coordinate `i` lands in `[0, H[i][i])`.
    pub fn reduce(&self, x: &AlgebraicInt) -> AlgebraicInt {
        let n = self.degree();
        let mut v: Vec<i128> = x.coords().iter().map(|&c| c as i128).collect();
        for i in (0..n).rev() {
            let q = v[i].div_euclid(self.hnf[i][i] as i128);
            if q != 0 {
                for (r, vr) in v.iter_mut().enumerate().take(i + 1) {
                    *vr -= q * self.hnf[r][i] as i128;
                }
            }
        }
        AlgebraicInt::new(v.into_iter().map(|c| c as i64).collect())
    }

    pub fn contains(&self, x: &AlgebraicInt) -> bool {
        self.reduce(x).is_zero()
    }

    /// Mixed-radix index in `[0, N(I))` of the residue class of `x`.
    pub fn residue_index(&self, x: &AlgebraicInt) -> u64 {
        let r = self.reduce(x);
        let mut idx = 0u64;
        let mut radix = 1u64;
        for (i, &c) in r.coords().iter().enumerate() {
            idx += c as u64 * radix;
            radix *= self.hnf[i][i] as u64;
        }
        idx
    }

    /// Canonical residue with the given mixed-radix index.
    pub fn residue_from_index(&self, mut idx: u64) -> AlgebraicInt {
        let coords = (0..self.degree())
            .map(|i| {
                let d = self.hnf[i][i] as u64;
                let c = idx % d;
                idx /= d;
                c as i64
            })
            .collect();
        AlgebraicInt::new(coords)
    }
}

fn to_wide(x: &AlgebraicInt) -> Vec<i128> {
    x.coords().iter().map(|&c| c as i128).collect()
}

impl NumberField {
    fn check_family(&self, ideal: &Ideal) -> Result<()> {
        if ideal.family != self.family {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    /// The unit ideal `O_K`.
    pub fn unit_ideal(&self) -> Ideal {
        let n = self.degree;
        let hnf = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        Ideal::from_hnf(self.family, hnf)
    }

    /// The ideal generated by the given elements.
    pub fn ideal_from_generators(&self, gens: &[AlgebraicInt]) -> Result<Ideal> {
        let modulus = gens
            .iter()
            .map(|g| self.norm(g).abs())
            .filter(|&v| v != 0)
            .min()
            .ok_or_else(|| Error::InvalidArgument("the zero ideal is not supported".into()))?;
        let n = self.degree;
        let cols: Vec<Vec<i128>> = gens
            .iter()
            .flat_map(|g| (0..n).map(move |j| (g, j)))
            .map(|(g, j)| to_wide(&self.mul(g, &AlgebraicInt::basis(n, j))))
            .collect();
        Ok(Ideal::from_hnf(self.family, hnf_mod(&cols, n, modulus)))
    }

    /// Principal ideal `g·O_K`.
    pub fn principal_ideal(&self, g: &AlgebraicInt) -> Result<Ideal> {
        self.ideal_from_generators(std::slice::from_ref(g))
    }

    /// Ideal given by an explicit two-element presentation `(p, g)`.
    pub fn two_element_ideal(&self, p: i64, g: &AlgebraicInt) -> Result<Ideal> {
        Ok(self
            .ideal_from_generators(&[self.from_int(p), g.clone()])?
            .with_generators(p, g.clone()))
    }

    /// `I · J`, with `N(IJ) = N(I) N(J)`.
    pub fn multiply_ideals(&self, a: &Ideal, b: &Ideal) -> Result<Ideal> {
        self.check_family(a)?;
        self.check_family(b)?;
        a.norm()
            .checked_mul(b.norm())
            .filter(|&v| v <= i64::MAX as u64)
            .ok_or_else(|| Error::InvalidArgument("ideal norm exceeds 2^63".into()))?;
        let modulus = a.min_integer() as i128 * b.min_integer() as i128;
        let cols: Vec<Vec<i128>> = a
            .basis()
            .iter()
            .flat_map(|x| b.basis().into_iter().map(move |y| (x.clone(), y)))
            .map(|(x, y)| to_wide(&self.mul(&x, &y)))
            .collect();
        Ok(Ideal::from_hnf(self.family, hnf_mod(&cols, self.degree, modulus)))
    }

    pub fn multiply_all(&self, ideals: &[Ideal]) -> Result<Ideal> {
        ideals
            .iter()
            .try_fold(self.unit_ideal(), |acc, i| self.multiply_ideals(&acc, i))
    }

    /// `I + J`.
    pub fn add_ideals(&self, a: &Ideal, b: &Ideal) -> Result<Ideal> {
        self.check_family(a)?;
        self.check_family(b)?;
        let modulus = arith::gcd(a.min_integer() as i128, b.min_integer() as i128);
        let cols: Vec<Vec<i128>> = a.basis().iter().chain(&b.basis()).map(to_wide).collect();
        Ok(Ideal::from_hnf(self.family, hnf_mod(&cols, self.degree, modulus)))
    }

    /// True iff `I + J = O_K`.
    pub fn is_coprime(&self, a: &Ideal, b: &Ideal) -> Result<bool> {
        Ok(self.add_ideals(a, b)?.is_unit_ideal())
    }

    /// Solve `1 = u + v` with `u ∈ a`, `v ∈ b`; returns `u`.
    pub(crate) fn bezout_split(&self, a: &Ideal, b: &Ideal) -> Result<AlgebraicInt> {
        let gens: Vec<Vec<i128>> = a.basis().iter().chain(&b.basis()).map(to_wide).collect();
        let (h, combos) = hnf_with_transform(&gens, self.degree);
        if (0..self.degree).any(|i| h[i][i] != 1) {
            return Err(Error::InvalidDesign("ideals are not coprime".into()));
        }
        // column 0 of the unit-lattice HNF is the element 1
        let coeffs = &combos[0];
        let n = self.degree;
        let mut u = vec![0i128; n];
        for (k, col) in a.basis().iter().enumerate() {
            for (ui, &c) in u.iter_mut().zip(col.coords()) {
                *ui += coeffs[k] * c as i128;
            }
        }
        let u = AlgebraicInt::new(
            u.into_iter()
                .map(|c| i64::try_from(c).expect("coordinate overflow"))
                .collect(),
        );
        Ok(u)
    }
}
