//! Dense univariate polynomials over a prime field and their factorization
//! (square-free decomposition, distinct-degree and Cantor–Zassenhaus splitting).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::mod_pow;

/// Polynomial over `F_p`, coefficients low degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolyFp {
    coeffs: Vec<u64>,
}

fn inv_mod(a: u64, p: u64) -> u64 {
    mod_pow(a, (p - 2) as u128, p)
}

impl PolyFp {
    pub fn new(mut coeffs: Vec<u64>, p: u64) -> Self {
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// Reduce an integer polynomial mod `p`.
    pub fn from_integers(coeffs: &[i64], p: u64) -> Self {
        let c = coeffs
            .iter()
            .map(|&c| (c as i128).rem_euclid(p as i128) as u64)
            .collect();
        Self::new(c, p)
    }

    pub fn one() -> Self {
        Self { coeffs: vec![1] }
    }

    pub fn x() -> Self {
        Self { coeffs: vec![0, 1] }
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    fn lead(&self) -> u64 {
        *self.coeffs.last().unwrap_or(&0)
    }

    pub fn monic(&self, p: u64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = inv_mod(self.lead(), p);
        Self::new(self.coeffs.iter().map(|&c| c * inv % p).collect(), p)
    }

    pub fn add(&self, other: &Self, p: u64) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                (a + b) % p
            })
            .collect();
        Self::new(c, p)
    }

    pub fn sub(&self, other: &Self, p: u64) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                (a + p - b) % p
            })
            .collect();
        Self::new(c, p)
    }

    pub fn mul(&self, other: &Self, p: u64) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self { coeffs: vec![] };
        }
        let mut c = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] = (c[i + j] + a * b) % p;
            }
        }
        Self::new(c, p)
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self, p: u64) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let mut rem = self.coeffs.clone();
        let dd = divisor.degree();
        let inv = inv_mod(divisor.lead(), p);
        if rem.len() < divisor.coeffs.len() {
            return (Self { coeffs: vec![] }, self.clone());
        }
        let mut quot = vec![0u64; rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd] * inv % p;
            quot[k] = c;
            if c != 0 {
                for (j, &d) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] = (rem[k + j] + p - c * d % p) % p;
                }
            }
        }
        rem.truncate(dd);
        (Self::new(quot, p), Self::new(rem, p))
    }

    pub fn rem(&self, divisor: &Self, p: u64) -> Self {
        self.div_rem(divisor, p).1
    }

    pub fn gcd(&self, other: &Self, p: u64) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b, p);
            a = b;
            b = r;
        }
        a.monic(p)
    }

    pub fn derivative(&self, p: u64) -> Self {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| (i as u64 % p) * c % p)
            .collect();
        Self::new(c, p)
    }

    pub fn pow_mod(&self, mut exp: u128, modulus: &Self, p: u64) -> Self {
        let mut base = self.rem(modulus, p);
        let mut acc = Self::one().rem(modulus, p);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base, p).rem(modulus, p);
            }
            base = base.mul(&base, p).rem(modulus, p);
            exp >>= 1;
        }
        acc
    }

    /// `f(x)^(1/p)` for a polynomial whose only nonzero terms have exponents
    /// divisible by `p` (over `F_p` the Frobenius fixes coefficients).
    fn pth_root(&self, p: u64) -> Self {
        let c = self.coeffs.iter().step_by(p as usize).copied().collect();
        Self::new(c, p)
    }
}

/// Square-free decomposition `f = prod g_i^{e_i}` of a monic polynomial.
pub fn squarefree_decomposition(f: &PolyFp, p: u64) -> Vec<(PolyFp, u32)> {
    let mut out = Vec::new();
    if f.degree() == 0 {
        return out;
    }
    let fp = f.derivative(p);
    if fp.is_zero() {
        for (g, e) in squarefree_decomposition(&f.pth_root(p), p) {
            out.push((g, e * p as u32));
        }
        return out;
    }
    let mut c = f.gcd(&fp, p);
    let mut w = f.div_rem(&c, p).0;
    let mut i = 1u32;
    while !w.is_one() {
        let y = w.gcd(&c, p);
        let fac = w.div_rem(&y, p).0.monic(p);
        if !fac.is_one() {
            out.push((fac, i));
        }
        i += 1;
        c = c.div_rem(&y, p).0;
        w = y;
    }
    if !c.is_one() {
        for (g, e) in squarefree_decomposition(&c.monic(p).pth_root(p), p) {
            out.push((g, e * p as u32));
        }
    }
    out
}

/// Distinct-degree factorization of a square-free monic polynomial.
fn distinct_degree(f: &PolyFp, p: u64) -> Vec<(PolyFp, usize)> {
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = PolyFp::x().rem(&rest, p);
    let mut d = 1;
    while rest.degree() >= 2 * d {
        h = h.pow_mod(p as u128, &rest, p);
        let g = rest.gcd(&h.sub(&PolyFp::x(), p), p);
        if !g.is_one() {
            rest = rest.div_rem(&g, p).0.monic(p);
            h = h.rem(&rest, p);
            out.push((g, d));
        }
        d += 1;
    }
    if rest.degree() > 0 {
        let deg = rest.degree();
        out.push((rest, deg));
    }
    out
}

/// Split a product of distinct irreducibles of common degree `d`.
fn equal_degree(f: &PolyFp, d: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<PolyFp> {
    if f.degree() == d {
        return vec![f.clone()];
    }
    loop {
        let a = PolyFp::new((0..f.degree()).map(|_| rng.random_range(0..p)).collect(), p);
        if a.degree() == 0 {
            continue;
        }
        let candidate = if p == 2 {
            // trace map a + a^2 + ... + a^(2^(d-1))
            let mut t = a.rem(f, p);
            let mut acc = t.clone();
            for _ in 1..d {
                t = t.mul(&t, p).rem(f, p);
                acc = acc.add(&t, p);
            }
            acc
        } else {
            let e = ((p as u128).pow(d as u32) - 1) / 2;
            a.pow_mod(e, f, p).sub(&PolyFp::one(), p)
        };
        let g = f.gcd(&candidate, p);
        if g.degree() > 0 && g.degree() < f.degree() {
            let h = f.div_rem(&g, p).0.monic(p);
            let mut out = equal_degree(&g, d, p, rng);
            out.extend(equal_degree(&h, d, p, rng));
            return out;
        }
    }
}

/// Complete factorization into monic irreducibles with multiplicities,
/// sorted by (degree, coefficients).
pub fn factor(f: &PolyFp, p: u64) -> Vec<(PolyFp, u32)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ p);
    let mut out = Vec::new();
    for (g, e) in squarefree_decomposition(&f.monic(p), p) {
        for (h, d) in distinct_degree(&g, p) {
            for irr in equal_degree(&h, d, p, &mut rng) {
                out.push((irr, e));
            }
        }
    }
    out.sort_by(|a, b| {
        a.0.degree()
            .cmp(&b.0.degree())
            .then_with(|| a.0.coeffs.cmp(&b.0.coeffs))
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn expand(factors: &[(PolyFp, u32)], p: u64) -> PolyFp {
        let mut acc = PolyFp::one();
        for (g, e) in factors {
            for _ in 0..*e {
                acc = acc.mul(g, p);
            }
        }
        acc
    }

    #[test]
    fn cyclotomic_five_mod_eleven_splits() {
        let f = PolyFp::from_integers(&[1, 1, 1, 1, 1], 11);
        let fac = factor(&f, 11);
        assert_eq!(fac.len(), 4);
        assert!(fac.iter().all(|(g, e)| g.degree() == 1 && *e == 1));
        assert_eq!(expand(&fac, 11), f);
    }

    #[test]
    fn inert_and_repeated() {
        // x^2 + 1 is irreducible mod 3
        let f = PolyFp::from_integers(&[1, 0, 1], 3);
        assert_eq!(factor(&f, 3), vec![(f.clone(), 1)]);
        // x^2 - x - 1 = (x - 3)^2 mod 5
        let f = PolyFp::from_integers(&[-1, -1, 1], 5);
        let fac = factor(&f, 5);
        assert_eq!(fac, vec![(PolyFp::from_integers(&[-3, 1], 5), 2)]);
        // char-2 p-th powers: (x^2 + x + 1)^2 = x^4 + x^2 + 1 mod 2
        let f = PolyFp::from_integers(&[1, 0, 1, 0, 1], 2);
        let fac = factor(&f, 2);
        assert_eq!(fac, vec![(PolyFp::from_integers(&[1, 1, 1], 2), 2)]);
    }

    #[test]
    fn mixed_degrees_mod_two() {
        // Phi_7 mod 2 = two cubics
        let f = PolyFp::from_integers(&[1, 1, 1, 1, 1, 1, 1], 2);
        let fac = factor(&f, 2);
        assert_eq!(fac.len(), 2);
        assert!(fac.iter().all(|(g, _)| g.degree() == 3));
        assert_eq!(expand(&fac, 2), f);
    }

    #[test]
    fn random_products_roundtrip() {
        for p in [2u64, 3, 7, 13, 101] {
            let f = PolyFp::from_integers(&[3, 0, 5, 1, 0, 2, 1], p).monic(p);
            let fac = factor(&f, p);
            assert_eq!(expand(&fac, p), f, "p = {p}");
        }
    }
}
