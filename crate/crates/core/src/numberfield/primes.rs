//! Decomposition of rational primes.
//!
//! Classification uses the closed-form rules of each family (Kronecker symbol
//! for quadratic fields, multiplicative orders for the cyclotomic families).
//! Prime ideals come from factoring the minimal polynomial modulo `p`
//! (Dedekind–Kummer), valid because every supported ring is `Z[α]`.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{AlgebraicInt, FieldFamily, Ideal, NumberField, PrimeInfo};
use crate::arith::{self, kronecker_symbol};
use crate::error::{Error, Result};
use crate::polyfp::{self, PolyFp};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplittingKind {
    Ramified,
    /// Splits completely into `n` ideals of norm `p`.
    Split,
    Inert,
    /// Unramified, neither inert nor completely split.
    Partial,
}

/// How `p·O_K` factors: `g` ideals, each with ramification `e` and inertia `f`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Splitting {
    pub kind: SplittingKind,
    pub e: u32,
    pub f: u32,
    pub g: u32,
}

impl Splitting {
    fn from_efg(e: u32, f: u32, g: u32, n: usize) -> Self {
        let kind = if e > 1 {
            SplittingKind::Ramified
        } else if g as usize == n {
            SplittingKind::Split
        } else if g == 1 {
            SplittingKind::Inert
        } else {
            SplittingKind::Partial
        };
        Self { kind, e, f, g }
    }
}

impl fmt::Display for Splitting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            SplittingKind::Ramified => "ramified",
            SplittingKind::Split => "split",
            SplittingKind::Inert => "inert",
            SplittingKind::Partial => "partial",
        };
        write!(f, "{kind} (e={}, f={}, g={})", self.e, self.f, self.g)
    }
}

fn require_prime(p: u64) -> Result<()> {
    if !arith::is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    Ok(())
}

impl NumberField {
    /// Decomposition type of `p` in `O_K`.
    pub fn classify_prime(&self, p: u64) -> Result<Splitting> {
        require_prime(p)?;
        let n = self.degree;
        let s = match self.family {
            FieldFamily::Quadratic { .. } => {
                let disc = i64::try_from(self.discriminant).expect("discriminant fits i64");
                match kronecker_symbol(disc, p)? {
                    0 => Splitting::from_efg(2, 1, 1, n),
                    1 => Splitting::from_efg(1, 1, 2, n),
                    _ => Splitting::from_efg(1, 2, 1, n),
                }
            }
            FieldFamily::Cyclotomic { m } => {
                let mut rest = m;
                let mut pk = 1u64;
                while rest % p == 0 {
                    rest /= p;
                    pk *= p;
                }
                let e = arith::euler_phi(pk) as u32;
                let f = arith::multiplicative_order(p, rest) as u32;
                let g = (arith::euler_phi(rest) as u32) / f;
                Splitting::from_efg(e, f, g, n)
            }
            FieldFamily::MaximalReal { m } => {
                if p == m {
                    Splitting::from_efg(n as u32, 1, 1, n)
                } else {
                    // order of p in (Z/m)^* / {±1}
                    let mut x = p % m;
                    let mut f = 1u32;
                    while x != 1 && x != m - 1 {
                        x = x * (p % m) % m;
                        f += 1;
                    }
                    Splitting::from_efg(1, f, n as u32 / f, n)
                }
            }
        };
        Ok(s)
    }

    /// All prime ideals above `p` via factorization of the minimal polynomial
    /// mod `p`, ramified ones included.
    pub(crate) fn factor_prime(&self, p: u64) -> Vec<Ideal> {
        let f = PolyFp::from_integers(&self.min_poly, p);
        let mut out: Vec<(i64, Ideal)> = polyfp::factor(&f, p)
            .into_iter()
            .map(|(g, e)| {
                // an inert factor is the whole minimal polynomial: the ideal is (p)
                let mut coords = vec![0i64; self.degree];
                if g.degree() < self.degree {
                    for (c, &v) in coords.iter_mut().zip(g.coeffs()) {
                        *c = v as i64;
                    }
                }
                let gen = AlgebraicInt::new(coords);
                let sort_key = self.quadratic_display_offset(&gen, p).unwrap_or(0);
                let info = PrimeInfo {
                    p,
                    e,
                    f: g.degree() as u32,
                };
                let ideal = self
                    .two_element_ideal(p as i64, &gen)
                    .expect("prime ideal from factor")
                    .with_prime(info);
                (sort_key, ideal)
            })
            .collect();
        out.sort_by_key(|(k, _)| *k);
        out.into_iter().map(|(_, i)| i).collect()
    }

    /// For a quadratic field and a linear factor `x - r`, the `a` in
    /// `[0, p)` such that the ideal equals `(p, a + √d)` (odd `p`).
    fn quadratic_display_offset(&self, gen: &AlgebraicInt, p: u64) -> Option<i64> {
        let FieldFamily::Quadratic { d } = self.family else {
            return None;
        };
        if p == 2 || gen.coords()[1] != 1 {
            return None;
        }
        let r = -gen.coords()[0];
        let p = p as i64;
        let a = if d.rem_euclid(4) == 1 {
            // (p, w - r) = (p, √d + 1 - 2r)
            (1 - 2 * r).rem_euclid(p)
        } else {
            (-r).rem_euclid(p)
        };
        Some(a)
    }

    /// Prime ideals above `p`, each annotated with `(e, f)` and a
    /// two-element presentation. Quadratic ideals come in the `(p, a + √d)` order of increasing `a`.
    pub fn prime_ideals_above(&self, p: u64) -> Result<Vec<Ideal>> {
        require_prime(p)?;
        match self.family {
            FieldFamily::Cyclotomic { m } | FieldFamily::MaximalReal { m } if m % p == 0 => {
                Err(Error::RamifiedUnsupported { p, m })
            }
            _ => Ok(self.factor_prime(p)),
        }
    }

    /// Display form of a prime ideal's two-element presentation, using
    /// `(p, a + √d)` for odd primes in quadratic fields.
    pub fn format_ideal(&self, ideal: &Ideal) -> String {
        match ideal.generators() {
            Some((p, g)) => {
                if let (FieldFamily::Quadratic { d }, Some(a)) =
                    (self.family, self.quadratic_display_offset(g, p as u64))
                {
                    return format!("({p}, {a} + sqrt({d}))");
                }
                format!("({p}, {})", self.format(g))
            }
            None => format!("ideal of norm {}", ideal.norm()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_splittings() {
        let k = NumberField::quadratic(5).unwrap();
        assert_eq!(k.classify_prime(11).unwrap().kind, SplittingKind::Split);
        let k = NumberField::cyclotomic(5).unwrap();
        let s = k.classify_prime(11).unwrap();
        assert_eq!((s.kind, s.g), (SplittingKind::Split, 4));
        let k = NumberField::maximal_real(7).unwrap();
        let s = k.classify_prime(13).unwrap();
        assert_eq!((s.kind, s.g), (SplittingKind::Split, 3));
        assert!(k.classify_prime(15).is_err());
    }

    #[test]
    fn example2_ideals() {
        let k = NumberField::quadratic(-5).unwrap();
        let ideals = k.prime_ideals_above(7).unwrap();
        assert_eq!(ideals.len(), 2);
        assert!(ideals.iter().all(|i| i.norm() == 7));
        assert_eq!(k.format_ideal(&ideals[0]), "(7, 3 + sqrt(-5))");
        assert_eq!(k.format_ideal(&ideals[1]), "(7, 4 + sqrt(-5))");
        let expect = k.two_element_ideal(7, &k.element(vec![3, 1]).unwrap()).unwrap();
        assert_eq!(ideals[0], expect);
        let prod = k.multiply_ideals(&ideals[0], &ideals[1]).unwrap();
        assert_eq!(prod, k.principal_ideal(&k.from_int(7)).unwrap());
        assert!(k.is_coprime(&ideals[0], &ideals[1]).unwrap());
        assert!(!k.is_coprime(&ideals[0], &ideals[0]).unwrap());
    }

    #[test]
    fn example3_principal_prime() {
        let k = NumberField::quadratic(-7).unwrap();
        let ideals = k.prime_ideals_above(11).unwrap();
        assert_eq!(ideals.len(), 2);
        assert!(ideals.iter().all(|i| i.norm() == 11));
        let phi2 = k.principal_ideal(&k.element(vec![1, 2]).unwrap()).unwrap();
        assert!(ideals.contains(&phi2));
    }

    #[test]
    fn ramified_cyclotomic_rejected() {
        let k = NumberField::cyclotomic(5).unwrap();
        assert!(matches!(
            k.prime_ideals_above(5),
            Err(Error::RamifiedUnsupported { p: 5, m: 5 })
        ));
        assert_eq!(k.classify_prime(5).unwrap().kind, SplittingKind::Ramified);
        let ideals = k.prime_ideals_above(11).unwrap();
        assert_eq!(ideals.len(), 4);
        assert!(ideals.iter().all(|i| i.norm() == 11));
    }

    #[test]
    fn quadratic_ramified_prime() {
        let k = NumberField::quadratic(5).unwrap();
        let ideals = k.prime_ideals_above(5).unwrap();
        assert_eq!(ideals.len(), 1);
        assert_eq!(ideals[0].prime_info().unwrap().e, 2);
        let sqrt5 = k.principal_ideal(&k.element(vec![-1, 2]).unwrap()).unwrap();
        assert_eq!(ideals[0], sqrt5);
    }
}
