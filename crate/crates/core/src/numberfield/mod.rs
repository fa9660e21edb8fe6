//! Exact arithmetic in the rings of integers of quadratic fields, cyclotomic
//! fields and maximal real subfields of prime cyclotomic fields.
//!
//! Every supported ring of integers is monogenic, `O_K = Z[α]`, so elements
//! are integer coordinate vectors over the power basis `1, α, …, α^(n-1)` and
//! multiplication is polynomial multiplication reduced by the minimal
//! polynomial of `α`.

mod element;
mod hnf;
mod ideal;
mod primes;

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::{self, det_bareiss};
use crate::error::{Error, Result};

pub use element::AlgebraicInt;
pub use ideal::{Ideal, PrimeInfo};
pub use primes::{Splitting, SplittingKind};

/// The three supported field families and their defining parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FieldFamily {
    /// `Q(√d)` for square-free `d ∉ {0, 1}`.
    Quadratic { d: i64 },
    /// `Q(ζ_m)` with `m ≥ 3`, `m ≢ 2 (mod 4)`.
    Cyclotomic { m: u64 },
    /// `Q(ζ_m + ζ_m^{-1})` with `m` an odd prime `≥ 5`.
    MaximalReal { m: u64 },
}

impl fmt::Display for FieldFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldFamily::Quadratic { d } => write!(f, "Q(sqrt({d}))"),
            FieldFamily::Cyclotomic { m } => write!(f, "Q(zeta_{m})"),
            FieldFamily::MaximalReal { m } => write!(f, "Q(zeta_{m} + zeta_{m}^-1)"),
        }
    }
}

/// A number field together with its ring of integers `Z[α]`.
///
/// Embeddings are ordered real first, then one representative per complex
/// conjugate pair (by increasing exponent for cyclotomic fields), then the
/// conjugates of those representatives in the same order.
#[derive(Clone, Debug)]
pub struct NumberField {
    family: FieldFamily,
    degree: usize,
    r1: usize,
    r2: usize,
    min_poly: Vec<i64>,
    roots: Vec<Complex64>,
    conj: Vec<AlgebraicInt>,
    trace_form: Vec<Vec<i64>>,
    discriminant: i128,
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.family == other.family
    }
}

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact division by a monic polynomial that is known to divide.
fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut q = vec![0i64; num.len() - dd];
    for k in (0..q.len()).rev() {
        let c = rem[k + dd];
        q[k] = c;
        for (j, &d) in den.iter().enumerate() {
            rem[k + j] -= c * d;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

/// Integer coefficients of the `m`-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(m: u64) -> Vec<i64> {
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in 1..m {
        if m.is_multiple_of(d) {
            num = poly_div_exact(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

/// Minimal polynomial of `ζ_m + ζ_m^{-1}` for odd prime `m`, from
/// `ζ^{-h} Φ_m(ζ) = 1 + Σ_{k=1}^{h} (ζ^k + ζ^{-k})` with `ζ^k + ζ^{-k} = D_k(θ)`.
fn maximal_real_polynomial(m: u64) -> Vec<i64> {
    let h = ((m - 1) / 2) as usize;
    // D_0 = 2, D_1 = x, D_{k+1} = x D_k - D_{k-1}
    let mut d_prev = vec![2i64];
    let mut d_cur = vec![0i64, 1];
    let mut acc = vec![0i64; h + 1];
    acc[0] = 1;
    for k in 1..=h {
        for (i, &c) in d_cur.iter().enumerate() {
            acc[i] += c;
        }
        if k < h {
            let mut next = poly_mul(&[0, 1], &d_cur);
            for (i, &c) in d_prev.iter().enumerate() {
                next[i] -= c;
            }
            d_prev = std::mem::replace(&mut d_cur, next);
        }
    }
    acc
}

impl NumberField {
    pub fn new(family: FieldFamily) -> Result<Self> {
        match family {
            FieldFamily::Quadratic { d } => Self::quadratic(d),
            FieldFamily::Cyclotomic { m } => Self::cyclotomic(m),
            FieldFamily::MaximalReal { m } => Self::maximal_real(m),
        }
    }

    /// `Q(√d)` with integral basis `{1, √d}` or `{1, (1+√d)/2}`.
    pub fn quadratic(d: i64) -> Result<Self> {
        if d == 0 || d == 1 || !arith::is_squarefree(d) {
            return Err(Error::InvalidArgument(format!(
                "quadratic parameter d = {d} must be square-free and not 0 or 1"
            )));
        }
        let one_mod_four = d.rem_euclid(4) == 1;
        let min_poly = if one_mod_four {
            vec![-(d - 1) / 4, -1, 1]
        } else {
            vec![-d, 0, 1]
        };
        let sqrt_d = Complex64::new(d as f64, 0.0).sqrt();
        let (plus, minus) = if one_mod_four {
            ((1.0 + sqrt_d) / 2.0, (1.0 - sqrt_d) / 2.0)
        } else {
            (sqrt_d, -sqrt_d)
        };
        let (r1, r2) = if d > 0 { (2, 0) } else { (0, 1) };
        let conj = if d > 0 {
            vec![AlgebraicInt::new(vec![1, 0]), AlgebraicInt::new(vec![0, 1])]
        } else if one_mod_four {
            vec![AlgebraicInt::new(vec![1, 0]), AlgebraicInt::new(vec![1, -1])]
        } else {
            vec![AlgebraicInt::new(vec![1, 0]), AlgebraicInt::new(vec![0, -1])]
        };
        Ok(Self::assemble(
            FieldFamily::Quadratic { d },
            min_poly,
            vec![plus, minus],
            r1,
            r2,
            Some(conj),
        ))
    }

    /// `Q(ζ_m)` with ring of integers `Z[ζ_m]`.
    pub fn cyclotomic(m: u64) -> Result<Self> {
        if m < 3 || m % 4 == 2 {
            return Err(Error::InvalidArgument(format!(
                "cyclotomic conductor m = {m} must be >= 3 and not 2 mod 4"
            )));
        }
        let min_poly = cyclotomic_polynomial(m);
        let n = min_poly.len() - 1;
        let zeta = |k: u64| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / m as f64);
        let primary: Vec<u64> = (1..m)
            .filter(|&k| 2 * k < m && arith::gcd(k as i128, m as i128) == 1)
            .collect();
        let mut roots: Vec<Complex64> = primary.iter().map(|&k| zeta(k)).collect();
        roots.extend(primary.iter().map(|&k| zeta(m - k)));
        // conj(ζ^j) = ζ^{m-j}
        let conj = (0..n)
            .map(|j| {
                let mut x = vec![0i64; m as usize];
                x[(m as usize - j) % m as usize] = 1;
                AlgebraicInt::new(reduce_poly(&x, &min_poly))
            })
            .collect();
        Ok(Self::assemble(
            FieldFamily::Cyclotomic { m },
            min_poly,
            roots,
            0,
            n / 2,
            Some(conj),
        ))
    }

    /// `Q(ζ_m + ζ_m^{-1})` for an odd prime `m ≥ 5`, ring of integers `Z[ζ_m + ζ_m^{-1}]`.
    pub fn maximal_real(m: u64) -> Result<Self> {
        if m < 5 {
            return Err(Error::InvalidArgument(format!(
                "maximal real subfield requires m >= 5, got {m}"
            )));
        }
        if !arith::is_prime(m) {
            return Err(Error::Unsupported(format!(
                "maximal real subfields are only supported for prime m, got {m}"
            )));
        }
        let min_poly = maximal_real_polynomial(m);
        let h = (m - 1) / 2;
        let roots = (1..=h)
            .map(|k| Complex64::new(2.0 * (2.0 * PI * k as f64 / m as f64).cos(), 0.0))
            .collect();
        Ok(Self::assemble(
            FieldFamily::MaximalReal { m },
            min_poly,
            roots,
            h as usize,
            0,
            None,
        ))
    }

    fn assemble(
        family: FieldFamily,
        min_poly: Vec<i64>,
        roots: Vec<Complex64>,
        r1: usize,
        r2: usize,
        conj: Option<Vec<AlgebraicInt>>,
    ) -> Self {
        let n = min_poly.len() - 1;
        let conj = conj.unwrap_or_else(|| (0..n).map(|j| AlgebraicInt::basis(n, j)).collect());
        let mut field = Self {
            family,
            degree: n,
            r1,
            r2,
            min_poly,
            roots,
            conj,
            trace_form: Vec::new(),
            discriminant: 0,
        };
        let basis: Vec<AlgebraicInt> = (0..n).map(|j| AlgebraicInt::basis(n, j)).collect();
        let tr_pow: Vec<Vec<i128>> = basis
            .iter()
            .map(|a| basis.iter().map(|b| field.trace(&field.mul(a, b))).collect())
            .collect();
        field.discriminant = det_bareiss(tr_pow);
        field.trace_form = basis
            .iter()
            .map(|a| {
                basis
                    .iter()
                    .enumerate()
                    .map(|(j, _)| field.trace(&field.mul(a, &field.conj[j])) as i64)
                    .collect()
            })
            .collect();
        field
    }

    pub fn family(&self) -> FieldFamily {
        self.family
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `(r1, r2)`.
    pub fn signature(&self) -> (usize, usize) {
        (self.r1, self.r2)
    }

    pub fn discriminant(&self) -> i128 {
        self.discriminant
    }

    pub fn is_totally_real(&self) -> bool {
        self.r2 == 0
    }

    pub fn is_totally_complex(&self) -> bool {
        self.r1 == 0
    }

    /// Monic minimal polynomial of the power-basis generator, low degree first.
    pub fn min_poly(&self) -> &[i64] {
        &self.min_poly
    }

    /// Human-readable integral basis.
    pub fn integral_basis(&self) -> Vec<String> {
        (0..self.degree)
            .map(|j| self.format(&AlgebraicInt::basis(self.degree, j)))
            .collect()
    }

    /// Symbol printed for the power-basis generator.
    pub fn generator_symbol(&self) -> String {
        match self.family {
            FieldFamily::Quadratic { d } if d.rem_euclid(4) == 1 => format!("(1+sqrt({d}))/2"),
            FieldFamily::Quadratic { d } => format!("sqrt({d})"),
            FieldFamily::Cyclotomic { m } => format!("z{m}"),
            FieldFamily::MaximalReal { m } => format!("t{m}"),
        }
    }

    /// Integer Gram matrix `Tr(α^i · conj(α^j))` of the energy form.
    pub fn trace_form(&self) -> &[Vec<i64>] {
        &self.trace_form
    }

    /// `‖Ψ(x)‖² = xᵀ G x / energy_denominator()`: complex embeddings are
    /// counted once per conjugate pair, so totally complex fields halve the trace form.
    pub fn energy_denominator(&self) -> i64 {
        if self.r2 > 0 {
            2
        } else {
            1
        }
    }

    pub fn zero(&self) -> AlgebraicInt {
        AlgebraicInt::zero(self.degree)
    }

    pub fn one(&self) -> AlgebraicInt {
        AlgebraicInt::from_int(self.degree, 1)
    }

    pub fn from_int(&self, k: i64) -> AlgebraicInt {
        AlgebraicInt::from_int(self.degree, k)
    }

    /// The power-basis generator `α`.
    pub fn generator(&self) -> AlgebraicInt {
        AlgebraicInt::basis(self.degree, 1.min(self.degree - 1))
    }

    pub fn element(&self, coords: Vec<i64>) -> Result<AlgebraicInt> {
        if coords.len() != self.degree {
            return Err(Error::InvalidArgument(format!(
                "expected {} coordinates, got {}",
                self.degree,
                coords.len()
            )));
        }
        Ok(AlgebraicInt::new(coords))
    }

    pub fn mul(&self, a: &AlgebraicInt, b: &AlgebraicInt) -> AlgebraicInt {
        let mut prod = vec![0i128; 2 * self.degree - 1];
        for (i, &x) in a.coords().iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coords().iter().enumerate() {
                prod[i + j] += x as i128 * y as i128;
            }
        }
        let n = self.degree;
        for k in (n..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            for j in 0..n {
                prod[k - n + j] -= c * self.min_poly[j] as i128;
            }
            prod[k] = 0;
        }
        AlgebraicInt::new(
            prod[..n]
                .iter()
                .map(|&c| i64::try_from(c).expect("coordinate overflow"))
                .collect(),
        )
    }

    pub fn pow(&self, a: &AlgebraicInt, e: u32) -> AlgebraicInt {
        (0..e).fold(self.one(), |acc, _| self.mul(&acc, a))
    }

    /// Complex conjugation (identity on totally real fields).
    pub fn conj(&self, a: &AlgebraicInt) -> AlgebraicInt {
        let mut out = vec![0i64; self.degree];
        for (j, &c) in a.coords().iter().enumerate() {
            for (o, &v) in out.iter_mut().zip(self.conj[j].coords()) {
                *o += c * v;
            }
        }
        AlgebraicInt::new(out)
    }

    /// Matrix of multiplication by `a` on the power basis; column `j` is `a·α^j`.
    pub fn multiplication_matrix(&self, a: &AlgebraicInt) -> Vec<Vec<i128>> {
        let cols: Vec<AlgebraicInt> = (0..self.degree)
            .map(|j| self.mul(a, &AlgebraicInt::basis(self.degree, j)))
            .collect();
        (0..self.degree)
            .map(|i| cols.iter().map(|c| c.coords()[i] as i128).collect())
            .collect()
    }

    pub fn trace(&self, a: &AlgebraicInt) -> i128 {
        (0..self.degree)
            .map(|j| self.mul(a, &AlgebraicInt::basis(self.degree, j)).coords()[j] as i128)
            .sum()
    }

    /// Exact field norm, the determinant of the multiplication matrix.
    pub fn norm(&self, a: &AlgebraicInt) -> i128 {
        det_bareiss(self.multiplication_matrix(a))
    }

    /// All `n` embeddings `σ_i(a)` as complex numbers.
    pub fn embeddings(&self, a: &AlgebraicInt) -> Vec<Complex64> {
        self.roots
            .iter()
            .map(|&r| {
                a.coords()
                    .iter()
                    .rev()
                    .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * r + c as f64)
            })
            .collect()
    }

    /// Canonical embedding into `R^{r1} × C^{r2} ≅ R^n`.
    pub fn canonical_embed(&self, a: &AlgebraicInt) -> Vec<f64> {
        let sig = self.embeddings(a);
        let mut out = Vec::with_capacity(self.degree);
        out.extend(sig[..self.r1].iter().map(|z| z.re));
        for z in &sig[self.r1..self.r1 + self.r2] {
            out.push(z.re);
            out.push(z.im);
        }
        out
    }

    /// `xᵀ G x`, i.e. `energy_denominator() · ‖Ψ(x)‖²`, exactly.
    pub fn energy_numerator(&self, a: &AlgebraicInt) -> i128 {
        quadratic_form(&self.trace_form, a.coords())
    }

    /// `‖Ψ(x)‖²`.
    pub fn energy(&self, a: &AlgebraicInt) -> f64 {
        self.energy_numerator(a) as f64 / self.energy_denominator() as f64
    }

    pub fn format(&self, a: &AlgebraicInt) -> String {
        let sym = match self.family {
            FieldFamily::Quadratic { d } if d.rem_euclid(4) == 1 => "w".to_string(),
            FieldFamily::Quadratic { d } => format!("sqrt({d})"),
            FieldFamily::Cyclotomic { .. } => "z".to_string(),
            FieldFamily::MaximalReal { .. } => "t".to_string(),
        };
        let mut terms = Vec::new();
        for (j, &c) in a.coords().iter().enumerate() {
            if c == 0 {
                continue;
            }
            let mono = match j {
                0 => String::new(),
                1 => sym.clone(),
                _ => format!("{sym}^{j}"),
            };
            let term = match (c, j) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                (-1, _) => format!("-{mono}"),
                _ => format!("{c}*{mono}"),
            };
            terms.push(term);
        }
        if terms.is_empty() {
            return "0".into();
        }
        terms.join(" + ").replace("+ -", "- ")
    }
}

/// `xᵀ G x` in exact arithmetic.
pub fn quadratic_form(g: &[Vec<i64>], x: &[i64]) -> i128 {
    let mut acc = 0i128;
    for (i, &xi) in x.iter().enumerate() {
        if xi == 0 {
            continue;
        }
        let row: i128 = g[i].iter().zip(x).map(|(&gij, &xj)| gij as i128 * xj as i128).sum();
        acc += xi as i128 * row;
    }
    acc
}

/// Reduce an integer polynomial modulo a monic polynomial.
fn reduce_poly(x: &[i64], modulus: &[i64]) -> Vec<i64> {
    let n = modulus.len() - 1;
    let mut v = x.to_vec();
    if v.len() < n {
        v.resize(n, 0);
    }
    for k in (n..v.len()).rev() {
        let c = v[k];
        for j in 0..n {
            v[k - n + j] -= c * modulus[j];
        }
        v[k] = 0;
    }
    v.truncate(n);
    v
}
