//! Rational-integer helpers: gcds, primality, orders and exact determinants.

use crate::error::{Error, Result};

pub fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Returns `(g, s, t)` with `s*a + t*b = g = gcd(a, b) >= 0`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn mod_pow(base: u64, mut exp: u128, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut b = base as u128 % m;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Distinct prime factors with multiplicity, ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n).into_iter().fold(n, |acc, (p, _)| acc / p * (p - 1))
}

pub fn is_squarefree(n: i64) -> bool {
    factorize(n.unsigned_abs()).iter().all(|&(_, e)| e == 1)
}

/// Least `f >= 1` with `a^f = 1 (mod m)`. Requires `gcd(a, m) = 1`.
pub fn multiplicative_order(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 1;
    }
    let a = a % m;
    let mut x = a;
    let mut f = 1;
    while x != 1 {
        x = ((x as u128 * a as u128) % m as u128) as u64;
        f += 1;
    }
    f
}

/// Kronecker symbol `(a / p)` for a rational prime `p`.
pub fn kronecker_symbol(a: i64, p: u64) -> Result<i32> {
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    let r = (a as i128).rem_euclid(p as i128) as u64;
    if p == 2 {
        if a % 2 == 0 {
            return Ok(0);
        }
        let r8 = (a as i128).rem_euclid(8);
        return Ok(if r8 == 1 || r8 == 7 { 1 } else { -1 });
    }
    if r == 0 {
        return Ok(0);
    }
    let e = mod_pow(r, ((p - 1) / 2) as u128, p);
    Ok(if e == 1 { 1 } else { -1 })
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn det_bareiss(mut m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            let Some(swap) = (k + 1..n).find(|&i| m[i][k] != 0) else {
                return 0;
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = m[i][j]
                    .checked_mul(m[k][k])
                    .and_then(|a| m[i][k].checked_mul(m[k][j]).and_then(|b| a.checked_sub(b)))
                    .expect("determinant overflow");
                m[i][j] = v / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ext_gcd_identity() {
        for (a, b) in [(240, 46), (-7, 3), (0, 5), (11, 0), (12, -18)] {
            let (g, s, t) = ext_gcd(a, b);
            assert_eq!(g, gcd(a, b));
            assert_eq!(s * a + t * b, g);
        }
    }

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker_symbol(5, 11).unwrap(), 1);
        assert_eq!(kronecker_symbol(-20, 7).unwrap(), 1);
        assert_eq!(kronecker_symbol(5, 5).unwrap(), 0);
        assert_eq!(kronecker_symbol(5, 2).unwrap(), -1);
        assert_eq!(kronecker_symbol(-7, 2).unwrap(), 1);
        assert!(matches!(kronecker_symbol(5, 9), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn determinant_small() {
        let m = vec![vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 1]];
        assert_eq!(det_bareiss(m), 2 + (1 - 3));
        assert_eq!(det_bareiss(vec![vec![0, 1], vec![1, 0]]), -1);
    }

    #[test]
    fn phi_and_order() {
        assert_eq!(euler_phi(5), 4);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(euler_phi(9), 6);
        assert_eq!(multiplicative_order(11, 5), 1);
        assert_eq!(multiplicative_order(2, 5), 4);
        assert_eq!(multiplicative_order(3, 7), 6);
    }
}
