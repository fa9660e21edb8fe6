#![allow(dead_code)]

use std::sync::OnceLock;

use latticedex::codec::{build_index_code, IndexCode};
use latticedex::experiment::build_preset;
use latticedex::NumberField;

/// Ideals above `p`, keeping the first `take`.
pub fn primes_above(field: &NumberField, p: u64, take: usize) -> Vec<latticedex::Ideal> {
    field.prime_ideals_above(p).unwrap().into_iter().take(take).collect()
}

pub fn code(field: &NumberField, picks: &[(u64, usize)]) -> IndexCode {
    let primes: Vec<_> = picks
        .iter()
        .map(|&(p, i)| field.prime_ideals_above(p).unwrap()[i].clone())
        .collect();
    build_index_code(field, &primes).unwrap()
}

/// Small codes over every field family.
pub fn small_codes() -> &'static [(String, IndexCode)] {
    static CODES: OnceLock<Vec<(String, IndexCode)>> = OnceLock::new();
    CODES.get_or_init(|| {
        let mut out = Vec::new();
        for name in ["example1", "example2", "example3", "maxreal-K3"] {
            out.push((name.to_string(), build_preset(name).unwrap()));
        }
        let gi = NumberField::quadratic(-1).unwrap();
        out.push(("Z[i] 5*13".into(), code(&gi, &[(5, 0), (13, 0)])));
        out.push(("Z[i] 2*5*5'".into(), code(&gi, &[(2, 0), (5, 0), (5, 1)])));
        let q6 = NumberField::quadratic(6).unwrap();
        out.push(("Q(sqrt6) 5*19*3".into(), code(&q6, &[(5, 0), (19, 1), (3, 0)])));
        let q13 = NumberField::quadratic(-13).unwrap();
        out.push(("Q(sqrt-13) inert 3".into(), code(&q13, &[(7, 0), (3, 0)])));
        let c8 = NumberField::cyclotomic(8).unwrap();
        out.push(("Q(zeta8) 17*3".into(), code(&c8, &[(17, 0), (3, 0)])));
        let c12 = NumberField::cyclotomic(12).unwrap();
        out.push(("Q(zeta12) 13*13'".into(), code(&c12, &[(13, 0), (13, 1)])));
        out
    })
}
