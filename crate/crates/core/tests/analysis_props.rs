mod common;

use common::{code, primes_above, small_codes};
use latticedex::analysis::{
    build_oklattice_code, capacity_rhs, diversity_and_product_distance, gain_bounds, lattice_minimum, min_distance,
    min_distance_at, minkowski_upper_bound, overall_gain, side_info_distance, side_info_gain, DistanceSource,
    SquaredDistance, PID_IMAGINARY_QUADRATIC, UNIFORM_GAIN_DB,
};
use latticedex::codec::{build_index_code, IndexCode, SideInfo};
use latticedex::experiment::build_preset;
use latticedex::{Error, NumberField, SplittingKind};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Exhaustive pairwise minimum over the sub-constellation with labels `fixed` on `S`.
fn brute_min(code: &IndexCode, s: SideInfo, fixed: &[u64]) -> Option<i128> {
    let idx = code.subcode(s, fixed).unwrap();
    let field = code.field();
    let mut best: Option<i128> = None;
    for (a, &i) in idx.iter().enumerate() {
        for &j in &idx[a + 1..] {
            let d = &code.points()[i].coords - &code.points()[j].coords;
            let e = field.energy_numerator(&d);
            best = Some(best.map_or(e, |b| b.min(e)));
        }
    }
    best
}

fn split_primes(field: &NumberField, below: u64) -> Vec<u64> {
    (2..below)
        .filter(|&p| field.classify_prime(p).is_ok_and(|s| s.kind == SplittingKind::Split))
        .collect()
}

#[test]
fn min_distance_matches_brute_force() {
    for (name, code) in small_codes().iter().filter(|(_, c)| c.len() <= 400) {
        let zero = vec![0; code.num_messages()];
        for bits in 0..(1u64 << code.num_messages()) {
            let s = SideInfo::from_bits(bits);
            match brute_min(code, s, &zero) {
                Some(v) => assert_eq!(min_distance(code, s).unwrap().numerator, v, "{name} {s}"),
                None => assert!(matches!(min_distance(code, s), Err(Error::UndefinedDistance))),
            }
        }
    }
}

#[test]
fn min_distance_at_other_values_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (name, code) in small_codes().iter().filter(|(_, c)| c.len() <= 400) {
        for s in SideInfo::nonempty_subsets(code.num_messages()) {
            let ideal = code.side_info_ideal(s).unwrap();
            let (lmin, _) = lattice_minimum(code.field(), &ideal).unwrap();
            // five nonzero revealed values
            for _ in 0..5 {
                let fixed = code.points()[rng.random_range(1..code.len())].labels.clone();
                match brute_min(code, s, &fixed) {
                    Some(v) => {
                        assert_eq!(min_distance_at(code, s, &fixed).unwrap().numerator, v, "{name} {s}");
                        assert!(v >= lmin.numerator, "{name} {s}");
                        // translate symmetry: same distance as at w_S = 0
                        assert_eq!(Some(v), min_distance(code, s).ok().map(|d| d.numerator), "{name} {s}");
                    }
                    None => assert!(min_distance_at(code, s, &fixed).is_err()),
                }
            }
        }
    }
}

#[test]
fn distance_grows_with_side_information() {
    for (name, code) in small_codes() {
        let k = code.num_messages();
        let subcode: Vec<Option<i128>> = (0..1u64 << k)
            .map(|b| min_distance(code, SideInfo::from_bits(b)).ok().map(|d| d.numerator))
            .collect();
        for a in 0..1u64 << k {
            for b in 0..1u64 << k {
                if a & b == a {
                    if let (Some(x), Some(y)) = (subcode[a as usize], subcode[b as usize]) {
                        assert!(x <= y, "{name}: S={a:b} S'={b:b}");
                    }
                }
            }
        }
    }
}

#[test]
fn ideal_lattice_sandwich() {
    for (name, code) in small_codes() {
        let field = code.field();
        let (r1, r2) = field.signature();
        let n = field.degree() as f64;
        for s in SideInfo::nonempty_subsets(code.num_messages()) {
            let ideal = code.side_info_ideal(s).unwrap();
            let (lmin, x) = lattice_minimum(field, &ideal).unwrap();
            assert!(ideal.contains(&x) && !x.is_zero());
            assert_eq!(field.energy_numerator(&x), lmin.numerator);
            let lower = (r1 + r2) as f64 * (ideal.norm() as f64).powf(2.0 / n);
            let mink = minkowski_upper_bound(field, &ideal);
            assert!(lmin.value() >= lower - 1e-9, "{name} {s}: {} < {lower}", lmin.value());
            assert!(
                lmin.value() <= mink * mink + 1e-9,
                "{name} {s}: {} > {}",
                lmin.value(),
                mink * mink
            );
            let (ds, _) = side_info_distance(code, s).unwrap();
            assert!(ds.numerator >= lmin.numerator);
        }
    }
}

#[test]
fn overall_gain_is_exhaustive_minimum() {
    for (name, code) in small_codes() {
        let overall = overall_gain(code, 20).unwrap();
        let scan = SideInfo::nonempty_subsets(code.num_messages())
            .map(|s| side_info_gain(code, s).unwrap().gamma_db)
            .fold(f64::INFINITY, f64::min);
        assert_eq!(overall.gamma_db, scan, "{name}");
        assert_eq!(overall.reports.len(), (1 << code.num_messages()) - 1);
    }
    assert!(overall_gain(&build_preset("example1").unwrap(), 1).is_err());
}

#[test]
fn example_distances() {
    let ex1 = build_preset("example1").unwrap();
    let cases: [(u64, i128, DistanceSource); 3] = [
        (0b01, 10, DistanceSource::Subcode),
        (0b10, 23, DistanceSource::Subcode),
        (0b11, 115, DistanceSource::IdealLattice),
    ];
    assert_eq!(min_distance(&ex1, SideInfo::EMPTY).unwrap().numerator, 2);
    for (bits, d, src) in cases {
        let (ds, source) = side_info_distance(&ex1, SideInfo::from_bits(bits)).unwrap();
        assert_eq!((ds.numerator, source), (d, src));
    }
    let g = side_info_gain(&ex1, SideInfo::from_bits(0b01)).unwrap();
    assert!((g.gamma_db - UNIFORM_GAIN_DB).abs() < 1e-9);
    assert!((g.upper_bound_db.unwrap() - 9.0103).abs() < 1e-4);
    let g = side_info_gain(&ex1, SideInfo::from_bits(0b10)).unwrap();
    assert!((g.upper_bound_db.unwrap() - 8.0205).abs() < 1e-4);

    let ex2 = build_preset("example2").unwrap();
    let g = side_info_gain(&ex2, SideInfo::from_bits(0b01)).unwrap();
    assert_eq!((g.d0_sq, g.ds_sq), (1.0, 14.0));
    assert!((g.upper_bound_db.unwrap() - 9.2372).abs() < 1e-4);
}

#[test]
fn imaginary_quadratic_pids_have_uniform_gain() {
    for d in PID_IMAGINARY_QUADRATIC {
        let field = NumberField::quadratic(d).unwrap();
        let split = split_primes(&field, 50);
        let primes = vec![
            primes_above(&field, split[0], 1).remove(0),
            primes_above(&field, split[1], 1).remove(0),
        ];
        let code = build_index_code(&field, &primes).unwrap();
        for s in SideInfo::nonempty_subsets(2) {
            let g = side_info_gain(&code, s).unwrap();
            assert!((g.gamma_db - UNIFORM_GAIN_DB).abs() < 1e-9, "d={d} {s}: {}", g.gamma_db);
            assert!(g.exact_uniform);
        }
    }
}

#[test]
fn bounds_need_a_uniform_signature() {
    // Q(zeta_8) is totally complex, so bounds apply; every supported field is
    // totally real or totally complex
    let c8 = NumberField::cyclotomic(8).unwrap();
    let code = code(&c8, &[(17, 0)]);
    assert!(gain_bounds(&code, SideInfo::from_bits(1)).is_ok());
    assert!(matches!(gain_bounds(&code, SideInfo::EMPTY), Err(Error::EmptySideInfo)));
}

#[test]
fn totally_real_codes_have_full_diversity() {
    for name in ["example1", "maxreal-K3"] {
        let code = build_preset(name).unwrap();
        let n = code.field().degree();
        for bits in 0..(1u64 << code.num_messages()) - 1 {
            let s = SideInfo::from_bits(bits);
            let r = diversity_and_product_distance(&code, s).unwrap();
            assert_eq!(r.diversity, n, "{name} {s}");
            let floor = r.theoretical_floor.unwrap();
            assert!(r.product_distance >= floor * (1.0 - 1e-9), "{name} {s}");
            assert!(r.min_abs_norm as f64 >= floor);
        }
    }
    let ex1 = build_preset("example1").unwrap();
    let r = diversity_and_product_distance(&ex1, SideInfo::from_bits(1)).unwrap();
    assert!((r.product_distance - 5.0).abs() < 1e-9);
    assert_eq!(r.min_abs_norm, 5);
}

#[test]
fn capacity() {
    assert_eq!(capacity_rhs(0.0).unwrap(), 0.0);
    assert!((capacity_rhs(3.0).unwrap() - 1.0).abs() < 1e-15);
    assert!(capacity_rhs(-1.0).is_err());
    assert!(capacity_rhs(f64::NAN).is_err());
}

#[test]
fn rank_one_lattice_code_matches_index_code() {
    let field = NumberField::quadratic(-5).unwrap();
    let primes = primes_above(&field, 7, 2);
    let index = build_index_code(&field, &primes).unwrap();
    let ok = build_oklattice_code(&field, &primes, &[vec![field.one()]]).unwrap();
    assert_eq!(ok.len(), index.len());
    for s in SideInfo::nonempty_subsets(2) {
        let a = side_info_gain(&index, s).unwrap();
        let b = ok.side_info_gain(s).unwrap();
        assert_eq!(a.ds_sq_exact, b.ds_sq);
        assert_eq!(a.gamma_db, b.gamma_db);
    }
}

#[test]
fn lattice_code_gain_is_invariant_under_unimodular_generators() {
    let field = NumberField::quadratic(-1).unwrap();
    let i = field.generator();
    let primes = vec![
        primes_above(&field, 5, 1).remove(0),
        primes_above(&field, 13, 1).remove(0),
    ];
    let base = build_oklattice_code(
        &field,
        &primes,
        &[vec![field.one(), field.zero()], vec![field.zero(), field.one()]],
    )
    .unwrap();
    let unimodular = build_oklattice_code(
        &field,
        &primes,
        &[vec![field.one(), i.clone()], vec![field.zero(), i.clone()]],
    )
    .unwrap();
    for s in SideInfo::nonempty_subsets(2) {
        let a = base.side_info_gain(s).unwrap();
        let b = unimodular.side_info_gain(s).unwrap();
        assert_eq!(a.ds_sq, b.ds_sq, "{s}");
        assert_eq!(a.d0_sq, b.d0_sq, "{s}");
    }
    let singular = build_oklattice_code(
        &field,
        &primes,
        &[vec![field.one(), i.clone()], vec![i.clone(), field.from_int(-1)]],
    );
    assert!(matches!(singular, Err(Error::InvalidDesign(_))));
}

fn squarefree(d: i64) -> bool {
    let d = d.abs();
    (2..=d).take_while(|k| k * k <= d).all(|k| d % (k * k) != 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn gains_respect_bounds(d in prop_oneof![-60i64..-1, 2i64..60], seed in 0u64..1000, k in 1usize..=3) {
        prop_assume!(squarefree(d));
        let field = NumberField::quadratic(d).unwrap();
        let split = split_primes(&field, 50);
        prop_assume!(split.len() >= k);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut ps = split.clone();
        let mut chosen = Vec::new();
        for _ in 0..k {
            let p = ps.remove(rng.random_range(0..ps.len()));
            chosen.push(primes_above(&field, p, 2).remove(rng.random_range(0..2)));
        }
        let code = build_index_code(&field, &chosen).unwrap();
        for s in SideInfo::nonempty_subsets(k) {
            let g = side_info_gain(&code, s).unwrap();
            let (lo, hi) = (g.lower_bound_db.unwrap(), g.upper_bound_db.unwrap());
            prop_assert!(g.lattice_gamma_db >= lo - 1e-9 && g.lattice_gamma_db <= hi + 1e-9,
                "d={} {}: {} not in [{}, {}]", d, s, g.lattice_gamma_db, lo, hi);
            prop_assert!(g.gamma_db >= g.lattice_gamma_db - 1e-12);
            prop_assert!(g.gamma_db >= lo - 1e-9);
        }
    }
}

#[test]
fn small_complement_can_exceed_the_upper_bound() {
    // only three points remain after S = {2}; their spread exceeds the ideal minimum
    let field = NumberField::quadratic(-14).unwrap();
    let code = code(&field, &[(3, 0), (5, 0)]);
    let g = side_info_gain(&code, SideInfo::from_bits(0b10)).unwrap();
    assert_eq!((g.ds_sq, g.ds_source), (25.0, DistanceSource::Subcode));
    assert!(g.gamma_db > g.upper_bound_db.unwrap());
    assert!(g.lattice_gamma_db <= g.upper_bound_db.unwrap());
    assert!(!g.within_bounds(1e-9));
}

#[test]
fn squared_distance_value() {
    let d = SquaredDistance {
        numerator: 7,
        denominator: 2,
    };
    assert_eq!(d.value(), 3.5);
}
