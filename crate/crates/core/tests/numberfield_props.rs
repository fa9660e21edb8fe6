use latticedex::numberfield::{cyclotomic_polynomial, quadratic_form};
use latticedex::{AlgebraicInt, FieldFamily, NumberField, SplittingKind};
use proptest::prelude::*;

fn fields() -> Vec<NumberField> {
    [
        FieldFamily::Quadratic { d: 5 },
        FieldFamily::Quadratic { d: -5 },
        FieldFamily::Quadratic { d: -7 },
        FieldFamily::Quadratic { d: 6 },
        FieldFamily::Quadratic { d: -1 },
        FieldFamily::Cyclotomic { m: 5 },
        FieldFamily::Cyclotomic { m: 8 },
        FieldFamily::Cyclotomic { m: 12 },
        FieldFamily::MaximalReal { m: 7 },
        FieldFamily::MaximalReal { m: 11 },
    ]
    .into_iter()
    .map(|f| NumberField::new(f).unwrap())
    .collect()
}

fn primes_below(n: u64) -> Vec<u64> {
    (2..n)
        .filter(|&p| (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0))
        .collect()
}

fn legendre_square(a: i64, m: i64) -> bool {
    (0..m).any(|x| (x * x - a).rem_euclid(m) == 0)
}

fn mult_order(p: u64, m: u64, allow_minus: bool) -> u32 {
    let mut x = p % m;
    let mut f = 1;
    while x != 1 && !(allow_minus && x == m - 1) {
        x = x * p % m;
        f += 1;
    }
    f
}

fn element_strategy(n: usize) -> impl Strategy<Value = AlgebraicInt> {
    prop::collection::vec(-10i64..=10, n).prop_map(AlgebraicInt::new)
}

#[test]
fn splitting_matches_oracles_below_200() {
    for field in fields() {
        let n = field.degree() as u32;
        for p in primes_below(200) {
            let s = field.classify_prime(p).unwrap();
            assert_eq!(s.e * s.f * s.g, n, "{} p={p}", field.family());
            match field.family() {
                FieldFamily::Quadratic { .. } => {
                    let disc = field.discriminant() as i64;
                    let kind = if disc % p as i64 == 0 {
                        SplittingKind::Ramified
                    } else if legendre_square(disc, 4 * p as i64) {
                        SplittingKind::Split
                    } else {
                        SplittingKind::Inert
                    };
                    assert_eq!(s.kind, kind, "{} p={p}", field.family());
                }
                FieldFamily::Cyclotomic { m } if m % p != 0 => {
                    assert_eq!(s.f, mult_order(p, m, false), "{} p={p}", field.family());
                }
                FieldFamily::MaximalReal { m } if m != p => {
                    assert_eq!(s.f, mult_order(p, m, true), "{} p={p}", field.family());
                }
                _ => assert_eq!(s.kind, SplittingKind::Ramified),
            }
            // unramified: the listed ideals have norm p^f and multiply to (p)
            if s.kind != SplittingKind::Ramified {
                let ideals = field.prime_ideals_above(p).unwrap();
                assert_eq!(ideals.len() as u32, s.g);
                let sum: u32 = ideals
                    .iter()
                    .map(|q| {
                        let info = q.prime_info().unwrap();
                        assert_eq!(q.norm(), p.pow(info.f));
                        info.e * info.f
                    })
                    .sum();
                assert_eq!(sum, n);
                let prod = field.multiply_all(&ideals).unwrap();
                assert_eq!(prod, field.principal_ideal(&field.from_int(p as i64)).unwrap());
            }
        }
    }
}

#[test]
fn ramified_quadratic_primes_are_listed() {
    let field = NumberField::quadratic(-5).unwrap();
    for p in [2, 5] {
        let ideals = field.prime_ideals_above(p).unwrap();
        assert_eq!(ideals.len(), 1);
        assert_eq!(ideals[0].norm(), p);
        let sq = field.multiply_ideals(&ideals[0], &ideals[0]).unwrap();
        assert_eq!(sq, field.principal_ideal(&field.from_int(p as i64)).unwrap());
    }
}

#[test]
fn split_primes_have_roots_mod_p() {
    // number of degree-one primes equals the number of roots of the minimal polynomial
    for field in fields() {
        let poly = field.min_poly().to_vec();
        for p in primes_below(120) {
            let s = field.classify_prime(p).unwrap();
            if s.kind == SplittingKind::Ramified {
                continue;
            }
            let roots = (0..p as i64)
                .filter(|&x| {
                    poly.iter()
                        .rev()
                        .fold(0i64, |acc, &c| (acc * x + c).rem_euclid(p as i64))
                        == 0
                })
                .count() as u32;
            let expected = if s.f == 1 { s.g } else { 0 };
            assert_eq!(roots, expected, "{} p={p}", field.family());
        }
    }
}

#[test]
fn cyclotomic_polynomials() {
    assert_eq!(cyclotomic_polynomial(5), vec![1, 1, 1, 1, 1]);
    assert_eq!(cyclotomic_polynomial(8), vec![1, 0, 0, 0, 1]);
    assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
}

#[test]
fn invalid_fields_rejected() {
    assert!(NumberField::quadratic(4).is_err());
    assert!(NumberField::quadratic(1).is_err());
    assert!(NumberField::quadratic(0).is_err());
    assert!(NumberField::cyclotomic(6).is_err());
    assert!(NumberField::maximal_real(9).is_err());
    assert!(NumberField::quadratic(5).unwrap().classify_prime(9).is_err());
    assert!(NumberField::cyclotomic(5).unwrap().prime_ideals_above(5).is_err());
}

#[test]
fn discriminants_and_signatures() {
    let cases = [
        (FieldFamily::Quadratic { d: 5 }, 5, (2, 0)),
        (FieldFamily::Quadratic { d: -5 }, -20, (0, 1)),
        (FieldFamily::Quadratic { d: -7 }, -7, (0, 1)),
        (FieldFamily::Cyclotomic { m: 5 }, 125, (0, 2)),
        (FieldFamily::Cyclotomic { m: 8 }, 256, (0, 2)),
        (FieldFamily::MaximalReal { m: 7 }, 49, (3, 0)),
    ];
    for (fam, disc, sig) in cases {
        let f = NumberField::new(fam).unwrap();
        assert_eq!(f.discriminant(), disc, "{fam}");
        assert_eq!(f.signature(), sig, "{fam}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn norm_is_multiplicative(fi in 0usize..10, a in element_strategy(5), b in element_strategy(5)) {
        let field = &fields()[fi];
        let n = field.degree();
        let a = AlgebraicInt::new(a.coords()[..n].to_vec());
        let b = AlgebraicInt::new(b.coords()[..n].to_vec());
        prop_assert_eq!(field.norm(&field.mul(&a, &b)), field.norm(&a) * field.norm(&b));
    }

    #[test]
    fn energy_matches_embedding(fi in 0usize..10, a in element_strategy(5)) {
        let field = &fields()[fi];
        let a = AlgebraicInt::new(a.coords()[..field.degree()].to_vec());
        let exact = field.energy(&a);
        let float: f64 = field.canonical_embed(&a).iter().map(|v| v * v).sum();
        prop_assert!((exact - float).abs() <= 1e-10 * exact.max(1.0));
        prop_assert_eq!(
            quadratic_form(field.trace_form(), a.coords()),
            field.energy_numerator(&a)
        );
    }

    #[test]
    fn ideal_norm_is_multiplicative(fi in 0usize..10, p in 0usize..25, q in 0usize..25, i in 0usize..4, j in 0usize..4) {
        let field = &fields()[fi];
        let ps = primes_below(100);
        let pick = |p: u64, i: usize| {
            let ideals = field.prime_ideals_above(p).ok()?;
            ideals.get(i % ideals.len()).cloned()
        };
        if let (Some(a), Some(b)) = (pick(ps[p], i), pick(ps[q], j)) {
            let Some(norm) = a.norm().checked_mul(b.norm()).filter(|&v| v <= i64::MAX as u64) else {
                prop_assert!(field.multiply_ideals(&a, &b).is_err());
                return Ok(());
            };
            let prod = field.multiply_ideals(&a, &b).unwrap();
            prop_assert_eq!(prod.norm(), norm);
            prop_assert_eq!(prod.norm(), a.norm() * b.norm());
            prop_assert_eq!(field.is_coprime(&a, &b).unwrap(), a != b);
        }
    }

    #[test]
    fn principal_ideal_norm(fi in 0usize..10, a in element_strategy(5)) {
        let field = &fields()[fi];
        let a = AlgebraicInt::new(a.coords()[..field.degree()].to_vec());
        prop_assume!(!a.is_zero());
        let ideal = field.principal_ideal(&a).unwrap();
        prop_assert_eq!(ideal.norm() as i128, field.norm(&a).abs());
        prop_assert!(ideal.contains(&a));
    }

    #[test]
    fn residues_are_canonical(fi in 0usize..10, p in 0usize..15, x in element_strategy(5), y in element_strategy(5)) {
        let field = &fields()[fi];
        let n = field.degree();
        let Ok(ideals) = field.prime_ideals_above(primes_below(50)[p]) else { return Ok(()) };
        let ideal = &ideals[0];
        let x = AlgebraicInt::new(x.coords()[..n].to_vec());
        let y = AlgebraicInt::new(y.coords()[..n].to_vec());
        let r = ideal.reduce(&x);
        prop_assert!(ideal.contains(&(&x - &r)));
        prop_assert_eq!(ideal.reduce(&r), r.clone());
        let idx = ideal.residue_index(&x);
        prop_assert!(idx < ideal.norm());
        prop_assert_eq!(ideal.residue_from_index(idx), r);
        let same = ideal.contains(&(&x - &y));
        prop_assert_eq!(same, idx == ideal.residue_index(&y));
    }
}
