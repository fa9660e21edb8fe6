mod common;

use common::small_codes;
use latticedex::codec::{crt_idempotents, IndexCode, Message, SideInfo};
use latticedex::experiment::build_preset;
use latticedex::{AlgebraicInt, Error};
use proptest::prelude::*;

fn message(code: &IndexCode, idx: usize) -> Message {
    code.message_from_index(idx).unwrap()
}

fn rep(code: &IndexCode, msg: &Message) -> AlgebraicInt {
    code.representative(msg).unwrap().coords.clone()
}

#[test]
fn encoding_is_a_bijection() {
    for (name, code) in small_codes() {
        let norm: u64 = code.primes().iter().map(|p| p.norm()).product();
        assert_eq!(code.len() as u64, norm, "{name}");
        assert_eq!(code.modulus().norm(), norm, "{name}");
        let mut seen = vec![false; code.len()];
        for i in 0..code.len() {
            let msg = message(code, i);
            let j = code.point_index(&msg).unwrap();
            assert_eq!(i, j, "{name}");
            assert!(!std::mem::replace(&mut seen[j], true));
            let x = &code.points()[i].coords;
            assert_eq!(code.decode_point(x), msg, "{name}");
            // the CRT image lies in the coset of the stored representative
            let y = code.crt_combine(&msg).unwrap();
            assert!(code.modulus().contains(&(x - &y)), "{name}");
            assert_eq!(code.labels(&msg).unwrap(), code.points()[i].labels);
        }
    }
}

#[test]
fn idempotents_are_orthogonal() {
    for (name, code) in small_codes() {
        let field = code.field();
        let e = code.idempotents();
        let sum = e.iter().fold(field.zero(), |acc, x| &acc + x);
        assert!(code.modulus().contains(&(&sum - &field.one())), "{name}");
        for (k, ek) in e.iter().enumerate() {
            assert!(code.modulus().contains(&(&field.mul(ek, ek) - ek)), "{name}");
            for (j, p) in code.primes().iter().enumerate() {
                let target = if j == k { field.one() } else { field.zero() };
                assert!(p.contains(&(ek - &target)), "{name} e{k} mod p{j}");
            }
        }
        assert_eq!(crt_idempotents(field, code.primes()).unwrap(), e);
    }
}

#[test]
fn power_is_normalized() {
    for (name, code) in small_codes() {
        let avg: f64 = (0..code.len())
            .map(|i| code.normalized_point(i).iter().map(|v| v * v).sum::<f64>())
            .sum::<f64>()
            / code.len() as f64;
        assert!((avg - 1.0).abs() < 1e-12, "{name}: {avg}");
    }
}

#[test]
fn representatives_have_minimum_energy() {
    // brute force over small multiples of the modulus basis
    for (name, code) in small_codes().iter().filter(|(_, c)| c.field().degree() == 2) {
        let field = code.field();
        let basis = code.modulus().basis();
        for (i, pt) in code.points().iter().enumerate() {
            let e = field.energy_numerator(&pt.coords);
            assert_eq!(e, pt.energy_numerator as i128);
            for a in -3i64..=3 {
                for b in -3i64..=3 {
                    let shift = &basis[0].scale(a) + &basis[1].scale(b);
                    let other = &pt.coords + &shift;
                    assert!(field.energy_numerator(&other) >= e, "{name} point {i}");
                }
            }
        }
    }
}

#[test]
fn side_information_cosets() {
    // points sharing the labels on S differ by an element of Π_{k∈S} p_k
    for (name, code) in small_codes() {
        let k = code.num_messages();
        for s in SideInfo::nonempty_subsets(k) {
            let ideal = code.side_info_ideal(s).unwrap();
            let norm: u64 = s.indices().iter().map(|&j| code.primes()[j].norm()).product();
            assert_eq!(ideal.norm(), norm);
            let fixed = code.points()[code.len() / 3].labels.clone();
            let idx = code.subcode(s, &fixed).unwrap();
            assert_eq!(idx.len() as u64, code.len() as u64 / norm, "{name} {s}");
            let x0 = &code.points()[idx[0]].coords;
            for &i in &idx {
                assert!(ideal.contains(&(&code.points()[i].coords - x0)), "{name} {s}");
            }
        }
    }
}

#[test]
fn json_round_trip_and_validation() {
    let dir = tempfile::tempdir().unwrap();
    for (name, code) in small_codes() {
        let path = dir.path().join("code.json");
        code.save(&path).unwrap();
        let back = IndexCode::load(&path).unwrap();
        assert_eq!(back.points(), code.points(), "{name}");
        assert_eq!(back.primes(), code.primes(), "{name}");
        assert_eq!(back.gamma(), code.gamma(), "{name}");
    }
    let text = build_preset("example1").unwrap().to_json().unwrap();
    let broken = text.replacen("\"energy_numerator\": 0", "\"energy_numerator\": 3", 1);
    assert_ne!(broken, text);
    assert!(matches!(IndexCode::from_json(&broken), Err(Error::CorruptFile(_))));
    assert!(IndexCode::from_json("{}").is_err());
}

#[test]
fn message_validation() {
    let code = build_preset("example2").unwrap();
    let field = code.field();
    assert!(code.message(vec![field.zero()]).is_err());
    assert!(code.message(vec![field.from_int(7), field.zero()]).is_err());
    assert!(code.message_from_labels(&[7, 0]).is_err());
    assert!(code.subcode(SideInfo::from_bits(0b100), &[0, 0]).is_err());
    assert!(code.rate(SideInfo::from_bits(0b100)).is_err());
}

fn code_and_pair() -> impl Strategy<Value = (usize, usize, usize)> {
    (0..small_codes().len()).prop_flat_map(|c| {
        let n = small_codes()[c].1.len();
        (Just(c), 0..n, 0..n)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn crt_is_a_ring_homomorphism((c, a, b) in code_and_pair()) {
        let code = &small_codes()[c].1;
        let field = code.field();
        let (ma, mb) = (message(code, a), message(code, b));
        let (xa, xb) = (rep(code, &ma), rep(code, &mb));
        let sum = rep(code, &code.add_messages(&ma, &mb).unwrap());
        prop_assert!(code.modulus().contains(&(&sum - &(&xa + &xb))));
        let prod = rep(code, &code.mul_messages(&ma, &mb).unwrap());
        prop_assert!(code.modulus().contains(&(&prod - &field.mul(&xa, &xb))));
    }

    #[test]
    fn encode_decode_round_trip((c, a, _b) in code_and_pair(), shift in prop::collection::vec(-5i64..=5, 4)) {
        let code = &small_codes()[c].1;
        let msg = message(code, a);
        let x = rep(code, &msg);
        // any element of the coset decodes to the same message
        let basis = code.modulus().basis();
        let moved = basis.iter().zip(&shift).fold(x, |acc, (v, &k)| &acc + &v.scale(k));
        prop_assert_eq!(code.decode_point(&moved), msg.clone());
        prop_assert_eq!(code.encode(&msg).unwrap(), code.normalized_point(a));
    }
}
