//! Expected values computed independently (hand arithmetic, trial division,
//! brute-force enumeration) and frozen here.

use hass_core::access::{coalition, AccessStructure};
use hass_core::ases::{coalition_tokens, hsver_monotone, hsver_strict, AsesInstance};
use hass_core::bbrpoly::{build_polynomial, verify_contract, ModulusSpec};
use hass_core::counting::{eulerian, growth_bound_check, max_share_elements, n_k, s_of_n_gf, s_of_n_sum, stirling2};
use hass_core::covvec::{family_from_sets, hadamard_weight, inner, verify_covering_family, CoveringVector};
use hass_core::numth::{crt_combine, group_from_primes, is_prime, mod_pow, GroupParams};
use hass_core::oracle::cover_pair_count;
use hass_core::scheme::{recon, recon_strict, DealerRun, Dealing};
use hass_core::setsys::{
    build_set_system, cover, matrix_entry, uniform_subsystem, verify_lemma3, verify_theorem1, SymbolString,
};
use hass_core::Error;
use num_bigint::BigUint;
use num_traits::Zero;

fn big(v: u64) -> BigUint {
    BigUint::from(v)
}

fn six() -> ModulusSpec {
    ModulusSpec::new(6).unwrap()
}

fn group31() -> GroupParams {
    group_from_primes(&[big(2), big(3), big(5)]).unwrap()
}

#[test]
fn group_parameters() {
    let g = group_from_primes(&[big(2), big(3)]).unwrap();
    assert_eq!((g.q(), g.m(), g.r()), (&big(7), &big(6), 2));
    let g = group31();
    assert_eq!((g.q(), g.m(), g.r()), (&big(31), &big(30), 3));
    let g = group_from_primes(&[big(5), big(7)]).unwrap();
    assert_eq!((g.q(), g.m(), g.r()), (&big(71), &big(70), 3));
    assert_eq!(g.cofactor(), &big(2));
    assert!(is_prime(&big(31)));
}

#[test]
fn modular_arithmetic() {
    assert_eq!(mod_pow(&big(3), &big(7), &big(31)).unwrap(), big(17));
    assert_eq!(mod_pow(&big(5), &big(4), &big(7)).unwrap(), big(2));
    let (x, n) = crt_combine(&[(big(1), big(2)), (big(2), big(3))]).unwrap();
    assert_eq!((x, n), (big(5), big(6)));
}

#[test]
fn stirling_eulerian_and_n_k() {
    assert_eq!(stirling2(3, 2).unwrap(), big(3));
    assert_eq!(stirling2(4, 2).unwrap(), big(7));
    assert_eq!(eulerian(3, 1).unwrap(), big(4));
    assert_eq!(eulerian(4, 2).unwrap(), big(11));
    assert_eq!(n_k(2, 1).unwrap(), big(2));
    assert_eq!(n_k(2, 2).unwrap(), big(2));
    assert_eq!(n_k(3, 2).unwrap(), big(18));
}

#[test]
fn set_system_sizes() {
    for (n, s) in [(1, 1), (2, 6), (3, 147), (4, 6940)] {
        assert_eq!(s_of_n_sum(n).unwrap(), big(s));
        assert_eq!(s_of_n_gf(n).unwrap(), big(s));
        assert_eq!(cover_pair_count(n).unwrap(), big(s));
    }
}

#[test]
fn growth_bound_values() {
    // 147^2 = 21609 > 3^9 = 19683; 6940^2 = 48163600 > 4^12 = 16777216
    assert_eq!(big(147).pow(2), big(21609));
    assert_eq!(big(6940).pow(2), big(48_163_600));
    for n in 3..=5 {
        assert!(growth_bound_check(n).unwrap());
    }
}

#[test]
fn share_accounting_values() {
    let c = max_share_elements(10).unwrap();
    assert_eq!(c.elements, big(504));
    assert!((c.reference - 516.7375).abs() < 1e-3);
    assert!((c.ratio - 0.975).abs() < 1e-3);
    assert_eq!(max_share_elements(4).unwrap().elements, big(12));
}

#[test]
fn polynomial_n5_m6() {
    let poly = build_polynomial(5, &six()).unwrap();
    assert_eq!(poly.degree(), 2);
    let e = poly.eval(&[1, 1, 1, 1, 0]).unwrap();
    assert_eq!(e.value, 1);
    assert_eq!(e.residues, vec![(2, 1), (3, 1)]);
    assert_ne!(poly.eval(&[0; 5]).unwrap().value, 0);
    assert_eq!(poly.eval(&[1; 5]).unwrap().value, 0);
    let report = verify_contract(&poly, 20).unwrap();
    assert!(report.passed());
    assert!(verify_contract(&build_polynomial(2, &six()).unwrap(), 20).unwrap().passed());
}

#[test]
fn cover_and_matrix_entries() {
    let s = |t: &str| SymbolString::parse(t).unwrap();
    assert!(cover(&s("01"), &s("10")).unwrap());
    assert!(!cover(&s("00"), &s("01")).unwrap());
    let poly = build_polynomial(5, &six()).unwrap();
    assert_eq!(matrix_entry(&poly, &s("01234"), &s("01233")).unwrap() % 6, 1);
    assert_eq!(matrix_entry(&poly, &s("01234"), &s("43210")).unwrap() % 6, 0);
}

#[test]
fn set_system_small_cases() {
    let ss = build_set_system(2, &six(), false).unwrap();
    assert_eq!(ss.index_count(), &big(6));
    let ss = build_set_system(3, &six(), false).unwrap();
    assert_eq!(ss.index_count(), &big(147));
    let t = verify_theorem1(&ss);
    assert!(t.c2.passed() && t.c4.passed());
    assert_eq!(t.nested_pairs + t.non_nested_pairs, t.pairs);
    let dedup = build_set_system(3, &six(), true).unwrap();
    assert_eq!(dedup.distinct_count(), Some(7));
}

#[test]
fn lemma3_diagonal_n5() {
    let ss = build_set_system(5, &six(), true).unwrap();
    let report = verify_lemma3(&ss).unwrap();
    assert!(report.passed());
    assert_eq!(report.diagonal_count, Some(ss.poly().total_multiplicity()));
    assert_eq!(report.diagonal_count, Some(36));
}

#[test]
fn uniform_and_covering_n3() {
    let ss = build_set_system(3, &six(), false).unwrap();
    let family = uniform_subsystem(&ss).unwrap();
    assert_eq!(family.sets.len(), 7);
    assert!(family.verify().passed());
    let vectors: Vec<_> = family
        .sets
        .iter()
        .enumerate()
        .map(|(i, s)| CoveringVector::sparse(family.h, big(6), s.elements.iter().map(|&e| (e as usize, big(1))), Some(i)).unwrap())
        .collect();
    for (i, u) in vectors.iter().enumerate() {
        for (j, v) in vectors.iter().enumerate() {
            let meet = family.sets[i].intersection_size(&family.sets[j]) as u64;
            assert_eq!(inner(u, v).unwrap(), big(meet % 6));
            assert_eq!(big(hadamard_weight(u, v).unwrap()) % 6u32, inner(u, v).unwrap());
            if i != j {
                assert!(!inner(u, v).unwrap().is_zero());
            }
        }
    }
    let report = verify_covering_family(&vectors, None).unwrap();
    assert!(report.passed());
    assert!(report.realized_residues.len() <= 3);
    let all = family_from_sets(&ss).unwrap();
    for u in &all {
        for v in &all {
            assert_eq!(big(hadamard_weight(u, v).unwrap()) % 6u32, inner(u, v).unwrap());
        }
    }
}

fn toy_tokens() -> AsesInstance {
    AsesInstance::from_parts(group31(), 0b011, big(3), vec![big(7), big(23), big(11)], vec![(3, 1)]).unwrap()
}

#[test]
fn toy_encoding() {
    let inst = toy_tokens();
    let ids = [7u64, 23, 11];
    for b in 1u32..8 {
        let sum: u64 = (0..3).filter(|i| b >> i & 1 == 1).map(|i| ids[i]).sum();
        assert_eq!(sum % 30 == 0, b == 0b011, "coalition {b:03b}");
    }
    assert_eq!(inst.tokens(), &[big(17), big(11), big(13)]);
    let q = big(31);
    assert!(hsver_strict(&[big(17), big(11)], &q));
    assert!(!hsver_strict(&[big(17)], &q));
    assert!(!hsver_strict(&[big(17), big(11), big(13)], &q));
    assert_eq!(hsver_monotone(&coalition_tokens(&inst, 0b111), &q, 20).unwrap(), Some(vec![1, 2]));
    assert_eq!(hsver_monotone(&coalition_tokens(&inst, 0b101), &q, 20).unwrap(), None);
    for p in 1..=3 {
        assert_eq!(hsver_monotone(&coalition_tokens(&inst, 1 << (p - 1)), &q, 20).unwrap(), None);
    }
}

#[test]
fn toy_scheme() {
    let shares = AsesInstance::from_parts(group31(), 0b011, big(3), vec![big(11), big(19), big(7)], vec![(3, 1)]).unwrap();
    let run = DealerRun::new(0, toy_tokens(), shares, vec![big(4), big(18)]).unwrap();
    let dealing = Dealing::from_runs(vec![run]).unwrap();
    let bundle = &dealing.bundle;
    assert_eq!(bundle.runs[0].shares, vec![big(21), big(30), big(17)]);
    assert_eq!(big(21 * 30) % 31u32, big(10));
    let ab = coalition(&[1, 2]).unwrap();
    assert_eq!(recon(bundle, ab).unwrap().secret, big(10));
    assert_eq!(recon_strict(bundle, ab).unwrap().secret, big(10));
    let r = recon(bundle, coalition(&[1, 2, 3]).unwrap()).unwrap();
    assert_eq!((r.secret, r.witness), (big(10), vec![1, 2]));
    assert_eq!(recon(bundle, coalition(&[1, 3]).unwrap()), Err(Error::NotAuthorized));
    assert_eq!(bundle.elements_per_party(), 2);
    let access = AccessStructure::new(3, &[vec![1, 2]]).unwrap();
    assert!(access.is_authorized(ab));
}
