//! Brute-force checkers.
//!
//! Everything here is written naively on purpose: plain enumeration and raw
//! set operations, sharing no code paths with the constructions it checks
//! beyond the public entry points under test.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::access::AccessStructure;
use crate::ases::{hsver_monotone, hsver_strict, AsesInstance};
use crate::bbrpoly::IntersectionPolynomial;
use crate::covvec::{from_set, hadamard_weight, inner};
use crate::error::{Error, Result};
use crate::scheme::{recon, ShareBundle};
use crate::setsys::SetSystem;

/// Largest `n` for literal pair enumeration.
pub const PAIR_ENUMERATION_MAX_N: u64 = 4;
/// Largest `n` for enumerating all `n^n` strings.
pub const STRING_ENUMERATION_MAX_N: u64 = 6;
/// Largest `n` for the closed-form surjection count.
pub const FORMULA_MAX_N: u64 = 12;
/// Largest party count for token checks.
pub const TOKEN_MAX_PARTIES: usize = 20;
/// Largest party count when every coalition runs a subset search or recon.
pub const RECON_MAX_PARTIES: usize = 12;

/// Outcome of one check. A failing report always carries a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub check: String,
    pub instance: String,
    pub passed: bool,
    pub witness: Option<String>,
    /// Filled in by callers that time the check.
    pub elapsed_us: Option<u64>,
}

impl OracleReport {
    pub fn new(check: &str, instance: String) -> Self {
        Self {
            check: check.to_string(),
            instance,
            passed: true,
            witness: None,
            elapsed_us: None,
        }
    }

    /// Marks the report failed; the first witness is kept.
    pub fn fail(&mut self, witness: String) {
        if self.passed {
            self.passed = false;
            self.witness = Some(witness);
        }
    }

    /// Attaches a certificate to a passing report.
    pub fn certify(mut self, certificate: String) -> Self {
        if self.passed {
            self.witness = Some(certificate);
        }
        self
    }
}

fn symbols_used(s: &[u64]) -> BTreeSet<u64> {
    s.iter().copied().collect()
}

fn strings(n: u64) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..n).map(move |c| {
                    let mut s = prefix.clone();
                    s.push(c);
                    s
                })
            })
            .collect();
    }
    out
}

fn choose(n: u64, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Ordered pairs of length-`n` strings over `n` symbols that use the same
/// symbol set.
pub fn cover_pair_count(n: u64) -> Result<BigUint> {
    if n == 0 || n > FORMULA_MAX_N {
        return Err(Error::BudgetExceeded {
            what: "cover pair count n",
            requested: n,
            limit: FORMULA_MAX_N,
        });
    }
    if n <= PAIR_ENUMERATION_MAX_N {
        let all = strings(n);
        let mut count = 0u64;
        for x in &all {
            for y in &all {
                if x == y || symbols_used(x) == symbols_used(y) {
                    count += 1;
                }
            }
        }
        return Ok(BigUint::from(count));
    }
    if n <= STRING_ENUMERATION_MAX_N {
        let mut classes: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
        for s in strings(n) {
            *classes.entry(symbols_used(&s).into_iter().collect()).or_default() += 1;
        }
        return Ok(classes.values().map(|&c| BigUint::from(c) * c).sum());
    }
    // surjections onto k fixed symbols by inclusion-exclusion
    let mut total = BigInt::zero();
    for k in 1..=n {
        let mut onto = BigInt::zero();
        for j in 0..=k {
            let term = choose(k, j) * BigInt::from(k - j).pow(n as u32);
            if j % 2 == 0 {
                onto += term;
            } else {
                onto -= term;
            }
        }
        total += choose(n, k) * &onto * &onto;
    }
    Ok(total.to_biguint().expect("count is positive"))
}

/// Evaluates the polynomial at every point of the cube by summing the
/// monomials directly, checking the zero set and per-prime-power residues.
pub fn naive_polynomial_contract(poly: &IntersectionPolynomial) -> Result<OracleReport> {
    let n = poly.n();
    if n > 20 {
        return Err(Error::BudgetExceeded {
            what: "polynomial variables",
            requested: n as u64,
            limit: 20,
        });
    }
    let m = poly.modulus().m();
    let prime_powers = poly.modulus().prime_powers();
    let terms: Vec<(u64, u64)> = poly.terms().iter().map(|(&k, &v)| (k, v)).collect();
    let ones = (1u64 << n) - 1;
    let mut report = OracleReport::new("polynomial_contract", format!("n={n} m={m}"));
    for z in 0..=ones {
        let mut value = 0u128;
        for &(mono, coeff) in &terms {
            if (0..n).all(|i| mono >> i & 1 == 0 || z >> i & 1 == 1) {
                value += coeff as u128;
            }
        }
        let residue = (value % m as u128) as u64;
        if (residue == 0) != (z == ones) {
            report.fail(format!("z={z:0n$b} value={residue}"));
        }
        for &pp in &prime_powers {
            if value % pp as u128 > 1 {
                report.fail(format!("z={z:0n$b} residue mod {pp} is {}", value % pp as u128));
            }
        }
    }
    Ok(report.certify(format!("{} points", ones + 1)))
}

/// Recomputes every pairwise intersection by raw set intersection and
/// compares with the incidence vectors' inner products and weights; also
/// rechecks sizes and per-prime-power residues.
pub fn naive_set_intersections(ss: &SetSystem) -> Result<OracleReport> {
    let sets: Vec<BTreeSet<u32>> = ss.sets().iter().map(|s| s.elements.iter().copied().collect()).collect();
    if sets.len() > 4096 {
        return Err(Error::BudgetExceeded {
            what: "member sets",
            requested: sets.len() as u64,
            limit: 4096,
        });
    }
    let m = ss.m();
    let prime_powers = ss.modulus().prime_powers();
    let vectors = (0..sets.len()).map(|i| from_set(ss, i)).collect::<Result<Vec<_>>>()?;
    let mut report = OracleReport::new("set_intersections", format!("n={} m={m} sets={}", ss.n(), sets.len()));
    for (i, s) in sets.iter().enumerate() {
        if s.len() as u64 % m != 0 {
            report.fail(format!("set {i} has size {}", s.len()));
        }
    }
    let mut pairs = 0u64;
    for i in 0..sets.len() {
        for j in i..sets.len() {
            let meet = sets[i].intersection(&sets[j]).count() as u64;
            let ip = inner(&vectors[i], &vectors[j])?;
            let w = hadamard_weight(&vectors[i], &vectors[j])?;
            if ip != BigUint::from(meet % m) || w != meet {
                report.fail(format!("sets ({i},{j}): |meet|={meet} inner={ip} weight={w}"));
            }
            if i != j && sets[i] != sets[j] {
                pairs += 1;
                for &pp in &prime_powers {
                    if meet % pp > 1 {
                        report.fail(format!("sets ({i},{j}): |meet|={meet} is {} mod {pp}", meet % pp));
                    }
                }
            }
        }
    }
    Ok(report.certify(format!("{pairs} distinct pairs")))
}

fn coalition_members(b: u32, ell: usize) -> Vec<usize> {
    (1..=ell).filter(|p| b & (1 << (p - 1)) != 0).collect()
}

fn contains_all(b: u32, set: u32, ell: usize) -> bool {
    coalition_members(set, ell).iter().all(|p| b & (1 << (p - 1)) != 0)
}

/// Classifies every coalition of an encoded instance and checks the token
/// tests against the classification.
///
/// Every coalition's full token product is computed; it must be 1 exactly
/// for `omega` itself, which makes "some sub-coalition multiplies to 1"
/// equivalent to "contains `omega`". Up to [`RECON_MAX_PARTIES`] the subset
/// search is also run per coalition.
pub fn exhaustive_coalitions(instance: &AsesInstance) -> Result<OracleReport> {
    let ell = instance.ell();
    if ell > TOKEN_MAX_PARTIES {
        return Err(Error::BudgetExceeded {
            what: "parties",
            requested: ell as u64,
            limit: TOKEN_MAX_PARTIES as u64,
        });
    }
    let q = instance.q();
    let omega = instance.omega();
    let tokens = instance.tokens();
    let mut report = OracleReport::new("ases_coalitions", format!("ell={ell} q={q}"));
    let total = 1u32 << ell;
    // product[b] built from product[b without its lowest party]
    let mut product = vec![BigUint::one(); total as usize];
    let mut authorized = 0u64;
    for b in 1..total {
        let low = b.trailing_zeros() as usize;
        product[b as usize] = &product[(b & (b - 1)) as usize] * &tokens[low] % q;
        let expected = contains_all(b, omega, ell);
        authorized += expected as u64;
        let is_one = product[b as usize].is_one();
        if is_one != (b == omega) {
            report.fail(format!("coalition {:?} token product {}", coalition_members(b, ell), product[b as usize]));
        }
        let members = coalition_members(b, ell);
        let subset: Vec<BigUint> = members.iter().map(|&p| tokens[p - 1].clone()).collect();
        if hsver_strict(&subset, q) != is_one {
            report.fail(format!("strict test disagrees on {members:?}"));
        }
        if ell <= RECON_MAX_PARTIES {
            let pairs: Vec<(usize, BigUint)> = members.iter().map(|&p| (p, tokens[p - 1].clone())).collect();
            let found = hsver_monotone(&pairs, q, RECON_MAX_PARTIES)?.is_some();
            if found != expected {
                report.fail(format!("coalition {members:?} authorized={expected} subset search={found}"));
            }
        }
    }
    Ok(report.certify(format!("{} coalitions, {authorized} authorized", total - 1)))
}

/// Runs reconstruction on every coalition of a bundle and checks it against
/// the monotone closure of the minimal sets.
pub fn exhaustive_recon(bundle: &ShareBundle, access: &AccessStructure, secret: &BigUint) -> Result<OracleReport> {
    let ell = bundle.ell;
    if ell > RECON_MAX_PARTIES {
        return Err(Error::BudgetExceeded {
            what: "parties",
            requested: ell as u64,
            limit: RECON_MAX_PARTIES as u64,
        });
    }
    let mut report = OracleReport::new(
        "scheme_coalitions",
        format!("ell={ell} minimal_sets={}", access.minimal_sets().len()),
    );
    let mut authorized = 0u64;
    for b in 1u32..1 << ell {
        let expected = access.minimal_sets().iter().any(|&s| contains_all(b, s, ell));
        authorized += expected as u64;
        let members = coalition_members(b, ell);
        match (expected, recon(bundle, b)) {
            (true, Ok(r)) if r.secret == *secret => {}
            (false, Err(Error::NotAuthorized)) => {}
            (_, outcome) => report.fail(format!("coalition {members:?} authorized={expected} recon={outcome:?}")),
        }
    }
    Ok(report.certify(format!("{} coalitions, {authorized} authorized", (1u32 << ell) - 1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bbrpoly::{build_polynomial, ModulusSpec};
    use crate::counting::s_of_n_sum;
    use crate::numth::group_from_primes;
    use crate::setsys::build_set_system;

    #[test]
    fn cover_pairs() {
        assert_eq!(cover_pair_count(1).unwrap(), BigUint::from(1u8));
        assert_eq!(cover_pair_count(2).unwrap(), BigUint::from(6u8));
        assert_eq!(cover_pair_count(3).unwrap(), BigUint::from(147u8));
        for n in 1..=8 {
            assert_eq!(cover_pair_count(n).unwrap(), s_of_n_sum(n).unwrap(), "n={n}");
        }
        assert!(cover_pair_count(13).is_err());
    }

    #[test]
    fn polynomial_contract() {
        let spec = ModulusSpec::new(6).unwrap();
        for n in 2..=8 {
            let poly = build_polynomial(n, &spec).unwrap();
            assert!(naive_polynomial_contract(&poly).unwrap().passed);
        }
        let mut poly = build_polynomial(4, &spec).unwrap();
        let c = poly.coefficient(&[0]);
        poly.set_coefficient(&[0], (c + 1) % 6).unwrap();
        let r = naive_polynomial_contract(&poly).unwrap();
        assert!(!r.passed && r.witness.is_some());
    }

    #[test]
    fn intersections() {
        let ss = build_set_system(3, &ModulusSpec::new(6).unwrap(), true).unwrap();
        let r = naive_set_intersections(&ss).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn toy_coalitions_and_fault() {
        let group = group_from_primes(&[2u8, 3, 5].map(BigUint::from)).unwrap();
        let ids = [7u8, 23, 11].map(BigUint::from).to_vec();
        let mut inst = AsesInstance::from_parts(group, 0b011, BigUint::from(3u8), ids, vec![(3, 1)]).unwrap();
        let r = exhaustive_coalitions(&inst).unwrap();
        assert!(r.passed);
        assert_eq!(r.witness.as_deref(), Some("7 coalitions, 2 authorized"));
        // 17 * 11 = 1 (mod 31), so {1, 3} now passes
        inst.corrupt_token(3, BigUint::from(11u8)).unwrap();
        let r = exhaustive_coalitions(&inst).unwrap();
        assert!(!r.passed);
        assert!(r.witness.unwrap().contains('3'));
    }
}
