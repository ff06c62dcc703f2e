//! Access structure encoding: hidden identifiers whose sum vanishes mod `m`
//! exactly on coalitions containing the encoded minimal set, published as
//! tokens `mu^x mod q`.
//!
//! Identifiers are drawn by a vector-guided sampler (inner products with an
//! isotropic access-structure vector) and then certified by exhaustive
//! enumeration: every coalition that does not contain `omega` must have a
//! token product different from 1. Draws failing the certificate are
//! discarded.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

use crate::access::{all_parties, is_subset, parties_of, Coalition};
use crate::bbrpoly::for_each_subset_of_size;
use crate::covvec::{inner, CoveringVector};
use crate::error::{Error, Result};
use crate::numth::{mod_pow, random_below, random_range, random_two_squares, GroupParams};

/// Resampling attempts before giving up.
pub const DEFAULT_RETRY_BOUND: u32 = 1000;

/// Largest party count for exhaustive coalition enumeration.
pub const DEFAULT_COALITION_BUDGET: usize = 20;

/// Extra coordinates of the access-structure vector beyond `|omega|`.
const VECTOR_SLACK: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodeOptions {
    pub retry_bound: u32,
    pub coalition_budget: usize,
    /// Identifiers that must not be emitted, e.g. those of earlier runs.
    pub forbidden: BTreeSet<BigUint>,
}

impl Default for EncodeOptions {
    fn default() -> Self {
        Self {
            retry_bound: DEFAULT_RETRY_BOUND,
            coalition_budget: DEFAULT_COALITION_BUDGET,
            forbidden: BTreeSet::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampler {
    /// Inner products with an isotropic vector (squarefree `m`).
    Vector,
    /// Direct draws with the last `omega` identifier solving the sum.
    Direct,
    /// Supplied by the caller.
    Fixed,
}

/// Resampling statistics for one encoding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodeStats {
    pub sampler: Sampler,
    pub attempts: u32,
    pub zero_identifiers: u32,
    pub collisions: u32,
    pub certificate_failures: u32,
    pub mu_rejections: u32,
}

impl EncodeStats {
    fn new(sampler: Sampler) -> Self {
        Self {
            sampler,
            attempts: 0,
            zero_identifiers: 0,
            collisions: 0,
            certificate_failures: 0,
            mu_rejections: 0,
        }
    }

    fn diagnostics(&self) -> String {
        format!(
            "zero identifiers {}, collisions {}, certificate failures {}, mu rejections {}",
            self.zero_identifiers, self.collisions, self.certificate_failures, self.mu_rejections
        )
    }
}

/// Dealer-side vectors behind the identifiers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorTrace {
    pub access_vector: CoveringVector,
    /// One vector per party, index `i - 1` for party `i`.
    pub party_vectors: Vec<CoveringVector>,
}

/// One encoded minimal set. Identifiers and vectors are dealer secrets;
/// only [`AsesInstance::public_tokens`] goes to the parties.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AsesInstance {
    group: GroupParams,
    ell: usize,
    omega: Coalition,
    mu: BigUint,
    identifiers: Vec<BigUint>,
    tokens: Vec<BigUint>,
    covering_map: Vec<(usize, usize)>,
    trace: Option<VectorTrace>,
    stats: EncodeStats,
}

impl AsesInstance {
    /// Assembles an instance from known identifiers and checks every
    /// invariant, including the soundness certificate.
    pub fn from_parts(
        group: GroupParams,
        omega: Coalition,
        mu: BigUint,
        identifiers: Vec<BigUint>,
        covering_map: Vec<(usize, usize)>,
    ) -> Result<Self> {
        let ell = identifiers.len();
        check_shape(&group, ell, omega, DEFAULT_COALITION_BUDGET)?;
        let m = group.m();
        let identifiers: Vec<BigUint> = identifiers.into_iter().map(|x| x % m).collect();
        if let Some(reason) = identifier_defect(&identifiers, &BTreeSet::new()) {
            return Err(Error::InvalidArgument(reason.into()));
        }
        let omega_sum: BigUint = parties_of(omega).iter().map(|&i| &identifiers[i - 1]).sum();
        if !(omega_sum % m).is_zero() {
            return Err(Error::InvalidArgument("omega identifiers do not sum to 0 mod m".into()));
        }
        if mu <= BigUint::one() || mu >= *group.q() {
            return Err(Error::InvalidArgument("mu outside [2, q-1]".into()));
        }
        if !certificate_holds(&identifiers, omega, m, None) {
            return Err(Error::InvalidArgument("some unauthorized coalition sums to 0 mod m".into()));
        }
        if !certificate_holds(&identifiers, omega, m, Some(&multiplicative_order(&mu, &group)?)) {
            return Err(Error::InvalidArgument("mu has a token product 1 on an unauthorized coalition".into()));
        }
        check_covering_map(ell, omega, &covering_map)?;
        let tokens = tokens_for(&mu, &identifiers, group.q())?;
        Ok(Self {
            group,
            ell,
            omega,
            mu,
            identifiers,
            tokens,
            covering_map,
            trace: None,
            stats: EncodeStats::new(Sampler::Fixed),
        })
    }

    pub fn group(&self) -> &GroupParams {
        &self.group
    }

    pub fn q(&self) -> &BigUint {
        self.group.q()
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn omega(&self) -> Coalition {
        self.omega
    }

    pub fn mu(&self) -> &BigUint {
        &self.mu
    }

    /// Identifier of each party, index `i - 1` for party `i`.
    pub fn identifiers(&self) -> &[BigUint] {
        &self.identifiers
    }

    pub fn tokens(&self) -> &[BigUint] {
        &self.tokens
    }

    /// `(covered party, covering party)` pairs, 1-based.
    pub fn covering_map(&self) -> &[(usize, usize)] {
        &self.covering_map
    }

    pub fn trace(&self) -> Option<&VectorTrace> {
        self.trace.as_ref()
    }

    pub fn stats(&self) -> &EncodeStats {
        &self.stats
    }

    /// `(party, token)` pairs.
    pub fn public_tokens(&self) -> Vec<(usize, BigUint)> {
        self.tokens.iter().cloned().enumerate().map(|(i, t)| (i + 1, t)).collect()
    }

    /// Replaces one token, for fault-injection tests.
    pub fn corrupt_token(&mut self, party: usize, token: BigUint) -> Result<()> {
        let slot = self
            .tokens
            .get_mut(party.wrapping_sub(1))
            .ok_or(Error::UnknownIndex(party))?;
        *slot = token;
        Ok(())
    }
}

fn check_shape(group: &GroupParams, ell: usize, omega: Coalition, budget: usize) -> Result<()> {
    if group.eta() < ell {
        return Err(Error::GroupTooSmall {
            eta: group.eta(),
            parties: ell,
        });
    }
    if ell == 0 || ell > budget.min(31) {
        return Err(Error::BudgetExceeded {
            what: "parties",
            requested: ell as u64,
            limit: budget.min(31) as u64,
        });
    }
    if omega == 0 || !is_subset(omega, all_parties(ell)) {
        return Err(Error::InvalidOmega(format!("{:?} is not a nonempty subset of 1..={ell}", parties_of(omega))));
    }
    if omega.count_ones() < 2 {
        return Err(Error::InvalidOmega("a one-party set would need identifier 0".into()));
    }
    if (2 * omega.count_ones() as usize) < ell {
        return Err(Error::InvalidOmega(format!(
            "|omega| = {} cannot cover {} parties",
            omega.count_ones(),
            ell
        )));
    }
    Ok(())
}

fn check_covering_map(ell: usize, omega: Coalition, map: &[(usize, usize)]) -> Result<()> {
    let outside: Vec<usize> = parties_of(all_parties(ell) & !omega);
    let covered: Vec<usize> = map.iter().map(|e| e.0).collect();
    let covering: BTreeSet<usize> = map.iter().map(|e| e.1).collect();
    let mut sorted = covered.clone();
    sorted.sort_unstable();
    let in_omega = map.iter().all(|&(_, j)| j >= 1 && omega >> (j - 1) & 1 == 1);
    if sorted != outside || covering.len() != map.len() || !in_omega {
        return Err(Error::InvalidArgument(
            "covering map must injectively assign an omega member to every outside party".into(),
        ));
    }
    Ok(())
}

fn identifier_defect(ids: &[BigUint], forbidden: &BTreeSet<BigUint>) -> Option<&'static str> {
    if ids.iter().any(Zero::is_zero) {
        return Some("zero identifier");
    }
    let distinct: BTreeSet<&BigUint> = ids.iter().collect();
    if distinct.len() != ids.len() || ids.iter().any(|x| forbidden.contains(x)) {
        return Some("identifier collision");
    }
    None
}

fn tokens_for(mu: &BigUint, ids: &[BigUint], q: &BigUint) -> Result<Vec<BigUint>> {
    ids.iter().map(|x| mod_pow(mu, x, q)).collect()
}

/// Order of `mu` in `Z_q^*`, using the factorization of `m = q - 1`.
pub fn multiplicative_order(mu: &BigUint, group: &GroupParams) -> Result<BigUint> {
    let q = group.q();
    let mut order = group.m().clone();
    for f in group.m_factors() {
        for _ in 0..f.alpha {
            if !(&order % &f.p).is_zero() {
                break;
            }
            let candidate = &order / &f.p;
            if mod_pow(mu, &candidate, q)?.is_one() {
                order = candidate;
            } else {
                break;
            }
        }
    }
    Ok(order)
}

/// Whether every coalition not containing `omega` has identifier sum
/// nonzero modulo `modulus` (and modulo `order`, when given).
fn certificate_holds(ids: &[BigUint], omega: Coalition, modulus: &BigUint, order: Option<&BigUint>) -> bool {
    let reducer = order.unwrap_or(modulus);
    let ids: Vec<BigUint> = ids.iter().map(|x| x % reducer).collect();
    let mut ok = true;
    let mut stack: Vec<(usize, Coalition, BigUint)> = vec![(0, 0, BigUint::zero())];
    // depth-first over include/exclude decisions
    while let Some((i, mask, sum)) = stack.pop() {
        if !ok {
            break;
        }
        if i == ids.len() {
            if mask != 0 && !is_subset(omega, mask) && sum.is_zero() {
                ok = false;
            }
            continue;
        }
        stack.push((i + 1, mask, sum.clone()));
        let mut with = sum + &ids[i];
        if with >= *reducer {
            with -= reducer;
        }
        stack.push((i + 1, mask | 1 << i, with));
    }
    ok
}

/// Encodes `omega` for `ell` parties with a seeded ChaCha20 stream.
pub fn encode(group: &GroupParams, ell: usize, omega: Coalition, seed: u64) -> Result<AsesInstance> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    encode_with_rng(group, ell, omega, &mut rng, &EncodeOptions::default())
}

pub fn encode_with_rng<R: RngCore + ?Sized>(
    group: &GroupParams,
    ell: usize,
    omega: Coalition,
    rng: &mut R,
    options: &EncodeOptions,
) -> Result<AsesInstance> {
    check_shape(group, ell, omega, options.coalition_budget)?;
    let m = group.m();
    let sampler = if group.is_squarefree() {
        Sampler::Vector
    } else {
        Sampler::Direct
    };
    let mut stats = EncodeStats::new(sampler);
    while stats.attempts < options.retry_bound {
        stats.attempts += 1;
        let covering_map = random_covering_map(rng, ell, omega);
        let (ids, trace) = match sampler {
            Sampler::Vector => {
                let (ids, trace) = vector_identifiers(rng, group, ell, omega, &covering_map)?;
                (ids, Some(trace))
            }
            _ => (direct_identifiers(rng, m, ell, omega), None),
        };
        match identifier_defect(&ids, &options.forbidden) {
            Some("zero identifier") => {
                stats.zero_identifiers += 1;
                continue;
            }
            Some(_) => {
                stats.collisions += 1;
                continue;
            }
            None => {}
        }
        if !certificate_holds(&ids, omega, m, None) {
            stats.certificate_failures += 1;
            continue;
        }
        let two = BigUint::from(2u8);
        let mu = loop {
            if stats.mu_rejections >= options.retry_bound {
                return Err(Error::RetryExhausted {
                    attempts: stats.attempts,
                    diagnostics: stats.diagnostics(),
                });
            }
            let mu = random_range(rng, &two, group.q());
            let order = multiplicative_order(&mu, group)?;
            if certificate_holds(&ids, omega, m, Some(&order)) {
                break mu;
            }
            stats.mu_rejections += 1;
        };
        let tokens = tokens_for(&mu, &ids, group.q())?;
        return Ok(AsesInstance {
            group: group.clone(),
            ell,
            omega,
            mu,
            identifiers: ids,
            tokens,
            covering_map,
            trace,
            stats,
        });
    }
    Err(Error::RetryExhausted {
        attempts: stats.attempts,
        diagnostics: stats.diagnostics(),
    })
}

/// Random injection from the parties outside `omega` into `omega`.
fn random_covering_map<R: RngCore + ?Sized>(rng: &mut R, ell: usize, omega: Coalition) -> Vec<(usize, usize)> {
    let mut members = parties_of(omega);
    // Fisher-Yates
    for i in (1..members.len()).rev() {
        let j = (rng.next_u64() % (i as u64 + 1)) as usize;
        members.swap(i, j);
    }
    parties_of(all_parties(ell) & !omega).into_iter().zip(members).collect()
}

fn random_vector<R: RngCore + ?Sized>(rng: &mut R, m: &BigUint, h: usize) -> Result<CoveringVector> {
    CoveringVector::dense(m.clone(), (0..h).map(|_| random_below(rng, m)).collect(), None)
}

fn vector_identifiers<R: RngCore + ?Sized>(
    rng: &mut R,
    group: &GroupParams,
    ell: usize,
    omega: Coalition,
    covering_map: &[(usize, usize)],
) -> Result<(Vec<BigUint>, VectorTrace)> {
    let m = group.m();
    let members = parties_of(omega);
    let h = members.len() + VECTOR_SLACK;

    // isotropic v: free coordinates, then b^2 + c^2 = -<free, free>
    let mut coords: Vec<BigUint> = (0..h - 2).map(|_| random_below(rng, m)).collect();
    let partial: BigUint = coords.iter().map(|c| c * c).sum::<BigUint>() % m;
    let target = (m - partial) % m;
    let (b, c) = random_two_squares(rng, &target, group.m_factors())?;
    coords.push(b);
    coords.push(c);
    let v = CoveringVector::dense(m.clone(), coords, None)?;

    let mut party_vectors: Vec<Option<CoveringVector>> = vec![None; ell];
    let mut rest = v.to_dense();
    for &i in &members[..members.len() - 1] {
        let vi = random_vector(rng, m, h)?;
        for (r, x) in rest.iter_mut().zip(vi.to_dense()) {
            *r = (&*r + m - x) % m;
        }
        party_vectors[i - 1] = Some(vi);
    }
    party_vectors[members[members.len() - 1] - 1] = Some(CoveringVector::dense(m.clone(), rest, None)?);

    // v_e = v_j - v_i for a fresh v_j; redrawn a few times if <v, v_e> = 0
    for &(e, i) in covering_map {
        let vi = party_vectors[i - 1].clone().expect("omega vectors set");
        let mut ve = None;
        for _ in 0..8 {
            let vj = random_vector(rng, m, h)?;
            let diff: Vec<BigUint> = vj
                .to_dense()
                .into_iter()
                .zip(vi.to_dense())
                .map(|(a, b)| (a + m - b) % m)
                .collect();
            let candidate = CoveringVector::dense(m.clone(), diff, None)?;
            let zero = inner(&v, &candidate)?.is_zero();
            ve = Some(candidate);
            if !zero {
                break;
            }
        }
        party_vectors[e - 1] = ve;
    }

    let party_vectors: Vec<CoveringVector> = party_vectors.into_iter().map(|p| p.expect("every party assigned")).collect();
    let ids = party_vectors.iter().map(|p| inner(&v, p)).collect::<Result<Vec<_>>>()?;
    Ok((
        ids,
        VectorTrace {
            access_vector: v,
            party_vectors,
        },
    ))
}

fn direct_identifiers<R: RngCore + ?Sized>(rng: &mut R, m: &BigUint, ell: usize, omega: Coalition) -> Vec<BigUint> {
    let one = BigUint::one();
    let mut ids: Vec<BigUint> = (0..ell).map(|_| random_range(rng, &one, m)).collect();
    let members = parties_of(omega);
    let last = members[members.len() - 1] - 1;
    let others: BigUint = members[..members.len() - 1].iter().map(|&i| &ids[i - 1]).sum();
    ids[last] = (m - others % m) % m;
    ids
}

/// Literal token test: the product of all given tokens is 1 mod `q`.
pub fn hsver_strict(tokens: &[BigUint], q: &BigUint) -> bool {
    if tokens.is_empty() {
        return false;
    }
    tokens.iter().fold(BigUint::one(), |acc, t| acc * t % q).is_one()
}

/// Searches for the smallest nonempty sub-coalition whose token product is 1
/// mod `q`; returns its party numbers, or `None` when the coalition is
/// unauthorized.
pub fn hsver_monotone(tokens: &[(usize, BigUint)], q: &BigUint, budget: usize) -> Result<Option<Vec<usize>>> {
    if tokens.len() > budget.min(63) {
        return Err(Error::BudgetExceeded {
            what: "coalition size",
            requested: tokens.len() as u64,
            limit: budget.min(63) as u64,
        });
    }
    for k in 1..=tokens.len() {
        let mut found = None;
        for_each_subset_of_size(tokens.len(), k, |mask| {
            if found.is_some() {
                return;
            }
            let product = (0..tokens.len())
                .filter(|i| mask >> i & 1 == 1)
                .fold(BigUint::one(), |acc, i| acc * &tokens[i].1 % q);
            if product.is_one() {
                found = Some(mask);
            }
        });
        if let Some(mask) = found {
            return Ok(Some(
                (0..tokens.len()).filter(|i| mask >> i & 1 == 1).map(|i| tokens[i].0).collect(),
            ));
        }
    }
    Ok(None)
}

/// Token pairs of the parties in coalition `b`.
pub fn coalition_tokens(instance: &AsesInstance, b: Coalition) -> Vec<(usize, BigUint)> {
    parties_of(b)
        .into_iter()
        .filter(|&i| i <= instance.ell)
        .map(|i| (i, instance.tokens[i - 1].clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numth::group_from_primes;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn toy() -> AsesInstance {
        let group = group_from_primes(&[big(2), big(3), big(5)]).unwrap();
        AsesInstance::from_parts(group, 0b011, big(3), vec![big(7), big(23), big(11)], vec![(3, 1)]).unwrap()
    }

    #[test]
    fn toy_tokens() {
        let inst = toy();
        assert_eq!(inst.q(), &big(31));
        assert_eq!(inst.tokens(), &[big(17), big(11), big(13)]);
        let q = inst.q();
        assert!(hsver_strict(&[big(17), big(11)], q));
        assert!(!hsver_strict(&[big(17)], q));
        assert!(!hsver_strict(&[big(17), big(11), big(13)], q));
        assert_eq!(hsver_monotone(&coalition_tokens(&inst, 0b111), q, 20).unwrap(), Some(vec![1, 2]));
        assert_eq!(hsver_monotone(&coalition_tokens(&inst, 0b101), q, 20).unwrap(), None);
        for b in 1u32..8 {
            let witness = hsver_monotone(&coalition_tokens(&inst, b), q, 20).unwrap();
            assert_eq!(witness.is_some(), b & 0b011 == 0b011);
        }
    }

    #[test]
    fn from_parts_rejects_bad_inputs() {
        let group = group_from_primes(&[big(2), big(3), big(5)]).unwrap();
        let make = |ids: [u64; 3], mu: u64, omega: Coalition| {
            AsesInstance::from_parts(group.clone(), omega, big(mu), ids.iter().map(|&x| big(x)).collect(), vec![(3, 1)])
        };
        assert!(make([7, 23, 11], 3, 0b011).is_ok());
        assert!(make([7, 22, 11], 3, 0b011).is_err());
        assert!(make([7, 23, 0], 3, 0b011).is_err());
        assert!(make([7, 23, 23], 3, 0b011).is_err());
        // -1 has order 2 and 7 + 11 is even
        assert!(make([7, 23, 11], 30, 0b011).is_err());
        assert!(matches!(make([7, 23, 11], 3, 0b001), Err(Error::InvalidOmega(_))));
    }

    #[test]
    fn order_examples() {
        let group = group_from_primes(&[big(2), big(3), big(5)]).unwrap();
        assert_eq!(multiplicative_order(&big(3), &group).unwrap(), big(30));
        assert_eq!(multiplicative_order(&big(30), &group).unwrap(), big(2));
        assert_eq!(multiplicative_order(&big(2), &group).unwrap(), big(5));
    }

    #[test]
    fn encode_toy_group() {
        let group = group_from_primes(&[big(2), big(3), big(5)]).unwrap();
        for seed in 0..50 {
            let inst = encode(&group, 3, 0b011, seed).unwrap();
            assert_eq!(inst.stats().sampler, Sampler::Vector);
            assert!(inst.identifiers().iter().all(|x| !x.is_zero()));
            let trace = inst.trace().unwrap();
            assert!(trace.access_vector.is_self_orthogonal());
            for b in 1u32..8 {
                let ok = hsver_monotone(&coalition_tokens(&inst, b), inst.q(), 20).unwrap().is_some();
                assert_eq!(ok, b & 0b011 == 0b011, "seed {seed} coalition {b:b}");
            }
            assert_eq!(inst, encode(&group, 3, 0b011, seed).unwrap());
        }
    }

    #[test]
    fn encode_errors() {
        let group = group_from_primes(&[big(2), big(3)]).unwrap();
        assert!(matches!(encode(&group, 3, 0b011, 1), Err(Error::GroupTooSmall { .. })));
        let group = group_from_primes(&[big(2), big(3), big(5), big(7)]).unwrap();
        assert!(matches!(encode(&group, 4, 0b0001, 1), Err(Error::InvalidOmega(_))));
        assert!(matches!(encode(&group, 4, 0b10000, 1), Err(Error::InvalidOmega(_))));
    }

    #[test]
    fn forbidden_identifiers_are_avoided() {
        let group = group_from_primes(&[big(2), big(3), big(5), big(7)]).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let first = encode_with_rng(&group, 4, 0b0111, &mut rng, &EncodeOptions::default()).unwrap();
        let options = EncodeOptions {
            forbidden: first.identifiers().iter().cloned().collect(),
            ..EncodeOptions::default()
        };
        let second = encode_with_rng(&group, 4, 0b1110, &mut rng, &options).unwrap();
        assert!(second.identifiers().iter().all(|x| !options.forbidden.contains(x)));
    }
}
