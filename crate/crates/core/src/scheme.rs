//! Secret sharing with a hidden access structure.
//!
//! Each minimal authorized set `omega` gets its own run: one encoding over
//! `(q, mu)` yields tokens, a second over `(q', gamma)` yields exponents `y`.
//! Members of `omega` receive `b_i * gamma^{y_i}` with `prod b_i = k`, every
//! other party `gamma^{y_j}`. Because the `y_i` over `omega` sum to 0 mod
//! `q' - 1`, the shares of exactly `omega` multiply to `k`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand_chacha::ChaCha20Rng;
use rand_core::SeedableRng;

use crate::access::{parties_of, require_valid, AccessStructure, Coalition};
use crate::ases::{encode_with_rng, hsver_monotone, hsver_strict, AsesInstance, EncodeOptions, DEFAULT_COALITION_BUDGET};
use crate::error::{Error, Result};
use crate::numth::{is_prime, mod_inverse, mod_pow, random_range, GroupParams};

/// Randomness streams per run: tokens, share exponents, blinding factors.
const STREAMS_PER_RUN: u64 = 3;

/// Public material of one run: a token and a share per party.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublicRun {
    pub run_id: u32,
    /// Index `i - 1` for party `i`.
    pub tokens: Vec<BigUint>,
    pub shares: Vec<BigUint>,
}

/// Everything the parties receive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShareBundle {
    pub q: BigUint,
    pub qprime: BigUint,
    pub ell: usize,
    pub runs: Vec<PublicRun>,
}

impl ShareBundle {
    /// Checks run shapes against `ell`.
    pub fn check(&self) -> Result<()> {
        if self.runs.is_empty() {
            return Err(Error::InconsistentBundle("no runs".into()));
        }
        let mut ids = BTreeSet::new();
        for run in &self.runs {
            if run.tokens.len() != self.ell || run.shares.len() != self.ell {
                return Err(Error::InconsistentBundle(format!(
                    "run {} has {} tokens and {} shares for {} parties",
                    run.run_id,
                    run.tokens.len(),
                    run.shares.len(),
                    self.ell
                )));
            }
            if !ids.insert(run.run_id) {
                return Err(Error::InconsistentBundle(format!("duplicate run id {}", run.run_id)));
            }
        }
        Ok(())
    }

    /// Tokens plus shares held by each party.
    pub fn elements_per_party(&self) -> usize {
        2 * self.runs.len()
    }
}

/// Dealer-side record of one run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DealerRun {
    pub run_id: u32,
    pub omega: Coalition,
    pub token_instance: AsesInstance,
    /// Its `mu` is `gamma`, its identifiers the exponents `y`.
    pub share_instance: AsesInstance,
    /// Blinding factors of the members of `omega`, ascending by party.
    pub blinding: Vec<BigUint>,
}

impl DealerRun {
    /// Computes the public run from the two encodings and the blinding
    /// factors.
    pub fn new(
        run_id: u32,
        token_instance: AsesInstance,
        share_instance: AsesInstance,
        blinding: Vec<BigUint>,
    ) -> Result<Self> {
        let omega = token_instance.omega();
        if share_instance.omega() != omega || share_instance.ell() != token_instance.ell() {
            return Err(Error::InconsistentBundle("token and share encodings disagree".into()));
        }
        if blinding.len() != omega.count_ones() as usize {
            return Err(Error::DimensionMismatch {
                expected: omega.count_ones() as usize,
                found: blinding.len(),
            });
        }
        let qprime = share_instance.q();
        if blinding.iter().any(|b| b.is_zero() || b >= qprime) {
            return Err(Error::InvalidArgument("blinding factor outside Z_q'^*".into()));
        }
        Ok(Self {
            run_id,
            omega,
            token_instance,
            share_instance,
            blinding,
        })
    }

    pub fn gamma(&self) -> &BigUint {
        self.share_instance.mu()
    }

    /// The secret this run reconstructs to.
    pub fn secret(&self) -> BigUint {
        let qprime = self.share_instance.q();
        self.blinding.iter().fold(BigUint::one(), |acc, b| acc * b % qprime)
    }

    pub fn public(&self) -> Result<PublicRun> {
        let qprime = self.share_instance.q();
        let gamma = self.gamma();
        let members = parties_of(self.omega);
        let mut shares = Vec::with_capacity(self.share_instance.ell());
        for (idx, y) in self.share_instance.identifiers().iter().enumerate() {
            let base = mod_pow(gamma, y, qprime)?;
            let share = match members.iter().position(|&p| p == idx + 1) {
                Some(pos) => base * &self.blinding[pos] % qprime,
                None => base,
            };
            shares.push(share);
        }
        Ok(PublicRun {
            run_id: self.run_id,
            tokens: self.token_instance.tokens().to_vec(),
            shares,
        })
    }
}

/// Output of [`share`]: the public bundle plus the dealer's audit trail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dealing {
    pub bundle: ShareBundle,
    pub audit: Vec<DealerRun>,
}

impl Dealing {
    pub fn from_runs(runs: Vec<DealerRun>) -> Result<Self> {
        let first = runs.first().ok_or(Error::EmptyInput)?;
        let q = first.token_instance.q().clone();
        let qprime = first.share_instance.q().clone();
        let ell = first.token_instance.ell();
        let public = runs.iter().map(DealerRun::public).collect::<Result<Vec<_>>>()?;
        let bundle = ShareBundle {
            q,
            qprime,
            ell,
            runs: public,
        };
        bundle.check()?;
        Ok(Self { bundle, audit: runs })
    }
}

/// Stream `stream` of run `run` of the dealer's randomness for `seed`.
pub fn derived_rng(seed: u64, run: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(run * STREAMS_PER_RUN + stream);
    rng
}

/// Shares secret `k` under `access`. Randomness depends only on `seed` and
/// the run index, never on `k`; across secrets only the share of the last
/// member of each `omega` changes.
pub fn share(
    token_group: &GroupParams,
    share_group: &GroupParams,
    access: &AccessStructure,
    k: &BigUint,
    seed: u64,
) -> Result<Dealing> {
    share_with_options(token_group, share_group, access, k, seed, &EncodeOptions::default())
}

pub fn share_with_options(
    token_group: &GroupParams,
    share_group: &GroupParams,
    access: &AccessStructure,
    k: &BigUint,
    seed: u64,
    options: &EncodeOptions,
) -> Result<Dealing> {
    require_valid(access)?;
    let qprime = share_group.q();
    if k.is_zero() || k >= qprime {
        return Err(Error::InvalidSecret);
    }
    if !is_prime(qprime) {
        return Err(Error::NotPrime(format!("{qprime}")));
    }
    let ell = access.ell();
    let mut token_options = options.clone();
    let mut share_options = options.clone();
    let mut runs = Vec::with_capacity(access.minimal_sets().len());
    for (r, &omega) in access.minimal_sets().iter().enumerate() {
        let tokens = encode_with_rng(token_group, ell, omega, &mut derived_rng(seed, r as u64, 0), &token_options)?;
        let shares = encode_with_rng(share_group, ell, omega, &mut derived_rng(seed, r as u64, 1), &share_options)?;
        token_options.forbidden.extend(tokens.identifiers().iter().cloned());
        share_options.forbidden.extend(shares.identifiers().iter().cloned());

        let mut rng = derived_rng(seed, r as u64, 2);
        let one = BigUint::one();
        let mut blinding: Vec<BigUint> = (1..omega.count_ones()).map(|_| random_range(&mut rng, &one, qprime)).collect();
        let partial = blinding.iter().fold(BigUint::one(), |acc, b| acc * b % qprime);
        let inv = mod_inverse(&partial, qprime).ok_or(Error::InvalidSecret)?;
        blinding.push(k * inv % qprime);
        runs.push(DealerRun::new(r as u32, tokens, shares, blinding)?);
    }
    Dealing::from_runs(runs)
}

/// A successful reconstruction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recovered {
    pub secret: BigUint,
    pub run_id: u32,
    /// Parties whose tokens multiplied to 1.
    pub witness: Vec<usize>,
}

fn coalition_parties(bundle: &ShareBundle, coalition: Coalition) -> Result<Vec<usize>> {
    bundle.check()?;
    let parties = parties_of(coalition);
    if parties.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(&p) = parties.iter().find(|&&p| p > bundle.ell) {
        return Err(Error::InconsistentBundle(format!("party {p} not in a bundle of {} parties", bundle.ell)));
    }
    Ok(parties)
}

/// Finds, run by run, the smallest sub-coalition with token product 1 and
/// multiplies its shares.
pub fn recon(bundle: &ShareBundle, coalition: Coalition) -> Result<Recovered> {
    recon_with_budget(bundle, coalition, DEFAULT_COALITION_BUDGET)
}

pub fn recon_with_budget(bundle: &ShareBundle, coalition: Coalition, budget: usize) -> Result<Recovered> {
    let parties = coalition_parties(bundle, coalition)?;
    for run in &bundle.runs {
        let tokens: Vec<(usize, BigUint)> = parties.iter().map(|&p| (p, run.tokens[p - 1].clone())).collect();
        if let Some(witness) = hsver_monotone(&tokens, &bundle.q, budget)? {
            let secret = witness
                .iter()
                .fold(BigUint::one(), |acc, &p| acc * &run.shares[p - 1] % &bundle.qprime);
            return Ok(Recovered {
                secret,
                run_id: run.run_id,
                witness,
            });
        }
    }
    Err(Error::NotAuthorized)
}

/// Multiplies all of the coalition's tokens and shares; succeeds only for a
/// coalition equal to some minimal set.
pub fn recon_strict(bundle: &ShareBundle, coalition: Coalition) -> Result<Recovered> {
    let parties = coalition_parties(bundle, coalition)?;
    for run in &bundle.runs {
        let tokens: Vec<BigUint> = parties.iter().map(|&p| run.tokens[p - 1].clone()).collect();
        if hsver_strict(&tokens, &bundle.q) {
            let secret = parties
                .iter()
                .fold(BigUint::one(), |acc, &p| acc * &run.shares[p - 1] % &bundle.qprime);
            return Ok(Recovered {
                secret,
                run_id: run.run_id,
                witness: parties,
            });
        }
    }
    Err(Error::NotAuthorized)
}
