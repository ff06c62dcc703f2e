//! Monotone access structures given by their minimal authorized sets.
//!
//! Parties are numbered from 1. A coalition is a bitmask with bit `i - 1`
//! set for party `i`.

use alloc::format;
use alloc::vec::Vec;

use rand_core::RngCore;

use crate::error::{Error, Result};

/// Largest party count representable in a coalition mask.
pub const MAX_PARTIES: usize = 31;

pub type Coalition = u32;

/// Builds a coalition mask from 1-based party numbers.
pub fn coalition(parties: &[usize]) -> Result<Coalition> {
    let mut mask = 0;
    for &p in parties {
        if p == 0 || p > MAX_PARTIES {
            return Err(Error::InvalidArgument(format!("party {p} outside 1..={MAX_PARTIES}")));
        }
        mask |= 1 << (p - 1);
    }
    Ok(mask)
}

/// 1-based party numbers of a coalition, ascending.
pub fn parties_of(mask: Coalition) -> Vec<usize> {
    (0..32).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect()
}

pub fn is_subset(a: Coalition, b: Coalition) -> bool {
    a & !b == 0
}

/// `ell` parties with a basis of minimal authorized sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AccessStructure {
    ell: usize,
    minimal_sets: Vec<Coalition>,
}

impl AccessStructure {
    /// Checks only that every set is nonempty and names parties in
    /// `1..=ell`; see [`validate_structure`] for the scheme's constraints.
    pub fn new(ell: usize, minimal_sets: &[Vec<usize>]) -> Result<Self> {
        if ell == 0 || ell > MAX_PARTIES {
            return Err(Error::InvalidStructure(format!("party count {ell} outside 1..={MAX_PARTIES}")));
        }
        let mut masks = Vec::with_capacity(minimal_sets.len());
        for set in minimal_sets {
            if set.is_empty() {
                return Err(Error::InvalidStructure("empty minimal set".into()));
            }
            if let Some(&p) = set.iter().find(|&&p| p == 0 || p > ell) {
                return Err(Error::InvalidStructure(format!("party {p} outside 1..={ell}")));
            }
            masks.push(coalition(set)?);
        }
        Self::from_masks(ell, masks)
    }

    pub fn from_masks(ell: usize, minimal_sets: Vec<Coalition>) -> Result<Self> {
        if ell == 0 || ell > MAX_PARTIES {
            return Err(Error::InvalidStructure(format!("party count {ell} outside 1..={MAX_PARTIES}")));
        }
        if minimal_sets.is_empty() {
            return Err(Error::EmptyInput);
        }
        let all = all_parties(ell);
        if minimal_sets.iter().any(|&s| s == 0 || !is_subset(s, all)) {
            return Err(Error::InvalidStructure("minimal set empty or outside the party range".into()));
        }
        Ok(Self { ell, minimal_sets })
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn minimal_sets(&self) -> &[Coalition] {
        &self.minimal_sets
    }

    pub fn minimal_sets_as_parties(&self) -> Vec<Vec<usize>> {
        self.minimal_sets.iter().map(|&s| parties_of(s)).collect()
    }

    /// Whether `b` contains some minimal set.
    pub fn is_authorized(&self, b: Coalition) -> bool {
        self.minimal_sets.iter().any(|&s| is_subset(s, b))
    }
}

pub(crate) fn all_parties(ell: usize) -> Coalition {
    if ell >= 32 {
        u32::MAX
    } else {
        (1u32 << ell) - 1
    }
}

/// Reduces a list of authorized sets to its minimal elements, dropping
/// duplicates. Output keeps first-occurrence order.
pub fn minimal_sets(authorized: &[Vec<usize>]) -> Result<Vec<Vec<usize>>> {
    if authorized.is_empty() {
        return Err(Error::EmptyInput);
    }
    let masks = authorized.iter().map(|s| coalition(s)).collect::<Result<Vec<_>>>()?;
    let mut keep: Vec<Coalition> = Vec::new();
    for (i, &a) in masks.iter().enumerate() {
        let dominated = masks.iter().any(|&b| b != a && is_subset(b, a));
        if !dominated && !keep.contains(&a) && !masks[..i].contains(&a) {
            keep.push(a);
        }
    }
    Ok(keep.into_iter().map(parties_of).collect())
}

/// A random structure the scheme accepts: up to `max_sets` pairwise
/// incomparable sets, each with at least [`min_set_size`] parties.
pub fn random_structure<R: RngCore + ?Sized>(rng: &mut R, ell: usize, max_sets: usize) -> Result<AccessStructure> {
    if ell < 2 || ell > 20 || max_sets == 0 {
        return Err(Error::InvalidArgument(format!("cannot sample {max_sets} sets over {ell} parties")));
    }
    let min_size = min_set_size(ell) as u32;
    let target = 1 + (rng.next_u32() as usize % max_sets);
    let mut sets: Vec<Coalition> = Vec::new();
    for _ in 0..64 * max_sets {
        if sets.len() == target {
            break;
        }
        let candidate = rng.next_u32() & all_parties(ell);
        if candidate.count_ones() >= min_size
            && sets.iter().all(|&s| !is_subset(s, candidate) && !is_subset(candidate, s))
        {
            sets.push(candidate);
        }
    }
    if sets.is_empty() {
        sets.push(all_parties(ell));
    }
    AccessStructure::from_masks(ell, sets)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureReport {
    pub ell: usize,
    /// [`min_set_size`].
    pub min_size: usize,
    /// Index pairs `(i, j)` where set `i` is contained in set `j`.
    pub containments: Vec<(usize, usize)>,
    /// Indices of sets smaller than `min_size`.
    pub undersized: Vec<usize>,
}

impl StructureReport {
    pub fn passed(&self) -> bool {
        self.containments.is_empty() && self.undersized.is_empty()
    }

    pub fn describe(&self, access: &AccessStructure) -> alloc::string::String {
        let mut parts = Vec::new();
        for &(i, j) in &self.containments {
            parts.push(format!(
                "{:?} is contained in {:?}",
                parties_of(access.minimal_sets[i]),
                parties_of(access.minimal_sets[j])
            ));
        }
        for &i in &self.undersized {
            let s = access.minimal_sets[i];
            parts.push(format!("{:?} has {} < {} parties", parties_of(s), s.count_ones(), self.min_size));
        }
        parts.join("; ")
    }
}

/// Smallest minimal-set size the scheme supports for `ell` parties.
pub fn min_set_size(ell: usize) -> usize {
    ell.div_ceil(2).max(2)
}

/// The scheme needs an antichain whose sets each hold at least half of the
/// `ell` parties, since each member can mask at most one outsider, and at
/// least two parties, since a lone member would need identifier 0.
pub fn validate_structure(access: &AccessStructure, ell: usize) -> StructureReport {
    let min_size = min_set_size(ell);
    let sets = &access.minimal_sets;
    let mut containments = Vec::new();
    for i in 0..sets.len() {
        for j in 0..sets.len() {
            if i != j && is_subset(sets[i], sets[j]) && (sets[i] != sets[j] || i < j) {
                containments.push((i, j));
            }
        }
    }
    let undersized = sets
        .iter()
        .enumerate()
        .filter(|(_, s)| (s.count_ones() as usize) < min_size)
        .map(|(i, _)| i)
        .collect();
    StructureReport {
        ell,
        min_size,
        containments,
        undersized,
    }
}

/// [`validate_structure`] as a precondition check.
pub fn require_valid(access: &AccessStructure) -> Result<()> {
    let report = validate_structure(access, access.ell);
    if report.passed() {
        Ok(())
    } else {
        Err(Error::InvalidStructure(report.describe(access)))
    }
}
