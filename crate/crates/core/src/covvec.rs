//! Covering vectors over `Z_m`.
//!
//! A family is `S`-covering when every vector is self-orthogonal and any two
//! distinct vectors have inner product 0 if the Hadamard weight of their
//! product is 0 mod `m`, and a residue in `S` otherwise. Incidence vectors of
//! a set-system form such a family with `<v_i, v_j> = |H_i & H_j| mod m`.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::bbrpoly::MAX_WITNESSES;
use crate::error::{Error, Result};
use crate::numth::trial_factor;
use crate::setsys::SetSystem;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Coords {
    /// Ascending indices with nonzero values.
    Sparse(Vec<(usize, BigUint)>),
    Dense(Vec<BigUint>),
}

/// A vector in `(Z_m)^h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoveringVector {
    h: usize,
    modulus: BigUint,
    coords: Coords,
    source: Option<usize>,
}

impl CoveringVector {
    /// Builds a sparse vector; entries are reduced, zeros dropped, and
    /// repeated indices rejected.
    pub fn sparse(
        h: usize,
        modulus: BigUint,
        entries: impl IntoIterator<Item = (usize, BigUint)>,
        source: Option<usize>,
    ) -> Result<Self> {
        check_modulus(&modulus)?;
        let mut out: Vec<(usize, BigUint)> = Vec::new();
        for (idx, val) in entries {
            if idx >= h {
                return Err(Error::UnknownIndex(idx));
            }
            out.push((idx, val % &modulus));
        }
        out.sort_by_key(|e| e.0);
        if out.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidArgument("repeated coordinate index".into()));
        }
        out.retain(|e| !e.1.is_zero());
        Ok(Self {
            h,
            modulus,
            coords: Coords::Sparse(out),
            source,
        })
    }

    pub fn dense(modulus: BigUint, coords: Vec<BigUint>, source: Option<usize>) -> Result<Self> {
        check_modulus(&modulus)?;
        let coords = coords.into_iter().map(|c| c % &modulus).collect::<Vec<_>>();
        Ok(Self {
            h: coords.len(),
            modulus,
            coords: Coords::Dense(coords),
            source,
        })
    }

    /// Dimension `h`.
    pub fn h(&self) -> usize {
        self.h
    }

    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    pub fn source(&self) -> Option<usize> {
        self.source
    }

    pub fn is_sparse(&self) -> bool {
        matches!(self.coords, Coords::Sparse(_))
    }

    pub fn coord(&self, idx: usize) -> BigUint {
        match &self.coords {
            Coords::Sparse(e) => e
                .binary_search_by_key(&idx, |x| x.0)
                .map(|i| e[i].1.clone())
                .unwrap_or_default(),
            Coords::Dense(d) => d.get(idx).cloned().unwrap_or_default(),
        }
    }

    /// Nonzero coordinates in ascending index order.
    pub fn nonzero(&self) -> Vec<(usize, BigUint)> {
        match &self.coords {
            Coords::Sparse(e) => e.clone(),
            Coords::Dense(d) => d
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, v)| (i, v.clone()))
                .collect(),
        }
    }

    pub fn to_dense(&self) -> Vec<BigUint> {
        let mut out = vec![BigUint::zero(); self.h];
        for (i, v) in self.nonzero() {
            out[i] = v;
        }
        out
    }

    /// Overwrites one coordinate.
    pub fn set_coord(&mut self, idx: usize, value: BigUint) -> Result<()> {
        if idx >= self.h {
            return Err(Error::UnknownIndex(idx));
        }
        let value = value % &self.modulus;
        match &mut self.coords {
            Coords::Dense(d) => d[idx] = value,
            Coords::Sparse(e) => match e.binary_search_by_key(&idx, |x| x.0) {
                Ok(i) if value.is_zero() => {
                    e.remove(i);
                }
                Ok(i) => e[i].1 = value,
                Err(_) if value.is_zero() => {}
                Err(i) => e.insert(i, (idx, value)),
            },
        }
        Ok(())
    }

    pub fn is_self_orthogonal(&self) -> bool {
        inner(self, self).map(|v| v.is_zero()).unwrap_or(false)
    }
}

fn check_modulus(m: &BigUint) -> Result<()> {
    if *m < BigUint::from(2u8) {
        return Err(Error::InvalidArgument("modulus must be at least 2".into()));
    }
    Ok(())
}

fn check_compatible(u: &CoveringVector, v: &CoveringVector) -> Result<()> {
    if u.h != v.h {
        return Err(Error::DimensionMismatch {
            expected: u.h,
            found: v.h,
        });
    }
    if u.modulus != v.modulus {
        return Err(Error::InvalidArgument("vectors over different moduli".into()));
    }
    Ok(())
}

/// Coordinatewise products over the common support, unreduced.
fn products(u: &CoveringVector, v: &CoveringVector) -> Vec<BigUint> {
    let (a, b) = (u.nonzero(), v.nonzero());
    let (mut i, mut j, mut out) = (0, 0, Vec::new());
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                out.push(&a[i].1 * &b[j].1);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// `<u, v> mod m`.
pub fn inner(u: &CoveringVector, v: &CoveringVector) -> Result<BigUint> {
    check_compatible(u, v)?;
    let sum: BigUint = products(u, v).into_iter().sum();
    Ok(sum % &u.modulus)
}

/// Hamming weight of `u o v mod m`.
pub fn hadamard_weight(u: &CoveringVector, v: &CoveringVector) -> Result<u64> {
    check_compatible(u, v)?;
    Ok(products(u, v)
        .into_iter()
        .filter(|p| !(p % &u.modulus).is_zero())
        .count() as u64)
}

/// Incidence vector of member set `index` of `ss`.
pub fn from_set(ss: &SetSystem, index: usize) -> Result<CoveringVector> {
    let set = ss.sets().get(index).ok_or(Error::UnknownIndex(index))?;
    CoveringVector::sparse(
        ss.h(),
        BigUint::from(ss.m()),
        set.elements.iter().map(|&e| (e as usize, BigUint::from(1u8))),
        Some(index),
    )
}

/// Incidence vectors of every member set of `ss`.
pub fn family_from_sets(ss: &SetSystem) -> Result<Vec<CoveringVector>> {
    (0..ss.sets().len()).map(|i| from_set(ss, i)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoveringViolation {
    NotSelfOrthogonal { inner: BigUint },
    /// Weight is 0 mod `m` but the inner product is not.
    NonzeroAtZeroWeight { inner: BigUint },
    /// Weight is nonzero mod `m` but the inner product lies outside `S`.
    OutsideResidueSet { inner: BigUint },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoveringWitness {
    pub vectors: Vec<usize>,
    pub violation: CoveringViolation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoveringReport {
    pub vectors: usize,
    pub pairs: u64,
    pub violations: u64,
    /// Inner products of distinct pairs with nonzero weight.
    pub realized_residues: BTreeSet<BigUint>,
    /// `2^r - 1`, when the modulus could be factored.
    pub residue_bound: Option<u64>,
    pub witnesses: Vec<CoveringWitness>,
}

impl CoveringReport {
    pub fn within_bound(&self) -> bool {
        self.residue_bound
            .map_or(true, |b| self.realized_residues.len() as u64 <= b)
    }

    pub fn passed(&self) -> bool {
        self.violations == 0 && self.within_bound()
    }
}

/// Checks both covering clauses over all vectors and distinct pairs. When
/// `s` is `None` the residue set is taken to be whatever nonzero residues the
/// family realizes.
pub fn verify_covering_family(
    family: &[CoveringVector],
    s: Option<&BTreeSet<BigUint>>,
) -> Result<CoveringReport> {
    let first = family.first().ok_or(Error::EmptyInput)?;
    let m = first.modulus.clone();
    let residue_bound = m.to_u64().map(|m| {
        let r = trial_factor(m).len() as u32;
        (1u64 << r) - 1
    });
    let mut report = CoveringReport {
        vectors: family.len(),
        pairs: 0,
        violations: 0,
        realized_residues: BTreeSet::new(),
        residue_bound,
        witnesses: Vec::new(),
    };
    let fail = |report: &mut CoveringReport, vectors: Vec<usize>, violation| {
        report.violations += 1;
        if report.witnesses.len() < MAX_WITNESSES {
            report.witnesses.push(CoveringWitness { vectors, violation });
        }
    };
    for (i, v) in family.iter().enumerate() {
        let ip = inner(v, v)?;
        if !ip.is_zero() {
            fail(&mut report, vec![i], CoveringViolation::NotSelfOrthogonal { inner: ip });
        }
    }
    for i in 0..family.len() {
        for j in i + 1..family.len() {
            report.pairs += 1;
            let ip = inner(&family[i], &family[j])?;
            let weight = hadamard_weight(&family[i], &family[j])?;
            if (BigUint::from(weight) % &m).is_zero() {
                if !ip.is_zero() {
                    fail(&mut report, vec![i, j], CoveringViolation::NonzeroAtZeroWeight { inner: ip });
                }
                continue;
            }
            let allowed = match s {
                Some(s) => s.contains(&ip),
                None => !ip.is_zero(),
            };
            if allowed {
                report.realized_residues.insert(ip);
            } else {
                fail(&mut report, vec![i, j], CoveringViolation::OutsideResidueSet { inner: ip });
            }
        }
    }
    Ok(report)
}
