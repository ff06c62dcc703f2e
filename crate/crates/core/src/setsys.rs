//! The set-system built from the intersection polynomial.
//!
//! Strings of length `n` over `n` symbols are compared through their
//! characteristic vectors. Cell `(x, y)` of the matrix `A` holds `Q~` evaluated
//! at the coordinatewise agreement of `psi(x)` and `psi(y)`, so it vanishes
//! mod `m` exactly when `x` and `y` cover each other (use the same symbols).
//!
//! `A` decomposes into `a_S` copies of the 0/1 matrix `B_S` of each monomial
//! `S`. The universe has one element per copy of `B_S` and per pattern
//! `p` of `S`'s coordinates; the set indexed by a zero cell `(x, y)` holds
//! the elements of every copy whose entry `b_{x,y}` is 1, taking the pattern
//! `psi(x)` restricted to `S`. Two such sets then meet in exactly as many
//! elements as there are B-entries at the cell joining them.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;

use crate::bbrpoly::{build_polynomial, IntersectionPolynomial, ModulusSpec, MAX_WITNESSES};
use crate::counting::{factorial, stirling2};
use crate::error::{Error, Result};

/// Default largest `n` for materializing a set-system.
pub const DEFAULT_MAX_N: usize = 6;

/// Largest `n` for which the full `n^n` string space is enumerated.
pub const FULL_SPACE_MAX_N: usize = 5;

/// Largest `n` for which the B-entry lemma is checked over all string pairs rather than
/// characteristic classes.
pub const LEMMA3_FULL_SPACE_MAX_N: usize = 4;

/// A length-`n` string over the symbols `0..n` with its characteristic
/// vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolString {
    symbols: Vec<u8>,
    chi: u64,
}

impl SymbolString {
    pub fn new(symbols: Vec<u8>) -> Result<Self> {
        let n = symbols.len();
        if n == 0 || n > 63 {
            return Err(Error::InvalidArgument(format!("string length {n} outside 1..=63")));
        }
        let mut chi = 0u64;
        for &s in &symbols {
            if s as usize >= n {
                return Err(Error::InvalidArgument(format!("symbol {s} outside 0..{n}")));
            }
            chi |= 1 << s;
        }
        Ok(Self { symbols, chi })
    }

    /// Parses a string of decimal digits, e.g. `"01"`.
    pub fn parse(text: &str) -> Result<Self> {
        let symbols = text
            .chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as u8)
                    .ok_or_else(|| Error::InvalidArgument(format!("bad symbol {c:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(symbols)
    }

    pub fn n(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    /// Characteristic vector as a bitmask: bit `j` is set iff symbol `j`
    /// occurs.
    pub fn chi(&self) -> u64 {
        self.chi
    }

    /// Number of distinct symbols.
    pub fn unique_symbol_weight(&self) -> u32 {
        self.chi.count_ones()
    }

    /// A canonical string whose characteristic vector is `chi`.
    pub fn representative(n: usize, chi: u64) -> Result<Self> {
        let present: Vec<u8> = (0..n as u8).filter(|&j| chi >> j & 1 == 1).collect();
        if present.is_empty() || chi >> n != 0 {
            return Err(Error::InvalidArgument(format!("no length-{n} string has characteristic {chi:#b}")));
        }
        let symbols = (0..n).map(|i| present[i.min(present.len() - 1)]).collect();
        Self::new(symbols)
    }
}

/// Whether `x` and `y` cover each other: equal, or built from the same
/// symbols.
pub fn cover(x: &SymbolString, y: &SymbolString) -> Result<bool> {
    check_lengths(x, y)?;
    Ok(x == y || x.chi == y.chi)
}

fn check_lengths(x: &SymbolString, y: &SymbolString) -> Result<()> {
    if x.n() != y.n() {
        return Err(Error::DimensionMismatch {
            expected: x.n(),
            found: y.n(),
        });
    }
    Ok(())
}

/// Coordinatewise agreement `not(a xor b)` of two characteristic vectors.
pub fn agreement_mask(n: usize, chi_x: u64, chi_y: u64) -> u64 {
    !(chi_x ^ chi_y) & full_mask(n)
}

fn full_mask(n: usize) -> u64 {
    (1u64 << n) - 1
}

/// The matrix entry `a_{x,y}`, a residue mod `m`.
pub fn matrix_entry(poly: &IntersectionPolynomial, x: &SymbolString, y: &SymbolString) -> Result<u64> {
    check_lengths(x, y)?;
    if x.n() != poly.n() {
        return Err(Error::DimensionMismatch {
            expected: poly.n(),
            found: x.n(),
        });
    }
    Ok(poly.eval_mask(agreement_mask(x.n(), x.chi, y.chi)).value)
}

/// Every string of length `n` over `n` symbols, in lexicographic order.
pub fn all_strings(n: usize) -> Result<Vec<SymbolString>> {
    if n == 0 || n > FULL_SPACE_MAX_N {
        return Err(Error::BudgetExceeded {
            what: "full string space n",
            requested: n as u64,
            limit: FULL_SPACE_MAX_N as u64,
        });
    }
    let total = n.pow(n as u32);
    let mut out = Vec::with_capacity(total);
    let mut symbols = vec![0u8; n];
    for _ in 0..total {
        out.push(SymbolString::new(symbols.clone())?);
        for s in symbols.iter_mut().rev() {
            *s += 1;
            if (*s as usize) < n {
                break;
            }
            *s = 0;
        }
    }
    Ok(out)
}

/// One element of the universe: pattern `pattern` (a subset of `monomial`)
/// in copy `copy` of the monomial's B-matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UniverseElement {
    pub monomial: u64,
    pub copy: u32,
    pub pattern: u64,
}

/// A member set, as ascending indices into the universe.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MemberSet {
    /// Characteristic vector shared by the strings indexing this set.
    pub class: u64,
    pub elements: Vec<u32>,
}

impl MemberSet {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn intersection_size(&self, other: &Self) -> usize {
        let (mut i, mut j, mut count) = (0, 0, 0);
        while i < self.elements.len() && j < other.elements.len() {
            match self.elements[i].cmp(&other.elements[j]) {
                core::cmp::Ordering::Less => i += 1,
                core::cmp::Ordering::Greater => j += 1,
                core::cmp::Ordering::Equal => {
                    count += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        count
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.intersection_size(other) == self.len()
    }
}

/// A characteristic class and how many strings it contains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacteristicClass {
    pub chi: u64,
    /// `k! S2(n, k)` strings use exactly these `k` symbols.
    pub strings: BigUint,
}

/// The materialized set-system.
#[derive(Debug, Clone)]
pub struct SetSystem {
    n: usize,
    poly: IntersectionPolynomial,
    universe: Vec<UniverseElement>,
    classes: Vec<CharacteristicClass>,
    sets: Vec<MemberSet>,
    index_count: BigUint,
    distinct_count: Option<usize>,
}

pub fn build_set_system(n: usize, modulus: &ModulusSpec, dedupe: bool) -> Result<SetSystem> {
    build_set_system_with_budget(n, modulus, dedupe, DEFAULT_MAX_N)
}

pub fn build_set_system_with_budget(
    n: usize,
    modulus: &ModulusSpec,
    dedupe: bool,
    max_n: usize,
) -> Result<SetSystem> {
    if n == 0 || n > max_n {
        return Err(Error::BudgetExceeded {
            what: "set-system n",
            requested: n as u64,
            limit: max_n as u64,
        });
    }
    let poly = build_polynomial(n, modulus)?;
    SetSystem::from_polynomial(poly, dedupe)
}

impl SetSystem {
    /// Materializes the set-system of an already built polynomial.
    pub fn from_polynomial(poly: IntersectionPolynomial, dedupe: bool) -> Result<Self> {
        let n = poly.n();
        if n > 16 {
            return Err(Error::BudgetExceeded {
                what: "set-system n",
                requested: n as u64,
                limit: 16,
            });
        }
        let mut universe = Vec::new();
        for (&monomial, &copies) in poly.terms() {
            for copy in 1..=copies as u32 {
                let mut pattern = 0u64;
                loop {
                    universe.push(UniverseElement {
                        monomial,
                        copy,
                        pattern,
                    });
                    // next submask of `monomial` in increasing order
                    pattern = (pattern.wrapping_sub(monomial)) & monomial;
                    if pattern == 0 {
                        break;
                    }
                }
            }
        }
        if universe.len() > u32::MAX as usize {
            return Err(Error::BudgetExceeded {
                what: "universe size",
                requested: universe.len() as u64,
                limit: u32::MAX as u64,
            });
        }

        let mut classes = Vec::new();
        let mut index_count = BigUint::default();
        for chi in 1..=full_mask(n) {
            let k = chi.count_ones() as u64;
            let strings = factorial(k) * stirling2(n as u64, k)?;
            index_count += &strings * &strings;
            classes.push(CharacteristicClass { chi, strings });
        }

        let mut sets: Vec<MemberSet> = classes
            .iter()
            .map(|c| MemberSet {
                class: c.chi,
                elements: universe
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| c.chi & e.monomial == e.pattern)
                    .map(|(i, _)| i as u32)
                    .collect(),
            })
            .collect();

        let distinct_count = if dedupe {
            let mut seen = BTreeSet::new();
            sets.retain(|s| seen.insert(s.elements.clone()));
            Some(sets.len())
        } else {
            None
        };

        Ok(Self {
            n,
            poly,
            universe,
            classes,
            sets,
            index_count,
            distinct_count,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> &ModulusSpec {
        self.poly.modulus()
    }

    pub fn m(&self) -> u64 {
        self.poly.modulus().m()
    }

    pub fn poly(&self) -> &IntersectionPolynomial {
        &self.poly
    }

    pub fn universe(&self) -> &[UniverseElement] {
        &self.universe
    }

    /// Universe size.
    pub fn h(&self) -> usize {
        self.universe.len()
    }

    pub fn classes(&self) -> &[CharacteristicClass] {
        &self.classes
    }

    /// The member sets: one per characteristic class, or the extensionally
    /// distinct ones when built with `dedupe`.
    pub fn sets(&self) -> &[MemberSet] {
        &self.sets
    }

    /// Number of zero cells of `A`, i.e. indexed sets counted with
    /// multiplicity.
    pub fn index_count(&self) -> &BigUint {
        &self.index_count
    }

    /// Number of extensionally distinct sets, when deduplicated.
    pub fn distinct_count(&self) -> Option<usize> {
        self.distinct_count
    }

    /// The set indexed by cell `(x, y)`, built element by element from the
    /// B-entries at that cell; `None` when `a_{x,y} != 0 (mod m)`.
    pub fn indexed_set(&self, x: &SymbolString, y: &SymbolString) -> Result<Option<MemberSet>> {
        if matrix_entry(&self.poly, x, y)? != 0 {
            return Ok(None);
        }
        let agree = agreement_mask(self.n, x.chi, y.chi);
        let elements = self
            .universe
            .iter()
            .enumerate()
            .filter(|(_, e)| e.monomial & !agree == 0 && x.chi & e.monomial == e.pattern)
            .map(|(i, _)| i as u32)
            .collect();
        Ok(Some(MemberSet {
            class: x.chi,
            elements,
        }))
    }

    /// Number of B-entries at cell `(x, y)`: copies of monomials whose
    /// coordinates all agree. This is `a_{x,y}` before reduction mod `m`.
    pub fn b_entry_count(&self, chi_x: u64, chi_y: u64) -> u64 {
        let agree = agreement_mask(self.n, chi_x, chi_y);
        self.poly
            .terms()
            .iter()
            .filter(|(&mono, _)| mono & !agree == 0)
            .map(|(_, &copies)| copies)
            .sum()
    }

    /// Upper bound `Q~(n, ..., n)` on the universe size.
    pub fn h_budget(&self) -> BigUint {
        self.poly.value_at_n()
    }

    /// Zero cells over the full string space, counted by brute force.
    pub fn index_count_full_space(&self) -> Result<u64> {
        let strings = all_strings(self.n)?;
        let mut count = 0u64;
        for x in &strings {
            for y in &strings {
                if matrix_entry(&self.poly, x, y)? == 0 {
                    count += 1;
                }
            }
        }
        Ok(count)
    }
}

/// Offending set indices (into [`SetSystem::sets`]) with the measured value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetWitness {
    pub sets: Vec<usize>,
    pub value: u64,
    pub reason: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionReport {
    pub checked: u64,
    pub violations: u64,
    pub witnesses: Vec<SetWitness>,
}

impl ConditionReport {
    fn new() -> Self {
        Self {
            checked: 0,
            violations: 0,
            witnesses: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, witness: impl FnOnce() -> SetWitness) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(witness());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theorem1Report {
    pub sets: usize,
    pub pairs: u64,
    /// Every set size is 0 mod `m`.
    pub c2: ConditionReport,
    /// Nested pairs meet in 0 mod `m`, other pairs in a nonzero residue.
    pub c3: ConditionReport,
    pub nested_pairs: u64,
    pub non_nested_pairs: u64,
    /// Pairwise intersections are 0 or 1 modulo each `p^alpha`.
    pub c4: ConditionReport,
}

impl Theorem1Report {
    pub fn passed(&self) -> bool {
        self.c2.passed() && self.c3.passed() && self.c4.passed()
    }
}

/// Checks size and intersection conditions over all pairs of distinct
/// member sets.
pub fn verify_theorem1(ss: &SetSystem) -> Theorem1Report {
    let m = ss.m();
    let prime_powers = ss.modulus().prime_powers();
    let sets = &ss.sets;
    let mut c2 = ConditionReport::new();
    for (i, s) in sets.iter().enumerate() {
        let size = s.len() as u64;
        c2.check(size % m == 0, || SetWitness {
            sets: vec![i],
            value: size,
            reason: "set size is not 0 mod m",
        });
    }
    let mut c3 = ConditionReport::new();
    let mut c4 = ConditionReport::new();
    let (mut nested, mut non_nested, mut pairs) = (0u64, 0u64, 0u64);
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            let (g, h) = (&sets[i], &sets[j]);
            if g.elements == h.elements {
                continue;
            }
            pairs += 1;
            let meet = g.intersection_size(h) as u64;
            let is_nested = meet == g.len() as u64 || meet == h.len() as u64;
            if is_nested {
                nested += 1;
                c3.check(meet % m == 0, || SetWitness {
                    sets: vec![i, j],
                    value: meet,
                    reason: "nested pair meets in a nonzero residue",
                });
            } else {
                non_nested += 1;
                c3.check(meet % m != 0, || SetWitness {
                    sets: vec![i, j],
                    value: meet,
                    reason: "non-nested pair meets in 0 mod m",
                });
            }
            for &pp in &prime_powers {
                c4.check(meet % pp <= 1, || SetWitness {
                    sets: vec![i, j],
                    value: meet,
                    reason: "intersection residue outside {0, 1}",
                });
            }
        }
    }
    Theorem1Report {
        sets: sets.len(),
        pairs,
        c2,
        c3,
        nested_pairs: nested,
        non_nested_pairs: non_nested,
        c4,
    }
}

/// Which cells a B-entry count check enumerated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellScope {
    /// Every pair of strings.
    FullStrings,
    /// One representative string per characteristic class.
    Classes,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellWitness {
    pub x: Vec<u8>,
    pub y: Vec<u8>,
    pub count: u64,
    pub reason: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma3Report {
    pub scope: CellScope,
    pub cells: u64,
    /// B-entry count of the diagonal cells, when they all agree.
    pub diagonal_count: Option<u64>,
    pub diagonal_divisible: bool,
    /// Off-diagonal cells whose count was 0 mod `m` exactly when covering.
    pub cover_iff_divisible_violations: u64,
    /// Non-covering cells with count not below the diagonal count.
    pub below_diagonal_violations: u64,
    pub witnesses: Vec<CellWitness>,
}

impl Lemma3Report {
    pub fn passed(&self) -> bool {
        self.diagonal_count.is_some()
            && self.diagonal_divisible
            && self.cover_iff_divisible_violations == 0
            && self.below_diagonal_violations == 0
    }
}

/// Checks the B-entry counting lemma cell by cell: over all string pairs for
/// small `n`, over characteristic-class representatives otherwise.
pub fn verify_lemma3(ss: &SetSystem) -> Result<Lemma3Report> {
    let (scope, strings) = if ss.n <= LEMMA3_FULL_SPACE_MAX_N {
        (CellScope::FullStrings, all_strings(ss.n)?)
    } else {
        let reps = ss
            .classes
            .iter()
            .map(|c| SymbolString::representative(ss.n, c.chi))
            .collect::<Result<Vec<_>>>()?;
        (CellScope::Classes, reps)
    };
    let m = ss.m();
    let mut report = Lemma3Report {
        scope,
        cells: 0,
        diagonal_count: None,
        diagonal_divisible: true,
        cover_iff_divisible_violations: 0,
        below_diagonal_violations: 0,
        witnesses: Vec::new(),
    };
    let witness = |report: &mut Lemma3Report, x: &SymbolString, y: &SymbolString, count, reason| {
        if report.witnesses.len() < MAX_WITNESSES {
            report.witnesses.push(CellWitness {
                x: x.symbols.clone(),
                y: y.symbols.clone(),
                count,
                reason,
            });
        }
    };
    let mut diagonal: Option<u64> = None;
    let mut diagonal_equal = true;
    for x in &strings {
        let d = ss.b_entry_count(x.chi, x.chi);
        match diagonal {
            None => diagonal = Some(d),
            Some(prev) if prev != d => {
                diagonal_equal = false;
                witness(&mut report, x, x, d, "diagonal counts differ");
            }
            _ => {}
        }
        if d % m != 0 {
            report.diagonal_divisible = false;
            witness(&mut report, x, x, d, "diagonal count not divisible by m");
        }
    }
    let diagonal = diagonal.unwrap_or(0);
    for x in &strings {
        for y in &strings {
            report.cells += 1;
            if x == y {
                continue;
            }
            let count = ss.b_entry_count(x.chi, y.chi);
            let covers = cover(x, y)?;
            if (count % m == 0) != covers {
                report.cover_iff_divisible_violations += 1;
                witness(&mut report, x, y, count, "divisibility disagrees with cover");
            }
            if !covers && count >= diagonal {
                report.below_diagonal_violations += 1;
                witness(&mut report, x, y, count, "non-cover count not below diagonal");
            }
        }
    }
    report.diagonal_count = diagonal_equal.then_some(diagonal);
    Ok(report)
}

/// The diagonal-indexed sets, one per characteristic class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniformFamily {
    pub m: u64,
    pub h: usize,
    pub sets: Vec<MemberSet>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniformReport {
    pub sets: usize,
    pub size: Option<usize>,
    pub size_divisible: bool,
    pub pairs: u64,
    pub zero_intersections: u64,
    pub witnesses: Vec<SetWitness>,
}

impl UniformReport {
    pub fn passed(&self) -> bool {
        self.size.is_some() && self.size_divisible && self.zero_intersections == 0
    }
}

/// Restricts to the sets indexed by diagonal cells `(x, x)`, one
/// representative string per characteristic class.
pub fn uniform_subsystem(ss: &SetSystem) -> Result<UniformFamily> {
    let mut sets = Vec::with_capacity(ss.classes.len());
    for class in &ss.classes {
        let x = SymbolString::representative(ss.n, class.chi)?;
        let set = ss.indexed_set(&x, &x)?.ok_or_else(|| {
            Error::InvalidArgument(format!("diagonal cell of class {:#b} is not a zero cell", class.chi))
        })?;
        sets.push(set);
    }
    Ok(UniformFamily {
        m: ss.m(),
        h: ss.h(),
        sets,
    })
}

impl UniformFamily {
    pub fn verify(&self) -> UniformReport {
        let size = self.sets.first().map(MemberSet::len);
        let uniform = self.sets.iter().all(|s| Some(s.len()) == size);
        let mut report = UniformReport {
            sets: self.sets.len(),
            size: if uniform { size } else { None },
            size_divisible: self.sets.iter().all(|s| s.len() as u64 % self.m == 0),
            pairs: 0,
            zero_intersections: 0,
            witnesses: Vec::new(),
        };
        for i in 0..self.sets.len() {
            for j in i + 1..self.sets.len() {
                report.pairs += 1;
                let meet = self.sets[i].intersection_size(&self.sets[j]) as u64;
                if meet % self.m == 0 {
                    report.zero_intersections += 1;
                    if report.witnesses.len() < MAX_WITNESSES {
                        report.witnesses.push(SetWitness {
                            sets: vec![i, j],
                            value: meet,
                            reason: "distinct classes meet in 0 mod m",
                        });
                    }
                }
            }
        }
        report
    }
}

/// Converts a count that is known to be small.
#[cfg(test)]
pub(crate) fn small(v: &BigUint) -> u64 {
    u64::try_from(v).unwrap_or(u64::MAX)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn six() -> ModulusSpec {
        ModulusSpec::new(6).unwrap()
    }

    fn s(text: &str) -> SymbolString {
        SymbolString::parse(text).unwrap()
    }

    #[test]
    fn cover_examples() {
        assert!(cover(&s("01"), &s("10")).unwrap());
        assert!(cover(&s("00"), &s("00")).unwrap());
        assert!(!cover(&s("00"), &s("01")).unwrap());
        assert!(cover(&s("00"), &s("012")).is_err());
        assert!(SymbolString::parse("03").is_err());
    }

    #[test]
    fn matrix_entries() {
        let poly = build_polynomial(5, &six()).unwrap();
        let x = s("01234");
        assert_eq!(matrix_entry(&poly, &x, &x).unwrap(), 0);
        // chi 11110 vs 11111: agreement weight 4
        assert_eq!(matrix_entry(&poly, &s("01233"), &x).unwrap(), 1);
        assert_eq!(matrix_entry(&poly, &s("00112"), &s("21010")).unwrap(), 0);
    }

    #[test]
    fn zero_cells_are_cover_pairs() {
        for n in 1..=4 {
            let poly = build_polynomial(n, &six()).unwrap();
            let strings = all_strings(n).unwrap();
            for x in &strings {
                for y in &strings {
                    assert_eq!(matrix_entry(&poly, x, y).unwrap() == 0, cover(x, y).unwrap());
                }
            }
        }
        for n in 5..=6 {
            let poly = build_polynomial(n, &six()).unwrap();
            for a in 1..1u64 << n {
                for b in 1..1u64 << n {
                    let x = SymbolString::representative(n, a).unwrap();
                    let y = SymbolString::representative(n, b).unwrap();
                    assert_eq!(matrix_entry(&poly, &x, &y).unwrap() == 0, a == b);
                }
            }
        }
    }

    #[test]
    fn index_counts() {
        let ss = build_set_system(2, &six(), false).unwrap();
        assert_eq!(small(ss.index_count()), 6);
        assert_eq!(ss.index_count_full_space().unwrap(), 6);
        let ss = build_set_system(3, &six(), false).unwrap();
        assert_eq!(small(ss.index_count()), 147);
        assert_eq!(ss.index_count_full_space().unwrap(), 147);
    }

    #[test]
    fn cells_in_one_class_index_the_same_set() {
        let ss = build_set_system(3, &six(), true).unwrap();
        let strings = all_strings(3).unwrap();
        for x in &strings {
            for y in &strings {
                let set = ss.indexed_set(x, y).unwrap();
                assert_eq!(set.is_some(), cover(x, y).unwrap());
                if let Some(set) = set {
                    let canonical = ss.sets().iter().find(|t| t.class == x.chi()).unwrap();
                    assert_eq!(set.elements, canonical.elements);
                }
            }
        }
        assert_eq!(ss.distinct_count(), Some(7));
    }

    #[test]
    fn sizes_and_h() {
        for n in 2..=6 {
            let ss = build_set_system(n, &six(), true).unwrap();
            let total = ss.poly().total_multiplicity();
            assert_eq!(total % 6, 0);
            for set in ss.sets() {
                assert_eq!(set.len() as u64, total);
            }
            assert!(BigUint::from(ss.h()) <= ss.h_budget());
        }
    }

    #[test]
    fn theorem1_small() {
        let ss = build_set_system(3, &six(), true).unwrap();
        let report = verify_theorem1(&ss);
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.sets, 7);
        assert_eq!(report.pairs, 21);
        assert_eq!(report.nested_pairs + report.non_nested_pairs, 21);
    }

    #[test]
    fn lemma3() {
        let ss = build_set_system(5, &six(), true).unwrap();
        let report = verify_lemma3(&ss).unwrap();
        assert_eq!(report.scope, CellScope::Classes);
        assert_eq!(report.diagonal_count, Some(ss.poly().total_multiplicity()));
        assert_eq!(report.diagonal_count, Some(36));
        assert!(report.passed(), "{report:?}");
        let ss = build_set_system(3, &six(), true).unwrap();
        let report = verify_lemma3(&ss).unwrap();
        assert_eq!(report.scope, CellScope::FullStrings);
        assert_eq!(report.cells, 27 * 27);
        assert!(report.passed());
    }

    #[test]
    fn uniform_family() {
        let ss = build_set_system(3, &six(), false).unwrap();
        let family = uniform_subsystem(&ss).unwrap();
        assert_eq!(family.sets.len(), 7);
        let report = family.verify();
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.pairs, 21);
    }

    #[test]
    fn budget() {
        assert!(matches!(build_set_system(7, &six(), true), Err(Error::BudgetExceeded { .. })));
        assert!(all_strings(6).is_err());
    }
}
