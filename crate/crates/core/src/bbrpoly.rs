//! Low-degree multilinear polynomials over `Z_m` that vanish on a 0/1 input
//! exactly when every coordinate is 1.
//!
//! For each prime power `p^alpha` dividing `m` the polynomial tests whether
//! the Hamming weight of the input agrees with `n` in its lowest `a` base-`p`
//! digits. Digit `j` of the weight is `e_{p^j}(z) mod p` by Lucas' theorem,
//! and `1 - (e - c)^{p-1}` is its match indicator. The per-prime results are
//! 0 on a full match and 1 otherwise; for `alpha > 1` they are lifted from
//! `Z_p` to `Z_{p^alpha}` by iterating `f -> 3f^2 - 2f^3`. The pieces are
//! glued by CRT. Since the prime powers `p^a` multiply past `n`, the weight
//! matches `n` in all of them only when it equals `n`.
//!
//! Everything is symmetric in the variables, so the construction runs in the
//! basis of elementary symmetric polynomials with `z^2 = z`, and is expanded
//! into explicit monomials at the end.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::numth::{crt_combine, trial_factor};

/// Largest supported variable count (monomials are `u64` bitmasks).
pub const MAX_VARIABLES: usize = 63;

/// Default cap on the number of expanded monomials.
pub const DEFAULT_MAX_TERMS: u64 = 4_000_000;

/// Default cap on `n` for exhaustive contract verification (`2^n` inputs).
pub const DEFAULT_EXHAUSTIVE_N: usize = 20;

/// A composite modulus with at least two distinct prime divisors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModulusSpec {
    m: u64,
    factors: Vec<(u64, u32)>,
}

impl ModulusSpec {
    pub fn new(m: u64) -> Result<Self> {
        Self::from_factors(trial_factor(m))
    }

    pub fn from_factors(mut factors: Vec<(u64, u32)>) -> Result<Self> {
        factors.sort_unstable();
        factors.dedup_by_key(|f| f.0);
        if factors.len() < 2 {
            return Err(Error::InvalidArgument(
                "modulus needs at least two distinct prime divisors".into(),
            ));
        }
        let mut m = 1u64;
        for &(p, alpha) in &factors {
            if alpha == 0 || trial_factor(p) != [(p, 1)] {
                return Err(Error::InvalidArgument(format!("bad factor {p}^{alpha}")));
            }
            for _ in 0..alpha {
                m = m
                    .checked_mul(p)
                    .ok_or_else(|| Error::InvalidArgument("modulus overflows u64".into()))?;
            }
        }
        Ok(Self { m, factors })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// Number of distinct primes.
    pub fn r(&self) -> usize {
        self.factors.len()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, a)| a == 1)
    }

    /// `p_i^{alpha_i}` for each factor, in prime order.
    pub fn prime_powers(&self) -> Vec<u64> {
        self.factors.iter().map(|&(p, a)| p.pow(a)).collect()
    }
}

/// The base-`p` digit test applied for one prime power of `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitTest {
    pub prime: u64,
    pub alpha: u32,
    /// Number of low base-`p` digits compared.
    pub digits: u32,
    /// Base-`p` digits `0..digits` of `n`.
    pub targets: Vec<u64>,
    /// Idempotent lifts from `Z_p` to `Z_{p^alpha}`.
    pub lifts: u32,
}

impl DigitTest {
    pub fn prime_power(&self) -> u64 {
        self.prime.pow(self.alpha)
    }

    /// Whether the weight agrees with `n` modulo `p^digits`.
    pub fn matches(&self, weight: u64) -> bool {
        let mut w = weight;
        self.targets.iter().all(|&t| {
            let d = w % self.prime;
            w /= self.prime;
            d == t
        })
    }

    fn degree_bound(&self) -> usize {
        let base = self.prime.pow(self.digits) as usize - 1;
        base * 3usize.pow(self.lifts)
    }
}

/// Value of the polynomial at one input, with its residues modulo each
/// prime power of `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation {
    pub value: u64,
    /// `(p^alpha, value mod p^alpha)` in prime order.
    pub residues: Vec<(u64, u64)>,
}

/// The multilinear polynomial `Q~` over `Z_m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionPolynomial {
    n: usize,
    modulus: ModulusSpec,
    digit_tests: Vec<DigitTest>,
    terms: BTreeMap<u64, u64>,
    degree: usize,
    degree_budget: usize,
}

/// Symmetric multilinear polynomials in `n` variables over `Z_modulus`,
/// stored as coefficients on `e_0, ..., e_n`.
struct SymmetricAlgebra {
    n: usize,
    modulus: u64,
    binom: Vec<Vec<u64>>,
}

impl SymmetricAlgebra {
    fn new(n: usize, modulus: u64) -> Self {
        let mut binom = vec![vec![0u64; n + 1]; n + 1];
        for i in 0..=n {
            binom[i][0] = 1 % modulus;
            for k in 1..=i {
                binom[i][k] = (binom[i - 1][k - 1] + if k < i { binom[i - 1][k] } else { 0 }) % modulus;
            }
        }
        Self { n, modulus, binom }
    }

    fn constant(&self, c: u64) -> Vec<u64> {
        let mut v = vec![0; self.n + 1];
        v[0] = c % self.modulus;
        v
    }

    fn elementary(&self, k: u64) -> Vec<u64> {
        let mut v = vec![0; self.n + 1];
        if (k as usize) <= self.n {
            v[k as usize] = 1 % self.modulus;
        }
        v
    }

    fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.modulus).collect()
    }

    fn neg(&self, a: &[u64]) -> Vec<u64> {
        a.iter().map(|x| (self.modulus - x) % self.modulus).collect()
    }

    fn scale(&self, a: &[u64], c: u64) -> Vec<u64> {
        a.iter().map(|&x| mul_mod(x, c, self.modulus)).collect()
    }

    /// `e_a e_b = sum_k C(k, a) C(a, a + b - k) e_k` on 0/1 inputs.
    fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; self.n + 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                let xy = mul_mod(x, y, self.modulus);
                for k in i.max(j)..=(i + j).min(self.n) {
                    let c = mul_mod(self.binom[k][i], self.binom[i][i + j - k], self.modulus);
                    out[k] = (out[k] + mul_mod(xy, c, self.modulus)) % self.modulus;
                }
            }
        }
        out
    }

    fn pow(&self, a: &[u64], mut e: u64) -> Vec<u64> {
        let mut acc = self.constant(1);
        let mut base = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Chooses digit counts `a_i` so that `prod p_i^{a_i} > n`, growing the
/// factor whose next power is smallest.
fn choose_digits(n: usize, modulus: &ModulusSpec) -> Vec<u32> {
    let primes: Vec<u64> = modulus.factors().iter().map(|f| f.0).collect();
    let mut digits = vec![1u32; primes.len()];
    let product = |d: &[u32]| -> u128 {
        primes
            .iter()
            .zip(d)
            .map(|(&p, &a)| (p as u128).pow(a))
            .product()
    };
    while product(&digits) <= n as u128 {
        let (idx, _) = primes
            .iter()
            .zip(&digits)
            .enumerate()
            .map(|(i, (&p, &a))| (i, (p as u128).pow(a + 1)))
            .min_by_key(|&(_, next)| next)
            .expect("at least two primes");
        digits[idx] += 1;
    }
    digits
}

fn monomial_count(n: usize, coeffs: &[u64]) -> u64 {
    coeffs
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(k, _)| crate::counting::binomial(n as u64, k as u64).to_u64().unwrap_or(u64::MAX))
        .fold(0u64, |acc, c| acc.saturating_add(c))
}

/// Builds `Q~` for `n` variables, with the default expansion budget.
pub fn build_polynomial(n: usize, modulus: &ModulusSpec) -> Result<IntersectionPolynomial> {
    build_polynomial_with_budget(n, modulus, DEFAULT_MAX_TERMS)
}

pub fn build_polynomial_with_budget(
    n: usize,
    modulus: &ModulusSpec,
    max_terms: u64,
) -> Result<IntersectionPolynomial> {
    if n == 0 {
        return Err(Error::InvalidArgument("polynomial needs n >= 1".into()));
    }
    if n > MAX_VARIABLES {
        return Err(Error::BudgetExceeded {
            what: "variables",
            requested: n as u64,
            limit: MAX_VARIABLES as u64,
        });
    }
    let digits = choose_digits(n, modulus);
    let mut digit_tests = Vec::new();
    let mut per_prime: Vec<(Vec<u64>, u64)> = Vec::new();
    for (&(p, alpha), &a) in modulus.factors().iter().zip(&digits) {
        let prime_power = p.pow(alpha);
        let alg = SymmetricAlgebra::new(n, prime_power);
        let mut targets = Vec::with_capacity(a as usize);
        let mut rest = n as u64;
        let mut all_match = alg.constant(1);
        for j in 0..a {
            let target = rest % p;
            rest /= p;
            targets.push(target);
            // e_{p^j}(z) - c_j
            let shifted = alg.add(&alg.elementary(p.pow(j)), &alg.constant(prime_power - target % prime_power));
            let indicator = alg.add(&alg.constant(1), &alg.neg(&alg.pow(&shifted, p - 1)));
            all_match = alg.mul(&all_match, &indicator);
        }
        let mut f = alg.add(&alg.constant(1), &alg.neg(&all_match));
        let mut lifts = 0u32;
        let mut precision = 1u32;
        while precision < alpha {
            let f2 = alg.mul(&f, &f);
            let f3 = alg.mul(&f2, &f);
            f = alg.add(&alg.scale(&f2, 3), &alg.neg(&alg.scale(&f3, 2)));
            precision *= 2;
            lifts += 1;
        }
        digit_tests.push(DigitTest {
            prime: p,
            alpha,
            digits: a,
            targets,
            lifts,
        });
        per_prime.push((f, prime_power));
    }

    let mut symmetric = vec![0u64; n + 1];
    for (k, slot) in symmetric.iter_mut().enumerate() {
        let residues: Vec<(BigUint, BigUint)> = per_prime
            .iter()
            .map(|(f, pp)| (BigUint::from(f[k]), BigUint::from(*pp)))
            .collect();
        let (value, _) = crt_combine(&residues)?;
        *slot = value.to_u64().expect("residue below m");
    }

    let count = monomial_count(n, &symmetric);
    if count > max_terms {
        return Err(if modulus.is_squarefree() {
            Error::BudgetExceeded {
                what: "polynomial terms",
                requested: count,
                limit: max_terms,
            }
        } else {
            Error::UnsupportedModulus(format!(
                "prime-power expansion needs {count} terms, budget is {max_terms}"
            ))
        });
    }

    let mut terms = BTreeMap::new();
    for (k, &c) in symmetric.iter().enumerate() {
        if c != 0 {
            for_each_subset_of_size(n, k, |mask| {
                terms.insert(mask, c);
            });
        }
    }
    let degree_budget = digit_tests.iter().map(DigitTest::degree_bound).max().unwrap_or(0);
    let mut poly = IntersectionPolynomial {
        n,
        modulus: modulus.clone(),
        digit_tests,
        terms,
        degree: 0,
        degree_budget,
    };
    poly.recompute_degree();
    Ok(poly)
}

/// Calls `f` with every `n`-bit mask of popcount `k`, in increasing order.
pub(crate) fn for_each_subset_of_size(n: usize, k: usize, mut f: impl FnMut(u64)) {
    if k > n {
        return;
    }
    if k == 0 {
        f(0);
        return;
    }
    let limit = 1u64 << n;
    let mut mask = (1u64 << k) - 1;
    while mask < limit {
        f(mask);
        // Gosper's hack
        let c = mask & mask.wrapping_neg();
        let r = mask + c;
        mask = (((r ^ mask) >> 2) / c) | r;
    }
}

fn mask_to_indices(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

impl IntersectionPolynomial {
    /// Reassembles a polynomial from explicit terms (e.g. a parsed file). The
    /// digit tests are those of the construction for `(n, modulus)`, so a
    /// tampered term list is caught by comparing the two forms.
    pub fn from_terms(
        n: usize,
        modulus: &ModulusSpec,
        terms: impl IntoIterator<Item = (Vec<usize>, u64)>,
    ) -> Result<Self> {
        let mut poly = build_polynomial(n, modulus)?;
        poly.terms.clear();
        for (indices, coeff) in terms {
            poly.set_coefficient(&indices, coeff)?;
        }
        Ok(poly)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> &ModulusSpec {
        &self.modulus
    }

    pub fn digit_tests(&self) -> &[DigitTest] {
        &self.digit_tests
    }

    /// Multilinear degree: the largest monomial with a nonzero coefficient.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Degree bound implied by the digit tests, `max_i (p_i^{a_i} - 1) 3^{lifts_i}`.
    pub fn degree_budget(&self) -> usize {
        self.degree_budget
    }

    /// Monomials as bitmasks over the variables, with coefficients in `Z_m`.
    pub fn terms(&self) -> &BTreeMap<u64, u64> {
        &self.terms
    }

    /// Monomials as ascending index lists.
    pub fn terms_indexed(&self) -> impl Iterator<Item = (Vec<usize>, u64)> + '_ {
        self.terms.iter().map(|(&mask, &c)| (mask_to_indices(mask), c))
    }

    pub fn coefficient(&self, indices: &[usize]) -> u64 {
        indices_to_mask(self.n, indices)
            .ok()
            .and_then(|mask| self.terms.get(&mask).copied())
            .unwrap_or(0)
    }

    /// Overwrites one coefficient (reduced mod `m`).
    pub fn set_coefficient(&mut self, indices: &[usize], coeff: u64) -> Result<()> {
        let mask = indices_to_mask(self.n, indices)?;
        let coeff = coeff % self.modulus.m;
        if coeff == 0 {
            self.terms.remove(&mask);
        } else {
            self.terms.insert(mask, coeff);
        }
        self.recompute_degree();
        Ok(())
    }

    fn recompute_degree(&mut self) {
        self.degree = self.terms.keys().map(|m| m.count_ones() as usize).max().unwrap_or(0);
    }

    /// Sum of all coefficients as an integer, `Q~(1, ..., 1)` before reduction.
    pub fn total_multiplicity(&self) -> u64 {
        self.terms.values().sum()
    }

    /// Integer value before reduction mod `m`: the sum of the coefficients
    /// of all monomials supported inside `z`.
    pub fn eval_integer(&self, z: u64) -> u64 {
        self.terms
            .iter()
            .filter(|(&mono, _)| mono & !z == 0)
            .map(|(_, &c)| c)
            .sum()
    }

    /// `Q~(n, ..., n) = sum_S a_S n^{|S|}` over the reduced coefficients.
    pub fn value_at_n(&self) -> BigUint {
        self.terms
            .iter()
            .map(|(&mono, &c)| BigUint::from(c) * num_traits::pow(BigUint::from(self.n), mono.count_ones() as usize))
            .sum()
    }

    /// Evaluation at an input given as a bitmask.
    pub fn eval_mask(&self, z: u64) -> Evaluation {
        let m = self.modulus.m;
        let value = self
            .terms
            .iter()
            .filter(|(&mono, _)| mono & !z == 0)
            .fold(0u64, |acc, (_, &c)| (acc + c) % m);
        self.evaluation(value)
    }

    fn evaluation(&self, value: u64) -> Evaluation {
        Evaluation {
            value,
            residues: self
                .modulus
                .prime_powers()
                .into_iter()
                .map(|pp| (pp, value % pp))
                .collect(),
        }
    }

    /// Evaluation at a 0/1 vector via the multilinear form.
    pub fn eval(&self, z: &[u8]) -> Result<Evaluation> {
        Ok(self.eval_mask(self.input_mask(z)?))
    }

    /// Evaluation via the digit tests on the Hamming weight, bypassing the
    /// monomial expansion.
    pub fn eval_symmetric(&self, z: &[u8]) -> Result<Evaluation> {
        let weight = self.input_mask(z)?.count_ones() as u64;
        let residues: Vec<(BigUint, BigUint)> = self
            .digit_tests
            .iter()
            .map(|t| {
                let bit = if t.matches(weight) { 0u32 } else { 1 };
                (BigUint::from(bit), BigUint::from(t.prime_power()))
            })
            .collect();
        let (value, _) = crt_combine(&residues)?;
        Ok(self.evaluation(value.to_u64().expect("below m")))
    }

    fn input_mask(&self, z: &[u8]) -> Result<u64> {
        if z.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: z.len(),
            });
        }
        z.iter().enumerate().try_fold(0u64, |acc, (i, &b)| match b {
            0 => Ok(acc),
            1 => Ok(acc | 1 << i),
            _ => Err(Error::InvalidArgument(format!("input coordinate {i} is {b}, not 0/1"))),
        })
    }

    /// Values on the whole cube `{0,1}^n`, indexed by input bitmask, via a
    /// subset-sum transform.
    pub fn eval_all(&self) -> Vec<u64> {
        let m = self.modulus.m;
        let mut values = vec![0u64; 1usize << self.n];
        for (&mask, &c) in &self.terms {
            values[mask as usize] = c;
        }
        for bit in 0..self.n {
            let step = 1usize << bit;
            for mask in 0..values.len() {
                if mask & step != 0 {
                    values[mask] = (values[mask] + values[mask ^ step]) % m;
                }
            }
        }
        values
    }
}

fn indices_to_mask(n: usize, indices: &[usize]) -> Result<u64> {
    let mut mask = 0u64;
    for &i in indices {
        if i >= n {
            return Err(Error::DimensionMismatch { expected: n, found: i + 1 });
        }
        if mask >> i & 1 == 1 {
            return Err(Error::InvalidArgument(format!("repeated index {i}")));
        }
        mask |= 1 << i;
    }
    Ok(mask)
}

/// Why an input violates the polynomial's contract.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContractViolation {
    /// Zero mod `m` away from the all-ones input.
    SpuriousZero,
    /// Nonzero mod `m` at the all-ones input.
    NonzeroAtOnes,
    /// A residue modulo some `p^alpha` outside `{0, 1}`.
    ResidueOutOfRange { prime_power: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractWitness {
    pub input: Vec<u8>,
    pub value: u64,
    pub violation: ContractViolation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContractReport {
    pub n: usize,
    pub m: u64,
    pub evaluations: u64,
    pub zero_set_ok: bool,
    pub residues_ok: bool,
    pub degree: usize,
    pub degree_budget: usize,
    /// `n^{1/r}`, the growth rate the degree is compared against.
    pub growth_reference: f64,
    pub witnesses: Vec<ContractWitness>,
}

impl ContractReport {
    pub fn passed(&self) -> bool {
        self.zero_set_ok && self.residues_ok && self.degree <= self.degree_budget
    }
}

/// Maximum number of witnesses kept in reports.
pub const MAX_WITNESSES: usize = 8;

/// Exhaustively checks the zero set and residue range on all `2^n` inputs.
pub fn verify_contract(poly: &IntersectionPolynomial, max_n: usize) -> Result<ContractReport> {
    if poly.n > max_n {
        return Err(Error::BudgetExceeded {
            what: "exhaustive polynomial verification n",
            requested: poly.n as u64,
            limit: max_n as u64,
        });
    }
    let values = poly.eval_all();
    let full = (1u64 << poly.n) - 1;
    let prime_powers = poly.modulus.prime_powers();
    let mut report = ContractReport {
        n: poly.n,
        m: poly.modulus.m,
        evaluations: values.len() as u64,
        zero_set_ok: true,
        residues_ok: true,
        degree: poly.degree,
        degree_budget: poly.degree_budget,
        growth_reference: libm::pow(poly.n as f64, 1.0 / poly.modulus.r() as f64),
        witnesses: Vec::new(),
    };
    let record = |report: &mut ContractReport, mask: u64, value: u64, violation| {
        if report.witnesses.len() < MAX_WITNESSES {
            report.witnesses.push(ContractWitness {
                input: (0..poly.n).map(|i| (mask >> i & 1) as u8).collect(),
                value,
                violation,
            });
        }
    };
    for (mask, &value) in values.iter().enumerate() {
        let mask = mask as u64;
        let is_zero = value == 0;
        if is_zero != (mask == full) {
            report.zero_set_ok = false;
            let violation = if is_zero {
                ContractViolation::SpuriousZero
            } else {
                ContractViolation::NonzeroAtOnes
            };
            record(&mut report, mask, value, violation);
        }
        for &pp in &prime_powers {
            if value % pp > 1 {
                report.residues_ok = false;
                record(&mut report, mask, value, ContractViolation::ResidueOutOfRange { prime_power: pp });
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn six() -> ModulusSpec {
        ModulusSpec::new(6).unwrap()
    }

    /// Independent oracle: the value must be 0 mod m iff weight == n, and
    /// each residue mod p^alpha must be 0 iff weight == n (mod p^a).
    fn brute_force_ok(poly: &IntersectionPolynomial) -> bool {
        let n = poly.n();
        (0u64..1 << n).all(|mask| {
            let z: Vec<u8> = (0..n).map(|i| (mask >> i & 1) as u8).collect();
            let direct: u64 = poly
                .terms_indexed()
                .filter(|(idx, _)| idx.iter().all(|&i| z[i] == 1))
                .map(|(_, c)| c)
                .sum::<u64>()
                % poly.modulus().m();
            (direct == 0) == (mask.count_ones() as usize == n)
                && poly.modulus().prime_powers().iter().all(|&pp| direct % pp <= 1)
        })
    }

    #[test]
    fn modulus_spec() {
        let s = six();
        assert_eq!(s.factors(), &[(2, 1), (3, 1)]);
        assert_eq!(s.r(), 2);
        assert!(ModulusSpec::new(8).is_err());
        assert!(ModulusSpec::new(7).is_err());
        let s = ModulusSpec::new(12).unwrap();
        assert!(!s.is_squarefree());
        assert_eq!(s.prime_powers(), vec![4, 3]);
    }

    #[test]
    fn n5_m6_hand_expansion() {
        // Q1 = e1 + 1 (mod 2), Q2 = (e1 + 1)^2 = 2 e2 + 1 (mod 3);
        // CRT(3 Q1 + 4 Q2) = 1 + 3 e1 + 2 e2 (mod 6).
        let poly = build_polynomial(5, &six()).unwrap();
        assert_eq!(poly.degree(), 2);
        assert_eq!(poly.coefficient(&[]), 1);
        for i in 0..5 {
            assert_eq!(poly.coefficient(&[i]), 3);
            for j in i + 1..5 {
                assert_eq!(poly.coefficient(&[i, j]), 2);
            }
        }
        assert_eq!(poly.terms().len(), 1 + 5 + 10);
        assert_eq!(poly.total_multiplicity(), 1 + 15 + 20);
    }

    #[test]
    fn n5_evaluations() {
        let poly = build_polynomial(5, &six()).unwrap();
        let ones = poly.eval(&[1, 1, 1, 1, 1]).unwrap();
        assert_eq!(ones, Evaluation { value: 0, residues: vec![(2, 0), (3, 0)] });
        let w4 = poly.eval(&[1, 1, 0, 1, 1]).unwrap();
        assert_eq!(w4, Evaluation { value: 1, residues: vec![(2, 1), (3, 1)] });
        assert_ne!(poly.eval(&[0; 5]).unwrap().value, 0);
        assert!(matches!(poly.eval(&[1, 1]), Err(Error::DimensionMismatch { .. })));
        assert!(poly.eval(&[2, 0, 0, 0, 0]).is_err());
    }

    #[test]
    fn contract_holds_exhaustively() {
        for n in 1..=10 {
            let poly = build_polynomial(n, &six()).unwrap();
            assert!(brute_force_ok(&poly), "n = {n}");
            let report = verify_contract(&poly, DEFAULT_EXHAUSTIVE_N).unwrap();
            assert!(report.passed(), "n = {n}: {report:?}");
        }
        let report = verify_contract(&build_polynomial(2, &six()).unwrap(), 20).unwrap();
        assert!(report.passed());
        assert_eq!(report.evaluations, 4);
    }

    #[test]
    fn other_moduli() {
        for m in [10u64, 15, 30, 12, 18, 36] {
            let spec = ModulusSpec::new(m).unwrap();
            for n in 1..=8 {
                let poly = build_polynomial(n, &spec).unwrap();
                assert!(verify_contract(&poly, 20).unwrap().passed(), "m={m} n={n}");
                assert!(brute_force_ok(&poly), "m={m} n={n}");
            }
        }
    }

    #[test]
    fn degree_budget_formula() {
        // m = 6: n = 5 -> 2*3 (deg 2); n = 10 -> 4*3 (deg 3); n = 17 -> 8*3 (deg 7)
        for (n, budget) in [(5, 2), (10, 3), (17, 7)] {
            let poly = build_polynomial(n, &six()).unwrap();
            assert_eq!(poly.degree_budget(), budget, "n = {n}");
            assert!(poly.degree() <= budget);
        }
    }

    #[test]
    fn tampering_is_caught() {
        let mut poly = build_polynomial(5, &six()).unwrap();
        poly.set_coefficient(&[0, 3], 5).unwrap();
        let report = verify_contract(&poly, 20).unwrap();
        assert!(!report.passed());
        assert!(!report.witnesses.is_empty());
        let w = &report.witnesses[0];
        assert_eq!(poly.eval(&w.input).unwrap().value, w.value);
    }

    #[test]
    fn symmetric_and_multilinear_agree() {
        use rand_chacha::rand_core::{RngCore, SeedableRng};
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(9);
        for (m, n) in [(6u64, 5usize), (6, 10), (6, 17), (30, 12), (12, 6)] {
            let poly = build_polynomial(n, &ModulusSpec::new(m).unwrap()).unwrap();
            for _ in 0..1000 {
                let bits = rng.next_u64();
                let z: Vec<u8> = (0..n).map(|i| (bits >> i & 1) as u8).collect();
                assert_eq!(poly.eval(&z).unwrap(), poly.eval_symmetric(&z).unwrap());
            }
        }
    }

    #[test]
    fn budgets() {
        assert!(matches!(
            verify_contract(&build_polynomial(21, &six()).unwrap(), 20),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(matches!(
            build_polynomial_with_budget(12, &ModulusSpec::new(12).unwrap(), 10),
            Err(Error::UnsupportedModulus(_))
        ));
        assert!(matches!(
            build_polynomial_with_budget(12, &six(), 10),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn from_terms_round_trip() {
        let poly = build_polynomial(6, &six()).unwrap();
        let rebuilt = IntersectionPolynomial::from_terms(6, &six(), poly.terms_indexed()).unwrap();
        assert_eq!(poly, rebuilt);
    }
}
