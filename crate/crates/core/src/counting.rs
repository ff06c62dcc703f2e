//! Exact counting behind the set-system size analysis.
//!
//! `S(n)` counts ordered pairs of length-`n` strings over `n` symbols that use
//! exactly the same symbol set. It is computed two ways: directly as
//! `sum_k C(n,k) (k! S2(n,k))^2`, and as `n! [x^n] T_n(x) P_n(x)` with the
//! Touchard polynomial `T_n` and the Eulerian convolution polynomial `P_n`.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// `n!`.
pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// Binomial coefficient, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Full Stirling triangle of the second kind up to row `n`.
fn stirling2_table(n: usize) -> Vec<Vec<BigUint>> {
    let mut rows = vec![vec![BigUint::one()]];
    for i in 1..=n {
        let prev = &rows[i - 1];
        let mut row = vec![BigUint::zero(); i + 1];
        for k in 1..=i {
            let stay = if k < i { prev[k].clone() * k as u64 } else { BigUint::zero() };
            row[k] = stay + &prev[k - 1];
        }
        rows.push(row);
    }
    rows
}

/// Stirling number of the second kind, `S2(n, k) = k S2(n-1, k) + S2(n-1, k-1)`.
pub fn stirling2(n: u64, k: u64) -> Result<BigUint> {
    if k > n {
        return Err(Error::InvalidArgument("stirling2 requires k <= n".into()));
    }
    Ok(stirling2_table(n as usize)[n as usize][k as usize].clone())
}

fn stirling2_unchecked(n: u64, k: u64) -> BigUint {
    if k > n {
        BigUint::zero()
    } else {
        stirling2_table(n as usize)[n as usize][k as usize].clone()
    }
}

fn eulerian_row(n: usize) -> Vec<BigUint> {
    let mut row = vec![BigUint::one()];
    for i in 1..=n {
        let mut next = vec![BigUint::zero(); i];
        for k in 0..i {
            let mut v = BigUint::zero();
            if k < row.len() {
                v += &row[k] * (k as u64 + 1);
            }
            if k >= 1 && k - 1 < row.len() {
                v += &row[k - 1] * (i - k) as u64;
            }
            next[k] = v;
        }
        row = next;
    }
    row
}

/// Eulerian number: permutations of `[n]` with exactly `k` ascents.
pub fn eulerian(n: u64, k: u64) -> Result<BigUint> {
    if k >= n.max(1) {
        return Err(Error::InvalidArgument("eulerian requires k < max(n, 1)".into()));
    }
    Ok(eulerian_row(n as usize)[k as usize].clone())
}

fn eulerian_or_zero(row: &[BigUint], k: usize) -> BigUint {
    row.get(k).cloned().unwrap_or_default()
}

/// Number of length-`n` strings over `n` symbols that use exactly `k`
/// distinct symbols: `C(n,k) k! S2(n,k)`.
pub fn n_k(n: u64, k: u64) -> Result<BigUint> {
    if k == 0 || k > n {
        return Err(Error::InvalidArgument("n_k requires 1 <= k <= n".into()));
    }
    Ok(binomial(n, k) * factorial(k) * stirling2_unchecked(n, k))
}

/// `S(n) = sum_k C(n,k) (k! S2(n,k))^2`.
pub fn s_of_n_sum(n: u64) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::InvalidArgument("S(n) requires n >= 1".into()));
    }
    let table = stirling2_table(n as usize);
    Ok((1..=n)
        .map(|k| {
            let class = factorial(k) * &table[n as usize][k as usize];
            binomial(n, k) * &class * &class
        })
        .sum())
}

/// Polynomial with exact rational coefficients, indexed by power.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPoly {
    coefficients: Vec<BigRational>,
}

impl RationalPoly {
    pub fn new(mut coefficients: Vec<BigRational>) -> Self {
        while coefficients.last().is_some_and(|c| c.is_zero()) {
            coefficients.pop();
        }
        Self { coefficients }
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coefficients
    }

    pub fn coefficient(&self, power: usize) -> BigRational {
        self.coefficients.get(power).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Highest power with a nonzero coefficient; `None` for the zero
    /// polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.coefficients.is_empty() || other.coefficients.is_empty() {
            return Self::new(Vec::new());
        }
        let mut out = vec![BigRational::zero(); self.coefficients.len() + other.coefficients.len() - 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            for (j, b) in other.coefficients.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }
}

fn ratio(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Touchard polynomial `T_n(x) = sum_k S2(n,k) x^k`.
pub fn touchard(n: u64) -> RationalPoly {
    let table = stirling2_table(n as usize);
    RationalPoly::new(
        table[n as usize]
            .iter()
            .map(|s| ratio(s.clone(), BigUint::one()))
            .collect(),
    )
}

/// `P_n(x) = sum_k (sum_j A(n,j) C(j,k)) x^k / k!`, built from Eulerian
/// numbers.
pub fn convolution_poly(n: u64) -> RationalPoly {
    let row = eulerian_row(n as usize);
    let coefficients = (0..=n)
        .map(|k| {
            let inner: BigUint = (0..=n)
                .map(|j| eulerian_or_zero(&row, j as usize) * binomial(j, k))
                .sum();
            ratio(inner, factorial(k))
        })
        .collect();
    RationalPoly::new(coefficients)
}

/// The closed form `P_n(x) = sum_k (n-k)!/k! S2(n, n-k) x^k`.
pub fn convolution_poly_closed(n: u64) -> RationalPoly {
    let coefficients = (0..=n)
        .map(|k| ratio(factorial(n - k) * stirling2_unchecked(n, n - k), factorial(k)))
        .collect();
    RationalPoly::new(coefficients)
}

/// `S(n) = n! [x^n] T_n(x) P_n(x)`.
pub fn s_of_n_gf(n: u64) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::InvalidArgument("S(n) requires n >= 1".into()));
    }
    let coeff = touchard(n).mul(&convolution_poly(n)).coefficient(n as usize);
    let scaled = coeff * BigRational::from_integer(BigInt::from(factorial(n)));
    if !scaled.is_integer() {
        return Err(Error::InvalidArgument("generating function gave a non-integer".into()));
    }
    scaled
        .to_integer()
        .to_biguint()
        .ok_or_else(|| Error::InvalidArgument("generating function gave a negative value".into()))
}

/// `S(n) > n^{1.5n}`, decided as `S(n)^2 > n^{3n}`.
pub fn growth_bound_check(n: u64) -> Result<bool> {
    if n <= 2 {
        return Err(Error::InvalidArgument("growth bound is stated for n > 2".into()));
    }
    let s = s_of_n_sum(n)?;
    Ok(&s * &s > num_traits::pow(BigUint::from(n), 3 * n as usize))
}

/// Share-size accounting at the maximum number of minimal sets.
#[derive(Debug, Clone, PartialEq)]
pub struct ShareCount {
    /// `2 C(ell, floor(ell/2))` elements per party.
    pub elements: BigUint,
    /// `2^{ell+1} / sqrt(pi ell / 2)`.
    pub reference: f64,
    pub ratio: f64,
}

pub fn max_share_elements(ell: u64) -> Result<ShareCount> {
    if ell < 2 {
        return Err(Error::InvalidArgument("ell must be >= 2".into()));
    }
    let elements = binomial(ell, ell / 2) * 2u32;
    let reference =
        libm::pow(2.0, (ell + 1) as f64) / libm::sqrt(core::f64::consts::PI * ell as f64 / 2.0);
    let ratio = biguint_to_f64(&elements) / reference;
    Ok(ShareCount {
        elements,
        reference,
        ratio,
    })
}

fn biguint_to_f64(v: &BigUint) -> f64 {
    v.to_u64_digits()
        .iter()
        .rev()
        .fold(0.0, |acc, &d| acc * 18446744073709551616.0 + d as f64)
}
