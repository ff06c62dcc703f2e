//! Modular arithmetic and prime machinery for protocol setup.
//!
//! A protocol group is a prime `q = u * p_1 * ... * p_eta + 1` whose
//! totient `m = q - 1` is fully factored. The cofactor `u` is searched
//! upward from 1 and kept small so that factoring `m` reduces to trial
//! division of `u`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand_core::RngCore;

use crate::error::{Error, Result};

/// Largest cofactor tried while searching for `q`.
pub const MAX_COFACTOR: u64 = 1_000_000;

/// Inputs below this bound are tested by trial division.
pub const TRIAL_DIVISION_BOUND: u64 = 1 << 32;

/// Miller-Rabin rounds for inputs above [`TRIAL_DIVISION_BOUND`].
pub const MILLER_RABIN_ROUNDS: usize = 64;

/// Bit length below which generated groups are considered toy-sized.
pub const TOY_BITS: u64 = 256;

/// One factor `p^alpha` of a factorization.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrimePower {
    pub p: BigUint,
    pub alpha: u32,
}

impl PrimePower {
    pub fn value(&self) -> BigUint {
        num_traits::pow(self.p.clone(), self.alpha as usize)
    }
}

/// The multiplicative group setup shared by token and share generation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupParams {
    base_primes: Vec<BigUint>,
    cofactor: BigUint,
    q: BigUint,
    m: BigUint,
    m_factors: Vec<PrimePower>,
}

impl GroupParams {
    /// Reassembles and validates parameters, e.g. after deserialization.
    pub fn from_parts(
        base_primes: Vec<BigUint>,
        cofactor: BigUint,
        q: BigUint,
        m_factors: Vec<PrimePower>,
    ) -> Result<Self> {
        if base_primes.is_empty() {
            return Err(Error::InvalidArgument("no base primes".into()));
        }
        let distinct: BTreeSet<&BigUint> = base_primes.iter().collect();
        if distinct.len() != base_primes.len() {
            return Err(Error::InvalidArgument("base primes are not distinct".into()));
        }
        for p in &base_primes {
            if !is_prime(p) {
                return Err(Error::NotPrime(format!("{p}")));
            }
        }
        if cofactor.is_zero() {
            return Err(Error::InvalidArgument("cofactor must be >= 1".into()));
        }
        let w: BigUint = base_primes.iter().product();
        let m = &cofactor * &w;
        if q != &m + 1u32 {
            return Err(Error::InvalidArgument("q != u * prod(p_i) + 1".into()));
        }
        if !is_prime(&q) {
            return Err(Error::NotPrime(format!("{q}")));
        }
        let mut product = BigUint::one();
        for f in &m_factors {
            if f.alpha == 0 || !is_prime(&f.p) {
                return Err(Error::InvalidArgument(format!("bad factor {}^{}", f.p, f.alpha)));
            }
            product *= f.value();
        }
        if product != m {
            return Err(Error::InvalidArgument("m_factors do not multiply to q - 1".into()));
        }
        let mut m_factors = m_factors;
        m_factors.sort();
        for pair in m_factors.windows(2) {
            if pair[0].p == pair[1].p {
                return Err(Error::InvalidArgument("repeated prime in m_factors".into()));
            }
        }
        Ok(Self {
            base_primes,
            cofactor,
            q,
            m,
            m_factors,
        })
    }

    /// Number of base primes, eta.
    pub fn eta(&self) -> usize {
        self.base_primes.len()
    }

    pub fn base_primes(&self) -> &[BigUint] {
        &self.base_primes
    }

    pub fn cofactor(&self) -> &BigUint {
        &self.cofactor
    }

    pub fn q(&self) -> &BigUint {
        &self.q
    }

    /// The group order `m = q - 1`.
    pub fn m(&self) -> &BigUint {
        &self.m
    }

    pub fn m_factors(&self) -> &[PrimePower] {
        &self.m_factors
    }

    /// Number of distinct primes dividing `m`.
    pub fn r(&self) -> usize {
        self.m_factors.len()
    }

    pub fn is_squarefree(&self) -> bool {
        self.m_factors.iter().all(|f| f.alpha == 1)
    }

    /// Sizes this small are for demonstration only.
    pub fn is_toy_size(&self) -> bool {
        self.q.bits() < TOY_BITS
    }
}

/// Builds the group over explicit base primes, searching the cofactor upward
/// from 1 until `q` is prime and `q - 1` is squarefree.
pub fn group_from_primes(base_primes: &[BigUint]) -> Result<GroupParams> {
    let mut primes = base_primes.to_vec();
    primes.sort();
    let w: BigUint = primes.iter().product();
    for u in 1..=MAX_COFACTOR {
        let mut u_factors = trial_factor(u);
        if u_factors.iter().any(|&(_, a)| a > 1) {
            continue;
        }
        if u_factors.iter().any(|&(p, _)| primes.iter().any(|b| *b == BigUint::from(p))) {
            continue;
        }
        let m = &w * u;
        let q = &m + 1u32;
        if !is_prime(&q) {
            continue;
        }
        let mut factors: Vec<PrimePower> = primes
            .iter()
            .map(|p| PrimePower {
                p: p.clone(),
                alpha: 1,
            })
            .collect();
        factors.extend(u_factors.drain(..).map(|(p, alpha)| PrimePower {
            p: BigUint::from(p),
            alpha,
        }));
        return GroupParams::from_parts(primes, BigUint::from(u), q, factors);
    }
    Err(Error::SearchExhausted {
        what: "cofactor u for prime q",
        tried: MAX_COFACTOR,
    })
}

/// Draws `ell` distinct primes of exactly `prime_bits` bits and builds the
/// group over them.
pub fn gen_group_params<R: RngCore + ?Sized>(
    ell: usize,
    prime_bits: u32,
    rng: &mut R,
) -> Result<GroupParams> {
    if ell < 2 {
        return Err(Error::InvalidArgument(format!("party count {ell} < 2")));
    }
    if prime_bits < 2 {
        return Err(Error::InvalidArgument(format!("prime_bits {prime_bits} < 2")));
    }
    let low = BigUint::one() << (prime_bits - 1);
    let span = low.clone();
    let mut primes = BTreeSet::new();
    let max_draws = 10_000u64 * ell as u64 + 64 * prime_bits as u64;
    let mut draws = 0u64;
    while primes.len() < ell {
        if draws == max_draws {
            return Err(Error::SearchExhausted {
                what: "distinct base primes of the requested size",
                tried: draws,
            });
        }
        draws += 1;
        let candidate = &low + random_below(rng, &span);
        if is_prime(&candidate) {
            primes.insert(candidate);
        }
    }
    let primes: Vec<BigUint> = primes.into_iter().collect();
    group_from_primes(&primes)
}

/// `base^exponent mod modulus`.
pub fn mod_pow(base: &BigUint, exponent: &BigUint, modulus: &BigUint) -> Result<BigUint> {
    if *modulus < BigUint::from(2u32) {
        return Err(Error::InvalidArgument("modulus < 2".into()));
    }
    Ok(base.modpow(exponent, modulus))
}

/// Multiplicative inverse modulo `modulus`, if it exists.
pub fn mod_inverse(a: &BigUint, modulus: &BigUint) -> Option<BigUint> {
    if modulus.is_one() {
        return Some(BigUint::zero());
    }
    (a % modulus).modinv(modulus)
}

/// Chinese remaindering over pairwise coprime moduli. Returns the residue and
/// the product modulus.
pub fn crt_combine(residues: &[(BigUint, BigUint)]) -> Result<(BigUint, BigUint)> {
    let mut acc = BigUint::zero();
    let mut modulus = BigUint::one();
    for (r, n) in residues {
        if n.is_zero() {
            return Err(Error::InvalidArgument("zero modulus".into()));
        }
        if !modulus.gcd(n).is_one() {
            return Err(Error::NonCoprimeModuli);
        }
        let r = r % n;
        let inv = mod_inverse(&(&modulus % n), n).ok_or(Error::NonCoprimeModuli)?;
        // acc + modulus * t == r (mod n)
        let diff = (&r + n - (&acc % n)) % n;
        let t = (diff * inv) % n;
        acc += &modulus * t;
        modulus *= n;
        acc %= &modulus;
    }
    Ok((acc, modulus))
}

const SMALL_PRIMES: [u32; 64] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
    97, 101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191,
    193, 197, 199, 211, 223, 227, 229, 233, 239, 241, 251, 257, 263, 269, 271, 277, 281, 283, 293,
    307, 311,
];

/// Primality test: trial division below [`TRIAL_DIVISION_BOUND`], Miller-Rabin
/// with [`MILLER_RABIN_ROUNDS`] fixed bases above it.
pub fn is_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        if small < TRIAL_DIVISION_BOUND {
            return is_prime_u64(small);
        }
    }
    for &p in SMALL_PRIMES.iter() {
        if (n % p).is_zero() {
            return false;
        }
    }
    miller_rabin(n)
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn miller_rabin(n: &BigUint) -> bool {
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for &a in SMALL_PRIMES.iter().take(MILLER_RABIN_ROUNDS) {
        let a = BigUint::from(a);
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Euler's totient of a prime.
pub fn totient_of_prime(q: &BigUint) -> Result<BigUint> {
    if !is_prime(q) {
        return Err(Error::NotPrime(format!("{q}")));
    }
    Ok(q - 1u32)
}

/// Factorization of a small integer by trial division, ascending by prime.
pub fn trial_factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut alpha = 0;
            while n % d == 0 {
                n /= d;
                alpha += 1;
            }
            out.push((d, alpha));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Uniform draw from `[0, bound)` by rejection sampling.
pub fn random_below<R: RngCore + ?Sized>(rng: &mut R, bound: &BigUint) -> BigUint {
    assert!(!bound.is_zero(), "empty range");
    let bits = bound.bits();
    let bytes = bits.div_ceil(8) as usize;
    let excess = (bytes as u64 * 8 - bits) as u32;
    let mut buf = vec![0u8; bytes];
    loop {
        rng.fill_bytes(&mut buf);
        if let Some(top) = buf.last_mut() {
            *top &= 0xffu8 >> excess;
        }
        let candidate = BigUint::from_bytes_le(&buf);
        if candidate < *bound {
            return candidate;
        }
    }
}

/// Uniform draw from `[low, high)`.
pub fn random_range<R: RngCore + ?Sized>(rng: &mut R, low: &BigUint, high: &BigUint) -> BigUint {
    low + random_below(rng, &(high - low))
}

/// Uniform unit of `Z_n^*` for prime `n`, optionally excluding 1.
pub fn random_unit_mod_prime<R: RngCore + ?Sized>(
    rng: &mut R,
    p: &BigUint,
    exclude_one: bool,
) -> BigUint {
    let low = if exclude_one { BigUint::from(2u32) } else { BigUint::one() };
    random_range(rng, &low, p)
}

/// Square root of `a` modulo an odd prime `p` (Tonelli-Shanks), if `a` is a
/// quadratic residue.
pub fn sqrt_mod_prime(a: &BigUint, p: &BigUint) -> Option<BigUint> {
    let a = a % p;
    if a.is_zero() {
        return Some(a);
    }
    let one = BigUint::one();
    let p_minus_1 = p - &one;
    let half = &p_minus_1 >> 1;
    if a.modpow(&half, p) != one {
        return None;
    }
    let s = p_minus_1.trailing_zeros().unwrap_or(0);
    let q = &p_minus_1 >> s;
    let mut z = BigUint::from(2u32);
    while z.modpow(&half, p) != p_minus_1 {
        z += 1u32;
    }
    let mut m = s;
    let mut c = z.modpow(&q, p);
    let mut t = a.modpow(&q, p);
    let mut r = a.modpow(&((&q + &one) >> 1), p);
    while t != one {
        let mut i = 0u64;
        let mut t2 = t.clone();
        while t2 != one {
            t2 = (&t2 * &t2) % p;
            i += 1;
        }
        let b = c.modpow(&(BigUint::one() << (m - i - 1)), p);
        m = i;
        c = (&b * &b) % p;
        t = (&t * &c) % p;
        r = (&r * &b) % p;
    }
    Some(r)
}

/// Random `(b, c)` with `b^2 + c^2 == target (mod m)` for squarefree `m`
/// given by its factorization.
pub fn random_two_squares<R: RngCore + ?Sized>(
    rng: &mut R,
    target: &BigUint,
    factors: &[PrimePower],
) -> Result<(BigUint, BigUint)> {
    let mut bs = Vec::with_capacity(factors.len());
    let mut cs = Vec::with_capacity(factors.len());
    for f in factors {
        if f.alpha != 1 {
            return Err(Error::UnsupportedModulus("two-squares split needs squarefree m".into()));
        }
        let p = &f.p;
        let t = target % p;
        let (b, c) = if *p == BigUint::from(2u32) {
            // b^2 + c^2 == b + c (mod 2)
            let b = random_below(rng, p);
            let c = (&t + &b) % p;
            (b, c)
        } else {
            loop {
                let b = random_below(rng, p);
                let rest = (&t + p * 2u32 - (&b * &b) % p) % p;
                if let Some(c) = sqrt_mod_prime(&rest, p) {
                    break (b, c);
                }
            }
        };
        bs.push((b, p.clone()));
        cs.push((c, p.clone()));
    }
    Ok((crt_combine(&bs)?.0, crt_combine(&cs)?.0))
}
