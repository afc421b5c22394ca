//! Exact integer and number-theoretic primitives shared by every other module.
//!
//! Everything here is deterministic: the Pollard rho fallback in [`factorize`]
//! runs with a fixed seed, and primality is a Miller-Rabin test with a fixed
//! witness set that is exact for all inputs below 3.317e24.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use std::sync::OnceLock;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("gcd(0, 0) is undefined")]
    BothZero,
    #[error("{a} has no inverse modulo {m}")]
    NoInverse { a: BigInt, m: BigUint },
    #[error("Jacobi symbol needs an odd positive modulus, got {0}")]
    EvenModulus(BigUint),
    #[error("{num}/{den} is not in lowest terms (gcd = {g})")]
    NotCoprime {
        num: BigUint,
        den: BigUint,
        g: BigUint,
    },
    #[error("factorization of {value} exceeds the {max_digits}-digit ceiling")]
    FactorizationTooHard { value: BigUint, max_digits: u32 },
    #[error("primality is only decided below 3.317e24, got {0}")]
    PrimalityOutOfRange(BigUint),
    #[error("no primes lie in the class {r} mod {m} (gcd != 1)")]
    NoDirichletClass { r: BigUint, m: BigUint },
    #[error("no prime {r} mod {m} found below the search ceiling {ceiling}")]
    SearchExhausted {
        r: BigUint,
        m: BigUint,
        ceiling: BigUint,
    },
    #[error("input must be a positive integer")]
    NotPositive,
}

/// Default digit ceiling for [`factorize`]; CLI callers can widen it.
pub const DEFAULT_FACTOR_DIGITS: u32 = 25;

/// Default value ceiling for [`smallest_prime_in_class`].
pub const DEFAULT_PRIME_SEARCH_CEILING: u64 = 100_000_000;

fn mr_bound() -> &'static BigUint {
    // Sorenson-Webster: the first 13 primes are a deterministic witness set
    // below this bound.
    static BOUND: OnceLock<BigUint> = OnceLock::new();
    BOUND.get_or_init(|| "3317044064679887385961981".parse().unwrap())
}

const MR_WITNESSES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Greatest common divisor. Rejects the (0, 0) input, for which no gcd exists.
pub fn gcd(a: &BigInt, b: &BigInt) -> Result<BigUint, ArithError> {
    if a.is_zero() && b.is_zero() {
        return Err(ArithError::BothZero);
    }
    Ok(a.gcd(b).magnitude().clone())
}

pub(crate) fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Inverse of `a` modulo `m ≥ 2`, normalized into [1, m−1].
pub fn mod_inverse(a: &BigInt, m: &BigUint) -> Result<BigUint, ArithError> {
    let m_int = BigInt::from(m.clone());
    let (g, x) = extended_gcd(&a.mod_floor(&m_int), &m_int);
    if !g.is_one() {
        return Err(ArithError::NoInverse {
            a: a.clone(),
            m: m.clone(),
        });
    }
    Ok(x.mod_floor(&m_int).magnitude().clone())
}

pub(crate) fn mod_inverse_u64(a: u64, m: u64) -> Option<u64> {
    mod_inverse(&BigInt::from(a), &BigUint::from(m))
        .ok()
        .and_then(|v| v.to_u64())
}

/// Returns (g, x) with a·x ≡ g (mod b) and g = gcd(a, b).
fn extended_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (BigInt::one(), BigInt::zero());
    while !r1.is_zero() {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, r2);
        let s2 = &s0 - &q * &s1;
        s0 = std::mem::replace(&mut s1, s2);
    }
    (r0, s0)
}

/// Jacobi symbol (a/n) for odd n ≥ 1; coincides with the Legendre symbol when
/// n is prime.
pub fn jacobi_symbol(a: &BigInt, n: &BigUint) -> Result<i8, ArithError> {
    if n.is_zero() || n.is_even() {
        return Err(ArithError::EvenModulus(n.clone()));
    }
    let mut num = a.mod_floor(&BigInt::from(n.clone())).magnitude().clone();
    let mut den = n.clone();
    let mut acc: i8 = 1;
    let one = BigUint::one();
    while !num.is_zero() {
        while num.is_even() {
            num >>= 1;
            let d8 = (&den % 8u32).to_u8().unwrap();
            if d8 == 3 || d8 == 5 {
                acc = -acc;
            }
        }
        std::mem::swap(&mut num, &mut den);
        if (&num % 4u32).to_u8().unwrap() == 3 && (&den % 4u32).to_u8().unwrap() == 3 {
            acc = -acc;
        }
        num %= &den;
    }
    if den == one {
        Ok(acc)
    } else {
        Ok(0)
    }
}

pub(crate) fn jacobi_u64(a: i64, n: u64) -> i8 {
    jacobi_symbol(&BigInt::from(a), &BigUint::from(n)).expect("odd modulus")
}

/// Regular continued fraction expansion with the final term normalized to
/// exceed 1 (a single-term expansion [a0] is exempt).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuedFraction {
    pub numerator: BigUint,
    pub denominator: BigUint,
    pub terms: Vec<BigUint>,
}

impl ContinuedFraction {
    /// Re-evaluates the expansion; used by the invariant tests.
    pub fn evaluate(&self) -> (BigUint, BigUint) {
        let mut num = BigUint::one();
        let mut den = BigUint::zero();
        for t in self.terms.iter().rev() {
            // x -> t + 1/x, tracked as num/den
            let new_num = t * &num + &den;
            den = std::mem::replace(&mut num, new_num);
        }
        (num, den)
    }
}

/// Continued fraction of num/den for coprime positive integers.
pub fn continued_fraction(num: &BigUint, den: &BigUint) -> Result<ContinuedFraction, ArithError> {
    if num.is_zero() || den.is_zero() {
        return Err(ArithError::NotPositive);
    }
    let g = num.gcd(den);
    if !g.is_one() {
        return Err(ArithError::NotCoprime {
            num: num.clone(),
            den: den.clone(),
            g,
        });
    }
    let mut terms = Vec::new();
    let (mut a, mut b) = (num.clone(), den.clone());
    while !b.is_zero() {
        let (q, r) = a.div_rem(&b);
        terms.push(q);
        a = std::mem::replace(&mut b, r);
    }
    // Euclid with positive remainders already ends with a term >= 2 whenever
    // there is more than one term; fold a trailing 1 anyway in case a caller
    // ever constructs terms by other means.
    if terms.len() > 1 && terms.last().unwrap().is_one() {
        terms.pop();
        let last = terms.last_mut().unwrap();
        *last += 1u32;
    }
    let cf = ContinuedFraction {
        numerator: num.clone(),
        denominator: den.clone(),
        terms,
    };
    debug_assert_eq!(cf.evaluate(), (num.clone(), den.clone()));
    Ok(cf)
}

/// Complete prime factorization with strictly increasing primes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub value: BigUint,
    pub factors: Vec<(BigUint, u32)>,
}

impl Factorization {
    /// Product of prime powers; must reproduce `value`.
    pub fn recompose(&self) -> BigUint {
        let mut acc = BigUint::one();
        for (p, e) in &self.factors {
            acc *= p.pow(*e);
        }
        acc
    }

    /// Prime factors carrying an odd exponent.
    pub fn odd_power_primes(&self) -> impl Iterator<Item = &BigUint> {
        self.factors
            .iter()
            .filter(|(_, e)| e % 2 == 1)
            .map(|(p, _)| p)
    }
}

/// Deterministic primality: Miller-Rabin over the first 13 primes, exact for
/// all n below 3.317e24. Larger inputs are rejected rather than guessed at.
pub fn is_prime(n: &BigUint) -> Result<bool, ArithError> {
    if n >= mr_bound() {
        return Err(ArithError::PrimalityOutOfRange(n.clone()));
    }
    if let Some(small) = n.to_u64() {
        return Ok(is_prime_u64(small));
    }
    Ok(miller_rabin_big(n))
}

pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &MR_WITNESSES {
        let mut x = pow_mod_u64(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn miller_rabin_big(n: &BigUint) -> bool {
    if n.is_even() {
        return false;
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for &a in &MR_WITNESSES {
        let a = BigUint::from(a);
        if &a % n == BigUint::zero() {
            continue;
        }
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = x.modpow(&BigUint::from(2u32), n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc: u64 = 1;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Complete factorization of n ≥ 1 with the default digit ceiling.
pub fn factorize(n: &BigUint) -> Result<Factorization, ArithError> {
    factorize_with_limit(n, DEFAULT_FACTOR_DIGITS)
}

/// Complete factorization of n ≥ 1; inputs with more than `max_digits`
/// decimal digits are rejected instead of looping indefinitely.
pub fn factorize_with_limit(n: &BigUint, max_digits: u32) -> Result<Factorization, ArithError> {
    if n.is_zero() {
        return Err(ArithError::NotPositive);
    }
    if n.to_string().len() as u32 > max_digits {
        return Err(ArithError::FactorizationTooHard {
            value: n.clone(),
            max_digits,
        });
    }
    let mut factors: Vec<(BigUint, u32)> = Vec::new();
    let mut rest = n.clone();

    // Trial division knocks out everything the density sweeps ever see.
    for p in 2u64..(1u64 << 20) {
        if rest.is_one() {
            break;
        }
        let pb = BigUint::from(p);
        if &pb * &pb > rest {
            break;
        }
        let mut e = 0u32;
        while (&rest % &pb).is_zero() {
            rest /= &pb;
            e += 1;
        }
        if e > 0 {
            factors.push((pb, e));
        }
    }

    if !rest.is_one() {
        let mut stack = vec![rest];
        while let Some(m) = stack.pop() {
            if is_prime(&m).map_err(|_| ArithError::FactorizationTooHard {
                value: n.clone(),
                max_digits,
            })? {
                push_factor(&mut factors, m);
                continue;
            }
            let d = pollard_rho(&m).ok_or(ArithError::FactorizationTooHard {
                value: n.clone(),
                max_digits,
            })?;
            stack.push(&m / &d);
            stack.push(d);
        }
    }

    factors.sort_by(|a, b| a.0.cmp(&b.0));
    let mut merged: Vec<(BigUint, u32)> = Vec::new();
    for (p, e) in factors {
        match merged.last_mut() {
            Some((q, f)) if *q == p => *f += e,
            _ => merged.push((p, e)),
        }
    }
    let out = Factorization {
        value: n.clone(),
        factors: merged,
    };
    debug_assert_eq!(out.recompose(), *n);
    Ok(out)
}

fn push_factor(factors: &mut Vec<(BigUint, u32)>, p: BigUint) {
    factors.push((p, 1));
}

/// Brent-cycle Pollard rho with a fixed seed schedule, so repeated runs
/// factor identically.
fn pollard_rho(n: &BigUint) -> Option<BigUint> {
    if let Some(small) = n.to_u64() {
        return pollard_rho_u64(small).map(BigUint::from);
    }
    let one = BigUint::one();
    for c in 1u64..64 {
        let cc = BigUint::from(c);
        let mut x = BigUint::from(2u64 + c);
        let mut y = x.clone();
        let mut d = one.clone();
        let mut steps = 0u64;
        while d.is_one() {
            x = (&x * &x + &cc) % n;
            y = (&y * &y + &cc) % n;
            y = (&y * &y + &cc) % n;
            let diff = if x > y { &x - &y } else { &y - &x };
            if diff.is_zero() {
                break;
            }
            d = diff.gcd(n);
            steps += 1;
            if steps > 1 << 22 {
                break;
            }
        }
        if !d.is_one() && d != *n {
            return Some(d);
        }
    }
    None
}

fn pollard_rho_u64(n: u64) -> Option<u64> {
    if n.is_multiple_of(2) {
        return Some(2);
    }
    for c in 1u64..64 {
        let f = |x: u64| (mul_mod_u64(x, x, n) + c) % n;
        let mut x = 2 + c;
        let mut y = f(x);
        let mut d = 1u64;
        while d == 1 {
            let diff = x.abs_diff(y);
            if diff == 0 {
                break;
            }
            d = gcd_u64(diff, n);
            x = f(x);
            y = f(f(y));
        }
        if d != 1 && d != n {
            return Some(d);
        }
    }
    None
}

/// Exact perfect-square test via integer square root.
pub fn is_perfect_square(n: &BigUint) -> bool {
    let r = n.sqrt();
    &r * &r == *n
}

pub(crate) fn is_perfect_square_u64(n: u64) -> bool {
    is_perfect_square(&BigUint::from(n))
}

/// Least prime ≡ r (mod m), which exists by Dirichlet whenever gcd(r, m) = 1.
pub fn smallest_prime_in_class(r: &BigUint, m: &BigUint) -> Result<BigUint, ArithError> {
    smallest_prime_in_class_with_ceiling(r, m, &BigUint::from(DEFAULT_PRIME_SEARCH_CEILING))
}

pub fn smallest_prime_in_class_with_ceiling(
    r: &BigUint,
    m: &BigUint,
    ceiling: &BigUint,
) -> Result<BigUint, ArithError> {
    if m.is_zero() {
        return Err(ArithError::NotPositive);
    }
    if !r.gcd(m).is_one() {
        return Err(ArithError::NoDirichletClass {
            r: r.clone(),
            m: m.clone(),
        });
    }
    let mut candidate = r.mod_floor(m);
    if candidate.is_zero() {
        // only possible for m = 1; 2 is the least prime in the lone class
        candidate = BigUint::from(2u32);
    }
    while &candidate <= ceiling {
        if !candidate.is_one() && is_prime(&candidate)? {
            return Ok(candidate);
        }
        candidate += m;
    }
    Err(ArithError::SearchExhausted {
        r: r.clone(),
        m: m.clone(),
        ceiling: ceiling.clone(),
    })
}

/// The first `count` primes ≡ r (mod m); used for witness-independence checks.
pub fn primes_in_class(r: u64, m: u64, count: usize) -> Result<Vec<u64>, ArithError> {
    let mut out = Vec::with_capacity(count);
    if gcd_u64(r % m, m) != 1 {
        return Err(ArithError::NoDirichletClass {
            r: r.into(),
            m: m.into(),
        });
    }
    let mut candidate = r % m;
    while out.len() < count {
        if candidate > 1 && is_prime_u64(candidate) {
            out.push(candidate);
        }
        candidate = candidate
            .checked_add(m)
            .ok_or(ArithError::SearchExhausted {
                r: r.into(),
                m: m.into(),
                ceiling: BigUint::from(u64::MAX),
            })?;
    }
    Ok(out)
}
