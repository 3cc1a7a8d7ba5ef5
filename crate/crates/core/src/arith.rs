//! Exact big-integer kernel shared by every search routine.
//!
//! Everything here is exact: roots are floors (or ceilings where named so),
//! never rounded floating-point values. Floating point is used at most to
//! seed Newton iterations, and every result is corrected against an exact
//! power-and-compare test before it is returned.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision nonnegative integer.
pub type Natural = BigUint;

/// `⌊√n⌋`.
pub fn isqrt(n: &Natural) -> Natural {
    iroot(n, 2).expect("k = 2 is valid")
}

/// `⌊n^(1/k)⌋`, computed by integer Newton iteration from an overestimate,
/// followed by a floor-correctness adjustment.
pub fn iroot(n: &Natural, k: u32) -> Result<Natural> {
    if k == 0 {
        return Err(Error::InvalidInput("root index k must be at least 1".into()));
    }
    if k == 1 || n.is_zero() || n.is_one() {
        return Ok(n.clone());
    }
    let bits = n.bits();
    if bits <= k as u64 {
        // n < 2^k, so the root is 1
        return Ok(Natural::one());
    }

    let mut x = initial_overestimate(n, k);
    // Newton descent: strictly decreasing while x exceeds the true root.
    let km1 = k - 1;
    loop {
        let xp = pow(&x, km1);
        let y = (&x * km1 + n / &xp) / k;
        if y >= x {
            break;
        }
        x = y;
    }
    // The descent lands on the floor root; these loops only run if the
    // start point was not an overestimate.
    while pow(&x, k) > *n {
        x -= 1u32;
    }
    loop {
        let next = &x + 1u32;
        if pow(&next, k) <= *n {
            x = next;
        } else {
            break;
        }
    }
    Ok(x)
}

fn initial_overestimate(n: &Natural, k: u32) -> Natural {
    let bits = n.bits();
    if bits < 1000 {
        if let Some(f) = n.to_f64() {
            let est = f.powf(1.0 / k as f64);
            if est.is_finite() && est < 1e30 {
                let guess = Natural::from((est * (1.0 + 1e-10)) as u128 + 2);
                // fall through to the power-of-two start if f64 rounding undershot
                if pow(&guess, k) > *n {
                    return guess;
                }
            }
        }
    }
    Natural::one() << bits.div_ceil(k as u64)
}

/// Smallest integer `t` with `t^k * den >= num`, i.e. `⌈(num/den)^(1/k)⌉`.
pub fn ceil_root_of_ratio(num: &Natural, den: &Natural, k: u32) -> Natural {
    assert!(!den.is_zero(), "denominator must be positive");
    let mut t = iroot(&(num / den), k).expect("k >= 1");
    while pow(&t, k) * den < *num {
        t += 1u32;
    }
    t
}

/// `⌈n^(1/k)⌉`.
pub fn ceil_root(n: &Natural, k: u32) -> Natural {
    ceil_root_of_ratio(n, &Natural::one(), k)
}

/// Returns `x` with `x^r == n`, if there is one.
pub fn is_r_power(n: &Natural, r: u32) -> Option<Natural> {
    if r == 0 {
        return None;
    }
    let x = iroot(n, r).ok()?;
    if pow(&x, r) == *n {
        Some(x)
    } else {
        None
    }
}

/// Greatest common divisor. `gcd(0, 0) = 0`.
pub fn gcd(a: &Natural, b: &Natural) -> Natural {
    a.gcd(b)
}

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn pow(base: &Natural, exp: u32) -> Natural {
    num_traits::pow::pow(base.clone(), exp as usize)
}

/// `n mod d` for a machine-word divisor, without allocating.
pub fn rem_u64(n: &Natural, d: u64) -> u64 {
    debug_assert!(d != 0);
    let d128 = d as u128;
    let mut rem: u128 = 0;
    for digit in n.iter_u64_digits().rev() {
        rem = ((rem << 64) | digit as u128) % d128;
    }
    rem as u64
}

/// `2^k <= n`, i.e. `k <= lg n`.
pub fn pow2_le(k: u64, n: &Natural) -> bool {
    !n.is_zero() && k < n.bits()
}

/// `lg n` as a float (exact enough for threshold rules, never for bounds).
pub fn lg_f64(n: &Natural) -> f64 {
    let bits = n.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 1000 {
        return n.to_f64().unwrap_or(f64::INFINITY).log2();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_u64().unwrap_or(u64::MAX);
    shift as f64 + (top as f64).log2()
}

/// Parses a decimal or `0x`-prefixed hexadecimal integer.
pub fn parse_natural(s: &str) -> Result<Natural> {
    let t = s.trim().replace('_', "");
    let parsed = if let Some(hex) = t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        Natural::parse_bytes(hex.as_bytes(), 16)
    } else {
        Natural::parse_bytes(t.as_bytes(), 10)
    };
    match parsed {
        Some(n) if !t.is_empty() => Ok(n),
        _ => Err(Error::InvalidInput(format!("not an integer: {s:?}"))),
    }
}

/// The first `m` primes, by trial division.
pub fn first_primes(m: usize) -> Vec<u64> {
    let mut primes: Vec<u64> = Vec::with_capacity(m);
    let mut cand = 2u64;
    while primes.len() < m {
        if primes.iter().take_while(|&&p| p * p <= cand).all(|&p| cand % p != 0) {
            primes.push(cand);
        }
        cand += 1;
    }
    primes
}

/// A reduced fraction `a/b` with `a, b >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoprimePair {
    pub a: u64,
    pub b: u64,
}

/// One side of a ratio constraint on `a/b`, given as `num/den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RatioBound {
    /// Strict: `a/b` must differ from the bound.
    Open(u64, u64),
    /// Inclusive.
    Closed(u64, u64),
}

/// Lower and upper constraints on `a/b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RatioBounds {
    pub lo: RatioBound,
    pub hi: RatioBound,
}

impl RatioBounds {
    pub fn open(lo: (u64, u64), hi: (u64, u64)) -> Self {
        RatioBounds { lo: RatioBound::Open(lo.0, lo.1), hi: RatioBound::Open(hi.0, hi.1) }
    }

    pub fn closed(lo: (u64, u64), hi: (u64, u64)) -> Self {
        RatioBounds { lo: RatioBound::Closed(lo.0, lo.1), hi: RatioBound::Closed(hi.0, hi.1) }
    }

    pub fn admits(&self, a: u64, b: u64) -> bool {
        // a/b vs n/d  <=>  a*d vs n*b
        let (a, b) = (a as u128, b as u128);
        let lo_ok = match self.lo {
            RatioBound::Open(n, d) => a * d as u128 > n as u128 * b,
            RatioBound::Closed(n, d) => a * d as u128 >= n as u128 * b,
        };
        let hi_ok = match self.hi {
            RatioBound::Open(n, d) => a * (d as u128) < n as u128 * b,
            RatioBound::Closed(n, d) => a * (d as u128) <= n as u128 * b,
        };
        lo_ok && hi_ok
    }
}

/// Enumerates reduced fractions `a/b` with `1 <= a <= a_max`, `1 <= b <= b_max`,
/// optionally constrained by `bounds`. Order: `a` ascending, then `b` ascending.
pub fn coprime_pairs(a_max: u64, b_max: u64, bounds: Option<RatioBounds>) -> CoprimePairs {
    CoprimePairs { a_max, b_max, bounds, a: 1, b: 0 }
}

#[derive(Clone, Debug)]
pub struct CoprimePairs {
    a_max: u64,
    b_max: u64,
    bounds: Option<RatioBounds>,
    a: u64,
    b: u64,
}

impl Iterator for CoprimePairs {
    type Item = CoprimePair;

    fn next(&mut self) -> Option<CoprimePair> {
        while self.a <= self.a_max && self.b_max > 0 {
            if self.b < self.b_max {
                self.b += 1;
            } else {
                self.a += 1;
                self.b = 1;
                if self.a > self.a_max {
                    return None;
                }
            }
            let (a, b) = (self.a, self.b);
            if gcd_u64(a, b) != 1 {
                continue;
            }
            if let Some(bounds) = &self.bounds {
                if !bounds.admits(a, b) {
                    continue;
                }
            }
            return Some(CoprimePair { a, b });
        }
        None
    }
}
