//! Probable-prime testing: deterministic Miller–Rabin below 2^64,
//! Baillie–PSW above.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{is_r_power, rem_u64, Natural};

const SMALL_PRIMES: [u64; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

// Bases sufficient for every n < 2^64.
const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic primality for machine words.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in SMALL_PRIMES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for a in MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Primality: exact below 2^64, Baillie–PSW (no known counterexample) above.
pub fn is_probable_prime(n: &Natural) -> bool {
    if let Some(v) = n.to_u64() {
        return is_prime_u64(v);
    }
    if SMALL_PRIMES.iter().any(|&p| rem_u64(n, p) == 0) {
        return false;
    }
    strong_fermat_base2(n) && is_r_power(n, 2).is_none() && strong_lucas(n)
}

/// Smallest prime `>= n`.
pub fn next_prime(n: &Natural) -> Natural {
    let mut c = n.clone().max(Natural::from(2u32));
    if c > Natural::from(2u32) && c.is_even() {
        c += 1u32;
    }
    while !is_probable_prime(&c) {
        c += if c == Natural::from(2u32) { 1u32 } else { 2u32 };
    }
    c
}

fn strong_fermat_base2(n: &Natural) -> bool {
    let nm1 = n - 1u32;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    let mut x = Natural::from(2u32).modpow(&d, n);
    if x.is_one() || x == nm1 {
        return true;
    }
    for _ in 1..s {
        x = &x * &x % n;
        if x == nm1 {
            return true;
        }
    }
    false
}

/// Jacobi symbol `(a / n)` for odd `n > 0`.
fn jacobi(a: &BigInt, n: &Natural) -> i32 {
    let n_int = BigInt::from(n.clone());
    let mut a = a.mod_floor(&n_int).to_biguint().expect("reduced");
    let mut n = n.clone();
    let mut t = 1;
    while !a.is_zero() {
        while a.is_even() {
            a >>= 1;
            let r = rem_u64(&n, 8);
            if r == 3 || r == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if rem_u64(&a, 4) == 3 && rem_u64(&n, 4) == 3 {
            t = -t;
        }
        a %= &n;
    }
    if n.is_one() {
        t
    } else {
        0
    }
}

/// Strong Lucas probable-prime test with Selfridge parameters.
/// Expects odd `n` that is not a perfect square.
fn strong_lucas(n: &Natural) -> bool {
    let mut d_val: i64 = 5;
    loop {
        let j = jacobi(&BigInt::from(d_val), n);
        if j == -1 {
            break;
        }
        if j == 0 && BigInt::from(d_val.unsigned_abs()) != BigInt::from(n.clone()) {
            return false;
        }
        d_val = if d_val > 0 { -(d_val + 2) } else { -d_val + 2 };
    }
    let m = BigInt::from(n.clone());
    let md = |x: BigInt| x.mod_floor(&m);
    let half = |x: BigInt| {
        let x = if x.is_odd() { x + &m } else { x };
        md(x >> 1)
    };
    let p = BigInt::one();
    let q = md(BigInt::from((1 - d_val) / 4));
    let d = md(BigInt::from(d_val));

    let np1 = n + 1u32;
    let s = np1.trailing_zeros().unwrap_or(0);
    let k = &np1 >> s;

    let mut u = BigInt::one();
    let mut v = p.clone();
    let mut qk = q.clone();
    for i in (0..k.bits() - 1).rev() {
        u = md(&u * &v);
        v = md(&v * &v - (&qk << 1));
        qk = md(&qk * &qk);
        if k.bit(i) {
            let nu = half(&p * &u + &v);
            let nv = half(&d * &u + &p * &v);
            u = nu;
            v = nv;
            qk = md(&qk * &q);
        }
    }
    if u.sign() == Sign::NoSign || v.sign() == Sign::NoSign {
        return true;
    }
    for _ in 1..s {
        v = md(&v * &v - (&qk << 1));
        if v.is_zero() {
            return true;
        }
        qk = md(&qk * &qk);
    }
    false
}
