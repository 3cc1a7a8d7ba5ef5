//! Integer root isolation for the candidate polynomial
//! `f(x) = x^(r+1) - u x^r + c` with `c = r^r a b^r N`.
//!
//! `f'(x) = x^(r-1) ((r+1)x - ru)`, so on the positive axis `f` strictly
//! decreases up to `rho = ru/(r+1)` and strictly increases after it. Both
//! positive roots are found by integer bisection on one window per branch.
//! No floating point is involved.

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{ceil_root_of_ratio, gcd, pow, Natural};
use crate::lehman::Candidate;

/// `f(x) = x^(r+1) - u x^r + c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidatePoly {
    r: u32,
    u: Natural,
    c: Natural,
}

impl CandidatePoly {
    pub fn new(r: u32, u: Natural, c: Natural) -> Self {
        CandidatePoly { r, u, c }
    }

    /// The polynomial for pair `(a, b)` and candidate `u`: `c = r^r a b^r N`.
    pub fn for_pair(n: &Natural, r: u32, a: u64, b: u64, u: Natural) -> Self {
        CandidatePoly { r, u, c: constant_term(n, r, a, b) }
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn u(&self) -> &Natural {
        &self.u
    }

    pub fn c(&self) -> &Natural {
        &self.c
    }

    /// `⌊ru/(r+1)⌋` and `⌈ru/(r+1)⌉`.
    pub fn rho_bounds(&self) -> (Natural, Natural) {
        rho_bounds(self.r, &self.u)
    }

    pub fn eval(&self, x: &Natural) -> BigInt {
        eval_f(self, x)
    }
}

/// `r^r a b^r N`.
pub fn constant_term(n: &Natural, r: u32, a: u64, b: u64) -> Natural {
    pow(&Natural::from(r), r) * a * pow(&Natural::from(b), r) * n
}

fn rho_bounds(r: u32, u: &Natural) -> (Natural, Natural) {
    let (q, rem) = (u * r).div_rem(&Natural::from(r + 1));
    if rem.is_zero() {
        (q.clone(), q)
    } else {
        let c = &q + 1u32;
        (q, c)
    }
}

/// Exact value of `f(x)`.
pub fn eval_f(poly: &CandidatePoly, x: &Natural) -> BigInt {
    let xr = BigInt::from(pow(x, poly.r));
    let diff = BigInt::from(x.clone()) - BigInt::from(poly.u.clone());
    xr * diff + BigInt::from(poly.c.clone())
}

/// Integer upper bound `L̂ >= (r/(r+1)) N^(1/(r+2)) 2^(-(r-1)j/3)` on the
/// distance between `rho` and the root `r b p`, for every pair in window `j`.
/// Never less than 1.
pub fn root_interval_bound(n: &Natural, r: u32, j: u32) -> Natural {
    // Raise to the power K = 3(r+2) so every exponent is an integer.
    let k = 3 * (r + 2);
    let num = pow(&Natural::from(r), k) * pow(n, 3);
    let den = pow(&Natural::from(r + 1), k) << ((r as u64 - 1) * j as u64 * (r as u64 + 2));
    let l = ceil_root_of_ratio(&num, &den, k);
    l.max(Natural::one())
}

/// Outcome of a root search, with the number of polynomial evaluations spent.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RootSearch {
    pub roots: Vec<Natural>,
    /// Evaluations on the decreasing and the increasing branch.
    pub evals: [u64; 2],
}

/// Finds the integer roots of `poly` in `[⌊rho⌋ - l_hat, ⌊rho⌋]` and
/// `[⌈rho⌉, ⌈rho⌉ + l_hat]` (the left window clipped at 1).
pub fn positive_roots(poly: &CandidatePoly, l_hat: &Natural) -> RootSearch {
    RootSearcher::new(poly.r, poly.c.clone(), l_hat.clone()).search(&poly.u)
}

/// Tests candidate `u` for pair `(a, b)` in window `j`: returns a nontrivial
/// factor of `n` recovered from an integer root of `f`, if any.
pub fn try_candidate(n: &Natural, r: u32, cand: &Candidate, j: u32) -> Option<Natural> {
    let searcher = RootSearcher::new(
        r,
        constant_term(n, r, cand.pair.a, cand.pair.b),
        root_interval_bound(n, r, j),
    );
    let mut evals = 0;
    searcher.factor_from(n, cand.pair.b, &cand.u, &mut evals)
}

/// Root search for a fixed `(r, c, L̂)`, reused across many `u`.
#[derive(Clone, Debug)]
pub(crate) struct RootSearcher {
    r: u32,
    c: Natural,
    l_hat: Natural,
    c_small: Option<i128>,
    l_hat_small: Option<i128>,
}

// Values are kept below 2^124 on the fast path so x^r (x - u) + c cannot
// overflow i128.
const FAST_BITS: u64 = 124;

impl RootSearcher {
    pub fn new(r: u32, c: Natural, l_hat: Natural) -> Self {
        let c_small = (c.bits() <= FAST_BITS).then(|| c.to_i128()).flatten();
        let l_hat_small = (l_hat.bits() <= 64).then(|| l_hat.to_i128()).flatten();
        RootSearcher { r, c, l_hat, c_small, l_hat_small }
    }

    pub fn search(&self, u: &Natural) -> RootSearch {
        if let Some(found) = self.search_small(u) {
            return found;
        }
        self.search_big(u)
    }

    /// Factor of `n` from any root `x0`: tries `gcd(x0, n)`, the cofactor
    /// `gcd(u - x0, n)`, and `gcd(x0 / (rb), n)` when `rb | x0`.
    pub fn factor_from(&self, n: &Natural, b: u64, u: &Natural, evals: &mut u64) -> Option<Natural> {
        let found = self.search(u);
        *evals += found.evals[0] + found.evals[1];
        let rb = Natural::from(self.r) * b;
        for x0 in &found.roots {
            let mut tries = vec![gcd(x0, n)];
            if u > x0 {
                tries.push(gcd(&(u - x0), n));
            }
            let (quo, rem) = x0.div_rem(&rb);
            if rem.is_zero() && !quo.is_zero() {
                tries.push(gcd(&quo, n));
            }
            if let Some(g) = tries.into_iter().find(|g| !g.is_one() && g != n) {
                debug_assert!((n % &g).is_zero());
                return Some(g);
            }
        }
        None
    }

    fn search_small(&self, u: &Natural) -> Option<RootSearch> {
        let c = self.c_small?;
        let l = self.l_hat_small?;
        if u.bits() > FAST_BITS {
            return None;
        }
        let u = u.to_i128()?;
        let r = self.r as i128;
        let ur = u.checked_mul(r)?;
        let lo_rho = ur / (r + 1);
        let hi_rho = if ur % (r + 1) == 0 { lo_rho } else { lo_rho + 1 };
        let x_max = hi_rho.checked_add(l)?;
        let xb = 128 - x_max.leading_zeros() as u64;
        let ub = 128 - u.leading_zeros() as u64;
        if xb * (self.r as u64 + 1) > FAST_BITS || xb * self.r as u64 + ub > FAST_BITS {
            return None;
        }
        let rr = self.r;
        let f = |x: &i128| -> Ordering {
            let v = x.pow(rr) * (x - u) + c;
            v.cmp(&0)
        };
        let mut out = RootSearch::default();
        let dec_lo = (lo_rho - l).max(1);
        if dec_lo <= lo_rho {
            let (root, evals) = branch_root(dec_lo, lo_rho, true, f);
            out.evals[0] = evals;
            out.roots.extend(root.map(|x| Natural::from(x as u128)));
        }
        let (root, evals) = branch_root(hi_rho.max(1), x_max, false, f);
        out.evals[1] = evals;
        if let Some(x) = root {
            let x = Natural::from(x as u128);
            if !out.roots.contains(&x) {
                out.roots.push(x);
            }
        }
        Some(out)
    }

    fn search_big(&self, u: &Natural) -> RootSearch {
        let (lo_rho, hi_rho) = rho_bounds(self.r, u);
        let u = BigInt::from(u.clone());
        let c = BigInt::from(self.c.clone());
        let l = BigInt::from(self.l_hat.clone());
        let lo_rho = BigInt::from(lo_rho);
        let hi_rho = BigInt::from(hi_rho);
        let rr = self.r;
        let f = |x: &BigInt| -> Ordering {
            let v = num_traits::pow::pow(x.clone(), rr as usize) * (x - &u) + &c;
            match v.sign() {
                Sign::Minus => Ordering::Less,
                Sign::NoSign => Ordering::Equal,
                Sign::Plus => Ordering::Greater,
            }
        };
        let mut out = RootSearch::default();
        let one = BigInt::one();
        let dec_lo = (&lo_rho - &l).max(one.clone());
        if dec_lo <= lo_rho {
            let (root, evals) = branch_root(dec_lo, lo_rho.clone(), true, f);
            out.evals[0] = evals;
            out.roots.extend(root.and_then(|x| x.to_biguint()));
        }
        let inc_lo = hi_rho.clone().max(one);
        let inc_hi = &hi_rho + &l;
        let (root, evals) = branch_root(inc_lo, inc_hi, false, f);
        out.evals[1] = evals;
        if let Some(x) = root.filter(|x| x.is_positive()).and_then(|x| x.to_biguint()) {
            if !out.roots.contains(&x) {
                out.roots.push(x);
            }
        }
        out
    }
}

/// Bisection for an exact integer root on a monotone branch `[lo, hi]`.
/// The branch is skipped unless the endpoint signs bracket zero.
fn branch_root<T, F>(mut lo: T, mut hi: T, decreasing: bool, mut sign: F) -> (Option<T>, u64)
where
    T: Integer + Clone,
    F: FnMut(&T) -> Ordering,
{
    // Orient so that the branch reads as increasing: Less ... Greater.
    let mut oriented = |x: &T| {
        let s = sign(x);
        if decreasing {
            s.reverse()
        } else {
            s
        }
    };
    let s_lo = oriented(&lo);
    if s_lo == Ordering::Equal {
        return (Some(lo), 1);
    }
    if lo == hi || s_lo == Ordering::Greater {
        return (None, 1);
    }
    let s_hi = oriented(&hi);
    let mut evals = 2;
    match s_hi {
        Ordering::Equal => return (Some(hi), evals),
        Ordering::Less => return (None, evals),
        Ordering::Greater => {}
    }
    let two = T::one() + T::one();
    while hi.clone() - lo.clone() > T::one() {
        let mid = (lo.clone() + hi.clone()).div_floor(&two);
        evals += 1;
        match oriented(&mid) {
            Ordering::Equal => return (Some(mid), evals),
            Ordering::Less => lo = mid,
            Ordering::Greater => hi = mid,
        }
    }
    (None, evals)
}
