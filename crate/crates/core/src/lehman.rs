//! Generalized Lehman search for `r`-th power divisors.
//!
//! If `p^r | N` with `p > N^(1/(r+2))`, write `N = p^r q`. For the dyadic
//! window `j` containing `p` there is a reduced fraction `a/b` close to
//! `p/q` with `b <= B_j` and `a <= A_j`, and `u = aq + rbp` then lies just
//! above `(r+1)(a b^r N)^(1/(r+1))`. Every such `u` is tried; `rbp` is a root
//! of `x^(r+1) - u x^r + r^r a b^r N` and exposes `p` through a gcd. Smaller
//! prime powers are caught by trial division up to `N^(1/(r+2))`.

use std::sync::atomic::{AtomicU64, Ordering};

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith::{ceil_root_of_ratio, gcd, gcd_u64, iroot, is_r_power, pow, pow2_le, CoprimePair, Natural};
use crate::baselines::wheel_scan;
use crate::cubicfilter::{build_bank, FilterBank, PairResidues};
use crate::error::{Error, Result};
use crate::instrument::{CounterSink, LocalTally};
use crate::rootfind::{constant_term, root_interval_bound, RootSearcher};

/// Search bounds for dyadic window `j`.
#[derive(Clone, Debug)]
pub struct Window {
    pub j: u32,
    /// `⌊N^(1/(r+2)) 2^(-(2r+1)j/3)⌋`, the largest denominator `b`.
    pub b_max: Natural,
    /// `⌈2^((r+2)j/3 + r + 1)⌉`, the largest numerator `a`.
    pub a_max: Natural,
    gap: GapBound,
}

impl Window {
    /// Integer upper bound on `aq + rbp - (r+1)(a b^r N)^(1/(r+1))` for the
    /// pair `(a, b)`.
    pub fn gap_bound(&self, a: u64, b: u64) -> Natural {
        self.gap.ceil_at(a, b)
    }
}

/// `⌈r^(r+3/2) N^(1/(2(r+2))) 2^((1-r)j/6 - 1) / √(ab)⌉`, evaluated exactly
/// by raising both sides to the power `6(r+2)`.
#[derive(Clone, Debug)]
struct GapBound {
    num: Natural,
    shift: u64,
    ab_exp: u32,
    k: u32,
}

impl GapBound {
    fn new(n: &Natural, r: u32, j: u32) -> Self {
        let (r64, j64) = (r as u64, j as u64);
        let num = pow(&Natural::from(r), 3 * (2 * r + 3) * (r + 2)) * pow(n, 3);
        let shift = ((r64 - 1) * j64 + 6) * (r64 + 2);
        GapBound { num, shift, ab_exp: 3 * (r + 2), k: 6 * (r + 2) }
    }

    fn ceil_at(&self, a: u64, b: u64) -> Natural {
        let den = pow(&(Natural::from(a) * b), self.ab_exp) << self.shift;
        ceil_root_of_ratio(&self.num, &den, self.k)
    }
}

/// `⌊lg N / (r(r+2))⌋`, the last window index.
pub fn max_window_index(n: &Natural, r: u32) -> u32 {
    ((n.bits().saturating_sub(1)) / (r as u64 * (r as u64 + 2))) as u32
}

pub fn window_params(n: &Natural, r: u32, j: u32) -> Result<Window> {
    check_exponent(n, r)?;
    let max = max_window_index(n, r);
    if j > max {
        return Err(Error::WindowOutOfRange { j, max });
    }
    let (r64, j64) = (r as u64, j as u64);
    let b_max = iroot(&(pow(n, 3) >> ((2 * r64 + 1) * (r64 + 2) * j64)), 3 * (r + 2))?;
    let a_max = ceil_root_of_ratio(&(Natural::one() << ((r64 + 2) * j64 + 3 * (r64 + 1))), &Natural::one(), 3);
    Ok(Window { j, b_max, a_max, gap: GapBound::new(n, r, j) })
}

/// `⌊(r+1)(a b^r N)^(1/(r+1))⌋`, the smallest candidate for pair `(a, b)`.
pub fn amgm_floor(n: &Natural, r: u32, a: u64, b: u64) -> Natural {
    let inner = pow(&Natural::from(r + 1), r + 1) * a * pow(&Natural::from(b), r) * n;
    iroot(&inner, r + 1).expect("r + 1 >= 1")
}

/// One candidate value `u` for `aq + rbp`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub pair: CoprimePair,
    pub u: Natural,
    pub g_floor: Natural,
}

/// All candidates for `pair` in `window`: `u = g_floor + k` for
/// `k = 0 ..= gap_bound + 1`.
pub fn u_candidates(n: &Natural, r: u32, window: &Window, pair: CoprimePair) -> impl Iterator<Item = Candidate> {
    let g_floor = amgm_floor(n, r, pair.a, pair.b);
    let count = window.gap_bound(pair.a, pair.b) + 2u32;
    let mut k = Natural::zero();
    std::iter::from_fn(move || {
        if k >= count {
            return None;
        }
        let u = &g_floor + &k;
        k += 1u32;
        Some(Candidate { pair, u, g_floor: g_floor.clone() })
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DetectOutcome {
    /// A divisor strictly between 1 and `N`.
    Factor(Natural),
    /// No `d > 1` has `d^r | N`.
    RPowerFree,
}

impl DetectOutcome {
    pub fn factor(&self) -> Option<&Natural> {
        match self {
            DetectOutcome::Factor(f) => Some(f),
            DetectOutcome::RPowerFree => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct DetectOptions {
    /// Worker threads for the pair search; 1 runs on the calling thread.
    pub threads: usize,
    /// Residue filter bank size for `r = 2`. `None` sizes the bank from `N`;
    /// `Some(0)` disables filtering.
    pub filter_primes: Option<usize>,
}

impl Default for DetectOptions {
    fn default() -> Self {
        DetectOptions { threads: 1, filter_primes: None }
    }
}

fn check_exponent(n: &Natural, r: u32) -> Result<()> {
    if *n <= Natural::one() {
        return Err(Error::InvalidInput("N must be greater than 1".into()));
    }
    if r < 2 || !pow2_le(r as u64, n) {
        return Err(Error::ExponentOutOfRange { r });
    }
    Ok(())
}

/// Returns a nontrivial factor of `n`, or proves that `n` is `r`-power free.
pub fn detect(n: &Natural, r: u32) -> Result<DetectOutcome> {
    detect_with(n, r, &DetectOptions::default(), None)
}

pub fn detect_with(
    n: &Natural,
    r: u32,
    opts: &DetectOptions,
    sink: Option<&dyn CounterSink>,
) -> Result<DetectOutcome> {
    check_exponent(n, r)?;
    let out = detect_inner(n, r, opts, sink)?;
    if let DetectOutcome::Factor(f) = &out {
        assert!(*f > Natural::one() && f < n && (n % f).is_zero(), "unsound factor {f} of {n}");
    }
    Ok(out)
}

fn detect_inner(n: &Natural, r: u32, opts: &DetectOptions, sink: Option<&dyn CounterSink>) -> Result<DetectOutcome> {
    if let Some(s) = is_r_power(n, r) {
        return Ok(DetectOutcome::Factor(s));
    }

    let td_hi = iroot(n, r + 2)?;
    if td_hi >= Natural::from(2u32) {
        let hi = td_hi
            .to_u64()
            .ok_or_else(|| Error::Infeasible(format!("trial division bound {td_hi}")))?;
        let mut tally = LocalTally::default();
        let d = wheel_scan(n, 2, hi, &mut tally.trial);
        tally.flush(sink);
        if let Some(d) = d {
            return Ok(DetectOutcome::Factor(Natural::from(d)));
        }
    }

    let filter = match (r, opts.filter_primes) {
        (2, None) => Some(build_bank(n)),
        (2, Some(m)) if m > 0 => Some(FilterBank::with_primes(m)),
        _ => None,
    };
    let ctx = SearchCtx {
        n,
        r,
        n_res: filter.as_ref().map(|b| b.residues_of(n)).unwrap_or_default(),
        filter,
    };

    let pool = if opts.threads > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(opts.threads)
                .build()
                .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?,
        )
    } else {
        None
    };

    for j in 0..=max_window_index(n, r) {
        let window = window_params(n, r, j)?;
        let b_max = window
            .b_max
            .to_u64()
            .ok_or_else(|| Error::Infeasible(format!("denominator bound {}", window.b_max)))?;
        let a_max = window
            .a_max
            .to_u64()
            .ok_or_else(|| Error::Infeasible(format!("numerator bound {}", window.a_max)))?;
        let searcher_l = root_interval_bound(n, r, j);
        let found = match &pool {
            None => {
                let mut tally = LocalTally::default();
                let mut hit = None;
                for a in 1..=a_max {
                    hit = ctx.scan_numerator(&window, &searcher_l, a, b_max, &mut tally);
                    if hit.is_some() {
                        break;
                    }
                }
                tally.flush(sink);
                hit
            }
            Some(pool) => {
                let best = AtomicU64::new(u64::MAX);
                pool.install(|| {
                    (1..=a_max)
                        .into_par_iter()
                        .filter_map(|a| {
                            if a > best.load(Ordering::Relaxed) {
                                return None;
                            }
                            let mut tally = LocalTally::default();
                            let hit = ctx.scan_numerator(&window, &searcher_l, a, b_max, &mut tally);
                            tally.flush(sink);
                            hit.map(|f| {
                                best.fetch_min(a, Ordering::Relaxed);
                                (a, f)
                            })
                        })
                        .min_by_key(|(a, _)| *a)
                        .map(|(_, f)| f)
                })
            }
        };
        if let Some(f) = found {
            return Ok(DetectOutcome::Factor(f));
        }
    }
    Ok(DetectOutcome::RPowerFree)
}

struct SearchCtx<'a> {
    n: &'a Natural,
    r: u32,
    filter: Option<FilterBank>,
    n_res: Vec<u32>,
}

impl SearchCtx<'_> {
    /// Every pair `(a, b)` with `b <= b_max`, in increasing `b`, and all of
    /// its candidates in increasing `u`. Returns the first factor found.
    fn scan_numerator(&self, window: &Window, l_hat: &Natural, a: u64, b_max: u64, tally: &mut LocalTally) -> Option<Natural> {
        for b in 1..=b_max {
            if gcd_u64(a, b) != 1 {
                continue;
            }
            if let Some(f) = self.scan_pair(window, l_hat, CoprimePair { a, b }, tally) {
                return Some(f);
            }
        }
        None
    }

    fn scan_pair(&self, window: &Window, l_hat: &Natural, pair: CoprimePair, tally: &mut LocalTally) -> Option<Natural> {
        let (n, r) = (self.n, self.r);
        let g = amgm_floor(n, r, pair.a, pair.b);
        let count = (window.gap_bound(pair.a, pair.b) + 2u32).to_u64().expect("candidate count fits a word");
        let searcher = RootSearcher::new(r, constant_term(n, r, pair.a, pair.b), l_hat.clone());
        let residues = self.filter.as_ref().map(|bank| (bank, PairResidues::new(bank, &self.n_res, pair.a, pair.b, &g)));
        for k in 0..count {
            tally.inner += 1;
            if let Some((bank, res)) = &residues {
                if !res.passes_offset(bank, k) {
                    tally.rejects += 1;
                    continue;
                }
            }
            let u = &g + k;
            if let Some(f) = searcher.factor_from(n, pair.b, &u, &mut tally.evals) {
                return Some(f);
            }
        }
        None
    }
}

/// Decides whether some `d > 1` has `d^r | n`, returning such a `d`.
///
/// Factors from [`detect`] are refined into a coprime base
/// `n = ∏ m_i^(e_i)`. Then `d^r | n` for some `d > 1` exactly when some
/// `m_i` has a prime of multiplicity at least `⌈r / e_i⌉`, which is the same
/// question one level down on a smaller input.
pub fn decide_r_power_full(n: &Natural, r: u32) -> Result<Option<Natural>> {
    if *n <= Natural::one() {
        return Err(Error::InvalidInput("N must be greater than 1".into()));
    }
    if r < 2 {
        return Err(Error::ExponentOutOfRange { r });
    }
    let witness = has_power(n, r)?;
    if let Some(d) = &witness {
        assert!(*d > Natural::one() && (n % pow(d, r)).is_zero(), "unsound witness {d} for {n}");
    }
    Ok(witness)
}

fn has_power(m: &Natural, k: u32) -> Result<Option<Natural>> {
    if *m <= Natural::one() {
        return Ok(None);
    }
    if k == 1 {
        return Ok(Some(m.clone()));
    }
    if !pow2_le(k as u64, m) {
        return Ok(None);
    }
    let f = match detect(m, k)? {
        DetectOutcome::RPowerFree => return Ok(None),
        DetectOutcome::Factor(f) => f,
    };
    let cofactor = m / &f;
    for (base, e) in coprime_base(vec![(f, 1), (cofactor, 1)]) {
        if e >= k {
            return Ok(Some(base));
        }
        if let Some(d) = has_power(&base, k.div_ceil(e))? {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

/// Rewrites `∏ b_i^(e_i)` over pairwise coprime bases greater than 1.
pub fn coprime_base(mut items: Vec<(Natural, u32)>) -> Vec<(Natural, u32)> {
    items.retain(|(b, _)| !b.is_one());
    'outer: loop {
        for i in 0..items.len() {
            for j in i + 1..items.len() {
                if items[i].0 == items[j].0 {
                    let (_, e) = items.swap_remove(j);
                    items[i].1 += e;
                    continue 'outer;
                }
                let g = gcd(&items[i].0, &items[j].0);
                if g.is_one() {
                    continue;
                }
                let (bj, ej) = items.swap_remove(j);
                let (bi, ei) = items.swap_remove(i);
                for (b, e) in [(bi.div_floor(&g), ei), (bj.div_floor(&g), ej), (g, ei + ej)] {
                    if !b.is_one() {
                        items.push((b, e));
                    }
                }
                continue 'outer;
            }
        }
        break;
    }
    items.sort();
    items
}
