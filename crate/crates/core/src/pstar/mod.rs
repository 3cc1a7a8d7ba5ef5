//! Single-window search for `N = p^2 q` with `q < p < 8q`.
//!
//! The ratio condition pins `p` to `(N^(1/3), 2 N^(1/3))`, so one window
//! suffices. With Farey order `B ≈ N^(1/9)` and fractions `b <= a <= 8b`,
//! the whole search costs about `N^(2/9)` candidate steps.

mod primality;

use std::io::{BufRead, Write};
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::RandBigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::arith::{ceil_root, ceil_root_of_ratio, gcd_u64, iroot, parse_natural, pow, CoprimePair, Natural, RatioBounds};
use crate::error::{Error, Result};
use crate::instrument::{CounterSink, LocalTally};
use crate::lehman::amgm_floor;
use crate::rootfind::{constant_term, RootSearcher};

pub use primality::{is_prime_u64, is_probable_prime, next_prime};

/// A generated instance. `p` and `q` are kept for checking only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PStarInstance {
    pub n: Natural,
    pub p: Natural,
    pub q: Natural,
    pub seed: u64,
}

/// One line of an instance file; `p`, `q` and the seed may be absent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceRecord {
    pub n: Natural,
    pub p: Option<Natural>,
    pub q: Option<Natural>,
    pub seed: Option<u64>,
}

impl From<PStarInstance> for InstanceRecord {
    fn from(i: PStarInstance) -> Self {
        InstanceRecord { n: i.n, p: Some(i.p), q: Some(i.q), seed: Some(i.seed) }
    }
}

/// How many candidates to try per fraction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CandidateCount {
    /// `⌈√2 N^(1/3) / (B^2 √(ab))⌉ + 1`.
    #[default]
    Tight,
    /// `⌈2^(5/2) N^(1/3) / (B^2 √(ab))⌉ + 1`.
    Conservative,
}

#[derive(Clone, Debug)]
pub struct PStarOptions {
    /// Farey order; defaults to `⌈N^(1/9)⌉`.
    pub b_override: Option<Natural>,
    pub count: CandidateCount,
    pub threads: usize,
}

impl Default for PStarOptions {
    fn default() -> Self {
        PStarOptions { b_override: None, count: CandidateCount::Tight, threads: 1 }
    }
}

/// Finds `(p, q)` with `N = p^2 q` and `q < p < 8q`, if `N` has that shape.
pub fn pstar_solve(n: &Natural, b_override: Option<Natural>) -> Result<Option<(Natural, Natural)>> {
    pstar_solve_with(n, &PStarOptions { b_override, ..Default::default() }, None)
}

pub fn pstar_solve_with(
    n: &Natural,
    opts: &PStarOptions,
    sink: Option<&dyn CounterSink>,
) -> Result<Option<(Natural, Natural)>> {
    if *n <= Natural::one() {
        return Err(Error::InvalidInput("N must be greater than 1".into()));
    }
    let b = opts.b_override.clone().unwrap_or_else(|| ceil_root(n, 9));
    if b.is_zero() {
        return Err(Error::InvalidInput("Farey order must be positive".into()));
    }
    let b_max = b.to_u64().ok_or_else(|| Error::Infeasible(format!("Farey order {b}")))?;
    let a_max = b_max
        .checked_mul(8)
        .ok_or_else(|| Error::Infeasible(format!("Farey order {b}")))?;

    // |rho - 2bp| = (2/3)|aq - bp| <= (2/3) q / B < (2/3) N^(1/3) / B
    let l_hat = ceil_root_of_ratio(&(n * 8u32), &(pow(&b, 3) * 27u32), 3).max(Natural::one());
    let count_num = n * n * 8u32 * if opts.count == CandidateCount::Tight { 1u32 } else { 4096 };
    let b12 = pow(&b, 12);
    let bounds = RatioBounds::closed((1, 1), (8, 1));

    let scan = |a: u64, tally: &mut LocalTally| -> Option<(Natural, Natural)> {
        for bb in 1..=b_max {
            if !bounds.admits(a, bb) || gcd_u64(a, bb) != 1 {
                continue;
            }
            let ab = Natural::from(a) * bb;
            let count = ceil_root_of_ratio(&count_num, &(&b12 * pow(&ab, 3)), 6) + 1u32;
            let count = count.to_u64().expect("candidate count fits a word");
            let g = amgm_floor(n, 2, a, bb);
            let searcher = RootSearcher::new(2, constant_term(n, 2, a, bb), l_hat.clone());
            for k in 0..=count {
                tally.inner += 1;
                let u = &g + k;
                let found = searcher.search(&u);
                tally.evals += found.evals[0] + found.evals[1];
                for x in &found.roots {
                    if let Some(pq) = reconstruct(n, CoprimePair { a, b: bb }, &u, x) {
                        return Some(pq);
                    }
                }
            }
        }
        None
    };

    let found = if opts.threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.threads)
            .build()
            .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
        let best = AtomicU64::new(u64::MAX);
        pool.install(|| {
            (1..=a_max)
                .into_par_iter()
                .filter_map(|a| {
                    if a > best.load(Ordering::Relaxed) {
                        return None;
                    }
                    let mut tally = LocalTally::default();
                    let hit = scan(a, &mut tally);
                    tally.flush(sink);
                    hit.map(|pq| {
                        best.fetch_min(a, Ordering::Relaxed);
                        (a, pq)
                    })
                })
                .min_by_key(|(a, _)| *a)
                .map(|(_, pq)| pq)
        })
    } else {
        let mut tally = LocalTally::default();
        let hit = (1..=a_max).find_map(|a| scan(a, &mut tally));
        tally.flush(sink);
        hit
    };
    if let Some((p, q)) = &found {
        assert!(&(p * p * q) == n && q < p && p < &(q * 8u32), "bad reconstruction of {n}");
    }
    Ok(found)
}

/// `x = 2bp` and `u - x = aq` for the true pair.
fn reconstruct(n: &Natural, pair: CoprimePair, u: &Natural, x: &Natural) -> Option<(Natural, Natural)> {
    let (p, rem) = x.div_rem(&Natural::from(2 * pair.b));
    if !rem.is_zero() || p.is_zero() || u <= x {
        return None;
    }
    let (q, rem) = (u - x).div_rem(&Natural::from(pair.a));
    if !rem.is_zero() || q.is_zero() {
        return None;
    }
    (&(&p * &p * &q) == n && q < p && p < &q * 8u32).then_some((p, q))
}

/// Seeded instance with about `digits` decimal digits: `q` a random prime in
/// `[10^(digits/3) / 4, 10^(digits/3)]`, `p` a random prime in `(q, 8q)`.
pub fn gen_instance(digits: u32, seed: u64) -> Result<PStarInstance> {
    if digits < 6 {
        return Err(Error::InvalidInput(format!("need at least 6 digits, got {digits}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ten_j = pow(&Natural::from(10u32), digits);
    let q_lo = ceil_root_of_ratio(&ten_j, &Natural::from(64u32), 3);
    let q_hi = iroot(&ten_j, 3)?;
    let q = random_prime(&mut rng, &q_lo, &q_hi)?;
    let p = random_prime(&mut rng, &(&q + 1u32), &(&q * 8u32 - 1u32))?;
    let n = &p * &p * &q;
    Ok(PStarInstance { n, p, q, seed })
}

const PRIME_DRAWS: u32 = 100_000;

fn random_prime(rng: &mut ChaCha8Rng, lo: &Natural, hi: &Natural) -> Result<Natural> {
    let end = hi + 1u32;
    for _ in 0..PRIME_DRAWS {
        let c = rng.gen_biguint_range(lo, &end);
        if is_probable_prime(&c) {
            return Ok(c);
        }
    }
    Err(Error::PrimeSearchExhausted { lo: lo.to_string(), hi: hi.to_string(), tries: PRIME_DRAWS })
}

/// Writes one `N p q seed` line per instance.
pub fn write_instances<W: Write>(mut w: W, instances: &[PStarInstance]) -> Result<()> {
    for i in instances {
        writeln!(w, "{} {} {} {}", i.n, i.p, i.q, i.seed)?;
    }
    Ok(())
}

/// Reads `N [p q] [seed]` lines. Blank lines and `#` comments are skipped.
pub fn read_instances<R: BufRead>(r: R) -> Result<Vec<InstanceRecord>> {
    let mut out = Vec::new();
    for (idx, line) in r.lines().enumerate() {
        let line = line?;
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |msg: String| Error::InstanceFormat { line: idx + 1, msg };
        let fields: Vec<&str> = line.split_whitespace().collect();
        let num = |s: &str| parse_natural(s).map_err(|e| bad(e.to_string()));
        let seed = |s: &str| s.parse::<u64>().map_err(|e| bad(format!("seed {s:?}: {e}")));
        let rec = match fields.as_slice() {
            [n] => InstanceRecord { n: num(n)?, p: None, q: None, seed: None },
            [n, s] => InstanceRecord { n: num(n)?, p: None, q: None, seed: Some(seed(s)?) },
            [n, p, q] => InstanceRecord { n: num(n)?, p: Some(num(p)?), q: Some(num(q)?), seed: None },
            [n, p, q, s] => InstanceRecord { n: num(n)?, p: Some(num(p)?), q: Some(num(q)?), seed: Some(seed(s)?) },
            _ => return Err(bad(format!("expected 1 to 4 fields, got {}", fields.len()))),
        };
        if let (Some(p), Some(q)) = (&rec.p, &rec.q) {
            if p * p * q != rec.n {
                return Err(bad("p^2 q does not equal N".into()));
            }
        }
        out.push(rec);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat(v: u64) -> Natural {
        Natural::from(v)
    }

    #[test]
    fn solve_examples() {
        assert_eq!(pstar_solve(&nat(847), None).unwrap(), Some((nat(11), nat(7))));
        let n = nat(103 * 103 * 101);
        assert_eq!(pstar_solve(&n, None).unwrap(), Some((nat(103), nat(101))));
        assert_eq!(pstar_solve(&nat(1_000_000_007), None).unwrap(), None);
        // 7^2 * 11 has p < q
        assert_eq!(pstar_solve(&nat(539), None).unwrap(), None);
    }

    #[test]
    fn ratio_endpoints() {
        // p/q just above 1 and just below 8
        for (p, q) in [(10_009u64, 10_007u64), (1_013, 127)] {
            assert!(is_prime_u64(p) && is_prime_u64(q));
            let n = nat(p) * nat(p) * nat(q);
            assert_eq!(pstar_solve(&n, None).unwrap(), Some((nat(p), nat(q))), "p={p} q={q}");
        }
    }

    #[test]
    fn composite_factors_solve() {
        // p, q need not be prime
        let (p, q) = (nat(21 * 23), nat(19 * 23));
        let n = &p * &p * &q;
        assert_eq!(pstar_solve(&n, None).unwrap(), Some((p, q)));
    }

    #[test]
    fn generator_contract() {
        for seed in 0..20 {
            let i = gen_instance(12, seed).unwrap();
            assert!(i.q < i.p && i.p < &i.q * 8u32);
            assert_eq!(&i.p * &i.p * &i.q, i.n);
            assert!(pow(&i.p, 3) > i.n && pow(&i.p, 3) < &i.n * 8u32);
            assert!(is_probable_prime(&i.p) && is_probable_prime(&i.q));
        }
        assert_eq!(gen_instance(21, 7).unwrap(), gen_instance(21, 7).unwrap());
        assert!(gen_instance(5, 0).is_err());
    }

    #[test]
    fn digit_counts_stay_close() {
        // q^3 < N < 64 q^3 with 10^j / 64 <= q^3 <= 10^j, so N has j - 1 to j + 2 digits
        for digits in [12u32, 21] {
            for seed in 0..100 {
                let d = gen_instance(digits, seed).unwrap().n.to_string().len() as i64 - digits as i64;
                assert!((-1..=2).contains(&d), "{d:+} digits for {digits}, seed {seed}");
            }
        }
    }

    #[test]
    fn instance_file_round_trip() {
        let insts: Vec<_> = (0..3).map(|s| gen_instance(12, s).unwrap()).collect();
        let mut buf = Vec::new();
        write_instances(&mut buf, &insts).unwrap();
        let back = read_instances(buf.as_slice()).unwrap();
        assert_eq!(back, insts.into_iter().map(InstanceRecord::from).collect::<Vec<_>>());

        let blind = read_instances("847\n# comment\n\n847 3\n".as_bytes()).unwrap();
        assert_eq!(blind.len(), 2);
        assert_eq!(blind[1].seed, Some(3));
        assert!(matches!(read_instances("847 11 8 0\n".as_bytes()), Err(Error::InstanceFormat { line: 1, .. })));
        assert!(matches!(read_instances("x\n".as_bytes()), Err(Error::InstanceFormat { line: 1, .. })));
    }

    #[test]
    fn threads_agree() {
        let i = gen_instance(15, 3).unwrap();
        let opts = PStarOptions { threads: 2, ..Default::default() };
        assert_eq!(pstar_solve_with(&i.n, &opts, None).unwrap(), Some((i.p, i.q)));
    }
}
