//! Timing harness producing one CSV row per algorithm run.

use std::io::Write;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::arith::{ceil_root_of_ratio, iroot, pow, Natural};
use crate::baselines::{squarefree_decide, DivisorSearchRange, Engine, SquarefreeVerdict};
use crate::error::{Error, Result};
use crate::instrument::{Counters, Tick};
use crate::lehman::{detect_with, DetectOptions, DetectOutcome};
use crate::pstar::{gen_instance, next_prime, pstar_solve_with, PStarOptions};

/// Environment variable holding the largest digit count a suite accepts.
pub const MAX_DIGITS_ENV: &str = "RPOWER_MAX_DIGITS";
pub const DEFAULT_MAX_DIGITS: u32 = 30;

pub const CSV_HEADER: &str = "algo,n_decimal,digits,elapsed_ns,inner_iters,peak_bytes,outcome";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Algo {
    #[serde(rename = "lehman")]
    Lehman,
    #[serde(rename = "wheel")]
    Wheel,
    #[serde(rename = "ps")]
    Ps,
    #[serde(rename = "pstar-lehman")]
    PStarLehman,
}

impl Algo {
    pub fn name(self) -> &'static str {
        match self {
            Algo::Lehman => "lehman",
            Algo::Wheel => "wheel",
            Algo::Ps => "ps",
            Algo::PStarLehman => "pstar-lehman",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub algo: Algo,
    pub n_decimal: String,
    pub digits: u32,
    pub elapsed_ns: u64,
    pub inner_iters: u64,
    pub peak_bytes: u64,
    pub outcome: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    /// Next prime at or above `10^d`.
    Worstcase,
    /// Seeded `p^2 q` instances with `q < p < 8q`.
    PStar,
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub suite: Suite,
    pub digits: Vec<u32>,
    pub trials: u32,
    pub seed: u64,
    pub threads: usize,
    pub b_override: Option<Natural>,
    pub max_digits: u32,
}

impl BenchConfig {
    pub fn new(suite: Suite, digits: Vec<u32>) -> Self {
        BenchConfig { suite, digits, trials: 1, seed: 0, threads: 1, b_override: None, max_digits: max_digits_from_env() }
    }
}

/// The digit ceiling from [`MAX_DIGITS_ENV`], or [`DEFAULT_MAX_DIGITS`].
pub fn max_digits_from_env() -> u32 {
    std::env::var(MAX_DIGITS_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_DIGITS)
}

pub fn run(cfg: &BenchConfig) -> Result<Vec<BenchRecord>> {
    if let Some(&d) = cfg.digits.iter().find(|&&d| d > cfg.max_digits) {
        return Err(Error::Infeasible(format!(
            "{d} digits exceeds the ceiling of {} (set {MAX_DIGITS_ENV} to raise it)",
            cfg.max_digits
        )));
    }
    let mut rows = Vec::new();
    for &d in &cfg.digits {
        for t in 0..cfg.trials {
            match cfg.suite {
                Suite::Worstcase => {
                    let n = next_prime(&pow(&Natural::from(10u32), d));
                    rows.push(time_lehman(&n, d, cfg.threads)?);
                    rows.push(time_squarefree(&n, d, Engine::Wheel)?);
                    rows.push(time_squarefree(&n, d, Engine::PollardStrassen)?);
                }
                Suite::PStar => {
                    if d < 6 {
                        return Err(Error::InvalidInput(format!("instances need at least 6 digits, got {d}")));
                    }
                    let inst = gen_instance(d, cfg.seed.wrapping_add(t as u64))?;
                    rows.push(time_pstar(&inst.n, d, cfg)?);
                    rows.push(time_restricted(&inst.n, d, Engine::Wheel)?);
                    rows.push(time_restricted(&inst.n, d, Engine::PollardStrassen)?);
                }
            }
        }
    }
    Ok(rows)
}

fn elapsed(start: Instant) -> u64 {
    start.elapsed().as_nanos().min(u64::MAX as u128) as u64
}

fn time_lehman(n: &Natural, digits: u32, threads: usize) -> Result<BenchRecord> {
    let c = Counters::new();
    let start = Instant::now();
    let out = detect_with(n, 2, &DetectOptions { threads, filter_primes: None }, Some(&c))?;
    let elapsed_ns = elapsed(start);
    let outcome = match out {
        DetectOutcome::Factor(f) => format!("factor:{f}"),
        DetectOutcome::RPowerFree => "r-power-free".to_string(),
    };
    Ok(record(Algo::Lehman, n, digits, elapsed_ns, c.get(Tick::InnerIteration), 0, outcome))
}

fn time_squarefree(n: &Natural, digits: u32, engine: Engine) -> Result<BenchRecord> {
    let c = Counters::new();
    let start = Instant::now();
    let out = squarefree_decide(n, engine, Some(&c))?;
    let elapsed_ns = elapsed(start);
    let outcome = match out {
        SquarefreeVerdict::Squarefree => "squarefree".to_string(),
        SquarefreeVerdict::Squarefull(d) => format!("squarefull:{d}"),
    };
    Ok(engine_record(engine, n, digits, elapsed_ns, &c, outcome))
}

fn time_pstar(n: &Natural, digits: u32, cfg: &BenchConfig) -> Result<BenchRecord> {
    let c = Counters::new();
    let opts = PStarOptions { b_override: cfg.b_override.clone(), threads: cfg.threads, ..Default::default() };
    let start = Instant::now();
    let out = pstar_solve_with(n, &opts, Some(&c))?;
    let elapsed_ns = elapsed(start);
    let outcome = match out {
        Some((p, _)) => format!("factor:{p}"),
        None => "r-power-free".to_string(),
    };
    Ok(record(Algo::PStarLehman, n, digits, elapsed_ns, c.get(Tick::InnerIteration), 0, outcome))
}

/// Smallest divisor in `[⌈N^(1/3)/4⌉, ⌊N^(1/3)⌋]`, the only place `q` can be.
fn time_restricted(n: &Natural, digits: u32, engine: Engine) -> Result<BenchRecord> {
    let lo = ceil_root_of_ratio(n, &Natural::from(64u32), 3).max(Natural::from(2u32));
    let hi = iroot(n, 3)?;
    let range = DivisorSearchRange::new(lo, hi)?;
    let c = Counters::new();
    let start = Instant::now();
    let out = engine.smallest_divisor(n, &range, Some(&c));
    let elapsed_ns = elapsed(start);
    let outcome = match out {
        Some(d) => format!("factor:{d}"),
        None => "r-power-free".to_string(),
    };
    Ok(engine_record(engine, n, digits, elapsed_ns, &c, outcome))
}

fn engine_record(engine: Engine, n: &Natural, digits: u32, elapsed_ns: u64, c: &Counters, outcome: String) -> BenchRecord {
    match engine {
        Engine::Wheel => record(Algo::Wheel, n, digits, elapsed_ns, c.get(Tick::TrialDivision), 0, outcome),
        Engine::PollardStrassen => record(
            Algo::Ps,
            n,
            digits,
            elapsed_ns,
            c.get(Tick::BlockEval) + c.get(Tick::TrialDivision),
            c.peak(),
            outcome,
        ),
    }
}

fn record(algo: Algo, n: &Natural, digits: u32, elapsed_ns: u64, inner_iters: u64, peak_bytes: u64, outcome: String) -> BenchRecord {
    BenchRecord { algo, n_decimal: n.to_string(), digits, elapsed_ns, inner_iters, peak_bytes, outcome }
}

pub fn write_csv<W: Write>(w: W, rows: &[BenchRecord]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    if rows.is_empty() {
        wtr.write_record(CSV_HEADER.split(','))?;
    }
    for r in rows {
        wtr.serialize(r)?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_csv<R: std::io::Read>(r: R) -> Result<Vec<BenchRecord>> {
    let mut rdr = csv::Reader::from_reader(r);
    let mut out = Vec::new();
    for row in rdr.deserialize() {
        out.push(row?);
    }
    Ok(out)
}

/// Mean time and iterations for one `(algo, digits)` group.
#[derive(Clone, Debug, PartialEq)]
pub struct Summary {
    pub algo: Algo,
    pub digits: u32,
    pub runs: usize,
    pub mean_elapsed_ns: f64,
    pub mean_inner_iters: f64,
}

pub fn summarize(rows: &[BenchRecord]) -> Vec<Summary> {
    let mut groups: std::collections::BTreeMap<(u32, Algo), Vec<&BenchRecord>> = Default::default();
    for r in rows {
        groups.entry((r.digits, r.algo)).or_default().push(r);
    }
    groups
        .into_iter()
        .map(|((digits, algo), rs)| {
            let k = rs.len() as f64;
            Summary {
                algo,
                digits,
                runs: rs.len(),
                mean_elapsed_ns: rs.iter().map(|r| r.elapsed_ns as f64).sum::<f64>() / k,
                mean_inner_iters: rs.iter().map(|r| r.inner_iters as f64).sum::<f64>() / k,
            }
        })
        .collect()
}
