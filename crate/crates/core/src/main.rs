use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use rpower::bench::{self, BenchConfig, Suite, MAX_DIGITS_ENV};
use rpower::pstar::{self, PStarOptions};
use rpower::{detect_with, parse_natural, squarefree_decide, Counters, DetectOptions, DetectOutcome, Engine, Natural, SquarefreeVerdict, Tick};

#[derive(Parser)]
#[command(name = "rpower", version, about = "r-th power divisor detection")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum DetectAlgo {
    Lehman,
    Wheel,
    Ps,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Wheel,
    Ps,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Worstcase,
    Pstar,
}

#[derive(Subcommand)]
enum Cmd {
    /// Find a nontrivial factor of N or prove N is r-power free
    Detect {
        n: String,
        #[arg(long, default_value_t = 2)]
        r: u32,
        #[arg(long, value_enum, default_value = "lehman")]
        algo: DetectAlgo,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Decide whether N is squarefree
    Squarefree {
        n: String,
        #[arg(long, value_enum, default_value = "wheel")]
        algo: EngineArg,
    },
    /// Recover p, q from N = p^2 q with q < p < 8q
    Pstar {
        n: String,
        #[arg(long)]
        b_override: Option<String>,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Generate seeded p^2 q instances, one `N p q seed` line each
    GenPstar {
        #[arg(long)]
        digits: u32,
        #[arg(long, default_value_t = 1)]
        count: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time the algorithms and write CSV rows
    Bench {
        #[arg(long, value_enum, default_value = "worstcase")]
        suite: SuiteArg,
        #[arg(long, value_delimiter = ',', required = true)]
        digits: Vec<u32>,
        #[arg(long, default_value_t = 1)]
        trials: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[arg(long)]
        b_override: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Largest digit count accepted
        #[arg(long, env = MAX_DIGITS_ENV, default_value_t = bench::DEFAULT_MAX_DIGITS)]
        max_digits: u32,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn parse_n(s: &str) -> rpower::Result<Natural> {
    let n = parse_natural(s)?;
    if n <= Natural::from(1u32) {
        return Err(rpower::Error::InvalidInput(format!("N must be greater than 1, got {s}")));
    }
    Ok(n)
}

fn output(out: Option<PathBuf>) -> rpower::Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn run(cmd: Cmd) -> rpower::Result<()> {
    match cmd {
        Cmd::Detect { n, r, algo, threads } => {
            let n = parse_n(&n)?;
            let c = Counters::new();
            match algo {
                DetectAlgo::Lehman => {
                    match detect_with(&n, r, &DetectOptions { threads, filter_primes: None }, Some(&c))? {
                        DetectOutcome::Factor(f) => println!("factor {f}"),
                        DetectOutcome::RPowerFree => println!("r-power-free"),
                    }
                    println!(
                        "trial_divisions={} inner_iters={} filter_rejects={} poly_evals={}",
                        c.get(Tick::TrialDivision),
                        c.get(Tick::InnerIteration),
                        c.get(Tick::FilterReject),
                        c.get(Tick::PolyEval)
                    );
                }
                DetectAlgo::Wheel | DetectAlgo::Ps => {
                    if r != 2 {
                        return Err(rpower::Error::InvalidInput("trial-division engines decide squares only (r = 2)".into()));
                    }
                    let engine = if matches!(algo, DetectAlgo::Wheel) { Engine::Wheel } else { Engine::PollardStrassen };
                    print_squarefree(&n, engine, &c)?;
                }
            }
        }
        Cmd::Squarefree { n, algo } => {
            let n = parse_n(&n)?;
            let engine = match algo {
                EngineArg::Wheel => Engine::Wheel,
                EngineArg::Ps => Engine::PollardStrassen,
            };
            print_squarefree(&n, engine, &Counters::new())?;
        }
        Cmd::Pstar { n, b_override, threads } => {
            let n = parse_n(&n)?;
            let b_override = b_override.as_deref().map(parse_natural).transpose()?;
            let c = Counters::new();
            let opts = PStarOptions { b_override, threads, ..Default::default() };
            match pstar::pstar_solve_with(&n, &opts, Some(&c))? {
                Some((p, q)) => println!("p={p} q={q}"),
                None => println!("no p^2 q representation with q < p < 8q"),
            }
            println!("inner_iters={}", c.get(Tick::InnerIteration));
        }
        Cmd::GenPstar { digits, count, seed, out } => {
            let insts = (0..count as u64)
                .map(|i| pstar::gen_instance(digits, seed.wrapping_add(i)))
                .collect::<rpower::Result<Vec<_>>>()?;
            let mut w = output(out)?;
            pstar::write_instances(&mut w, &insts)?;
            w.flush()?;
        }
        Cmd::Bench { suite, digits, trials, seed, threads, b_override, out, max_digits } => {
            let suite = match suite {
                SuiteArg::Worstcase => Suite::Worstcase,
                SuiteArg::Pstar => Suite::PStar,
            };
            let cfg = BenchConfig {
                trials,
                seed,
                threads,
                b_override: b_override.as_deref().map(parse_natural).transpose()?,
                max_digits,
                ..BenchConfig::new(suite, digits)
            };
            let rows = bench::run(&cfg)?;
            let to_file = out.is_some();
            let mut w = output(out)?;
            bench::write_csv(&mut w, &rows)?;
            w.flush()?;
            if to_file {
                for s in bench::summarize(&rows) {
                    println!(
                        "{:>13} digits={:<3} runs={:<4} mean_ns={:.0} mean_iters={:.1}",
                        s.algo.name(),
                        s.digits,
                        s.runs,
                        s.mean_elapsed_ns,
                        s.mean_inner_iters
                    );
                }
            }
        }
    }
    Ok(())
}

fn print_squarefree(n: &Natural, engine: Engine, c: &Counters) -> rpower::Result<()> {
    match squarefree_decide(n, engine, Some(c))? {
        SquarefreeVerdict::Squarefree => println!("squarefree"),
        SquarefreeVerdict::Squarefull(d) => println!("squarefull {d}"),
    }
    Ok(())
}
