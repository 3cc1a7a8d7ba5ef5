//! Find a square divisor, or prove there is none.
//!
//! ```bash
//! cargo run --release --example detect_square_divisor -- 1000036000099
//! ```

use rpower::{detect_with, parse_natural, Counters, DetectOptions, DetectOutcome, Natural, Tick};

fn main() -> rpower::Result<()> {
    let inputs: Vec<Natural> = match std::env::args().nth(1) {
        Some(s) => vec![parse_natural(&s)?],
        // 1000003^2 * 999983, a prime, and a product of two close primes
        None => vec![
            Natural::from(1_000_003u64).pow(2) * 999_983u32,
            Natural::from(1_000_000_007u64),
            Natural::from(1_000_003u64) * 1_000_033u32,
        ],
    };
    for n in inputs {
        let c = Counters::new();
        let out = detect_with(&n, 2, &DetectOptions::default(), Some(&c))?;
        let verdict = match out {
            DetectOutcome::Factor(f) => format!("factor {f}"),
            DetectOutcome::RPowerFree => "squarefree".to_string(),
        };
        println!(
            "{n}: {verdict} (trial divisions {}, candidates {}, filtered {})",
            c.get(Tick::TrialDivision),
            c.get(Tick::InnerIteration),
            c.get(Tick::FilterReject)
        );
    }
    Ok(())
}
