//! Wheel trial division against Pollard–Strassen on one divisor range.
//!
//! ```bash
//! cargo run --release --example baselines_compare
//! ```

use std::time::Instant;

use rpower::arith::iroot;
use rpower::baselines::{squarefree_decide, DivisorSearchRange, Engine};
use rpower::pstar::next_prime;
use rpower::{Counters, Natural, Tick};

fn main() -> rpower::Result<()> {
    let n = next_prime(&Natural::from(10u32).pow(18));
    let hi = iroot(&n, 3)?;
    let range = DivisorSearchRange::new(Natural::from(2u32), hi.clone())?;
    println!("N = {n}, divisors searched in [2, {hi}]");
    for engine in [Engine::Wheel, Engine::PollardStrassen] {
        let c = Counters::new();
        let t = Instant::now();
        let d = engine.smallest_divisor(&n, &range, Some(&c));
        println!(
            "{engine:?}: {d:?} in {:?}, {} divisions, {} block values, peak {} bytes",
            t.elapsed(),
            c.get(Tick::TrialDivision),
            c.get(Tick::BlockEval),
            c.peak()
        );
    }
    // 105 has small divisors but no square one
    for n in [105u64, 539, 101 * 101 * 103] {
        println!("{n}: {:?}", squarefree_decide(&Natural::from(n), Engine::PollardStrassen, None)?);
    }
    Ok(())
}
