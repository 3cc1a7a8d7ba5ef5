//! Generate seeded `p^2 q` instances with `q < p < 8q` and solve them.
//!
//! ```bash
//! cargo run --release --example pstar_solve -- 21 5
//! ```

use rpower::pstar::{gen_instance, pstar_solve_with, PStarOptions};
use rpower::{Counters, Tick};

fn main() -> rpower::Result<()> {
    let mut args = std::env::args().skip(1);
    let digits: u32 = args.next().and_then(|s| s.parse().ok()).unwrap_or(18);
    let count: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(5);
    for seed in 0..count {
        let inst = gen_instance(digits, seed)?;
        let c = Counters::new();
        let got = pstar_solve_with(&inst.n, &PStarOptions::default(), Some(&c))?;
        let (p, q) = got.expect("generated instances always solve");
        assert_eq!((&p, &q), (&inst.p, &inst.q));
        println!("N={} p={p} q={q} candidates={}", inst.n, c.get(Tick::InnerIteration));
    }
    Ok(())
}
