//! Write benchmark rows as CSV to stdout and averages to stderr.
//!
//! ```bash
//! cargo run --release --example benchmark_csv > rows.csv
//! ```

use rpower::bench::{run, summarize, write_csv, BenchConfig, Suite};

fn main() -> rpower::Result<()> {
    let mut rows = run(&BenchConfig::new(Suite::Worstcase, vec![8, 10, 12]))?;
    let cfg = BenchConfig { trials: 5, seed: 1, ..BenchConfig::new(Suite::PStar, vec![12, 15, 18]) };
    rows.extend(run(&cfg)?);
    write_csv(std::io::stdout().lock(), &rows)?;
    for s in summarize(&rows) {
        eprintln!("{:>13} {:>2} digits: {:>12.0} ns, {:>10.1} iterations", s.algo.name(), s.digits, s.mean_elapsed_ns, s.mean_inner_iters);
    }
    Ok(())
}
