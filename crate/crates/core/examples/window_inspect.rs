//! Print the search bounds of every window for one N and r.
//!
//! ```bash
//! cargo run --release --example window_inspect -- 1000000000039 2
//! ```

use rpower::lehman::{max_window_index, window_params};
use rpower::rootfind::root_interval_bound;
use rpower::{parse_natural, Natural};

fn main() -> rpower::Result<()> {
    let mut args = std::env::args().skip(1);
    let n = match args.next() {
        Some(s) => parse_natural(&s)?,
        None => Natural::from(1_000_000_000_039u64),
    };
    let r: u32 = args.next().and_then(|s| s.parse().ok()).unwrap_or(2);
    println!("N = {n}, r = {r}");
    println!("{:>3} {:>10} {:>8} {:>10} {:>8}", "j", "b_max", "a_max", "gap(1,1)", "root L");
    for j in 0..=max_window_index(&n, r) {
        let w = window_params(&n, r, j)?;
        println!(
            "{:>3} {:>10} {:>8} {:>10} {:>8}",
            j,
            w.b_max,
            w.a_max,
            w.gap_bound(1, 1),
            root_interval_bound(&n, r, j)
        );
    }
    Ok(())
}
