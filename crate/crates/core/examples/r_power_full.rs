//! Decide `d^r | N` for several exponents and print the witness.
//!
//! ```bash
//! cargo run --release --example r_power_full
//! ```

use rpower::{decide_r_power_full, Natural};

fn main() -> rpower::Result<()> {
    let cases: [(u64, u32); 6] = [(539, 2), (30, 2), (16, 4), (2 * 3 * 3 * 3 * 5, 3), (7_u64.pow(5) * 11, 4), (999_983 * 999_979, 2)];
    for (n, r) in cases {
        match decide_r_power_full(&Natural::from(n), r)? {
            Some(d) => println!("{n}: {d}^{r} divides it"),
            None => println!("{n}: {r}-power free"),
        }
    }
    Ok(())
}
