//! How often the residue filter lets a candidate through.
//!
//! ```bash
//! cargo run --release --example cubic_filter
//! ```

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rpower::cubicfilter::{bank_size, FilterBank};
use rpower::Natural;

fn main() {
    for bits in [40u32, 100, 1000] {
        let n = Natural::from(1u32) << bits;
        println!("lg N = {bits}: {} tables", bank_size(&n));
    }
    let bank = FilterBank::with_primes(35);
    println!("35-prime bank: {} bytes", bank.size_bytes());

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let trials = 200_000;
    let mut passed = 0;
    for _ in 0..trials {
        let u: u64 = rng.gen_range(1..1 << 40);
        let (a, b): (u64, u64) = (rng.gen_range(1..1000), rng.gen_range(1..1000));
        let n: u64 = rng.gen_range(2..1 << 50);
        passed += bank.passes(&Natural::from(u), a, b, &Natural::from(n)) as u32;
    }
    println!("{passed} of {trials} random candidates passed");

    // x = 42 is a root of x^3 - 64 x^2 + 4*2*9*539
    println!("rooted candidate passes: {}", bank.passes(&Natural::from(64u32), 2, 3, &Natural::from(539u32)));
}
