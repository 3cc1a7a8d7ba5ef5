//! Trial division on the 2-3-5 wheel: after 2, 3 and 5 only the eight
//! residues coprime to 30 are tried, 8 of every 30 integers.

use crate::arith::{gcd_u64, rem_u64, Natural};
use crate::instrument::{CounterSink, Tick};

use super::DivisorSearchRange;

/// Offsets within each block of 30 that are coprime to 30.
pub const WHEEL_RESIDUES: [u64; 8] = [1, 7, 11, 13, 17, 19, 23, 29];

/// Smallest `d` in `range` with `d | n`.
pub fn wheel_smallest_divisor(n: &Natural, range: &DivisorSearchRange) -> Option<Natural> {
    wheel_smallest_divisor_counted(n, range, None)
}

pub fn wheel_smallest_divisor_counted(
    n: &Natural,
    range: &DivisorSearchRange,
    sink: Option<&dyn CounterSink>,
) -> Option<Natural> {
    let (lo, hi) = range.as_u64();
    let mut steps = 0;
    let d = wheel_scan(n, lo, hi, &mut steps);
    if let Some(s) = sink {
        s.add(Tick::TrialDivision, steps);
    }
    d.map(Natural::from)
}

/// Core scan on machine words. Exact for any `lo`: when `n` shares a factor
/// with 30 and `lo > 5`, composite divisors such as 6 could sit off the
/// wheel, so every integer in the range is tried instead.
pub(crate) fn wheel_scan(n: &Natural, lo: u64, hi: u64, steps: &mut u64) -> Option<u64> {
    if lo > hi {
        return None;
    }
    if lo > 5 && gcd_u64(rem_u64(n, 30), 30) != 1 {
        for d in lo..=hi {
            *steps += 1;
            if rem_u64(n, d) == 0 {
                return Some(d);
            }
        }
        return None;
    }
    for p in [2u64, 3, 5] {
        if p >= lo && p <= hi {
            *steps += 1;
            if rem_u64(n, p) == 0 {
                return Some(p);
            }
        }
    }
    let start = lo.max(7);
    let mut base = start / 30 * 30;
    loop {
        for off in WHEEL_RESIDUES {
            let d = base.checked_add(off)?;
            if d < start {
                continue;
            }
            if d > hi {
                return None;
            }
            *steps += 1;
            if rem_u64(n, d) == 0 {
                return Some(d);
            }
        }
        base = base.checked_add(30)?;
    }
}
