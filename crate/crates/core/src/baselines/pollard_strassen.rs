//! Pollard–Strassen blocked trial division.
//!
//! With block length `b = ⌈√len⌉`, the polynomial `f(x) = ∏_{i=1..b} (x + i)`
//! evaluated at `lo - 1 + k b` is the product of the `k`-th block of
//! consecutive candidates, modulo `N`. A block holding a divisor of `N`
//! yields `gcd(f(.), N) > 1`; such blocks are then scanned directly, in
//! increasing order, so the first divisor found is the smallest.

use num_traits::{One, ToPrimitive};

use crate::arith::{gcd, gcd_u64, rem_u64, Natural};
use crate::instrument::{CounterSink, Tick};

use super::poly::{multipoint, product_tree, BigRing, Ring, SmallRing};
use super::DivisorSearchRange;

/// Smallest `d` in `range` with `d | n`, by blocked multipoint evaluation.
pub fn ps_smallest_divisor(n: &Natural, range: &DivisorSearchRange) -> Option<Natural> {
    ps_smallest_divisor_counted(n, range, None)
}

pub fn ps_smallest_divisor_counted(
    n: &Natural,
    range: &DivisorSearchRange,
    sink: Option<&dyn CounterSink>,
) -> Option<Natural> {
    let (lo, hi) = range.as_u64();
    if n < &Natural::from(2u32) {
        return None;
    }
    let found = match n.to_u64().filter(|&v| v < 1 << 63) {
        Some(small) => ps_scan(&SmallRing::new(small), n, lo, hi, sink, |v| gcd_u64(*v, small) != 1),
        None => {
            let ring = BigRing::new(n.clone());
            ps_scan(&ring, n, lo, hi, sink, |v| !gcd(&ring.to_natural(v), n).is_one())
        }
    };
    found.map(Natural::from)
}

/// Block length `⌈√len⌉`.
pub fn block_length(len: u64) -> u64 {
    let mut b = (len as f64).sqrt() as u64;
    while b * b < len {
        b += 1;
    }
    while b > 1 && (b - 1) * (b - 1) >= len {
        b -= 1;
    }
    b.max(1)
}

fn ps_scan<R: Ring>(
    ring: &R,
    n: &Natural,
    lo: u64,
    hi: u64,
    sink: Option<&dyn CounterSink>,
    shares_factor: impl Fn(&R::E) -> bool,
) -> Option<u64> {
    if lo > hi {
        return None;
    }
    let len = hi - lo + 1;
    let b = block_length(len);
    let blocks = len.div_ceil(b);

    // f(x) = ∏ (x + i) is the root of the product tree over the points -i.
    let neg_i: Vec<R::E> = (1..=b).map(|i| ring.neg(&ring.from_natural(&Natural::from(i)))).collect();
    let levels = product_tree(ring, &neg_i);
    let f_tree_elems = super::poly::tree_elems(&levels);
    let f = levels.into_iter().last().unwrap().pop().unwrap();

    let points: Vec<R::E> = (0..blocks)
        .map(|k| ring.from_natural(&Natural::from(lo - 1 + k * b)))
        .collect();
    let (values, eval_peak) = multipoint(ring, &f, &points);
    if let Some(s) = sink {
        s.add(Tick::BlockEval, blocks);
        let elems = f_tree_elems.max(eval_peak + points.len());
        s.peak_bytes((elems * ring.elem_bytes()) as u64);
    }

    let mut scanned = 0;
    let mut result = None;
    for (k, v) in values.iter().enumerate() {
        if !shares_factor(v) {
            continue;
        }
        let start = lo + k as u64 * b;
        let end = (start + b - 1).min(hi);
        if let Some(d) = (start..=end).find(|&d| {
            scanned += 1;
            rem_u64(n, d) == 0
        }) {
            result = Some(d);
            break;
        }
    }
    if let Some(s) = sink {
        s.add(Tick::TrialDivision, scanned);
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    fn range(lo: u64, hi: u64) -> DivisorSearchRange {
        DivisorSearchRange::new(Natural::from(lo), Natural::from(hi)).unwrap()
    }

    #[test]
    fn ps_examples() {
        assert_eq!(ps_smallest_divisor(&Natural::from(539u32), &range(2, 9)), Some(Natural::from(7u32)));
        assert_eq!(ps_smallest_divisor(&Natural::from(10403u32), &range(2, 102)), Some(Natural::from(101u32)));
        assert_eq!(ps_smallest_divisor(&Natural::from(1_000_000_007u64), &range(2, 1_000_000)), None);
    }

    #[test]
    fn block_lengths() {
        assert_eq!(block_length(1), 1);
        assert_eq!(block_length(4), 2);
        assert_eq!(block_length(5), 3);
        assert_eq!(block_length(101), 11);
        assert_eq!(block_length(1_000_000), 1000);
    }

    #[test]
    fn big_modulus_path() {
        // (2^61 - 1) * (2^89 - 1) * 1009 exceeds 2^63
        let p61 = (Natural::from(1u32) << 61u32) - 1u32;
        let p89 = (Natural::from(1u32) << 89u32) - 1u32;
        let n = &p61 * &p89 * 1009u32;
        assert_eq!(ps_smallest_divisor(&n, &range(2, 5000)), Some(Natural::from(1009u32)));
        assert_eq!(ps_smallest_divisor(&(&p61 * &p89), &range(2, 5000)), None);
    }
}
