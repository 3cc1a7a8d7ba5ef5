//! Comparison algorithms for square-divisor detection: 2-3-5 wheel trial
//! division and Pollard–Strassen blocked trial division. Both search a
//! configurable divisor interval.

mod pollard_strassen;
mod poly;
mod wheel;

use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::arith::{iroot, is_r_power, Natural};
use crate::error::{Error, Result};
use crate::instrument::CounterSink;

pub use pollard_strassen::{block_length, ps_smallest_divisor, ps_smallest_divisor_counted};
pub use poly::{multipoint_eval, product_tree_mod, ModPoly, ProductTree};
pub use wheel::{wheel_smallest_divisor, wheel_smallest_divisor_counted, WHEEL_RESIDUES};

pub(crate) use wheel::wheel_scan;

/// Inclusive divisor interval `[lo, hi]` with `2 <= lo <= hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorSearchRange {
    lo: Natural,
    hi: Natural,
}

impl DivisorSearchRange {
    pub fn new(lo: Natural, hi: Natural) -> Result<Self> {
        if lo < Natural::from(2u32) || lo > hi {
            return Err(Error::InvalidInput(format!("divisor range [{lo}, {hi}] needs 2 <= lo <= hi")));
        }
        if hi.to_u64().is_none() {
            return Err(Error::Infeasible(format!("divisor bound {hi} exceeds 64 bits")));
        }
        Ok(DivisorSearchRange { lo, hi })
    }

    pub fn lo(&self) -> &Natural {
        &self.lo
    }

    pub fn hi(&self) -> &Natural {
        &self.hi
    }

    pub(crate) fn as_u64(&self) -> (u64, u64) {
        (self.lo.to_u64().expect("checked"), self.hi.to_u64().expect("checked"))
    }
}

/// Which divisor search drives [`squarefree_decide`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Engine {
    Wheel,
    PollardStrassen,
}

impl Engine {
    pub fn smallest_divisor(
        self,
        n: &Natural,
        range: &DivisorSearchRange,
        sink: Option<&dyn CounterSink>,
    ) -> Option<Natural> {
        match self {
            Engine::Wheel => wheel_smallest_divisor_counted(n, range, sink),
            Engine::PollardStrassen => ps_smallest_divisor_counted(n, range, sink),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SquarefreeVerdict {
    Squarefree,
    /// `witness^2` divides `N`.
    Squarefull(Natural),
}

impl SquarefreeVerdict {
    pub fn is_squarefree(&self) -> bool {
        matches!(self, SquarefreeVerdict::Squarefree)
    }
}

/// Decides whether `n > 1` is squarefree.
///
/// Prime divisors up to the cube root of the running cofactor `M` are
/// stripped one at a time, checking `p^2 | M` for each. Once no divisor is
/// left below `M^(1/3)`, every prime factor of `M` exceeds `M^(1/3)`, so `M`
/// has at most two prime factors and is squarefull exactly when it is a
/// perfect square greater than 1. A bare "no divisor up to `N^(1/3)`" test
/// is not enough: `105 = 3·5·7` has small divisors yet is squarefree.
pub fn squarefree_decide(n: &Natural, engine: Engine, sink: Option<&dyn CounterSink>) -> Result<SquarefreeVerdict> {
    if *n <= Natural::one() {
        return Err(Error::InvalidInput("squarefree decision needs N > 1".into()));
    }
    let mut m = n.clone();
    let mut lo = Natural::from(2u32);
    loop {
        let hi = iroot(&m, 3)?;
        if lo > hi {
            break;
        }
        let range = DivisorSearchRange::new(lo.clone(), hi)?;
        let Some(p) = engine.smallest_divisor(&m, &range, sink) else {
            break;
        };
        m /= &p;
        if m.is_multiple_of(&p) {
            return Ok(SquarefreeVerdict::Squarefull(p));
        }
        lo = p + 1u32;
    }
    if m > Natural::one() {
        if let Some(s) = is_r_power(&m, 2) {
            return Ok(SquarefreeVerdict::Squarefull(s));
        }
    }
    Ok(SquarefreeVerdict::Squarefree)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat(v: u64) -> Natural {
        Natural::from(v)
    }

    #[test]
    fn range_validation() {
        assert!(DivisorSearchRange::new(nat(1), nat(5)).is_err());
        assert!(DivisorSearchRange::new(nat(6), nat(5)).is_err());
        assert!(DivisorSearchRange::new(nat(2), nat(2)).is_ok());
    }

    #[test]
    fn squarefree_examples() {
        for engine in [Engine::Wheel, Engine::PollardStrassen] {
            assert_eq!(squarefree_decide(&nat(539), engine, None).unwrap(), SquarefreeVerdict::Squarefull(nat(7)));
            assert_eq!(squarefree_decide(&nat(105), engine, None).unwrap(), SquarefreeVerdict::Squarefree);
            assert_eq!(
                squarefree_decide(&nat(101 * 101 * 103), engine, None).unwrap(),
                SquarefreeVerdict::Squarefull(nat(101))
            );
            assert_eq!(squarefree_decide(&nat(4), engine, None).unwrap(), SquarefreeVerdict::Squarefull(nat(2)));
            assert_eq!(squarefree_decide(&nat(2), engine, None).unwrap(), SquarefreeVerdict::Squarefree);
        }
    }

    #[test]
    fn large_prime_square_cofactor() {
        // 1_000_003^2 * 7: the square sits above the cube root
        let n = nat(1_000_003u64 * 1_000_003 * 7);
        assert_eq!(squarefree_decide(&n, Engine::Wheel, None).unwrap(), SquarefreeVerdict::Squarefull(nat(1_000_003)));
    }
}
