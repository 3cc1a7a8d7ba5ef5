//! Deterministic detection of `r`-th power divisors.
//!
//! [`detect`] returns a nontrivial factor of `N` or proves that no `d > 1`
//! has `d^r | N`, using trial division up to `N^(1/(r+2))` followed by a
//! Lehman-style search over fractions `a/b` and candidate sums `aq + rbp`.
//! For `r = 2` this runs in about `N^(1/4)` steps, against `N^(1/3)` for
//! plain trial division.
//!
//! ```
//! use rpower::{detect, DetectOutcome, Natural};
//!
//! let n = Natural::from(539u32); // 7^2 * 11
//! assert!(matches!(detect(&n, 2).unwrap(), DetectOutcome::Factor(_)));
//! assert_eq!(detect(&Natural::from(10403u32), 2).unwrap(), DetectOutcome::RPowerFree);
//! ```

pub mod arith;
pub mod baselines;
pub mod bench;
pub mod cubicfilter;
pub mod error;
pub mod instrument;
pub mod lehman;
pub mod pstar;
pub mod rootfind;

pub use arith::{iroot, isqrt, parse_natural, Natural};
pub use baselines::{squarefree_decide, Engine, SquarefreeVerdict};
pub use error::{Error, Result};
pub use instrument::{CounterSink, Counters, Tick};
pub use lehman::{decide_r_power_full, detect, detect_with, DetectOptions, DetectOutcome};
pub use pstar::{gen_instance, pstar_solve, PStarInstance};
