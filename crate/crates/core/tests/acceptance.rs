//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails. Every expected value comes from an oracle defined
//! in this file, not from library code.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::{BigUint, RandBigInt};
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rpower::arith::{iroot, isqrt};
use rpower::baselines::{ps_smallest_divisor, squarefree_decide, wheel_smallest_divisor, DivisorSearchRange, Engine, SquarefreeVerdict};
use rpower::cubicfilter::FilterBank;
use rpower::pstar::{gen_instance, pstar_solve_with, PStarOptions};
use rpower::{decide_r_power_full, detect, detect_with, Counters, DetectOptions, DetectOutcome, Natural, Tick};

type Outcome = Result<String, String>;

fn nat(v: u64) -> Natural {
    Natural::from(v)
}

// ---- oracles -------------------------------------------------------------

/// Some `d >= 2` with `d^r | n`, by direct search.
fn oracle_r_power_full(n: u64, r: u32) -> bool {
    let mut d: u64 = 2;
    while let Some(p) = d.checked_pow(r) {
        if p > n {
            break;
        }
        if n % p == 0 {
            return true;
        }
        d += 1;
    }
    false
}

fn oracle_smallest_divisor(n: u64, lo: u64, hi: u64) -> Option<u64> {
    (lo..=hi).find(|&d| n % d == 0)
}

fn oracle_icbrt(n: u64) -> u64 {
    let mut x = (n as f64).cbrt() as u64;
    while x > 0 && (x as u128).pow(3) > n as u128 {
        x -= 1;
    }
    while ((x + 1) as u128).pow(3) <= n as u128 {
        x += 1;
    }
    x
}

fn sieve(limit: usize) -> Vec<u64> {
    let mut is = vec![true; limit + 1];
    is[0] = false;
    is[1] = false;
    let mut i = 2;
    while i * i <= limit {
        if is[i] {
            for k in (i * i..=limit).step_by(i) {
                is[k] = false;
            }
        }
        i += 1;
    }
    (0..=limit).filter(|&i| is[i]).map(|i| i as u64).collect()
}

/// `x^3 - u x^2 + c` has an integer root. The cubic is monotone on
/// `(-inf, 0]`, `[0, 2u/3]` and `[2u/3, inf)`, so each piece is bisected.
fn oracle_cubic_has_integer_root(u: i128, c: i128) -> bool {
    let f = |x: i128| x * x * (x - u) + c;
    let bisect = |mut lo: i128, mut hi: i128, increasing: bool| -> bool {
        let s = |x: i128| if increasing { f(x) } else { -f(x) };
        if s(lo) > 0 || s(hi) < 0 {
            return false;
        }
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if s(mid) < 0 {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        f(lo) == 0
    };
    let (rho_lo, rho_hi) = (2 * u / 3, (2 * u + 2) / 3);
    // |x| <= 2 + u + c^(1/2) bounds every real root
    let bound = 2 + u + (c as f64).sqrt() as i128;
    bisect(-bound, 0, true) || bisect(0, rho_lo, false) || bisect(rho_hi, bound, true)
}

// ---- criteria ------------------------------------------------------------

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut mismatches = Vec::new();
    for r in 2..=4u32 {
        for n in 2..=20_000u64 {
            let got = decide_r_power_full(&nat(n), r).map_err(|e| e.to_string())?;
            if let Some(d) = &got {
                let d = d.to_u64().unwrap();
                if d < 2 || n % d.pow(r) != 0 {
                    mismatches.push((n, r));
                    continue;
                }
            }
            if got.is_some() != oracle_r_power_full(n, r) {
                mismatches.push((n, r));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if !mismatches.is_empty() {
        return Err(format!("{} mismatches, first {:?}", mismatches.len(), &mismatches[..mismatches.len().min(5)]));
    }
    if secs >= 300.0 {
        return Err(format!("took {secs:.1}s, limit 300s"));
    }
    Ok(format!("60000 (N, r) cases, 0 mismatches, {secs:.1}s"))
}

fn constructed_completeness() -> Outcome {
    let primes: Vec<u64> = sieve(100_000).into_iter().filter(|&p| p >= 1000).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut done = 0;
    let mut per_r = [0u32; 2];
    while done < 200 {
        let r = rng.gen_range(2..=3u32);
        let p = primes[rng.gen_range(0..primes.len())];
        let q = primes[rng.gen_range(0..primes.len())];
        let n = BigUint::from(p).pow(r) * q;
        // p, q > N^(1/(r+2))  <=>  p^(r+2) > N and q^(r+2) > N
        if BigUint::from(p).pow(r + 2) <= n || BigUint::from(q).pow(r + 2) <= n {
            continue;
        }
        match detect(&n, r).map_err(|e| e.to_string())? {
            DetectOutcome::Factor(f) => {
                if f <= nat(1) || f >= n || &n % &f != nat(0) {
                    return Err(format!("N = {p}^{r} * {q}: bad factor {f}"));
                }
            }
            DetectOutcome::RPowerFree => return Err(format!("N = {p}^{r} * {q}: reported r-power free")),
        }
        per_r[(r - 2) as usize] += 1;
        done += 1;
    }
    Ok(format!("200/200 factored ({} with r=2, {} with r=3)", per_r[0], per_r[1]))
}

fn next_prime_oracle(n: u64) -> u64 {
    let is_prime = |m: u64| m >= 2 && (2..).take_while(|d| d * d <= m).all(|d| m % d != 0);
    (n..).find(|&m| is_prime(m)).unwrap()
}

fn iteration_bound() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for e in [8u32, 10, 12] {
        let n = next_prime_oracle(10u64.pow(e));
        let c = Counters::new();
        let out = detect_with(&nat(n), 2, &DetectOptions::default(), Some(&c)).map_err(|e| e.to_string())?;
        if out != DetectOutcome::RPowerFree {
            return Err(format!("{n} is prime but got {out:?}"));
        }
        let iters = c.get(Tick::InnerIteration);
        // iters <= 660 N^(1/4)  <=>  iters^4 <= 660^4 N
        let lhs = BigUint::from(iters).pow(4);
        let rhs = BigUint::from(660u32).pow(4) * n;
        let pass = lhs <= rhs;
        ok &= pass;
        let ratio = iters as f64 / (n as f64).powf(0.25);
        lines.push(format!("N={n}: {iters} iters = {ratio:.1} N^(1/4)"));
    }
    if ok {
        Ok(lines.join("; "))
    } else {
        Err(lines.join("; "))
    }
}

fn pstar_round_trip() -> Outcome {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for digits in [12u32, 15, 18, 21] {
        for t in 0..20u64 {
            let seed = 1000 * digits as u64 + t;
            let inst = gen_instance(digits, seed).map_err(|e| e.to_string())?;
            let c = Counters::new();
            let got = pstar_solve_with(&inst.n, &PStarOptions::default(), Some(&c)).map_err(|e| e.to_string())?;
            if got != Some((inst.p.clone(), inst.q.clone())) {
                return Err(format!("{digits} digits, seed {seed}: N={} expected ({}, {}), got {got:?}", inst.n, inst.p, inst.q));
            }
            xs.push(inst.n.to_f64().unwrap().log2());
            ys.push((c.get(Tick::InnerIteration) as f64).log2());
        }
    }
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    let msg = format!("80/80 solved, slope {slope:.4} (target 0.2222 +- 0.05)");
    if (slope - 2.0 / 9.0).abs() <= 0.05 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn filter_soundness() -> Outcome {
    let bank = FilterBank::with_primes(35);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    // rooted: u = aq + 2bp makes 2bp a root of x^3 - u x^2 + 4ab^2 p^2 q
    for _ in 0..10_000 {
        let p: u64 = rng.gen_range(2..1 << 30);
        let q: u64 = rng.gen_range(2..1 << 30);
        let a: u64 = rng.gen_range(1..1 << 12);
        let b: u64 = rng.gen_range(1..1 << 12);
        let n = nat(p) * nat(p) * nat(q);
        let u = nat(a) * nat(q) + nat(2 * b) * nat(p);
        if !bank.passes(&u, a, b, &n) {
            return Err(format!("false rejection at p={p} q={q} a={a} b={b}"));
        }
    }
    let mut tested = 0u64;
    let mut passed = 0u64;
    while tested < 1_000_000 {
        let u: u64 = rng.gen_range(1..1 << 30);
        let a: u64 = rng.gen_range(1..1 << 10);
        let b: u64 = rng.gen_range(1..1 << 10);
        let n: u64 = rng.gen_range(2..1 << 40);
        let c = 4 * a as i128 * (b as i128).pow(2) * n as i128;
        if oracle_cubic_has_integer_root(u as i128, c) {
            continue;
        }
        tested += 1;
        if bank.passes(&nat(u), a, b, &nat(n)) {
            passed += 1;
        }
    }
    let rate = passed as f64 / tested as f64;
    let msg = format!("0 false rejections in 10^4; {passed} of 10^6 rootless passed (rate {rate:.1e})");
    if rate < 1e-4 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn baseline_equivalence() -> Outcome {
    let check = |n: u64, lo: u64, hi: u64| -> Result<(), String> {
        let want = oracle_smallest_divisor(n, lo, hi);
        let range = DivisorSearchRange::new(nat(lo), nat(hi)).map_err(|e| e.to_string())?;
        let w = wheel_smallest_divisor(&nat(n), &range).map(|d| d.to_u64().unwrap());
        let p = ps_smallest_divisor(&nat(n), &range).map(|d| d.to_u64().unwrap());
        if w != want || p != want {
            return Err(format!("N={n} [{lo},{hi}]: naive {want:?} wheel {w:?} ps {p:?}"));
        }
        Ok(())
    };
    for n in 8..=100_000u64 {
        check(n, 2, oracle_icbrt(n))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..1000 {
        let n: u64 = rng.gen_range(1 << 59..1 << 60);
        check(n, 2, oracle_icbrt(n))?;
    }
    for n in 2..=100_000u64 {
        let want = oracle_r_power_full(n, 2);
        for engine in [Engine::Wheel, Engine::PollardStrassen] {
            let got = squarefree_decide(&nat(n), engine, None).map_err(|e| e.to_string())?;
            let ok = match &got {
                SquarefreeVerdict::Squarefree => !want,
                SquarefreeVerdict::Squarefull(d) => {
                    let d = d.to_u64().unwrap();
                    want && d >= 2 && n % (d * d) == 0
                }
            };
            if !ok {
                return Err(format!("squarefree N={n} {engine:?}: got {got:?}, oracle squarefull={want}"));
            }
        }
    }
    if squarefree_decide(&nat(105), Engine::Wheel, None).map_err(|e| e.to_string())? != SquarefreeVerdict::Squarefree {
        return Err("105 not reported squarefree".into());
    }
    Ok("smallest divisors agree on N <= 10^5 and 1000 random 60-bit N; squarefree agrees on N <= 10^5".into())
}

/// `x = ⌊n^(1/k)⌋` iff `x^k <= n < (x+1)^k`.
fn floor_root_holds(n: &BigUint, k: u32, x: &BigUint) -> bool {
    x.pow(k) <= *n && (x + 1u32).pow(k) > *n
}

fn exact_arithmetic() -> Outcome {
    for n in 0..1_000_000u64 {
        let big = nat(n);
        let s = isqrt(&big);
        if !floor_root_holds(&big, 2, &s) {
            return Err(format!("isqrt({n}) = {s}"));
        }
        for k in 1..=6u32 {
            let x = iroot(&big, k).map_err(|e| e.to_string())?;
            if !floor_root_holds(&big, k, &x) {
                return Err(format!("iroot({n}, {k}) = {x}"));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10_000 {
        let n = rng.gen_biguint(512);
        let s = isqrt(&n);
        if !floor_root_holds(&n, 2, &s) {
            return Err(format!("isqrt({n}) = {s}"));
        }
        let k = rng.gen_range(2..=40u32);
        let x = iroot(&n, k).map_err(|e| e.to_string())?;
        if !floor_root_holds(&n, k, &x) {
            return Err(format!("iroot({n}, {k}) = {x}"));
        }
    }
    Ok("floor contracts hold for n < 10^6 (k = 1..6) and 10^4 random 512-bit values".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("1 oracle equivalence", oracle_equivalence),
        ("2 constructed completeness", constructed_completeness),
        ("3 iteration bound", iteration_bound),
        ("4 pstar round trip and scaling", pstar_round_trip),
        ("5 residue filter", filter_soundness),
        ("6 baseline equivalence", baseline_equivalence),
        ("7 exact arithmetic", exact_arithmetic),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let start = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match res {
            Ok(msg) => println!("PASS criterion {name}: {msg} [{secs:.1}s]"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name}: {msg} [{secs:.1}s]");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
