//! Residue filter for the `r = 2` candidate cubic `x^3 - u x^2 + 4 a b^2 N`.
//!
//! For each of the first `M` primes `s` a table records whether
//! `x^3 + c x^2 + d` has a root modulo `s`, for every `(c, d)`. An integer
//! root of the cubic is a root modulo every `s`, so a candidate failing any
//! table can be skipped without root isolation. Roughly a third of cubics
//! modulo a large prime have no root, so `M` tables reject all but about
//! `(2/3)^M` of the rootless candidates.

use crate::arith::{first_primes, lg_f64, rem_u64, Natural};

/// Largest bank size used.
pub const MAX_PRIMES: usize = 35;

/// Root-existence table for `x^3 + c x^2 + d` modulo a prime `s`,
/// stored as a flat bitset indexed `c * s + d`.
#[derive(Clone, Debug)]
pub struct RootTable {
    s: u32,
    bits: Vec<u64>,
}

impl RootTable {
    pub fn new(s: u32) -> Self {
        let s64 = s as u64;
        let len = (s64 * s64) as usize;
        let mut bits = vec![0u64; len.div_ceil(64)];
        for x in 0..s64 {
            let x2 = x * x % s64;
            let x3 = x2 * x % s64;
            for c in 0..s64 {
                // d = -(x^3 + c x^2) mod s
                let d = (2 * s64 - (x3 + c * x2 % s64)) % s64;
                let idx = (c * s64 + d) as usize;
                bits[idx / 64] |= 1 << (idx % 64);
            }
        }
        RootTable { s, bits }
    }

    pub fn prime(&self) -> u32 {
        self.s
    }

    /// Whether `x^3 + c x^2 + d` has a root mod `s`; `c, d < s`.
    #[inline]
    pub fn has_root(&self, c: u32, d: u32) -> bool {
        let idx = c as usize * self.s as usize + d as usize;
        self.bits[idx / 64] >> (idx % 64) & 1 == 1
    }

    pub fn size_bytes(&self) -> usize {
        self.bits.len() * 8
    }
}

/// Tables for the first `M` primes.
#[derive(Clone, Debug)]
pub struct FilterBank {
    tables: Vec<RootTable>,
}

/// `min(35, smallest M with (2/3)^M < 1 / lg N)`.
pub fn bank_size(n: &Natural) -> usize {
    let lg = lg_f64(n).max(1.0);
    (1..=MAX_PRIMES)
        .find(|&m| (2.0f64 / 3.0).powi(m as i32) < 1.0 / lg)
        .unwrap_or(MAX_PRIMES)
}

/// Builds the bank sized for `n` by [`bank_size`].
pub fn build_bank(n: &Natural) -> FilterBank {
    FilterBank::with_primes(bank_size(n))
}

impl FilterBank {
    pub fn with_primes(m: usize) -> Self {
        let tables = first_primes(m).into_iter().map(|s| RootTable::new(s as u32)).collect();
        FilterBank { tables }
    }

    pub fn len(&self) -> usize {
        self.tables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tables.is_empty()
    }

    pub fn tables(&self) -> &[RootTable] {
        &self.tables
    }

    pub fn size_bytes(&self) -> usize {
        self.tables.iter().map(RootTable::size_bytes).sum()
    }

    /// `n mod s` for every table prime.
    pub fn residues_of(&self, n: &Natural) -> Vec<u32> {
        self.tables.iter().map(|t| rem_u64(n, t.s as u64) as u32).collect()
    }

    /// Whether `x^3 - u x^2 + 4 a b^2 N` has a root modulo every table prime.
    pub fn passes(&self, u: &Natural, a: u64, b: u64, n: &Natural) -> bool {
        self.tables.iter().all(|t| {
            let s = t.s as u64;
            let c = (s - rem_u64(u, s)) % s;
            let d = mul_mod(&[4, a % s, (b % s) * (b % s) % s, rem_u64(n, s)], s);
            t.has_root(c as u32, d as u32)
        })
    }
}

fn mul_mod(xs: &[u64], s: u64) -> u64 {
    xs.iter().fold(1 % s, |acc, &x| acc * (x % s) % s)
}

/// Residues of one `(a, b)` pair, so that the candidates `u = g + k` can be
/// filtered with one small modular addition per table consulted.
#[derive(Clone, Debug)]
pub(crate) struct PairResidues {
    d: Vec<u32>,
    g: Vec<u32>,
}

impl PairResidues {
    pub fn new(bank: &FilterBank, n_res: &[u32], a: u64, b: u64, g: &Natural) -> Self {
        let mut d = Vec::with_capacity(bank.len());
        let mut gv = Vec::with_capacity(bank.len());
        for (t, &nr) in bank.tables.iter().zip(n_res) {
            let s = t.s as u64;
            d.push(mul_mod(&[4, a % s, (b % s) * (b % s) % s, nr as u64], s) as u32);
            gv.push(rem_u64(g, s) as u32);
        }
        PairResidues { d, g: gv }
    }

    /// Filter verdict for `u = g + k`.
    #[inline]
    pub fn passes_offset(&self, bank: &FilterBank, k: u64) -> bool {
        for (i, t) in bank.tables.iter().enumerate() {
            let s = t.s as u64;
            let u = (self.g[i] as u64 + k % s) % s;
            let c = (s - u) % s;
            if !t.has_root(c as u32, self.d[i]) {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_has_root(s: u64, c: u64, d: u64) -> bool {
        (0..s).any(|x| (x * x % s * x + c * x % s * x + d) % s == 0)
    }

    #[test]
    fn tables_match_brute_force() {
        for s in first_primes(MAX_PRIMES) {
            let t = RootTable::new(s as u32);
            for c in 0..s {
                for d in 0..s {
                    assert_eq!(t.has_root(c as u32, d as u32), brute_has_root(s, c, d), "s={s} c={c} d={d}");
                }
            }
        }
    }

    #[test]
    fn table_mod_two() {
        let t = RootTable::new(2);
        assert!(t.has_root(0, 0));
        assert!(t.has_root(1, 0));
        // x^3 + 1 has root x = 1 mod 2; x^3 + x^2 + 1 has none
        assert!(t.has_root(0, 1));
        assert!(!t.has_root(1, 1));
    }

    #[test]
    fn bank_size_rule() {
        // lg N = 100: (2/3)^11 ≈ 0.0116, (2/3)^12 ≈ 0.0077 < 0.01
        assert_eq!(bank_size(&(Natural::from(1u32) << 100u32)), 12);
        // lg N = 2^20 needs (2/3)^M < 2^-20, i.e. M = 35 (cap reached exactly)
        assert_eq!(bank_size(&(Natural::from(1u32) << 1_048_576u32)), 35);
        assert_eq!(bank_size(&(Natural::from(1u32) << 4_000_000u32)), 35);
        assert_eq!(bank_size(&Natural::from(2u32)), 1);
    }

    #[test]
    fn full_bank_is_small() {
        assert!(FilterBank::with_primes(MAX_PRIMES).size_bytes() < 100 * 1024);
    }

    #[test]
    fn rooted_candidate_passes() {
        let bank = FilterBank::with_primes(MAX_PRIMES);
        assert!(bank.passes(&Natural::from(64u32), 2, 3, &Natural::from(539u32)));
    }

    #[test]
    fn consistent_with_per_prime_search() {
        let bank = FilterBank::with_primes(MAX_PRIMES);
        let (u, a, b, n) = (5u64, 1u64, 1u64, 35u64);
        let expect = first_primes(MAX_PRIMES)
            .into_iter()
            .all(|s| brute_has_root(s, (s - u % s) % s, 4 * a * b * b * n % s));
        assert_eq!(bank.passes(&Natural::from(u), a, b, &Natural::from(n)), expect);
    }

    #[test]
    fn zero_constant_always_passes() {
        // d ≡ 0 mod every table prime when N is a multiple of their product
        let bank = FilterBank::with_primes(10);
        let primorial: u64 = first_primes(10).iter().product();
        for u in 0..50u64 {
            assert!(bank.passes(&Natural::from(u), 1, 1, &Natural::from(primorial)));
        }
    }

    #[test]
    fn pair_residues_agree_with_direct_check() {
        let bank = FilterBank::with_primes(MAX_PRIMES);
        let n = Natural::from(1_000_000_007u64 * 998_244_353);
        let res = bank.residues_of(&n);
        let g = Natural::from(123_456_789u64);
        for (a, b) in [(1u64, 1u64), (3, 7), (40, 9)] {
            let pr = PairResidues::new(&bank, &res, a, b, &g);
            for k in 0..300u64 {
                let u = &g + k;
                assert_eq!(pr.passes_offset(&bank, k), bank.passes(&u, a, b, &n));
            }
        }
    }
}
