//! Dense polynomials over `Z/NZ` for composite `N`.
//!
//! Only monic divisors are ever needed (product-tree nodes), so no inverse
//! modulo `N` is required. Multiplication is schoolbook below
//! [`KARATSUBA_MIN`] coefficients and Karatsuba above. Division by a monic
//! polynomial uses long division for small divisors and a Newton power
//! series inverse of the reversed divisor otherwise.

use num_traits::{ToPrimitive, Zero};

use crate::arith::Natural;

pub(crate) const KARATSUBA_MIN: usize = 32;
const FAST_DIV_MIN: usize = 64;

/// Arithmetic in `Z/NZ`.
pub(crate) trait Ring: Sync {
    type E: Clone + PartialEq + std::fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn from_natural(&self, n: &Natural) -> Self::E;
    fn to_natural(&self, e: &Self::E) -> Natural;
    /// Storage footprint of one element.
    fn elem_bytes(&self) -> usize;

    fn neg(&self, a: &Self::E) -> Self::E {
        self.sub(&self.zero(), a)
    }

    fn mul_schoolbook(&self, a: &[Self::E], b: &[Self::E]) -> Vec<Self::E> {
        let mut out = vec![self.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = self.add(&out[i + j], &self.mul(x, y));
            }
        }
        out
    }
}

/// Modulus below 2^63, elements as `u64`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct SmallRing {
    n: u64,
}

impl SmallRing {
    pub fn new(n: u64) -> Self {
        assert!((2..1 << 63).contains(&n));
        SmallRing { n }
    }
}

impl Ring for SmallRing {
    type E = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.n {
            s - self.n
        } else {
            s
        }
    }
    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.n - b
        }
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (*a as u128 * *b as u128 % self.n as u128) as u64
    }
    fn from_natural(&self, n: &Natural) -> u64 {
        crate::arith::rem_u64(n, self.n)
    }
    fn to_natural(&self, e: &u64) -> Natural {
        Natural::from(*e)
    }
    fn elem_bytes(&self) -> usize {
        8
    }

    fn mul_schoolbook(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        // Accumulate in u128 and reduce when the next product could overflow.
        let n = self.n as u128;
        let mut acc = vec![0u128; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                let slot = &mut acc[i + j];
                *slot += x as u128 * y as u128;
                if *slot >= 1 << 127 {
                    *slot %= n;
                }
            }
        }
        acc.into_iter().map(|v| (v % n) as u64).collect()
    }
}

/// Arbitrary modulus.
#[derive(Clone, Debug)]
pub(crate) struct BigRing {
    n: Natural,
}

impl BigRing {
    pub fn new(n: Natural) -> Self {
        BigRing { n }
    }
}

impl Ring for BigRing {
    type E = Natural;

    fn zero(&self) -> Natural {
        Natural::zero()
    }
    fn one(&self) -> Natural {
        Natural::from(1u32) % &self.n
    }
    fn add(&self, a: &Natural, b: &Natural) -> Natural {
        let s = a + b;
        if s >= self.n {
            s - &self.n
        } else {
            s
        }
    }
    fn sub(&self, a: &Natural, b: &Natural) -> Natural {
        if a >= b {
            a - b
        } else {
            a + &self.n - b
        }
    }
    fn mul(&self, a: &Natural, b: &Natural) -> Natural {
        a * b % &self.n
    }
    fn from_natural(&self, n: &Natural) -> Natural {
        n % &self.n
    }
    fn to_natural(&self, e: &Natural) -> Natural {
        e.clone()
    }
    fn elem_bytes(&self) -> usize {
        (self.n.bits() as usize).div_ceil(64) * 8
    }

    fn mul_schoolbook(&self, a: &[Natural], b: &[Natural]) -> Vec<Natural> {
        // One reduction per output coefficient.
        let mut acc = vec![Natural::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                acc[i + j] += x * y;
            }
        }
        acc.into_iter().map(|v| v % &self.n).collect()
    }
}

pub(crate) fn poly_add<R: Ring>(ring: &R, a: &[R::E], b: &[R::E]) -> Vec<R::E> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    for (o, s) in out.iter_mut().zip(short) {
        *o = ring.add(o, s);
    }
    out
}

fn sub_in_place<R: Ring>(ring: &R, acc: &mut [R::E], x: &[R::E]) {
    for (o, s) in acc.iter_mut().zip(x) {
        *o = ring.sub(o, s);
    }
}

fn add_at<R: Ring>(ring: &R, acc: &mut [R::E], x: &[R::E], offset: usize) {
    for (i, s) in x.iter().enumerate() {
        acc[offset + i] = ring.add(&acc[offset + i], s);
    }
}

pub(crate) fn poly_mul<R: Ring>(ring: &R, a: &[R::E], b: &[R::E]) -> Vec<R::E> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    if a.len().min(b.len()) < KARATSUBA_MIN {
        return ring.mul_schoolbook(a, b);
    }
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let half = long.len().div_ceil(2);
    if short.len() <= half {
        // Unbalanced: cut the long operand into pieces the size of the short one.
        let mut out = vec![ring.zero(); a.len() + b.len() - 1];
        for (k, chunk) in long.chunks(short.len()).enumerate() {
            let part = poly_mul(ring, chunk, short);
            add_at(ring, &mut out, &part, k * short.len());
        }
        return out;
    }
    let (a0, a1) = long.split_at(half);
    let (b0, b1) = short.split_at(half);
    let z0 = poly_mul(ring, a0, b0);
    let z2 = poly_mul(ring, a1, b1);
    let mut z1 = poly_mul(ring, &poly_add(ring, a0, a1), &poly_add(ring, b0, b1));
    sub_in_place(ring, &mut z1, &z0);
    sub_in_place(ring, &mut z1, &z2);
    let mut out = vec![ring.zero(); a.len() + b.len() - 1];
    add_at(ring, &mut out, &z0, 0);
    let z1_len = z1.len().min(out.len() - half);
    add_at(ring, &mut out, &z1[..z1_len], half);
    add_at(ring, &mut out, &z2, 2 * half);
    out
}

/// Inverse of the power series `h` (with `h[0] = 1`) modulo `x^prec`.
fn series_inverse<R: Ring>(ring: &R, h: &[R::E], prec: usize) -> Vec<R::E> {
    debug_assert!(h[0] == ring.one());
    let mut inv = vec![ring.one()];
    let mut k = 1;
    while k < prec {
        let k2 = (2 * k).min(prec);
        let mut e = poly_mul(ring, &h[..h.len().min(k2)], &inv);
        e.resize(k2, ring.zero());
        // t = 2 - e
        let mut t: Vec<R::E> = e.iter().map(|c| ring.neg(c)).collect();
        let two = ring.add(&ring.one(), &ring.one());
        t[0] = ring.add(&t[0], &two);
        inv = poly_mul(ring, &inv, &t);
        inv.truncate(k2);
        k = k2;
    }
    inv
}

/// `f mod g` for monic `g`.
pub(crate) fn rem_monic<R: Ring>(ring: &R, f: &[R::E], g: &[R::E]) -> Vec<R::E> {
    let dg = g.len() - 1;
    debug_assert!(g[dg] == ring.one(), "divisor must be monic");
    if f.len() <= dg {
        return f.to_vec();
    }
    let qlen = f.len() - dg;
    if dg < FAST_DIV_MIN || qlen < FAST_DIV_MIN {
        let mut r = f.to_vec();
        for i in (dg..f.len()).rev() {
            let lead = r[i].clone();
            if lead == ring.zero() {
                continue;
            }
            for k in 0..dg {
                let t = ring.mul(&lead, &g[k]);
                r[i - dg + k] = ring.sub(&r[i - dg + k], &t);
            }
            r[i] = ring.zero();
        }
        r.truncate(dg);
        return r;
    }
    let rev_f: Vec<R::E> = f.iter().rev().take(qlen).cloned().collect();
    let rev_g: Vec<R::E> = g.iter().rev().cloned().collect();
    let inv = series_inverse(ring, &rev_g, qlen);
    let mut q_rev = poly_mul(ring, &rev_f, &inv);
    q_rev.truncate(qlen);
    q_rev.resize(qlen, ring.zero());
    let q: Vec<R::E> = q_rev.into_iter().rev().collect();
    let qg = poly_mul(ring, &q, &g[..dg]);
    let mut r = f[..dg].to_vec();
    sub_in_place(ring, &mut r, &qg[..dg.min(qg.len())]);
    // the x^dg.. part of q*g (monic term) cancels f's high part by construction
    r
}

pub(crate) fn horner<R: Ring>(ring: &R, f: &[R::E], x: &R::E) -> R::E {
    f.iter().rev().fold(ring.zero(), |acc, c| ring.add(&ring.mul(&acc, x), c))
}

/// Levels of a product tree: level 0 holds the leaves `x - p_i`; node `k`
/// of level `l+1` is the product of nodes `2k` and `2k+1` of level `l`
/// (or a copy of node `2k` when it has no sibling).
pub(crate) fn product_tree<R: Ring>(ring: &R, points: &[R::E]) -> Vec<Vec<Vec<R::E>>> {
    assert!(!points.is_empty(), "product tree needs at least one point");
    let leaves: Vec<Vec<R::E>> = points.iter().map(|p| vec![ring.neg(p), ring.one()]).collect();
    let mut levels = vec![leaves];
    while levels.last().unwrap().len() > 1 {
        let prev = levels.last().unwrap();
        let next: Vec<Vec<R::E>> = prev
            .chunks(2)
            .map(|pair| match pair {
                [l, r] => poly_mul(ring, l, r),
                [only] => only.clone(),
                _ => unreachable!(),
            })
            .collect();
        levels.push(next);
    }
    levels
}

pub(crate) fn tree_elems<E>(levels: &[Vec<Vec<E>>]) -> usize {
    levels.iter().flatten().map(Vec::len).sum()
}

/// Values `f(p_i)` by descending a remainder tree. Returns the values and
/// the peak number of coefficients held at once.
pub(crate) fn multipoint<R: Ring>(ring: &R, f: &[R::E], points: &[R::E]) -> (Vec<R::E>, usize) {
    if points.is_empty() {
        return (Vec::new(), 0);
    }
    if points.len() <= 8 {
        return (points.iter().map(|p| horner(ring, f, p)).collect(), f.len());
    }
    let levels = product_tree(ring, points);
    let tree = tree_elems(&levels);
    let top = levels.len() - 1;
    let mut rems = vec![rem_monic(ring, f, &levels[top][0])];
    let mut peak = tree + f.len();
    for level in (0..top).rev() {
        let next: Vec<Vec<R::E>> = levels[level]
            .iter()
            .enumerate()
            .map(|(i, node)| rem_monic(ring, &rems[i / 2], node))
            .collect();
        let held: usize = rems.iter().map(Vec::len).sum::<usize>() + next.iter().map(Vec::len).sum::<usize>();
        peak = peak.max(tree + held);
        rems = next;
    }
    let values = rems.into_iter().map(|r| r.into_iter().next().unwrap_or_else(|| ring.zero())).collect();
    (values, peak)
}

/// Polynomial over `Z/NZ` with coefficients listed from the constant term up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModPoly {
    modulus: Natural,
    coeffs: Vec<Natural>,
}

impl ModPoly {
    /// Reduces every coefficient modulo `modulus` (which must be at least 2).
    pub fn new(coeffs: Vec<Natural>, modulus: Natural) -> Self {
        assert!(modulus >= Natural::from(2u32), "modulus must be at least 2");
        let coeffs = coeffs.into_iter().map(|c| c % &modulus).collect();
        ModPoly { modulus, coeffs }
    }

    pub fn coeffs(&self) -> &[Natural] {
        &self.coeffs
    }

    pub fn modulus(&self) -> &Natural {
        &self.modulus
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    pub fn eval(&self, x: &Natural) -> Natural {
        let ring = BigRing::new(self.modulus.clone());
        horner(&ring, &self.coeffs, &(x % &self.modulus))
    }
}

/// Product tree over `Z/NZ`: `levels()[0]` are the leaves `x - p_i`, the
/// last level holds the single root `∏ (x - p_i)`.
#[derive(Clone, Debug)]
pub struct ProductTree {
    levels: Vec<Vec<ModPoly>>,
}

impl ProductTree {
    pub fn levels(&self) -> &[Vec<ModPoly>] {
        &self.levels
    }

    pub fn root(&self) -> &ModPoly {
        &self.levels.last().expect("nonempty")[0]
    }
}

/// Builds the product tree of `(x - p_i) mod n`.
pub fn product_tree_mod(points: &[Natural], n: &Natural) -> ProductTree {
    let wrap = |levels: Vec<Vec<Vec<Natural>>>| ProductTree {
        levels: levels
            .into_iter()
            .map(|lvl| lvl.into_iter().map(|c| ModPoly { modulus: n.clone(), coeffs: c }).collect())
            .collect(),
    };
    match n.to_u64().filter(|&v| v < 1 << 63) {
        Some(small) => {
            let ring = SmallRing::new(small);
            let pts: Vec<u64> = points.iter().map(|p| ring.from_natural(p)).collect();
            let levels = product_tree(&ring, &pts);
            wrap(levels.into_iter().map(|l| l.into_iter().map(|c| c.into_iter().map(Natural::from).collect()).collect()).collect())
        }
        None => {
            let ring = BigRing::new(n.clone());
            let pts: Vec<Natural> = points.iter().map(|p| ring.from_natural(p)).collect();
            wrap(product_tree(&ring, &pts))
        }
    }
}

/// `f(p_i) mod N` for every point, through a remainder tree.
pub fn multipoint_eval(f: &ModPoly, points: &[Natural]) -> Vec<Natural> {
    let n = &f.modulus;
    match n.to_u64().filter(|&v| v < 1 << 63) {
        Some(small) => {
            let ring = SmallRing::new(small);
            let coeffs: Vec<u64> = f.coeffs.iter().map(|c| ring.from_natural(c)).collect();
            let pts: Vec<u64> = points.iter().map(|p| ring.from_natural(p)).collect();
            multipoint(&ring, &coeffs, &pts).0.into_iter().map(Natural::from).collect()
        }
        None => {
            let ring = BigRing::new(n.clone());
            let pts: Vec<Natural> = points.iter().map(|p| ring.from_natural(p)).collect();
            multipoint(&ring, &f.coeffs, &pts).0
        }
    }
}
