//! Arithmetic in F_q and in the projective special linear group PSL(2, F_q),
//! including the quaternion-to-group embedding.
//!
//! Group elements are 2×2 matrices of determinant 1 taken modulo ±1. The
//! canonical coset representative is the matrix whose first nonzero entry in
//! row-major order lies in `[1, (q-1)/2]`; this gives a total order that makes
//! hashing and dense vertex numbering deterministic.

use crate::error::{Error, Result};
use crate::numtheory::{is_prime, is_quadratic_residue, mod_pow};

/// Order of PSL(2, F_q): q(q² − 1)/2.
pub fn group_order(q: u64) -> u64 {
    q * (q * q - 1) / 2
}

/// An integral quaternion a + b·i + c·j + d·k.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Quaternion {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Quaternion {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        Quaternion { a, b, c, d }
    }

    pub fn one() -> Self {
        Quaternion::new(1, 0, 0, 0)
    }

    pub fn norm(&self) -> u64 {
        (self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d) as u64
    }

    /// Normalized trace, i.e. the real coefficient.
    pub fn trace(&self) -> i64 {
        self.a
    }

    pub fn conjugate(&self) -> Self {
        Quaternion::new(self.a, -self.b, -self.c, -self.d)
    }

    pub fn negate(&self) -> Self {
        Quaternion::new(-self.a, -self.b, -self.c, -self.d)
    }

    pub fn mul(&self, o: &Quaternion) -> Self {
        Quaternion::new(
            self.a * o.a - self.b * o.b - self.c * o.c - self.d * o.d,
            self.a * o.b + self.b * o.a + self.c * o.d - self.d * o.c,
            self.a * o.c - self.b * o.d + self.c * o.a + self.d * o.b,
            self.a * o.d + self.b * o.c - self.c * o.b + self.d * o.a,
        )
    }
}

/// Canonical representative of a coset {M, −M} in PSL(2, F_q).
/// Entries are stored row-major, reduced mod q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    pub entries: [u32; 4],
    pub q: u32,
}

impl GroupElement {
    /// Canonicalize a matrix over F_q. The caller guarantees det ≡ 1.
    pub fn canonical(entries: [u64; 4], q: u64) -> Self {
        let mut e = [0u32; 4];
        for (dst, &src) in e.iter_mut().zip(entries.iter()) {
            *dst = (src % q) as u32;
        }
        let half = ((q - 1) / 2) as u32;
        for &v in &e {
            if v != 0 {
                if v > half {
                    for x in e.iter_mut() {
                        *x = (q as u32 - *x) % q as u32;
                    }
                }
                break;
            }
        }
        GroupElement { entries: e, q: q as u32 }
    }

    pub fn identity(q: u64) -> Self {
        GroupElement::canonical([1, 0, 0, 1], q)
    }

    pub fn is_identity(&self) -> bool {
        self.entries == [1, 0, 0, 1]
    }

    pub fn det(&self) -> u64 {
        let q = self.q as u64;
        let [a, b, c, d] = self.entries.map(|x| x as u64);
        ((a * d % q) + q - (b * c % q)) % q
    }

    pub fn mul(&self, o: &GroupElement) -> Result<GroupElement> {
        if self.q != o.q {
            return Err(Error::ModulusMismatch(self.q as u64, o.q as u64));
        }
        Ok(self.mul_unchecked(o))
    }

    /// Product without the modulus check, for hot paths over a fixed group.
    #[inline]
    pub fn mul_unchecked(&self, o: &GroupElement) -> GroupElement {
        let q = self.q as u64;
        let [a, b, c, d] = self.entries.map(|x| x as u64);
        let [e, f, g, h] = o.entries.map(|x| x as u64);
        GroupElement::canonical(
            [
                a * e + b * g,
                a * f + b * h,
                c * e + d * g,
                c * f + d * h,
            ],
            q,
        )
    }

    pub fn inverse(&self) -> GroupElement {
        // For det ≡ 1: [[a,b],[c,d]]⁻¹ = [[d,−b],[−c,a]].
        let q = self.q as u64;
        let [a, b, c, d] = self.entries.map(|x| x as u64);
        GroupElement::canonical([d, (q - b) % q, (q - c) % q, a], q)
    }
}

/// Smallest j in [1, q) with j² ≡ −1 (mod q). Exists iff q ≡ 1 (mod 4).
pub fn sqrt_minus_one(q: u64) -> Result<u64> {
    if !is_prime(q) || q % 4 != 1 {
        return Err(Error::NoSqrtMinusOne(q));
    }
    for j in 1..q {
        if j * j % q == q - 1 {
            return Ok(j);
        }
    }
    unreachable!("q ≡ 1 (mod 4) guarantees a square root of -1")
}

/// Smallest positive c with c²·p ≡ 1 (mod q). Exists iff p is a QR mod q.
fn unit_scaling(p: u64, q: u64) -> Result<u64> {
    if !is_quadratic_residue(p as i64, q)? {
        return Err(Error::NormNotResidue { p, q });
    }
    for c in 1..q {
        if c * c % q * (p % q) % q == 1 {
            return Ok(c);
        }
    }
    Err(Error::NormNotResidue { p, q })
}

/// Embed a quaternion of quadratic-residue norm into PSL(2, F_q):
/// the matrix [[a+bj, c+dj], [−c+dj, a−bj]] with j² ≡ −1, scaled so the
/// determinant becomes 1, then canonicalized. α and −α map to the same
/// element.
pub fn embed(alpha: &Quaternion, q: u64) -> Result<GroupElement> {
    let p = alpha.norm();
    let j = sqrt_minus_one(q)?;
    let c = unit_scaling(p % q, q)?;
    let qi = q as i64;
    let red = |x: i64| x.rem_euclid(qi) as u64;
    let (a, b, cc, d) = (alpha.a, alpha.b, alpha.c, alpha.d);
    let m = [
        red(a + b * j as i64),
        red(cc + d * j as i64),
        red(-cc + d * j as i64),
        red(a - b * j as i64),
    ];
    let scaled = m.map(|x| x * c % q);
    let g = GroupElement::canonical([scaled[0], scaled[1], scaled[2], scaled[3]], q);
    debug_assert_eq!(g.det(), 1, "embedding must land in SL(2, F_q)");
    Ok(g)
}

/// The full group PSL(2, F_q), enumerated once and sorted so that elements
/// have a stable dense numbering.
#[derive(Debug)]
pub struct EnumeratedGroup {
    pub q: u64,
    pub elements: Vec<GroupElement>,
}

impl EnumeratedGroup {
    /// Enumerate all of PSL(2, F_q). Runs in O(q³) time: for a ≠ 0 the entry
    /// d is determined by (a, b, c); for a = 0, c is determined by b.
    pub fn build(q: u64) -> Result<Self> {
        if !is_prime(q) || q % 4 != 1 {
            return Err(Error::InvalidParams(format!(
                "group modulus q = {q} must be a prime ≡ 1 (mod 4)"
            )));
        }
        let expected = group_order(q) as usize;
        let mut elements = Vec::with_capacity(expected * 2);
        // a == 0: need bc ≡ −1, d free.
        for b in 1..q {
            let c = (q - mod_pow(b, q - 2, q)) % q;
            for d in 0..q {
                elements.push(GroupElement::canonical([0, b, c, d], q));
            }
        }
        // a != 0: d = (1 + bc) / a.
        for a in 1..q {
            let a_inv = mod_pow(a, q - 2, q);
            for b in 0..q {
                for c in 0..q {
                    let d = (1 + b * c % q) % q * a_inv % q;
                    elements.push(GroupElement::canonical([a, b, c, d], q));
                }
            }
        }
        elements.sort_unstable();
        elements.dedup();
        debug_assert_eq!(elements.len(), expected);
        Ok(EnumeratedGroup { q, elements })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, g: &GroupElement) -> u32 {
        self.elements
            .binary_search(g)
            .expect("element outside the enumerated group") as u32
    }

    pub fn identity_index(&self) -> u32 {
        self.index_of(&GroupElement::identity(self.q))
    }

    /// Permutation of vertex indices induced by right multiplication with `h`.
    pub fn right_mul_permutation(&self, h: &GroupElement) -> Vec<u32> {
        self.elements
            .iter()
            .map(|g| self.index_of(&g.mul_unchecked(h)))
            .collect()
    }

    /// Permutation induced by left multiplication with `γ`.
    pub fn left_mul_permutation(&self, gamma: &GroupElement) -> Vec<u32> {
        self.elements
            .iter()
            .map(|g| self.index_of(&gamma.mul_unchecked(g)))
            .collect()
    }
}
