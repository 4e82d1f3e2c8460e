//! Hadamard codes and the codeword combinatorics used by the density
//! analysis: zero-sum quadruples and their support decomposition.
//!
//! Codewords of length k are stored as `u32` bitmasks; coordinate `t` is bit
//! `t`. Displayed strings list coordinate 0 first.

use crate::error::{Error, Result};

/// A binary linear code with all pairwise distances equal to half the length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryCode {
    /// Block length; always a power of two here.
    pub k: usize,
    /// Codewords as bitmasks, sorted ascending. The zero word is first.
    pub codewords: Vec<u32>,
}

impl BinaryCode {
    pub fn dimension(&self) -> usize {
        self.codewords.len().trailing_zeros() as usize
    }

    pub fn contains(&self, w: u32) -> bool {
        self.codewords.binary_search(&w).is_ok()
    }

    pub fn index_of(&self, w: u32) -> Option<usize> {
        self.codewords.binary_search(&w).ok()
    }
}

pub fn weight(w: u32) -> usize {
    w.count_ones() as usize
}

pub fn to_bit_string(w: u32, k: usize) -> String {
    (0..k).map(|t| if w >> t & 1 == 1 { '1' } else { '0' }).collect()
}

/// The k-th Hadamard code: evaluations of all linear functions on log₂(k)
/// bits, with evaluation points in standard binary counting order. Dimension
/// log₂(k), k codewords, pairwise Hamming distance exactly k/2.
pub fn hadamard(k: usize) -> Result<BinaryCode> {
    if k < 2 || !k.is_power_of_two() {
        return Err(Error::BadCodeLength(k));
    }
    let mut codewords: Vec<u32> = (0..k as u32)
        .map(|y| {
            let mut w = 0u32;
            for t in 0..k as u32 {
                w |= ((y & t).count_ones() & 1) << t;
            }
            w
        })
        .collect();
    codewords.sort_unstable();
    Ok(BinaryCode { k, codewords })
}

/// Four distinct codewords of `s` that XOR to zero, when they exist. Found by
/// the pairwise-sum collision argument: with more than k pairs of distinct
/// elements and only k possible sums, two distinct pairs share a sum, and
/// those two pairs are automatically disjoint. Guaranteed to return `Some`
/// whenever |s| ≥ 2√k.
pub fn zero_sum_quadruple(s: &[u32]) -> Option<(u32, u32, u32, u32)> {
    let mut sorted: Vec<u32> = s.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut first_pair: std::collections::HashMap<u32, (u32, u32)> =
        std::collections::HashMap::new();
    for i in 0..sorted.len() {
        for j in (i + 1)..sorted.len() {
            let (a, b) = (sorted[i], sorted[j]);
            match first_pair.entry(a ^ b) {
                std::collections::hash_map::Entry::Vacant(e) => {
                    e.insert((a, b));
                }
                std::collections::hash_map::Entry::Occupied(e) => {
                    let &(c, d) = e.get();
                    return Some((c, d, a, b));
                }
            }
        }
    }
    None
}

/// Support decomposition of a zero-sum quadruple: disjoint sets a, b, c of
/// coordinates with supp(σ1⊕σ2) = a∪b, supp(σ1⊕σ3) = a∪c, supp(σ1⊕σ4) = b∪c.
/// For Hadamard codewords each set has size k/4.
pub fn abc_decomposition(
    sigma: (u32, u32, u32, u32),
    code: &BinaryCode,
) -> Result<(Vec<usize>, Vec<usize>, Vec<usize>)> {
    let (s1, s2, s3, s4) = sigma;
    let all = [s1, s2, s3, s4];
    for w in all {
        if !code.contains(w) {
            return Err(Error::InvalidParams(format!(
                "{} is not a codeword",
                to_bit_string(w, code.k)
            )));
        }
    }
    for i in 0..4 {
        for j in (i + 1)..4 {
            if all[i] == all[j] {
                return Err(Error::InvalidParams(
                    "quadruple elements must be distinct".into(),
                ));
            }
        }
    }
    if s1 ^ s2 ^ s3 ^ s4 != 0 {
        return Err(Error::InvalidParams("quadruple does not sum to zero".into()));
    }
    let d12 = s1 ^ s2;
    let d13 = s1 ^ s3;
    let d14 = s1 ^ s4;
    let a_mask = d12 & d13;
    let b_mask = d12 & !a_mask;
    let c_mask = d13 & !a_mask;
    debug_assert_eq!(d14, b_mask | c_mask);
    let bits = |m: u32| (0..code.k).filter(|&t| m >> t & 1 == 1).collect::<Vec<_>>();
    Ok((bits(a_mask), bits(b_mask), bits(c_mask)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_bit_string(s: &str) -> u32 {
        s.chars()
            .enumerate()
            .filter(|(_, c)| *c == '1')
            .map(|(t, _)| 1u32 << t)
            .sum()
    }

    #[test]
    fn hadamard_2() {
        // Dimension-1 evaluations at points 0, 1: the zero word and "01".
        let c = hadamard(2).unwrap();
        let words: Vec<String> = c.codewords.iter().map(|&w| to_bit_string(w, 2)).collect();
        assert_eq!(words, vec!["00", "01"]);
    }

    #[test]
    fn hadamard_4() {
        let c = hadamard(4).unwrap();
        let expected: std::collections::BTreeSet<u32> = ["0000", "0101", "0011", "0110"]
            .iter()
            .map(|s| from_bit_string(s))
            .collect();
        let got: std::collections::BTreeSet<u32> = c.codewords.iter().copied().collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn hadamard_invariants() {
        for k in [2usize, 4, 8, 16] {
            let c = hadamard(k).unwrap();
            assert_eq!(c.codewords.len(), k);
            assert_eq!(c.dimension(), k.trailing_zeros() as usize);
            assert!(c.contains(0));
            for &x in &c.codewords {
                for &y in &c.codewords {
                    assert!(c.contains(x ^ y), "not linear at k={k}");
                    if x != y {
                        assert_eq!(weight(x ^ y), k / 2, "distance violated at k={k}");
                    }
                }
            }
        }
        assert!(hadamard(6).is_err());
        assert!(hadamard(1).is_err());
    }

    #[test]
    fn zero_sum_on_full_h4() {
        let c = hadamard(4).unwrap();
        let q = zero_sum_quadruple(&c.codewords).unwrap();
        let set: std::collections::BTreeSet<u32> = [q.0, q.1, q.2, q.3].into_iter().collect();
        assert_eq!(set.len(), 4);
        assert_eq!(q.0 ^ q.1 ^ q.2 ^ q.3, 0);
        // Any zero-sum quadruple of distinct elements of a 4-word code is the
        // whole code.
        assert_eq!(set, c.codewords.iter().copied().collect());
    }

    #[test]
    fn zero_sum_tiny_sets() {
        assert_eq!(zero_sum_quadruple(&[0]), None);
        assert_eq!(zero_sum_quadruple(&[0, 3, 5]), None);
    }

    #[test]
    fn zero_sum_guaranteed_above_threshold() {
        // Every subset of H_16 of size ≥ 2√16 = 8 contains a quadruple.
        let c = hadamard(16).unwrap();
        let mut state = 0x2545F4914F6CDD1Du64;
        for _ in 0..200 {
            let mut subset: Vec<u32> = Vec::new();
            while subset.len() < 8 {
                state = state
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                let w = c.codewords[(state >> 33) as usize % 16];
                if !subset.contains(&w) {
                    subset.push(w);
                }
            }
            let q = zero_sum_quadruple(&subset).expect("|S| ≥ 2√k guarantees a quadruple");
            let items = [q.0, q.1, q.2, q.3];
            assert_eq!(q.0 ^ q.1 ^ q.2 ^ q.3, 0);
            for i in 0..4 {
                assert!(subset.contains(&items[i]));
                for j in (i + 1)..4 {
                    assert_ne!(items[i], items[j]);
                }
            }
        }
    }

    #[test]
    fn abc_worked_example() {
        let c = hadamard(4).unwrap();
        let sigma = (
            from_bit_string("0000"),
            from_bit_string("0101"),
            from_bit_string("0011"),
            from_bit_string("0110"),
        );
        let (a, b, cc) = abc_decomposition(sigma, &c).unwrap();
        assert_eq!(a, vec![3]);
        assert_eq!(b, vec![1]);
        assert_eq!(cc, vec![2]);
    }

    #[test]
    fn abc_swap_symmetry() {
        let c = hadamard(4).unwrap();
        let s = (
            from_bit_string("0000"),
            from_bit_string("0101"),
            from_bit_string("0011"),
            from_bit_string("0110"),
        );
        let (a1, b1, c1) = abc_decomposition(s, &c).unwrap();
        let (a2, b2, c2) = abc_decomposition((s.0, s.2, s.1, s.3), &c).unwrap();
        // Swapping σ2 and σ3 leaves a fixed and swaps b with c.
        assert_eq!(a1, a2);
        assert_eq!(b1, c2);
        assert_eq!(c1, b2);
    }

    #[test]
    fn abc_on_h16_quadruples() {
        let c = hadamard(16).unwrap();
        let q = zero_sum_quadruple(&c.codewords).unwrap();
        let (a, b, cc) = abc_decomposition(q, &c).unwrap();
        assert_eq!(a.len(), 4);
        assert_eq!(b.len(), 4);
        assert_eq!(cc.len(), 4);
        let d12 = q.0 ^ q.1;
        let d13 = q.0 ^ q.2;
        let d14 = q.0 ^ q.3;
        let mask = |v: &[usize]| v.iter().fold(0u32, |m, &t| m | 1 << t);
        assert_eq!(d12, mask(&a) | mask(&b));
        assert_eq!(d13, mask(&a) | mask(&cc));
        assert_eq!(d14, mask(&b) | mask(&cc));
    }

    #[test]
    fn abc_rejects_invalid() {
        let c = hadamard(4).unwrap();
        let w = |s: &str| from_bit_string(s);
        assert!(abc_decomposition((w("0000"), w("0101"), w("0011"), w("0011")), &c).is_err());
        assert!(abc_decomposition((w("0000"), w("0101"), w("0011"), w("1111")), &c).is_err());
    }
}
