//! Decorated Cayley cubical complexes: validated cubical generating sets,
//! set-commuting swap tables, face addressing, corner evaluation, and the
//! unique-completion logic for partial faces.
//!
//! A face is stored as `(base, gens)`, never as its 2^k corner set. The corner
//! at position x is `base` times the supp(x)-prefix of the word a_1 a_2 ⋯ a_k
//! after swap-normalization, which moves every generator whose index lies in
//! supp(x) to the front while preserving relative order.

use crate::error::{Error, Result};
use crate::psl2::GroupElement;
use std::collections::{HashMap, HashSet};

/// Bitmask over generator indices 0..k.
pub type CoordMask = u32;

/// A vertex (g, x) of the decorated complex, with x a bitmask of length k.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DecoratedVertex {
    pub g: GroupElement,
    pub x: CoordMask,
}

/// A k-face addressed by its base corner (position 0^k) and generator tuple.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Face {
    pub base: GroupElement,
    pub gens: Vec<GroupElement>,
}

/// The signature of a face: its generator tuple. Two faces have equal
/// signatures iff their tuples agree, so the rank tuple is encoded as one
/// mixed-radix integer with the index-0 rank most significant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SigId(pub u32);

/// Validated cubical generating sets over PSL(2, F_q), with precomputed swap
/// tables and subset product sets.
#[derive(Debug)]
pub struct CubicalComplex {
    pub q: u64,
    pub k: usize,
    /// Generating sets, each sorted in the canonical element order.
    pub sets: Vec<Vec<GroupElement>>,
    ranks: Vec<HashMap<GroupElement, u16>>,
    /// swap[(i, j)] maps (rank_a, rank_b) with a ∈ A_i, b ∈ A_j to the unique
    /// (rank_b', rank_a') with a·b = b'·a'.
    swaps: HashMap<(u8, u8), Vec<(u16, u16)>>,
    /// Subset product sets: products[mask] = ∏_{i ∈ mask} A_i as a set.
    products: HashMap<CoordMask, HashSet<GroupElement>>,
}

/// |X(k)| for a complex over a group of the given order; the k = 0 degenerate
/// case (empty `sizes`) gives |Γ|.
pub fn face_count_for(group_order: u64, sizes: &[usize]) -> u64 {
    group_order * sizes.iter().map(|&s| s as u64).product::<u64>()
}

/// Validate the cubical generating-set axioms and precompute the machinery.
/// Fails with a witness naming the violated invariant.
pub fn validate_generators(sets: Vec<Vec<GroupElement>>) -> Result<CubicalComplex> {
    if sets.is_empty() || sets.iter().any(|s| s.is_empty()) {
        return Err(Error::InvalidParams("generating sets must be nonempty".into()));
    }
    let q = sets[0][0].q as u64;
    let k = sets.len();
    if k > 16 {
        return Err(Error::InvalidParams("dimension k > 16 unsupported".into()));
    }
    let mut norm_sets: Vec<Vec<GroupElement>> = Vec::with_capacity(k);
    for (i, s) in sets.iter().enumerate() {
        let mut v = s.clone();
        v.sort_unstable();
        v.dedup();
        if v.len() != s.len() {
            return Err(Error::InvalidParams(format!("set {i} contains duplicates")));
        }
        if v.iter().any(|g| g.q as u64 != q) {
            return Err(Error::ModulusMismatch(q, v[0].q as u64));
        }
        norm_sets.push(v);
    }

    let mut ranks: Vec<HashMap<GroupElement, u16>> = Vec::with_capacity(k);
    for (i, s) in norm_sets.iter().enumerate() {
        let map: HashMap<GroupElement, u16> =
            s.iter().enumerate().map(|(r, g)| (*g, r as u16)).collect();
        for g in s {
            if !map.contains_key(&g.inverse()) {
                return Err(Error::InverseClosureViolation {
                    i,
                    witness: format!("{:?} has no inverse in set {i}", g.entries),
                });
            }
        }
        ranks.push(map);
    }

    // Pairwise: set-commuting plus maximal pair products, realized as total
    // bijective swap tables.
    let mut swaps: HashMap<(u8, u8), Vec<(u16, u16)>> = HashMap::new();
    for i in 0..k {
        for j in 0..k {
            if i == j {
                continue;
            }
            let (ai, aj) = (&norm_sets[i], &norm_sets[j]);
            // Factorizations of products in the (j, i) order.
            let mut ji_products: HashMap<GroupElement, (u16, u16)> = HashMap::new();
            for (rb, b) in aj.iter().enumerate() {
                for (ra, a) in ai.iter().enumerate() {
                    if let Some(&(rb0, ra0)) = ji_products.get(&b.mul_unchecked(a)) {
                        return Err(Error::ProductSizeViolation {
                            witness: format!(
                                "A_{j}·A_{i} collision: ({rb0},{ra0}) and ({rb},{ra}) share a product"
                            ),
                        });
                    }
                    ji_products.insert(b.mul_unchecked(a), (rb as u16, ra as u16));
                }
            }
            let mut table = Vec::with_capacity(ai.len() * aj.len());
            for a in ai.iter() {
                for (rb, b) in aj.iter().enumerate() {
                    match ji_products.get(&a.mul_unchecked(b)) {
                        Some(&pair) => table.push(pair),
                        None => {
                            return Err(Error::CommutingViolation {
                                i,
                                j,
                                witness: format!(
                                    "a·b ∉ A_{j}·A_{i} for a = {:?}, b = {:?}",
                                    a.entries, aj[rb].entries
                                ),
                            });
                        }
                    }
                }
            }
            swaps.insert((i as u8, j as u8), table);
        }
    }

    // Subset product sets, ascending index order within each mask; the full
    // mask doubles as the |A_1 ⋯ A_k| = ∏|A_i| check.
    let mut products: HashMap<CoordMask, HashSet<GroupElement>> = HashMap::new();
    products.insert(0, [GroupElement::identity(q)].into_iter().collect());
    for mask in 1u32..(1 << k) {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let prev = &products[&rest];
        let mut cur = HashSet::with_capacity(prev.len() * norm_sets[low].len());
        for a in &norm_sets[low] {
            for g in prev {
                cur.insert(a.mul_unchecked(g));
            }
        }
        let expected: usize = (0..k).filter(|&i| mask >> i & 1 == 1).map(|i| norm_sets[i].len()).product();
        if cur.len() != expected {
            return Err(Error::ProductSizeViolation {
                witness: format!(
                    "|∏_(i in mask {mask:#b}) A_i| = {} but expected {expected}",
                    cur.len()
                ),
            });
        }
        products.insert(mask, cur);
    }

    Ok(CubicalComplex { q, k, sets: norm_sets, ranks, swaps, products })
}

impl CubicalComplex {
    pub fn set_sizes(&self) -> Vec<usize> {
        self.sets.iter().map(|s| s.len()).collect()
    }

    /// Total number of signatures ∏|A_i|.
    pub fn signature_count(&self) -> usize {
        self.sets.iter().map(|s| s.len()).product()
    }

    /// |X(k)| = |Γ| · ∏|A_i| for a group of the given order.
    pub fn face_count(&self, group_order: u64) -> u64 {
        group_order * self.signature_count() as u64
    }

    pub fn rank_in_set(&self, i: usize, g: &GroupElement) -> Option<u16> {
        self.ranks[i].get(g).copied()
    }

    pub fn product_set(&self, mask: CoordMask) -> &HashSet<GroupElement> {
        &self.products[&mask]
    }

    /// Apply the swap table: a ∈ A_i, b ∈ A_j ↦ (b', a') with a·b = b'·a'.
    pub fn swap(&self, i: usize, j: usize, a: &GroupElement, b: &GroupElement) -> (GroupElement, GroupElement) {
        let ra = self.ranks[i][a] as usize;
        let rb = self.ranks[j][b] as usize;
        let (rb2, ra2) = self.swaps[&(i as u8, j as u8)][ra * self.sets[j].len() + rb];
        (self.sets[j][rb2 as usize], self.sets[i][ra2 as usize])
    }

    /// Encode a generator tuple as its lexicographic signature id.
    pub fn sig_encode(&self, gens: &[GroupElement]) -> SigId {
        debug_assert_eq!(gens.len(), self.k);
        let mut id = 0u32;
        for (i, g) in gens.iter().enumerate() {
            id = id * self.sets[i].len() as u32 + self.ranks[i][g] as u32;
        }
        SigId(id)
    }

    pub fn sig_decode(&self, sig: SigId) -> Vec<GroupElement> {
        let mut id = sig.0;
        let mut ranks = vec![0u32; self.k];
        for i in (0..self.k).rev() {
            let m = self.sets[i].len() as u32;
            ranks[i] = id % m;
            id /= m;
        }
        (0..self.k).map(|i| self.sets[i][ranks[i] as usize]).collect()
    }

    pub fn face(&self, base: GroupElement, sig: SigId) -> Face {
        Face { base, gens: self.sig_decode(sig) }
    }

    /// Product of the supp(x) block of the swap-normalized word a_1 ⋯ a_k.
    /// `corner(f, x) = f.base · prefix_product(f.gens, x)`.
    pub fn prefix_product(&self, gens: &[GroupElement], x: CoordMask) -> GroupElement {
        debug_assert_eq!(gens.len(), self.k);
        let mut word: Vec<(usize, GroupElement)> =
            gens.iter().copied().enumerate().collect();
        // Stable bubble pass: move non-support generators right, past support
        // ones, swapping through the tables so the word product is unchanged.
        loop {
            let mut changed = false;
            for t in 0..self.k.saturating_sub(1) {
                let (i, a) = word[t];
                let (j, b) = word[t + 1];
                if x >> i & 1 == 0 && x >> j & 1 == 1 {
                    let (b2, a2) = self.swap(i, j, &a, &b);
                    word[t] = (j, b2);
                    word[t + 1] = (i, a2);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let supp = x.count_ones() as usize;
        let mut acc = GroupElement::identity(self.q);
        for &(_, g) in word.iter().take(supp) {
            acc = acc.mul_unchecked(&g);
        }
        acc
    }

    /// The corner f_x of a face.
    pub fn corner(&self, face: &Face, x: CoordMask) -> GroupElement {
        face.base.mul_unchecked(&self.prefix_product(&face.gens, x))
    }

    /// All corners indexed by position mask, for faces of small k.
    pub fn corners(&self, face: &Face) -> Vec<(CoordMask, GroupElement)> {
        (0..(1u32 << self.k)).map(|x| (x, self.corner(face, x))).collect()
    }

    /// Directed edge labels at a corner: labels[i] is the label of the edge
    /// from `y` to `y ⊕ e_i`. Derived from the face parameterization.
    fn labels_at(&self, face: &Face, y: CoordMask) -> Vec<GroupElement> {
        let gy = self.corner(face, y);
        (0..self.k)
            .map(|i| gy.inverse().mul_unchecked(&self.corner(face, y ^ (1 << i))))
            .collect()
    }

    /// Advance a full label map from corner y to corner y ⊕ e_dir.
    /// Every other direction's label follows by unique square completion:
    /// ℓ_j(y') = ℓ_dir(y)⁻¹ · ℓ_j(y) · a for the unique a ∈ A_dir landing in A_j.
    fn step_labels(&self, labels: &mut [GroupElement], dir: usize) -> Result<()> {
        let alpha_inv = labels[dir].inverse();
        for j in 0..self.k {
            if j == dir {
                continue;
            }
            let partial = alpha_inv.mul_unchecked(&labels[j]);
            let mut found = None;
            for a in &self.sets[dir] {
                let candidate = partial.mul_unchecked(a);
                if self.ranks[j].contains_key(&candidate) {
                    if found.is_some() {
                        return Err(Error::ProductSizeViolation {
                            witness: "square completion not unique".into(),
                        });
                    }
                    found = Some(candidate);
                }
            }
            labels[j] = found.ok_or_else(|| Error::ProductSizeViolation {
                witness: "square completion impossible; generating sets invalid".into(),
            })?;
        }
        labels[dir] = alpha_inv;
        Ok(())
    }

    /// Reconstruct the face parameterization from one corner value and the
    /// full set of edge labels at that corner: descend to 0^k, then walk the
    /// staircase 0^k → e_1 → e_1⊕e_2 → … reading off the generator tuple.
    pub fn face_from_anchor(
        &self,
        anchor_g: GroupElement,
        anchor_x: CoordMask,
        labels_at_anchor: &[GroupElement],
    ) -> Result<Face> {
        debug_assert_eq!(labels_at_anchor.len(), self.k);
        let mut g = anchor_g;
        let mut labels = labels_at_anchor.to_vec();
        let mut y = anchor_x;
        for i in 0..self.k {
            if y >> i & 1 == 1 {
                g = g.mul_unchecked(&labels[i]);
                self.step_labels(&mut labels, i)?;
                y ^= 1 << i;
            }
        }
        let base = g;
        let mut gens = Vec::with_capacity(self.k);
        for i in 0..self.k {
            gens.push(labels[i]);
            if i + 1 < self.k {
                g = g.mul_unchecked(&labels[i]);
                self.step_labels(&mut labels, i)?;
            }
        }
        Ok(Face { base, gens })
    }

    /// Corner evaluated along an explicit monotone path (a permutation of the
    /// support of x), by label propagation. Independent of `prefix_product`;
    /// used to test path-independence.
    pub fn corner_via_path(&self, face: &Face, x: CoordMask, path: &[usize]) -> Result<GroupElement> {
        debug_assert_eq!(
            path.iter().fold(0u32, |m, &i| m | 1 << i),
            x,
            "path must cover supp(x) exactly"
        );
        let mut g = face.base;
        let mut labels = self.labels_at(face, 0);
        for &i in path {
            g = g.mul_unchecked(&labels[i]);
            self.step_labels(&mut labels, i)?;
        }
        Ok(g)
    }
}

/// Result of completing a vertex set to its unique subcube face.
#[derive(Debug, Clone)]
pub struct SubcubeFace {
    /// A full k-face whose restriction to the subcube is the completion.
    pub face: Face,
    /// Coordinates spanned by the subcube C(U).
    pub s_mask: CoordMask,
    /// Position of the subcube: anchor type with S(U) coordinates cleared.
    pub origin: CoordMask,
}

impl SubcubeFace {
    /// Corner positions of the subcube.
    pub fn positions(&self, k: usize) -> Vec<CoordMask> {
        let bits: Vec<usize> = (0..k).filter(|&i| self.s_mask >> i & 1 == 1).collect();
        (0..(1u32 << bits.len()))
            .map(|sel| {
                let mut pos = self.origin;
                for (t, &i) in bits.iter().enumerate() {
                    if sel >> t & 1 == 1 {
                        pos |= 1 << i;
                    }
                }
                pos
            })
            .collect()
    }
}

/// Unique completion of a vertex set U to a C(U)-face (at most one exists),
/// together with the number of k-faces containing U: ∏_{i ∉ S(U)} |A_i| when
/// the completion exists, 0 otherwise.
pub fn complete_faces(
    complex: &CubicalComplex,
    u: &[DecoratedVertex],
) -> Result<(Option<SubcubeFace>, u64)> {
    if u.is_empty() {
        return Err(Error::InvalidParams("U must be nonempty".into()));
    }
    let k = complex.k;
    // Deduplicate; two distinct group elements of one type can share no face.
    let mut by_type: HashMap<CoordMask, GroupElement> = HashMap::new();
    for v in u {
        if v.x >= 1 << k {
            return Err(Error::InvalidParams("vertex type outside {0,1}^k".into()));
        }
        match by_type.entry(v.x) {
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(v.g);
            }
            std::collections::hash_map::Entry::Occupied(e) => {
                if *e.get() != v.g {
                    return Ok((None, 0));
                }
            }
        }
    }
    let anchor = u[0];
    let (g1, x1) = (by_type[&anchor.x], anchor.x);
    let mut s_mask: CoordMask = 0;
    for x in by_type.keys() {
        s_mask |= x ^ x1;
    }
    let ext: u64 = (0..k)
        .filter(|&i| s_mask >> i & 1 == 0)
        .map(|i| complex.sets[i].len() as u64)
        .product();

    // Labels at the anchor in each S(U) direction, pinned pairwise: the label
    // toward x1 ⊕ e_i is the unique c ∈ A_i with c⁻¹·(g1⁻¹·g_t) in the
    // product set over the remaining coordinates of supp(x1 ⊕ x_t).
    let mut labels: Vec<GroupElement> = (0..k).map(|i| complex.sets[i][0]).collect();
    for i in 0..k {
        if s_mask >> i & 1 == 0 {
            continue;
        }
        let (xt, gt) = by_type
            .iter()
            .find(|(x, _)| (*x ^ x1) >> i & 1 == 1)
            .map(|(x, g)| (*x, *g))
            .expect("i ∈ S(U) has a witness by construction");
        let delta = g1.inverse().mul_unchecked(&gt);
        let rest_mask = (x1 ^ xt) & !(1 << i);
        let rest = complex.product_set(rest_mask);
        let mut found = None;
        for c in &complex.sets[i] {
            if rest.contains(&c.inverse().mul_unchecked(&delta)) {
                found = Some(*c);
                break; // uniqueness is guaranteed by maximal product size
            }
        }
        match found {
            Some(c) => labels[i] = c,
            None => return Ok((None, 0)),
        }
    }

    let face = complex.face_from_anchor(g1, x1, &labels)?;
    // The pinned labels determine at most one candidate; accept only if it
    // actually contains all of U.
    for (x, g) in &by_type {
        if complex.corner(&face, *x) != *g {
            return Ok((None, 0));
        }
    }
    Ok((Some(SubcubeFace { face, s_mask, origin: x1 & !s_mask }), ext))
}
