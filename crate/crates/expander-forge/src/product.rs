//! The tripartite line product Z = G ◇ H: for every middle vertex u, a copy
//! of the gadget H is placed between u's signature-ordered left and right
//! neighbor lists, one slot edge per gadget edge.
//!
//! Slots are generated middle-vertex-major in gadget edge order, so the
//! provenance of slot t is implicit: middle vertex t / e(H) and gadget edge
//! t mod e(H). Parallel slot edges are retained; neighbor queries deduplicate.

use crate::basegraph::StructuredBipartiteGraph;
use crate::error::{Error, Result};
use crate::gadget::GadgetGraph;
use rayon::prelude::*;
use std::sync::Arc;
use std::sync::OnceLock;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Provenance of one slot edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SlotProvenance {
    pub middle: u32,
    pub left_index: u16,
    pub right_index: u16,
}

pub struct ProductGraph {
    pub gl: Arc<StructuredBipartiteGraph>,
    pub gr: Arc<StructuredBipartiteGraph>,
    pub h: Arc<GadgetGraph>,
    /// Slot endpoints, indexed by slot id.
    pub slot_left: Vec<u32>,
    pub slot_right: Vec<u32>,
    left_slots: OnceLock<Vec<u32>>,
    right_slots: OnceLock<Vec<u32>>,
}

impl ProductGraph {
    pub fn n_left(&self) -> usize {
        self.gl.n_faces()
    }

    pub fn n_right(&self) -> usize {
        self.gr.n_faces()
    }

    pub fn n_middle(&self) -> usize {
        self.gl.n_m()
    }

    pub fn slot_count(&self) -> usize {
        self.slot_left.len()
    }

    /// Slot degree of every left vertex: k·d_L.
    pub fn left_slot_degree(&self) -> usize {
        self.gl.k() * self.h.left_degree
    }

    pub fn right_slot_degree(&self) -> usize {
        self.gr.k() * self.h.right_degree
    }

    pub fn provenance(&self, slot: u32) -> SlotProvenance {
        let e = self.h.edge_count() as u32;
        let (i, j) = self.h.edges[(slot % e) as usize];
        SlotProvenance { middle: slot / e, left_index: i, right_index: j }
    }

    fn side_slots(&self, side: Side) -> &Vec<u32> {
        let (cell, endpoints, n, deg) = match side {
            Side::Left => (
                &self.left_slots,
                &self.slot_left,
                self.n_left(),
                self.left_slot_degree(),
            ),
            Side::Right => (
                &self.right_slots,
                &self.slot_right,
                self.n_right(),
                self.right_slot_degree(),
            ),
        };
        cell.get_or_init(|| {
            // Counting sort of slot ids by endpoint; degrees are uniform.
            let mut cursor: Vec<u32> = (0..n as u32).map(|v| v * deg as u32).collect();
            let mut out = vec![0u32; endpoints.len()];
            for (slot, &v) in endpoints.iter().enumerate() {
                out[cursor[v as usize] as usize] = slot as u32;
                cursor[v as usize] += 1;
            }
            out
        })
    }

    /// Slot ids incident to a vertex of the given side.
    pub fn slots_of(&self, side: Side, v: u32) -> &[u32] {
        let deg = match side {
            Side::Left => self.left_slot_degree(),
            Side::Right => self.right_slot_degree(),
        };
        let all = self.side_slots(side);
        &all[v as usize * deg..(v as usize + 1) * deg]
    }

    /// Slot targets (with multiplicity) of one vertex, sorted.
    pub fn slot_targets(&self, side: Side, v: u32) -> Vec<u32> {
        let other = match side {
            Side::Left => &self.slot_right,
            Side::Right => &self.slot_left,
        };
        let mut t: Vec<u32> = self
            .slots_of(side, v)
            .iter()
            .map(|&s| other[s as usize])
            .collect();
        t.sort_unstable();
        t
    }

    /// Distinct neighbors and unique-neighbors (exactly one incident slot
    /// from S) of a vertex set.
    pub fn neighbors(&self, side: Side, s: &[u32]) -> NeighborSummary {
        let other = match side {
            Side::Left => &self.slot_right,
            Side::Right => &self.slot_left,
        };
        let mut targets: Vec<u32> = s
            .iter()
            .flat_map(|&v| self.slots_of(side, v).iter().map(|&t| other[t as usize]))
            .collect();
        targets.sort_unstable();
        let mut distinct = Vec::new();
        let mut unique = Vec::new();
        let mut idx = 0;
        while idx < targets.len() {
            let mut end = idx + 1;
            while end < targets.len() && targets[end] == targets[idx] {
                end += 1;
            }
            distinct.push(targets[idx]);
            if end - idx == 1 {
                unique.push(targets[idx]);
            }
            idx = end;
        }
        NeighborSummary { distinct, unique }
    }
}

#[derive(Debug, Clone)]
pub struct NeighborSummary {
    pub distinct: Vec<u32>,
    pub unique: Vec<u32>,
}

/// Assemble the product. Both base graphs must share the same middle set:
/// same group, same code.
pub fn line_product(
    gl: Arc<StructuredBipartiteGraph>,
    gr: Arc<StructuredBipartiteGraph>,
    h: Arc<GadgetGraph>,
) -> Result<ProductGraph> {
    if !Arc::ptr_eq(&gl.group, &gr.group) {
        return Err(Error::ProductSideMismatch(
            "base graphs must share one enumerated group".into(),
        ));
    }
    if gl.code != gr.code {
        return Err(Error::ProductSideMismatch("base graphs must share the code".into()));
    }
    if h.left_size != gl.degree_m() {
        return Err(Error::ProductSideMismatch(format!(
            "gadget left side {} ≠ D_L {}",
            h.left_size,
            gl.degree_m()
        )));
    }
    if h.right_size != gr.degree_m() {
        return Err(Error::ProductSideMismatch(format!(
            "gadget right side {} ≠ D_R {}",
            h.right_size,
            gr.degree_m()
        )));
    }
    let n_m = gl.n_m();
    let e_h = h.edge_count();
    let per_u: Vec<(Vec<u32>, Vec<u32>)> = (0..n_m as u32)
        .into_par_iter()
        .map(|u| {
            let lf = gl.m_neighbors(u);
            let rf = gr.m_neighbors(u);
            let mut ls = Vec::with_capacity(e_h);
            let mut rs = Vec::with_capacity(e_h);
            for &(i, j) in &h.edges {
                ls.push(lf[i as usize]);
                rs.push(rf[j as usize]);
            }
            (ls, rs)
        })
        .collect();
    let mut slot_left = Vec::with_capacity(n_m * e_h);
    let mut slot_right = Vec::with_capacity(n_m * e_h);
    for (ls, rs) in per_u {
        slot_left.extend_from_slice(&ls);
        slot_right.extend_from_slice(&rs);
    }
    Ok(ProductGraph {
        gl,
        gr,
        h,
        slot_left,
        slot_right,
        left_slots: OnceLock::new(),
        right_slots: OnceLock::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::hadamard;
    use crate::cubical::validate_generators;
    use crate::gadget::generate;
    use crate::lps::GeneratorSet;
    use crate::psl2::EnumeratedGroup;

    fn mini_product() -> ProductGraph {
        // Small trims keep the slot count low for unit tests.
        let group = Arc::new(EnumeratedGroup::build(29).unwrap());
        let a5 = GeneratorSet::build(5, 29).unwrap();
        let a13 = GeneratorSet::build(13, 29).unwrap();
        let cx_l = Arc::new(
            validate_generators(vec![a5.elements.clone(), a13.elements.clone()]).unwrap(),
        );
        let cx_r = Arc::new(validate_generators(vec![a13.elements, a5.elements]).unwrap());
        let code = hadamard(2).unwrap();
        let gl = Arc::new(
            StructuredBipartiteGraph::build(group.clone(), cx_l, code.clone(), 12).unwrap(),
        );
        let gr =
            Arc::new(StructuredBipartiteGraph::build(group, cx_r, code, 18).unwrap());
        let h = Arc::new(generate(12, 18, 3, 2, 5).unwrap());
        line_product(gl, gr, h).unwrap()
    }

    #[test]
    fn slot_count_is_m_times_edges() {
        let z = mini_product();
        assert_eq!(z.slot_count(), z.n_middle() * z.h.edge_count());
        assert_eq!(z.n_left(), 12_180 * 12);
        assert_eq!(z.n_right(), 12_180 * 18);
    }

    #[test]
    fn slot_degrees_exact() {
        let z = mini_product();
        let kdl = z.left_slot_degree();
        let kdr = z.right_slot_degree();
        assert_eq!(kdl, 2 * 3);
        assert_eq!(kdr, 2 * 2);
        // Counting-sorted slot lists cover each vertex exactly degree times.
        let mut count_l = vec![0u32; z.n_left()];
        for &l in &z.slot_left {
            count_l[l as usize] += 1;
        }
        assert!(count_l.iter().all(|&c| c == kdl as u32));
        let mut count_r = vec![0u32; z.n_right()];
        for &r in &z.slot_right {
            count_r[r as usize] += 1;
        }
        assert!(count_r.iter().all(|&c| c == kdr as u32));
    }

    #[test]
    fn provenance_reconstructs_slots() {
        let z = mini_product();
        for slot in (0..z.slot_count() as u32).step_by(7919) {
            let p = z.provenance(slot);
            assert_eq!(
                z.slot_left[slot as usize],
                z.gl.nbr(p.middle, p.left_index as usize)
            );
            assert_eq!(
                z.slot_right[slot as usize],
                z.gr.nbr(p.middle, p.right_index as usize)
            );
        }
    }

    #[test]
    fn matching_gadget_gives_m_slots() {
        // H a perfect matching (d = 1) on equal sides: slot count = |M|·D.
        let group = Arc::new(EnumeratedGroup::build(29).unwrap());
        let a5 = GeneratorSet::build(5, 29).unwrap();
        let a13 = GeneratorSet::build(13, 29).unwrap();
        let cx_l = Arc::new(
            validate_generators(vec![a5.elements.clone(), a13.elements.clone()]).unwrap(),
        );
        let cx_r = Arc::new(validate_generators(vec![a13.elements, a5.elements]).unwrap());
        let code = hadamard(2).unwrap();
        let gl = Arc::new(
            StructuredBipartiteGraph::build(group.clone(), cx_l, code.clone(), 10).unwrap(),
        );
        let gr = Arc::new(StructuredBipartiteGraph::build(group, cx_r, code, 10).unwrap());
        let h = Arc::new(generate(10, 10, 1, 1, 2).unwrap());
        let z = line_product(gl, gr, h).unwrap();
        assert_eq!(z.slot_count(), z.n_middle() * 10);
        assert_eq!(z.left_slot_degree(), 2);
    }

    #[test]
    fn neighbors_dedupe_and_unique() {
        let z = mini_product();
        let s = [0u32, 17, 4242];
        let summary = z.neighbors(Side::Left, &s);
        // Independent recount via provenance.
        let mut targets: Vec<u32> = Vec::new();
        for (slot, &l) in z.slot_left.iter().enumerate() {
            if s.contains(&l) {
                targets.push(z.slot_right[slot]);
            }
        }
        targets.sort_unstable();
        let mut distinct = targets.clone();
        distinct.dedup();
        assert_eq!(summary.distinct, distinct);
        let unique: Vec<u32> = distinct
            .iter()
            .copied()
            .filter(|&r| targets.iter().filter(|&&t| t == r).count() == 1)
            .collect();
        assert_eq!(summary.unique, unique);
    }

    #[test]
    fn empty_set_has_no_neighbors() {
        let z = mini_product();
        let summary = z.neighbors(Side::Left, &[]);
        assert!(summary.distinct.is_empty());
        assert!(summary.unique.is_empty());
    }

    #[test]
    fn singleton_has_at_least_dl_neighbors() {
        let z = mini_product();
        for v in (0..z.n_left() as u32).step_by(33_333) {
            let summary = z.neighbors(Side::Left, &[v]);
            assert!(summary.distinct.len() >= z.h.left_degree);
        }
    }

    #[test]
    fn mismatched_sides_rejected() {
        let group = Arc::new(EnumeratedGroup::build(29).unwrap());
        let a5 = GeneratorSet::build(5, 29).unwrap();
        let a13 = GeneratorSet::build(13, 29).unwrap();
        let cx = Arc::new(validate_generators(vec![a5.elements, a13.elements]).unwrap());
        let code = hadamard(2).unwrap();
        let gl = Arc::new(
            StructuredBipartiteGraph::build(group.clone(), cx.clone(), code.clone(), 12).unwrap(),
        );
        let gr = Arc::new(StructuredBipartiteGraph::build(group, cx, code, 18).unwrap());
        let h = Arc::new(generate(12, 12, 2, 2, 0).unwrap());
        assert!(line_product(gl, gr, h).is_err());
    }
}
