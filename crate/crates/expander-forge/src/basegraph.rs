//! Coded cubical incidence graphs and their signature trims: the structured
//! bipartite graphs sitting between the face side V and the vertex side
//! M = Γ × C.
//!
//! The graph is held implicitly. A face is addressed as (base, signature
//! rank); the neighbor of a vertex (g, x) at index i is the face with the
//! i-th retained signature whose x-corner is g. Corner evaluation reduces to
//! one precomputed right-multiplication permutation per distinct prefix
//! product, so neighbor queries are O(1).

use crate::codes::BinaryCode;
use crate::cubical::{CubicalComplex, SigId};
use crate::error::{Error, Result};
use crate::psl2::{EnumeratedGroup, GroupElement};
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Special-set table for one ordered codeword pair (a, b): the partition of
/// the retained signature positions by the relative offset
/// rel(τ) = prefix_a(τ)⁻¹ · prefix_b(τ), with the offset stored per class.
#[derive(Debug, Clone)]
pub struct SpecialSetTable {
    /// classes[i] = sorted signature positions forming Q_i.
    pub classes: Vec<Vec<u16>>,
    /// partner[i] = rel offset: for u = (g, a), the unique v ∈ M_b with
    /// N(u) ∩ N(v) = Nbr_u(Q_i) is (g · partner[i], b).
    pub partner: Vec<GroupElement>,
}

/// Feasibility report for the Def-style size window |Q_i| ∈ [D/(2s), 2D/s].
#[derive(Debug, Clone, serde::Serialize)]
pub struct SpecialScaleReport {
    pub total_classes: usize,
    pub min_class_size: usize,
    pub max_class_size: usize,
    /// Geometric mean of the feasible s interval endpoints, when nonempty.
    pub s: Option<f64>,
    /// s is feasible iff max ≤ 4 · min.
    pub window_feasible: bool,
    /// Paper-style budget k²·√D̄ on the total number of classes.
    pub class_budget: f64,
}

/// Compute the special-set tables for a trimmed signature collection. Needs
/// only element arithmetic, not an enumerated group, so it scales to large q.
pub fn special_sets_for(
    complex: &CubicalComplex,
    code: &BinaryCode,
    d_target: usize,
) -> Result<BTreeMap<(u8, u8), SpecialSetTable>> {
    if code.k != complex.k {
        return Err(Error::CodeLengthMismatch { code: code.k, dim: complex.k });
    }
    let mut tables = BTreeMap::new();
    for (ai, &a) in code.codewords.iter().enumerate() {
        for (bi, &b) in code.codewords.iter().enumerate() {
            if ai == bi {
                continue;
            }
            let mut classes: BTreeMap<GroupElement, Vec<u16>> = BTreeMap::new();
            for pos in 0..d_target {
                let gens = complex.sig_decode(SigId(pos as u32));
                let pa = complex.prefix_product(&gens, a);
                let pb = complex.prefix_product(&gens, b);
                let rel = pa.inverse().mul_unchecked(&pb);
                classes.entry(rel).or_default().push(pos as u16);
            }
            let (partner, classes): (Vec<_>, Vec<_>) = classes.into_iter().unzip();
            tables.insert((ai as u8, bi as u8), SpecialSetTable { classes, partner });
        }
    }
    Ok(tables)
}

pub fn special_scale_report(
    tables: &BTreeMap<(u8, u8), SpecialSetTable>,
    d: usize,
    d_bar: usize,
    k: usize,
) -> SpecialScaleReport {
    let sizes: Vec<usize> = tables
        .values()
        .flat_map(|t| t.classes.iter().map(|c| c.len()))
        .collect();
    let total_classes = sizes.len();
    let min_class_size = sizes.iter().copied().min().unwrap_or(0);
    let max_class_size = sizes.iter().copied().max().unwrap_or(0);
    let window_feasible = min_class_size > 0 && max_class_size <= 4 * min_class_size;
    let s = window_feasible.then(|| {
        let lo = d as f64 / (2.0 * min_class_size as f64);
        let hi = 2.0 * d as f64 / max_class_size as f64;
        (lo * hi).sqrt()
    });
    SpecialScaleReport {
        total_classes,
        min_class_size,
        max_class_size,
        s,
        window_feasible,
        class_budget: (k * k) as f64 * (d_bar as f64).sqrt(),
    }
}

/// A (k, D)-biregular structured bipartite graph between the signature-trimmed
/// face side and M = Γ × C, with O(1) indexed neighbor maps and the
/// special-set partition per ordered codeword pair.
pub struct StructuredBipartiteGraph {
    pub group: Arc<EnumeratedGroup>,
    pub complex: Arc<CubicalComplex>,
    pub code: BinaryCode,
    d: usize,
    /// prefix[cw][pos] = prefix product of signature pos at codeword cw.
    prefix: Vec<Vec<GroupElement>>,
    /// perm ids aligned with `prefix`: mul maps g ↦ g·prefix, mul_inv maps
    /// g ↦ g·prefix⁻¹.
    mul_perm: Vec<Vec<u32>>,
    mul_inv_perm: Vec<Vec<u32>>,
    perms: Vec<Vec<u32>>,
    pub special: BTreeMap<(u8, u8), SpecialSetTable>,
    /// Per-table partner permutation ids aligned with the class lists.
    partner_perm: BTreeMap<(u8, u8), Vec<u32>>,
    pub scale: SpecialScaleReport,
}

impl StructuredBipartiteGraph {
    /// Build the C-coded incidence graph trimmed to the lexicographically
    /// first `d_target` signatures. `d_target = ∏|A_i|` gives the untrimmed
    /// graph.
    pub fn build(
        group: Arc<EnumeratedGroup>,
        complex: Arc<CubicalComplex>,
        code: BinaryCode,
        d_target: usize,
    ) -> Result<Self> {
        if code.k != complex.k {
            return Err(Error::CodeLengthMismatch { code: code.k, dim: complex.k });
        }
        if group.q != complex.q {
            return Err(Error::ModulusMismatch(group.q, complex.q));
        }
        let d_bar = complex.signature_count();
        if d_target == 0 || d_target > d_bar {
            return Err(Error::TrimOutOfRange { target: d_target, max: d_bar });
        }

        let prefix: Vec<Vec<GroupElement>> = code
            .codewords
            .iter()
            .map(|&cw| {
                (0..d_target)
                    .map(|pos| {
                        let gens = complex.sig_decode(SigId(pos as u32));
                        complex.prefix_product(&gens, cw)
                    })
                    .collect()
            })
            .collect();

        let special = special_sets_for(&complex, &code, d_target)?;
        let scale = special_scale_report(&special, d_target, d_bar, complex.k);

        // Deduplicate the permutations over prefix values, their inverses,
        // and the special-set partner offsets.
        let mut wanted: BTreeMap<GroupElement, u32> = BTreeMap::new();
        let mut want = |g: GroupElement, wanted: &mut BTreeMap<GroupElement, u32>| {
            let next = wanted.len() as u32;
            *wanted.entry(g).or_insert(next)
        };
        let mut mul_perm = vec![vec![0u32; d_target]; code.k];
        let mut mul_inv_perm = vec![vec![0u32; d_target]; code.k];
        for (cw, row) in prefix.iter().enumerate() {
            for (pos, g) in row.iter().enumerate() {
                mul_perm[cw][pos] = want(*g, &mut wanted);
                mul_inv_perm[cw][pos] = want(g.inverse(), &mut wanted);
            }
        }
        let mut partner_perm: BTreeMap<(u8, u8), Vec<u32>> = BTreeMap::new();
        for (key, table) in &special {
            let ids = table
                .partner
                .iter()
                .map(|g| want(*g, &mut wanted))
                .collect();
            partner_perm.insert(*key, ids);
        }
        let mut by_id: Vec<GroupElement> = vec![GroupElement::identity(group.q); wanted.len()];
        for (g, id) in &wanted {
            by_id[*id as usize] = *g;
        }
        let perms: Vec<Vec<u32>> = by_id
            .par_iter()
            .map(|g| group.right_mul_permutation(g))
            .collect();

        Ok(StructuredBipartiteGraph {
            group,
            complex,
            code,
            d: d_target,
            prefix,
            mul_perm,
            mul_inv_perm,
            perms,
            special,
            partner_perm,
            scale,
        })
    }

    /// Re-trim to a smaller degree; identity when `d_target` equals the
    /// current degree.
    pub fn trim_by_signature(&self, d_target: usize) -> Result<Self> {
        if d_target == self.d {
            return StructuredBipartiteGraph::build(
                self.group.clone(),
                self.complex.clone(),
                self.code.clone(),
                d_target,
            );
        }
        if d_target > self.d {
            return Err(Error::TrimOutOfRange { target: d_target, max: self.d });
        }
        StructuredBipartiteGraph::build(
            self.group.clone(),
            self.complex.clone(),
            self.code.clone(),
            d_target,
        )
    }

    pub fn k(&self) -> usize {
        self.code.k
    }

    /// M-side degree D.
    pub fn degree_m(&self) -> usize {
        self.d
    }

    pub fn n_faces(&self) -> usize {
        self.group.len() * self.d
    }

    pub fn n_m(&self) -> usize {
        self.group.len() * self.code.k
    }

    /// M-side numbering is codeword-major: m = cw·|Γ| + g.
    pub fn m_id(&self, cw: usize, g_idx: u32) -> u32 {
        (cw * self.group.len()) as u32 + g_idx
    }

    pub fn m_vertex(&self, m: u32) -> (usize, u32) {
        let n = self.group.len() as u32;
        ((m / n) as usize, m % n)
    }

    /// Face numbering is base-major: v = base·D + pos.
    pub fn face_id(&self, base_idx: u32, pos: usize) -> u32 {
        base_idx * self.d as u32 + pos as u32
    }

    pub fn face_vertex(&self, v: u32) -> (u32, usize) {
        (v / self.d as u32, (v % self.d as u32) as usize)
    }

    /// Indexed neighbor map: the face with the pos-th retained signature
    /// containing (g, cw) at its cw-corner.
    pub fn nbr(&self, m: u32, pos: usize) -> u32 {
        let (cw, g_idx) = self.m_vertex(m);
        let base = self.perms[self.mul_inv_perm[cw][pos] as usize][g_idx as usize];
        self.face_id(base, pos)
    }

    /// The cw-corner of a face, as an M vertex id.
    pub fn face_corner(&self, v: u32, cw: usize) -> u32 {
        let (base_idx, pos) = self.face_vertex(v);
        let g = self.perms[self.mul_perm[cw][pos] as usize][base_idx as usize];
        self.m_id(cw, g)
    }

    /// All k corners of a face.
    pub fn face_neighbors(&self, v: u32) -> Vec<u32> {
        (0..self.code.k).map(|cw| self.face_corner(v, cw)).collect()
    }

    /// All D neighbors of an M vertex, in signature order.
    pub fn m_neighbors(&self, m: u32) -> Vec<u32> {
        (0..self.d).map(|pos| self.nbr(m, pos)).collect()
    }

    /// The partner vertex v_i of u for class i of the ordered pair (a, b).
    pub fn partner_of(&self, m: u32, b: usize, class: usize) -> u32 {
        let (a, g_idx) = self.m_vertex(m);
        let pid = self.partner_perm[&(a as u8, b as u8)][class];
        self.m_id(b, self.perms[pid as usize][g_idx as usize])
    }

    /// Exhaustive biregularity and incidence audit: every (m, pos) edge is
    /// consistent in both directions and every face sees one corner per part.
    pub fn audit_biregular(&self) -> Result<()> {
        let n = self.group.len();
        let k = self.code.k;
        let bad = (0..self.n_m() as u32)
            .into_par_iter()
            .find_any(|&m| {
                let (cw, _) = self.m_vertex(m);
                (0..self.d).any(|pos| self.face_corner(self.nbr(m, pos), cw) != m)
            });
        if let Some(m) = bad {
            return Err(Error::StructureViolation(format!(
                "edge inconsistency at M vertex {m}"
            )));
        }
        let bad_face = (0..self.n_faces() as u32).into_par_iter().find_any(|&v| {
            let mut parts = vec![false; k];
            for cw in 0..k {
                let (p, _) = self.m_vertex(self.face_corner(v, cw));
                if parts[p] {
                    return true;
                }
                parts[p] = true;
            }
            (0..k).any(|p| !parts[p])
        });
        if let Some(v) = bad_face {
            return Err(Error::StructureViolation(format!(
                "face {v} does not meet every part exactly once"
            )));
        }
        let _ = n;
        Ok(())
    }

    /// Audit Def-style special-set structure for one M vertex: the classes
    /// partition [D], and each nbr_u(Q_i) equals the common neighborhood with
    /// the partner vertex.
    pub fn audit_special_for(&self, m: u32) -> Result<()> {
        let (a, _) = self.m_vertex(m);
        let nbrs: Vec<u32> = self.m_neighbors(m);
        for b in 0..self.code.k {
            if b == a {
                continue;
            }
            let table = &self.special[&(a as u8, b as u8)];
            let mut covered = vec![false; self.d];
            for (ci, class) in table.classes.iter().enumerate() {
                for &pos in class {
                    if covered[pos as usize] {
                        return Err(Error::StructureViolation(format!(
                            "position {pos} covered twice for pair ({a},{b})"
                        )));
                    }
                    covered[pos as usize] = true;
                }
                let v = self.partner_of(m, b, ci);
                let mut expected: Vec<u32> =
                    class.iter().map(|&pos| nbrs[pos as usize]).collect();
                expected.sort_unstable();
                let mut common: Vec<u32> = {
                    let vn: std::collections::HashSet<u32> =
                        self.m_neighbors(v).into_iter().collect();
                    nbrs.iter().copied().filter(|f| vn.contains(f)).collect()
                };
                common.sort_unstable();
                if expected != common {
                    return Err(Error::StructureViolation(format!(
                        "class {ci} of pair ({a},{b}) at u={m}: Nbr_u(Q_i) ≠ N(u)∩N(v)"
                    )));
                }
            }
            if covered.iter().any(|&c| !c) {
                return Err(Error::StructureViolation(format!(
                    "classes for pair ({a},{b}) do not cover [D]"
                )));
            }
        }
        Ok(())
    }
}
