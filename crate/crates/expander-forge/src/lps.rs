//! Generator sets Ã(p) and the LPS Cayley graphs X(p; q).
//!
//! A(n) is the set of norm-n integral quaternions with odd trace, one
//! representative per {α, −α} pair. For distinct primes p_i ≡ 1 (mod 4),
//! |A(p_1 ⋯ p_k)| = ∏ (p_i + 1) and A(p_1)·…·A(p_k) = A(p_1 ⋯ p_k); these are
//! what make the cubical generating sets work out downstream.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::numtheory::{four_square_representations, PrimeParams};
use crate::psl2::{embed, group_order, EnumeratedGroup, GroupElement, Quaternion};
use std::collections::HashSet;
use std::sync::Arc;

/// All norm-n odd-trace quaternion cosets, one representative each with
/// positive trace (odd trace is nonzero, so the sign of `a` fixes the coset).
pub fn enumerate_a(n: u64) -> Result<Vec<Quaternion>> {
    let reps = four_square_representations(n)?;
    let mut out: Vec<Quaternion> = reps
        .into_iter()
        .filter(|&(a, _, _, _)| a > 0 && a % 2 != 0)
        .map(|(a, b, c, d)| Quaternion::new(a, b, c, d))
        .collect();
    out.sort_unstable();
    Ok(out)
}

/// Ã(p): the embedded generator set together with its source quaternions.
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    pub p: u64,
    pub q: u64,
    /// Embedded elements, sorted by the canonical group-element order.
    pub elements: Vec<GroupElement>,
    /// Source quaternions aligned index-for-index with `elements`
    /// before sorting is applied to `elements`; kept sorted by quaternion.
    pub source_quaternions: Vec<Quaternion>,
}

impl GeneratorSet {
    /// Embed A(p) into PSL(2, F_q) and validate the expected structure:
    /// p + 1 distinct elements, closed under inverses.
    pub fn build(p: u64, q: u64) -> Result<GeneratorSet> {
        let quats = enumerate_a(p)?;
        let mut elements: Vec<GroupElement> = Vec::with_capacity(quats.len());
        for alpha in &quats {
            elements.push(embed(alpha, q)?);
        }
        elements.sort_unstable();
        elements.dedup();
        if elements.len() != (p + 1) as usize {
            return Err(Error::InvalidParams(format!(
                "|Ã({p})| = {} but expected {}; embedding collapsed cosets",
                elements.len(),
                p + 1
            )));
        }
        let set: HashSet<GroupElement> = elements.iter().copied().collect();
        for g in &elements {
            if !set.contains(&g.inverse()) {
                return Err(Error::InverseClosureViolation {
                    i: 0,
                    witness: format!("{:?}", g.entries),
                });
            }
            if g.is_identity() {
                return Err(Error::InvalidParams(format!(
                    "Ã({p}) contains the identity; Cayley graph would have self-loops"
                )));
            }
        }
        Ok(GeneratorSet { p, q, elements, source_quaternions: quats })
    }

    pub fn degree(&self) -> usize {
        self.elements.len()
    }
}

/// The Cayley graph Cay(PSL(2, F_q); Ã(p)).
#[derive(Debug)]
pub struct CayleyGraph {
    pub params: PrimeParams,
    pub group: Arc<EnumeratedGroup>,
    pub generators: GeneratorSet,
    pub graph: Graph,
}

impl CayleyGraph {
    pub fn vertex_count(&self) -> usize {
        self.graph.len()
    }

    pub fn degree(&self) -> usize {
        self.generators.degree()
    }
}

/// Build X(p; q) on q(q² − 1)/2 vertices with degree p + 1. The generator set
/// is inverse-closed, so the adjacency relation is symmetric; connectivity is
/// asserted by BFS after construction.
pub fn build_cayley(params: &PrimeParams, group: Arc<EnumeratedGroup>) -> Result<CayleyGraph> {
    params.validate()?;
    if params.p_list.len() != 1 {
        return Err(Error::InvalidParams(
            "build_cayley expects a single prime p".into(),
        ));
    }
    if group.q != params.q {
        return Err(Error::ModulusMismatch(group.q, params.q));
    }
    let p = params.p_list[0];
    let generators = GeneratorSet::build(p, params.q)?;
    let n = group.len();
    debug_assert_eq!(n as u64, group_order(params.q));

    // One right-multiplication permutation per generator; the edge {g, gs}
    // is recorded once, from the endpoint with the smaller index.
    let mut edges: Vec<(u32, u32)> = Vec::with_capacity(n * generators.degree() / 2);
    for s in &generators.elements {
        let perm = group.right_mul_permutation(s);
        for (g, &gs) in perm.iter().enumerate() {
            let g = g as u32;
            if gs == g {
                return Err(Error::InvalidParams(
                    "generator fixes a vertex; self-loop detected".into(),
                ));
            }
            if g < gs {
                edges.push((g, gs));
            }
        }
    }
    let graph = Graph::from_edges(n, &edges);
    if graph.is_regular() != Some(generators.degree()) {
        return Err(Error::InvalidParams(
            "Cayley graph is not regular of degree p + 1; multi-edge collapsed".into(),
        ));
    }
    if !graph.is_connected() {
        return Err(Error::InvalidParams(
            "Cayley graph is disconnected; Ã(p) does not generate".into(),
        ));
    }
    Ok(CayleyGraph { params: params.clone(), group, generators, graph })
}

/// Outcome of the product-closure check Ã(p_1)·…·Ã(p_k) = Ã(∏ p_i).
#[derive(Debug)]
pub struct ClosureReport {
    pub holds: bool,
    pub product_size: usize,
    pub expected_size: usize,
    /// A product element outside Ã(∏ p_i), if closure fails.
    pub witness: Option<GroupElement>,
}

/// Check Lemma-level closure of the embedded sets by direct set product.
pub fn verify_product_closure(params: &PrimeParams) -> Result<ClosureReport> {
    params.validate()?;
    let q = params.q;
    let mut product: Vec<GroupElement> = vec![GroupElement::identity(q)];
    let mut expected_size = 1usize;
    for &p in &params.p_list {
        let gen = GeneratorSet::build(p, q)?;
        expected_size *= gen.degree();
        let mut next = HashSet::with_capacity(product.len() * gen.degree());
        for a in &product {
            for b in &gen.elements {
                next.insert(a.mul_unchecked(b));
            }
        }
        product = next.into_iter().collect();
    }
    let product_size = product.len();

    let n: u64 = params.p_list.iter().product();
    let target: HashSet<GroupElement> = if params.p_list.is_empty() {
        [GroupElement::identity(q)].into_iter().collect()
    } else {
        enumerate_a(n)?
            .iter()
            .map(|alpha| embed(alpha, q))
            .collect::<Result<_>>()?
    };

    let mut witness = None;
    let mut holds = product_size == expected_size && product_size == target.len();
    for g in &product {
        if !target.contains(g) {
            holds = false;
            witness = Some(*g);
            break;
        }
    }
    Ok(ClosureReport { holds, product_size, expected_size, witness })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a5_is_the_expected_six_cosets() {
        let a = enumerate_a(5).unwrap();
        let expected = vec![
            Quaternion::new(1, -2, 0, 0),
            Quaternion::new(1, 0, -2, 0),
            Quaternion::new(1, 0, 0, -2),
            Quaternion::new(1, 0, 0, 2),
            Quaternion::new(1, 0, 2, 0),
            Quaternion::new(1, 2, 0, 0),
        ];
        assert_eq!(a, expected);
    }

    #[test]
    fn a_sizes_match_prime_plus_one() {
        assert_eq!(enumerate_a(13).unwrap().len(), 14);
        assert_eq!(enumerate_a(17).unwrap().len(), 18);
        assert_eq!(enumerate_a(29).unwrap().len(), 30);
        assert_eq!(enumerate_a(65).unwrap().len(), 84); // 6 · 14
        assert!(enumerate_a(8).is_err());
    }

    #[test]
    fn generator_sets_inverse_closed() {
        for (p, q) in [(5u64, 29u64), (13, 29), (13, 17)] {
            let gen = GeneratorSet::build(p, q).unwrap();
            assert_eq!(gen.degree(), (p + 1) as usize);
            let set: HashSet<GroupElement> = gen.elements.iter().copied().collect();
            for g in &gen.elements {
                assert!(set.contains(&g.inverse()));
            }
        }
    }

    #[test]
    fn small_cayley_graph() {
        // X(13; 17): 2448 vertices, 14-regular.
        let params = PrimeParams::new(vec![13], 17).unwrap();
        let group = Arc::new(EnumeratedGroup::build(17).unwrap());
        let x = build_cayley(&params, group).unwrap();
        assert_eq!(x.vertex_count(), 2448);
        assert_eq!(x.graph.is_regular(), Some(14));
        assert!(x.graph.is_connected());
    }

    #[test]
    fn cayley_left_translation_is_automorphism() {
        let params = PrimeParams::new(vec![13], 17).unwrap();
        let group = Arc::new(EnumeratedGroup::build(17).unwrap());
        let x = build_cayley(&params, group.clone()).unwrap();
        // γ chosen arbitrarily; left multiplication must permute edges.
        let gamma = group.elements[137];
        let perm = group.left_mul_permutation(&gamma);
        for v in (0..x.vertex_count()).step_by(97) {
            let image: Vec<u32> = {
                let mut im: Vec<u32> =
                    x.graph.neighbors(v).iter().map(|&w| perm[w as usize]).collect();
                im.sort_unstable();
                im
            };
            assert_eq!(image, x.graph.neighbors(perm[v] as usize));
        }
    }

    #[test]
    fn embed_is_homomorphism_on_a5_times_a13() {
        // embed(αβ) = embed(α)·embed(β), exhaustively over A(5) × A(13) at q = 29.
        let q = 29;
        let a5 = enumerate_a(5).unwrap();
        let a13 = enumerate_a(13).unwrap();
        for alpha in &a5 {
            for beta in &a13 {
                let lhs = embed(&alpha.mul(beta), q).unwrap();
                let rhs = embed(alpha, q).unwrap().mul_unchecked(&embed(beta, q).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn product_closure_two_primes() {
        let params = PrimeParams::new(vec![5, 13], 29).unwrap();
        let report = verify_product_closure(&params).unwrap();
        assert!(report.holds);
        assert_eq!(report.product_size, 84);
    }

    #[test]
    fn product_closure_single_prime_trivial() {
        let params = PrimeParams::new(vec![5], 29).unwrap();
        let report = verify_product_closure(&params).unwrap();
        assert!(report.holds);
        assert_eq!(report.product_size, 6);
    }
}
