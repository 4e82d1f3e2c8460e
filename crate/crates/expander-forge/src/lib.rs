//! expander-forge: constructs constant-degree two-sided lossless vertex
//! expanders from Ramanujan Cayley cubical complexes and verifies their
//! structural, spectral, and expansion properties on concrete instances.
//!
//! The pipeline, bottom to top:
//!
//! 1. [`numtheory`] — primality, four-square representations, prime searches.
//! 2. [`psl2`] — PSL(2, F_q) arithmetic and the quaternion embedding.
//! 3. [`lps`] — generator sets Ã(p) and the LPS Ramanujan Cayley graphs.
//! 4. [`cubical`] — decorated Cayley cubical complexes with swap tables.
//! 5. [`codes`] — Hadamard codes and zero-sum quadruple combinatorics.
//! 6. [`basegraph`] — coded incidence graphs trimmed into structured
//!    bipartite graphs with special-set tables.
//! 7. [`gadget`] — random biregular gadget graphs with certification.
//! 8. [`product`] — the tripartite line product assembling the expander.
//! 9. [`verify`] — spectral estimates, expansion profiles, collision and
//!    skeleton analysis, orientations, and the free-action audit.
//!
//! The `expander-forge` binary exposes each stage as a subcommand; the
//! `examples/` directory contains one runnable walkthrough per capability.

pub mod basegraph;
pub mod gadget;
pub mod codes;
pub mod cubical;
pub mod error;
pub mod graph;
pub mod lps;
pub mod numtheory;
pub mod product;
pub mod psl2;

pub use error::{Error, Result};

/// Cap on parallel work items, read from `EXPANDER_FORGE_THREADS`.
/// Call once near startup; later calls are no-ops.
pub fn init_thread_pool() {
    if let Ok(v) = std::env::var("EXPANDER_FORGE_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            if n > 0 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}
