//! Crate-wide error type. Validation failures carry enough of a witness to
//! reproduce the violation.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("expected an odd integer, got {0}")]
    EvenInput(u64),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("residue class {a} is divisible by the modulus {q}")]
    ZeroResidue { a: i64, q: u64 },

    #[error("no prime q ≡ 1 (mod {modulus}) with q ≥ {q_min} found below {limit}")]
    PrimeSearchExhausted { modulus: u64, q_min: u64, limit: u64 },

    #[error("prime band [{lo}, {hi}] holds only {found} primes ≡ 1 (mod 4), needed {needed}")]
    BandTooNarrow { lo: u64, hi: u64, found: usize, needed: usize },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("-1 has no square root modulo {0} (need q ≡ 1 mod 4)")]
    NoSqrtMinusOne(u64),

    #[error("norm {p} is not a quadratic residue modulo {q}; quaternion cannot embed")]
    NormNotResidue { p: u64, q: u64 },

    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),

    #[error("generating sets {i} and {j} do not set-commute: {witness}")]
    CommutingViolation { i: usize, j: usize, witness: String },

    #[error("product of generating sets collapses: {witness}")]
    ProductSizeViolation { witness: String },

    #[error("generating set {i} is not closed under inverses: {witness}")]
    InverseClosureViolation { i: usize, witness: String },

    #[error("code length {0} is not a power of two ≥ 2")]
    BadCodeLength(usize),

    #[error("code length {code} does not match complex dimension {dim}")]
    CodeLengthMismatch { code: usize, dim: usize },

    #[error("trim target {target} out of range (1..={max})")]
    TrimOutOfRange { target: usize, max: usize },

    #[error("gadget side/degree mismatch: need left_size*left_degree == right_size*right_degree, got {0}*{1} != {2}*{3}")]
    GadgetShapeMismatch(usize, usize, usize, usize),

    #[error("gadget resampling budget of {0} attempts exhausted")]
    GadgetBudgetExhausted(usize),

    #[error("gadget certification failed after {retries} retries; best candidate: {summary}")]
    GadgetCertificationFailed { retries: usize, summary: String },

    #[error("product side mismatch: {0}")]
    ProductSideMismatch(String),

    #[error("eigensolver did not converge within {iterations} iterations (residual {residual:.3e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("subset {size} of {universe} vertices is beyond the exhaustive enumeration budget")]
    ExhaustiveInfeasible { size: usize, universe: usize },

    #[error("vertex set too large: |U| = {got} exceeds the hypothesis cap {cap}")]
    SetTooLarge { got: usize, cap: usize },

    #[error("eigenvalue precondition falsified: subgraph on {vertices} vertices has min degree {min_degree} > bound {bound}")]
    OrientationWitness { vertices: usize, min_degree: usize, bound: f64 },

    #[error("structured-graph audit failed: {0}")]
    StructureViolation(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed edge list: {0}")]
    MalformedEdgeList(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
