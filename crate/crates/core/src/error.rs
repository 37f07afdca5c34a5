//! Error types shared across the crate.

use thiserror::Error;

/// Coarse classification used by callers (e.g. the CLI exit-code contract):
/// domain errors are bad inputs, integrity errors are failed internal
/// cross-checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Invalid input or precondition violation.
    Domain,
    /// A verification step found an inconsistency (closed form vs brute
    /// force, residual over tolerance, asymmetry).
    Integrity,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("number of pairs must be at least 1")]
    ZeroPairs,

    #[error("{n_pairs} pairs need {} bits, more than the {max} supported by the state encoding", n_pairs * 4)]
    EncodingOverflow { n_pairs: usize, max: usize },

    #[error("electron count {n_electrons} outside [0, {max}] for {n_pairs} pairs")]
    ElectronCountOutOfRange {
        n_pairs: usize,
        n_electrons: usize,
        max: usize,
    },

    #[error("state width mismatch: expected {expected} pairs, got {actual}")]
    WidthMismatch { expected: usize, actual: usize },

    #[error("pair index {pair_index} out of range for {n_pairs} pairs")]
    PairOutOfRange { pair_index: usize, n_pairs: usize },

    #[error("orbital index {linear_index} out of range for {n_orbitals} spin-orbitals")]
    OrbitalOutOfRange {
        linear_index: usize,
        n_orbitals: usize,
    },

    #[error("state {state} is not a desired configuration (some pair does not hold 3 electrons)")]
    NotDesired { state: String },

    #[error("basis states must be strictly ascending by encoding (offending position {position})")]
    UnsortedBasis { position: usize },

    #[error("codomain '{codomain}' is missing reached state {state} (wrong restriction?)")]
    CodomainIncomplete { codomain: String, state: String },

    #[error("codomain electron count {codomain_ne} inconsistent with {kind} from a {domain_ne}-electron domain")]
    SectorMismatch {
        kind: &'static str,
        domain_ne: usize,
        codomain_ne: usize,
    },

    #[error("matrix entry ({row}, {col}) out of bounds for {n_rows}x{n_cols}")]
    EntryOutOfBounds {
        row: usize,
        col: usize,
        n_rows: usize,
        n_cols: usize,
    },

    #[error("matrix entry ({row}, {col}) is not finite")]
    NonFiniteEntry { row: usize, col: usize },

    #[error("operator shapes not representable for {n_pairs} pairs")]
    ShapeOverflow { n_pairs: usize },

    #[error("{name} must be a symmetric {n}x{n} matrix with zero diagonal")]
    BadCouplingMatrix { name: &'static str, n: usize },

    #[error("parameter set has {n_sites} sites but the basis holds {n_pairs} pairs ({} sites)", n_pairs * 2)]
    SiteCountMismatch { n_sites: usize, n_pairs: usize },

    #[error("site {site} must belong to exactly one pair")]
    BadPairing { site: usize },

    #[error("intra-pair distance {distance:.4} A for pair ({a}, {b}) outside [{min}, {max}] A")]
    PairSeparationOutOfRange {
        a: usize,
        b: usize,
        distance: f64,
        min: f64,
        max: f64,
    },

    #[error("no tabulated tunneling amplitude for sites ({a}, {b}) at {distance:.4} A; supply an explicit override")]
    UnparameterizedDistance { a: usize, b: usize, distance: f64 },

    #[error("energy must be non-negative (got {0} eV)")]
    NegativeEnergy(f64),

    #[error("invalid parameter document: {0}")]
    BadConfig(String),

    #[error("matrix dimension {dim} over the dense cap {cap}; use block decomposition first")]
    DimensionOverCap { dim: usize, cap: usize },

    #[error("operator is not square ({n_rows}x{n_cols})")]
    NotSquare { n_rows: usize, n_cols: usize },

    #[error("operator asymmetry |H[{row},{col}] - H[{col},{row}]| = {delta:e} over tolerance")]
    AsymmetricOperator { row: usize, col: usize, delta: f64 },

    #[error("eigen residual {residual:e} over tolerance {tol:e}")]
    ResidualOverTolerance { residual: f64, tol: f64 },

    #[error("{quantity}: closed form {closed_form} != brute force {brute_force}")]
    CountMismatch {
        quantity: String,
        closed_form: String,
        brute_force: String,
    },

    #[error("brute-force verification capped at {cap} pairs (got {n_pairs}); raise the cap explicitly")]
    VerifyOverCap { n_pairs: usize, cap: usize },

    #[error("memory model byte sizes must be positive")]
    BadMemoryModel,

    #[error("triplet-mode report materializes the desired sector; not feasible beyond {cap} pairs (got {n_pairs})")]
    TripletOverCap { n_pairs: usize, cap: usize },
}

impl Error {
    /// Classify for exit-code mapping: integrity failures are
    /// distinguishable from plain bad input.
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::AsymmetricOperator { .. }
            | Error::ResidualOverTolerance { .. }
            | Error::CountMismatch { .. } => ErrorKind::Integrity,
            _ => ErrorKind::Domain,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
