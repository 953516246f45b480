//! Lindblad dynamics of two-level PT-symmetric non-Hermitian systems.
//!
//! The library evolves the generalized density matrix ρ_G = ρη of a 2×2
//! pseudo-Hermitian system under a Lindblad master equation whose dissipators
//! are themselves pseudo-Hermitian and PT-commuting. Everything happens in the
//! Bloch (Pauli-coefficient) picture: a density matrix becomes a 4-vector Γ,
//! the master equation becomes Γ̇ = −2RΓ with a 4×4 generator R whose row 0
//! vanishes, and the exact propagator M(t) = exp(−2Rt) is produced in closed
//! form from the roots of a depressed cubic (Cayley–Hamilton).
//!
//! Transition probabilities between mass (energy-eigenstate), flavor, and
//! θ-rotated states are computed twice: numerically through M(t), and through
//! a library of closed-form / series formula families. Each path is cheap
//! enough that the other validates it.
//!
//! Module map:
//! - [`bloch`]: Pauli algebra, Γ-vector ↔ density-matrix transform.
//! - [`hamiltonian`]: the four-parameter Hamiltonian, spectrum, metric η,
//!   similarity transform G to the Hermitian frame.
//! - [`lindblad`]: pseudo-Hermitian dissipation operators and the six
//!   coefficients A…F that fill the damping block of R.
//! - [`cubic`]: depressed complex cubic solver.
//! - [`evolution`]: generator assembly, exact exponentiation, an RK4 oracle,
//!   and the nonlinear normalized-density-matrix evolution.
//! - [`states`]: every initial density matrix used by the probability layer.
//! - [`probabilities`]: numeric and closed-form transition probabilities.
//! - [`grid`]: time grids and (optionally parallel) sweeps.
//! - [`scenario`]: config-file driven runs, figure data sets, and the
//!   self-check suite behind the CLI `validate` verb.

pub mod bloch;
pub mod cubic;
pub mod evolution;
pub mod grid;
pub mod hamiltonian;
pub mod lindblad;
pub mod probabilities;
pub mod scenario;
pub mod states;

pub use bloch::{DensityKind, DensityMatrix, GammaVector};
pub use evolution::{Generator, GeneratorKind, Propagator};
pub use hamiltonian::{Metric, PTHamiltonian, SimilarityTransform, Spectrum};
pub use lindblad::{DissipatorCoefficients, LindbladOperator};
pub use probabilities::{FormulaFamily, ProbBasis, ProbabilityQuad};
pub use scenario::{FigureId, Mode, OutputFormat, Scenario, ValidationReport};
pub use states::StateLabel;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;

/// Everything that can go wrong at the domain level.
///
/// [`Error::name`] yields the stable machine-readable identifier emitted by
/// the CLI on stderr; exit codes map config/io errors to 2 and domain errors
/// to 3.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// s² − r²sin²(diag_phase) fell below the PT-boundary tolerance: the
    /// metric entries diverge like 1/cos α there.
    #[error("PT phase boundary: s^2 - r^2 sin^2(diag_phase) = {gap:.3e} is within 1e-12*s^2 of zero or negative")]
    PhaseBoundary { gap: f64 },

    /// Eigenvectors and metric are only constructed for offdiag_phase = 0.
    #[error("unsupported off-diagonal phase {0}: eigenbasis and metric require offdiag_phase = 0")]
    UnsupportedPhase(f64),

    /// A two-level system admits at most N² − 1 = 3 Lindblad operators.
    #[error("too many Lindblad operators: {0} > 3")]
    TooManyOperators(usize),

    /// Fixed-step integrator asked to take steps too coarse for its order.
    #[error("integration step too large: 2*|R|*t/steps = {0:.3e} must stay below 0.1")]
    StepTooLarge(f64),

    /// tr[ρ(t)ρ'(0)] came out with a non-negligible imaginary part, which
    /// signals a generator-assembly bug rather than a physical result.
    #[error("transition probability has imaginary residual {0:.3e} > 1e-8")]
    NonRealProbability(f64),

    /// A closed-form family was evaluated outside its parameter domain; the
    /// violated constraint is spelled out.
    #[error("out of domain: {0}")]
    OutOfDomain(String),

    /// Config file missing, unreadable, or schema-invalid.
    #[error("config error: {0}")]
    Config(String),

    /// Filesystem trouble while writing artifacts.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable identifier for scripts parsing stderr.
    pub fn name(&self) -> &'static str {
        match self {
            Error::PhaseBoundary { .. } => "PhaseBoundary",
            Error::UnsupportedPhase(_) => "UnsupportedPhase",
            Error::TooManyOperators(_) => "TooManyOperators",
            Error::StepTooLarge(_) => "StepTooLarge",
            Error::NonRealProbability(_) => "NonRealProbability",
            Error::OutOfDomain(_) => "OutOfDomain",
            Error::Config(_) => "Config",
            Error::Io(_) => "Io",
        }
    }

    /// Process exit code the CLI maps this error to: 2 for config/io
    /// problems, 3 for domain errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Io(_) => 2,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
