use thiserror::Error;

/// Errors raised by algebra construction and the real-positivity calculus.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("inconsistent dimensions: {0}")]
    InconsistentDimensions(String),
    #[error("structure constants are not associative at (e{i}, e{j}, e{k}); defect {defect:.3e}")]
    NotAssociative { i: usize, j: usize, k: usize, defect: f64 },
    #[error("norm is not submultiplicative: |e{i} e{j}| = {lhs:.6} > {rhs:.6}")]
    NotSubmultiplicative { i: usize, j: usize, lhs: f64, rhs: f64 },
    #[error("representation is not a homomorphism at (e{i}, e{j}); defect {defect:.3e}")]
    NotHomomorphism { i: usize, j: usize, defect: f64 },
    #[error("identity hint is not a two-sided identity (defect {0:.3e})")]
    NotIdentity(f64),
    #[error("identity has norm {0}, expected 1")]
    IdentityNorm(f64),
    #[error("elements belong to different algebras")]
    AlgebraMismatch,
    #[error("power iteration for the l2 operator norm stalled (estimate {estimate})")]
    PowerIterationStalled { estimate: f64 },
    #[error("operation requires a unital algebra; unitize first")]
    NotUnital,
    #[error("left regular representation is not isometric on e{index}: {rep_norm} vs {norm}")]
    NotIsometricRegularRep { index: usize, rep_norm: f64, norm: f64 },
    #[error("unsupported norm kind for {0}")]
    UnsupportedNormKind(&'static str),
    #[error("element is singular (relative singular value {0:.3e})")]
    Singular(f64),
    #[error("abscissa extrapolation did not converge: estimate {estimate}, error {err:.3e}")]
    NonConvergent { estimate: f64, err: f64 },
    #[error("no closed-form state family for this norm")]
    UnsupportedStateFamily,
    #[error("element norm {0} is not below 1")]
    NormTooLarge(f64),
    #[error("element is not in F_A: |1 - x| = {0}")]
    NotInF(f64),
    #[error("element is not accretive: min Re W = {0}")]
    NotAccretive(f64),
    #[error("tolerance {tol:.1e} not reached after {steps} steps (error {err:.3e})")]
    TolNotReached { tol: f64, err: f64, steps: usize },
    #[error("elements do not commute (defect {0:.3e})")]
    NotCommuting(f64),
    #[error("algebraic and limit support idempotents disagree by {0:.3e}")]
    RouteDisagreement(f64),
    #[error("element is not pseudo-invertible (residual {0:.3e})")]
    NotPseudoInvertible(f64),
    #[error("pool exhausted at step {step}: best defect {defect:.3e} exceeds bound {bound:.3e}")]
    PoolExhausted { step: usize, defect: f64, bound: f64 },
    #[error("pool element {index} is not in F_A (|1 - f| = {norm})")]
    PoolNotInF { index: usize, norm: f64 },
    #[error("algebra is not commutative (defect {0:.3e})")]
    NotCommutative(f64),
    #[error("ideal spans differ: {0}")]
    SpanMismatch(String),
    #[error("support is not a central idempotent of norm 0 or 1: {0}")]
    SupportNotIdempotent(String),
    #[error("projection is not an M-projection: {0}")]
    NotMIdeal(String),
    #[error("alpha is not interior to the quotient numerical range (slack {0:.3e})")]
    AlphaNotInterior(f64),
    #[error("quotient numerical range has empty interior (width {0:.3e})")]
    EmptyInterior(f64),
    #[error("quotient element is not real positive (min Re {0:.3e})")]
    NotQuotientRealPositive(f64),
    #[error("gallery claim failed in {case}: {claim} (margin {margin:.3e})")]
    ClaimFailed { case: String, claim: String, margin: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
