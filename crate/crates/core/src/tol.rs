//! Default tolerances, gathered in one place.
//!
//! Operations that accept a tolerance argument take it explicitly; everything
//! else reads from [`Tolerances::DEFAULT`].

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Associativity and homomorphism checks on structure constants.
    pub structure: f64,
    /// Relative singular-value threshold below which a matrix is singular.
    pub singular_rel: f64,
    /// Residual allowed when verifying an inverse.
    pub inverse_check: f64,
    /// Relative rank threshold for ideal bases.
    pub ideal_rank: f64,
    /// Relative rank threshold when comparing spans.
    pub span_rank: f64,
    /// Cone membership slack.
    pub cone: f64,
    /// Relative convergence tolerance for power iteration.
    pub power_iteration: f64,
    /// Error estimate above which the abscissa extrapolation is rejected.
    pub abscissa: f64,
    /// Default tolerance for fractional powers.
    pub power: f64,
    /// Defect bound for idempotents, identities and similar exact claims.
    pub idempotent: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        structure: 1e-12,
        singular_rel: 1e-12,
        inverse_check: 1e-10,
        ideal_rank: 1e-10,
        span_rank: 1e-9,
        cone: 1e-7,
        power_iteration: 1e-10,
        abscissa: 1e-5,
        power: 1e-12,
        idempotent: 1e-7,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
