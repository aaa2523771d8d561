use thiserror::Error;

/// Errors produced by the solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A market parameter violates its domain.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParam {
        /// Parameter key.
        name: &'static str,
        /// What is wrong with it.
        reason: &'static str,
    },
    /// `i_l = 0` leaves the transport costs undefined.
    #[error("degenerate allocation: i_l must be positive")]
    DegenerateAllocation,
    /// The allocation breaks `0 <= i_f <= i_l` or the `[L0, M]` bounds.
    #[error("infeasible allocation (i_l = {i_l}, i_f = {i_f}): {reason}")]
    InfeasibleAllocation {
        /// Spectrum leased by `SP_L`.
        i_l: f64,
        /// Spectrum used by `SP_F`.
        i_f: f64,
        /// Which bound failed.
        reason: &'static str,
    },
    /// A reservation fee is required because `i_f > 0`, but none was given.
    #[error("reservation fee marked not significant while i_f = {i_f} > 0")]
    FlowSpecification {
        /// Spectrum used by `SP_F`.
        i_f: f64,
    },
    /// The operation does not cover the preference gap of the parameters.
    #[error("wrong regime for Δ = {delta}: {reason}")]
    Regime {
        /// Preference gap `v_l - v_f`.
        delta: f64,
        /// Expected regime.
        reason: &'static str,
    },
    /// An explicit corner price lies outside its admissible interval.
    #[error("price selection {value} outside admissible interval [{lo}, {hi}]")]
    InvalidSelection {
        /// Requested price.
        value: f64,
        /// Interval lower end.
        lo: f64,
        /// Interval upper end.
        hi: f64,
    },
    /// The outside-option stage-2 equilibrium is not interior.
    #[error("i_l = {i_l} is not below the interior bound 4/b = {bound}")]
    NonInterior {
        /// Spectrum leased by `SP_L`.
        i_l: f64,
        /// The bound `4/b`.
        bound: f64,
    },
    /// A stated precondition of the operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(&'static str),
    /// Numerical refinement did not reach the requested resolution.
    #[error("refinement stopped at step {step:e} (> tolerance {tolerance:e}) near x = {at}")]
    Resolution {
        /// Final local step.
        step: f64,
        /// Required resolution.
        tolerance: f64,
        /// Best point found.
        at: f64,
    },
    /// The search region is empty.
    #[error("empty feasible region: {0}")]
    Infeasible(&'static str),
    /// The spectrum objective grows without bound and no cap `M` is set.
    #[error("objective is unbounded above on [L0, inf); set m_cap")]
    UnboundedObjective,
    /// The case is outside what the model characterises.
    #[error("unsupported: {0}")]
    Unsupported(&'static str),
    /// A grid specification is malformed.
    #[error("invalid grid: {0}")]
    InvalidGrid(&'static str),
}

/// Result alias for this crate.
pub type Result<T> = core::result::Result<T, Error>;
