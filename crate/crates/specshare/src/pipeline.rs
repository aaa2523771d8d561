//! One parameter point end to end: disagreement point, then the
//! equilibrium-type solutions of the chosen game.

use specshare_core::bargaining::{solve_base, solve_corner, BargainingOutcome};
use specshare_core::disagreement::{
    solve_base_disagreement, solve_outside_disagreement, DisagreementConfig, DisagreementOutcome,
};
use specshare_core::model::DisagreementPoint;
use specshare_core::outside::solve_outside;
use specshare_core::{Error, MarketParams};

use crate::config::{Mode, RunConfig};

/// Result of evaluating one point.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    /// Game.
    pub mode: Mode,
    /// Constants used.
    pub params: MarketParams,
    /// Disagreement point used.
    pub d: DisagreementPoint,
    /// Non-cooperative outcome behind `d` (absent for overrides).
    pub d_outcome: Option<DisagreementOutcome>,
    /// Solutions, `Err(UnboundedObjective)` when the outside objective has
    /// no maximiser, other solver errors as is.
    pub outcome: Result<BargainingOutcome, Error>,
}

/// Disagreement config derived from a run config.
pub fn disagreement_config(cfg: &RunConfig) -> DisagreementConfig {
    DisagreementConfig {
        points: cfg.disagreement_points,
        policy: cfg.policy,
        ..DisagreementConfig::for_params(&cfg.params)
    }
}

/// Disagreement point for `cfg` (override or solver).
pub fn disagreement(cfg: &RunConfig) -> Result<(DisagreementPoint, Option<DisagreementOutcome>), Error> {
    if let Some((d_l, d_f)) = cfg.d_override {
        return Ok((DisagreementPoint::user(d_l, d_f), None));
    }
    let dcfg = disagreement_config(cfg);
    let o = match cfg.mode {
        Mode::Base => solve_base_disagreement(&cfg.params, &dcfg)?,
        Mode::Outside => solve_outside_disagreement(&cfg.params, &dcfg)?,
    };
    Ok((o.point, Some(o)))
}

/// Evaluates one point. Errors in the disagreement stage are returned as
/// `Err`; errors in the bargaining stage end up in `outcome`.
pub fn evaluate(cfg: &RunConfig) -> Result<Evaluation, Error> {
    cfg.params.validate()?;
    let (d, d_outcome) = disagreement(cfg)?;
    let p = &cfg.params;
    let outcome = match cfg.mode {
        Mode::Base if p.delta().abs() < 1.0 => solve_base(p, &d),
        Mode::Base => solve_corner(p, &d, cfg.policy, None),
        Mode::Outside => solve_outside(p, &d),
    };
    Ok(Evaluation { mode: cfg.mode, params: *p, d, d_outcome, outcome })
}
