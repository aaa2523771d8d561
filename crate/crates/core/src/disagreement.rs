//! Disagreement payoffs: the subgame-perfect outcome of the fully
//! non-cooperative sequential game in which `SP_L` leases first, `SP_F`
//! then reserves part of it at the market fee, and fees are set last.
//!
//! Corner regimes (`|Δ| >= 1`) use closed forms. Elsewhere the game is
//! solved by backward induction: the follower's best response is exact
//! (its payoff is quadratic in `I_F`), the leader's choice is found by a
//! grid scan plus step-halving refinement.

use crate::model::{
    base_payoffs, outside_demand, outside_payoffs, Allocation, DisagreementPoint, MoneyFlows, OutsideSubscriptions,
    PayoffPair, PriceProfile, Provenance, ReservationFee,
};
use crate::pricing::{corner_prices, interior_prices, outside_stage2_prices, CornerPolicy};
use crate::search::{grid_refine_max, linspace};
use crate::{Error, MarketParams, Result, EXACT_TOL};

/// Search settings for the leader's stage-1 choice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisagreementConfig {
    /// Lower end of the `I_L` search range; must be `>= delta_part1`.
    pub i_l_lo: f64,
    /// Upper end of the `I_L` search range.
    pub i_l_hi: f64,
    /// Grid points over `[i_l_lo, i_l_hi]`.
    pub points: usize,
    /// Step-halving passes around the best grid point.
    pub passes: u32,
    /// Largest acceptable final step.
    pub tolerance: f64,
    /// Fee selection used by the corner closed forms.
    pub policy: CornerPolicy,
}

impl DisagreementConfig {
    /// Default search over `[delta_part1, 5]` with `10^4` points and 40
    /// refinement passes.
    pub fn for_params(params: &MarketParams) -> Self {
        Self {
            i_l_lo: params.delta_part1,
            i_l_hi: 5.0,
            points: 10_000,
            passes: 40,
            tolerance: 1e-9,
            policy: CornerPolicy::default(),
        }
    }

    /// Checks the config against `params`.
    pub fn validate(&self, params: &MarketParams) -> Result<()> {
        if !(self.i_l_lo >= params.delta_part1) {
            return Err(Error::InvalidGrid("i_l_lo must be >= delta_part1"));
        }
        if !(self.i_l_hi > self.i_l_lo) || !self.i_l_hi.is_finite() {
            return Err(Error::InvalidGrid("i_l_hi must be finite and > i_l_lo"));
        }
        if self.points < 2 {
            return Err(Error::InvalidGrid("need at least two points"));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidGrid("tolerance must be > 0"));
        }
        Ok(())
    }
}

/// Disagreement point plus the non-cooperative outcome behind it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisagreementOutcome {
    /// `(d_l, d_f)` and provenance.
    pub point: DisagreementPoint,
    /// Spectrum choices in the non-cooperative game.
    pub alloc: Allocation,
    /// Fees in the non-cooperative game.
    pub prices: PriceProfile,
}

#[derive(Debug, Clone, Copy)]
struct Stage1 {
    alloc: Allocation,
    prices: PriceProfile,
    payoffs: PayoffPair,
}

fn market_flows(params: &MarketParams) -> MoneyFlows {
    MoneyFlows { s_tilde: ReservationFee::Fee(params.s_market), theta: 0.0 }
}

fn base_stage1(i_l: f64, i_f: f64, params: &MarketParams) -> Result<Stage1> {
    let alloc = Allocation::new(i_l, i_f)?;
    let o = interior_prices(&alloc, params)?;
    let payoffs = base_payoffs(&alloc, &o.prices, &o.split, &market_flows(params), params)?;
    Ok(Stage1 { alloc, prices: o.prices, payoffs })
}

fn outside_stage1(i_l: f64, i_f: f64, params: &MarketParams) -> Result<Stage1> {
    let alloc = Allocation::new(i_l, i_f)?;
    let o = outside_stage2_prices(&alloc, params)?;
    let demand: OutsideSubscriptions = outside_demand(&o.prices, &alloc, &o.split, params);
    let payoffs = outside_payoffs(&alloc, &o.prices, &demand, &market_flows(params), params)?;
    Ok(Stage1 { alloc, prices: o.prices, payoffs })
}

/// Follower's best response among `0`, `i_l` and the clamped stationary
/// point. Ties go to the earlier candidate.
fn follower_best<F>(i_l: f64, vertex: Option<f64>, stage: F) -> Result<Stage1>
where
    F: Fn(f64) -> Result<Stage1>,
{
    let mut best = stage(0.0)?;
    for x in [Some(i_l), vertex.map(|v| v.clamp(0.0, i_l))].into_iter().flatten() {
        let cand = stage(x)?;
        if cand.payoffs.pi_f > best.payoffs.pi_f {
            best = cand;
        }
    }
    Ok(best)
}

fn base_follower(i_l: f64, params: &MarketParams) -> Result<Stage1> {
    // π_F(t) = ((1 - Δ + t)/3)² - s t² I_L², t = I_F / I_L
    let curv = 9.0 * params.s_market * i_l * i_l - 1.0;
    let vertex = (curv > 0.0).then(|| (1.0 - params.delta()) / curv * i_l);
    follower_best(i_l, vertex, |x| base_stage1(i_l, x, params))
}

fn outside_follower(i_l: f64, params: &MarketParams) -> Result<Stage1> {
    // π_F(x) = 2α (g + f x)² - s x²
    let (f, g) = crate::outside::outside_aux(i_l, params).into_pair();
    let denom = params.s_market - 2.0 * params.alpha * f * f;
    let vertex = (denom > 0.0).then(|| 2.0 * params.alpha * f * g / denom);
    follower_best(i_l, vertex, |x| outside_stage1(i_l, x, params))
}

fn backward_induction<F>(lo: f64, hi: f64, cfg: &DisagreementConfig, follower: F) -> Result<Stage1>
where
    F: Fn(f64) -> Result<Stage1>,
{
    let leader = |i_l: f64| follower(i_l).map_or(f64::NEG_INFINITY, |s| s.payoffs.pi_l);
    let m = grid_refine_max(leader, lo, hi, cfg.points, cfg.passes)?;
    if m.step > cfg.tolerance {
        return Err(Error::Resolution { step: m.step, tolerance: cfg.tolerance, at: m.x });
    }
    if !m.value.is_finite() {
        return Err(Error::Infeasible("no admissible leader choice in the search range"));
    }
    follower(m.x)
}

/// Disagreement point of the base game.
pub fn solve_base_disagreement(params: &MarketParams, cfg: &DisagreementConfig) -> Result<DisagreementOutcome> {
    params.validate()?;
    cfg.validate(params)?;
    let delta = params.delta();
    if delta.abs() >= 1.0 {
        return corner_disagreement(params, cfg.policy);
    }
    let s = backward_induction(cfg.i_l_lo, cfg.i_l_hi, cfg, |i_l| base_follower(i_l, params))?;
    Ok(DisagreementOutcome {
        point: DisagreementPoint { d_l: s.payoffs.pi_l, d_f: s.payoffs.pi_f, provenance: Provenance::NumericalPart1 },
        alloc: s.alloc,
        prices: s.prices,
    })
}

/// Closed-form disagreement point for `|Δ| >= 1`.
///
/// `Δ >= 1`: `SP_L` leases `δ` and serves everyone, `d_f = 0`,
/// `d_l = p_l - c - γδ²`.
/// `Δ <= -1`: both lease `I' = 1/√(2s)`, `d_f = p_f - c - s I'²`,
/// `d_l = s I'² - γ I'²`.
pub fn corner_disagreement(params: &MarketParams, policy: impl Into<CornerPolicy>) -> Result<DisagreementOutcome> {
    let (s, gamma) = (params.s_market, params.gamma);
    if !(s > gamma) {
        return Err(Error::Precondition("corner disagreement needs s_market > gamma"));
    }
    let o = corner_prices(params, policy)?;
    let c = params.c;
    let (alloc, d_l, d_f) = if params.delta() >= 1.0 {
        let d = params.delta_part1;
        (Allocation::new(d, 0.0)?, o.prices.p_l - c - gamma * d * d, 0.0)
    } else {
        let i = libm::sqrt(1.0 / (2.0 * s));
        // s I'² = 1/2 exactly
        (Allocation::new(i, i)?, 0.5 - gamma / (2.0 * s), o.prices.p_f - c - 0.5)
    };
    Ok(DisagreementOutcome {
        point: DisagreementPoint { d_l, d_f, provenance: Provenance::CornerClosedForm },
        alloc,
        prices: o.prices,
    })
}

/// Disagreement point of the outside-option game (`Δ = 0`). The leader's
/// range is cut just below `4/b` so the stage-2 fees stay interior.
pub fn solve_outside_disagreement(params: &MarketParams, cfg: &DisagreementConfig) -> Result<DisagreementOutcome> {
    params.validate()?;
    cfg.validate(params)?;
    if params.delta().abs() > EXACT_TOL {
        return Err(Error::Unsupported("outside-option game is characterised only for Δ = 0"));
    }
    let bound = params.interior_bound();
    let hi = if cfg.i_l_hi < bound { cfg.i_l_hi } else { bound * (1.0 - 1e-12) };
    if !(hi > cfg.i_l_lo) {
        return Err(Error::Infeasible("search range lies outside the interior region i_l < 4/b"));
    }
    let s = backward_induction(cfg.i_l_lo, hi, cfg, |i_l| outside_follower(i_l, params))?;
    Ok(DisagreementOutcome {
        point: DisagreementPoint { d_l: s.payoffs.pi_l, d_f: s.payoffs.pi_f, provenance: Provenance::NumericalPart1 },
        alloc: s.alloc,
        prices: s.prices,
    })
}

/// Market reservation fee on `[lo, hi]` (grid of `points`) maximising the
/// total disagreement payoff `d_l + d_f` of the base game. Returns
/// `(s, d_total)`; ties go to the smaller fee.
pub fn disagreement_maximizing_fee(
    params: &MarketParams,
    cfg: &DisagreementConfig,
    lo: f64,
    hi: f64,
    points: usize,
) -> Result<(f64, f64)> {
    if points < 2 || !(lo > 0.0 && hi > lo) {
        return Err(Error::InvalidGrid("fee grid needs >= 2 points and 0 < lo < hi"));
    }
    let mut best = (lo, f64::NEG_INFINITY);
    for s in linspace(lo, hi, points) {
        let p = MarketParams { s_market: s, ..*params };
        let d = solve_base_disagreement(&p, cfg)?.point.total();
        if d > best.1 {
            best = (s, d);
        }
    }
    Ok(best)
}
