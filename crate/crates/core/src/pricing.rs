//! Stage-2 access-fee equilibria for a fixed allocation, and a grid-scan
//! unilateral-deviation check that certifies them.

use crate::model::{
    hotelling_split, outside_demand, transport_costs, Allocation, PriceProfile, SubscriptionSplit, TransportCosts,
};
use crate::search::linspace;
use crate::{Error, MarketParams, Result, EXACT_TOL};

/// Which stage-2 equilibrium branch produced the fees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PricingRegime {
    /// Both providers keep part of the pool (`|Δ| < 1`).
    Interior,
    /// `SP_L` serves the whole pool (`Δ >= 1`).
    CornerLWins,
    /// `SP_F` serves the whole pool (`Δ <= -1`).
    CornerFWins,
    /// The extra interior equilibrium that exists at `Δ = 1`.
    InteriorAtDeltaOne,
}

impl PricingRegime {
    /// Stable identifier used in CSV output.
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Interior => "interior",
            Self::CornerLWins => "corner_L_wins",
            Self::CornerFWins => "corner_F_wins",
            Self::InteriorAtDeltaOne => "interior_at_delta_1",
        }
    }
}

/// Fees and the resulting common-pool split.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PricingOutcome {
    /// Equilibrium access fees.
    pub prices: PriceProfile,
    /// Common-pool split at those fees.
    pub split: SubscriptionSplit,
    /// Branch.
    pub regime: PricingRegime,
}

/// Point picked inside a corner price interval (which the corner
/// equilibrium leaves undetermined).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PriceSelection {
    /// Lower end of the interval.
    Lower,
    /// Upper end (revenue-maximal for the serving provider).
    Upper,
    /// Midpoint.
    Midpoint,
    /// An explicit value, which must lie in the interval.
    At(f64),
}

/// How the serving provider's fee relates to the rival's when `Δ <= -1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NegativeCornerRule {
    /// `p_l = p_f + Δ - 1` with `p_f ∈ [c + 1, c - Δ - 1]`.
    #[default]
    OffsetByOne,
    /// Mirror image of the `Δ >= 1` corner: `p_l = p_f + Δ` with
    /// `p_f ∈ [c + 1, c - Δ]`. This is the variant that survives the
    /// unilateral-deviation scan under the hotelling split.
    Mirrored,
}

/// Selection plus `Δ <= -1` convention.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CornerPolicy {
    /// Point inside the interval.
    pub selection: PriceSelection,
    /// Convention for `Δ <= -1`.
    pub rule: NegativeCornerRule,
}

impl Default for CornerPolicy {
    fn default() -> Self {
        Self { selection: PriceSelection::Upper, rule: NegativeCornerRule::OffsetByOne }
    }
}

impl From<PriceSelection> for CornerPolicy {
    fn from(selection: PriceSelection) -> Self {
        Self { selection, ..Self::default() }
    }
}

/// Closed-form interior equilibrium for `|Δ| < 1`.
pub fn interior_prices(alloc: &Allocation, params: &MarketParams) -> Result<PricingOutcome> {
    let delta = params.delta();
    if delta.abs() >= 1.0 {
        return Err(Error::Regime { delta, reason: "interior pricing needs |Δ| < 1" });
    }
    let t = transport_costs(alloc)?.t_l;
    let n_l = 2.0 / 3.0 - t / 3.0 + delta / 3.0;
    let n_f = 1.0 / 3.0 + t / 3.0 - delta / 3.0;
    Ok(PricingOutcome {
        prices: PriceProfile::new(params.c + n_l, params.c + n_f),
        split: SubscriptionSplit { n_l, n_f, x0: n_l },
        regime: PricingRegime::Interior,
    })
}

/// Admissible interval of the serving provider's fee for `|Δ| >= 1`,
/// as `(lower, upper)`.
///
/// For `-2 < Δ <= -1` under [`NegativeCornerRule::OffsetByOne`] the
/// endpoints come out reversed (`lower > upper`); the presets still pick
/// the named endpoint.
pub fn corner_interval(params: &MarketParams, rule: NegativeCornerRule) -> Result<(f64, f64)> {
    let (c, delta) = (params.c, params.delta());
    if delta >= 1.0 {
        Ok((c + 1.0, c + delta))
    } else if delta <= -1.0 {
        match rule {
            NegativeCornerRule::OffsetByOne => Ok((c + 1.0, c - delta - 1.0)),
            NegativeCornerRule::Mirrored => Ok((c + 1.0, c - delta)),
        }
    } else {
        Err(Error::Regime { delta, reason: "corner pricing needs |Δ| >= 1" })
    }
}

fn select(selection: PriceSelection, lo: f64, hi: f64) -> Result<f64> {
    match selection {
        PriceSelection::Lower => Ok(lo),
        PriceSelection::Upper => Ok(hi),
        PriceSelection::Midpoint => Ok(0.5 * (lo + hi)),
        PriceSelection::At(v) => {
            let (a, b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
            if v.is_finite() && v >= a - EXACT_TOL && v <= b + EXACT_TOL {
                Ok(v)
            } else {
                Err(Error::InvalidSelection { value: v, lo: a, hi: b })
            }
        }
    }
}

/// Corner equilibrium for `|Δ| >= 1`: one provider serves the whole pool.
pub fn corner_prices(params: &MarketParams, policy: impl Into<CornerPolicy>) -> Result<PricingOutcome> {
    let policy = policy.into();
    let delta = params.delta();
    let (lo, hi) = corner_interval(params, policy.rule)?;
    let chosen = select(policy.selection, lo, hi)?;
    if delta >= 1.0 {
        Ok(PricingOutcome {
            prices: PriceProfile::new(chosen, chosen - delta),
            split: SubscriptionSplit { n_l: 1.0, n_f: 0.0, x0: 1.0 },
            regime: PricingRegime::CornerLWins,
        })
    } else {
        let offset = match policy.rule {
            NegativeCornerRule::OffsetByOne => delta - 1.0,
            NegativeCornerRule::Mirrored => delta,
        };
        Ok(PricingOutcome {
            prices: PriceProfile::new(chosen + offset, chosen),
            split: SubscriptionSplit { n_l: 0.0, n_f: 1.0, x0: 0.0 },
            regime: PricingRegime::CornerFWins,
        })
    }
}

/// The additional interior equilibrium at exactly `Δ = 1`:
/// `p_l - c = n_l = 2/3`, `p_f - c = n_f = 1/3`.
pub fn delta_one_interior_prices(params: &MarketParams) -> Result<PricingOutcome> {
    let delta = params.delta();
    if (delta - 1.0).abs() > EXACT_TOL {
        return Err(Error::Regime { delta, reason: "extra interior branch exists only at Δ = 1" });
    }
    Ok(PricingOutcome {
        prices: PriceProfile::new(params.c + 2.0 / 3.0, params.c + 1.0 / 3.0),
        split: SubscriptionSplit { n_l: 2.0 / 3.0, n_f: 1.0 / 3.0, x0: 2.0 / 3.0 },
        regime: PricingRegime::InteriorAtDeltaOne,
    })
}

/// Interior stage-2 equilibrium of the outside-option game (`Δ = 0`,
/// `i_l < 4/b`).
pub fn outside_stage2_prices(alloc: &Allocation, params: &MarketParams) -> Result<PricingOutcome> {
    let delta = params.delta();
    if delta.abs() > EXACT_TOL {
        return Err(Error::Unsupported("outside-option game is characterised only for Δ = 0"));
    }
    let bound = params.interior_bound();
    if alloc.i_l() >= bound {
        return Err(Error::NonInterior { i_l: alloc.i_l(), bound });
    }
    let TransportCosts { t_l, t_f } = transport_costs(alloc)?;
    let (c, k, b) = (params.c, params.k, params.b);
    let common = 1.0 / 15.0 + 2.0 * c / 3.0 + k / 3.0;
    let p_l = common + t_f / 5.0 - b / 5.0 * alloc.i_f() + 4.0 * b / 15.0 * alloc.i_l();
    let p_f = common + t_l / 5.0 + b / 15.0 * alloc.i_l() + b / 5.0 * alloc.i_f();
    let prices = PriceProfile::new(p_l, p_f);
    let split = hotelling_split(&prices, &TransportCosts { t_l, t_f }, params);
    Ok(PricingOutcome { prices, split, regime: PricingRegime::Interior })
}

/// Which stage-3 demand the deviation scan uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeviationMode {
    /// Common pool only.
    Base,
    /// Common pool plus outside option and exclusive bases.
    Outside,
}

/// Candidate fees for the deviation scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PriceGrid {
    /// Lowest probed fee.
    pub lo: f64,
    /// Highest probed fee.
    pub hi: f64,
    /// Number of probes (>= 2).
    pub points: usize,
}

impl PriceGrid {
    /// The default probe window `[c - 1, c + 3]` with `points` probes.
    pub fn around_cost(params: &MarketParams, points: usize) -> Self {
        Self { lo: params.c - 1.0, hi: params.c + 3.0, points }
    }
}

/// Which provider moves in a deviation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mover {
    Leader,
    Follower,
}

fn revenue(
    mover: Mover,
    prices: &PriceProfile,
    alloc: &Allocation,
    t: &TransportCosts,
    params: &MarketParams,
    mode: DeviationMode,
) -> f64 {
    let split = hotelling_split(prices, t, params);
    let (n_l, n_f) = match mode {
        DeviationMode::Base => (split.n_l, split.n_f),
        DeviationMode::Outside => {
            // nobody subscribes at negative demand
            let d = outside_demand(prices, alloc, &split, params);
            (d.n_tilde_l.max(0.0), d.n_tilde_f.max(0.0))
        }
    };
    match mover {
        Mover::Leader => n_l * (prices.p_l - params.c),
        Mover::Follower => n_f * (prices.p_f - params.c),
    }
}

/// Largest payoff gain either provider can obtain by moving its own fee to
/// a grid point while the rival's fee, the allocation and the money flows
/// stay fixed. Flows and spectrum costs do not depend on fees, so only
/// subscription revenue enters. A value `<= tolerance` certifies the fees
/// as a stage-2 equilibrium up to the grid resolution.
pub fn best_response_check(
    prices: &PriceProfile,
    alloc: &Allocation,
    params: &MarketParams,
    mode: DeviationMode,
    grid: &PriceGrid,
) -> Result<f64> {
    if grid.points < 2 || !(grid.lo < grid.hi) {
        return Err(Error::InvalidGrid("price grid needs >= 2 points and lo < hi"));
    }
    let t = transport_costs(alloc)?;
    let mut gain = f64::NEG_INFINITY;
    for mover in [Mover::Leader, Mover::Follower] {
        let current = revenue(mover, prices, alloc, &t, params, mode);
        for p in linspace(grid.lo, grid.hi, grid.points) {
            let probe = match mover {
                Mover::Leader => PriceProfile::new(p, prices.p_f),
                Mover::Follower => PriceProfile::new(prices.p_l, p),
            };
            gain = gain.max(revenue(mover, &probe, alloc, &t, params, mode) - current);
        }
    }
    Ok(gain)
}
