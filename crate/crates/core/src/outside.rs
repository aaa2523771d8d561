//! Bargaining with an outside option and exclusive customer bases (`Δ = 0`).
//!
//! Aggregate excess profit is convex in `I_F`, so the optimum puts
//! `I_F` at `0` or `I_L` with the same value. What remains is a quadratic
//! in `I_L`:
//!
//! `h(I) = 2α g(I)² + 2α (f(I) I + g(I))² - γ I²`
//!
//! with `f(I) = 1/(5I) + b/5` and `g(I) = bI/15 + 1/15 - c/3 + k/3`.

use crate::bargaining::{
    money_flows, nbs_split, BargainingOutcome, EquilibriumSolution, ExistenceReport, SolutionRegime,
};
use crate::model::{outside_demand, Allocation, DisagreementPoint, OutsideSubscriptions, PriceProfile};
use crate::pricing::outside_stage2_prices;
use crate::search::golden_section_max;
use crate::{Error, MarketParams, Result, EXACT_TOL};

/// `f(I_L)` and `g(I_L)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutsideAux {
    /// `1/(5 I_L) + b/5`.
    pub f_val: f64,
    /// `b I_L/15 + 1/15 - c/3 + k/3`.
    pub g_val: f64,
}

impl OutsideAux {
    /// `(f_val, g_val)`.
    pub fn into_pair(self) -> (f64, f64) {
        (self.f_val, self.g_val)
    }
}

/// Evaluates `f` and `g` at `i_l > 0`.
pub fn outside_aux(i_l: f64, params: &MarketParams) -> OutsideAux {
    let (b, c, k) = (params.b, params.c, params.k);
    OutsideAux { f_val: 1.0 / (5.0 * i_l) + b / 5.0, g_val: b * i_l / 15.0 + 1.0 / 15.0 - c / 3.0 + k / 3.0 }
}

/// The objective `h(i_l)`.
pub fn outside_objective(i_l: f64, params: &MarketParams) -> f64 {
    let OutsideAux { f_val: f, g_val: g } = outside_aux(i_l, params);
    let a = params.alpha;
    2.0 * a * g * g + 2.0 * a * (f * i_l + g) * (f * i_l + g) - params.gamma * i_l * i_l
}

/// Coefficients `(A, B, C)` of `h(I) = A I² + B I + C`.
pub fn objective_coefficients(params: &MarketParams) -> (f64, f64, f64) {
    let (a, b) = (params.alpha, params.b);
    let g0 = 1.0 / 15.0 - params.c / 3.0 + params.k / 3.0;
    let g1 = 0.2 + g0;
    let lead = 2.0 * a * 17.0 * b * b / 225.0 - params.gamma;
    let lin = 4.0 * a * b * (g0 + 4.0 * g1) / 15.0;
    let cst = 2.0 * a * (g0 * g0 + g1 * g1);
    (lead, lin, cst)
}

/// Result of maximising `h` over `[L0, M]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OutsideOptimum {
    /// A maximiser exists.
    Bounded {
        /// Argmax.
        i_l: f64,
        /// `h` at the argmax.
        value: f64,
    },
    /// `h` grows without bound and no cap is set.
    Unbounded,
}

impl OutsideOptimum {
    /// `(i_l, value)` when bounded.
    pub fn bounded(&self) -> Option<(f64, f64)> {
        match *self {
            Self::Bounded { i_l, value } => Some((i_l, value)),
            Self::Unbounded => None,
        }
    }
}

/// Maximises `h` over `L0 <= i_l <= M` in closed form.
///
/// With `M` unbounded the problem has no maximiser when `A > 0`, or when
/// `A = 0` and `B > 0`.
pub fn maximize_outside_objective(params: &MarketParams) -> Result<OutsideOptimum> {
    if !(params.l0 > 0.0) {
        return Err(Error::InvalidParam { name: "l0", reason: "must be > 0" });
    }
    let (lead, lin, _) = objective_coefficients(params);
    let (lo, hi) = (params.l0, params.spectrum_cap());
    let at = |i_l: f64| OutsideOptimum::Bounded { i_l, value: outside_objective(i_l, params) };
    if lead < 0.0 {
        return Ok(at((-lin / (2.0 * lead)).clamp(lo, hi)));
    }
    if hi.is_infinite() {
        if lead > 0.0 || lin > 0.0 {
            return Ok(OutsideOptimum::Unbounded);
        }
        return Ok(at(lo));
    }
    // convex or linear: an endpoint wins, ties to L0
    if outside_objective(hi, params) > outside_objective(lo, params) {
        Ok(at(hi))
    } else {
        Ok(at(lo))
    }
}

/// Golden-section maximisation of `h` over `[L0, upper]`; an independent
/// check on the closed form.
pub fn maximize_outside_objective_search(params: &MarketParams, upper: f64) -> Result<(f64, f64)> {
    let m = golden_section_max(|x| outside_objective(x, params), params.l0, upper, 1e-12, 500)?;
    Ok((m.x, m.value))
}

/// Aggregate excess profit of the outside-option game, expanded:
/// `4αf² I_F² - 4αf² I_L I_F + 2αg² + 2α(f I_L + g)² - γ I_L² - d`.
pub fn outside_u_excess(alloc: &Allocation, params: &MarketParams, d: &DisagreementPoint) -> Result<f64> {
    if params.delta().abs() > EXACT_TOL {
        return Err(Error::Unsupported("outside-option game is characterised only for Δ = 0"));
    }
    if alloc.i_l() <= 0.0 {
        return Err(Error::DegenerateAllocation);
    }
    Ok(outside_u_excess_raw(alloc.i_l(), alloc.i_f(), params) - d.total())
}

/// The expansion evaluated at any real `i_f` (no feasibility check).
pub fn outside_u_excess_raw(i_l: f64, i_f: f64, params: &MarketParams) -> f64 {
    let OutsideAux { f_val: f, g_val: g } = outside_aux(i_l, params);
    let a = params.alpha;
    4.0 * a * f * f * i_f * i_f - 4.0 * a * f * f * i_l * i_f
        + 2.0 * a * g * g
        + 2.0 * a * (f * i_l + g) * (f * i_l + g)
        - params.gamma * i_l * i_l
}

/// Fees of the first equilibrium as printed in closed form:
/// `p_l = 1/15 + 2c/3 + k/3 + bI/15`, `p_f = 4/15 + 2c/3 + k/3 + 4bI/15`.
/// The second equilibrium swaps them.
pub fn closed_form_prices(i_l: f64, params: &MarketParams) -> PriceProfile {
    let (b, c, k) = (params.b, params.c, params.k);
    let base = 2.0 * c / 3.0 + k / 3.0;
    PriceProfile::new(1.0 / 15.0 + base + b * i_l / 15.0, 4.0 / 15.0 + base + 4.0 * b * i_l / 15.0)
}

/// Subscription levels of the first equilibrium as printed in closed form.
/// These carry no `α`; they agree with the demand functions at `α = 1`.
pub fn closed_form_subscriptions(i_l: f64, params: &MarketParams) -> OutsideSubscriptions {
    let (b, c, k) = (params.b, params.c, params.k);
    OutsideSubscriptions {
        n_tilde_l: 2.0 / 15.0 + 2.0 * k / 3.0 + 2.0 * b * i_l / 15.0 - 2.0 * c / 3.0,
        n_tilde_f: 8.0 / 15.0 + 2.0 * k / 3.0 - 2.0 * c / 3.0 + 8.0 * b * i_l / 15.0,
    }
}

fn outside_solution(
    i_l: f64,
    i_f: f64,
    u_star: f64,
    params: &MarketParams,
    d: &DisagreementPoint,
) -> Result<EquilibriumSolution> {
    let alloc = Allocation::new(i_l, i_f)?;
    let o = outside_stage2_prices(&alloc, params)?;
    let demand = outside_demand(&o.prices, &alloc, &o.split, params);
    let revenue_f = demand.n_tilde_f * (o.prices.p_f - params.c);
    Ok(EquilibriumSolution {
        alloc,
        flows: money_flows(i_f, revenue_f, d.d_f, params.w, u_star),
        prices: o.prices,
        split: o.split,
        demand: Some(demand),
        payoffs: nbs_split(u_star, d, params.w),
        disagreement: *d,
        u_excess_star: u_star,
        regime: SolutionRegime::OutsideInterior,
    })
}

/// Equilibrium-type solutions of the outside-option game.
///
/// They exist iff `h(i*) >= d_l + d_f` and `i* < 4/b`; then there are two,
/// sharing `i*`: first with `I_F = i*`, then with `I_F = 0`.
pub fn solve_outside(params: &MarketParams, d: &DisagreementPoint) -> Result<BargainingOutcome> {
    params.validate()?;
    if params.delta().abs() > EXACT_TOL {
        return Err(Error::Unsupported("outside-option game is characterised only for Δ = 0"));
    }
    let (i_star, pi_star) = maximize_outside_objective(params)?.bounded().ok_or(Error::UnboundedObjective)?;
    let interior = i_star < params.interior_bound();
    let margin = pi_star - d.total();
    let report = ExistenceReport { pi_star, d: d.total(), margin, interior, exists: margin >= 0.0 && interior };
    let mut solutions = alloc::vec::Vec::new();
    if report.exists {
        for i_f in [i_star, 0.0] {
            solutions.push(outside_solution(i_star, i_f, margin, params, d)?);
        }
    }
    Ok(BargainingOutcome { solutions, report })
}
