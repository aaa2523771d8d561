//! Stage-1 Nash bargaining over spectrum and money flows.
//!
//! The providers jointly pick `(I_L, I_F)` to maximise the aggregate excess
//! profit `u_excess`, then split it by bargaining power `w` through the
//! reservation fee `s̃` or the lump sum `θ`.

use alloc::vec::Vec;

use crate::model::{
    Allocation, DisagreementPoint, MoneyFlows, OutsideSubscriptions, PayoffPair, PriceProfile, ReservationFee,
    SubscriptionSplit,
};
use crate::pricing::{corner_prices, interior_prices, CornerPolicy};
use crate::{Error, MarketParams, Result};

/// Which family a solution belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolutionRegime {
    /// Base game, `|Δ| < 1`.
    BaseInterior,
    /// Base game, `|Δ| >= 1`.
    BaseCorner,
    /// Outside-option game.
    OutsideInterior,
}

impl SolutionRegime {
    /// Stable identifier used in CSV output.
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::BaseInterior => "base_interior",
            Self::BaseCorner => "base_corner",
            Self::OutsideInterior => "outside_interior",
        }
    }
}

/// One equilibrium-type solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumSolution {
    /// Spectrum choices.
    pub alloc: Allocation,
    /// Reservation fee and lump sum.
    pub flows: MoneyFlows,
    /// Access fees.
    pub prices: PriceProfile,
    /// Common-pool split.
    pub split: SubscriptionSplit,
    /// Demand-adjusted levels (outside-option game only).
    pub demand: Option<OutsideSubscriptions>,
    /// NBS payoffs.
    pub payoffs: PayoffPair,
    /// Disagreement point used.
    pub disagreement: DisagreementPoint,
    /// Aggregate excess profit at the solution.
    pub u_excess_star: f64,
    /// Family.
    pub regime: SolutionRegime,
}

/// Existence test: solutions exist iff `margin >= 0` and `interior`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExistenceReport {
    /// Total payoff of the candidate allocation.
    pub pi_star: f64,
    /// `d_l + d_f`.
    pub d: f64,
    /// `pi_star - d`.
    pub margin: f64,
    /// Whether the candidate respects the regime's interior condition
    /// (always `true` in the base game).
    pub interior: bool,
    /// Verdict.
    pub exists: bool,
}

impl ExistenceReport {
    fn base(pi_star: f64, d: f64) -> Self {
        let margin = pi_star - d;
        Self { pi_star, d, margin, interior: true, exists: margin >= 0.0 }
    }
}

/// Solutions (possibly none) and the existence report.
#[derive(Debug, Clone, PartialEq)]
pub struct BargainingOutcome {
    /// Solutions in deterministic order.
    pub solutions: Vec<EquilibriumSolution>,
    /// Existence test.
    pub report: ExistenceReport,
}

/// Aggregate excess profit of the base game for `|Δ| < 1`:
/// `((Δ+2-t)/3)² + ((1-Δ+t)/3)² - γ I_L² - d_l - d_f`, `t = I_F/I_L`.
pub fn u_excess(alloc: &Allocation, params: &MarketParams, d: &DisagreementPoint) -> Result<f64> {
    let delta = params.delta();
    if delta.abs() >= 1.0 {
        return Err(Error::Regime { delta, reason: "u_excess expansion needs |Δ| < 1" });
    }
    if alloc.i_l() <= 0.0 {
        return Err(Error::DegenerateAllocation);
    }
    let t = alloc.ratio();
    let n_l = (delta + 2.0 - t) / 3.0;
    let n_f = (1.0 - delta + t) / 3.0;
    Ok(n_l * n_l + n_f * n_f - params.gamma * alloc.i_l() * alloc.i_l() - d.total())
}

/// NBS split: `pi_l = (1-w) u + d_l`, `pi_f = w u + d_f`.
pub fn nbs_split(u_star: f64, d: &DisagreementPoint, w: f64) -> PayoffPair {
    PayoffPair { pi_l: (1.0 - w) * u_star + d.d_l, pi_f: w * u_star + d.d_f }
}

/// Flows implementing the split. With `i_f > 0` only the reservation fee
/// is used (`θ = 0`); with `i_f = 0` the fee is meaningless and `θ`
/// carries the transfer.
pub fn money_flows(i_f: f64, follower_revenue: f64, d_f: f64, w: f64, u_star: f64) -> MoneyFlows {
    if i_f > 0.0 {
        MoneyFlows { s_tilde: ReservationFee::Fee((follower_revenue - d_f - w * u_star) / (i_f * i_f)), theta: 0.0 }
    } else {
        MoneyFlows { s_tilde: ReservationFee::NotSignificant, theta: d_f + w * u_star - follower_revenue }
    }
}

/// Total equilibrium payoff of the base game:
/// `(1/3 - |Δ|/3)² + (2/3 + |Δ|/3)² - γ L0²`.
pub fn total_base_payoff(delta: f64, gamma: f64, l0: f64) -> f64 {
    let a = delta.abs() / 3.0;
    (1.0 / 3.0 - a) * (1.0 / 3.0 - a) + (2.0 / 3.0 + a) * (2.0 / 3.0 + a) - gamma * l0 * l0
}

/// Spectrum delivered per unit access fee, `I_F/p_F + (I_L - I_F)/p_L`.
pub fn resource_cost(alloc: &Allocation, prices: &PriceProfile) -> f64 {
    alloc.i_f() / prices.p_f + (alloc.i_l() - alloc.i_f()) / prices.p_l
}

/// The resource-cost metric of a solution. Undefined for corner solutions.
pub fn resource_cost_metric(solution: &EquilibriumSolution) -> Result<f64> {
    if solution.regime == SolutionRegime::BaseCorner {
        return Err(Error::Unsupported("resource-cost metric is not defined for corner solutions"));
    }
    Ok(resource_cost(&solution.alloc, &solution.prices))
}

/// Piecewise closed form of the base-game metric for `|Δ| < 1`:
/// `L0 / (c + 2/3 + |Δ|/3)`.
pub fn base_resource_cost(delta: f64, c: f64, l0: f64) -> f64 {
    if delta < 0.0 {
        l0 / (c + 2.0 / 3.0 - delta / 3.0)
    } else if delta > 0.0 {
        l0 / (c + 2.0 / 3.0 + delta / 3.0)
    } else {
        l0 / (c + 2.0 / 3.0)
    }
}

fn assemble(
    alloc: Allocation,
    prices: PriceProfile,
    split: SubscriptionSplit,
    u_star: f64,
    params: &MarketParams,
    d: &DisagreementPoint,
    regime: SolutionRegime,
) -> EquilibriumSolution {
    let revenue_f = split.n_f * (prices.p_f - params.c);
    EquilibriumSolution {
        alloc,
        flows: money_flows(alloc.i_f(), revenue_f, d.d_f, params.w, u_star),
        prices,
        split,
        demand: None,
        payoffs: nbs_split(u_star, d, params.w),
        disagreement: *d,
        u_excess_star: u_star,
        regime,
    }
}

/// Equilibrium-type solutions of the base game for `|Δ| < 1`.
///
/// `I_L = L0` always. `Δ < 0` gives `I_F = L0`, `Δ > 0` gives `I_F = 0`,
/// `Δ = 0` gives both (with `I_F = 0` first).
pub fn solve_base(params: &MarketParams, d: &DisagreementPoint) -> Result<BargainingOutcome> {
    params.validate()?;
    let delta = params.delta();
    if delta.abs() >= 1.0 {
        return Err(Error::Regime { delta, reason: "base solutions need |Δ| < 1" });
    }
    let l0 = params.l0;
    let report = ExistenceReport::base(total_base_payoff(delta, params.gamma, l0), d.total());
    let mut solutions = Vec::new();
    if report.exists {
        let shares: &[f64] = if delta < 0.0 {
            &[l0]
        } else if delta > 0.0 {
            &[0.0]
        } else {
            &[0.0, l0]
        };
        for &i_f in shares {
            let alloc = Allocation::new(l0, i_f)?;
            let o = interior_prices(&alloc, params)?;
            let u = u_excess(&alloc, params, d)?;
            solutions.push(assemble(alloc, o.prices, o.split, u, params, d, SolutionRegime::BaseInterior));
        }
    }
    Ok(BargainingOutcome { solutions, report })
}

/// Equilibrium-type solutions of the base game for `|Δ| >= 1`.
///
/// Existence uses the total-payoff margin `p* - c - γL0² - d`, where `p*`
/// is the serving provider's fee; with the closed-form disagreement point
/// this is the `L0 <= δ` test for `Δ >= 1` and `L0 <= 1/√(2s)` for
/// `Δ <= -1`. Returned reservation levels are `0`, `L0` and optionally
/// `interior_i_f`, all with the same excess profit.
pub fn solve_corner(
    params: &MarketParams,
    d: &DisagreementPoint,
    policy: impl Into<CornerPolicy>,
    interior_i_f: Option<f64>,
) -> Result<BargainingOutcome> {
    params.validate()?;
    let delta = params.delta();
    if delta.abs() < 1.0 {
        return Err(Error::Regime { delta, reason: "corner solutions need |Δ| >= 1" });
    }
    if !(params.gamma < params.s_market) {
        return Err(Error::Regime { delta, reason: "corner solutions need gamma < s_market" });
    }
    let l0 = params.l0;
    let o = corner_prices(params, policy)?;
    let p_star = if delta >= 1.0 { o.prices.p_l } else { o.prices.p_f };
    let pi_star = p_star - params.c - params.gamma * l0 * l0;
    let report = ExistenceReport::base(pi_star, d.total());
    let mut solutions = Vec::new();
    if report.exists {
        let mut shares: Vec<f64> = alloc::vec![0.0, l0];
        if let Some(x) = interior_i_f {
            if !(x > 0.0 && x < l0) {
                return Err(Error::InfeasibleAllocation {
                    i_l: l0,
                    i_f: x,
                    reason: "interior reservation must lie strictly inside (0, L0)",
                });
            }
            shares.insert(1, x);
        }
        for i_f in shares {
            let alloc = Allocation::new(l0, i_f)?;
            solutions.push(assemble(alloc, o.prices, o.split, report.margin, params, d, SolutionRegime::BaseCorner));
        }
    }
    Ok(BargainingOutcome { solutions, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::base_payoffs;
    use crate::pricing::PriceSelection;
    use proptest::prelude::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12
    }

    #[test]
    fn u_excess_example() {
        let p = MarketParams { gamma: 0.5, l0: 0.5, ..Default::default() };
        let u = u_excess(&Allocation::new(0.5, 0.0).unwrap(), &p, &DisagreementPoint::zero()).unwrap();
        assert!(close(u, 4.0 / 9.0 + 1.0 / 9.0 - 0.125));
        assert!(close(u, 0.430_555_555_555_555_6));
    }

    #[test]
    fn nbs_examples() {
        let p = nbs_split(1.0, &DisagreementPoint::zero(), 0.5);
        assert_eq!((p.pi_l, p.pi_f), (0.5, 0.5));
        let p = nbs_split(1.0, &DisagreementPoint::user(0.3, 0.1), 0.2);
        assert!(close(p.pi_l, 1.1) && close(p.pi_f, 0.3));
        let p = nbs_split(0.0, &DisagreementPoint::user(0.3, 0.1), 0.7);
        assert_eq!((p.pi_l, p.pi_f), (0.3, 0.1));
    }

    #[test]
    fn flows_example() {
        let u = 0.430_555_555_555_555_6;
        let f = money_flows(0.0, 1.0 / 9.0, 0.0, 0.2, u);
        assert_eq!(f.s_tilde, ReservationFee::NotSignificant);
        assert!((f.theta + 0.025).abs() < 1e-12);
    }

    #[test]
    fn base_example_negative_gap() {
        let p = MarketParams { c: 1.0, gamma: 0.5, l0: 0.5, w: 0.2, ..Default::default() }.with_delta(-0.5);
        let out = solve_base(&p, &DisagreementPoint::zero()).unwrap();
        assert_eq!(out.solutions.len(), 1);
        let s = &out.solutions[0];
        assert_eq!((s.alloc.i_l(), s.alloc.i_f()), (0.5, 0.5));
        assert!(close(s.prices.p_l, 7.0 / 6.0) && close(s.prices.p_f, 11.0 / 6.0));
        assert!(close(s.split.n_l, 1.0 / 6.0));
        assert_eq!(s.flows.theta, 0.0);
        assert!(close(s.payoffs.total(), 0.597_222_222_222_222_2));
        assert!(close(resource_cost_metric(s).unwrap(), 3.0 / 11.0));
    }

    #[test]
    fn base_zero_gap_has_two_mirrored_solutions() {
        let p = MarketParams::default();
        let out = solve_base(&p, &DisagreementPoint::zero()).unwrap();
        assert_eq!(out.solutions.len(), 2);
        assert_eq!(out.solutions[0].alloc.i_f(), 0.0);
        assert!(close(out.solutions[0].split.n_l, 2.0 / 3.0));
        assert!(close(out.solutions[1].split.n_l, 1.0 / 3.0));
    }

    #[test]
    fn base_nonexistence() {
        let p = MarketParams { gamma: 10.0, l0: 1.0, ..Default::default() };
        let out = solve_base(&p, &DisagreementPoint::zero()).unwrap();
        assert!(out.solutions.is_empty() && !out.report.exists && out.report.margin < 0.0);
    }

    #[test]
    fn totals_and_metric_examples() {
        assert!(close(total_base_payoff(-0.5, 0.5, 0.5), 0.597_222_222_222_222_2));
        assert!(close(total_base_payoff(0.0, 0.5, 0.1), 5.0 / 9.0 - 0.005));
        assert!(close(base_resource_cost(0.0, 1.0, 0.3), 0.18));
        assert!(close(base_resource_cost(-0.5, 1.0, 0.5), 3.0 / 11.0));
    }

    #[test]
    fn corner_examples() {
        let p = MarketParams { s_market: 2.0, l0: 0.4, c: 1.0, ..Default::default() }.with_delta(-1.5);
        let d = crate::disagreement::corner_disagreement(&p, PriceSelection::Upper).unwrap().point;
        let out = solve_corner(&p, &d, PriceSelection::Upper, None).unwrap();
        assert_eq!(out.solutions.len(), 2);
        assert!(out.solutions.iter().all(|s| s.alloc.i_l() == 0.4));

        let p = MarketParams { l0: 0.6, ..p };
        assert!(solve_corner(&p, &d, PriceSelection::Upper, None).unwrap().solutions.is_empty());

        let p = MarketParams { delta_part1: 0.1, l0: 0.05, c: 1.0, ..Default::default() }.with_delta(1.5);
        let d = crate::disagreement::corner_disagreement(&p, PriceSelection::Upper).unwrap().point;
        let out = solve_corner(&p, &d, PriceSelection::Upper, Some(0.02)).unwrap();
        assert_eq!(out.solutions.len(), 3);
        let u = out.solutions[0].u_excess_star;
        assert!(close(u, p.gamma * (0.01 - 0.0025)));
        assert!(out.solutions.iter().all(|s| s.u_excess_star == u));
        assert!(resource_cost_metric(&out.solutions[0]).is_err());
    }

    #[test]
    fn corner_preconditions() {
        let p = MarketParams::default().with_delta(0.5);
        assert!(solve_corner(&p, &DisagreementPoint::zero(), PriceSelection::Upper, None).is_err());
        let p = MarketParams { s_market: 0.4, ..Default::default() }.with_delta(2.0);
        assert!(matches!(
            solve_corner(&p, &DisagreementPoint::zero(), PriceSelection::Upper, None),
            Err(Error::Regime { .. })
        ));
    }

    fn check_solution(s: &EquilibriumSolution, p: &MarketParams) -> core::result::Result<(), TestCaseError> {
        let d = s.disagreement;
        let w = p.w;
        prop_assert!(((s.payoffs.pi_f - d.d_f) / w - (s.payoffs.pi_l - d.d_l) / (1.0 - w)).abs() <= 1e-12);
        prop_assert!(s.payoffs.pi_l >= d.d_l - 1e-12 && s.payoffs.pi_f >= d.d_f - 1e-12);
        let rebuilt = base_payoffs(&s.alloc, &s.prices, &s.split, &s.flows, p).unwrap();
        prop_assert!((rebuilt.pi_l - s.payoffs.pi_l).abs() <= 1e-12);
        prop_assert!((rebuilt.pi_f - s.payoffs.pi_f).abs() <= 1e-12);
        Ok(())
    }

    proptest! {
        #[test]
        fn base_solutions_are_consistent(
            delta in -0.99f64..0.99, gamma in 0.05f64..1.5, l0 in 0.05f64..1.5,
            w in 0.05f64..0.95, d_l in -0.2f64..0.2, d_f in -0.2f64..0.2,
        ) {
            let p = MarketParams { gamma, l0, w, ..Default::default() }.with_delta(delta);
            let d = DisagreementPoint::user(d_l, d_f);
            let out = solve_base(&p, &d).unwrap();
            prop_assert_eq!(!out.solutions.is_empty(), total_base_payoff(delta, gamma, l0) >= d.total());
            for s in &out.solutions {
                prop_assert_eq!(s.alloc.i_l(), l0);
                prop_assert!(s.alloc.i_f() == 0.0 || s.alloc.i_f() == l0);
                prop_assert!(s.u_excess_star >= 0.0);
                check_solution(s, &p)?;
                let metric = resource_cost_metric(s).unwrap();
                prop_assert!((metric - base_resource_cost(delta, p.c, l0)).abs() <= 1e-12);
            }
        }

        #[test]
        fn scaling_up_lowers_u_excess(
            delta in -0.99f64..0.99, gamma in 0.01f64..2.0, l0 in 0.05f64..2.0, frac in 0.0f64..=1.0, lambda in 1.001f64..5.0,
        ) {
            let p = MarketParams { gamma, l0, ..Default::default() }.with_delta(delta);
            let d = DisagreementPoint::zero();
            let a = Allocation::new(l0, l0 * frac).unwrap();
            let u = u_excess(&a, &p, &d).unwrap();
            let v = u_excess(&a.scaled(lambda).unwrap(), &p, &d).unwrap();
            prop_assert!(v < u);
        }

        #[test]
        fn total_payoff_is_even_and_ignores_fee_and_power(
            delta in -0.99f64..0.99, gamma in 0.01f64..2.0, l0 in 0.05f64..2.0,
        ) {
            prop_assert_eq!(total_base_payoff(delta, gamma, l0), total_base_payoff(-delta, gamma, l0));
            prop_assert!(total_base_payoff(0.0, gamma, l0) <= total_base_payoff(delta, gamma, l0));
            prop_assert!(total_base_payoff(delta, gamma, l0 * 1.01) < total_base_payoff(delta, gamma, l0));
            prop_assert!(total_base_payoff(delta, gamma * 1.01, l0) < total_base_payoff(delta, gamma, l0));
        }

        #[test]
        fn flows_are_affine_and_monotone_in_power(
            delta in -0.99f64..0.99, w1 in 0.05f64..0.45, dw in 0.01f64..0.25,
        ) {
            let at = |w: f64| {
                let p = MarketParams { w, ..Default::default() }.with_delta(delta);
                solve_base(&p, &DisagreementPoint::zero()).unwrap().solutions[0].flows
            };
            let (a, b, c) = (at(w1), at(w1 + dw), at(w1 + 2.0 * dw));
            match (a.s_tilde, b.s_tilde, c.s_tilde) {
                (ReservationFee::Fee(x), ReservationFee::Fee(y), ReservationFee::Fee(z)) => {
                    prop_assert!(y <= x && z <= y);
                    prop_assert!(((y - x) - (z - y)).abs() <= 1e-10);
                }
                _ => {
                    prop_assert!(b.theta >= a.theta && c.theta >= b.theta);
                    prop_assert!(((b.theta - a.theta) - (c.theta - b.theta)).abs() <= 1e-10);
                }
            }
        }

        #[test]
        fn corner_solutions_are_consistent(
            delta in 1.0f64..3.0, sign in proptest::bool::ANY, l0 in 0.01f64..0.5, w in 0.05f64..0.95,
        ) {
            let delta = if sign { delta } else { -delta };
            let p = MarketParams { l0, w, s_market: 2.0, delta_part1: 0.1, ..Default::default() }.with_delta(delta);
            let d = crate::disagreement::corner_disagreement(&p, PriceSelection::Upper).unwrap().point;
            let out = solve_corner(&p, &d, PriceSelection::Upper, None).unwrap();
            let threshold = if delta >= 1.0 { 0.1 } else { 0.5 };
            prop_assert_eq!(out.report.exists, l0 <= threshold);
            for s in &out.solutions {
                check_solution(s, &p)?;
            }
        }
    }
}
