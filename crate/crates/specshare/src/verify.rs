//! The `verify` verb: randomised identities, closed forms against the grid
//! oracle, fee deviation scans and NBS bookkeeping at one parameter point.

use std::fmt::Write as _;

use specshare_core::bargaining::{self, BargainingOutcome, EquilibriumSolution};
use specshare_core::model::{base_payoffs, outside_payoffs, DisagreementPoint};
use specshare_core::oracle::{
    grid_argmax_u_excess, identity_suite, GridSpec, IdentityConfig, IdentityReport, OracleMode, DEFAULT_SEED,
};
use specshare_core::outside::{self, OutsideOptimum};
use specshare_core::pricing::{best_response_check, DeviationMode, PriceGrid};
use specshare_core::{MarketParams, Result};

use crate::config::{Mode, RunConfig};
use crate::pipeline::evaluate;

/// Deviation gain accepted as "no profitable deviation".
pub const NASH_TOL: f64 = 1e-4;
/// Tolerance for exact identities.
pub const EXACT_TOL: f64 = 1e-12;

/// The closed forms under test. Swappable so that a corrupted formula can
/// be shown to fail.
#[derive(Debug, Clone, Copy)]
pub struct ClosedForms {
    /// Base-game solutions for `|Δ| < 1`.
    pub solve_base: fn(&MarketParams, &DisagreementPoint) -> Result<BargainingOutcome>,
    /// Total base-game payoff from `(Δ, γ, L0)`.
    pub total_base_payoff: fn(f64, f64, f64) -> f64,
    /// Argmax of the outside-option objective.
    pub outside_optimum: fn(&MarketParams) -> Result<OutsideOptimum>,
}

impl Default for ClosedForms {
    fn default() -> Self {
        Self {
            solve_base: bargaining::solve_base,
            total_base_payoff: bargaining::total_base_payoff,
            outside_optimum: outside::maximize_outside_objective,
        }
    }
}

/// Knobs of a verification run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    /// Points per axis of the allocation grid.
    pub grid_points: usize,
    /// Seed of the identity draws.
    pub seed: u64,
    /// Draws per identity.
    pub draws: usize,
    /// Probes per provider in the fee deviation scan.
    pub deviation_points: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { grid_points: 200, seed: DEFAULT_SEED, draws: 1000, deviation_points: 2001 }
    }
}

/// One residual against its bound.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    /// Short identifier.
    pub name: String,
    /// Worst residual found.
    pub residual: f64,
    /// Bound.
    pub tolerance: f64,
}

impl Check {
    fn new(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self { name: name.into(), residual, tolerance }
    }

    /// `residual <= tolerance` (NaN fails).
    pub fn passed(&self) -> bool {
        self.residual <= self.tolerance
    }
}

/// All checks plus informational flags that do not fail the run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerifyReport {
    /// Checks in execution order.
    pub checks: Vec<Check>,
    /// Notes such as an unbounded objective.
    pub flags: Vec<String>,
}

impl VerifyReport {
    /// Every check passed.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    /// Human-readable summary, one line per check.
    pub fn render(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let tag = if c.passed() { "ok  " } else { "FAIL" };
            let _ = writeln!(s, "{tag} {:<40} residual {:.3e} (tol {:.1e})", c.name, c.residual, c.tolerance);
        }
        for f in &self.flags {
            let _ = writeln!(s, "flag {f}");
        }
        let failed = self.checks.iter().filter(|c| !c.passed()).count();
        let _ = writeln!(s, "{} checks, {failed} failed", self.checks.len());
        s
    }

    fn fail(&mut self, name: impl Into<String>, err: impl std::fmt::Display) {
        self.checks.push(Check::new(name, f64::INFINITY, 0.0));
        self.flags.push(format!("error: {err}"));
    }
}

/// Runs every check that applies to `cfg`.
pub fn verify(cfg: &RunConfig, opts: &VerifyOptions) -> VerifyReport {
    verify_with(cfg, opts, &ClosedForms::default())
}

/// [`verify`] with explicit closed forms.
pub fn verify_with(cfg: &RunConfig, opts: &VerifyOptions, forms: &ClosedForms) -> VerifyReport {
    let mut report = VerifyReport::default();
    identities(&mut report, opts);
    let p = &cfg.params;
    match cfg.mode {
        Mode::Base if p.delta().abs() < 1.0 => base_checks(&mut report, p, opts, forms),
        Mode::Base => report.flags.push("corner regime: no grid oracle for |Δ| >= 1".into()),
        Mode::Outside => {
            if !outside_checks(&mut report, p, opts, forms) {
                return report;
            }
        }
    }
    match evaluate(cfg) {
        Ok(ev) => match ev.outcome {
            Ok(o) => {
                let mode = match cfg.mode {
                    Mode::Base => DeviationMode::Base,
                    Mode::Outside => DeviationMode::Outside,
                };
                for (i, s) in o.solutions.iter().enumerate() {
                    solution_checks(&mut report, i, s, p, mode, opts);
                }
                if o.solutions.is_empty() {
                    report.flags.push(format!("no solution at d = ({}, {})", ev.d.d_l, ev.d.d_f));
                }
            }
            Err(e) => report.fail("bargaining", e),
        },
        Err(e) => report.fail("disagreement", e),
    }
    report
}

fn identities(report: &mut VerifyReport, opts: &VerifyOptions) {
    let cfg = IdentityConfig { draws: opts.draws, seed: opts.seed, ..Default::default() };
    match identity_suite(&cfg) {
        Ok(r) => report.checks.extend([
            Check::new("identity: gap = 4Δ/9", r.gap, IdentityReport::GAP_TOL),
            Check::new("identity: convexity in i_f", r.convexity, IdentityReport::CONVEXITY_TOL),
            Check::new("identity: boundary equality", r.boundary, IdentityReport::BOUNDARY_TOL),
            Check::new("identity: scale invariance", r.scale, IdentityReport::SCALE_TOL),
        ]),
        Err(e) => report.fail("identity suite", e),
    }
}

fn base_checks(report: &mut VerifyReport, p: &MarketParams, opts: &VerifyOptions, forms: &ClosedForms) {
    let zero = DisagreementPoint::zero();
    let grid = GridSpec::square(p.l0, (p.l0 + 1.0).min(p.spectrum_cap()).max(p.l0 * 1.5), opts.grid_points);
    let g = match grid_argmax_u_excess(p, &zero, &grid, OracleMode::Base) {
        Ok(g) => g,
        Err(e) => return report.fail("base grid oracle", e),
    };
    let total = (forms.total_base_payoff)(p.delta(), p.gamma, p.l0);
    report.checks.push(Check::new("base: total payoff vs grid", (total - g.value).abs(), g.tolerance + EXACT_TOL));
    match (forms.solve_base)(p, &zero) {
        Ok(o) if !o.solutions.is_empty() => {
            let cell = o
                .solutions
                .iter()
                .map(|s| {
                    let di = (s.alloc.i_l() - g.alloc.i_l()).abs() / grid.i_l_step();
                    let df = (s.alloc.i_f() - g.alloc.i_f()).abs() / grid.i_f_step(g.alloc.i_l());
                    di.max(df)
                })
                .fold(f64::INFINITY, f64::min);
            report.checks.push(Check::new("base: argmax within one cell (cells)", cell, 1.0 + 1e-9));
            let best = o.solutions.iter().map(|s| s.u_excess_star).fold(f64::NEG_INFINITY, f64::max);
            report.checks.push(Check::new("base: closed form beats grid", (g.value - best).max(0.0), EXACT_TOL));
            let sum = o.solutions[0].payoffs.total();
            report.checks.push(Check::new("base: payoffs sum to total", (sum - total).abs(), EXACT_TOL));
        }
        Ok(_) => {
            report.checks.push(Check::new("base: no solution implies grid max < 0", g.value.max(0.0), g.tolerance))
        }
        Err(e) => report.fail("base closed form", e),
    }
}

/// Returns `false` when the objective is unbounded and nothing further
/// applies.
fn outside_checks(report: &mut VerifyReport, p: &MarketParams, opts: &VerifyOptions, forms: &ClosedForms) -> bool {
    let (i_star, h_star) = match (forms.outside_optimum)(p) {
        Ok(OutsideOptimum::Bounded { i_l, value }) => (i_l, value),
        Ok(OutsideOptimum::Unbounded) => {
            let (lead, _, _) = outside::objective_coefficients(p);
            report.flags.push(format!("unbounded objective: leading coefficient {lead:.6} >= 0 and no m_cap"));
            return false;
        }
        Err(e) => {
            report.fail("outside closed form", e);
            return false;
        }
    };
    let bound = p.interior_bound();
    if i_star >= bound {
        report.flags.push(format!("argmax {i_star} is not below 4/b = {bound}"));
        return true;
    }
    let hi = (i_star * 2.0).max(p.l0 + 1.0).min(p.spectrum_cap()).min(bound * (1.0 - 1e-9));
    if hi <= p.l0 {
        report.flags.push("grid range empty".into());
        return true;
    }
    let grid = GridSpec::square(p.l0, hi, opts.grid_points);
    match grid_argmax_u_excess(p, &DisagreementPoint::zero(), &grid, OracleMode::Outside) {
        Ok(g) => {
            let di = (i_star - g.alloc.i_l()).abs() / grid.i_l_step();
            report.checks.push(Check::new("outside: argmax within one cell (cells)", di, 1.0 + 1e-9));
            report.checks.push(Check::new("outside: closed form beats grid", (g.value - h_star).max(0.0), EXACT_TOL));
            report.checks.push(Check::new(
                "outside: value within grid tolerance",
                (h_star - g.value).abs(),
                g.tolerance + EXACT_TOL,
            ));
        }
        Err(e) => report.fail("outside grid oracle", e),
    }
    true
}

fn solution_checks(
    report: &mut VerifyReport,
    i: usize,
    s: &EquilibriumSolution,
    p: &MarketParams,
    mode: DeviationMode,
    opts: &VerifyOptions,
) {
    let d = &s.disagreement;
    let gain = best_response_check(&s.prices, &s.alloc, p, mode, &PriceGrid::around_cost(p, opts.deviation_points));
    match gain {
        Ok(g) => report.checks.push(Check::new(format!("solution {i}: deviation gain"), g.max(0.0), NASH_TOL)),
        Err(e) => report.fail(format!("solution {i}: deviation scan"), e),
    }
    let ratio = ((s.payoffs.pi_l - d.d_l) * p.w - (s.payoffs.pi_f - d.d_f) * (1.0 - p.w)).abs();
    report.checks.push(Check::new(format!("solution {i}: NBS ratio"), ratio, EXACT_TOL));
    let shortfall = (d.d_l - s.payoffs.pi_l).max(d.d_f - s.payoffs.pi_f).max(0.0);
    report.checks.push(Check::new(format!("solution {i}: payoffs >= d"), shortfall, 0.0));
    let rebuilt = match s.demand {
        None => base_payoffs(&s.alloc, &s.prices, &s.split, &s.flows, p),
        Some(n) => outside_payoffs(&s.alloc, &s.prices, &n, &s.flows, p),
    };
    match rebuilt {
        Ok(r) => {
            let res = (r.pi_l - s.payoffs.pi_l).abs().max((r.pi_f - s.payoffs.pi_f).abs());
            report.checks.push(Check::new(format!("solution {i}: payoffs from flows"), res, EXACT_TOL));
        }
        Err(e) => report.fail(format!("solution {i}: payoffs from flows"), e),
    }
}
