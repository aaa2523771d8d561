//! Brute-force checks that do not rely on the closed forms: exhaustive grid
//! maximisation of the excess profit through the stage-2/stage-3
//! composition, and randomised identity checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bargaining::u_excess;
use crate::model::{
    base_payoffs, outside_demand, outside_payoffs, Allocation, DisagreementPoint, MoneyFlows, ReservationFee,
};
use crate::outside::{outside_aux, outside_u_excess};
use crate::pricing::{interior_prices, outside_stage2_prices};
use crate::search::grid_node;
use crate::{Error, MarketParams, Result};

/// Seed used by the reference runs.
pub const DEFAULT_SEED: u64 = 20_240_917;

/// Box searched by [`grid_argmax_u_excess`]: `i_l` over
/// `[i_l_lo, i_l_hi]`, and for each `i_l`, `i_f` over `[0, i_l]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    /// Smallest `i_l`.
    pub i_l_lo: f64,
    /// Largest `i_l`.
    pub i_l_hi: f64,
    /// Points along `i_l`.
    pub i_l_points: usize,
    /// Points along `i_f` (relative to each `i_l`).
    pub i_f_points: usize,
}

impl GridSpec {
    /// `n × n` grid over `[lo, hi] × [0, i_l]`.
    pub fn square(lo: f64, hi: f64, n: usize) -> Self {
        Self { i_l_lo: lo, i_l_hi: hi, i_l_points: n, i_f_points: n }
    }

    fn validate(&self) -> Result<()> {
        if self.i_l_points < 2 || self.i_f_points < 2 {
            return Err(Error::InvalidGrid("need at least two points per axis"));
        }
        if !(self.i_l_lo > 0.0 && self.i_l_hi > self.i_l_lo && self.i_l_hi.is_finite()) {
            return Err(Error::InvalidGrid("need 0 < i_l_lo < i_l_hi < inf"));
        }
        Ok(())
    }

    /// Spacing along `i_l`.
    pub fn i_l_step(&self) -> f64 {
        (self.i_l_hi - self.i_l_lo) / (self.i_l_points - 1) as f64
    }

    /// Spacing along `i_f` at a given `i_l`.
    pub fn i_f_step(&self, i_l: f64) -> f64 {
        i_l / (self.i_f_points - 1) as f64
    }
}

/// Which game's excess profit to scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMode {
    /// Common pool only.
    Base,
    /// With outside option.
    Outside,
}

/// Best grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridResult {
    /// Argmax.
    pub alloc: Allocation,
    /// Excess profit at the argmax.
    pub value: f64,
    /// Largest change of the objective between the argmax cell and its
    /// neighbours; the resolution of `value`.
    pub tolerance: f64,
    /// Grid index `(i_l, i_f)` of the argmax.
    pub index: (usize, usize),
}

/// Excess profit obtained by composing stage-2 fees, stage-3 subscriptions
/// and the payoff equations. Flows cancel in the total, so none are used.
pub fn composed_u_excess(
    alloc: &Allocation,
    params: &MarketParams,
    d: &DisagreementPoint,
    mode: OracleMode,
) -> Result<f64> {
    let flows = MoneyFlows { s_tilde: ReservationFee::Fee(0.0), theta: 0.0 };
    let pay = match mode {
        OracleMode::Base => {
            let o = interior_prices(alloc, params)?;
            base_payoffs(alloc, &o.prices, &o.split, &flows, params)?
        }
        OracleMode::Outside => {
            let o = outside_stage2_prices(alloc, params)?;
            let demand = outside_demand(&o.prices, alloc, &o.split, params);
            outside_payoffs(alloc, &o.prices, &demand, &flows, params)?
        }
    };
    Ok(pay.total() - d.total())
}

/// Exhaustive maximisation over the grid. Ties go to the lexicographically
/// smallest index.
pub fn grid_argmax_u_excess(
    params: &MarketParams,
    d: &DisagreementPoint,
    grid: &GridSpec,
    mode: OracleMode,
) -> Result<GridResult> {
    grid.validate()?;
    let eval = |i: usize, j: usize| -> Result<f64> {
        let i_l = grid_node(grid.i_l_lo, grid.i_l_hi, grid.i_l_points, i);
        let i_f = grid_node(0.0, i_l, grid.i_f_points, j);
        composed_u_excess(&Allocation::new(i_l, i_f)?, params, d, mode)
    };
    let mut best = (f64::NEG_INFINITY, 0usize, 0usize);
    for i in 0..grid.i_l_points {
        for j in 0..grid.i_f_points {
            let v = eval(i, j)?;
            if v > best.0 {
                best = (v, i, j);
            }
        }
    }
    let (value, bi, bj) = best;
    let mut tolerance = 0.0f64;
    for (di, dj) in [(-1i64, 0i64), (1, 0), (0, -1), (0, 1)] {
        let (ni, nj) = (bi as i64 + di, bj as i64 + dj);
        if ni < 0 || nj < 0 || ni >= grid.i_l_points as i64 || nj >= grid.i_f_points as i64 {
            continue;
        }
        tolerance = tolerance.max((eval(ni as usize, nj as usize)? - value).abs());
    }
    let i_l = grid_node(grid.i_l_lo, grid.i_l_hi, grid.i_l_points, bi);
    Ok(GridResult {
        alloc: Allocation::new(i_l, grid_node(0.0, i_l, grid.i_f_points, bj))?,
        value,
        tolerance,
        index: (bi, bj),
    })
}

/// Settings for [`identity_suite`].
///
/// Base draws: `Δ ∈ (-1, 1)`, `γ ∈ [0.01, 2]`, `L0 ∈ [0.01, 3]`,
/// `d_l, d_f ∈ [-0.5, 0.5]`. Outside draws: `α ∈ [0.1, 3]`, `b ∈ [0, 3]`,
/// `k, c ∈ [0, 2]`, `γ ∈ [0.01, 2]`, `i_l ∈ [0.05, 3]`, `i_f` uniform
/// inside `[h, i_l - h]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityConfig {
    /// Draws per identity.
    pub draws: usize,
    /// RNG seed.
    pub seed: u64,
    /// Central-difference step for the second derivative.
    pub fd_step: f64,
}

impl Default for IdentityConfig {
    fn default() -> Self {
        Self { draws: 1000, seed: DEFAULT_SEED, fd_step: 1e-4 }
    }
}

/// Worst residuals over all draws.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityReport {
    /// Draws per identity.
    pub draws: usize,
    /// `max |[u(0, L0) - u(L0, L0)] - 4Δ/9|`.
    pub gap: f64,
    /// `max |FD second derivative - 8αf²| / 8αf²`.
    pub convexity: f64,
    /// `max |u(i_l, 0) - u(i_l, i_l)|` in the outside-option game.
    pub boundary: f64,
    /// `max` change of stage-2 fees and split when `(i_l, i_f)` is doubled.
    pub scale: f64,
}

impl IdentityReport {
    /// Gap bound.
    pub const GAP_TOL: f64 = 1e-12;
    /// Relative convexity bound.
    pub const CONVEXITY_TOL: f64 = 1e-5;
    /// Boundary bound.
    pub const BOUNDARY_TOL: f64 = 1e-12;
    /// Scale-invariance bound.
    pub const SCALE_TOL: f64 = 1e-12;

    /// All residuals within their bounds.
    pub fn passed(&self) -> bool {
        self.gap <= Self::GAP_TOL
            && self.convexity <= Self::CONVEXITY_TOL
            && self.boundary <= Self::BOUNDARY_TOL
            && self.scale <= Self::SCALE_TOL
    }
}

/// Randomised identity checks with a fixed seed.
pub fn identity_suite(cfg: &IdentityConfig) -> Result<IdentityReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut report = IdentityReport { draws: cfg.draws, gap: 0.0, convexity: 0.0, boundary: 0.0, scale: 0.0 };
    let h = cfg.fd_step;
    for _ in 0..cfg.draws {
        let delta = rng.random_range(-0.999..0.999);
        let p = MarketParams {
            gamma: rng.random_range(0.01..=2.0),
            l0: rng.random_range(0.01..=3.0),
            ..Default::default()
        }
        .with_delta(delta);
        let d = DisagreementPoint::user(rng.random_range(-0.5..=0.5), rng.random_range(-0.5..=0.5));
        let l0 = p.l0;
        let gap = u_excess(&Allocation::new(l0, 0.0)?, &p, &d)? - u_excess(&Allocation::new(l0, l0)?, &p, &d)?;
        report.gap = report.gap.max((gap - 4.0 * delta / 9.0).abs());

        let a = Allocation::new(l0, l0 * rng.random_range(0.0..=1.0))?;
        let o1 = interior_prices(&a, &p)?;
        let o2 = interior_prices(&a.scaled(2.0)?, &p)?;
        let diff = (o1.prices.p_l - o2.prices.p_l)
            .abs()
            .max((o1.prices.p_f - o2.prices.p_f).abs())
            .max((o1.split.n_l - o2.split.n_l).abs());
        report.scale = report.scale.max(diff);
    }
    for _ in 0..cfg.draws {
        let p = MarketParams {
            alpha: rng.random_range(0.1..=3.0),
            b: rng.random_range(0.0..=3.0),
            k: rng.random_range(0.0..=2.0),
            c: rng.random_range(0.0..=2.0),
            gamma: rng.random_range(0.01..=2.0),
            ..Default::default()
        };
        let d = DisagreementPoint::zero();
        let i_l: f64 = rng.random_range(0.05..=3.0);
        let i_f = rng.random_range(h..=i_l - h);
        let u = |x: f64| outside_u_excess(&Allocation::new(i_l, x).unwrap(), &p, &d);
        let fd = (u(i_f + h)? - 2.0 * u(i_f)? + u(i_f - h)?) / (h * h);
        let f = outside_aux(i_l, &p).f_val;
        let exact = 8.0 * p.alpha * f * f;
        report.convexity = report.convexity.max(((fd - exact) / exact).abs());
        report.boundary = report.boundary.max((u(0.0)? - u(i_l)?).abs());
    }
    Ok(report)
}
