//! Preset datasets. Each is a list of parameter points evaluated with the
//! shared row schema.

use specshare_core::disagreement::disagreement_maximizing_fee;
use specshare_core::search::linspace;

use crate::config::{Mode, RunConfig};
use crate::error::{AppError, AppResult};
use crate::pipeline::disagreement_config;
use crate::sweep::run_configs;

/// Known dataset ids.
pub const DATASETS: [&str; 10] = [
    "degree_coop_vs_delta",
    "total_payoff_vs_L0",
    "sp_payoffs_vs_L0",
    "payoffs_vs_s",
    "subscriptions_vs_delta",
    "resource_cost",
    "outside_invest_vs_gamma",
    "outside_invest_vs_L0",
    "outside_payoffs_vs_L0",
    "outside_metric_vs_s",
];

/// Fee range scanned for the fee maximising `d_l + d_f`.
pub const FEE_SCAN: (f64, f64, usize) = (0.6, 50.0, 100);

/// Minimum acquisition of the `*_vs_delta` datasets when no config is given.
pub const DELTA_SWEEP_L0: f64 = 0.3;

fn mode_of(id: &str) -> Mode {
    if id.starts_with("outside") {
        Mode::Outside
    } else {
        Mode::Base
    }
}

fn with(cfg: &RunConfig, f: impl FnOnce(&mut RunConfig)) -> RunConfig {
    let mut c = *cfg;
    f(&mut c);
    c
}

fn delta_grid() -> Vec<f64> {
    // 39 points, 0 included
    linspace(-0.95, 0.95, 39).collect()
}

fn l0_grid() -> Vec<f64> {
    linspace(0.1, 1.0, 19).collect()
}

/// Fee in [`FEE_SCAN`] maximising the total disagreement payoff.
pub fn best_fee(cfg: &RunConfig) -> AppResult<f64> {
    let (lo, hi, n) = FEE_SCAN;
    Ok(disagreement_maximizing_fee(&cfg.params, &disagreement_config(cfg), lo, hi, n)?.0)
}

/// Parameter points of a dataset. `base` supplies every constant that the
/// dataset does not sweep; without it the preset of the dataset's game is
/// used.
pub fn figure_configs(id: &str, base: Option<&RunConfig>) -> AppResult<Vec<RunConfig>> {
    if !DATASETS.contains(&id) {
        return Err(AppError::input(format!("unknown dataset {id:?}; known: {}", DATASETS.join(", "))));
    }
    let mode = mode_of(id);
    let cfg = match (base, mode) {
        (Some(c), _) => RunConfig { mode, ..*c },
        // L0 = 0.3 keeps solutions in existence across the whole Δ range
        (None, Mode::Base) if id.ends_with("_vs_delta") => with(&RunConfig::base(), |c| c.params.l0 = DELTA_SWEEP_L0),
        (None, Mode::Base) => RunConfig::base(),
        (None, Mode::Outside) => RunConfig::outside(),
    };
    let mut out = Vec::new();
    match id {
        "degree_coop_vs_delta" | "subscriptions_vs_delta" => {
            for d in delta_grid() {
                out.push(with(&cfg, |c| c.params = c.params.with_delta(d)));
            }
        }
        "total_payoff_vs_L0" => {
            for d in [-0.5, 0.5] {
                let at_delta = with(&cfg, |c| c.params = c.params.with_delta(d));
                let s_best = best_fee(&at_delta)?;
                for s in [0.8, 1.0, 1.2, s_best] {
                    for l0 in l0_grid() {
                        out.push(with(&at_delta, |c| {
                            c.params.s_market = s;
                            c.params.l0 = l0;
                        }));
                    }
                }
            }
        }
        "sp_payoffs_vs_L0" => {
            for d in [-0.5, 0.5] {
                for l0 in l0_grid() {
                    out.push(with(&cfg, |c| {
                        c.params = c.params.with_delta(d);
                        c.params.l0 = l0;
                    }));
                }
            }
        }
        "payoffs_vs_s" => {
            for d in [-0.5, 0.5] {
                for s in linspace(0.6, 30.0, 50) {
                    out.push(with(&cfg, |c| {
                        c.params = c.params.with_delta(d);
                        c.params.s_market = s;
                    }));
                }
            }
        }
        "resource_cost" => {
            for d in [-0.5, 0.0, 0.5] {
                for l0 in l0_grid() {
                    out.push(with(&cfg, |c| {
                        c.params = c.params.with_delta(d);
                        c.params.l0 = l0;
                    }));
                }
            }
        }
        "outside_invest_vs_gamma" => {
            for g in linspace(0.65, 3.0, 48) {
                out.push(with(&cfg, |c| c.params.gamma = g));
            }
        }
        "outside_invest_vs_L0" => {
            for i in 1..=195 {
                out.push(with(&cfg, |c| c.params.l0 = i as f64 / 100.0));
            }
        }
        "outside_payoffs_vs_L0" => {
            for l0 in linspace(0.1, 1.5, 29) {
                out.push(with(&cfg, |c| c.params.l0 = l0));
            }
        }
        "outside_metric_vs_s" => {
            for s in linspace(0.5, 10.0, 39) {
                out.push(with(&cfg, |c| c.params.s_market = s));
            }
        }
        _ => unreachable!("checked against DATASETS"),
    }
    Ok(out)
}

/// Rows of a dataset.
pub fn run_figure(id: &str, base: Option<&RunConfig>) -> AppResult<Vec<Vec<String>>> {
    Ok(run_configs(&figure_configs(id, base)?))
}
