//! Generic one-parameter sweeps.

use rayon::prelude::*;
use specshare_core::search::linspace;

use crate::config::{set_param, RunConfig, PARAM_NAMES};
use crate::error::{AppError, AppResult};
use crate::pipeline::evaluate;
use crate::table::{error_row, rows};

/// A sweep of one named parameter over `steps` equally spaced values.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    /// Parameter name, see [`PARAM_NAMES`].
    pub param: String,
    /// First value.
    pub lo: f64,
    /// Last value.
    pub hi: f64,
    /// Number of values (>= 2).
    pub steps: usize,
}

impl SweepSpec {
    /// Checks name, range and step count.
    pub fn validate(&self) -> AppResult<()> {
        if !PARAM_NAMES.contains(&self.param.as_str()) {
            return Err(AppError::input(format!("unknown sweep parameter {:?}", self.param)));
        }
        if self.steps < 2 {
            return Err(AppError::input("steps must be >= 2"));
        }
        if !(self.lo.is_finite() && self.hi.is_finite() && self.lo < self.hi) {
            return Err(AppError::input("sweep range needs finite lo < hi"));
        }
        Ok(())
    }

    /// The swept values.
    pub fn values(&self) -> Vec<f64> {
        linspace(self.lo, self.hi, self.steps).collect()
    }
}

/// Configs of the sweep, in order.
pub fn sweep_configs(base: &RunConfig, spec: &SweepSpec) -> AppResult<Vec<RunConfig>> {
    spec.validate()?;
    spec.values()
        .into_iter()
        .map(|v| {
            let mut cfg = *base;
            set_param(&mut cfg.params, &spec.param, v)?;
            Ok(cfg)
        })
        .collect()
}

/// Evaluates configs in parallel and returns rows in input order.
pub fn run_configs(configs: &[RunConfig]) -> Vec<Vec<String>> {
    let per_point: Vec<Vec<Vec<String>>> = configs
        .par_iter()
        .enumerate()
        .map(|(i, cfg)| match evaluate(cfg) {
            Ok(ev) => rows(i, &ev),
            Err(e) => vec![error_row(i, cfg.mode, &cfg.params, &e)],
        })
        .collect();
    per_point.into_iter().flatten().collect()
}

/// Runs a sweep.
pub fn run_sweep(base: &RunConfig, spec: &SweepSpec) -> AppResult<Vec<Vec<String>>> {
    Ok(run_configs(&sweep_configs(base, spec)?))
}
