//! Run configuration read from flat TOML.
//!
//! ```toml
//! mode = "base"          # or "outside"
//! gamma = 0.5
//! s = 1.0
//! delta = -0.5           # sets v_l = v_f + delta
//! l0 = 0.5
//! d_l = 0.0              # optional override, both or neither
//! d_f = 0.0
//! price_selection = "upper"   # lower | upper | midpoint | <number>
//! ```

use std::path::Path;

use serde::Deserialize;
use specshare_core::pricing::{CornerPolicy, NegativeCornerRule, PriceSelection};
use specshare_core::MarketParams;

use crate::error::{AppError, AppResult};

/// Which game is solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Common pool only.
    Base,
    /// With outside option (`Δ = 0`).
    Outside,
}

impl Mode {
    /// CSV identifier.
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Base => "base",
            Self::Outside => "outside",
        }
    }
}

/// Everything needed to evaluate one parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    /// Game.
    pub mode: Mode,
    /// Exogenous constants.
    pub params: MarketParams,
    /// Caller-supplied disagreement point, bypassing the solver.
    pub d_override: Option<(f64, f64)>,
    /// Corner fee selection and `Δ <= -1` convention.
    pub policy: CornerPolicy,
    /// Leader grid points of the disagreement solver.
    pub disagreement_points: usize,
}

impl RunConfig {
    /// Base preset.
    pub fn base() -> Self {
        Self {
            mode: Mode::Base,
            params: MarketParams::default(),
            d_override: None,
            policy: CornerPolicy::default(),
            disagreement_points: 10_000,
        }
    }

    /// Outside-option preset.
    pub fn outside() -> Self {
        Self { mode: Mode::Outside, params: MarketParams::outside_preset(), ..Self::base() }
    }

    /// Parses TOML text. Keys left out take the preset of the chosen mode.
    pub fn from_toml(text: &str) -> AppResult<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| AppError::input(e.to_string()))?;
        raw.into_config()
    }

    /// Reads and parses a TOML file.
    pub fn load(path: &Path) -> AppResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| AppError::input(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum SelectionValue {
    Name(String),
    Value(f64),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    mode: Option<Mode>,
    gamma: Option<f64>,
    c: Option<f64>,
    s: Option<f64>,
    delta_part1: Option<f64>,
    l0: Option<f64>,
    m: Option<f64>,
    w: Option<f64>,
    v_l: Option<f64>,
    v_f: Option<f64>,
    delta: Option<f64>,
    alpha: Option<f64>,
    k: Option<f64>,
    b: Option<f64>,
    d_l: Option<f64>,
    d_f: Option<f64>,
    price_selection: Option<SelectionValue>,
    corner_rule: Option<String>,
    disagreement_points: Option<usize>,
}

impl RawConfig {
    fn into_config(self) -> AppResult<RunConfig> {
        let mut cfg = match self.mode.unwrap_or(Mode::Base) {
            Mode::Base => RunConfig::base(),
            Mode::Outside => RunConfig::outside(),
        };
        let p = &mut cfg.params;
        let set = |slot: &mut f64, v: Option<f64>| {
            if let Some(v) = v {
                *slot = v;
            }
        };
        set(&mut p.gamma, self.gamma);
        set(&mut p.c, self.c);
        set(&mut p.s_market, self.s);
        set(&mut p.delta_part1, self.delta_part1);
        set(&mut p.l0, self.l0);
        set(&mut p.w, self.w);
        set(&mut p.v_l, self.v_l);
        set(&mut p.v_f, self.v_f);
        set(&mut p.alpha, self.alpha);
        set(&mut p.k, self.k);
        set(&mut p.b, self.b);
        if self.m.is_some() {
            p.m_cap = self.m;
        }
        if let Some(delta) = self.delta {
            if self.v_l.is_some() {
                return Err(AppError::input("give either delta or v_l, not both"));
            }
            *p = p.with_delta(delta);
        }
        cfg.d_override = match (self.d_l, self.d_f) {
            (Some(l), Some(f)) => Some((l, f)),
            (None, None) => None,
            _ => return Err(AppError::input("d_l and d_f must be given together")),
        };
        if let Some(sel) = self.price_selection {
            cfg.policy.selection = parse_selection(sel)?;
        }
        if let Some(rule) = self.corner_rule {
            cfg.policy.rule = match rule.as_str() {
                "offset" => NegativeCornerRule::OffsetByOne,
                "mirrored" => NegativeCornerRule::Mirrored,
                other => return Err(AppError::input(format!("unknown corner_rule {other:?}"))),
            };
        }
        if let Some(n) = self.disagreement_points {
            cfg.disagreement_points = n;
        }
        cfg.params.validate()?;
        Ok(cfg)
    }
}

fn parse_selection(v: SelectionValue) -> AppResult<PriceSelection> {
    match v {
        SelectionValue::Value(x) => Ok(PriceSelection::At(x)),
        SelectionValue::Name(name) => match name.as_str() {
            "lower" => Ok(PriceSelection::Lower),
            "upper" => Ok(PriceSelection::Upper),
            "midpoint" => Ok(PriceSelection::Midpoint),
            other => Err(AppError::input(format!("unknown price_selection {other:?}"))),
        },
    }
}

/// Names accepted by [`set_param`].
pub const PARAM_NAMES: [&str; 13] =
    ["gamma", "c", "s", "delta_part1", "l0", "m", "w", "v_l", "v_f", "delta", "alpha", "k", "b"];

/// Sets one named parameter. `delta` moves `v_l`.
pub fn set_param(params: &mut MarketParams, name: &str, value: f64) -> AppResult<()> {
    match name {
        "gamma" => params.gamma = value,
        "c" => params.c = value,
        "s" => params.s_market = value,
        "delta_part1" => params.delta_part1 = value,
        "l0" => params.l0 = value,
        "m" => params.m_cap = Some(value),
        "w" => params.w = value,
        "v_l" => params.v_l = value,
        "v_f" => params.v_f = value,
        "delta" => *params = params.with_delta(value),
        "alpha" => params.alpha = value,
        "k" => params.k = value,
        "b" => params.b = value,
        other => return Err(AppError::input(format!("unknown parameter {other:?}"))),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_is_base_preset() {
        assert_eq!(RunConfig::from_toml("").unwrap(), RunConfig::base());
        assert_eq!(RunConfig::from_toml("mode = \"outside\"").unwrap(), RunConfig::outside());
    }

    #[test]
    fn keys_override_preset() {
        let cfg = RunConfig::from_toml(
            "gamma = 0.25\ndelta = -0.5\nd_l = 0.1\nd_f = 0.2\nprice_selection = 1.7\nm = 2.0\ncorner_rule = \"mirrored\"",
        )
        .unwrap();
        assert_eq!(cfg.params.gamma, 0.25);
        assert_eq!(cfg.params.delta(), -0.5);
        assert_eq!(cfg.d_override, Some((0.1, 0.2)));
        assert_eq!(cfg.policy.selection, PriceSelection::At(1.7));
        assert_eq!(cfg.policy.rule, NegativeCornerRule::Mirrored);
        assert_eq!(cfg.params.m_cap, Some(2.0));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(RunConfig::from_toml("gama = 1").is_err());
        assert!(RunConfig::from_toml("d_l = 1").is_err());
        assert!(RunConfig::from_toml("w = 1.5").is_err());
        assert!(RunConfig::from_toml("price_selection = \"top\"").is_err());
        assert!(RunConfig::from_toml("delta = 1\nv_l = 2").is_err());
        assert!(RunConfig::from_toml("mode = 3").is_err());
    }

    #[test]
    fn set_param_names() {
        let mut p = MarketParams::default();
        for name in PARAM_NAMES {
            set_param(&mut p, name, 0.7).unwrap();
        }
        assert!((p.delta() - 0.7).abs() < 1e-15);
        assert!(set_param(&mut p, "x", 1.0).is_err());
    }
}
