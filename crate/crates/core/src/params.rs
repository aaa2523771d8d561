use crate::{Error, Result};

/// Exogenous constants of the game.
///
/// `delta()` is the preference gap `v_l - v_f`; most results switch on
/// whether `|Δ| < 1` (interior) or `|Δ| >= 1` (corner).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarketParams {
    /// Regulator charge per squared unit of leased spectrum.
    pub gamma: f64,
    /// Transaction cost per subscription.
    pub c: f64,
    /// Market reservation fee used when bargaining fails.
    pub s_market: f64,
    /// Minimum acquisition in the non-cooperative game.
    pub delta_part1: f64,
    /// Regulator-mandated minimum acquisition under bargaining.
    pub l0: f64,
    /// Maximum leasable spectrum; `None` means unbounded.
    pub m_cap: Option<f64>,
    /// Bargaining power of `SP_F`.
    pub w: f64,
    /// Prior preference for `SP_L`.
    pub v_l: f64,
    /// Prior preference for `SP_F`.
    pub v_f: f64,
    /// Outside-option demand scale.
    pub alpha: f64,
    /// Outside-option demand intercept.
    pub k: f64,
    /// Outside-option demand sensitivity to spectrum.
    pub b: f64,
}

impl Default for MarketParams {
    /// Base-case preset: `γ = 0.5`, `c = 1`, `w = 0.2`, `s = 1`, `Δ = 0`.
    fn default() -> Self {
        Self {
            gamma: 0.5,
            c: 1.0,
            s_market: 1.0,
            delta_part1: 0.01,
            l0: 0.5,
            m_cap: None,
            w: 0.2,
            v_l: 0.0,
            v_f: 0.0,
            alpha: 1.0,
            k: 0.0,
            b: 0.0,
        }
    }
}

impl MarketParams {
    /// Outside-option preset: `b = 2`, `k = c = 1`, `w = 0.2`, `s = 2`,
    /// `α = 1`, `γ = 0.8`, `L0 = 0.3`, `Δ = 0`.
    pub fn outside_preset() -> Self {
        Self {
            gamma: 0.8,
            c: 1.0,
            s_market: 2.0,
            delta_part1: 0.01,
            l0: 0.3,
            m_cap: None,
            w: 0.2,
            v_l: 0.0,
            v_f: 0.0,
            alpha: 1.0,
            k: 1.0,
            b: 2.0,
        }
    }

    /// Preference gap `v_l - v_f`.
    #[inline]
    pub fn delta(&self) -> f64 {
        self.v_l - self.v_f
    }

    /// Copy with `v_l` moved so that `delta() == d` (keeps `v_f`).
    pub fn with_delta(mut self, d: f64) -> Self {
        self.v_l = self.v_f + d;
        self
    }

    /// Checks every domain constraint.
    pub fn validate(&self) -> Result<()> {
        let all = [
            ("gamma", self.gamma),
            ("c", self.c),
            ("s_market", self.s_market),
            ("delta_part1", self.delta_part1),
            ("l0", self.l0),
            ("w", self.w),
            ("v_l", self.v_l),
            ("v_f", self.v_f),
            ("alpha", self.alpha),
            ("k", self.k),
            ("b", self.b),
        ];
        for (name, v) in all {
            if !v.is_finite() {
                return Err(Error::InvalidParam { name, reason: "must be finite" });
            }
        }
        let positive = |name, v: f64| {
            if v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidParam { name, reason: "must be > 0" })
            }
        };
        let non_negative = |name, v: f64| {
            if v >= 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidParam { name, reason: "must be >= 0" })
            }
        };
        positive("gamma", self.gamma)?;
        non_negative("c", self.c)?;
        positive("s_market", self.s_market)?;
        positive("delta_part1", self.delta_part1)?;
        positive("l0", self.l0)?;
        positive("alpha", self.alpha)?;
        non_negative("b", self.b)?;
        if !(self.w > 0.0 && self.w < 1.0) {
            return Err(Error::InvalidParam { name: "w", reason: "must lie in (0, 1)" });
        }
        if let Some(m) = self.m_cap {
            if m.is_nan() || m < self.l0 {
                return Err(Error::InvalidParam { name: "m_cap", reason: "must be >= l0" });
            }
        }
        Ok(())
    }

    /// Upper bound on `i_l`, `+inf` when uncapped.
    pub fn spectrum_cap(&self) -> f64 {
        self.m_cap.unwrap_or(f64::INFINITY)
    }

    /// `4/b`, the interior bound of the outside-option game (`+inf` if `b = 0`).
    pub fn interior_bound(&self) -> f64 {
        if self.b > 0.0 {
            4.0 / self.b
        } else {
            f64::INFINITY
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_validate() {
        MarketParams::default().validate().unwrap();
        MarketParams::outside_preset().validate().unwrap();
    }

    #[test]
    fn rejects_out_of_domain() {
        let p = MarketParams { w: 1.0, ..Default::default() };
        assert!(matches!(p.validate(), Err(Error::InvalidParam { name: "w", .. })));
        let p = MarketParams { m_cap: Some(0.1), l0: 0.5, ..Default::default() };
        assert!(matches!(p.validate(), Err(Error::InvalidParam { name: "m_cap", .. })));
        let p = MarketParams { gamma: 0.0, ..Default::default() };
        assert!(p.validate().is_err());
        let p = MarketParams { c: f64::NAN, ..Default::default() };
        assert!(p.validate().is_err());
    }

    #[test]
    fn delta_roundtrip() {
        let p = MarketParams::default().with_delta(-0.5);
        assert_eq!(p.delta(), -0.5);
    }
}
