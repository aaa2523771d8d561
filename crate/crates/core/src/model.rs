//! Domain types and stage-3 primitives: transport costs, end-user
//! utilities, the hotelling subscription split, outside-option demand and
//! provider payoff accounting.

use crate::{Error, MarketParams, Result};

/// Spectrum leased by `SP_L` (`i_l`) and the share of it used by `SP_F`
/// (`i_f`). Always `0 <= i_f <= i_l`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Allocation {
    i_l: f64,
    i_f: f64,
}

impl Allocation {
    /// Builds an allocation, checking `0 <= i_f <= i_l` and finiteness.
    pub fn new(i_l: f64, i_f: f64) -> Result<Self> {
        if !(i_l.is_finite() && i_f.is_finite()) {
            return Err(Error::InfeasibleAllocation { i_l, i_f, reason: "non-finite value" });
        }
        if i_f < 0.0 {
            return Err(Error::InfeasibleAllocation { i_l, i_f, reason: "i_f < 0" });
        }
        if i_f > i_l {
            return Err(Error::InfeasibleAllocation { i_l, i_f, reason: "i_f > i_l" });
        }
        Ok(Self { i_l, i_f })
    }

    /// Spectrum leased by `SP_L` from the regulator.
    #[inline]
    pub fn i_l(&self) -> f64 {
        self.i_l
    }

    /// Spectrum used by `SP_F`.
    #[inline]
    pub fn i_f(&self) -> f64 {
        self.i_f
    }

    /// Degree of cooperation `i_f / i_l`.
    #[inline]
    pub fn ratio(&self) -> f64 {
        self.i_f / self.i_l
    }

    /// Checks `l0 <= i_l <= m_cap`.
    pub fn validate_against(&self, params: &MarketParams) -> Result<()> {
        if self.i_l < params.l0 {
            return Err(Error::InfeasibleAllocation { i_l: self.i_l, i_f: self.i_f, reason: "i_l below l0" });
        }
        if self.i_l > params.spectrum_cap() {
            return Err(Error::InfeasibleAllocation { i_l: self.i_l, i_f: self.i_f, reason: "i_l above m_cap" });
        }
        Ok(())
    }

    /// Both components multiplied by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.i_l * factor, self.i_f * factor)
    }
}

/// Unit transport costs toward each provider.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransportCosts {
    /// Toward `SP_L`, equal to `i_f / i_l`.
    pub t_l: f64,
    /// Toward `SP_F`, equal to `1 - t_l`.
    pub t_f: f64,
}

/// Access fees charged to end users.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PriceProfile {
    /// Fee of `SP_L`.
    pub p_l: f64,
    /// Fee of `SP_F`.
    pub p_f: f64,
}

impl PriceProfile {
    /// Shorthand constructor.
    pub const fn new(p_l: f64, p_f: f64) -> Self {
        Self { p_l, p_f }
    }

    /// Same fees with the roles of the providers exchanged.
    pub const fn swapped(self) -> Self {
        Self { p_l: self.p_f, p_f: self.p_l }
    }
}

/// Split of the common end-user pool.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubscriptionSplit {
    /// Fraction subscribing to `SP_L`.
    pub n_l: f64,
    /// Fraction subscribing to `SP_F`.
    pub n_f: f64,
    /// Location of the indifferent user before clamping to `[0, 1]`.
    pub x0: f64,
}

/// Demand-adjusted subscription levels of the outside-option game.
///
/// Levels are unit-free; only `alpha` rescales them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutsideSubscriptions {
    /// Level for `SP_L`.
    pub n_tilde_l: f64,
    /// Level for `SP_F`.
    pub n_tilde_f: f64,
}

impl OutsideSubscriptions {
    /// `false` when either level is negative, which marks the parameter
    /// point as outside the model.
    pub fn is_feasible(&self) -> bool {
        self.n_tilde_l >= 0.0 && self.n_tilde_f >= 0.0
    }
}

/// Marginal reservation fee paid by `SP_F` to `SP_L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReservationFee {
    /// A fee per squared unit of used spectrum.
    Fee(f64),
    /// `i_f = 0`: the fee has no effect and carries no value.
    NotSignificant,
}

impl ReservationFee {
    /// The numeric fee, if significant.
    pub fn value(&self) -> Option<f64> {
        match *self {
            Self::Fee(v) => Some(v),
            Self::NotSignificant => None,
        }
    }
}

/// Money transfers between the providers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoneyFlows {
    /// Reservation fee `s̃`.
    pub s_tilde: ReservationFee,
    /// Lump-sum remuneration from `SP_L` to `SP_F` (signed).
    pub theta: f64,
}

impl MoneyFlows {
    /// Net transfer from `SP_F` to `SP_L` given the spectrum `SP_F` uses.
    pub fn net_to_leader(&self, i_f: f64) -> Result<f64> {
        let fee = match self.s_tilde {
            ReservationFee::Fee(s) => s * i_f * i_f,
            ReservationFee::NotSignificant if i_f == 0.0 => 0.0,
            ReservationFee::NotSignificant => return Err(Error::FlowSpecification { i_f }),
        };
        Ok(fee - self.theta)
    }
}

/// Payoffs of the two providers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PayoffPair {
    /// Payoff of `SP_L`.
    pub pi_l: f64,
    /// Payoff of `SP_F`.
    pub pi_f: f64,
}

impl PayoffPair {
    /// `pi_l + pi_f`.
    pub fn total(&self) -> f64 {
        self.pi_l + self.pi_f
    }
}

/// Where a disagreement point came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    /// Closed form for `|Δ| >= 1`.
    CornerClosedForm,
    /// Numerical backward induction of the non-cooperative game.
    NumericalPart1,
    /// Given by the caller.
    UserSupplied,
}

impl Provenance {
    /// Stable identifier used in CSV output.
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::CornerClosedForm => "corner-closed-form",
            Self::NumericalPart1 => "numerical-part1",
            Self::UserSupplied => "user-supplied",
        }
    }
}

/// Payoffs the providers receive if bargaining fails.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisagreementPoint {
    /// Fallback payoff of `SP_L`.
    pub d_l: f64,
    /// Fallback payoff of `SP_F`.
    pub d_f: f64,
    /// Source of the values.
    pub provenance: Provenance,
}

impl DisagreementPoint {
    /// A caller-supplied point.
    pub const fn user(d_l: f64, d_f: f64) -> Self {
        Self { d_l, d_f, provenance: Provenance::UserSupplied }
    }

    /// The origin, `(0, 0)`.
    pub const fn zero() -> Self {
        Self::user(0.0, 0.0)
    }

    /// `d_l + d_f`.
    pub fn total(&self) -> f64 {
        self.d_l + self.d_f
    }
}

/// Transport costs `(i_f / i_l, 1 - i_f / i_l)`.
pub fn transport_costs(alloc: &Allocation) -> Result<TransportCosts> {
    if alloc.i_l() <= 0.0 {
        return Err(Error::DegenerateAllocation);
    }
    let t_l = alloc.ratio();
    Ok(TransportCosts { t_l, t_f: 1.0 - t_l })
}

/// Utilities `(u_l, u_f)` of the end user at location `x ∈ [0, 1]`.
pub fn eu_utilities(x: f64, prices: &PriceProfile, t: &TransportCosts, params: &MarketParams) -> (f64, f64) {
    debug_assert!((0.0..=1.0).contains(&x));
    let u_l = params.v_l - (prices.p_l + t.t_l * x);
    let u_f = params.v_f - (prices.p_f + t.t_f * (1.0 - x));
    (u_l, u_f)
}

/// Hotelling split of the common pool. The indifferent location is clamped
/// to `[0, 1]`.
pub fn hotelling_split(prices: &PriceProfile, t: &TransportCosts, params: &MarketParams) -> SubscriptionSplit {
    // u_l(x) = u_f(x)  <=>  (t_l + t_f) x = Δ + p_f - p_l + t_f, with t_l + t_f = 1
    let x0 = params.delta() + prices.p_f - prices.p_l + t.t_f;
    let n_l = x0.clamp(0.0, 1.0);
    SubscriptionSplit { n_l, n_f: 1.0 - n_l, x0 }
}

/// Provider payoffs in the base case.
pub fn base_payoffs(
    alloc: &Allocation,
    prices: &PriceProfile,
    split: &SubscriptionSplit,
    flows: &MoneyFlows,
    params: &MarketParams,
) -> Result<PayoffPair> {
    let transfer = flows.net_to_leader(alloc.i_f())?;
    let pi_f = split.n_f * (prices.p_f - params.c) - transfer;
    let pi_l = split.n_l * (prices.p_l - params.c) + transfer - params.gamma * alloc.i_l() * alloc.i_l();
    Ok(PayoffPair { pi_l, pi_f })
}

/// Demand-adjusted subscriptions with the outside option and exclusive
/// customer bases. Negative levels are returned as is; check
/// [`OutsideSubscriptions::is_feasible`].
pub fn outside_demand(
    prices: &PriceProfile,
    alloc: &Allocation,
    split: &SubscriptionSplit,
    params: &MarketParams,
) -> OutsideSubscriptions {
    let phi_l = params.k - prices.p_l + params.b * (alloc.i_l() - alloc.i_f());
    let phi_f = params.k - prices.p_f + params.b * alloc.i_f();
    OutsideSubscriptions {
        n_tilde_l: params.alpha * (split.n_l + phi_l),
        n_tilde_f: params.alpha * (split.n_f + phi_f),
    }
}

/// Provider payoffs in the outside-option game.
pub fn outside_payoffs(
    alloc: &Allocation,
    prices: &PriceProfile,
    demand: &OutsideSubscriptions,
    flows: &MoneyFlows,
    params: &MarketParams,
) -> Result<PayoffPair> {
    let transfer = flows.net_to_leader(alloc.i_f())?;
    let pi_f = demand.n_tilde_f * (prices.p_f - params.c) - transfer;
    let pi_l = demand.n_tilde_l * (prices.p_l - params.c) + transfer - params.gamma * alloc.i_l() * alloc.i_l();
    Ok(PayoffPair { pi_l, pi_f })
}
