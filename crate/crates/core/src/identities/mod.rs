//! Catalog of Bessel-function identities, each evaluated as a residual `lhs - rhs`.
//!
//! Integral sides are reduced to `int_0^1 r^a (1-r)^b phi(r) dr` with `phi`
//! built from scaled Bessel functions, so every integrand is bounded and the
//! algebraic endpoint behaviour is carried by the weight alone.

mod catalog;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::{scaled_bessel_i, scaled_bessel_j, Order};

pub use catalog::{
    fractional_integral_identity, ij_anomalous_closed_form, ij_anomalous_terms, ij_generalized,
    ij_identity, order_sum_identity, pi_identity, sonine_generalized, sonine_integral,
    sonine_second, ORDER_SUM_MAX_TERMS,
};

/// Largest admissible |x|, |y|.
pub const MAX_ARGUMENT: f64 = 25.0;
pub const MIN_ORDER: f64 = -6.0;
pub const MAX_ORDER: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IdentityId {
    SonineSecond,
    SonineGeneralized,
    Ij,
    IjGeneralized,
    Pi,
    OrderSum,
    FractionalIntegral,
}

impl IdentityId {
    pub const ALL: [IdentityId; 7] = [
        IdentityId::SonineSecond,
        IdentityId::SonineGeneralized,
        IdentityId::Ij,
        IdentityId::IjGeneralized,
        IdentityId::Pi,
        IdentityId::OrderSum,
        IdentityId::FractionalIntegral,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            IdentityId::SonineSecond => "sonine-second",
            IdentityId::SonineGeneralized => "sonine-generalized",
            IdentityId::Ij => "ij",
            IdentityId::IjGeneralized => "ij-generalized",
            IdentityId::Pi => "pi",
            IdentityId::OrderSum => "order-sum",
            IdentityId::FractionalIntegral => "fractional-integral",
        }
    }

    /// One-line description for listings.
    pub fn summary(self) -> &'static str {
        match self {
            IdentityId::SonineSecond => "Sonine's second integral for orders > -1 (alpha, beta, x, y)",
            IdentityId::SonineGeneralized => {
                "Sonine integral with negative-integer orders and anomalous sums (alpha, beta, x, y)"
            }
            IdentityId::Ij => "I-J integral for alpha > beta >= 0 (alpha, beta, x)",
            IdentityId::IjGeneralized => {
                "I-J integral for negative-integer beta with derivative terms (alpha, beta, x)"
            }
            IdentityId::Pi => "pi J_nu(x)^2 as an integral of J_{2 nu} (nu, x)",
            IdentityId::OrderSum => "Neumann-type sum over Bessel orders (alpha, x, y)",
            IdentityId::FractionalIntegral => "fractional integral of y^{alpha+1} J_alpha(y) (alpha, beta, x)",
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IdentityId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        IdentityId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown identity id `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityParams {
    pub alpha: Order,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<Order>,
    pub x: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<Order>,
}

impl IdentityParams {
    pub fn new(alpha: f64, x: f64) -> Result<Self> {
        Ok(Self {
            alpha: Order::new(alpha)?,
            beta: None,
            x,
            y: None,
            nu: None,
        })
    }

    pub fn with_beta(mut self, beta: f64) -> Result<Self> {
        self.beta = Some(Order::new(beta)?);
        Ok(self)
    }

    pub fn with_y(mut self, y: f64) -> Self {
        self.y = Some(y);
        self
    }

    pub fn with_nu(mut self, nu: f64) -> Result<Self> {
        self.nu = Some(Order::new(nu)?);
        Ok(self)
    }

    /// Shorthand for tests and literals; panics on non-finite orders.
    pub fn sonine(alpha: f64, beta: f64, x: f64, y: f64) -> Self {
        Self::new(alpha, x).and_then(|p| p.with_beta(beta)).expect("finite orders").with_y(y)
    }

    /// Checks the argument and order ranges shared by the whole catalog.
    pub fn validate(&self) -> Result<()> {
        let arg_ok = |v: f64| v > 0.0 && v <= MAX_ARGUMENT;
        if !arg_ok(self.x) {
            return Err(Error::domain(format!("x = {} outside (0, {MAX_ARGUMENT}]", self.x)));
        }
        if let Some(y) = self.y {
            if !arg_ok(y) {
                return Err(Error::domain(format!("y = {y} outside (0, {MAX_ARGUMENT}]")));
            }
        }
        for (name, o) in [("alpha", Some(self.alpha)), ("beta", self.beta), ("nu", self.nu)] {
            if let Some(o) = o {
                if !(MIN_ORDER..=MAX_ORDER).contains(&o.value()) {
                    return Err(Error::domain(format!(
                        "{name} = {} outside [{MIN_ORDER}, {MAX_ORDER}]",
                        o.value()
                    )));
                }
            }
        }
        Ok(())
    }

    pub(crate) fn require_beta(&self) -> Result<Order> {
        self.beta
            .ok_or_else(|| Error::InvalidArgument("this identity needs beta".into()))
    }

    pub(crate) fn require_y(&self) -> Result<f64> {
        self.y.ok_or_else(|| Error::InvalidArgument("this identity needs y".into()))
    }

    pub(crate) fn require_nu(&self) -> Result<Order> {
        self.nu.ok_or_else(|| Error::InvalidArgument("this identity needs nu".into()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    ConjecturePass,
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::ConjecturePass => "conjecture-pass",
            Status::Error => "error",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Residual acceptance: `|lhs - rhs| <= max(abs, rel * max(|lhs|, |rhs|))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub abs: f64,
    pub rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { abs: 1e-9, rel: 1e-9 }
    }
}

impl Tolerances {
    pub fn accepts(&self, lhs: f64, rhs: f64, abs_residual: f64) -> bool {
        abs_residual <= self.abs.max(self.rel * lhs.abs().max(rhs.abs()))
    }
}

/// JSON has no non-finite numbers: NaN is written as `null`, infinities as the
/// strings `"inf"` / `"-inf"`. All three read back to the same value.
pub mod nullable_f64 {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if v.is_nan() {
            s.serialize_none()
        } else if *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Number(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Option::<Repr>::deserialize(d)? {
            None => Ok(f64::NAN),
            Some(Repr::Number(v)) => Ok(v),
            Some(Repr::Text(t)) => match t.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "NaN" => Ok(f64::NAN),
                _ => Err(D::Error::custom(format!("expected a number, null, \"inf\" or \"-inf\", got {t:?}"))),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity_id: IdentityId,
    pub params: IdentityParams,
    #[serde(with = "nullable_f64")]
    pub lhs: f64,
    #[serde(with = "nullable_f64")]
    pub rhs: f64,
    /// Total anomalous contribution; 0 when the identity has none at these parameters.
    #[serde(with = "nullable_f64")]
    pub anomalous: f64,
    #[serde(with = "nullable_f64")]
    pub abs_residual: f64,
    #[serde(with = "nullable_f64")]
    pub rel_residual: f64,
    /// Absolute numerical error estimate of the evaluated sides (quadrature or series tail).
    #[serde(with = "nullable_f64")]
    pub quadrature_error: f64,
    pub status: Status,
    /// Largest disagreement between independent evaluations, when more than one exists.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cross_check: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    /// Whether the parameters lie in a regime supported by numerical evidence only.
    #[serde(default)]
    pub conjectural: bool,
}

impl IdentityReport {
    pub(crate) fn new(
        identity_id: IdentityId,
        params: IdentityParams,
        lhs: f64,
        rhs: f64,
        anomalous: f64,
        quadrature_error: f64,
    ) -> Self {
        let abs_residual = (lhs - rhs).abs();
        let rel_residual = abs_residual / lhs.abs().max(rhs.abs()).max(1e-30);
        let mut report = Self {
            identity_id,
            params,
            lhs,
            rhs,
            anomalous,
            abs_residual,
            rel_residual,
            quadrature_error,
            status: Status::Fail,
            cross_check: None,
            message: None,
            conjectural: false,
        };
        report.apply_tolerances(&Tolerances::default());
        report
    }

    /// Report for a check that could not be evaluated.
    pub fn failed_evaluation(identity_id: IdentityId, params: IdentityParams, err: &Error) -> Self {
        Self {
            identity_id,
            params,
            lhs: f64::NAN,
            rhs: f64::NAN,
            anomalous: f64::NAN,
            abs_residual: f64::NAN,
            rel_residual: f64::NAN,
            quadrature_error: f64::NAN,
            status: Status::Error,
            cross_check: None,
            message: Some(err.to_string()),
            conjectural: false,
        }
    }

    pub(crate) fn conjecture(mut self) -> Self {
        self.conjectural = true;
        let t = Tolerances::default();
        self.apply_tolerances(&t);
        self
    }

    /// Recomputes `status` under `tol`. Error reports stay errors.
    pub fn apply_tolerances(&mut self, tol: &Tolerances) {
        if self.status == Status::Error && self.message.is_some() {
            return;
        }
        let ok = self.abs_residual.is_finite() && tol.accepts(self.lhs, self.rhs, self.abs_residual);
        self.status = match (ok, self.conjectural) {
            (true, false) => Status::Pass,
            (true, true) => Status::ConjecturePass,
            (false, _) => Status::Fail,
        };
    }
}

/// Evaluates one identity; precondition and numerical failures become `Status::Error`.
pub fn evaluate(id: IdentityId, params: &IdentityParams, tol: &Tolerances) -> IdentityReport {
    let result = match id {
        IdentityId::SonineSecond => sonine_second(params),
        IdentityId::SonineGeneralized => sonine_generalized(params),
        IdentityId::Ij => ij_identity(params),
        IdentityId::IjGeneralized => ij_generalized(params),
        IdentityId::Pi => pi_identity(params),
        IdentityId::OrderSum => order_sum_identity(params),
        IdentityId::FractionalIntegral => fractional_integral_identity(params),
    };
    match result {
        Ok(mut report) => {
            report.apply_tolerances(tol);
            report
        }
        Err(e) => IdentityReport::failed_evaluation(id, *params, &e),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Kind {
    J,
    I,
}

/// `K_a(sqrt(s) x)` written as `s^{s_power} x^{x_power} g(sqrt(s) x)` with `g`
/// bounded near 0, for K = J or I. Negative-integer orders are reflected first.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SqrtBessel {
    kind: Kind,
    scaled_order: Order,
    sign: f64,
    pub s_power: f64,
    pub x_power: f64,
}

impl SqrtBessel {
    pub fn new(kind: Kind, order: Order) -> Self {
        match order.negative_integer() {
            Some(n) => {
                let nf = n as f64;
                let sign = if kind == Kind::J && n % 2 == 1 { -1.0 } else { 1.0 };
                Self {
                    kind,
                    scaled_order: Order::of(nf),
                    sign,
                    s_power: nf / 2.0,
                    x_power: nf,
                }
            }
            None => Self {
                kind,
                scaled_order: order,
                sign: 1.0,
                s_power: order.value() / 2.0,
                x_power: order.value(),
            },
        }
    }

    /// `g(z)`; NaN if the kernel fails, which the quadrature then reports.
    pub fn g(&self, z: f64) -> f64 {
        let v = match self.kind {
            Kind::J => scaled_bessel_j(self.scaled_order, z),
            Kind::I => scaled_bessel_i(self.scaled_order, z),
        };
        self.sign * v.unwrap_or(f64::NAN)
    }
}
