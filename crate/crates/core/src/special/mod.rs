//! Gamma-family functions, Laguerre polynomials of arbitrary real order and
//! Bessel functions of the first kind (J and I) of real order.

mod bessel;
mod dd;
mod gamma;
mod laguerre;

pub use bessel::{
    bessel_i, bessel_i_plain, bessel_j, bessel_j_plain, scaled_bessel_i, scaled_bessel_j,
};
pub use dd::CompensatedReal;
pub use gamma::{
    beta_fn, gamma, generalized_binomial, ln_gamma, pochhammer, pochhammer_ratio, reciprocal_gamma,
};
pub use laguerre::{
    laguerre, laguerre_by_recurrence, laguerre_by_sum, laguerre_compensated, laguerre_sequence,
    laguerre_sequence_compensated, EXPLICIT_SUM_MAX_DEGREE,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Distance from a negative integer below which an order is classified as that integer.
pub const NEGATIVE_INTEGER_TOLERANCE: f64 = 1e-12;

/// A real function order (alpha, beta, nu) with explicit negative-integer detection.
///
/// Several identities change discontinuously when an order is a negative
/// integer, so the classification is made once, on construction, and the stored
/// value is snapped to the exact integer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Order {
    value: f64,
    negative_integer: Option<u32>,
}

impl Order {
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::NonFiniteOrder(value));
        }
        let nearest = value.round();
        if value < 0.0
            && nearest <= -1.0
            && (value - nearest).abs() <= NEGATIVE_INTEGER_TOLERANCE
            && nearest >= -(u32::MAX as f64)
        {
            return Ok(Self {
                value: nearest,
                negative_integer: Some((-nearest) as u32),
            });
        }
        Ok(Self {
            value,
            negative_integer: None,
        })
    }

    /// Shorthand for literals known to be finite. Panics on NaN or infinity.
    pub fn of(value: f64) -> Self {
        Self::new(value).expect("finite order")
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.value
    }

    /// `Some(n)` when the order equals `-n` with `n >= 1`.
    #[inline]
    pub fn negative_integer(self) -> Option<u32> {
        self.negative_integer
    }

    #[inline]
    pub fn is_negative_integer(self) -> bool {
        self.negative_integer.is_some()
    }

    /// `Some(n)` when the order is an integer (of either sign, within tolerance).
    pub fn as_integer(self) -> Option<i64> {
        if let Some(n) = self.negative_integer {
            return Some(-(n as i64));
        }
        let nearest = self.value.round();
        ((self.value - nearest).abs() <= NEGATIVE_INTEGER_TOLERANCE && nearest.abs() < 1e15)
            .then_some(nearest as i64)
    }

    /// Order shifted by a real amount, reclassified.
    pub fn shifted(self, delta: f64) -> Self {
        Self::of(self.value + delta)
    }
}

impl TryFrom<f64> for Order {
    type Error = Error;
    fn try_from(value: f64) -> Result<Self> {
        Self::new(value)
    }
}

impl From<Order> for f64 {
    fn from(o: Order) -> f64 {
        o.value
    }
}
