//! Sequences `f_N(w)` with `f_N(z/N) -> F(z)`, and the law that turns forward
//! differences in `N` into derivatives of `F` along rays.
//!
//! For `f_{N+l}(z/N)` taken as a sequence in `l`, `N^p Delta_l^p` tends to
//! `d^p/dr^p F(rz)` at `r = 1`, i.e. `z^p F^{(p)}(z)`.

use super::LimitPair;
use crate::error::{Error, Result};
use crate::jet::{bessel_i_of_sqrt_jet, Jet};
use crate::special::{bessel_i, gamma, laguerre_compensated, reciprocal_gamma, CompensatedReal, Order};

/// Highest difference order accepted by [`appendix_findiff_limit`].
pub const MAX_APPENDIX_ORDER: u32 = 4;

pub trait AsymptoticFamily: Sync {
    fn name(&self) -> &'static str;

    /// `f_N(w)` in double-double; differences of neighbouring `N` cancel heavily.
    fn evaluate_compensated(&self, n: u64, w: f64) -> Result<CompensatedReal>;

    fn evaluate(&self, n: u64, w: f64) -> Result<f64> {
        self.evaluate_compensated(n, w).map(CompensatedReal::to_f64)
    }

    /// The leading asymptote `F(z)`.
    fn limit(&self, z: f64) -> Result<f64>;

    /// Taylor jet of `r -> F(rz)` at `r = 1`, truncated at `order`.
    fn limit_ray_jet(&self, z: f64, order: usize) -> Result<Jet>;
}

/// `f_N(w) = (1 + w)^N`, so `F = exp`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExpFamily;

impl AsymptoticFamily for ExpFamily {
    fn name(&self) -> &'static str {
        "exp"
    }

    fn evaluate_compensated(&self, n: u64, w: f64) -> Result<CompensatedReal> {
        let e = i32::try_from(n).map_err(|_| Error::domain(format!("N = {n} is out of range")))?;
        Ok(CompensatedReal::sum_of(1.0, w).powi(e))
    }

    fn limit(&self, z: f64) -> Result<f64> {
        Ok(z.exp())
    }

    fn limit_ray_jet(&self, z: f64, order: usize) -> Result<Jet> {
        Ok(Jet::variable(order, 1.0).scale(z).exp())
    }
}

/// The Pochhammer-Laguerre bracket behind the I-J identity at fixed `x`:
///
/// `f_M(w) = w^-c (a)_M / (alpha+1)_M L_M^alpha(-x^2 w / 4)`,
/// `c = (alpha+beta)/2 + 1 - alpha`, `a = (alpha-beta)/2`, with limit
/// `F(z) = Gamma(alpha+1)/Gamma(a) 2^alpha x^-alpha z^{-beta/2-1} I_alpha(sqrt(z) x)`.
#[derive(Debug, Clone, Copy)]
pub struct HansenBracketFamily {
    alpha: Order,
    beta: Order,
    x: f64,
}

impl HansenBracketFamily {
    pub fn new(alpha: Order, beta: Order, x: f64) -> Result<Self> {
        if alpha.is_negative_integer() {
            return Err(Error::domain(format!(
                "(alpha+1)_M vanishes for alpha = {}",
                alpha.value()
            )));
        }
        if !(x.is_finite() && x > 0.0) {
            return Err(Error::domain(format!("x must be positive, got {x}")));
        }
        Ok(Self { alpha, beta, x })
    }

    fn c(&self) -> f64 {
        (self.alpha.value() + self.beta.value()) / 2.0 + 1.0 - self.alpha.value()
    }

    fn a(&self) -> f64 {
        (self.alpha.value() - self.beta.value()) / 2.0
    }

    /// `Gamma(alpha+1)/Gamma(a) 2^alpha x^-alpha`.
    fn prefactor(&self) -> Result<f64> {
        let al = self.alpha.value();
        Ok(gamma(al + 1.0)? * reciprocal_gamma(self.a()) * 2f64.powf(al) * self.x.powf(-al))
    }
}

fn positive_z(z: f64) -> Result<()> {
    if !(z.is_finite() && z > 0.0) {
        return Err(Error::domain(format!("z must be positive, got {z}")));
    }
    Ok(())
}

impl AsymptoticFamily for HansenBracketFamily {
    fn name(&self) -> &'static str {
        "hansen-bracket"
    }

    fn evaluate_compensated(&self, n: u64, w: f64) -> Result<CompensatedReal> {
        positive_z(w)?;
        let m = u32::try_from(n).map_err(|_| Error::domain(format!("N = {n} is out of range")))?;
        let (a, b) = (self.a(), self.alpha.value() + 1.0);
        let mut ratio = CompensatedReal::ONE;
        for i in 0..m {
            ratio = ratio * CompensatedReal::sum_of(a, i as f64) / CompensatedReal::sum_of(b, i as f64);
        }
        let l = laguerre_compensated(m, self.alpha, -self.x * self.x * w / 4.0);
        Ok(ratio * l * w.powf(-self.c()))
    }

    fn limit(&self, z: f64) -> Result<f64> {
        positive_z(z)?;
        let b = self.beta.value();
        Ok(self.prefactor()? * z.powf(-b / 2.0 - 1.0) * bessel_i(self.alpha, z.sqrt() * self.x)?)
    }

    fn limit_ray_jet(&self, z: f64, order: usize) -> Result<Jet> {
        positive_z(z)?;
        let b = self.beta.value();
        let r = Jet::variable(order, 1.0);
        let bessel = bessel_i_of_sqrt_jet(self.alpha, z.sqrt() * self.x, order)?;
        let jet = r.powf(-b / 2.0 - 1.0)?.mul(&bessel)?;
        Ok(jet.scale(self.prefactor()? * z.powf(-b / 2.0 - 1.0)))
    }
}

/// `N^p Delta_l^p f_{N+l}(z/N)` at `l = 0`, against `d^p/dr^p F(rz)` at `r = 1`.
pub fn appendix_findiff_limit(family: &dyn AsymptoticFamily, p: u32, z: f64, n: u64) -> Result<LimitPair> {
    if p > MAX_APPENDIX_ORDER {
        return Err(Error::domain(format!(
            "difference order is limited to {MAX_APPENDIX_ORDER}, got {p}"
        )));
    }
    if n == 0 {
        return Err(Error::domain("N must be a positive integer"));
    }
    let w = z / n as f64;
    let values = (0..=p as u64)
        .map(|l| family.evaluate_compensated(n + l, w))
        .collect::<Result<Vec<_>>>()?;
    let diff = super::finite_difference_compensated(|i| values[(i - n) as usize], n, p);
    let finite = (diff * (n as f64).powi(p as i32)).to_f64();
    let limit = family.limit_ray_jet(z, p as usize)?.derivative_at_base(p as usize)?;
    Ok(LimitPair {
        finite_value: finite,
        limit_value: limit,
    })
}
