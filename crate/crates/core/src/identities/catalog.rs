use std::f64::consts::PI;

use super::{IdentityId, IdentityParams, IdentityReport, Kind, SqrtBessel};
use crate::error::{Error, Result};
use crate::jet::{bessel_i_of_sqrt_jet, Jet, MAX_JET_ORDER};
use crate::quadrature::{
    integrate_weighted_with, EndpointProfile, QuadratureResult, Tolerance, DEFAULT_TOLERANCE,
};
use crate::special::{bessel_i, bessel_j, gamma, reciprocal_gamma, scaled_bessel_j, Order};

/// Cap on the number of terms of the order sum.
pub const ORDER_SUM_MAX_TERMS: usize = 200;
const ORDER_SUM_STOP_RATIO: f64 = 1e-16;
const ORDER_SUM_STOP_RUN: usize = 5;

/// Relative quadrature target; large-magnitude sides cannot meet an absolute 1e-12.
const QUADRATURE_REL_TOLERANCE: f64 = 1e-13;

/// `factor * int_0^1 r^left (1-r)^right phi`, converged to [`DEFAULT_TOLERANCE`]
/// absolute or [`QUADRATURE_REL_TOLERANCE`] relative in the scaled units.
fn weighted_integral<F: Fn(f64, f64) -> f64>(
    left: f64,
    right: f64,
    factor: f64,
    phi: F,
) -> Result<QuadratureResult> {
    let profile = EndpointProfile::new(left, right)?;
    if !(factor.is_finite() && factor != 0.0) {
        return Err(Error::domain(format!("integral prefactor {factor} is not usable")));
    }
    let tol = Tolerance {
        abs: DEFAULT_TOLERANCE / factor.abs(),
        rel: QUADRATURE_REL_TOLERANCE,
    };
    let q = integrate_weighted_with(profile, phi, tol)?;
    if !q.converged {
        return Err(Error::QuadratureNotConverged {
            estimate: q.error_estimate * factor.abs(),
            tolerance: tol.bound(q.value) * factor.abs(),
        });
    }
    Ok(scaled(q, factor))
}

fn scaled(q: QuadratureResult, factor: f64) -> QuadratureResult {
    QuadratureResult {
        value: q.value * factor,
        error_estimate: q.error_estimate * factor.abs(),
        ..q
    }
}

fn above_minus_one_or_negative_integer(o: Order) -> bool {
    o.value() > -1.0 || o.is_negative_integer()
}

/// `x^-alpha y^-beta int_0^1 r^{alpha/2} (1-r)^{beta/2} J_alpha(sqrt(r) x) J_beta(sqrt(1-r) y) dr`.
///
/// Defined for each order either > -1 or a negative integer.
pub fn sonine_integral(alpha: Order, beta: Order, x: f64, y: f64) -> Result<QuadratureResult> {
    if !above_minus_one_or_negative_integer(alpha) || !above_minus_one_or_negative_integer(beta) {
        return Err(Error::domain(format!(
            "orders ({}, {}) must each be > -1 or a negative integer",
            alpha.value(),
            beta.value()
        )));
    }
    let ja = SqrtBessel::new(Kind::J, alpha);
    let jb = SqrtBessel::new(Kind::J, beta);
    let left = alpha.value() / 2.0 + ja.s_power;
    let right = beta.value() / 2.0 + jb.s_power;
    let factor = x.powf(ja.x_power - alpha.value()) * y.powf(jb.x_power - beta.value());
    weighted_integral(left, right, factor, |r, s| ja.g(r.sqrt() * x) * jb.g(s.sqrt() * y))
}

fn radius(x: f64, y: f64) -> f64 {
    x.hypot(y)
}

pub fn sonine_second(params: &IdentityParams) -> Result<IdentityReport> {
    params.validate()?;
    let (alpha, beta, x, y) = (params.alpha, params.require_beta()?, params.x, params.require_y()?);
    if alpha.value() <= -1.0 || beta.value() <= -1.0 {
        return Err(Error::domain(format!(
            "sonine-second needs both orders > -1, got ({}, {}); use sonine-generalized",
            alpha.value(),
            beta.value()
        )));
    }
    let q = sonine_integral(alpha, beta, x, y)?;
    let rhs = 2.0 * scaled_bessel_j(Order::new(alpha.value() + beta.value() + 1.0)?, radius(x, y))?;
    Ok(IdentityReport::new(IdentityId::SonineSecond, *params, q.value, rhs, 0.0, q.error_estimate))
}

/// `v^{-a-b-1} sum_{j<n} (-u^2/2v)^j / j! J_{a+b+j+1}(v)` for `a = -n`, else 0.
fn sonine_anomalous_sum(a: Order, b: Order, u: f64, v: f64) -> Result<f64> {
    let Some(n) = a.negative_integer() else {
        return Ok(0.0);
    };
    let ratio = -u * u / (2.0 * v);
    let base = a.value() + b.value() + 1.0;
    let mut coeff = 1.0;
    let mut sum = 0.0;
    for j in 0..n {
        if j > 0 {
            coeff *= ratio / j as f64;
        }
        sum += coeff * bessel_j(Order::new(base + j as f64)?, v)?;
    }
    Ok(v.powf(-base) * sum)
}

pub fn sonine_generalized(params: &IdentityParams) -> Result<IdentityReport> {
    params.validate()?;
    let (alpha, beta, x, y) = (params.alpha, params.require_beta()?, params.x, params.require_y()?);
    let q = scaled(sonine_integral(alpha, beta, x, y)?, 0.5);
    let main = scaled_bessel_j(Order::new(alpha.value() + beta.value() + 1.0)?, radius(x, y))?;
    let anomalous = sonine_anomalous_sum(alpha, beta, x, y)? + sonine_anomalous_sum(beta, alpha, y, x)?;
    Ok(IdentityReport::new(
        IdentityId::SonineGeneralized,
        *params,
        q.value,
        main - anomalous,
        anomalous,
        q.error_estimate,
    ))
}

/// `2^beta x^-beta int_0^1 r^{-beta/2-1} (1-r)^{beta/2} I_alpha(sqrt(r) x) J_beta(sqrt(1-r) x) dr`.
fn ij_integral(alpha: Order, beta: Order, x: f64) -> Result<QuadratureResult> {
    let ia = SqrtBessel::new(Kind::I, alpha);
    let jb = SqrtBessel::new(Kind::J, beta);
    let b = beta.value();
    let left = -b / 2.0 - 1.0 + ia.s_power;
    let right = b / 2.0 + jb.s_power;
    let factor = 2f64.powf(b) * x.powf(-b + ia.x_power + jb.x_power);
    weighted_integral(left, right, factor, |r, s| ia.g(r.sqrt() * x) * jb.g(s.sqrt() * x))
}

fn check_ij_convergence(alpha: Order, beta: Order) -> Result<()> {
    if alpha.value() - beta.value() <= 0.0 {
        return Err(Error::domain(format!(
            "the I-J integral diverges unless alpha > beta, got ({}, {})",
            alpha.value(),
            beta.value()
        )));
    }
    Ok(())
}

pub fn ij_identity(params: &IdentityParams) -> Result<IdentityReport> {
    params.validate()?;
    let (alpha, beta, x) = (params.alpha, params.require_beta()?, params.x);
    if alpha.value() < 0.0 || beta.value() < 0.0 {
        return Err(Error::domain(format!(
            "ij needs alpha, beta >= 0, got ({}, {}); negative-integer beta is ij-generalized",
            alpha.value(),
            beta.value()
        )));
    }
    check_ij_convergence(alpha, beta)?;
    let (a, b) = (alpha.value(), beta.value());
    let prefactor = reciprocal_gamma((a - b) / 2.0);
    let q = scaled(ij_integral(alpha, beta, x)?, prefactor);
    let rhs = bessel_j(alpha, x)? * reciprocal_gamma((a + b) / 2.0 + 1.0);
    Ok(IdentityReport::new(IdentityId::Ij, *params, q.value, rhs, 0.0, q.error_estimate))
}

/// Derivative terms of the I-J identity at `beta = -n`:
/// `sum_{p<n} (-x^2/4)^p / p! * d^{n-1-p}/dr^{n-1-p} [r^{n/2-1} I_alpha(sqrt(r) x)]` at r = 1,
/// with the derivatives from Taylor jets.
pub fn ij_anomalous_terms(alpha: Order, n: u32, x: f64) -> Result<f64> {
    if n == 0 {
        return Ok(0.0);
    }
    let k = n as usize - 1;
    if k > MAX_JET_ORDER {
        return Err(Error::JetOrderExceeded {
            requested: k,
            order: MAX_JET_ORDER,
        });
    }
    let r = Jet::variable(k, 1.0);
    let g = r.powf(n as f64 / 2.0 - 1.0)?.mul(&bessel_i_of_sqrt_jet(alpha, x, k)?)?;
    let step = -x * x / 4.0;
    let mut coeff = 1.0;
    let mut sum = 0.0;
    for p in 0..=k {
        if p > 0 {
            coeff *= step / p as f64;
        }
        sum += coeff * g.derivative_at_base(k - p)?;
    }
    Ok(sum)
}

/// Closed forms of [`ij_anomalous_terms`] for n = 1, 2, 3; `None` otherwise.
pub fn ij_anomalous_closed_form(alpha: Order, n: u32, x: f64) -> Option<Result<f64>> {
    let i = |shift: f64| bessel_i(alpha.shifted(shift), x);
    let a = alpha.value();
    let value = match n {
        1 => i(0.0),
        2 => (|| Ok(x / 4.0 * (i(-1.0)? - x * i(0.0)? + i(1.0)?)))(),
        3 => (|| {
            let x2 = x * x;
            let c = (8.0 * (a * a - 1.0) + 4.0 * (a + 1.0) * x2 + x2 * x2) / 32.0;
            Ok(-x2 * x / 8.0 * i(-1.0)? + c * i(0.0)?)
        })(),
        _ => return None,
    };
    Some(value)
}

pub fn ij_generalized(params: &IdentityParams) -> Result<IdentityReport> {
    params.validate()?;
    let (alpha, beta, x) = (params.alpha, params.require_beta()?, params.x);
    let Some(n) = beta.negative_integer() else {
        return Err(Error::domain(format!(
            "ij-generalized needs a negative-integer beta, got {}; use ij",
            beta.value()
        )));
    };
    check_ij_convergence(alpha, beta)?;
    let (a, b) = (alpha.value(), beta.value());
    let q = ij_integral(alpha, beta, x)?;
    let anomalous = ij_anomalous_terms(alpha, n, x)?;
    let lhs = q.value + anomalous;
    let rhs = gamma((a - b) / 2.0)? * reciprocal_gamma((a + b) / 2.0 + 1.0) * bessel_j(alpha, x)?;
    let mut report = IdentityReport::new(IdentityId::IjGeneralized, *params, lhs, rhs, anomalous, q.error_estimate);
    if let Some(closed) = ij_anomalous_closed_form(alpha, n, x) {
        let lhs_closed = q.value + closed?;
        let spread = (lhs - lhs_closed).abs().max((lhs - rhs).abs()).max((lhs_closed - rhs).abs());
        report.cross_check = Some(spread);
    }
    Ok(report)
}

pub fn pi_identity(params: &IdentityParams) -> Result<IdentityReport> {
    params.validate()?;
    let (nu, x) = (params.require_nu()?, params.x);
    if nu.value() <= -0.5 {
        return Err(Error::domain(format!("pi identity needs nu > -1/2, got {}", nu.value())));
    }
    // J_{2nu}(2 sqrt(r) x) = r^nu (2x)^{2nu} g(2 sqrt(r) x)
    let j = SqrtBessel::new(Kind::J, Order::new(2.0 * nu.value())?);
    let z = 2.0 * x;
    let q = weighted_integral(j.s_power - 0.5, -0.5, z.powf(j.x_power), |r, _| j.g(r.sqrt() * z))?;
    let jn = bessel_j(nu, x)?;
    let rhs = PI * jn * jn;
    let report = IdentityReport::new(IdentityId::Pi, *params, q.value, rhs, 0.0, q.error_estimate);
    let proven = matches!(nu.as_integer(), Some(k) if k >= 0);
    Ok(if proven { report } else { report.conjecture() })
}

pub fn order_sum_identity(params: &IdentityParams) -> Result<IdentityReport> {
    params.validate()?;
    let (alpha, x, y) = (params.alpha, params.x, params.require_y()?);
    let a = alpha.value();
    let w = y * y / (2.0 * x);
    let x_scale = x.powf(-a);
    let mut coeff = 1.0;
    let mut sum = 0.0;
    let mut abs_sum = 0.0;
    let mut run = 0;
    let mut last = None;
    for m in 0..=ORDER_SUM_MAX_TERMS {
        if m > 0 {
            coeff *= -w / m as f64;
        }
        let term = coeff * x_scale * bessel_j(Order::new(a + m as f64)?, x)?;
        sum += term;
        abs_sum += term.abs();
        if term.abs() < ORDER_SUM_STOP_RATIO * sum.abs() {
            run += 1;
            if run >= ORDER_SUM_STOP_RUN {
                last = Some(m);
                break;
            }
        } else {
            run = 0;
        }
    }
    let Some(m_last) = last else {
        return Err(Error::SeriesNotConverged {
            terms: ORDER_SUM_MAX_TERMS + 1,
        });
    };
    // |J_v(x)| <= (x/2)^v / Gamma(v+1) for v >= -1/2 bounds term m by
    // 2^-a (y^2/4)^m / (m! Gamma(a+m+1)); the ratio of successive bounds decreases.
    let q4 = y * y / 4.0;
    let m1 = (m_last + 1) as f64;
    let tail = if a + m1 >= -0.5 {
        let ln_bound = -a * 2f64.ln() + m1 * q4.ln() - crate::special::ln_gamma(m1 + 1.0)?;
        let bound = ln_bound.exp() * reciprocal_gamma(a + m1 + 1.0).abs();
        let ratio = q4 / ((m1 + 1.0) * (a + m1 + 1.0));
        if ratio < 1.0 {
            bound / (1.0 - ratio)
        } else {
            f64::INFINITY
        }
    } else {
        f64::INFINITY
    };
    let error = tail + 4.0 * f64::EPSILON * abs_sum;
    let rhs = scaled_bessel_j(alpha, radius(x, y))?;
    Ok(IdentityReport::new(IdentityId::OrderSum, *params, sum, rhs, 0.0, error))
}

pub fn fractional_integral_identity(params: &IdentityParams) -> Result<IdentityReport> {
    params.validate()?;
    let (alpha, beta, x) = (params.alpha, params.require_beta()?, params.x);
    let (a, b) = (alpha.value(), beta.value());
    if a <= -1.0 || b <= 0.0 {
        return Err(Error::domain(format!(
            "fractional integral needs alpha > -1 and beta > 0, got ({a}, {b})"
        )));
    }
    // y = x sqrt(s): y^{a+1} (x^2-y^2)^{b-1} J_a(y) dy
    //   = x^{a+2b+x_power}/2 * s^{a/2+s_power} (1-s)^{b-1} g(x sqrt(s)) ds
    let j = SqrtBessel::new(Kind::J, alpha);
    let factor = 0.5 * x.powf(a + 2.0 * b + j.x_power);
    let q = weighted_integral(a / 2.0 + j.s_power, b - 1.0, factor, |s, _| j.g(s.sqrt() * x))?;
    let rhs = 2f64.powf(b - 1.0) * gamma(b)? * x.powf(a + b) * bessel_j(Order::new(a + b)?, x)?;
    Ok(IdentityReport::new(IdentityId::FractionalIntegral, *params, q.value, rhs, 0.0, q.error_estimate))
}
