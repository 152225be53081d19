//! The finite-N Laguerre side of the Bessel identities.
//!
//! Three kinds of computation live here:
//!
//! * exact finite-N identities between Laguerre polynomials, evaluated in
//!   double-double so that any residual above rounding points at a bug;
//! * large-N limits, where `N^-alpha L_{rN}^alpha(x^2/4N)` tends to a scaled
//!   Bessel function, reported as (finite, limit) pairs;
//! * [`ConvergenceTable`]s that collect such pairs over a list of `N` and fit the
//!   decay rate of the gap.

mod convergence;
mod exact;
mod family;

pub use convergence::{convergence_study, ConvergenceEntry, ConvergenceTable, FitStatus, LimitTarget};
pub use family::{appendix_findiff_limit, AsymptoticFamily, ExpFamily, HansenBracketFamily, MAX_APPENDIX_ORDER};

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate_weighted_with, EndpointProfile, Tolerance};
use crate::special::{
    beta_fn, gamma, generalized_binomial, laguerre, laguerre_compensated,
    laguerre_sequence_compensated, pochhammer_ratio, reciprocal_gamma, scaled_bessel_j,
    CompensatedReal, Order,
};

/// Largest `N` for [`laguerre_sum_check`].
pub const LAGUERRE_SUM_MAX_N: u64 = 64;
/// Largest `N` for [`hansen_ratio_sum_check`] and [`squared_laguerre_sum_check`].
pub const HANSEN_MAX_N: u64 = 48;
/// Largest `N` for [`laguerre_fractional_integral_check`].
pub const FRACTIONAL_MAX_N: u64 = 32;
/// Largest `m`, `n` for [`laguerre_product_integral_check`].
pub const PRODUCT_MAX_DEGREE: u32 = 24;

/// `(x, y, N)` with the rescaled arguments `X = x^2/4N`, `Y = y^2/4N` derived on access.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledArguments {
    pub x: f64,
    pub y: f64,
    pub n: u64,
}

impl ScaledArguments {
    pub fn new(x: f64, y: f64, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("N must be a positive integer"));
        }
        if !(x.is_finite() && y.is_finite()) {
            return Err(Error::domain(format!("arguments must be finite, got ({x}, {y})")));
        }
        Ok(Self { x, y, n })
    }

    #[allow(non_snake_case)]
    pub fn X(&self) -> f64 {
        self.x * self.x / (4.0 * self.n as f64)
    }

    #[allow(non_snake_case)]
    pub fn Y(&self) -> f64 {
        self.y * self.y / (4.0 * self.n as f64)
    }
}

/// Both sides of an exact finite-N identity and their gap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExactCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub abs_residual: f64,
    /// `abs_residual / max(|lhs|, |rhs|)`, zero when both vanish.
    pub rel_residual: f64,
    /// Quadrature error estimate when one side is an integral, else zero.
    pub quadrature_error: f64,
}

impl ExactCheck {
    fn from_compensated(lhs: CompensatedReal, rhs: CompensatedReal) -> Self {
        // Difference taken before rounding, so an exact identity shows a zero gap.
        let diff = (lhs - rhs).to_f64().abs();
        Self::with_residual(lhs.to_f64(), rhs.to_f64(), diff, 0.0)
    }

    fn with_residual(lhs: f64, rhs: f64, abs_residual: f64, quadrature_error: f64) -> Self {
        let scale = lhs.abs().max(rhs.abs());
        let rel_residual = if scale > 0.0 { abs_residual / scale } else { abs_residual };
        Self {
            lhs,
            rhs,
            abs_residual,
            rel_residual,
            quadrature_error,
        }
    }
}

/// A finite-N value next to the value it should approach.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitPair {
    pub finite_value: f64,
    pub limit_value: f64,
}

impl LimitPair {
    pub fn abs_error(&self) -> f64 {
        (self.finite_value - self.limit_value).abs()
    }
}

fn require_cap(name: &str, n: u64, cap: u64) -> Result<()> {
    if n > cap {
        return Err(Error::domain(format!("{name} is limited to N <= {cap}, got {n}")));
    }
    Ok(())
}

fn positive_argument(name: &str, v: f64) -> Result<()> {
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::domain(format!("{name} must be positive and finite, got {v}")));
    }
    Ok(())
}

fn to_u32(n: u64) -> Result<u32> {
    u32::try_from(n).map_err(|_| Error::domain(format!("degree {n} is out of range")))
}

/// `m = round(rN)` (half up) and `r' = m / N`.
fn rounded_degree(r: f64, n: u64) -> Result<(u32, f64)> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::domain(format!("r must lie in (0, 1], got {r}")));
    }
    if n == 0 {
        return Err(Error::domain("N must be a positive integer"));
    }
    let m = (r * n as f64 + 0.5).floor() as u64;
    if m == 0 {
        return Err(Error::domain(format!("rN rounds to 0 for r = {r}, N = {n}")));
    }
    Ok((to_u32(m)?, m as f64 / n as f64))
}

/// `N^-alpha L_m^alpha(x^2/4N)` against `2^alpha r^{alpha/2} x^-alpha J_alpha(sqrt(r) x)`,
/// with `m = round(rN)` and `r = m/N` on both sides.
pub fn laguerre_limit_pair(alpha: Order, x: f64, r: f64, n: u64) -> Result<LimitPair> {
    if !(x.is_finite() && x >= 0.0) {
        return Err(Error::domain(format!("x must be non-negative, got {x}")));
    }
    let (m, r) = rounded_degree(r, n)?;
    let a = alpha.value();
    let big_x = x * x / (4.0 * n as f64);
    let finite = (n as f64).powf(-a) * laguerre(m, alpha, big_x);
    // x^-a J_a(sqrt(r) x) = r^{a/2} (sqrt(r) x)^-a J_a(sqrt(r) x)
    let limit = 2f64.powf(a) * r.powf(a) * scaled_bessel_j(alpha, r.sqrt() * x)?;
    Ok(LimitPair {
        finite_value: finite,
        limit_value: limit,
    })
}

/// `|N^-alpha L_{rN}^alpha(x^2/4N) - 2^alpha r^{alpha/2} x^-alpha J_alpha(sqrt(r) x)|`.
pub fn laguerre_limit_residual(alpha: Order, x: f64, r: f64, n: u64) -> Result<f64> {
    laguerre_limit_pair(alpha, x, r, n).map(|p| p.abs_error())
}

/// Forward difference `sum_i (-1)^{k-i} C(k, i) f(m + i)`.
pub fn finite_difference<F: Fn(u64) -> f64>(sequence: F, m: u64, k: u32) -> f64 {
    finite_difference_compensated(|i| CompensatedReal::from_f64(sequence(i)), m, k).to_f64()
}

/// [`finite_difference`] accumulated in double-double.
pub fn finite_difference_compensated<F: Fn(u64) -> CompensatedReal>(
    sequence: F,
    m: u64,
    k: u32,
) -> CompensatedReal {
    let mut acc = CompensatedReal::ZERO;
    let mut binom = 1.0;
    for i in 0..=k {
        if i > 0 {
            binom = binom * (k - i + 1) as f64 / i as f64;
        }
        let term = sequence(m + i as u64) * binom;
        if (k - i) % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// `Delta^k L_m^alpha(x)` against `L_{m+k}^{alpha-k}(x)`.
///
/// Both sides are polynomials in exactly representable `alpha` and `x`, so they
/// are evaluated in rational arithmetic: the difference sum cancels terms of
/// size `2^k` down to values that can vanish outright (`L_4^{-2}(2) = 0`), which
/// no fixed precision resolves relative to the result.
pub fn laguerre_findiff_check(m: u32, k: u32, alpha: Order, x: f64) -> Result<ExactCheck> {
    let top = m.checked_add(k).ok_or_else(|| Error::domain("m + k overflows"))?;
    let (a, xr) = (exact::rational(alpha.value())?, exact::rational(x)?);
    let values = exact::laguerre_sequence(top, &a, &xr);
    let lhs = exact::forward_difference(&values, m as usize, k);
    let shifted = a - BigRational::from_integer(k.into());
    let rhs = exact::laguerre_sequence(top, &shifted, &xr).pop().expect("non-empty sequence");
    let diff = (&lhs - &rhs).abs();
    let f = |v: &BigRational| v.to_f64().unwrap_or(f64::NAN);
    Ok(ExactCheck::with_residual(f(&lhs), f(&rhs), f(&diff), 0.0))
}

/// `sum_{m=0}^N L_m^alpha(X) L_{N-m}^beta(Y)` against `L_N^{alpha+beta+1}(X+Y)`.
pub fn laguerre_sum_check(alpha: Order, beta: Order, x: f64, y: f64, n: u64) -> Result<ExactCheck> {
    require_cap("the Laguerre sum check", n, LAGUERRE_SUM_MAX_N)?;
    let s = ScaledArguments::new(x, y, n.max(1))?;
    let (big_x, big_y) = if n == 0 { (0.0, 0.0) } else { (s.X(), s.Y()) };
    let nn = n as u32;
    let la = laguerre_sequence_compensated(nn, alpha, big_x);
    let lb = laguerre_sequence_compensated(nn, beta, big_y);
    let lhs: CompensatedReal = (0..=nn as usize).map(|m| la[m] * lb[nn as usize - m]).sum();
    let rhs = laguerre_compensated(nn, Order::new(alpha.value() + beta.value() + 1.0)?, big_x + big_y);
    Ok(ExactCheck::from_compensated(lhs, rhs))
}

/// Degree-`m` Laguerre polynomials `L_m^alpha(X)`, `m = 0..=top`, in double-double.
fn sequence(top: u64, alpha: Order, arg: f64) -> Result<Vec<CompensatedReal>> {
    Ok(laguerre_sequence_compensated(to_u32(top)?, alpha, arg))
}

/// `N^{-alpha-beta-1} sum_{m<n} L_m^alpha(X) L_{N-m}^beta(Y)` for `alpha = -n`, against
/// `2^{alpha+beta+1} y^{-alpha-beta-1} sum_{j<n} (-x^2/2y)^j / j! J_{alpha+beta+j+1}(y)`.
pub fn anomalous_block_limit(alpha: Order, beta: Order, x: f64, y: f64, n: u64) -> Result<LimitPair> {
    let Some(k) = alpha.negative_integer() else {
        return Err(Error::domain(format!(
            "the anomalous block needs a negative-integer alpha, got {}",
            alpha.value()
        )));
    };
    if !(x >= 0.0 && x.is_finite()) {
        return Err(Error::domain(format!("x must be non-negative, got {x}")));
    }
    positive_argument("y", y)?;
    let s = ScaledArguments::new(x, y, n)?;
    if n + 1 < k as u64 {
        return Err(Error::domain(format!("N = {n} is too small for a block of {k} terms")));
    }
    let la = sequence(k as u64 - 1, alpha, s.X())?;
    let lb = sequence(n, beta, s.Y())?;
    let block: CompensatedReal = (0..k as usize).map(|m| la[m] * lb[n as usize - m]).sum();
    let (a, b) = (alpha.value(), beta.value());
    let finite = (n as f64).powf(-a - b - 1.0) * block.to_f64();

    // y^{-a-b-1} (-x^2/2y)^j J_{a+b+j+1}(y) = (-x^2/2)^j Jhat_{a+b+j+1}(y)
    let step = -x * x / 2.0;
    let mut coeff = 1.0;
    let mut sum = 0.0;
    for j in 0..k {
        if j > 0 {
            coeff *= step / j as f64;
        }
        sum += coeff * scaled_bessel_j(Order::new(a + b + j as f64 + 1.0)?, y)?;
    }
    Ok(LimitPair {
        finite_value: finite,
        limit_value: 2f64.powf(a + b + 1.0) * sum,
    })
}

/// `(a)_m / (b)_m` for `m = 0..=top` in double-double.
fn pochhammer_ratios(a: f64, b: f64, top: u64) -> Result<Vec<CompensatedReal>> {
    let mut out = Vec::with_capacity(top as usize + 1);
    let mut acc = CompensatedReal::ONE;
    out.push(acc);
    for i in 0..top {
        let den = CompensatedReal::sum_of(b, i as f64);
        if den.hi == 0.0 {
            return Err(Error::domain(format!("pochhammer denominator ({b})_m vanishes at index {i}")));
        }
        acc = acc * CompensatedReal::sum_of(a, i as f64) / den;
        out.push(acc);
    }
    Ok(out)
}

/// `sum_m [((a-b)/2)_m / (a+1)_m] L_m^a(-X) L_{N-m}^b(X)` against
/// `[((a+b)/2+1)_N / (a+1)_N] L_N^a(X)`, with `X = x^2/4N`.
pub fn hansen_ratio_sum_check(alpha: Order, beta: Order, x: f64, n: u64) -> Result<ExactCheck> {
    require_cap("the Hansen ratio sum check", n, HANSEN_MAX_N)?;
    let (lhs, rhs) = hansen_ratio_sides(alpha, beta, x, n)?;
    Ok(ExactCheck::from_compensated(lhs, rhs))
}

fn hansen_ratio_sides(alpha: Order, beta: Order, x: f64, n: u64) -> Result<(CompensatedReal, CompensatedReal)> {
    let (a, b) = (alpha.value(), beta.value());
    let big_x = if n == 0 { 0.0 } else { ScaledArguments::new(x, x, n)?.X() };
    let ratios = pochhammer_ratios((a - b) / 2.0, a + 1.0, n)?;
    let lminus = sequence(n, alpha, -big_x)?;
    let lb = sequence(n, beta, big_x)?;
    let nu = n as usize;
    let lhs: CompensatedReal = (0..=nu).map(|m| ratios[m] * lminus[m] * lb[nu - m]).sum();
    let front = pochhammer_ratios((a + b) / 2.0 + 1.0, a + 1.0, n)?[nu];
    Ok((lhs, front * laguerre_compensated(to_u32(n)?, alpha, big_x)))
}

/// `sum_m [(-N)_m (nu+1/2)_m / (m! (1/2-N)_m)] L_{2m+2nu}^{-2nu}(2X)` against
/// `[(N+nu)! / ((1/2)_N (1/2)_nu)] [L_{N+nu}^{-nu}(X)]^2`, with `X = x^2/4N`.
pub fn squared_laguerre_sum_check(nu: u32, x: f64, n: u64) -> Result<ExactCheck> {
    require_cap("the squared Laguerre sum check", n, HANSEN_MAX_N)?;
    let (lhs, rhs) = squared_sum_sides(nu, x, n)?;
    Ok(ExactCheck::from_compensated(lhs, rhs))
}

fn squared_sum_sides(nu: u32, x: f64, n: u64) -> Result<(CompensatedReal, CompensatedReal)> {
    let big_x = if n == 0 { 0.0 } else { ScaledArguments::new(x, x, n)?.X() };
    let nuf = nu as f64;
    let nf = n as f64;
    let top = 2 * n + 2 * nu as u64;
    let lseq = sequence(top, Order::new(-2.0 * nuf)?, 2.0 * big_x)?;
    let mut coeff = CompensatedReal::ONE;
    let mut lhs = CompensatedReal::ZERO;
    for m in 0..=n {
        if m > 0 {
            let k = (m - 1) as f64;
            // c_m = c_{m-1} (k - N)(nu + 1/2 + k) / (m (1/2 - N + k))
            let num = CompensatedReal::from_f64(k - nf) * CompensatedReal::sum_of(nuf + 0.5, k);
            let den = CompensatedReal::from_f64(m as f64) * CompensatedReal::sum_of(0.5 - nf, k);
            coeff = coeff * num / den;
        }
        lhs += coeff * lseq[(2 * m + 2 * nu as u64) as usize];
    }
    // (N+nu)! / (1/2)_N = prod_{k<N} (k+1)/(k+1/2) * prod_{k=N}^{N+nu-1} (k+1)
    let mut front = CompensatedReal::ONE;
    for k in 0..n {
        front = front * (k as f64 + 1.0) / (k as f64 + 0.5);
    }
    for k in n..n + nu as u64 {
        front *= k as f64 + 1.0;
    }
    for k in 0..nu {
        front = front / (k as f64 + 0.5);
    }
    let l = laguerre_compensated(to_u32(n + nu as u64)?, Order::new(-nuf)?, big_x);
    Ok((lhs, front * l * l))
}

/// `int_0^X Y^a (X-Y)^{b-1} L_N^a(Y) dY` by quadrature against
/// `Gamma(b) Gamma(N+a+1)/Gamma(N+a+b+1) X^{a+b} L_N^{a+b}(X)`, with `X = x^2/4 max(N, 1)`.
pub fn laguerre_fractional_integral_check(alpha: Order, beta: Order, x: f64, n: u64) -> Result<ExactCheck> {
    require_cap("the fractional integral check", n, FRACTIONAL_MAX_N)?;
    let (a, b) = (alpha.value(), beta.value());
    if a <= -1.0 || b <= 0.0 {
        return Err(Error::domain(format!("needs alpha > -1 and beta > 0, got ({a}, {b})")));
    }
    positive_argument("x", x)?;
    let big_x = ScaledArguments::new(x, x, n.max(1))?.X();
    let deg = to_u32(n)?;
    // Y = X s: X^{a+b} int_0^1 s^a (1-s)^{b-1} L_N^a(X s) ds
    let profile = EndpointProfile::new(a, b - 1.0)?;
    let tol = Tolerance { abs: 1e-15, rel: 1e-13 };
    let q = integrate_weighted_with(profile, |s, _| laguerre(deg, alpha, big_x * s), tol)?;
    if !q.converged {
        return Err(Error::QuadratureNotConverged {
            estimate: q.error_estimate,
            tolerance: tol.bound(q.value),
        });
    }
    let power = big_x.powf(a + b);
    let ratio = gamma(a + 1.0)? * reciprocal_gamma(a + b + 1.0) * pochhammer_ratio(a + 1.0, a + b + 1.0, deg)?;
    let rhs = gamma(b)? * ratio * power * laguerre(deg, Order::new(a + b)?, big_x);
    let lhs = power * q.value;
    Ok(ExactCheck::with_residual(lhs, rhs, (lhs - rhs).abs(), power * q.error_estimate))
}

/// `int_0^1 r^a (1-r)^b L_m^a(r z) L_n^b((1-r) z) dr` by quadrature against
/// `C(m+n, m) B(a+m+1, b+n+1) L_{m+n}^{a+b+1}(z)`, with `z = 1/4N`.
pub fn laguerre_product_integral_check(alpha: Order, beta: Order, m: u32, n: u32, big_n: u64) -> Result<ExactCheck> {
    let (a, b) = (alpha.value(), beta.value());
    if a <= -1.0 || b <= -1.0 {
        return Err(Error::domain(format!("the product integral needs alpha, beta > -1, got ({a}, {b})")));
    }
    if m > PRODUCT_MAX_DEGREE || n > PRODUCT_MAX_DEGREE {
        return Err(Error::domain(format!("degrees are limited to {PRODUCT_MAX_DEGREE}, got ({m}, {n})")));
    }
    if big_n == 0 {
        return Err(Error::domain("N must be a positive integer"));
    }
    let z = 1.0 / (4.0 * big_n as f64);
    let profile = EndpointProfile::new(a, b)?;
    let tol = Tolerance { abs: 1e-15, rel: 1e-13 };
    let q = integrate_weighted_with(profile, |r, s| laguerre(m, alpha, r * z) * laguerre(n, beta, s * z), tol)?;
    if !q.converged {
        return Err(Error::QuadratureNotConverged {
            estimate: q.error_estimate,
            tolerance: tol.bound(q.value),
        });
    }
    let binom = generalized_binomial((m + n) as f64, m).round();
    let rhs = binom * beta_fn(a + m as f64 + 1.0, b + n as f64 + 1.0)? * laguerre(m + n, Order::new(a + b + 1.0)?, z);
    Ok(ExactCheck::with_residual(q.value, rhs, (q.value - rhs).abs(), q.error_estimate))
}

/// Scaled finite-N sides used by the limit-consistency targets.
pub(crate) mod scaled_sides {
    use super::*;

    /// `N^{-a-b-1} sum_{m=n_a}^{N-n_b} L_m^a(X) L_{N-m}^b(Y)`, the anomalous blocks
    /// of negative-integer orders removed.
    pub fn sonine_sum(alpha: Order, beta: Order, x: f64, y: f64, n: u64) -> Result<f64> {
        let s = ScaledArguments::new(x, y, n)?;
        let lo = alpha.negative_integer().unwrap_or(0) as u64;
        let skip_hi = beta.negative_integer().unwrap_or(0) as u64;
        if lo + skip_hi > n {
            return Err(Error::domain(format!("N = {n} is smaller than the anomalous blocks")));
        }
        let la = sequence(n, alpha, s.X())?;
        let lb = sequence(n, beta, s.Y())?;
        let nu = n as usize;
        let sum: CompensatedReal = (lo as usize..=nu - skip_hi as usize).map(|m| la[m] * lb[nu - m]).sum();
        Ok((n as f64).powf(-alpha.value() - beta.value() - 1.0) * sum.to_f64())
    }

    /// Hansen ratio sum times `N^{-(a+b)/2} x^a / (Gamma(a+1) 2^a)`.
    pub fn hansen_sum(alpha: Order, beta: Order, x: f64, n: u64) -> Result<f64> {
        let (a, b) = (alpha.value(), beta.value());
        let (lhs, _) = hansen_ratio_sides(alpha, beta, x, n)?;
        let scale = (n as f64).powf(-(a + b) / 2.0) * x.powf(a) / (gamma(a + 1.0)? * 2f64.powf(a));
        Ok(scale * lhs.to_f64())
    }

    /// Squared-sum left side times `N^{nu-1/2} 2^{2nu} x^{-2nu} Gamma(nu+1/2)`.
    pub fn pi_sum(nu: u32, x: f64, n: u64) -> Result<f64> {
        let nuf = nu as f64;
        let (lhs, _) = squared_sum_sides(nu, x, n)?;
        let scale = (n as f64).powf(nuf - 0.5) * (2.0 / x).powf(2.0 * nuf) * gamma(nuf + 0.5)?;
        Ok(scale * lhs.to_f64())
    }

    /// The Laguerre fractional integral (in closed form) rescaled to
    /// `int_0^x y^{a+1} (x^2-y^2)^{b-1} J_a(y) dy`:
    /// `x^{2(a+b)} 2^{-1-a} N^-a Gamma(b) Gamma(N+a+1)/Gamma(N+a+b+1) L_N^{a+b}(X)`.
    pub fn fractional(alpha: Order, beta: Order, x: f64, n: u64) -> Result<f64> {
        let (a, b) = (alpha.value(), beta.value());
        let big_x = ScaledArguments::new(x, x, n)?.X();
        let deg = to_u32(n)?;
        let ratio = gamma(a + 1.0)? * reciprocal_gamma(a + b + 1.0) * pochhammer_ratio(a + 1.0, a + b + 1.0, deg)?;
        let l = laguerre(deg, Order::new(a + b)?, big_x);
        Ok(x.powf(2.0 * (a + b)) * 2f64.powf(-1.0 - a) * (n as f64).powf(-a) * gamma(b)? * ratio * l)
    }
}
