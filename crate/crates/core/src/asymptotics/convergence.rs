//! Convergence studies: (finite, limit) pairs over a list of `N` with a fitted
//! log-log decay rate.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::family::{appendix_findiff_limit, ExpFamily, HansenBracketFamily};
use super::{
    anomalous_block_limit, hansen_ratio_sum_check, laguerre_limit_pair, laguerre_sum_check, scaled_sides,
    squared_laguerre_sum_check, ExactCheck, LimitPair,
};
use crate::error::{Error, Result};
use crate::identities::{evaluate, IdentityId, IdentityParams, Status, Tolerances};
use crate::quadrature::QuadratureResult;
use crate::special::Order;

/// Errors at most this many ulps of the compared values count as zero in the fit.
const NOISE_FLOOR_ULPS: f64 = 4.0;
/// Relative gap below which an exact finite-N identity counts as satisfied.
const EXACT_RELATIVE_FLOOR: f64 = 1e-12;

/// A named limit check, with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "target", rename_all = "kebab-case")]
pub enum LimitTarget {
    /// `N^-a L_{rN}^a(x^2/4N)` to its Bessel limit.
    LaguerreLimit { alpha: Order, x: f64, r: f64 },
    /// The anomalous block of a negative-integer `alpha` to its Bessel sum.
    AnomalousBlock { alpha: Order, beta: Order, x: f64, y: f64 },
    /// Exact: the Laguerre convolution sum.
    LaguerreSum { alpha: Order, beta: Order, x: f64, y: f64 },
    /// Exact: the Pochhammer-weighted sum.
    HansenRatioSum { alpha: Order, beta: Order, x: f64 },
    /// Exact: the sum of squares.
    SquaredLaguerreSum { nu: u32, x: f64 },
    /// Differences of `(1 + z/N)^{N+l}` to `z^p e^z`.
    AppendixExp { p: u32, z: f64 },
    /// Differences of the Pochhammer-Laguerre bracket to ray derivatives of its limit.
    AppendixHansen { alpha: Order, beta: Order, x: f64, p: u32, z: f64 },
    /// Rescaled Laguerre convolution to the two-Bessel integral.
    SonineSumLimit { alpha: Order, beta: Order, x: f64, y: f64 },
    /// Rescaled Pochhammer-weighted sum to the I-J integral.
    HansenSumLimit { alpha: Order, beta: Order, x: f64 },
    /// Rescaled sum of squares to the arcsine-weighted Bessel integral.
    PiSumLimit { nu: u32, x: f64 },
    /// Rescaled Laguerre fractional integral to the Bessel fractional integral.
    FractionalLimit { alpha: Order, beta: Order, x: f64 },
}

impl LimitTarget {
    pub fn name(&self) -> &'static str {
        match self {
            Self::LaguerreLimit { .. } => "laguerre-limit",
            Self::AnomalousBlock { .. } => "anomalous-block",
            Self::LaguerreSum { .. } => "laguerre-sum",
            Self::HansenRatioSum { .. } => "hansen-ratio-sum",
            Self::SquaredLaguerreSum { .. } => "squared-laguerre-sum",
            Self::AppendixExp { .. } => "appendix-exp",
            Self::AppendixHansen { .. } => "appendix-hansen",
            Self::SonineSumLimit { .. } => "sonine-sum-limit",
            Self::HansenSumLimit { .. } => "hansen-sum-limit",
            Self::PiSumLimit { .. } => "pi-sum-limit",
            Self::FractionalLimit { .. } => "fractional-limit",
        }
    }

    /// Exact identities compare both sides at every `N`; there is no limit.
    pub fn is_exact(&self) -> bool {
        matches!(
            self,
            Self::LaguerreSum { .. } | Self::HansenRatioSum { .. } | Self::SquaredLaguerreSum { .. }
        )
    }

    /// The pair at one `N`. `bessel_side` caches an `N`-independent limit.
    fn pair(&self, n: u64, bessel_side: Option<f64>) -> Result<LimitPair> {
        let exact = |c: ExactCheck| LimitPair {
            finite_value: c.lhs,
            limit_value: c.rhs,
        };
        let with_limit = |finite: f64| -> Result<LimitPair> {
            Ok(LimitPair {
                finite_value: finite,
                limit_value: bessel_side.ok_or_else(|| Error::InvalidArgument("missing limit".into()))?,
            })
        };
        match *self {
            Self::LaguerreLimit { alpha, x, r } => laguerre_limit_pair(alpha, x, r, n),
            Self::AnomalousBlock { alpha, beta, x, y } => anomalous_block_limit(alpha, beta, x, y, n),
            Self::LaguerreSum { alpha, beta, x, y } => laguerre_sum_check(alpha, beta, x, y, n).map(exact),
            Self::HansenRatioSum { alpha, beta, x } => hansen_ratio_sum_check(alpha, beta, x, n).map(exact),
            Self::SquaredLaguerreSum { nu, x } => squared_laguerre_sum_check(nu, x, n).map(exact),
            Self::AppendixExp { p, z } => appendix_findiff_limit(&ExpFamily, p, z, n),
            Self::AppendixHansen { alpha, beta, x, p, z } => {
                appendix_findiff_limit(&HansenBracketFamily::new(alpha, beta, x)?, p, z, n)
            }
            Self::SonineSumLimit { alpha, beta, x, y } => with_limit(scaled_sides::sonine_sum(alpha, beta, x, y, n)?),
            Self::HansenSumLimit { alpha, beta, x } => with_limit(scaled_sides::hansen_sum(alpha, beta, x, n)?),
            Self::PiSumLimit { nu, x } => with_limit(scaled_sides::pi_sum(nu, x, n)?),
            Self::FractionalLimit { alpha, beta, x } => with_limit(scaled_sides::fractional(alpha, beta, x, n)?),
        }
    }

    /// Bessel-side value shared by every `N`, for the limit-consistency targets.
    fn bessel_side(&self) -> Result<Option<f64>> {
        let lhs_of = |id: IdentityId, params: IdentityParams| -> Result<f64> {
            let report = evaluate(id, &params, &Tolerances::default());
            match report.status {
                Status::Error => Err(Error::InvalidArgument(format!(
                    "{id} could not be evaluated: {}",
                    report.message.unwrap_or_default()
                ))),
                _ => Ok(report.lhs),
            }
        };
        Ok(match *self {
            Self::SonineSumLimit { alpha, beta, x, y } => {
                let q: QuadratureResult = crate::identities::sonine_integral(alpha, beta, x, y)?;
                Some(2f64.powf(alpha.value() + beta.value()) * q.value)
            }
            Self::HansenSumLimit { alpha, beta, x } => Some(lhs_of(
                IdentityId::Ij,
                IdentityParams::new(alpha.value(), x)?.with_beta(beta.value())?,
            )?),
            Self::PiSumLimit { nu, x } => Some(lhs_of(
                IdentityId::Pi,
                IdentityParams::new(0.0, x)?.with_nu(nu as f64)?,
            )?),
            Self::FractionalLimit { alpha, beta, x } => Some(lhs_of(
                IdentityId::FractionalIntegral,
                IdentityParams::new(alpha.value(), x)?.with_beta(beta.value())?,
            )?),
            _ => None,
        })
    }

    fn zero_floor(&self, pair: &LimitPair) -> f64 {
        let scale = pair.finite_value.abs().max(pair.limit_value.abs());
        if self.is_exact() {
            EXACT_RELATIVE_FLOOR * scale
        } else {
            NOISE_FLOOR_ULPS * f64::EPSILON * scale
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceEntry {
    #[serde(rename = "N")]
    pub n: u64,
    pub finite_value: f64,
    pub limit_value: f64,
    pub abs_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FitStatus {
    /// Least-squares slope over all entries.
    Fitted,
    /// Some error is zero at working precision; the rate is `-inf`.
    Exact,
    /// Fewer than three usable errors.
    Unavailable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTable {
    pub target: LimitTarget,
    pub entries: Vec<ConvergenceEntry>,
    /// Slope of `ln |error|` against `ln N`; `-inf` when exact, NaN when unavailable.
    #[serde(with = "crate::identities::nullable_f64")]
    pub fitted_rate: f64,
    pub fit_status: FitStatus,
}

impl ConvergenceTable {
    /// Builds the table and fits the rate. Errors below the target's zero floor
    /// make the fit degenerate.
    fn from_pairs(target: LimitTarget, pairs: Vec<(u64, LimitPair)>) -> Self {
        let any_zero = pairs.iter().any(|(_, p)| p.abs_error() <= target.zero_floor(p));
        let entries: Vec<ConvergenceEntry> = pairs
            .iter()
            .map(|&(n, p)| ConvergenceEntry {
                n,
                finite_value: p.finite_value,
                limit_value: p.limit_value,
                abs_error: p.abs_error(),
            })
            .collect();
        let points: Vec<(f64, f64)> = entries
            .iter()
            .filter(|e| e.abs_error.is_finite() && e.abs_error > 0.0)
            .map(|e| ((e.n as f64).ln(), e.abs_error.ln()))
            .collect();
        let (fitted_rate, fit_status) = if any_zero {
            (f64::NEG_INFINITY, FitStatus::Exact)
        } else if points.len() < 3 {
            (f64::NAN, FitStatus::Unavailable)
        } else {
            (least_squares_slope(&points), FitStatus::Fitted)
        };
        Self {
            target,
            entries,
            fitted_rate,
            fit_status,
        }
    }

    /// The entry at the largest `N`.
    pub fn last(&self) -> Option<&ConvergenceEntry> {
        self.entries.last()
    }

    /// Number of steps where the error grew.
    pub fn non_monotone_steps(&self) -> usize {
        self.entries
            .windows(2)
            .filter(|w| w[1].abs_error > w[0].abs_error)
            .count()
    }

    /// CSV with columns `N,finite_value,limit_value,abs_error` and a final
    /// `fitted_rate,<rate>` row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("N,finite_value,limit_value,abs_error\n");
        for e in &self.entries {
            let _ = writeln!(
                out,
                "{},{:.16e},{:.16e},{:.16e}",
                e.n, e.finite_value, e.limit_value, e.abs_error
            );
        }
        let _ = writeln!(out, "fitted_rate,{:.16e}", self.fitted_rate);
        out
    }
}

fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// Evaluates `target` at every `N` in `n_list` (strictly increasing, at least
/// three entries), one scoped thread per `N`.
pub fn convergence_study(target: LimitTarget, n_list: &[u64]) -> Result<ConvergenceTable> {
    if n_list.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "a convergence study needs at least 3 values of N, got {}",
            n_list.len()
        )));
    }
    if n_list.windows(2).any(|w| w[0] >= w[1]) || n_list[0] == 0 {
        return Err(Error::InvalidArgument(
            "N values must be positive and strictly increasing".into(),
        ));
    }
    let bessel_side = target.bessel_side()?;
    let results: Vec<Result<LimitPair>> = std::thread::scope(|scope| {
        let handles: Vec<_> = n_list
            .iter()
            .map(|&n| scope.spawn(move || target.pair(n, bessel_side)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| Err(Error::InvalidArgument("worker panicked".into()))))
            .collect()
    });
    let pairs = n_list
        .iter()
        .zip(results)
        .map(|(&n, r)| r.map(|p| (n, p)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceTable::from_pairs(target, pairs))
}
