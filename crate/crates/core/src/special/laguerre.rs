//! Generalized Laguerre polynomials `L_m^alpha(x)` for every real order,
//! negative integers included.
//!
//! The polynomial is defined by the explicit sum
//!
//! ```text
//! L_m^a(x) = sum_{j=0}^m (-1)^j / j! * C(m+a, m-j) * x^j
//! ```
//!
//! which stays meaningful for all real `a`. When `a = -n` with `m >= n` the
//! coefficients below `x^n` vanish identically.

use super::dd::CompensatedReal;
use super::Order;

/// Degrees up to this use the explicit sum; larger degrees use the three-term recurrence.
pub const EXPLICIT_SUM_MAX_DEGREE: u32 = 30;

fn explicit_sum(m: u32, a: f64, x: f64) -> CompensatedReal {
    let m_usize = m as usize;
    // binom[j] = C(m+a, m-j), built downward from C(m+a, 0) = 1 using
    // C(m+a, k+1) = C(m+a, k) (a + j) / (m - j + 1) with k = m - j. No division by
    // an order-dependent quantity, so exact zeros at negative integers survive.
    let mut binom = vec![CompensatedReal::ZERO; m_usize + 1];
    binom[m_usize] = CompensatedReal::ONE;
    for j in (1..=m_usize).rev() {
        let factor = CompensatedReal::sum_of(a, j as f64);
        binom[j - 1] = binom[j] * factor / ((m_usize - j + 1) as f64);
    }
    let mut power = CompensatedReal::ONE;
    let mut acc = CompensatedReal::ZERO;
    for (j, b) in binom.iter().enumerate() {
        if j > 0 {
            power = power * x / (j as f64);
        }
        let term = *b * power;
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

fn recurrence_step(
    k: u32,
    a: f64,
    x: f64,
    current: CompensatedReal,
    previous: CompensatedReal,
) -> CompensatedReal {
    // (k+1) L_{k+1} = (2k+1+a-x) L_k - (k+a) L_{k-1}
    let kf = k as f64;
    let c1 = CompensatedReal::sum_of(2.0 * kf + 1.0, a) - x;
    let c2 = CompensatedReal::sum_of(kf, a);
    (c1 * current - c2 * previous) / (kf + 1.0)
}

fn first_two(a: f64, x: f64) -> (CompensatedReal, CompensatedReal) {
    (CompensatedReal::ONE, CompensatedReal::sum_of(1.0, a) - x)
}

fn recurrence(m: u32, a: f64, x: f64) -> CompensatedReal {
    let (l0, l1) = first_two(a, x);
    if m == 0 {
        return l0;
    }
    let (mut prev, mut cur) = (l0, l1);
    for k in 1..m {
        let next = recurrence_step(k, a, x, cur, prev);
        prev = cur;
        cur = next;
    }
    cur
}

/// `L_m^alpha(x)` in double-double. Degrees up to [`EXPLICIT_SUM_MAX_DEGREE`] use the
/// explicit sum, larger ones the degree recurrence.
///
/// For `alpha = -k` and `m >= k` the recurrence runs through O(1) values that
/// cancel down to `O(x^k)`; there the reflection
/// `L_m^{-k}(x) = (-x)^k (m-k)!/m! L_{m-k}^k(x)` is used instead.
pub fn laguerre_compensated(m: u32, alpha: Order, x: f64) -> CompensatedReal {
    if m <= EXPLICIT_SUM_MAX_DEGREE {
        return explicit_sum(m, alpha.value(), x);
    }
    match alpha.negative_integer() {
        Some(k) if m >= k => reflection_factor(m, k, x) * recurrence(m - k, k as f64, x),
        _ => recurrence(m, alpha.value(), x),
    }
}

/// `(-x)^k (m-k)! / m!`.
fn reflection_factor(m: u32, k: u32, x: f64) -> CompensatedReal {
    let mut f = CompensatedReal::ONE;
    for i in 0..k {
        f = f * (-x) / (m - i) as f64;
    }
    f
}

/// Generalized Laguerre polynomial `L_m^alpha(x)` for any real order.
pub fn laguerre(m: u32, alpha: Order, x: f64) -> f64 {
    laguerre_compensated(m, alpha, x).to_f64()
}

/// `L_m^alpha(x)` by the explicit coefficient sum, at any degree.
pub fn laguerre_by_sum(m: u32, alpha: Order, x: f64) -> f64 {
    explicit_sum(m, alpha.value(), x).to_f64()
}

/// `L_m^alpha(x)` by the three-term degree recurrence, at any degree.
pub fn laguerre_by_recurrence(m: u32, alpha: Order, x: f64) -> f64 {
    recurrence(m, alpha.value(), x).to_f64()
}

/// `[L_0^alpha(x), ..., L_max^alpha(x)]` in double-double, by one recurrence sweep.
pub fn laguerre_sequence_compensated(max_degree: u32, alpha: Order, x: f64) -> Vec<CompensatedReal> {
    if let Some(k) = alpha.negative_integer() {
        if max_degree >= k {
            // Degrees below k directly, the rest by reflection (see laguerre_compensated).
            let mut out: Vec<CompensatedReal> = (0..k).map(|m| explicit_sum(m, alpha.value(), x)).collect();
            let upper = plain_sequence(max_degree - k, k as f64, x);
            out.extend(upper.into_iter().enumerate().map(|(j, l)| reflection_factor(j as u32 + k, k, x) * l));
            return out;
        }
    }
    plain_sequence(max_degree, alpha.value(), x)
}

fn plain_sequence(max_degree: u32, a: f64, x: f64) -> Vec<CompensatedReal> {
    let mut out = Vec::with_capacity(max_degree as usize + 1);
    let (l0, l1) = first_two(a, x);
    out.push(l0);
    if max_degree == 0 {
        return out;
    }
    out.push(l1);
    for k in 1..max_degree {
        let next = recurrence_step(k, a, x, out[k as usize], out[k as usize - 1]);
        out.push(next);
    }
    out
}

/// `[L_0^alpha(x), ..., L_max^alpha(x)]` rounded to f64.
pub fn laguerre_sequence(max_degree: u32, alpha: Order, x: f64) -> Vec<f64> {
    laguerre_sequence_compensated(max_degree, alpha, x)
        .into_iter()
        .map(CompensatedReal::to_f64)
        .collect()
}
