//! Univariate truncated Taylor series ("jets").
//!
//! A [`Jet`] of order K at base point `r0` holds `c_0..c_K`, the Taylor
//! coefficients of a function of `t = r - r0`. Arithmetic acts on the truncated
//! series, so derivatives of composite expressions at `r0` come out of plain
//! evaluation: `f^(j)(r0) = j! c_j`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::{reciprocal_gamma, Order};

/// Largest truncation order used by the identity catalog.
pub const MAX_JET_ORDER: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JetOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Jet {
    coefficients: Vec<f64>,
    base_point: f64,
}

impl Jet {
    /// Builds a jet from explicit coefficients `c_0..c_K`.
    pub fn from_coefficients(coefficients: Vec<f64>, base_point: f64) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::InvalidArgument("a jet needs at least one coefficient".into()));
        }
        Ok(Self {
            coefficients,
            base_point,
        })
    }

    pub fn constant(value: f64, order: usize, base_point: f64) -> Self {
        let mut coefficients = vec![0.0; order + 1];
        coefficients[0] = value;
        Self {
            coefficients,
            base_point,
        }
    }

    /// The independent variable `r = r0 + t`.
    pub fn variable(order: usize, base_point: f64) -> Self {
        let mut jet = Self::constant(base_point, order, base_point);
        if order >= 1 {
            jet.coefficients[1] = 1.0;
        }
        jet
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn base_point(&self) -> f64 {
        self.base_point
    }

    pub fn value(&self) -> f64 {
        self.coefficients[0]
    }

    fn check_compatible(&self, other: &Jet) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::JetMismatch(format!(
                "orders differ: {} vs {}",
                self.order(),
                other.order()
            )));
        }
        if self.base_point != other.base_point {
            return Err(Error::JetMismatch(format!(
                "base points differ: {} vs {}",
                self.base_point, other.base_point
            )));
        }
        Ok(())
    }

    fn with_coefficients(&self, coefficients: Vec<f64>) -> Self {
        Self {
            coefficients,
            base_point: self.base_point,
        }
    }

    /// Pointwise combination of two jets of equal order and base point.
    pub fn combine(&self, other: &Jet, op: JetOp) -> Result<Jet> {
        self.check_compatible(other)?;
        let a = &self.coefficients;
        let b = &other.coefficients;
        let n = a.len();
        let c = match op {
            JetOp::Add => a.iter().zip(b).map(|(x, y)| x + y).collect(),
            JetOp::Sub => a.iter().zip(b).map(|(x, y)| x - y).collect(),
            JetOp::Mul => (0..n)
                .map(|k| (0..=k).map(|i| a[i] * b[k - i]).sum())
                .collect(),
            JetOp::Div => {
                if b[0] == 0.0 {
                    return Err(Error::JetDivisionByZero);
                }
                let mut c = vec![0.0; n];
                for k in 0..n {
                    let s: f64 = (1..=k).map(|i| b[i] * c[k - i]).sum();
                    c[k] = (a[k] - s) / b[0];
                }
                c
            }
        };
        Ok(self.with_coefficients(c))
    }

    pub fn add(&self, other: &Jet) -> Result<Jet> {
        self.combine(other, JetOp::Add)
    }

    pub fn sub(&self, other: &Jet) -> Result<Jet> {
        self.combine(other, JetOp::Sub)
    }

    pub fn mul(&self, other: &Jet) -> Result<Jet> {
        self.combine(other, JetOp::Mul)
    }

    pub fn div(&self, other: &Jet) -> Result<Jet> {
        self.combine(other, JetOp::Div)
    }

    pub fn scale(&self, factor: f64) -> Jet {
        self.with_coefficients(self.coefficients.iter().map(|c| c * factor).collect())
    }

    /// `a(t)^p` for real p, by the recurrence `k a_0 b_k = sum_{i=1}^k ((p+1) i - k) a_i b_{k-i}`.
    pub fn powf(&self, p: f64) -> Result<Jet> {
        let a = &self.coefficients;
        if a[0] <= 0.0 {
            return Err(Error::JetNonPositiveBase(a[0]));
        }
        let n = a.len();
        let mut b = vec![0.0; n];
        b[0] = a[0].powf(p);
        for k in 1..n {
            let kf = k as f64;
            let s: f64 = (1..=k)
                .map(|i| ((p + 1.0) * i as f64 - kf) * a[i] * b[k - i])
                .sum();
            b[k] = s / (kf * a[0]);
        }
        Ok(self.with_coefficients(b))
    }

    /// `exp(a(t))`, by `k b_k = sum_{i=1}^k i a_i b_{k-i}`.
    pub fn exp(&self) -> Jet {
        let a = &self.coefficients;
        let n = a.len();
        let mut b = vec![0.0; n];
        b[0] = a[0].exp();
        for k in 1..n {
            let s: f64 = (1..=k).map(|i| i as f64 * a[i] * b[k - i]).sum();
            b[k] = s / k as f64;
        }
        self.with_coefficients(b)
    }

    /// Evaluates the truncated polynomial at `t = h`.
    pub fn eval(&self, h: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, c| acc * h + c)
    }

    /// The j-th derivative at the base point, `j! c_j`.
    pub fn derivative_at_base(&self, j: usize) -> Result<f64> {
        if j > self.order() {
            return Err(Error::JetOrderExceeded {
                requested: j,
                order: self.order(),
            });
        }
        let factorial: f64 = (1..=j).map(|i| i as f64).product();
        Ok(factorial * self.coefficients[j])
    }
}

/// Free-function form of [`Jet::combine`].
pub fn jet_arith(a: &Jet, b: &Jet, op: JetOp) -> Result<Jet> {
    a.combine(b, op)
}

/// Free-function form of [`Jet::powf`].
pub fn jet_power(a: &Jet, p: f64) -> Result<Jet> {
    a.powf(p)
}

/// Free-function form of [`Jet::derivative_at_base`].
pub fn derivative_at_base(a: &Jet, j: usize) -> Result<f64> {
    a.derivative_at_base(j)
}

const SERIES_STOP_RATIO: f64 = 1e-17;
const SERIES_MAX_TERMS: usize = 500;

/// Jet at `r0 = 1` of `g(r) = I_alpha(sqrt(r) x)`.
///
/// Sums the ascending series term by term: term k contributes
/// `(x/2)^{2k+alpha} / (k! Gamma(k+alpha+1)) * r^{k+alpha/2}`, each power being a
/// [`jet_power`] of the variable jet.
pub fn bessel_i_of_sqrt_jet(alpha: Order, x: f64, order: usize) -> Result<Jet> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("bessel_i_of_sqrt_jet: x must be positive, got {x}")));
    }
    if order > MAX_JET_ORDER {
        return Err(Error::JetOrderExceeded {
            requested: order,
            order: MAX_JET_ORDER,
        });
    }
    // I_{-n} = I_n
    let a = match alpha.negative_integer() {
        Some(n) => n as f64,
        None => alpha.value(),
    };
    let r = Jet::variable(order, 1.0);
    let half = x / 2.0;
    let q = half * half;
    // Leading coefficient (x/2)^a / Gamma(a+1); later ones by ratio.
    let mut coeff = half.powf(a) * reciprocal_gamma(a + 1.0);
    let mut sum = Jet::constant(0.0, order, 1.0);
    let mut small_run = 0;
    for k in 0..SERIES_MAX_TERMS {
        if k > 0 {
            let kf = k as f64;
            // a + k is never zero here: a is not a negative integer.
            coeff *= q / (kf * (a + kf));
        }
        let term = r.powf(k as f64 + a / 2.0)?.scale(coeff);
        sum = sum.add(&term)?;
        let negligible = term
            .coefficients
            .iter()
            .zip(&sum.coefficients)
            .all(|(t, s)| t.abs() <= SERIES_STOP_RATIO * s.abs().max(f64::MIN_POSITIVE));
        if negligible && k > 0 {
            small_run += 1;
            if small_run >= 3 {
                return Ok(sum);
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::SeriesNotConverged {
        terms: SERIES_MAX_TERMS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::bessel_i;
    use approx::assert_relative_eq;

    fn jet(c: &[f64]) -> Jet {
        Jet::from_coefficients(c.to_vec(), 0.0).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let a = jet(&[1.0, 1.0, 0.0]);
        assert_eq!(jet_arith(&a, &a, JetOp::Mul).unwrap().coefficients(), &[1.0, 2.0, 1.0]);
        let three = jet(&[3.0, 0.5, -2.0, 7.0]);
        let id = three.div(&three).unwrap();
        assert_eq!(id.coefficients()[0], 1.0);
        for c in &id.coefficients()[1..] {
            assert!(c.abs() < 1e-15);
        }
        let one = jet(&[1.0, 0.0, 0.0, 0.0]);
        let geometric = one.div(&jet(&[1.0, -1.0, 0.0, 0.0])).unwrap();
        assert_eq!(geometric.coefficients(), &[1.0, 1.0, 1.0, 1.0]);
        let sum = a.add(&a).unwrap().sub(&a).unwrap();
        assert_eq!(sum, a);
    }

    #[test]
    fn arithmetic_errors() {
        let a = jet(&[1.0, 1.0]);
        let b = jet(&[1.0, 1.0, 1.0]);
        assert!(matches!(a.mul(&b), Err(Error::JetMismatch(_))));
        let c = Jet::from_coefficients(vec![1.0, 1.0], 2.0).unwrap();
        assert!(matches!(a.add(&c), Err(Error::JetMismatch(_))));
        assert!(matches!(a.div(&jet(&[0.0, 1.0])), Err(Error::JetDivisionByZero)));
        assert!(matches!(jet(&[-1.0, 0.0]).powf(0.5), Err(Error::JetNonPositiveBase(_))));
        assert!(matches!(a.derivative_at_base(2), Err(Error::JetOrderExceeded { .. })));
    }

    #[test]
    fn power_examples() {
        assert_eq!(jet_power(&jet(&[1.0, 1.0, 0.0]), 2.0).unwrap().coefficients(), &[1.0, 2.0, 1.0]);
        assert_eq!(jet_power(&jet(&[4.0, 0.0, 0.0]), 0.5).unwrap().coefficients(), &[2.0, 0.0, 0.0]);
        assert_eq!(jet_power(&jet(&[1.0, 2.0, 1.0]), 0.5).unwrap().coefficients(), &[1.0, 1.0, 0.0]);
    }

    #[test]
    fn derivative_examples() {
        // r^2 at r0 = 1
        let r = Jet::variable(3, 1.0);
        let r2 = r.mul(&r).unwrap();
        assert_eq!(derivative_at_base(&r2, 1).unwrap(), 2.0);
        assert_eq!(derivative_at_base(&r2, 2).unwrap(), 2.0);
        assert_eq!(derivative_at_base(&r2, 0).unwrap(), r2.value());
    }

    #[test]
    fn exact_on_integer_polynomials() {
        // (2 + 3t - t^2) (1 - t + 4t^3) truncated at K = 4
        let p = jet(&[2.0, 3.0, -1.0, 0.0, 0.0]);
        let q = jet(&[1.0, -1.0, 0.0, 4.0, 0.0]);
        let prod = p.mul(&q).unwrap();
        assert_eq!(prod.coefficients(), &[2.0, 1.0, -4.0, 9.0, 12.0]);
        let back = prod.div(&q).unwrap();
        for (x, y) in back.coefficients().iter().zip(p.coefficients()) {
            assert!((x - y).abs() <= 1e-14);
        }
        let cube = jet(&[1.0, 1.0, 0.0, 0.0, 0.0]).powf(3.0).unwrap();
        assert_eq!(cube.coefficients(), &[1.0, 3.0, 3.0, 1.0, 0.0]);
    }

    #[test]
    fn exp_jet() {
        // exp(z r) at r = 1: c_j = e^z z^j / j!
        let z = 1.7;
        let e = Jet::variable(4, 1.0).scale(z).exp();
        let mut fact = 1.0;
        for j in 0..=4 {
            if j > 0 {
                fact *= j as f64;
            }
            assert_relative_eq!(e.coefficients()[j], z.exp() * z.powi(j as i32) / fact, max_relative = 1e-14);
        }
    }

    /// log-log slope of the truncation error of `jet.eval(h)` against `f(r0 + h)`.
    fn truncation_slope(jet: &Jet, f: impl Fn(f64) -> f64) -> f64 {
        let hs = [1e-1, 1e-2, 1e-3];
        let errs: Vec<f64> = hs
            .iter()
            .map(|&h| (jet.eval(h) - f(jet.base_point() + h)).abs())
            .collect();
        let (x0, x1) = (hs[0].ln(), hs[2].ln());
        (errs[0].ln() - errs[2].ln()) / (x0 - x1)
    }

    #[test]
    fn truncation_error_order() {
        for k in 1..=3usize {
            let r = Jet::variable(k, 1.0);
            let j = r.powf(-1.5).unwrap().mul(&r.scale(0.8).exp()).unwrap();
            let slope = truncation_slope(&j, |r: f64| r.powf(-1.5) * (0.8 * r).exp());
            assert!(slope >= k as f64 + 0.5, "K={k} slope={slope}");

            let bj = bessel_i_of_sqrt_jet(Order::of(1.5), 3.0, k).unwrap();
            let slope = truncation_slope(&bj, |r: f64| bessel_i(Order::of(1.5), r.sqrt() * 3.0).unwrap());
            assert!(slope >= k as f64 + 0.5, "bessel K={k} slope={slope}");
        }
    }

    #[test]
    fn bessel_jet_value_and_first_derivative() {
        for &a in &[-2.0, -0.5, 0.0, 1.5, 4.0] {
            for &x in &[0.5, 3.0, 10.0] {
                let o = Order::of(a);
                let j = bessel_i_of_sqrt_jet(o, x, 6).unwrap();
                assert_relative_eq!(j.value(), bessel_i(o, x).unwrap(), max_relative = 1e-12);
                // d/dr I_a(sqrt(r) x) at r = 1 = (x/4)(I_{a-1}(x) + I_{a+1}(x))
                let d1 = x / 4.0 * (bessel_i(o.shifted(-1.0), x).unwrap() + bessel_i(o.shifted(1.0), x).unwrap());
                assert_relative_eq!(j.derivative_at_base(1).unwrap(), d1, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn bessel_jet_small_argument_limit() {
        let j = bessel_i_of_sqrt_jet(Order::of(0.0), 1e-8, 5).unwrap();
        assert_relative_eq!(j.value(), 1.0, max_relative = 1e-15);
        for c in &j.coefficients()[1..] {
            assert!(c.abs() < 1e-16);
        }
    }

    #[test]
    fn bessel_jet_rejects_bad_input() {
        assert!(bessel_i_of_sqrt_jet(Order::of(1.0), 0.0, 3).is_err());
        assert!(bessel_i_of_sqrt_jet(Order::of(1.0), 1.0, 13).is_err());
    }

    /// Richardson-extrapolated central differences of order j (j <= 4).
    fn richardson_derivative(f: &dyn Fn(f64) -> f64, r0: f64, j: usize) -> f64 {
        fn central(f: &dyn Fn(f64) -> f64, r0: f64, j: usize, h: f64) -> f64 {
            // j-th central difference with step h, stencil r0 + (i - j/2) h
            let mut acc = 0.0;
            let mut binom = 1.0;
            for i in 0..=j {
                let sign = if (j - i) % 2 == 0 { 1.0 } else { -1.0 };
                acc += sign * binom * f(r0 + (i as f64 - j as f64 / 2.0) * h);
                binom = binom * (j - i) as f64 / (i + 1) as f64;
            }
            acc / h.powi(j as i32)
        }
        let h0 = 0.08;
        let levels: usize = 5;
        let mut table: Vec<Vec<f64>> = Vec::new();
        for l in 0..levels {
            let h = h0 / 2f64.powi(l as i32);
            let mut row = vec![central(f, r0, j, h)];
            for m in 1..=l {
                let factor = 4f64.powi(m as i32);
                let v = (factor * row[m - 1] - table[l - 1][m - 1]) / (factor - 1.0);
                row.push(v);
            }
            table.push(row);
        }
        *table.last().unwrap().last().unwrap()
    }

    #[test]
    fn bessel_jet_derivatives_match_finite_differences() {
        for &a in &[0.0, 1.5, 3.0] {
            for &x in &[0.5, 2.0, 6.0, 10.0] {
                let o = Order::of(a);
                let jet = bessel_i_of_sqrt_jet(o, x, 4).unwrap();
                let f = |r: f64| bessel_i(o, r.sqrt() * x).unwrap();
                for j in 1..=2 {
                    let fd = richardson_derivative(&f, 1.0, j);
                    let got = jet.derivative_at_base(j).unwrap();
                    // Differences of order j lose about eps / h^j relative to the function scale.
                    let scale = got.abs().max(jet.value().abs());
                    assert!((got - fd).abs() <= 1e-8 * scale, "a={a} x={x} j={j}: {got} vs {fd}");
                }
            }
        }
    }

    #[test]
    fn bessel_jet_high_derivatives_match_reference() {
        // d^j/dr^j I_a(sqrt(r) x) at r = 1, j = 0..6, 40-digit reference.
        let table: [(f64, f64, [f64; 7]); 5] = [
            (0.0, 0.5, [1.0634833707413236, 0.06447357634772408, 0.001994134323608641, 4.132987451547322e-05, 6.437716791204044e-07, 8.030440735458266e-09, 8.352626773394966e-11]),
            (1.5, 2.0, [1.0994731886331097, 1.2216319716142228, 0.49629488562501106, 0.2977565157910767, -0.25523741943790257, 1.0609825067442182, -4.672826254398939]),
            (3.0, 6.0, [30.150540299463863, 95.13547370259789, 244.05810466637055, 514.3191541476915, 910.2640147394912, 1374.9388196478726, 1817.2861024734568]),
            (-2.0, 10.0, [2281.5189677260037, 11073.42255078027, 48246.07061009582, 189135.32613236937, 669408.0502992747, 2147899.4879125427, 6276517.725016801]),
            (-0.5, 3.0, [4.637757757861503, 5.762794915646026, 4.962019899408699, 3.1125635837476917, 1.9963506214164775, -1.296088995219308, 12.352824080064961]),
        ];
        for (a, x, derivs) in table {
            let jet = bessel_i_of_sqrt_jet(Order::of(a), x, 6).unwrap();
            for (j, want) in derivs.iter().enumerate() {
                let got = jet.derivative_at_base(j).unwrap();
                assert_relative_eq!(got, *want, max_relative = 1e-11);
            }
        }
    }

    #[test]
    fn weighted_bessel_jet_first_derivative_matches_finite_difference() {
        // r^{-2} I_a(sqrt(r) x) at r = 1
        let (o, x) = (Order::of(2.0), 3.0);
        let r = Jet::variable(3, 1.0);
        let jet = r.powf(-2.0).unwrap().mul(&bessel_i_of_sqrt_jet(o, x, 3).unwrap()).unwrap();
        let f = |r: f64| r.powf(-2.0) * bessel_i(o, r.sqrt() * x).unwrap();
        let fd = richardson_derivative(&f, 1.0, 1);
        assert!((jet.derivative_at_base(1).unwrap() - fd).abs() <= 1e-8 * fd.abs());
    }
}
