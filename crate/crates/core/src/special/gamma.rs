use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];
const SQRT_2PI: f64 = 2.506_628_274_631_000_7;
// Beyond this Gamma(x) overflows f64.
const GAMMA_OVERFLOW: f64 = 171.624_376_956_302_7;
const POLE_TOLERANCE: f64 = 1e-12;

fn lanczos_sum(z: f64) -> f64 {
    // z = x - 1
    let mut acc = LANCZOS_COEFFS[0];
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    acc
}

/// sin(pi x) with exact argument reduction, so values near integers keep full
/// relative accuracy.
pub(crate) fn sin_pi(x: f64) -> f64 {
    let n = x.round();
    let r = x - n;
    let s = (PI * r).sin();
    if (n as i64) % 2 == 0 {
        s
    } else {
        -s
    }
}

fn near_nonpositive_integer(x: f64) -> bool {
    x <= POLE_TOLERANCE && (x - x.round()).abs() <= POLE_TOLERANCE
}

fn exact_factorial(n: u32) -> f64 {
    (2..=n).fold(1.0, |acc, k| acc * k as f64)
}

// Gamma for x >= 0.5.
fn gamma_positive(x: f64) -> f64 {
    if x == x.floor() && x <= 23.0 {
        // Exact in f64 up to 22!.
        return exact_factorial(x as u32 - 1);
    }
    if x > GAMMA_OVERFLOW {
        return f64::INFINITY;
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    // Split the power to postpone overflow near the top of the range.
    let half = t.powf((z + 0.5) / 2.0);
    SQRT_2PI * half * (half * (-t).exp()) * lanczos_sum(z)
}

/// The Gamma function. Poles at the non-positive integers are reported as errors.
pub fn gamma(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::InvalidArgument(format!("gamma of non-finite {x}")));
    }
    if near_nonpositive_integer(x) {
        return Err(Error::Pole(x));
    }
    if x >= 0.5 {
        Ok(gamma_positive(x))
    } else {
        Ok(PI / (sin_pi(x) * gamma_positive(1.0 - x)))
    }
}

/// Natural log of |Gamma(x)|.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if near_nonpositive_integer(x) {
        return Err(Error::Pole(x));
    }
    if x < 0.5 {
        return Ok(PI.ln() - sin_pi(x).abs().ln() - ln_gamma(1.0 - x)?);
    }
    if x < 20.0 {
        return Ok(gamma_positive(x).ln());
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    Ok(SQRT_2PI.ln() + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln())
}

/// 1/Gamma(x), an entire function: exactly zero at the non-positive integers.
pub fn reciprocal_gamma(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x <= 0.0 && x == x.floor() {
        return 0.0;
    }
    if x >= 0.5 {
        if x > 150.0 {
            return (-ln_gamma(x).unwrap_or(f64::INFINITY)).exp();
        }
        1.0 / gamma_positive(x)
    } else {
        // 1/Gamma(x) = sin(pi x) Gamma(1 - x) / pi, finite through the poles.
        let g = gamma_positive(1.0 - x);
        if g.is_infinite() {
            let lg = ln_gamma(1.0 - x).unwrap_or(f64::INFINITY);
            return sin_pi(x) * (lg - PI.ln()).exp();
        }
        sin_pi(x) * g / PI
    }
}

/// Rising factorial `x (x+1) ... (x+m-1)`, by direct product.
pub fn pochhammer(x: f64, m: u32) -> f64 {
    (0..m).fold(1.0, |acc, i| acc * (x + i as f64))
}

/// `(a)_m / (b)_m` as a product of ratios, which stays finite when both
/// symbols overflow individually.
pub fn pochhammer_ratio(a: f64, b: f64, m: u32) -> Result<f64> {
    let mut acc = 1.0;
    for i in 0..m {
        let den = b + i as f64;
        if den == 0.0 {
            return Err(Error::domain(format!(
                "pochhammer denominator ({b})_{m} vanishes at index {i}"
            )));
        }
        acc *= (a + i as f64) / den;
    }
    Ok(acc)
}

/// Generalized binomial coefficient `a (a-1) ... (a-k+1) / k!` for real `a`.
pub fn generalized_binomial(a: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (a - i as f64) / (i as f64 + 1.0))
}

/// Euler Beta function `Gamma(p) Gamma(q) / Gamma(p+q)`.
pub fn beta_fn(p: f64, q: f64) -> Result<f64> {
    let gp = gamma(p)?;
    let gq = gamma(q)?;
    let r = reciprocal_gamma(p + q);
    let direct = gp * gq * r;
    if direct.is_finite() && direct != 0.0 {
        return Ok(direct);
    }
    // Large arguments: go through logarithms.
    let sign = gp.signum() * gq.signum() * gamma(p + q).map(f64::signum).unwrap_or(1.0);
    Ok(sign * (ln_gamma(p)? + ln_gamma(q)? - ln_gamma(p + q)?).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma(1.0).unwrap(), 1.0);
        assert_eq!(gamma(5.0).unwrap(), 24.0);
        assert_relative_eq!(gamma(0.5).unwrap(), 1.772_453_850_905_516, max_relative = 1e-14);
    }

    #[test]
    fn gamma_known_values() {
        // 25-digit reference values.
        let table = [
            (1.5, 0.886_226_925_452_758_0),
            (2.5, 1.329_340_388_179_137),
            (0.1, 9.513_507_698_668_731),
            (7.3, 1_271.423_633_663_908_8),
            (29.5, 1.634_812_519_827_426_6e30),
            (-0.5, -3.544_907_701_811_032),
            (-2.5, -0.945_308_720_482_941_9),
        ];
        for (x, g) in table {
            assert_relative_eq!(gamma(x).unwrap(), g, max_relative = 1e-13);
        }
    }

    #[test]
    fn gamma_factorials_across_range() {
        let mut f = 1.0f64;
        for n in 1..30u32 {
            // Gamma(n+1) = n!
            f *= n as f64;
            assert_relative_eq!(gamma(n as f64 + 1.0).unwrap(), f, max_relative = 1e-13);
        }
    }

    #[test]
    fn gamma_poles() {
        for x in [0.0, -1.0, -4.0, -7.0 + 1e-13] {
            assert!(matches!(gamma(x), Err(Error::Pole(_))));
        }
    }

    #[test]
    fn gamma_recurrence() {
        let mut x = 0.1;
        while x <= 20.0 {
            let ratio = gamma(x + 1.0).unwrap() / (x * gamma(x).unwrap());
            assert!((ratio - 1.0).abs() < 1e-12, "x={x} ratio={ratio}");
            x += 0.137;
        }
    }

    #[test]
    fn reciprocal_gamma_examples() {
        assert_eq!(reciprocal_gamma(0.0), 0.0);
        assert_eq!(reciprocal_gamma(-3.0), 0.0);
        assert_eq!(reciprocal_gamma(2.0), 1.0);
        for x in [-3.7, -0.3, 0.25, 1.9, 12.4, 29.0] {
            assert_relative_eq!(reciprocal_gamma(x), 1.0 / gamma(x).unwrap(), max_relative = 1e-13);
        }
    }

    #[test]
    fn reciprocal_gamma_near_poles_is_small_and_signed() {
        // 1/Gamma(-n + e) ~ (-1)^n n! e
        let e = 1e-9;
        assert_relative_eq!(reciprocal_gamma(-2.0 + e), 2.0 * e, max_relative = 1e-6);
        assert_relative_eq!(reciprocal_gamma(-3.0 + e), -6.0 * e, max_relative = 1e-6);
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(3.7, 0), 1.0);
        assert_eq!(pochhammer(1.0, 4), 24.0);
        assert_eq!(pochhammer(0.5, 2), 0.75);
        assert_eq!(pochhammer(-2.0, 5), 0.0);
    }

    #[test]
    fn pochhammer_matches_gamma_ratio() {
        for &x in &[0.3, 1.7, 4.25, 9.5] {
            for m in 0..12 {
                let via_gamma = gamma(x + m as f64).unwrap() / gamma(x).unwrap();
                assert_relative_eq!(pochhammer(x, m), via_gamma, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn pochhammer_ratio_large_m() {
        // (1)_m / (2)_m = 1/(m+1)
        assert_relative_eq!(pochhammer_ratio(1.0, 2.0, 5000).unwrap(), 1.0 / 5001.0, max_relative = 1e-12);
        assert!(pochhammer_ratio(1.0, -2.0, 5).is_err());
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(generalized_binomial(5.0, 2), 10.0);
        assert_eq!(generalized_binomial(1.0, 2), 0.0);
        assert_eq!(generalized_binomial(-0.5, 1), -0.5);
    }

    #[test]
    fn binomial_reflection() {
        // C(n, k) = (-1)^k C(-n+k-1, k)
        for &n in &[-3.0, -0.5, 0.7, 4.0, 6.3] {
            for k in 0..10u32 {
                let lhs = generalized_binomial(n, k);
                let rhs = if k % 2 == 0 { 1.0 } else { -1.0 } * generalized_binomial(-n + k as f64 - 1.0, k);
                assert!((lhs - rhs).abs() <= 1e-13 * lhs.abs().max(1e-300), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn beta_values() {
        assert_relative_eq!(beta_fn(0.5, 0.5).unwrap(), PI, max_relative = 1e-14);
        assert_relative_eq!(beta_fn(2.0, 3.0).unwrap(), 1.0 / 12.0, max_relative = 1e-14);
    }
}
