//! Gauss–Legendre rules on [-1, 1], nodes by Newton iteration on P_n.

use std::f64::consts::PI;
use std::sync::OnceLock;

#[derive(Debug)]
pub(crate) struct GaussRule {
    /// Nodes in (-1, 1), ascending.
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn build(n: usize) -> GaussRule {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        // Tricomi's initial guess, then Newton.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() <= 1e-17 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    GaussRule { nodes, weights }
}

pub(crate) fn rule64() -> &'static GaussRule {
    static RULE: OnceLock<GaussRule> = OnceLock::new();
    RULE.get_or_init(|| build(64))
}

pub(crate) fn rule128() -> &'static GaussRule {
    static RULE: OnceLock<GaussRule> = OnceLock::new();
    RULE.get_or_init(|| build(128))
}

/// Applies `rule` on [0, 1]; `f` receives `(r, 1 - r)`, both formed without cancellation.
pub(crate) fn apply_unit<F: Fn(f64, f64) -> f64>(rule: &GaussRule, f: &F) -> f64 {
    rule.nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&xi, &w)| 0.5 * w * f(0.5 * (1.0 + xi), 0.5 * (1.0 - xi)))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two_and_nodes_are_symmetric() {
        for rule in [rule64(), rule128()] {
            let s: f64 = rule.weights.iter().sum();
            assert!((s - 2.0).abs() < 1e-14);
            let n = rule.nodes.len();
            for i in 0..n {
                assert_eq!(rule.nodes[i], -rule.nodes[n - 1 - i]);
            }
            assert!(rule.nodes.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn integrates_high_degree_monomials_exactly() {
        // x^{2k} over [-1,1] = 2/(2k+1), exact for 2k <= 2n-1
        for k in [0usize, 10, 40, 63] {
            let rule = rule64();
            let s: f64 = rule.nodes.iter().zip(&rule.weights).map(|(x, w)| w * x.powi(2 * k as i32)).sum();
            let exact = 2.0 / (2 * k + 1) as f64;
            assert!((s - exact).abs() <= 1e-14 * exact.max(1.0), "k={k}: {s} vs {exact}");
        }
    }
}
