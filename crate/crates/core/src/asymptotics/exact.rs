//! Laguerre polynomials in exact rational arithmetic.
//!
//! Every finite `f64` is a dyadic rational, so polynomial identities between
//! Laguerre values can be decided exactly instead of to a rounding floor.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub(crate) fn rational(v: f64) -> Result<BigRational> {
    BigRational::from_float(v).ok_or_else(|| Error::domain(format!("{v} is not a finite number")))
}

/// `L_0^alpha(x) ..= L_top^alpha(x)` by the three-term recurrence, exactly.
pub(crate) fn laguerre_sequence(top: u32, alpha: &BigRational, x: &BigRational) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(top as usize + 1);
    out.push(BigRational::one());
    if top == 0 {
        return out;
    }
    out.push(BigRational::one() + alpha - x);
    for k in 1..top {
        let kr = BigRational::from_integer(k.into());
        let next = ((&kr + &kr + BigRational::one() + alpha - x) * &out[k as usize]
            - (&kr + alpha) * &out[k as usize - 1])
            / (kr + BigRational::one());
        out.push(next);
    }
    out
}

/// `sum_i (-1)^{k-i} C(k, i) f_{m+i}` over exact values.
pub(crate) fn forward_difference(values: &[BigRational], m: usize, k: u32) -> BigRational {
    let mut acc = BigRational::zero();
    let mut binom = BigRational::one();
    for i in 0..=k {
        if i > 0 {
            binom = binom * BigRational::from_integer((k - i + 1).into()) / BigRational::from_integer(i.into());
        }
        let term = &binom * &values[m + i as usize];
        if (k - i) % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}
