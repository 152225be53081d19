//! Numerical toolkit for Bessel identities obtained as large-order limits of
//! Laguerre polynomial identities.
//!
//! * [`special`]: Gamma family, Laguerre polynomials of any real order, Bessel J and I.
//! * [`jet`]: truncated Taylor arithmetic used for derivatives at a base point.
//! * [`quadrature`]: tanh-sinh and Gauss-Legendre rules on finite intervals.
//! * [`identities`]: the Bessel-side identity catalog as residual computations.
//! * [`asymptotics`]: finite-N Laguerre checks, large-N limits and convergence studies.

pub mod asymptotics;
pub mod error;
pub mod identities;
pub mod jet;
pub mod quadrature;
pub mod special;

pub use error::{Error, Result};
pub use special::{CompensatedReal, Order};
