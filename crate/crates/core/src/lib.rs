//! Probability numbers of reciprocal Chebyshev generating functions, exact
//! classical and generalized Euler polynomials, and checks of the identities
//! that connect them.
//!
//! The exact scalar throughout is an arbitrary-precision rational
//! ([`exactnum::ExactRational`]); floating point only appears in the
//! trigonometric formula, the asymptotic ratio and the Monte Carlo code.
//!
//! ```
//! use chebyeuler::probnum::probnum_series;
//! use chebyeuler::exactnum::rational;
//!
//! let table = probnum_series(2, 6).unwrap();
//! assert_eq!(table.exact_value(4), Some(&rational(1, 4)));
//! ```

pub mod chebyshev;
pub mod cli;
pub mod error;
pub mod eulerpoly;
pub mod exactnum;
pub mod identities;
pub mod probnum;
pub mod stochastic;

pub use error::{Error, Result};
