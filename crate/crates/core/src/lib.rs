//! Higher order digital nets and sequences over F2.
//!
//! The crate builds Sobol'-type generating matrices from primitive
//! polynomials, turns them into higher order constructions by digit
//! interlacing, generates the resulting points exactly as dyadic rationals,
//! and measures them: exact L2 discrepancy (Warnock's formula and its Walsh
//! series), equidistribution of elementary boxes and interval unions, and a
//! linear-independence certifier for the order-alpha net property.
//!
//! Module map:
//!
//! * [`gf2`]: bit-packed vectors and matrices over F2.
//! * [`poly`]: F2 polynomials, primitive polynomial supply, Laurent series.
//! * [`genmat`]: generating matrix sets, interlacing, truncation, t bounds.
//! * [`pointgen`]: dyadic points, digital shifts, the finite-N construction.
//! * [`walsh`]: Walsh functions and the discrepancy kernel coefficients.
//! * [`discrepancy`]: Warnock evaluation, prefix scans and oracles.
//! * [`netverify`]: t-value certification, box counts, dual nets.
//! * [`cli`]: the `hodisc` command line front end.

pub mod cli;
pub mod discrepancy;
pub mod error;
pub mod genmat;
pub mod gf2;
pub mod netverify;
pub mod pointgen;
pub mod poly;
pub mod walsh;

pub use error::{Error, Result};
