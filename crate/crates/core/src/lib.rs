//! Limit periodic point sets from constant-length substitutions and their
//! pure point diffraction, evaluated both in closed form on the 2-adic
//! Fourier module and by brute-force windowed sums.

pub mod chair;
pub mod cli;
pub mod dyadic;
pub mod numerics;
pub mod peaks;
pub mod period_doubling;
pub mod subst;

pub use dyadic::{Complex, Dyadic, DyadicPoint2, Interval};
