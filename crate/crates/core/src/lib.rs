//! Simulation kernels for quantum tests of the weak equivalence principle (WEP)
//! with torsion balances.
//!
//! Inertial and gravitational masses of a two-level test body are promoted to
//! operators, `M = m + H/c^2`. The crate evaluates the resulting free-fall
//! acceleration statistics, the torque operator of a static Eötvös balance
//! driven by the Sun, and the angular-acceleration operator of a Cavendish
//! balance with rotating source masses, together with noise budgets and the
//! Monte Carlo machinery used for phase averaging.
//!
//! All quantities are SI. Angles are radians.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cavendish;
pub mod ensemble;
pub mod eotvos;
mod error;
pub mod frames;
pub mod linalg2;
pub mod noise;
pub mod state;
pub mod wep;

pub use error::{Error, Result};

/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Newtonian constant of gravitation (m^3 kg^-1 s^-2), CODATA 2018.
pub const G_NEWTON: f64 = 6.674_30e-11;
/// Boltzmann constant (J/K).
pub const K_BOLTZMANN: f64 = 1.380_649e-23;
