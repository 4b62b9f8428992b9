//! Instantons and hyperbolic vortices from positive harmonic potentials.
//!
//! Fields are built from a super-potential through closed-form ansätze and
//! checked by evaluating the field equations on exact Taylor jets. Chern
//! numbers, actions and holonomies are computed by deterministic quadrature.

pub mod error;
pub mod gauge_holonomy;
pub mod instanton;
pub mod potentials;
pub mod quadrature;
pub mod quaternion;
pub mod reduction;
pub mod taylor;
pub mod tolerances;
pub mod vortex;

pub use error::{CoreError, Result};
pub use num_complex::Complex64;
pub use potentials::{Cut, Jet2, Jet4, PotentialSpec, SuperPotential};
pub use quadrature::{QuadConfig, QuadResult};
pub use quaternion::{QOneForm, QTwoForm, Quaternion};
pub use vortex::{HyperPoint, Kind, Model, VortexSample};
