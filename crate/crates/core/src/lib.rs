//! Simulation of spin-lock-induced crossing (SLIC) and its compensated and
//! adiabatic variants for strongly coupled spin-1/2 pairs.
//!
//! The crate is organised bottom-up:
//!
//! * [`spin_ops`]: dense operator algebra on the Zeeman product basis,
//!   singlet/triplet states, single-transition operators and singlet order.
//! * [`system`]: spin systems, rotating-frame Hamiltonians and config files.
//! * [`pulse`]: sequence builders (SLIC, adSLIC, cSLIC), the cycle-string
//!   language with its supercycles, and the matching-condition catalog.
//! * [`propagator`]: exact piecewise-constant propagators and first-order
//!   average Hamiltonians in the interaction frame.
//! * [`analysis`]: transfer amplitudes, parameter maps, closed-form
//!   excitation efficiencies, rf-inhomogeneity averaging and CSV/JSON export.
//! * [`hetero`]: the singlet-mediated ¹H → ¹³C transfer pipeline.
//!
//! All Hamiltonians are in angular frequency units (rad/s); every
//! user-facing parameter is in Hz.

pub mod analysis;
pub mod error;
pub mod hetero;
pub mod propagator;
pub mod pulse;
pub mod spin_ops;
pub mod system;

pub use error::{Error, Result};
pub use spin_ops::{Operator, Role, StateVector};
pub use system::{Channel, OffsetSetting, SpinSystem};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;
/// Dense complex column vector.
pub type CVector = nalgebra::DVector<C64>;

pub(crate) const TWO_PI: f64 = 2.0 * std::f64::consts::PI;
