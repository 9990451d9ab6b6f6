//! Polaron Thomas-Fermi energy and bounds on the ground-state energy of the
//! translation invariant N-polaron (Fröhlich) model.
//!
//! The crate is split into:
//!
//! * [`numerics`]: radial grids, quadrature, Coulomb and Riesz energies, radial
//!   Fourier transforms and the special constants used by the bounds.
//! * [`ptf`]: the Polaron Thomas-Fermi functional, solved both through the
//!   Lane-Emden reduction of its Euler-Lagrange equation and by projected
//!   gradient descent on a radial grid.
//! * [`upper`] and [`lower`]: evaluators for the upper and lower energy bounds.
//! * [`fock`]: a finite-mode, occupation-truncated phonon Fock space used to
//!   check the coherent-state identities numerically.
//! * [`report`]: the key-value and CSV records shared by all bound reports.

pub mod error;
pub mod fock;
pub mod lower;
pub mod numerics;
pub mod params;
pub mod ptf;
pub mod report;
pub mod upper;

pub use error::{Error, Result};
pub use params::{CouplingParams, Regime};
