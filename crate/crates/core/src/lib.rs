//! Two-spinon dynamical structure factor of the spin-1/2 isotropic
//! antiferromagnetic Heisenberg chain.
//!
//! The crate is organised bottom-up:
//!
//! - [`quadrature`] and [`special`]: adaptive Gauss–Kronrod integration, the
//!   exponential/cosine integrals and the Gamma function values the
//!   amplitude needs.
//! - [`kinematics`]: spinon energy and momentum as functions of the rapidity,
//!   the two-spinon band and the closed-form inversion `(w, k) -> (β1, β2)`.
//! - [`formfactor`]: the squared amplitude `|A±(β)|²` and the overall constant.
//! - [`dcf`]: the structure factor itself, its Cartesian components, grids and
//!   integrated weights.
//! - [`xxz`]: q-Pochhammer products, theta functions, Jacobi elliptic
//!   functions and the anisotropic spinon dispersion with its isotropic limit.
//! - [`ed`]: exact diagonalization of short periodic chains used as an
//!   independent cross-check of the analytic result.
//! - [`table`]: the CSV/JSON table format shared by every emitter.

pub mod dcf;
pub mod ed;
pub mod error;
pub mod formfactor;
pub mod kinematics;
pub mod quadrature;
pub mod special;
pub mod table;
pub mod xxz;

pub use error::{Error, Result};
