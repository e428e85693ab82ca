//! Numerics for the freezing-transition picture of extreme values.
//!
//! The crate samples circular unitary ensemble (CUE) characteristic
//! polynomials and the matching 1/f Fourier surrogate, builds partition
//! functions and free energies over circle grids, checks integer moments
//! against exact Toeplitz determinants and their Fisher–Hartwig asymptotics,
//! compares recentered maxima with the limit law `p(x) = 2 e^x K0(2 e^{x/2})`,
//! and evaluates the Riemann zeta function on the critical line with the
//! Riemann–Siegel formula for desk-height interval experiments.

// NaN inputs are rejected with `!(x > 0.0)` style guards throughout.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cuepoly;
pub mod ensemble;
pub mod error;
pub mod extremes;
pub mod field;
pub mod fourierfield;
pub mod rng;
pub mod specialfn;
pub mod thermo;
pub mod zetaline;

mod optimize;

pub use error::{Error, Result};
pub use field::{FieldGrid, FieldSource, Landscape};
