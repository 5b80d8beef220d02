//! Numerical toolkit for sampling discretization of entire functions of
//! exponential type.
//!
//! The crate is split along the lines of the computation:
//!
//! - [`nets`]: covering and packing nets in the sup-norm, greedy thinning,
//!   disjoint partitions of cube families.
//! - [`chebyshev`]: Chebyshev polynomials, their growth and derivative bounds,
//!   the rate function `psi` and its roots.
//! - [`approx`]: tensor Fourier-Chebyshev expansions on cubes with a priori
//!   coefficient and error bounds.
//! - [`models`]: concrete functions of exponential type used as test subjects.
//! - [`verify`]: discretization constants, L_q norms, sample sums and the
//!   Marcinkiewicz-Zygmund verification experiments.
//! - [`grid`]: tensor grids and sup-norm estimates shared by the above.

pub mod approx;
pub mod chebyshev;
mod error;
pub mod grid;
pub mod io;
mod lq;
pub mod models;
pub mod nets;
pub mod verify;

pub use error::{Error, Result};
pub use lq::Lq;
pub use num_complex::Complex64;
