//! Multipartite Bell inequalities from the Hadamard-matrix polytope
//! construction, tomograms and correlation functions of GHZ-type states
//! under spin, optical and photon-number tomography, deterministic
//! violation searches, and spin-state reconstruction from tomograms.
//!
//! The crate is organized around the objects it manipulates:
//!
//! * [`multiindex`] — binary multi-index codecs and the correlation-matrix
//!   algebra (Hadamard matrices, the coefficient matrix `E_n`, the block
//!   matrix `A_n`).
//! * [`inequalities`] — the full inequality family on correlation vectors,
//!   the Mermin subfamily, membership tests and the classical-vertex oracle.
//! * [`specfun`] — error function, Jacobi polynomials, Wigner rotation
//!   matrix elements and exact Wigner 3j symbols.
//! * [`schemes`] — tomogram and correlation evaluation for GHZ-type states
//!   under the three tomographic schemes, with configurable binnings.
//! * [`reconstruct`] — density-matrix reconstruction from spin tomograms by
//!   quadrature over the rotation group.
//! * [`optimize`] — deterministic maximization of Bell expressions over
//!   setting parameters.
//! * [`quad`] — the small quadrature toolbox shared by the above.

pub mod error;
pub mod inequalities;
pub mod multiindex;
pub mod optimize;
pub mod quad;
pub mod reconstruct;
pub mod schemes;
pub mod specfun;

pub use error::{Error, Result};
