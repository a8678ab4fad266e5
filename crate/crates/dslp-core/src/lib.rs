//! Complete real spectra of self-adjoint discrete Sturm-Liouville problems
//! for arbitrary self-adjoint boundary conditions, plus a registry of
//! hypothesis-checked verifiers for the eigenvalue interlacing inequalities
//! that hold across boundary conditions and across equations.
//!
//! The crate is organised around five modules:
//!
//! * [`poly`] — dense real polynomial arithmetic and guaranteed real-root
//!   isolation via Sturm chains;
//! * [`slp`] — the problem data model: equations, boundary conditions,
//!   canonical forms, chart coordinates and the eigenvalue-count formula;
//! * [`spectrum`] — fundamental solutions, the characteristic polynomial,
//!   the spectrum solver and two independent verification oracles;
//! * [`bc`] — constructors for derived boundary-condition families:
//!   natural loops, limit BCs, separated companions and modified couplings;
//! * [`ineq`] — the theorem registry, per-theorem inequality checkers,
//!   hypothesis-respecting instance samplers and the batch suite runner.

pub mod bc;
pub mod ineq;
pub mod mat2;
pub mod poly;
pub mod slp;
pub mod spectrum;

pub use poly::{RealPolynomial, RootSet};
pub use slp::{CanonicalBC, Equation, RawBC};
pub use spectrum::Spectrum;
