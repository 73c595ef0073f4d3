//! Additive-energy toolkit for finite lattice sets and compact balls.
//!
//! The crate computes `E_k(A_1,...,A_k)` -- the number of zero-sum tuples --
//! exactly for finite subsets of the integer lattice, with a brute-force
//! oracle and a convolution engine that must agree; implements the
//! single-axis compression calculus whose inequalities the verification
//! suite checks; evaluates the corresponding continuous energies of
//! origin-centered balls by radial quadrature and seeded Monte Carlo; and
//! searches coset-representative systems for extremal carry densities.
//!
//! Everything discrete is exact: counts are arbitrary-precision integers
//! and normalized energies are rationals. Floats appear only where the
//! continuum does.

pub mod ball;
pub mod carries;
pub mod compression;
pub mod energy;
pub mod error;
pub mod io;
pub mod lattice;
pub mod quadrature;
pub mod sample;

pub use ball::{BallConfig, BallSpec, EstimateMethod, QuadratureEstimate};
pub use energy::{EnergyConfig, EnergyEngine, EnergyResult, RepTable};
pub use error::{Error, Result};
pub use lattice::{BoxShape, LatticeSet, Point, ProgressionSpec};
