//! Dirac electron in a chiral electromagnetic space-time crystal.
//!
//! An electromagnetic space-time crystal (ESTC) is a field lattice built from
//! six monochromatic plane waves, periodic in space and time. This crate
//! solves the Dirac equation in the chiral 2D lattice formed by two
//! counterpropagating circularly polarized waves, whose rotating polarization
//! frame couples the electron spin to its direction of motion.
//!
//! The solver expands the bispinor wave function in a Floquet-Bloch series
//! over an even integer lattice of Fourier harmonics, truncates the series at
//! a configurable order, and reduces the problem to a real symmetric
//! block-tridiagonal eigenproblem per spin branch. From the two dispersion
//! branches it reconstructs the four basic wave functions, their mean
//! observables (energy, kinetic momentum, velocity, spin), and the
//! unidirectional (spin-precession) and bidirectional superposition states
//! with their velocity and spin textures.
//!
//! Modules:
//! - [`lattice`], [`gamma`], [`field`]: harmonic bookkeeping, the fixed
//!   16-element Dirac-matrix basis and its D-set coefficients, wave
//!   amplitudes.
//! - [`coupling`], [`pairing`], [`structural`]: Fourier-space coupling
//!   matrices of the Dirac system, their Hermitian pairings and projection
//!   operators, and the closed-form structural parameters used as
//!   validation data.
//! - [`evolution`], [`dispersion`]: the reduced one-dimensional evolution
//!   system, the truncated spectral solve, recurrence validators.
//! - [`wavefunction`], [`observables`], [`superposition`]: bispinor
//!   assembly, inner products, the residual functional, mean values and
//!   sweeps, superposition states and vector fields.
//! - [`check`]: deterministic self-check suite exposed through the CLI.

pub mod check;
pub mod coupling;
pub mod dispersion;
pub mod error;
pub mod evolution;
pub mod field;
pub mod gamma;
pub mod lattice;
pub mod observables;
pub mod pairing;
pub mod structural;
pub mod superposition;
pub mod wavefunction;

pub use dispersion::{solve_pair, BranchPair, DispersionBranch, SolverParams};
pub use error::Error;
pub use field::{FieldAmplitudes, FourVectorQ};
pub use lattice::LatticeIndex;
