//! Temporal compatibility of bipartite quantum correlations.
//!
//! Given a bipartite operator `tau` on `A ⊗ B` whose marginals are density
//! matrices, this crate builds the Hermitian-preserving trace-preserving map
//! `E: A -> B` whose canonical state over time `E ⋆ rho_A` reproduces `tau`,
//! splits it into a generalized dephasing stage followed by a pretty good
//! measure-and-prepare stage, and decides whether `E` is completely positive
//! through a dephased, distorted partial-transpose test.
//!
//! The crate is `no_std` (it needs `alloc`). Everything operates on small
//! dense complex matrices; see [`operators`] for the linear-algebra kernel.
//!
//! Modules:
//!
//! - [`operators`]: dense complex matrices, Hermitian spectral decompositions,
//!   partial traces and transposes, Hadamard products, pseudoinverse roots.
//! - [`channels`]: linear maps stored by their Choi matrix.
//! - [`sot`]: states over time, two-time expectation values, pseudo-density
//!   matrices.
//! - [`temporal`]: temporal channels, dephasing, pretty good measurements and
//!   the compatibility certificate.
//! - [`retrodiction`]: Petz recovery maps and Bayesian inverses.
//! - [`ensembles`]: product ensembles, seeded random instances and perfect
//!   distinguishability.

#![no_std]
#![warn(clippy::std_instead_of_alloc)]
#![warn(clippy::std_instead_of_core)]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod channels;
pub mod ensembles;
mod error;
pub mod operators;
pub mod random;
pub mod retrodiction;
pub mod sot;
pub mod temporal;
mod tolerance;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use tolerance::Tolerances;
