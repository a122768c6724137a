//! Core library for a Galilean-invariant spin-s field model with a rank-1
//! separable two-body interaction.
//!
//! The crate is `no_std` (with `alloc`) and splits into:
//!
//! * [`spinor`], [`symmetric`], [`reduction`]: four-component spinor matrices, boost
//!   representations, symmetric multispinor bases and the reduction of the
//!   multispinor wave equation to its dynamical components;
//! * [`form_factor`]: the momentum-space regulator families;
//! * [`quadrature`]: adaptive radial integrals, including the principal-value
//!   continuation above threshold;
//! * [`two_body`]: bound state, phase shift, position-space wavefunction and
//!   effective-range analysis for the separable channel;
//! * [`oracle`]: independent grid solvers (Lippmann-Schwinger, Hamiltonian
//!   diagonalization, exchange-symmetry contraction) used to cross-check the
//!   closed-form path.
//!
//! All IO, serialization and the command-line driver live in the companion
//! `galispin` crate.

#![no_std]

extern crate alloc;

pub mod form_factor;
pub mod linalg;
pub mod oracle;
pub mod quadrature;
pub mod reduction;
pub mod roots;
pub mod spinor;
pub mod symmetric;
pub mod two_body;

pub use form_factor::{FormFactor, FormFactorFamily};
pub use two_body::{ModelParams, Normalization, SpinLabel};
