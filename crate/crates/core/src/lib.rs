//! Dynamics of the 2-D anharmonic oscillator `V = (q1² + q2²)/2 + q1²q2²`
//! in rescaled units, at three levels of description:
//!
//! * classical motion ([`dynamics`] with [`dynamics::Classical`]),
//! * one-loop effective motion in the second-order derivative expansion
//!   ([`effective`], [`dynamics::Effective`]),
//! * exact quantum evolution in a truncated oscillator basis ([`quantum`]).
//!
//! The two dimensionless parameters are the energy `ε = E·g/(m²ω⁴)` and the
//! quantum scale `γ = ħ·g/(m²ω³)`; `γ = 0` reproduces the classical system
//! exactly. Chaos diagnostics (Poincaré sections, largest Lyapunov exponent,
//! regular fractions and the threshold-energy scan) live in [`chaos`], and the
//! one-loop verification machinery (Gelfand-Yaglom determinants, WKB
//! recursion) in [`oneloop`].
//!
//! The crate is `no_std`-compatible (with `alloc`); all file formats and the
//! command-line front end live in the companion `semiclassica-cli` crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod chaos;
pub mod dynamics;
pub mod effective;
pub mod linalg;
pub mod model;
pub mod numeric;
pub mod oneloop;
pub mod quantum;
pub mod rng;

pub(crate) mod math;

pub use num_complex::Complex64;
