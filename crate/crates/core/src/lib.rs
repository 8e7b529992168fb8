//! Simulation and design-feasibility toolkit for probing partial coherence
//! between classical-like states of a damped harmonic oscillator with the
//! help of a single qubit.
//!
//! A qubit in (|0⟩ + |1⟩)/√2 displaces the oscillator in opposite
//! directions through the coupling εxσ_z. After half an oscillation period
//! the two branches are maximally separated; after a full period they
//! recombine and whatever coherence survived the environment is left on
//! the qubit as the factor e^{−2D₀₁}.
//!
//! * [`analytic`] evaluates the closed-form model and the feasibility
//!   conditions, including the flux-qubit/LC and ion-trap realizations.
//! * [`dynamics`] integrates the Markovian master equation on a truncated
//!   Fock space and extracts observables.
//! * [`protocol`] runs the two-step experiment, thermal averaging and
//!   parameter sweeps.
//! * [`cli`] is the command-line surface used by the `macrocoherence` binary.

// negated comparisons are used to reject NaN along with out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod cli;

pub mod dynamics;
pub mod error;
pub mod hilbert;
pub mod protocol;

pub mod states;
pub mod units;

pub use error::{Error, Result};
pub use num_complex::Complex64;
