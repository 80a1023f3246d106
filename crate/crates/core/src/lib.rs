//! Fixed-N two-mode bosonic states: Fock-basis operator algebra, coherent, phase-space,
//! cat and Gaussian fragmented states, ladder-operator diagnostics, fragmentation and
//! quadrature observables, and real-space density-density correlations.

pub mod correlations;
pub mod error;
pub mod fock;
pub mod io;
pub mod ladder;
pub mod numeric;
pub mod observables;
pub mod states;

pub use error::{Error, Result};
pub use fock::{
    apply_monomial, expectation, fidelity, inner, Factor, Mode, ModeMonomial, Moments, TwoModeState,
};
pub use num_complex::Complex64;
