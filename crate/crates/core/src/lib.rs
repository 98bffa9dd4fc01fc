//! Heat-exchange statistics of a thermal quantum harmonic oscillator weakly
//! coupled to a bath at a different temperature.
//!
//! Heat is `Q = E_final − E_initial` of the oscillator, so `Q > 0` is energy
//! absorbed from the bath. Inverse temperatures enter as `βħω` and time as
//! `τ = γt`; `ħω` only scales reported energies.

pub mod error;
pub mod model;
pub mod oracle;
pub mod stats;
pub mod summation;
pub mod verify;

pub use error::{Error, Result};
pub use model::{ModelParams, RelaxationPair, TransitionMatrix};
