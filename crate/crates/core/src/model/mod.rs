//! Physical parameters and the Fock-state transition kernel.

pub mod extended;
pub mod kernel;
pub mod matrix;
pub mod params;
pub mod relaxation;

pub use kernel::{
    column_tail_bound, transition, transition_direct, transition_direct_extended, transition_hypergeometric,
    Conditioned, KernelPath, KernelPolicy, KernelValue,
};
pub use matrix::{build_transition_matrix, TransitionMatrix, TruncationCertificate};
pub use params::{thermal_occupation, ModelParams};
pub use relaxation::{relaxation_pair, RelaxationPair};
