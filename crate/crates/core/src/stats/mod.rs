//! Heat distribution, characteristic function, limiting laws and cumulants.

pub mod asymptotic;
pub mod charfn;
pub mod cumulants;
pub mod distribution;
pub mod inversion;

pub use asymptotic::{
    asymptotic_distribution, asymptotic_prefactor, classical_distribution, isothermal_distribution,
    low_temperature_distribution, ClassicalDensity,
};
pub use charfn::{
    asymptotic_charfn, charfn, charfn_from_matrix, convergence_strip, isothermal_charfn, symmetry_partner, CharFnSample,
};
pub use cumulants::{
    cumulant_trace, fd_moments, mean_heat, stationary_mean, stationary_variance, variance_heat, CumulantTrace,
    FdMoments, TauGrid,
};
pub use distribution::{HeatDistribution, Horizon, Provenance};
pub use inversion::{default_k_max, default_quadrature_points, forward_transform, heat_distribution, invert_charfn};
