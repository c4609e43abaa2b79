//! Thermodynamic-limit engine: conditional Gaussian averages of the LVQ1
//! modulation terms and the ODE system for the order parameters.

mod averages;
mod ode;
mod rk4;

pub use averages::{
    average_terms, gaussian_moments, modulation_argument, normal_cdf, normal_pdf, AverageTerms,
    ClusterAverages, GaussianMoments, LinearForm,
};
pub use ode::{integrate, ode_rhs, output_grid_points, OdeSettings, GRAM_TOLERANCE};
pub use rk4::rk4_step;
