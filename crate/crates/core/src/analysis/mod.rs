//! Numerical companions to the monotonicity and critical-point arguments.

pub mod critical;
pub mod directional;
pub mod fractional;
pub mod lemma2;
pub mod quadrature;

pub use critical::{
    det_bracket, det_identity, df_dh, diagonal_off_component, explore_grid, f3_towards_rho, f_components, f_eval,
    f_eval_trace, phi_matrix, rho, CriticalState, DetIdentity, DirectionMatrix, ExplorerRow, PhiMatrix,
};
pub use directional::{g_directional_derivative, DerivativeMethod, DirectionalDerivative};
pub use fractional::{frac_power_integral, frac_power_spectral, sym_eigen};
pub use lemma2::{h_max, lemma2_f, lemma2_f_prime, offdiag_gap, offdiag_gap_integral};
