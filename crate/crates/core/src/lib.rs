//! Cooling a vibrating cavity end-mirror with intracavity two-level
//! ensembles.
//!
//! A ground-state ensemble tuned to the lower mechanical sideband carves a
//! dip into the cavity response (suppressing Stokes heating) while an
//! inverted ensemble tuned to the upper sideband raises a gain peak
//! (enhancing anti-Stokes cooling). The crate evaluates:
//!
//! - bare and atom-dressed susceptibilities and sampled response profiles
//!   ([`response`]),
//! - the Langevin force spectrum on the mirror, sideband scattering rates,
//!   perturbative occupancies and closed-form asymptotics ([`spectrum`]),
//! - the exact steady covariance of the linearized four-mode model via the
//!   algebraic Lyapunov equation, with stability certification and an
//!   independent moment-flow integrator ([`mod@steady_state`]).
//!
//! All numerics are generic over the scalar type through
//! [`scalar::Scalar`] (`f32` or `f64`); concrete `f64`/`f32` aliases for
//! the main types live at the crate root. Frequencies and rates share one
//! unit; computations are typically run in normalized units where the
//! mechanical frequency is 1.

pub mod error;
pub mod model;
pub mod response;
pub mod scalar;
pub mod selftest;
pub mod spectrum;
pub mod steady_state;

pub use error::{Error, Result};
pub use model::{
    bosonization_check, cooperativities, effective_detuning, BosonizationCheck, DerivedCouplings,
    DerivedParams, PhysicalSetup, SystemParams,
};
pub use response::{
    cavity_susceptibility, dip_peak_metrics, dressed_cavity_susceptibility,
    ground_ensemble_susceptibility, inverted_ensemble_susceptibility, mirror_susceptibility,
    response_profile, DipPeakMetrics, MarkerKind, ResponseMarker, ResponseProfile,
};
pub use scalar::Scalar;
pub use spectrum::{
    cavity_thermal_occupancy, combined_asymptotics, effective_temperature, force_spectrum,
    ground_state_cooling_rate, ground_state_residual_occupancy, inverted_cooling_rate,
    inverted_residual_occupancy, perturbative_occupancy, regime_validity, scattering_rates,
    CombinedAsymptotics, RegimeCheck, ScatteringRates, SpectrumReport,
};
pub use steady_state::{
    diffusion_matrix, drift_matrix, integrate_moments, mirror_occupancy, physicality_margin,
    solve_lyapunov, stability_check, steady_state, symplectic_form, DriftDiffusion, Matrix8,
    Stability, SteadyStateResult, StepControl,
};

/// `f64` system parameters.
pub type SystemParams64 = SystemParams<f64>;
/// `f32` system parameters.
pub type SystemParams32 = SystemParams<f32>;
/// `f64` raw physical inputs.
pub type PhysicalSetup64 = PhysicalSetup<f64>;
/// `f32` raw physical inputs.
pub type PhysicalSetup32 = PhysicalSetup<f32>;
/// `f64` spectrum report.
pub type SpectrumReport64 = SpectrumReport<f64>;
/// `f32` spectrum report.
pub type SpectrumReport32 = SpectrumReport<f32>;
/// `f64` steady-state result.
pub type SteadyStateResult64 = SteadyStateResult<f64>;
/// `f32` steady-state result.
pub type SteadyStateResult32 = SteadyStateResult<f32>;
/// `f64` response profile.
pub type ResponseProfile64 = ResponseProfile<f64>;
/// `f32` response profile.
pub type ResponseProfile32 = ResponseProfile<f32>;
