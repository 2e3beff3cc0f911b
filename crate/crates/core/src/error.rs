//! Error type shared by all modules.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong while evaluating the model.
///
/// Numeric payloads are carried as `f64` regardless of the scalar type the
/// computation ran at; they are diagnostics, not data.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter violates its invariant; names the first offending field.
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParam { field: &'static str, reason: String },

    /// A bare susceptibility was evaluated exactly on an undamped resonance.
    #[error("susceptibility pole at omega = {omega:.6e}")]
    Pole { omega: f64 },

    /// The dressed cavity response diverges: its inverse vanished.
    #[error(
        "gain pole in dressed cavity response at omega = {omega:.6e} (|inverse| = {magnitude:.3e})"
    )]
    GainPole { omega: f64, magnitude: f64 },

    /// An inverted-ensemble expression is undefined at cooperativity >= 1.
    #[error("gain-unstable configuration: C2 = {c2:.6} >= 1")]
    GainUnstable { c2: f64 },

    /// A requested asymptotic quantity has no defined value here.
    #[error("undefined quantity: {0}")]
    Undefined(&'static str),

    /// Net heating: the perturbative picture has no steady state.
    #[error("net heating (cooling rate {gamma:.3e} <= -gamma_m); no perturbative steady state")]
    NetHeating { gamma: f64 },

    /// The drift matrix is not strictly stable; no steady-state covariance.
    #[error(
        "drift matrix not strictly stable (spectral abscissa {abscissa:.3e}); no steady state"
    )]
    NotStable { abscissa: f64 },

    /// The dense Lyapunov solve hit a singular coefficient matrix.
    #[error("lyapunov solve failed: singular coefficient matrix")]
    SingularSolve,

    /// The Lyapunov solve succeeded but the residual is untrustworthy.
    #[error("ill-conditioned lyapunov solve: relative residual {residual:.3e}")]
    IllConditioned { residual: f64 },

    /// Moment integration could not form a positive step size.
    #[error("moment integration step underflow (t_end = {t_end:.3e})")]
    StepUnderflow { t_end: f64 },

    /// Moment integration produced non-finite values.
    #[error(
        "moment integration diverged (non-finite values; unstable drift over a long horizon?)"
    )]
    Diverged,

    /// A covariance matrix failed a physicality requirement.
    #[error("unphysical covariance: mirror occupancy {n:.3e} below zero")]
    Unphysical { n: f64 },

    /// Generic precondition violation on an operation argument.
    #[error("invalid argument `{arg}`: {reason}")]
    InvalidArgument { arg: &'static str, reason: String },
}
