//! Bare and atom-dressed susceptibilities of the coupled system, and sampled
//! cavity response profiles.
//!
//! Frequencies are measured in the frame rotating at the drive, so the
//! mechanical sidebands sit at `omega = +omega_m` (anti-Stokes, cooling) and
//! `omega = -omega_m` (Stokes, heating).

use nalgebra::Complex;
use num_traits::One;

use crate::error::{Error, Result};
use crate::model::{cooperativities, SystemParams};
use crate::scalar::Scalar;

/// Below this magnitude the inverse dressed response is treated as a gain
/// pole (normalized units, where rates are order one).
pub const GAIN_POLE_TOLERANCE: f64 = 1e-12;

fn reciprocal<T: Scalar>(z: Complex<T>) -> Complex<T> {
    Complex::<T>::one() / z
}

/// Mirror susceptibility `omega_m / (omega_m^2 - omega^2 - i gamma_m omega)`.
///
/// With `gamma_m = 0` the expression has a true pole at `omega = +-omega_m`,
/// reported as [`Error::Pole`].
pub fn mirror_susceptibility<T: Scalar>(omega: T, params: &SystemParams<T>) -> Result<Complex<T>> {
    let den = Complex::new(
        params.omega_m * params.omega_m - omega * omega,
        -(params.gamma_m * omega),
    );
    if den.norm_sqr() == T::zero() {
        return Err(Error::Pole {
            omega: omega.as_f64(),
        });
    }
    Ok(Complex::new(params.omega_m, T::zero()) / den)
}

/// Bare cavity susceptibility `1 / (kappa + i (delta_f - omega))`.
pub fn cavity_susceptibility<T: Scalar>(omega: T, params: &SystemParams<T>) -> Complex<T> {
    reciprocal(Complex::new(params.kappa, params.delta_f - omega))
}

/// Ground-state ensemble susceptibility `1 / (gamma1 + i (delta1 - omega))`.
pub fn ground_ensemble_susceptibility<T: Scalar>(omega: T, params: &SystemParams<T>) -> Complex<T> {
    reciprocal(Complex::new(params.gamma1, params.delta1 - omega))
}

/// Inverted ensemble susceptibility `1 / (gamma2 - i (delta2 + omega))`.
///
/// The sign structure differs from the ground-state ensemble because the
/// inverted medium couples to the conjugate field quadrature.
pub fn inverted_ensemble_susceptibility<T: Scalar>(
    omega: T,
    params: &SystemParams<T>,
) -> Complex<T> {
    reciprocal(Complex::new(params.gamma2, -(params.delta2 + omega)))
}

/// Inverse of the atom-dressed cavity response,
/// `1/eps_f(omega) + G1^2 eps_1(omega) - G2^2 conj(eps_2(-omega))`.
pub fn dressed_cavity_inverse<T: Scalar>(omega: T, params: &SystemParams<T>) -> Complex<T> {
    let g1_sq = Complex::new(params.g1 * params.g1, T::zero());
    let g2_sq = Complex::new(params.g2 * params.g2, T::zero());
    Complex::new(params.kappa, params.delta_f - omega)
        + g1_sq * ground_ensemble_susceptibility(omega, params)
        - g2_sq * inverted_ensemble_susceptibility(-omega, params).conj()
}

/// Atom-dressed cavity susceptibility.
///
/// Reduces bit-exactly to [`cavity_susceptibility`] for `g1 = g2 = 0`.
/// Reports [`Error::GainPole`] when the inverse response vanishes, which can
/// only happen with an over-driven gain medium (C2 >= 1).
pub fn dressed_cavity_susceptibility<T: Scalar>(
    omega: T,
    params: &SystemParams<T>,
) -> Result<Complex<T>> {
    let inverse = dressed_cavity_inverse(omega, params);
    let magnitude = inverse.norm_sqr().sqrt();
    if magnitude < T::lit(GAIN_POLE_TOLERANCE) {
        return Err(Error::GainPole {
            omega: omega.as_f64(),
            magnitude: magnitude.as_f64(),
        });
    }
    Ok(reciprocal(inverse))
}

/// Predicted scaling of the dressed response at the two sidebands.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipPeakMetrics<T> {
    /// Stokes-side attenuation `(1 + C1)^-1` of the cavity response.
    pub dip_factor: T,
    /// Anti-Stokes-side amplification `(1 - C2)^-1`; `None` once the gain
    /// medium is unstable (C2 >= 1).
    pub peak_factor: Option<T>,
    /// Width of the dip, `gamma1 (1 + C1)`.
    pub dip_width: T,
    /// Width of the peak, `gamma2 (1 - C2)`.
    pub peak_width: T,
}

/// Dip and peak scaling factors for ensembles tuned onto the sidebands
/// (`delta1 = -omega_m`, `delta2 = +omega_m`).
pub fn dip_peak_metrics<T: Scalar>(params: &SystemParams<T>) -> DipPeakMetrics<T> {
    let derived = cooperativities(params);
    let peak_factor = if derived.c2 < T::one() {
        Some(T::one() / (T::one() - derived.c2))
    } else {
        None
    };
    DipPeakMetrics {
        dip_factor: T::one() / (T::one() + derived.c1),
        peak_factor,
        dip_width: derived.gamma1_bar,
        peak_width: derived.gamma2_bar,
    }
}

/// Kind of feature marked on a sampled response profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MarkerKind {
    /// Local minimum carved by the ground-state ensemble.
    Dip,
    /// Local maximum raised by the inverted ensemble.
    Peak,
}

/// A located dip or peak on the sampled profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResponseMarker<T> {
    pub kind: MarkerKind,
    /// Grid frequency of the extremum.
    pub omega: T,
    /// Response magnitude at the extremum.
    pub magnitude: T,
    /// Analytic width of the feature.
    pub width: T,
}

/// Uniformly sampled magnitude of the dressed cavity response.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseProfile<T> {
    /// Strictly increasing frequency grid.
    pub omegas: Vec<T>,
    /// `|dressed response|` at each grid frequency.
    pub magnitudes: Vec<T>,
    /// Located dip/peak features, if the corresponding ensemble is coupled.
    pub markers: Vec<ResponseMarker<T>>,
}

/// Samples `|dressed response|` on a uniform grid and marks the grid extrema
/// nearest the ensemble resonances.
///
/// Markers are diagnostics: the extremum is located by grid search in a
/// window around the known resonance frequency, not by global optimization.
pub fn response_profile<T: Scalar>(
    params: &SystemParams<T>,
    omega_min: T,
    omega_max: T,
    n_samples: usize,
) -> Result<ResponseProfile<T>> {
    if !omega_min.is_finite_scalar() || !omega_max.is_finite_scalar() || omega_min >= omega_max {
        return Err(Error::InvalidArgument {
            arg: "omega_min",
            reason: "grid bounds must be finite with omega_min < omega_max".into(),
        });
    }
    if n_samples < 2 {
        return Err(Error::InvalidArgument {
            arg: "n_samples",
            reason: "need at least 2 samples".into(),
        });
    }

    let step = (omega_max - omega_min) / T::from_usize(n_samples - 1).expect("grid size");
    let mut omegas = Vec::with_capacity(n_samples);
    let mut magnitudes = Vec::with_capacity(n_samples);
    for i in 0..n_samples {
        let omega = omega_min + step * T::from_usize(i).expect("grid index");
        let response = dressed_cavity_susceptibility(omega, params)?;
        omegas.push(omega);
        magnitudes.push(response.norm_sqr().sqrt());
    }

    let derived = cooperativities(params);
    let mut markers = Vec::new();
    if params.g1 > T::zero() {
        if let Some(marker) = grid_extremum(
            &omegas,
            &magnitudes,
            params.delta1,
            window(derived.gamma1_bar, step),
            MarkerKind::Dip,
            derived.gamma1_bar,
        ) {
            markers.push(marker);
        }
    }
    if params.g2 > T::zero() && derived.c2 < T::one() {
        if let Some(marker) = grid_extremum(
            &omegas,
            &magnitudes,
            params.delta2,
            window(derived.gamma2_bar, step),
            MarkerKind::Peak,
            derived.gamma2_bar,
        ) {
            markers.push(marker);
        }
    }

    Ok(ResponseProfile {
        omegas,
        magnitudes,
        markers,
    })
}

fn window<T: Scalar>(width: T, step: T) -> T {
    let five = T::lit(5.0);
    let two = T::lit(2.0);
    (five * width).max(two * step)
}

fn grid_extremum<T: Scalar>(
    omegas: &[T],
    magnitudes: &[T],
    center: T,
    half_window: T,
    kind: MarkerKind,
    width: T,
) -> Option<ResponseMarker<T>> {
    let mut best: Option<usize> = None;
    for (i, (&omega, &mag)) in omegas.iter().zip(magnitudes).enumerate() {
        if (omega - center).abs() > half_window {
            continue;
        }
        let better = match (kind, best) {
            (_, None) => true,
            (MarkerKind::Dip, Some(j)) => mag < magnitudes[j],
            (MarkerKind::Peak, Some(j)) => mag > magnitudes[j],
        };
        if better {
            best = Some(i);
        }
    }
    best.map(|i| ResponseMarker {
        kind,
        omega: omegas[i],
        magnitude: magnitudes[i],
        width,
    })
}
