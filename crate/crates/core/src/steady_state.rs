//! Exact steady state of the full linearized four-mode model.
//!
//! The mirror (q, p), cavity field (X, Y) and the two ensembles (x1, y1,
//! x2, y2) form an eight-dimensional quadrature vector u obeying
//! `du/dt = A u + noise`. The steady covariance V solves the algebraic
//! Lyapunov equation `A V + V A^T + D = 0`, with D the symmetrized noise
//! covariance. Field-like quadratures follow the convention
//! `X = (a + a^dag)/sqrt(2)`, `Y = (a - a^dag)/(i sqrt(2))`, so vacuum
//! variance is 1/2 and the mirror occupancy reads `(V_qq + V_pp - 1)/2`.

use nalgebra::{Complex, SMatrix, SVector};

use crate::error::{Error, Result};
use crate::model::SystemParams;
use crate::scalar::Scalar;

/// Quadrature-space dimension: four modes, two quadratures each.
pub const DIM: usize = 8;
/// Length of the symmetric (upper-triangle) vectorization of an 8x8 matrix.
const VECH: usize = DIM * (DIM + 1) / 2;

/// 8x8 real matrix over the crate scalar.
pub type Matrix8<T> = SMatrix<T, 8, 8>;

/// Relative Frobenius residual above which a Lyapunov solve is rejected.
pub const LYAPUNOV_RESIDUAL_TOL: f64 = 1e-10;
/// Occupancies below `-OCCUPANCY_TOL` are reported as unphysical.
pub const OCCUPANCY_TOL: f64 = 1e-9;

/// Index of each quadrature in the state vector.
pub mod index {
    pub const Q: usize = 0;
    pub const P: usize = 1;
    pub const X: usize = 2;
    pub const Y: usize = 3;
    pub const X1: usize = 4;
    pub const Y1: usize = 5;
    pub const X2: usize = 6;
    pub const Y2: usize = 7;
}

/// Drift matrix of the quadrature-space Langevin system.
///
/// The radiation-pressure force `G (a + a^dag)` becomes `sqrt(2) G X` on the
/// mirror momentum row, and symmetrically `sqrt(2) G q` drives the field
/// phase quadrature. Ensemble 1 couples like a beam splitter; ensemble 2
/// couples to the conjugated field and carries the gain sign pattern.
pub fn drift_matrix<T: Scalar>(params: &SystemParams<T>) -> Matrix8<T> {
    use index::*;
    let p = params;
    let sqrt2_g = T::lit(2.0).sqrt() * p.g;
    let mut a = Matrix8::zeros();

    a[(Q, P)] = p.omega_m;

    a[(P, Q)] = -p.omega_m;
    a[(P, P)] = -p.gamma_m;
    a[(P, X)] = sqrt2_g;

    a[(X, X)] = -p.kappa;
    a[(X, Y)] = p.delta_f;
    a[(X, Y1)] = p.g1;
    a[(X, Y2)] = -p.g2;

    a[(Y, Q)] = sqrt2_g;
    a[(Y, X)] = -p.delta_f;
    a[(Y, Y)] = -p.kappa;
    a[(Y, X1)] = -p.g1;
    a[(Y, X2)] = -p.g2;

    a[(X1, Y)] = p.g1;
    a[(X1, X1)] = -p.gamma1;
    a[(X1, Y1)] = p.delta1;

    a[(Y1, X)] = -p.g1;
    a[(Y1, X1)] = -p.delta1;
    a[(Y1, Y1)] = -p.gamma1;

    a[(X2, Y)] = -p.g2;
    a[(X2, X2)] = -p.gamma2;
    a[(X2, Y2)] = -p.delta2;

    a[(Y2, X)] = -p.g2;
    a[(Y2, X2)] = p.delta2;
    a[(Y2, Y2)] = -p.gamma2;

    a
}

/// Symmetrized diffusion matrix of the quadrature-space noise.
///
/// The mirror position carries no direct noise; its momentum sees the
/// thermal bath at `gamma_m (2 n_th + 1)`. Field and ensemble inputs are
/// vacuum, contributing `kappa`, `gamma1` and `gamma2` per quadrature.
pub fn diffusion_matrix<T: Scalar>(params: &SystemParams<T>) -> Matrix8<T> {
    use index::*;
    let two = T::lit(2.0);
    let mut d = Matrix8::zeros();
    d[(P, P)] = params.gamma_m * (two * params.n_th + T::one());
    d[(X, X)] = params.kappa;
    d[(Y, Y)] = params.kappa;
    d[(X1, X1)] = params.gamma1;
    d[(Y1, Y1)] = params.gamma1;
    d[(X2, X2)] = params.gamma2;
    d[(Y2, Y2)] = params.gamma2;
    d
}

/// Drift and diffusion of the linear system at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftDiffusion<T> {
    pub drift: Matrix8<T>,
    pub diffusion: Matrix8<T>,
}

impl<T: Scalar> DriftDiffusion<T> {
    pub fn from_params(params: &SystemParams<T>) -> Self {
        Self {
            drift: drift_matrix(params),
            diffusion: diffusion_matrix(params),
        }
    }
}

/// Stability verdict for a drift matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stability<T> {
    /// True iff every drift eigenvalue has a strictly negative real part.
    pub stable: bool,
    /// Largest eigenvalue real part; negative means stable, and its size is
    /// the decay rate of the slowest transient.
    pub spectral_abscissa: T,
}

/// Eigenvalue-based stability test.
pub fn stability_check<T: Scalar>(a: &Matrix8<T>) -> Stability<T> {
    let eigenvalues = a.complex_eigenvalues();
    let spectral_abscissa = eigenvalues
        .iter()
        .map(|l| l.re)
        .fold(T::lit(f64::NEG_INFINITY), |acc, re| acc.max(re));
    Stability {
        stable: spectral_abscissa < T::zero(),
        spectral_abscissa,
    }
}

fn vech_index(i: usize, j: usize) -> usize {
    debug_assert!(i <= j && j < DIM);
    i * (2 * DIM - i + 1) / 2 + (j - i)
}

fn symmetrize<T: Scalar>(m: Matrix8<T>) -> Matrix8<T> {
    (m + m.transpose()) * T::lit(0.5)
}

/// Solves `A V + V A^T + D = 0` for the steady covariance.
///
/// Direct dense solve of the symmetric vectorization (36 unknowns), checked
/// by its residual. Errors on an unstable drift (no steady state), a
/// singular solve, or a relative residual above [`LYAPUNOV_RESIDUAL_TOL`]
/// (widened to `1000 eps` for scalars whose epsilon cannot resolve it).
pub fn solve_lyapunov<T: Scalar>(a: &Matrix8<T>, d: &Matrix8<T>) -> Result<Matrix8<T>> {
    let stability = stability_check(a);
    if !stability.stable {
        return Err(Error::NotStable {
            abscissa: stability.spectral_abscissa.as_f64(),
        });
    }

    let mut system = SMatrix::<T, VECH, VECH>::zeros();
    let mut rhs = SVector::<T, VECH>::zeros();
    for i in 0..DIM {
        for j in i..DIM {
            let row = vech_index(i, j);
            rhs[row] = -d[(i, j)];
            for k in 0..DIM {
                let col = vech_index(k.min(j), k.max(j));
                system[(row, col)] += a[(i, k)];
                let col = vech_index(i.min(k), i.max(k));
                system[(row, col)] += a[(j, k)];
            }
        }
    }

    let solution = system.lu().solve(&rhs).ok_or(Error::SingularSolve)?;
    let mut v = Matrix8::zeros();
    for i in 0..DIM {
        for j in i..DIM {
            let value = solution[vech_index(i, j)];
            v[(i, j)] = value;
            v[(j, i)] = value;
        }
    }

    let residual = (a * v + v * a.transpose() + d).norm() / d.norm();
    let tolerance = T::lit(LYAPUNOV_RESIDUAL_TOL).max(T::default_epsilon() * T::lit(1e3));
    if residual > tolerance {
        return Err(Error::IllConditioned {
            residual: residual.as_f64(),
        });
    }
    Ok(v)
}

/// Mirror occupancy `(V_qq + V_pp - 1) / 2` of a covariance matrix.
///
/// Values below `-`[`OCCUPANCY_TOL`] indicate an unphysical covariance and
/// are reported as an error.
pub fn mirror_occupancy<T: Scalar>(v: &Matrix8<T>) -> Result<T> {
    let n = (v[(index::Q, index::Q)] + v[(index::P, index::P)] - T::one()) * T::lit(0.5);
    if n < -T::lit(OCCUPANCY_TOL) {
        return Err(Error::Unphysical { n: n.as_f64() });
    }
    Ok(n)
}

/// Symplectic form of the four-mode quadrature ordering: block-diagonal
/// `[[0, 1], [-1, 0]]` per mode.
pub fn symplectic_form<T: Scalar>() -> Matrix8<T> {
    let mut omega = Matrix8::zeros();
    for mode in 0..DIM / 2 {
        omega[(2 * mode, 2 * mode + 1)] = T::one();
        omega[(2 * mode + 1, 2 * mode)] = -T::one();
    }
    omega
}

/// Minimum eigenvalue of the Hermitian matrix `V + (i/2) Omega`.
///
/// Non-negative (up to solver tolerance) iff V is the covariance of a
/// physical Gaussian state under vacuum variance 1/2.
pub fn physicality_margin<T: Scalar>(v: &Matrix8<T>) -> T {
    let omega = symplectic_form::<T>();
    let half = T::lit(0.5);
    let mut h = SMatrix::<Complex<T>, 8, 8>::zeros();
    for i in 0..DIM {
        for j in 0..DIM {
            h[(i, j)] = Complex::new(v[(i, j)], half * omega[(i, j)]);
        }
    }
    let eigen = nalgebra::SymmetricEigen::new(h);
    eigen
        .eigenvalues
        .iter()
        .copied()
        .fold(T::lit(f64::INFINITY), |acc, x| acc.min(x))
}

/// Step-size policy for [`integrate_moments`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl<T> {
    /// Upper bound on `||A|| h` for the base propagator step.
    pub max_step_norm: T,
    /// Cap on the number of step doublings used to span the horizon.
    pub max_doublings: u32,
}

impl<T: Scalar> Default for StepControl<T> {
    fn default() -> Self {
        Self {
            max_step_norm: T::one(),
            max_doublings: 100,
        }
    }
}

/// Infinity norm (max absolute row sum).
fn inf_norm<T: Scalar>(a: &Matrix8<T>) -> T {
    let mut worst = T::zero();
    for i in 0..DIM {
        let mut row = T::zero();
        for j in 0..DIM {
            row += a[(i, j)].abs();
        }
        worst = worst.max(row);
    }
    worst
}

fn all_finite<T: Scalar, const R: usize, const C: usize>(m: &SMatrix<T, R, C>) -> bool {
    m.iter().all(|x| x.is_finite_scalar())
}

/// One exact propagator step of duration `h`: returns `Phi = e^{A h}` and
/// the accumulated noise `Q_h = int_0^h e^{A s} D e^{A^T s} ds`, read off
/// the exponential of the augmented generator `[[-A, D], [0, A^T]] h`.
fn propagator_step<T: Scalar>(a: &Matrix8<T>, d: &Matrix8<T>, h: T) -> (Matrix8<T>, Matrix8<T>) {
    let mut augmented = SMatrix::<T, 16, 16>::zeros();
    augmented.fixed_view_mut::<8, 8>(0, 0).copy_from(&(-a * h));
    augmented.fixed_view_mut::<8, 8>(0, 8).copy_from(&(d * h));
    augmented
        .fixed_view_mut::<8, 8>(8, 8)
        .copy_from(&(a.transpose() * h));
    let exponential = augmented.exp();
    let phi = exponential
        .fixed_view::<8, 8>(8, 8)
        .transpose()
        .into_owned();
    let noise = phi * exponential.fixed_view::<8, 8>(0, 8);
    (phi, symmetrize(noise))
}

/// Integrates the moment flow `dV/dt = A V + V A^T + D` from `V0` to
/// `t_end`.
///
/// Each accepted step applies the exact propagator of the linear flow; the
/// controller halves the base step until `||A|| h` fits under
/// `control.max_step_norm`, then spans the horizon by step doubling, so the
/// cost grows only logarithmically with `t_end`. For a stable drift and
/// `t_end` much longer than the slowest transient the result converges to
/// the Lyapunov solution; an unstable drift is integrated just as well over
/// horizons where the moments stay finite.
pub fn integrate_moments<T: Scalar>(
    a: &Matrix8<T>,
    d: &Matrix8<T>,
    v0: &Matrix8<T>,
    t_end: T,
    control: &StepControl<T>,
) -> Result<Matrix8<T>> {
    if !t_end.is_finite_scalar() || t_end < T::zero() {
        return Err(Error::InvalidArgument {
            arg: "t_end",
            reason: "must be finite and >= 0".into(),
        });
    }
    if t_end == T::zero() {
        return Ok(*v0);
    }

    let norm = inf_norm(a);
    let mut doublings = 0u32;
    let mut base_step = t_end;
    while norm * base_step > control.max_step_norm && doublings < control.max_doublings {
        base_step *= T::lit(0.5);
        doublings += 1;
    }
    if base_step == T::zero() || !base_step.is_finite_scalar() {
        return Err(Error::StepUnderflow {
            t_end: t_end.as_f64(),
        });
    }
    // The augmented exponential holds e^{-A h}; keep its entries within
    // floating-point range.
    if norm * base_step > T::lit(700.0) {
        return Err(Error::Diverged);
    }

    let (mut phi, mut noise) = propagator_step(a, d, base_step);
    for _ in 0..doublings {
        noise = symmetrize(phi * noise * phi.transpose() + noise);
        phi = phi * phi;
        if !all_finite(&phi) || !all_finite(&noise) {
            return Err(Error::Diverged);
        }
    }

    let v = phi * v0 * phi.transpose() + noise;
    if !all_finite(&v) {
        return Err(Error::Diverged);
    }
    Ok(symmetrize(v))
}

/// Steady-state report for one parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct SteadyStateResult<T> {
    /// Stability verdict of the drift matrix.
    pub stable: bool,
    /// Largest real part among the drift eigenvalues.
    pub spectral_abscissa: T,
    /// Steady covariance; absent when the system is unstable.
    pub covariance: Option<Matrix8<T>>,
    /// Mirror occupancy extracted from the covariance; absent when unstable.
    pub n_mirror: Option<T>,
}

/// Builds the drift and diffusion for `params`, certifies stability and, if
/// stable, solves for the steady covariance and the mirror occupancy.
pub fn steady_state<T: Scalar>(params: &SystemParams<T>) -> Result<SteadyStateResult<T>> {
    params.validate()?;
    let system = DriftDiffusion::from_params(params);
    let stability = stability_check(&system.drift);
    if !stability.stable {
        return Ok(SteadyStateResult {
            stable: false,
            spectral_abscissa: stability.spectral_abscissa,
            covariance: None,
            n_mirror: None,
        });
    }
    let covariance = solve_lyapunov(&system.drift, &system.diffusion)?;
    let n_mirror = mirror_occupancy(&covariance)?;
    Ok(SteadyStateResult {
        stable: true,
        spectral_abscissa: stability.spectral_abscissa,
        covariance: Some(covariance),
        n_mirror: Some(n_mirror),
    })
}
