//! Model parameters and derived quantities.
//!
//! [`SystemParams`] is the full parameter set of the linearized
//! mirror–cavity–ensemble model; [`PhysicalSetup`] holds optional raw
//! physical inputs from which the linearized couplings are derived. All
//! angular frequencies and rates share one unit (rad/s, or a normalized
//! unit where the mechanical frequency is 1).

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Reduced Planck constant (J s), CODATA.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant (J/K), exact SI.
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Default threshold standing in for "much less than" in the bosonization
/// validity chain.
pub const BOSONIZATION_THRESHOLD: f64 = 0.1;

/// Parameters of the linearized model.
///
/// Two ensembles couple to the cavity field: ensemble 1 sits in its ground
/// state and acts as a loss channel, ensemble 2 is pumped into inversion and
/// acts as a gain channel. The mirror couples to the field through radiation
/// pressure with the drive-enhanced coupling `g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams<T> {
    /// Mechanical angular frequency (> 0).
    pub omega_m: T,
    /// Mechanical damping rate (>= 0).
    pub gamma_m: T,
    /// Cavity amplitude decay rate (> 0).
    pub kappa: T,
    /// Effective cavity detuning, drive frequency already subtracted.
    pub delta_f: T,
    /// Linearized optomechanical coupling G = G0 * alpha (>= 0).
    pub g: T,
    /// Collective coupling of the ground-state ensemble, G1 = g1 sqrt(N1).
    pub g1: T,
    /// Collective coupling of the inverted ensemble, G2 = g2 sqrt(N2).
    pub g2: T,
    /// Decay rate of ensemble 1 (> 0).
    pub gamma1: T,
    /// Effective pump rate of ensemble 2 (> 0).
    pub gamma2: T,
    /// Detuning of ensemble 1 from the drive.
    pub delta1: T,
    /// Detuning of ensemble 2 from the drive.
    pub delta2: T,
    /// Initial thermal occupancy of the mirror bath (>= 0).
    pub n_th: T,
}

impl<T: Scalar> SystemParams<T> {
    /// Checks every invariant, reporting the first violation by field name.
    pub fn validate(&self) -> Result<()> {
        fn finite<T: Scalar>(field: &'static str, value: T) -> Result<T> {
            if value.is_finite_scalar() {
                Ok(value)
            } else {
                Err(Error::InvalidParam {
                    field,
                    reason: format!("must be finite, got {}", value.as_f64()),
                })
            }
        }
        fn positive<T: Scalar>(field: &'static str, value: T) -> Result<()> {
            if finite(field, value)? > T::zero() {
                Ok(())
            } else {
                Err(Error::InvalidParam {
                    field,
                    reason: "must be > 0".into(),
                })
            }
        }
        fn non_negative<T: Scalar>(field: &'static str, value: T) -> Result<()> {
            if finite(field, value)? >= T::zero() {
                Ok(())
            } else {
                Err(Error::InvalidParam {
                    field,
                    reason: "must be >= 0".into(),
                })
            }
        }

        positive("omega_m", self.omega_m)?;
        non_negative("gamma_m", self.gamma_m)?;
        positive("kappa", self.kappa)?;
        finite("delta_f", self.delta_f)?;
        non_negative("g", self.g)?;
        non_negative("g1", self.g1)?;
        non_negative("g2", self.g2)?;
        positive("gamma1", self.gamma1)?;
        positive("gamma2", self.gamma2)?;
        finite("delta1", self.delta1)?;
        finite("delta2", self.delta2)?;
        non_negative("n_th", self.n_th)?;
        Ok(())
    }

    /// Validating constructor; returns the parameters unchanged when every
    /// invariant holds.
    pub fn validated(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    /// Reference configuration in normalized units (mechanical frequency 1):
    /// bad cavity (kappa = 100), resonant drive, ground-state ensemble tuned
    /// to the lower sideband and inverted ensemble to the upper one, hot
    /// mirror bath.
    pub fn bad_cavity_reference() -> Self {
        Self {
            omega_m: T::one(),
            gamma_m: T::lit(1e-5),
            kappa: T::lit(100.0),
            delta_f: T::zero(),
            g: T::one(),
            g1: T::one(),
            g2: T::zero(),
            gamma1: T::lit(0.01),
            gamma2: T::one(),
            delta1: -T::one(),
            delta2: T::one(),
            n_th: T::lit(100.0),
        }
    }
}

/// Raw physical inputs from which the linearized couplings are derived.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalSetup<T> {
    /// Cavity resonance frequency (rad/s).
    pub omega_c: T,
    /// Drive laser frequency (rad/s).
    pub omega_l: T,
    /// Cavity length (m, > 0).
    pub length: T,
    /// Effective mirror mass (kg, > 0).
    pub mass: T,
    /// Single-atom coupling of ensemble 1 (rad/s).
    pub g1_atom: T,
    /// Single-atom coupling of ensemble 2 (rad/s).
    pub g2_atom: T,
    /// Atom count of ensemble 1.
    pub n1_atoms: u64,
    /// Atom count of ensemble 2.
    pub n2_atoms: u64,
    /// Steady intracavity field amplitude (real, >= 0).
    pub alpha: T,
}

/// Couplings and detuning derived from a [`PhysicalSetup`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedCouplings<T> {
    /// Single-photon optomechanical coupling G0 = (omega_c / L) sqrt(hbar / (m omega_m)).
    pub g0: T,
    /// Drive-enhanced optomechanical coupling G = G0 * alpha.
    pub g: T,
    /// Collective coupling of ensemble 1, g1 sqrt(N1).
    pub g1: T,
    /// Collective coupling of ensemble 2, g2 sqrt(N2).
    pub g2: T,
    /// Bare cavity-drive detuning omega_c - omega_l.
    pub delta0: T,
}

impl<T: Scalar> PhysicalSetup<T> {
    /// Checks the raw-input invariants.
    pub fn validate(&self) -> Result<()> {
        let all_finite = [
            ("omega_c", self.omega_c),
            ("omega_l", self.omega_l),
            ("length", self.length),
            ("mass", self.mass),
            ("g1_atom", self.g1_atom),
            ("g2_atom", self.g2_atom),
            ("alpha", self.alpha),
        ];
        for (field, value) in all_finite {
            if !value.is_finite_scalar() {
                return Err(Error::InvalidParam {
                    field,
                    reason: "must be finite".into(),
                });
            }
        }
        if self.length <= T::zero() {
            return Err(Error::InvalidParam {
                field: "length",
                reason: "must be > 0".into(),
            });
        }
        if self.mass <= T::zero() {
            return Err(Error::InvalidParam {
                field: "mass",
                reason: "must be > 0".into(),
            });
        }
        if self.alpha < T::zero() {
            return Err(Error::InvalidParam {
                field: "alpha",
                reason: "must be >= 0 (the steady amplitude can be taken real)".into(),
            });
        }
        Ok(())
    }

    /// Bare cavity-drive detuning omega_c - omega_l.
    pub fn delta0(&self) -> T {
        self.omega_c - self.omega_l
    }

    /// Derives the linearized couplings at mechanical frequency `omega_m`.
    pub fn derive_couplings(&self, omega_m: T) -> Result<DerivedCouplings<T>> {
        self.validate()?;
        if omega_m <= T::zero() || !omega_m.is_finite_scalar() {
            return Err(Error::InvalidParam {
                field: "omega_m",
                reason: "must be > 0 and finite".into(),
            });
        }
        let g0 = self.omega_c / self.length * (T::lit(HBAR) / (self.mass * omega_m)).sqrt();
        let g1 = self.g1_atom * T::from_u64(self.n1_atoms).expect("atom count fits").sqrt();
        let g2 = self.g2_atom * T::from_u64(self.n2_atoms).expect("atom count fits").sqrt();
        Ok(DerivedCouplings {
            g0,
            g: g0 * self.alpha,
            g1,
            g2,
            delta0: self.delta0(),
        })
    }
}

/// Effective cavity detuning after the static radiation-pressure shift,
/// `delta0 - g^2 / omega_m`.
pub fn effective_detuning<T: Scalar>(delta0: T, g: T, omega_m: T) -> Result<T> {
    if omega_m <= T::zero() {
        return Err(Error::InvalidParam {
            field: "omega_m",
            reason: "must be > 0".into(),
        });
    }
    Ok(delta0 - g * g / omega_m)
}

/// Cooperativities and the light-modified atomic linewidths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedParams<T> {
    /// Cooperativity of the ground-state ensemble, G1^2 / (kappa gamma1).
    pub c1: T,
    /// Cooperativity of the inverted ensemble, G2^2 / (kappa gamma2).
    pub c2: T,
    /// Broadened linewidth gamma1 (1 + C1) of the loss channel.
    pub gamma1_bar: T,
    /// Narrowed linewidth gamma2 (1 - C2) of the gain channel.
    pub gamma2_bar: T,
}

/// Computes both cooperativities and the modified linewidths.
pub fn cooperativities<T: Scalar>(params: &SystemParams<T>) -> DerivedParams<T> {
    let c1 = params.g1 * params.g1 / (params.kappa * params.gamma1);
    let c2 = params.g2 * params.g2 / (params.kappa * params.gamma2);
    DerivedParams {
        c1,
        c2,
        gamma1_bar: params.gamma1 * (T::one() + c1),
        gamma2_bar: params.gamma2 * (T::one() - c2),
    }
}

/// Outcome of the bosonization validity check.
///
/// The collective-spin-to-oscillator replacement requires
/// `g^2 / (omega_m^2 + gamma^2) << alpha^-2 << 1`; both "much less than"
/// comparisons use the caller-supplied threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BosonizationCheck<T> {
    /// Whether both inequalities hold at the threshold.
    pub passed: bool,
    /// Single-atom excitation measure g^2 / (omega_m^2 + gamma^2).
    pub excitation_ratio: T,
    /// Inverse squared field amplitude alpha^-2.
    pub saturation_ratio: T,
    /// Threshold used for both comparisons.
    pub threshold: T,
}

/// Evaluates the bosonization validity chain for one ensemble.
///
/// `threshold` defaults to [`BOSONIZATION_THRESHOLD`] when `None`.
pub fn bosonization_check<T: Scalar>(
    g_atom: T,
    omega_m: T,
    gamma: T,
    alpha: T,
    threshold: Option<T>,
) -> Result<BosonizationCheck<T>> {
    if alpha <= T::zero() {
        return Err(Error::InvalidArgument {
            arg: "alpha",
            reason: "must be > 0".into(),
        });
    }
    let threshold = threshold.unwrap_or_else(|| T::lit(BOSONIZATION_THRESHOLD));
    let excitation_ratio = g_atom * g_atom / (omega_m * omega_m + gamma * gamma);
    let saturation_ratio = T::one() / (alpha * alpha);
    let passed = excitation_ratio <= threshold * saturation_ratio && saturation_ratio <= threshold;
    Ok(BosonizationCheck {
        passed,
        excitation_ratio,
        saturation_ratio,
        threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;

    fn params() -> SystemParams<f64> {
        SystemParams::bad_cavity_reference()
    }

    #[test]
    fn reference_params_are_valid() {
        assert!(params().validate().is_ok());
    }

    #[test]
    fn zero_kappa_rejected_by_name() {
        let p = SystemParams {
            kappa: 0.0,
            ..params()
        };
        match p.validate() {
            Err(Error::InvalidParam { field, .. }) => assert_eq!(field, "kappa"),
            other => panic!("expected kappa error, got {other:?}"),
        }
    }

    #[test]
    fn non_finite_rejected() {
        let p = SystemParams {
            omega_m: f64::NAN,
            ..params()
        };
        assert!(matches!(
            p.validate(),
            Err(Error::InvalidParam {
                field: "omega_m",
                ..
            })
        ));
        let p = SystemParams {
            delta1: f64::INFINITY,
            ..params()
        };
        assert!(matches!(
            p.validate(),
            Err(Error::InvalidParam {
                field: "delta1",
                ..
            })
        ));
    }

    #[test]
    fn negative_rate_rejected() {
        let p = SystemParams {
            gamma_m: -1.0,
            ..params()
        };
        assert!(matches!(
            p.validate(),
            Err(Error::InvalidParam {
                field: "gamma_m",
                ..
            })
        ));
    }

    fn setup() -> PhysicalSetup<f64> {
        PhysicalSetup {
            omega_c: 2.0 * std::f64::consts::PI * 3e14,
            omega_l: 2.0 * std::f64::consts::PI * 3e14,
            length: 1e-3,
            mass: 1e-12,
            g1_atom: 1.0,
            g2_atom: 1.0,
            n1_atoms: 100,
            n2_atoms: 0,
            alpha: 1.0,
        }
    }

    #[test]
    fn empty_ensemble_has_zero_coupling() {
        let derived = setup().derive_couplings(1.0).unwrap();
        assert_eq!(derived.g2, 0.0);
    }

    #[test]
    fn collective_coupling_square_root_scaling() {
        let derived = setup().derive_couplings(1.0).unwrap();
        assert_eq!(derived.g1, 10.0);
    }

    #[test]
    fn single_photon_coupling_dimensional_check() {
        // Independent evaluation of (omega_c / L) sqrt(hbar / (m omega_m))
        // at omega_c = 2 pi 3e14, L = 1 mm, m = 1 pg, omega_m = 2 pi 10 MHz:
        // x_zpf = sqrt(1.054571817e-34 / (1e-12 * 6.2832e7)) = 1.29553e-15 m,
        // omega_c / L = 1.88496e18 (rad/s)/m, product = 2.442e3 rad/s.
        let omega_m = 2.0 * std::f64::consts::PI * 1e7;
        let derived = setup().derive_couplings(omega_m).unwrap();
        assert_relative_eq!(derived.g0, 2.442e3, max_relative = 1e-3);

        let x_zpf = (HBAR / (setup().mass * omega_m)).sqrt();
        assert_relative_eq!(derived.g0, setup().omega_c / setup().length * x_zpf);
    }

    #[test]
    fn non_positive_geometry_rejected() {
        let bad = PhysicalSetup {
            length: 0.0,
            ..setup()
        };
        assert!(matches!(
            bad.derive_couplings(1.0),
            Err(Error::InvalidParam {
                field: "length",
                ..
            })
        ));
        assert!(matches!(
            setup().derive_couplings(-1.0),
            Err(Error::InvalidParam {
                field: "omega_m",
                ..
            })
        ));
    }

    #[test]
    fn effective_detuning_examples() {
        assert_eq!(effective_detuning(2.0, 0.0, 1.0).unwrap(), 2.0);
        assert_eq!(effective_detuning(1.0, 1.0, 1.0).unwrap(), 0.0);
        // resonance condition delta0 = g^2 / omega_m
        let delta0 = 4.0 / 2.0;
        assert_eq!(effective_detuning(delta0, 2.0, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn cooperativity_examples() {
        let p = SystemParams {
            g1: 0.0,
            g2: 0.0,
            ..params()
        };
        let d = cooperativities(&p);
        assert_eq!(d.c1, 0.0);
        assert_eq!(d.c2, 0.0);
        assert_eq!(d.gamma1_bar, p.gamma1);
        assert_eq!(d.gamma2_bar, p.gamma2);

        // kappa = 100 omega_m, gamma1 = omega_m / 100, G1 = omega_m -> C1 = 1
        let d = cooperativities(&params());
        assert_abs_diff_eq!(d.c1, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(d.gamma1_bar, 0.02, epsilon = 1e-15);

        // C2 = 1 boundary at G2 = sqrt(kappa gamma2) = 10 omega_m
        let p = SystemParams {
            g2: 10.0,
            ..params()
        };
        let d = cooperativities(&p);
        assert_abs_diff_eq!(d.c2, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(d.gamma2_bar, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn bosonization_examples() {
        // g = 0 passes the excitation inequality trivially; alpha must still
        // be large enough.
        let check = bosonization_check(0.0, 1.0, 0.1, 100.0, None).unwrap();
        assert!(check.passed);
        assert_eq!(check.excitation_ratio, 0.0);

        // alpha = 1 fails the saturation inequality (alpha^-2 = 1 is not << 1)
        let check = bosonization_check(0.0, 1.0, 0.1, 1.0, None).unwrap();
        assert!(!check.passed);

        // direct evaluation of both ratios
        let check = bosonization_check(1e3, 6.3e7, 6.3e5, 1e3, None).unwrap();
        assert_relative_eq!(check.excitation_ratio, 2.5191e-10, max_relative = 1e-3);
        assert_relative_eq!(check.saturation_ratio, 1e-6);
        assert!(check.passed);

        assert!(bosonization_check(1.0, 1.0, 1.0, 0.0, None).is_err());
    }

    proptest! {
        // C1, C2 invariant under (G -> s G, kappa -> s^2 kappa).
        #[test]
        fn cooperativity_scaling_invariance(s in 1e-3f64..1e3) {
            let p = params();
            let scaled = SystemParams {
                g1: p.g1 * s,
                g2: p.g2 * s,
                kappa: p.kappa * s * s,
                ..p
            };
            let d0 = cooperativities(&p);
            let d1 = cooperativities(&scaled);
            prop_assert!((d0.c1 - d1.c1).abs() <= 1e-12 * d0.c1.max(1.0));
            prop_assert!((d0.c2 - d1.c2).abs() <= 1e-12 * d0.c2.max(1.0));
        }

        // gamma2_bar < gamma2 for C2 in (0, 1); gamma1_bar > gamma1 for C1 > 0.
        #[test]
        fn linewidth_modification_signs(g1 in 1e-3f64..10.0, c2 in 1e-3f64..0.999) {
            let p = params();
            let g2 = (c2 * p.kappa * p.gamma2).sqrt();
            let p = SystemParams { g1, g2, ..p };
            let d = cooperativities(&p);
            prop_assert!(d.gamma1_bar > p.gamma1);
            prop_assert!(d.gamma2_bar < p.gamma2);
            prop_assert!(d.gamma2_bar > 0.0);
        }

        // Doubling the atom number multiplies the collective coupling by
        // sqrt(2) to machine precision.
        #[test]
        fn atom_number_square_root_scaling(n in 1u64..1_000_000) {
            let base = PhysicalSetup { n1_atoms: n, ..setup() };
            let doubled = PhysicalSetup { n1_atoms: 2 * n, ..setup() };
            let g_base = base.derive_couplings(1.0).unwrap().g1;
            let g_doubled = doubled.derive_couplings(1.0).unwrap().g1;
            let expected = g_base * 2f64.sqrt();
            prop_assert!((g_doubled - expected).abs() <= 2.0 * f64::EPSILON * expected);
        }
    }
}
