//! Permittivity and permeability on the imaginary frequency axis.
//!
//! Every model is written directly as a function of `ζ` (with `ω = iζ`), so
//! the values are real and, for the passive models, at least one. The
//! Matsubara `m = 0` term needs the `ζ → 0` behaviour rather than a value, so
//! besides point evaluation each model reports its static [`Response`]: a
//! finite value, a pole of order one (Drude-like) or two (plasma-like) with
//! its residue, or an infinite response (perfect conductor).

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// One damped oscillator term `strength / (resonance² + ζ² + damping·ζ)`.
///
/// `strength` is in (rad/s)², `resonance` and `damping` in rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Oscillator<T> {
    pub strength: T,
    pub resonance: T,
    pub damping: T,
}

impl<T: Scalar> Oscillator<T> {
    pub fn new(strength: T, resonance: T, damping: T) -> Self {
        Self {
            strength,
            resonance,
            damping,
        }
    }

    #[inline]
    fn eval(&self, zeta: T) -> T {
        self.strength / (self.resonance * self.resonance + zeta * zeta + self.damping * zeta)
    }
}

/// Dispersion rule for a homogeneous isotropic medium.
#[derive(Debug, Clone, PartialEq)]
pub enum MaterialModel<T> {
    Vacuum,
    /// Frequency-independent ε and μ.
    Constant { eps: T, mu: T },
    /// `ε(iζ) = 1 + ω_p² / (ζ(ζ + γ))`.
    Drude { omega_p: T, gamma: T },
    /// `ε(iζ) = 1 + ω_p² / ζ²`.
    Plasma { omega_p: T },
    /// `ε(iζ) = 1 + Σ f_k / (ω_k² + ζ² + γ_k ζ)`; `mu_terms`, if present,
    /// gives μ in the same form, otherwise μ = 1.
    LorentzOscillators {
        terms: Vec<Oscillator<T>>,
        mu_terms: Option<Vec<Oscillator<T>>>,
    },
    /// Ideal mirror: ε = ∞ at every frequency, μ = 1.
    PerfectConductor,
}

/// Where on the imaginary axis a response is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Frequency<T> {
    /// The `ζ → 0` limit used by the zeroth Matsubara term.
    Static,
    /// `ζ > 0`, in rad/s.
    Imaginary(T),
}

impl<T: Scalar> Frequency<T> {
    /// `Static` for `ζ = 0`, `Imaginary(ζ)` otherwise.
    pub fn from_zeta(zeta: T) -> Result<Self> {
        if !(zeta >= T::zero()) || !zeta.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "imaginary frequency must be finite and >= 0, got {zeta}"
            )));
        }
        Ok(if zeta == T::zero() {
            Frequency::Static
        } else {
            Frequency::Imaginary(zeta)
        })
    }

    pub fn zeta(&self) -> T {
        match *self {
            Frequency::Static => T::zero(),
            Frequency::Imaginary(z) => z,
        }
    }
}

/// Value of ε or μ at a frequency point, keeping track of how it diverges
/// when that point is `ζ → 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Response<T> {
    Finite(T),
    /// Behaves as `residue / ζ^order` for `ζ → 0`; `order` is 1 or 2.
    Pole { order: u8, residue: T },
    Infinite,
}

impl<T: Scalar> Response<T> {
    /// Power of `1/ζ` with which the response diverges; `None` if infinite
    /// outright.
    pub fn pole_order(&self) -> Option<u8> {
        match *self {
            Response::Finite(_) => Some(0),
            Response::Pole { order, .. } => Some(order),
            Response::Infinite => None,
        }
    }

    /// Leading coefficient: the value itself when finite, the residue for a
    /// pole, and one for an infinite response.
    pub fn coefficient(&self) -> T {
        match *self {
            Response::Finite(v) => v,
            Response::Pole { residue, .. } => residue,
            Response::Infinite => T::one(),
        }
    }

    pub fn finite(&self) -> Option<T> {
        match *self {
            Response::Finite(v) => Some(v),
            _ => None,
        }
    }
}

/// `lim ζ→0 ζ² ε(iζ)` together with the static permittivity when it is finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroFrequencyWeight<T> {
    /// In (rad/s)²; infinite for a perfect conductor.
    pub weight: T,
    /// `ε(0)` if finite, `None` if ε diverges at `ζ = 0`.
    pub eps_static: Option<T>,
}

fn check_nonneg<T: Scalar>(what: &str, x: T) -> Result<()> {
    if x.is_finite() && x >= T::zero() {
        Ok(())
    } else {
        Err(Error::InvalidMaterial(format!("{what} must be finite and >= 0, got {x}")))
    }
}

fn check_pos<T: Scalar>(what: &str, x: T) -> Result<()> {
    if x.is_finite() && x > T::zero() {
        Ok(())
    } else {
        Err(Error::InvalidMaterial(format!("{what} must be finite and > 0, got {x}")))
    }
}

fn check_oscillators<T: Scalar>(terms: &[Oscillator<T>]) -> Result<()> {
    for o in terms {
        check_nonneg("oscillator strength", o.strength)?;
        check_nonneg("oscillator resonance", o.resonance)?;
        check_nonneg("oscillator damping", o.damping)?;
    }
    Ok(())
}

fn oscillator_sum<T: Scalar>(terms: &[Oscillator<T>], zeta: T) -> T {
    terms.iter().fold(T::one(), |acc, o| acc + o.eval(zeta))
}

/// Static limit of `1 + Σ f/(ω² + ζ² + γζ)`: undamped free terms give a
/// double pole, damped free terms a simple pole, bound terms a finite shift.
fn oscillator_static<T: Scalar>(terms: &[Oscillator<T>]) -> Response<T> {
    let mut finite = T::one();
    let mut simple = T::zero();
    let mut double = T::zero();
    for o in terms.iter().filter(|o| o.strength > T::zero()) {
        if o.resonance > T::zero() {
            finite = finite + o.strength / (o.resonance * o.resonance);
        } else if o.damping > T::zero() {
            simple = simple + o.strength / o.damping;
        } else {
            double = double + o.strength;
        }
    }
    if double > T::zero() {
        Response::Pole {
            order: 2,
            residue: double,
        }
    } else if simple > T::zero() {
        Response::Pole {
            order: 1,
            residue: simple,
        }
    } else {
        Response::Finite(finite)
    }
}

impl<T: Scalar> MaterialModel<T> {
    pub fn constant(eps: T, mu: T) -> Self {
        MaterialModel::Constant { eps, mu }
    }

    pub fn drude(omega_p: T, gamma: T) -> Self {
        MaterialModel::Drude { omega_p, gamma }
    }

    pub fn plasma(omega_p: T) -> Self {
        MaterialModel::Plasma { omega_p }
    }

    pub fn lorentz(terms: Vec<Oscillator<T>>, mu_terms: Option<Vec<Oscillator<T>>>) -> Self {
        MaterialModel::LorentzOscillators { terms, mu_terms }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            MaterialModel::Vacuum => "vacuum",
            MaterialModel::Constant { .. } => "constant",
            MaterialModel::Drude { .. } => "drude",
            MaterialModel::Plasma { .. } => "plasma",
            MaterialModel::LorentzOscillators { .. } => "lorentz",
            MaterialModel::PerfectConductor => "perfect-conductor",
        }
    }

    /// Checks parameter ranges.
    pub fn validate(&self) -> Result<()> {
        match self {
            MaterialModel::Vacuum | MaterialModel::PerfectConductor => Ok(()),
            MaterialModel::Constant { eps, mu } => {
                check_pos("eps", *eps)?;
                check_pos("mu", *mu)
            }
            MaterialModel::Drude { omega_p, gamma } => {
                check_pos("omega_p", *omega_p)?;
                check_pos("gamma", *gamma)
            }
            MaterialModel::Plasma { omega_p } => check_pos("omega_p", *omega_p),
            MaterialModel::LorentzOscillators { terms, mu_terms } => {
                check_oscillators(terms)?;
                if let Some(mu) = mu_terms {
                    check_oscillators(mu)?;
                }
                Ok(())
            }
        }
    }

    /// `ε(iζ)`. Fails with [`Error::StaticLimit`] when ε has a pole at `ζ = 0`.
    pub fn eval_eps(&self, zeta: T) -> Result<T> {
        match Frequency::from_zeta(zeta)? {
            Frequency::Static => match self.static_eps() {
                Response::Finite(v) => Ok(v),
                Response::Infinite => Ok(T::infinity()),
                Response::Pole { .. } => Err(Error::StaticLimit { model: self.kind() }),
            },
            Frequency::Imaginary(z) => Ok(self.eps_at(z)),
        }
    }

    /// `μ(iζ)`; models without a magnetic response return one.
    pub fn eval_mu(&self, zeta: T) -> Result<T> {
        match Frequency::from_zeta(zeta)? {
            Frequency::Static => match self.static_mu() {
                Response::Finite(v) => Ok(v),
                Response::Infinite => Ok(T::infinity()),
                Response::Pole { .. } => Err(Error::StaticLimit { model: self.kind() }),
            },
            Frequency::Imaginary(z) => Ok(self.mu_at(z)),
        }
    }

    /// ε at `ζ > 0` (no argument checks).
    pub(crate) fn eps_at(&self, zeta: T) -> T {
        match self {
            MaterialModel::Vacuum => T::one(),
            MaterialModel::Constant { eps, .. } => *eps,
            MaterialModel::Drude { omega_p, gamma } => {
                T::one() + *omega_p * *omega_p / (zeta * (zeta + *gamma))
            }
            MaterialModel::Plasma { omega_p } => {
                let r = *omega_p / zeta;
                T::one() + r * r
            }
            MaterialModel::LorentzOscillators { terms, .. } => oscillator_sum(terms, zeta),
            MaterialModel::PerfectConductor => T::infinity(),
        }
    }

    pub(crate) fn mu_at(&self, zeta: T) -> T {
        match self {
            MaterialModel::Constant { mu, .. } => *mu,
            MaterialModel::LorentzOscillators {
                mu_terms: Some(mu), ..
            } => oscillator_sum(mu, zeta),
            _ => T::one(),
        }
    }

    pub fn static_eps(&self) -> Response<T> {
        match self {
            MaterialModel::Vacuum => Response::Finite(T::one()),
            MaterialModel::Constant { eps, .. } => Response::Finite(*eps),
            MaterialModel::Drude { omega_p, gamma } => Response::Pole {
                order: 1,
                residue: *omega_p * *omega_p / *gamma,
            },
            MaterialModel::Plasma { omega_p } => Response::Pole {
                order: 2,
                residue: *omega_p * *omega_p,
            },
            MaterialModel::LorentzOscillators { terms, .. } => oscillator_static(terms),
            MaterialModel::PerfectConductor => Response::Infinite,
        }
    }

    pub fn static_mu(&self) -> Response<T> {
        match self {
            MaterialModel::Constant { mu, .. } => Response::Finite(*mu),
            MaterialModel::LorentzOscillators {
                mu_terms: Some(mu), ..
            } => oscillator_static(mu),
            _ => Response::Finite(T::one()),
        }
    }

    /// `(ε, μ)` at the given frequency point.
    pub fn response(&self, freq: Frequency<T>) -> (Response<T>, Response<T>) {
        match freq {
            Frequency::Static => (self.static_eps(), self.static_mu()),
            Frequency::Imaginary(z) => {
                let eps = match self {
                    MaterialModel::PerfectConductor => Response::Infinite,
                    _ => Response::Finite(self.eps_at(z)),
                };
                (eps, Response::Finite(self.mu_at(z)))
            }
        }
    }

    /// `lim ζ→0 ζ²·ε(iζ)`: ω_p² for a plasma, zero for Drude and every model
    /// with finite static ε.
    pub fn zero_frequency_weight(&self) -> ZeroFrequencyWeight<T> {
        match self.static_eps() {
            Response::Finite(v) => ZeroFrequencyWeight {
                weight: T::zero(),
                eps_static: Some(v),
            },
            Response::Pole { order: 2, residue } => ZeroFrequencyWeight {
                weight: residue,
                eps_static: None,
            },
            Response::Pole { .. } => ZeroFrequencyWeight {
                weight: T::zero(),
                eps_static: None,
            },
            Response::Infinite => ZeroFrequencyWeight {
                weight: T::infinity(),
                eps_static: None,
            },
        }
    }
}

/// `lim ζ→0 ζ²·ε·μ`, the static contribution to `c²κ² − c²k⊥²`.
///
/// Fails if the product diverges faster than `1/ζ²` (for example a plasma ε
/// combined with a Drude-like μ), which has no finite static decay constant.
pub fn static_index_weight<T: Scalar>(eps: Response<T>, mu: Response<T>) -> Result<T> {
    match (eps.pole_order(), mu.pole_order()) {
        (None, _) | (_, None) => Ok(T::infinity()),
        (Some(oe), Some(om)) => match oe + om {
            0 | 1 => Ok(T::zero()),
            2 => Ok(eps.coefficient() * mu.coefficient()),
            _ => Err(Error::InvalidMaterial(
                "combined static response of eps*mu diverges faster than 1/zeta^2".into(),
            )),
        },
    }
}
