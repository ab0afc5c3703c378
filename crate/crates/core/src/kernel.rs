//! Mode weights `1/d_q` and the force per unit area.
//!
//! At zero temperature
//!
//! ```text
//! P = −ħ/(2π²) ∫₀^∞ dζ ∫₀^∞ dk⊥ k⊥ κ_g Σ_q 1/d_q,
//! 1/d_q = r⁺_q r⁻_q e^{−2κ_g a} / (1 − r⁺_q r⁻_q e^{−2κ_g a}),
//! ```
//!
//! and at temperature `T` the frequency integral becomes
//! `(2π k_B T/ħ) Σ'_m` over the Matsubara frequencies `ζ_m = 2π k_B T m/ħ`,
//! the `m = 0` term taken at half weight, so `P = −(k_B T/π) Σ'_m ∫ dk⊥ …`.
//! Negative pressure is attraction.
//!
//! The transverse integral is done in `u = 2κ_g a` (using `k⊥ dk⊥ = κ dκ`),
//! on `[u₀, u₀ + 60]` where `u₀ = 2a·κ_g(k⊥ = 0)`; the integrand carries
//! `e^{−u}`. The frequency integral is mapped to `t = ζ/(ζ + c/2a) ∈ [0, 1)`.
//!
//! Anything that can produce mode weights at a frequency implements
//! [`ForceIntegrand`]: generic stacks, [`IdealMirrors`], and the closed-form
//! geometries in [`crate::scenarios`].

use std::cell::Cell;

use crate::constants::{BOLTZMANN, HBAR, SPEED_OF_LIGHT};
use crate::error::{Error, Result};
use crate::materials::Frequency;
use crate::optics::{Polarized, StackAtFrequency};
use crate::quadrature::{integrate, Tolerance};
use crate::scalar::{Field, Scalar};
use crate::stack::LayerStack;

/// Per-polarization mode weights Σ contributions at one spectral point.
pub type ModeSum<T> = Polarized<T>;

/// Range of the transverse integral above its lower end, in units of `2κa`.
const U_SPAN: f64 = 60.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants<T> {
    pub hbar: T,
    pub boltzmann: T,
}

impl<T: Scalar> PhysicalConstants<T> {
    pub fn codata() -> Self {
        PhysicalConstants {
            hbar: T::lit(HBAR),
            boltzmann: T::lit(BOLTZMANN),
        }
    }

    /// `ζ_m = 2π k_B T m/ħ`.
    pub fn matsubara_frequency(&self, temperature: T, m: usize) -> T {
        T::TAU() * self.boltzmann * temperature * T::from_count(m) / self.hbar
    }
}

impl<T: Scalar> Default for PhysicalConstants<T> {
    fn default() -> Self {
        Self::codata()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSettings<T> {
    pub rel_tol: T,
    /// Absolute tolerance on the pressure, Pa.
    pub abs_tol: T,
    pub max_subdivisions: usize,
    pub matsubara_rel_cutoff: T,
    pub matsubara_max_terms: usize,
}

impl<T: Scalar> Default for QuadratureSettings<T> {
    /// `rel_tol` 1e-9 is raised to `1000 ε` for scalars too coarse to reach it.
    fn default() -> Self {
        QuadratureSettings {
            rel_tol: T::lit(1e-9).max(T::epsilon() * T::lit(1000.0)),
            abs_tol: T::lit(1e-30),
            max_subdivisions: 200,
            matsubara_rel_cutoff: T::lit(1e-12),
            matsubara_max_terms: 100_000,
        }
    }
}

impl<T: Scalar> QuadratureSettings<T> {
    pub fn validate(&self) -> Result<()> {
        let ok = self.rel_tol > T::zero()
            && self.abs_tol > T::zero()
            && self.matsubara_rel_cutoff > T::zero()
            && self.max_subdivisions > 0
            && self.matsubara_max_terms > 0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "quadrature settings must all be positive: {self:?}"
            )))
        }
    }
}

/// One term of the Matsubara series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatsubaraTerm<T> {
    pub m: usize,
    /// `ζ_m`, rad/s.
    pub zeta: T,
    /// ½ for `m = 0`, 1 otherwise.
    pub weight: T,
    /// Weighted pressure contribution per polarization, Pa.
    pub pressure: Polarized<T>,
    pub abs_error: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForceResult<T> {
    /// Pa; negative is attraction.
    pub pressure: T,
    pub abs_error_estimate: T,
    /// Pressure split by polarization, Pa.
    pub modes: Polarized<T>,
    /// Zero at `T = 0`.
    pub n_matsubara_terms: usize,
    pub n_integrand_evals: usize,
    /// Per-term breakdown of the Matsubara sum (empty at `T = 0`).
    pub matsubara: Vec<MatsubaraTerm<T>>,
    /// `|last term| / |sum|` at truncation.
    pub last_term_ratio: Option<T>,
}

/// Mode weights at a fixed frequency, as a function of `k⊥`.
pub trait FrequencySlice<T: Scalar> {
    /// `κ_g² − k⊥²` in the gap medium (1/m²).
    fn gap_index_weight(&self) -> T;

    /// Per-polarization `Σ 1/d` at `k_perp`; `kappa_gap` is the gap decay
    /// constant belonging to `k_perp`.
    fn mode_weights(&self, k_perp: T, kappa_gap: T) -> Result<ModeSum<T>>;
}

/// Source of mode weights for the force integrals.
pub trait ForceIntegrand<T: Scalar>: Sync {
    type Slice<'a>: FrequencySlice<T>
    where
        Self: 'a;

    fn at_frequency(&self, freq: Frequency<T>) -> Result<Self::Slice<'_>>;

    /// Gap width setting the decay `e^{−2κ_g a}` (the narrowest one when
    /// several gaps contribute).
    fn decay_length(&self) -> T;
}

/// `x/(1 − x)` with `x = r⁺r⁻e^{−2κa}`, over any ordered field.
pub fn inv_d_from_product<F: Field>(x: F) -> Result<F> {
    if x >= F::one() || x <= -F::one() {
        return Err(Error::Unphysical {
            product: f64::NAN,
        });
    }
    Ok(x / (F::one() - x))
}

/// Weight of one mode and its denominator `D = 1 − r⁺r⁻e^{−2κa}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceKernelPoint<T> {
    pub inv_d: T,
    pub denominator: T,
}

pub fn kernel_point<T: Scalar>(
    r_plus: T,
    r_minus: T,
    kappa_gap: T,
    width: T,
) -> Result<ForceKernelPoint<T>> {
    if !(width > T::zero()) {
        return Err(Error::InvalidArgument(format!("gap width must be > 0, got {width}")));
    }
    let x = r_plus * r_minus * (-(kappa_gap + kappa_gap) * width).exp();
    let denominator = T::one() - x;
    let inv_d = inv_d_from_product(x).map_err(|_| Error::Unphysical {
        product: x.abs().to_f64().unwrap_or(f64::NAN),
    })?;
    Ok(ForceKernelPoint { inv_d, denominator })
}

/// `1/d = r⁺r⁻e^{−2κa}/(1 − r⁺r⁻e^{−2κa})`.
pub fn inv_d<T: Scalar>(r_plus: T, r_minus: T, kappa_gap: T, width: T) -> Result<T> {
    kernel_point(r_plus, r_minus, kappa_gap, width).map(|p| p.inv_d)
}

/// Two perfect mirrors across a vacuum gap: `r⁺r⁻ ≡ 1` for both modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdealMirrors<T> {
    pub width: T,
}

pub struct IdealMirrorSlice<T> {
    index_weight: T,
    width: T,
}

impl<T: Scalar> FrequencySlice<T> for IdealMirrorSlice<T> {
    fn gap_index_weight(&self) -> T {
        self.index_weight
    }

    fn mode_weights(&self, _k_perp: T, kappa_gap: T) -> Result<ModeSum<T>> {
        let w = inv_d(T::one(), T::one(), kappa_gap, self.width)?;
        Ok(Polarized::new(w, w))
    }
}

impl<T: Scalar> ForceIntegrand<T> for IdealMirrors<T> {
    type Slice<'a> = IdealMirrorSlice<T>;

    fn at_frequency(&self, freq: Frequency<T>) -> Result<IdealMirrorSlice<T>> {
        let zc = freq.zeta() / T::lit(SPEED_OF_LIGHT);
        Ok(IdealMirrorSlice {
            index_weight: zc * zc,
            width: self.width,
        })
    }

    fn decay_length(&self) -> T {
        self.width
    }
}

pub struct StackSlice<'a, T> {
    at: StackAtFrequency<'a, T>,
    width: T,
}

impl<T: Scalar> FrequencySlice<T> for StackSlice<'_, T> {
    fn gap_index_weight(&self) -> T {
        self.at.gap().index_weight
    }

    fn mode_weights(&self, k_perp: T, kappa_gap: T) -> Result<ModeSum<T>> {
        let pair = self.at.reflection_pair(k_perp)?;
        Ok(Polarized::new(
            inv_d(pair.plus.te, pair.minus.te, kappa_gap, self.width)?,
            inv_d(pair.plus.tm, pair.minus.tm, kappa_gap, self.width)?,
        ))
    }
}

impl<T: Scalar> ForceIntegrand<T> for LayerStack<T> {
    type Slice<'a> = StackSlice<'a, T>;

    fn at_frequency(&self, freq: Frequency<T>) -> Result<StackSlice<'_, T>> {
        Ok(StackSlice {
            at: StackAtFrequency::new(self, freq)?,
            width: self.gap_width(),
        })
    }

    fn decay_length(&self) -> T {
        self.gap_width()
    }
}

/// `k⊥ κ_g (1/d_TE, 1/d_TM)` at one spectral point.
pub fn integrand<T: Scalar, I: ForceIntegrand<T>>(
    source: &I,
    freq: Frequency<T>,
    k_perp: T,
) -> Result<Polarized<T>> {
    let slice = source.at_frequency(freq)?;
    let kappa = (k_perp * k_perp + slice.gap_index_weight()).sqrt();
    let w = slice.mode_weights(k_perp, kappa)?;
    Ok(w.map(|v| k_perp * kappa * v))
}

/// `k⊥ κ_j Σ_q 1/d_qj` for a generic stack at `(ζ, k⊥)`.
pub fn integrand_zero_t<T: Scalar>(stack: &LayerStack<T>, zeta: T, k_perp: T) -> Result<T> {
    Ok(integrand(stack, Frequency::from_zeta(zeta)?, k_perp)?.sum())
}

struct Inner<T> {
    value: Polarized<T>,
    abs_error: T,
    evaluations: usize,
}

/// `∫₀^∞ dk⊥ k⊥ κ_g (1/d_TE, 1/d_TM)` at one frequency.
fn transverse_integral<T: Scalar, S: FrequencySlice<T>>(
    slice: &S,
    length: T,
    tol: &Tolerance<T>,
) -> Result<Inner<T>> {
    let two_a = length + length;
    let kappa_min_sq = slice.gap_index_weight();
    let kappa_min = kappa_min_sq.sqrt();
    let u0 = two_a * kappa_min;
    if !u0.is_finite() {
        return Err(Error::NonFinite("gap decay constant"));
    }
    let jac = T::one() / (two_a * two_a * two_a);
    let r = integrate(
        |u: T| {
            let kappa = u / two_a;
            let k_perp = ((kappa - kappa_min).max(T::zero()) * (kappa + kappa_min)).sqrt();
            let w = slice.mode_weights(k_perp, kappa)?;
            // k⊥ dk⊥ κ = κ² dκ = u²/(8a³) du
            let f = u * u * jac;
            Ok((w.map(|v| f * v), T::zero()))
        },
        u0,
        u0 + T::lit(U_SPAN),
        tol,
    )?;
    Ok(Inner {
        value: r.value,
        abs_error: r.abs_error,
        evaluations: r.evaluations,
    })
}

/// Which variable the outer integral of the zero-temperature force runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IntegrationOrder {
    /// Outer ζ, inner k⊥ (the default and the fast path).
    #[default]
    FrequencyOuter,
    /// Outer k⊥, inner ζ.
    WavenumberOuter,
}

pub fn force_zero_t<T: Scalar, I: ForceIntegrand<T>>(
    source: &I,
    settings: &QuadratureSettings<T>,
) -> Result<ForceResult<T>> {
    force_zero_t_with(
        source,
        settings,
        &PhysicalConstants::codata(),
        IntegrationOrder::FrequencyOuter,
    )
}

pub fn force_zero_t_with<T: Scalar, I: ForceIntegrand<T>>(
    source: &I,
    settings: &QuadratureSettings<T>,
    constants: &PhysicalConstants<T>,
    order: IntegrationOrder,
) -> Result<ForceResult<T>> {
    settings.validate()?;
    let length = source.decay_length();
    if !(length > T::zero() && length.is_finite()) {
        return Err(Error::InvalidArgument(format!("gap width must be > 0, got {length}")));
    }
    let prefactor = -constants.hbar / (T::lit(2.0) * T::PI() * T::PI());
    let abs_raw = settings.abs_tol / prefactor.abs();
    let c = T::lit(SPEED_OF_LIGHT);
    let zeta_scale = c / (length + length);
    let k_scale = T::one() / (length + length);
    let evals = Cell::new(0usize);
    let inner_tol = Tolerance {
        rel: settings.rel_tol * T::lit(0.1),
        abs: abs_raw / zeta_scale,
        max_subdivisions: settings.max_subdivisions,
    };
    let outer_tol = Tolerance {
        rel: settings.rel_tol,
        abs: abs_raw,
        max_subdivisions: settings.max_subdivisions,
    };
    let one = T::one();

    let outer = match order {
        IntegrationOrder::FrequencyOuter => integrate(
            |t: T| {
                let zeta = zeta_scale * t / (one - t);
                let dzeta = zeta_scale / ((one - t) * (one - t));
                let slice = source.at_frequency(Frequency::from_zeta(zeta)?)?;
                let inner = transverse_integral(&slice, length, &inner_tol)?;
                evals.set(evals.get() + inner.evaluations);
                Ok((inner.value.map(|v| v * dzeta), inner.abs_error * dzeta))
            },
            T::zero(),
            one,
            &outer_tol,
        )?,
        IntegrationOrder::WavenumberOuter => integrate(
            |s: T| {
                let k_perp = k_scale * s / (one - s);
                let dk = k_scale / ((one - s) * (one - s));
                let inner = integrate(
                    |t: T| {
                        let zeta = zeta_scale * t / (one - t);
                        let dzeta = zeta_scale / ((one - t) * (one - t));
                        let slice = source.at_frequency(Frequency::from_zeta(zeta)?)?;
                        let kappa = (k_perp * k_perp + slice.gap_index_weight()).sqrt();
                        let w = slice.mode_weights(k_perp, kappa)?;
                        let f = k_perp * kappa * dzeta;
                        Ok((w.map(|v| v * f), T::zero()))
                    },
                    T::zero(),
                    one,
                    &Tolerance {
                        abs: abs_raw / k_scale,
                        ..inner_tol
                    },
                )?;
                evals.set(evals.get() + inner.evaluations);
                Ok((inner.value.map(|v| v * dk), inner.abs_error * dk))
            },
            T::zero(),
            one,
            &outer_tol,
        )?,
    };

    let modes = outer.value.map(|v| prefactor * v);
    Ok(ForceResult {
        pressure: modes.sum(),
        abs_error_estimate: (outer.abs_error + outer.aux) * prefactor.abs(),
        modes,
        n_matsubara_terms: 0,
        n_integrand_evals: evals.get(),
        matsubara: Vec::new(),
        last_term_ratio: None,
    })
}

pub fn force_finite_t<T: Scalar, I: ForceIntegrand<T>>(
    source: &I,
    temperature: T,
    settings: &QuadratureSettings<T>,
) -> Result<ForceResult<T>> {
    force_finite_t_with(source, temperature, settings, &PhysicalConstants::codata(), None)
}

/// Matsubara sum. `max_terms`, if given, stops the series after that many
/// terms without treating it as a failure (for inspecting single terms).
pub fn force_finite_t_with<T: Scalar, I: ForceIntegrand<T>>(
    source: &I,
    temperature: T,
    settings: &QuadratureSettings<T>,
    constants: &PhysicalConstants<T>,
    max_terms: Option<usize>,
) -> Result<ForceResult<T>> {
    settings.validate()?;
    if !(temperature > T::zero() && temperature.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "temperature must be finite and > 0, got {temperature}"
        )));
    }
    let length = source.decay_length();
    if !(length > T::zero() && length.is_finite()) {
        return Err(Error::InvalidArgument(format!("gap width must be > 0, got {length}")));
    }
    let prefactor = -constants.boltzmann * temperature / T::PI();
    let tol = Tolerance {
        rel: settings.rel_tol,
        abs: settings.abs_tol / prefactor.abs(),
        max_subdivisions: settings.max_subdivisions,
    };

    let mut terms: Vec<MatsubaraTerm<T>> = Vec::new();
    let mut sum = Polarized::new(T::zero(), T::zero());
    let mut quad_error = T::zero();
    let mut evals = 0usize;
    let mut last_ratio = None;
    let limit = max_terms.unwrap_or(settings.matsubara_max_terms);
    let mut converged = false;

    for m in 0..limit {
        let zeta = constants.matsubara_frequency(temperature, m);
        let freq = if m == 0 {
            Frequency::Static
        } else {
            Frequency::Imaginary(zeta)
        };
        let weight = if m == 0 { T::lit(0.5) } else { T::one() };
        let slice = source.at_frequency(freq)?;
        let inner = transverse_integral(&slice, length, &tol)?;
        evals += inner.evaluations;
        let f = prefactor * weight;
        let pressure = inner.value.map(|v| f * v);
        let abs_error = inner.abs_error * f.abs();
        sum = Polarized::new(sum.te + pressure.te, sum.tm + pressure.tm);
        quad_error = quad_error + abs_error;
        terms.push(MatsubaraTerm {
            m,
            zeta,
            weight,
            pressure,
            abs_error,
        });
        if m == 0 {
            continue;
        }
        let term = pressure.sum().abs();
        let total = sum.sum().abs();
        last_ratio = Some(if total > T::zero() { term / total } else { T::zero() });
        if term <= settings.matsubara_rel_cutoff * total || (term == T::zero() && total == T::zero())
        {
            converged = true;
            break;
        }
    }

    let last = terms.last().map(|t| t.pressure.sum().abs()).unwrap_or(T::zero());
    if !converged && max_terms.is_none() {
        return Err(Error::MatsubaraTruncation {
            partial: sum.sum().to_f64().unwrap_or(f64::NAN),
            last_term: last.to_f64().unwrap_or(f64::NAN),
            terms: terms.len(),
        });
    }
    Ok(ForceResult {
        pressure: sum.sum(),
        abs_error_estimate: quad_error + last,
        modes: sum,
        n_matsubara_terms: terms.len(),
        n_integrand_evals: evals,
        matsubara: terms,
        last_term_ratio: last_ratio,
    })
}

/// Zero-temperature formula for `temperature == 0`, Matsubara sum otherwise.
pub fn force<T: Scalar, I: ForceIntegrand<T>>(
    source: &I,
    temperature: T,
    settings: &QuadratureSettings<T>,
) -> Result<ForceResult<T>> {
    if temperature == T::zero() {
        force_zero_t(source, settings)
    } else {
        force_finite_t(source, temperature, settings)
    }
}
