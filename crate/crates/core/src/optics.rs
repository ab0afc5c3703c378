//! Decay constants, single-interface Fresnel coefficients and the recursive
//! reflection coefficients of the half-stacks on either side of the gap.
//!
//! Sign convention: every coefficient is "as seen from the gap". The first
//! interface met by a wave leaving the gap towards the left contributes
//! `Δ(gap → j−1)`, not `Δ(j−1 → gap)`. Only the product `r⁺·r⁻` enters the
//! force, and it does not depend on which global sign is chosen.
//!
//! Fresnel coefficients are computed from the layer admittances
//! `y = κ/μ` (TE) and `y = κ/ε` (TM):
//!
//! ```text
//! Δ(i → j) = (y_i − y_j) / (y_i + y_j)
//! ```
//!
//! which equals `(κ_i − γ κ_j)/(κ_i + γ κ_j)` with `γ = μ_i/μ_j` or `ε_i/ε_j`
//! and is exactly antisymmetric in floating point. At the static point and
//! for perfect conductors an admittance may vanish or diverge; each one then
//! carries an order (the power of ζ, or a large sentinel for a perfect
//! conductor) and coefficients between layers of different order take their
//! limiting values ±1.

use crate::constants::SPEED_OF_LIGHT;
use crate::error::{Error, Result};
use crate::materials::{static_index_weight, Frequency, MaterialModel, Response};
use crate::scalar::{Field, Scalar};
use crate::stack::{LayerStack, Side, Thickness};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarization {
    TE,
    TM,
}

impl Polarization {
    pub const ALL: [Polarization; 2] = [Polarization::TE, Polarization::TM];
}

/// A pair of values, one per polarization.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Polarized<T> {
    pub te: T,
    pub tm: T,
}

impl<T: Copy> Polarized<T> {
    pub fn new(te: T, tm: T) -> Self {
        Polarized { te, tm }
    }

    pub fn get(&self, q: Polarization) -> T {
        match q {
            Polarization::TE => self.te,
            Polarization::TM => self.tm,
        }
    }

    pub fn map<U>(self, mut f: impl FnMut(T) -> U) -> Polarized<U> {
        Polarized {
            te: f(self.te),
            tm: f(self.tm),
        }
    }

    pub fn try_map<U>(self, mut f: impl FnMut(T) -> Result<U>) -> Result<Polarized<U>> {
        Ok(Polarized {
            te: f(self.te)?,
            tm: f(self.tm)?,
        })
    }
}

impl<T: Copy + std::ops::Add<Output = T>> Polarized<T> {
    pub fn sum(&self) -> T {
        self.te + self.tm
    }
}

/// Reflection coefficients r⁻ (left half-stack) and r⁺ (right half-stack)
/// of the gap, per polarization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionPair<T> {
    pub minus: Polarized<T>,
    pub plus: Polarized<T>,
}

impl<T: Scalar> ReflectionPair<T> {
    /// `r⁺·r⁻` per polarization.
    pub fn product(&self) -> Polarized<T> {
        Polarized::new(self.plus.te * self.minus.te, self.plus.tm * self.minus.tm)
    }
}

/// `κ = sqrt(k⊥² + εμζ²/c²)`, the decay constant on the imaginary axis.
pub fn kappa<T: Scalar>(eps: T, mu: T, zeta: T, k_perp: T) -> Result<T> {
    for (what, v) in [("eps", eps), ("mu", mu), ("zeta", zeta), ("k_perp", k_perp)] {
        if !(v >= T::zero()) {
            return Err(Error::InvalidArgument(format!("{what} must be >= 0, got {v}")));
        }
    }
    let zc = zeta / T::lit(SPEED_OF_LIGHT);
    Ok((k_perp * k_perp + eps * mu * zc * zc).sqrt())
}

/// `(y_i − y_j)/(y_i + y_j)` over any ordered field.
pub fn interface_coefficient<F: Field>(y_i: F, y_j: F) -> Result<F> {
    let den = y_i + y_j;
    if den == F::zero() {
        return Err(Error::Singular("interface coefficient"));
    }
    Ok((y_i - y_j) / den)
}

/// Fresnel coefficient of a wave in medium `i` reflected at the interface
/// with medium `j`.
pub fn fresnel_single<T: Scalar>(
    q: Polarization,
    eps_i: T,
    mu_i: T,
    eps_j: T,
    mu_j: T,
    kappa_i: T,
    kappa_j: T,
) -> Result<T> {
    let (p_i, p_j) = match q {
        Polarization::TE => (mu_i, mu_j),
        Polarization::TM => (eps_i, eps_j),
    };
    interface_coefficient(kappa_i / p_i, kappa_j / p_j)
}

/// Two-interface combination over any ordered field:
/// `(r_near + r_far·t)/(1 + r_near·r_far·t)` where `t` is the round-trip
/// attenuation `exp(−2κa)` of the layer between the interfaces.
pub fn combine_reflections<F: Field>(r_near: F, r_far: F, attenuation: F) -> Result<F> {
    let far = r_far * attenuation;
    let den = F::one() + r_near * far;
    if den == F::zero() {
        return Err(Error::Singular("two-interface reflection"));
    }
    Ok((r_near + far) / den)
}

/// `exp(−2κa)`, with a zero-width layer transparent even when κ is infinite.
#[inline]
pub fn round_trip_attenuation<T: Scalar>(kappa: T, thickness: T) -> T {
    if thickness == T::zero() {
        T::one()
    } else {
        (-(kappa + kappa) * thickness).exp()
    }
}

const DENOMINATOR_GUARD: f64 = 1e-14;

/// Reflection of interface `near` backed by a layer of the given decay
/// constant and thickness and then by a structure reflecting `r_far`.
pub fn reflect_recursive<T: Scalar>(r_near: T, r_far: T, kappa: T, thickness: T) -> Result<T> {
    if !(thickness >= T::zero()) || !(kappa >= T::zero()) {
        return Err(Error::InvalidArgument(format!(
            "kappa and thickness must be >= 0, got {kappa}, {thickness}"
        )));
    }
    let far = r_far * round_trip_attenuation(kappa, thickness);
    let den = T::one() + r_near * far;
    if den.abs() < T::lit(DENOMINATOR_GUARD) {
        return Err(Error::Singular("two-interface reflection"));
    }
    Ok((r_near + far) / den)
}

/// Admittance of a layer for one polarization, `coeff · s^order` where `s`
/// is a formal small parameter (ζ at the static point). Finite nonzero
/// admittances have order zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Admittance<T> {
    pub order: i32,
    pub coeff: T,
}

/// Order assigned to the vanishing/diverging admittances of a perfect
/// conductor; beyond any pole order a dispersion model can produce.
const PERFECT_ORDER: i32 = 1 << 16;

impl<T: Scalar> Admittance<T> {
    fn finite(v: T) -> Self {
        Admittance { order: 0, coeff: v }
    }
}

/// Fresnel coefficient between two admittances, taking the limit when their
/// orders differ.
pub fn interface_from_admittances<T: Scalar>(
    y_i: Admittance<T>,
    y_j: Admittance<T>,
) -> Result<T> {
    use std::cmp::Ordering::*;
    match y_i.order.cmp(&y_j.order) {
        Equal => interface_coefficient(y_i.coeff, y_j.coeff),
        Less => Ok(T::one()),
        Greater => Ok(-T::one()),
    }
}

/// Everything about one layer at one spectral point that the recursion needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayerOptics<T> {
    pub kappa: T,
    pub te: Admittance<T>,
    pub tm: Admittance<T>,
}

impl<T: Scalar> LayerOptics<T> {
    /// Plain medium at `ζ > 0`.
    pub fn from_values(eps: T, mu: T, kappa: T) -> Self {
        LayerOptics {
            kappa,
            te: Admittance::finite(kappa / mu),
            tm: Admittance::finite(kappa / eps),
        }
    }

    pub fn perfect_conductor() -> Self {
        LayerOptics {
            kappa: T::infinity(),
            te: Admittance {
                order: -PERFECT_ORDER,
                coeff: T::one(),
            },
            tm: Admittance {
                order: PERFECT_ORDER,
                coeff: T::one(),
            },
        }
    }

    pub fn admittance(&self, q: Polarization) -> Admittance<T> {
        match q {
            Polarization::TE => self.te,
            Polarization::TM => self.tm,
        }
    }
}

/// Fresnel coefficients `Δ(from → to)` for both polarizations.
pub fn interface<T: Scalar>(from: &LayerOptics<T>, to: &LayerOptics<T>) -> Result<Polarized<T>> {
    Ok(Polarized::new(
        interface_from_admittances(from.te, to.te)?,
        interface_from_admittances(from.tm, to.tm)?,
    ))
}

/// Response of one medium at one frequency point, independent of `k⊥`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MediumAtFrequency<T> {
    /// `εμζ²/c²` (or its static limit), so that `κ² = k⊥² + index_weight`.
    pub index_weight: T,
    pub eps: Response<T>,
    pub mu: Response<T>,
}

impl<T: Scalar> MediumAtFrequency<T> {
    pub fn new(material: &MaterialModel<T>, freq: Frequency<T>) -> Result<Self> {
        let (eps, mu) = material.response(freq);
        let c = T::lit(SPEED_OF_LIGHT);
        let index_weight = match freq {
            Frequency::Static => static_index_weight(eps, mu)? / (c * c),
            Frequency::Imaginary(z) => match (eps, mu) {
                (Response::Finite(e), Response::Finite(m)) => {
                    let zc = z / c;
                    e * m * zc * zc
                }
                _ => T::infinity(),
            },
        };
        Ok(MediumAtFrequency {
            index_weight,
            eps,
            mu,
        })
    }

    pub fn is_perfect_conductor(&self) -> bool {
        matches!(self.eps, Response::Infinite)
    }

    /// Layer optics at transverse wavenumber `k_perp`.
    #[inline]
    pub fn optics(&self, k_perp: T) -> LayerOptics<T> {
        if self.is_perfect_conductor() {
            return LayerOptics::perfect_conductor();
        }
        let kappa = (k_perp * k_perp + self.index_weight).sqrt();
        let adm = |r: Response<T>| Admittance {
            order: r.pole_order().map_or(PERFECT_ORDER, i32::from),
            coeff: kappa / r.coefficient(),
        };
        LayerOptics {
            kappa,
            te: adm(self.mu),
            tm: adm(self.eps),
        }
    }
}

/// Folds the recursion inward along a half-stack given outward from the gap:
/// `layer(0)` is the gap, `layer(len − 1)` the semi-infinite end. Each call
/// returns the layer optics and its thickness (ignored for the two ends).
fn fold_half_stack<T: Scalar>(
    len: usize,
    mut layer: impl FnMut(usize) -> (LayerOptics<T>, T),
) -> Result<Polarized<T>> {
    debug_assert!(len >= 2);
    let (mut outer, _) = layer(len - 1);
    let (mut inner, mut inner_t) = layer(len - 2);
    let mut r = interface(&inner, &outer)?;
    for k in (0..len - 2).rev() {
        outer = inner;
        let t = inner_t;
        (inner, inner_t) = layer(k);
        let near = interface(&inner, &outer)?;
        let att = round_trip_attenuation(outer.kappa, t);
        r = Polarized::new(
            combine_guarded(near.te, r.te, att)?,
            combine_guarded(near.tm, r.tm, att)?,
        );
    }
    Ok(r)
}

#[inline]
fn combine_guarded<T: Scalar>(near: T, far: T, att: T) -> Result<T> {
    let far = far * att;
    let den = T::one() + near * far;
    if den.abs() < T::lit(DENOMINATOR_GUARD) {
        return Err(Error::Singular("two-interface reflection"));
    }
    Ok((near + far) / den)
}

/// Reflection coefficients, seen from `layers[0]`, of the structure
/// `layers[1..]`. The first and last thicknesses are ignored; interior
/// thicknesses may be zero.
pub fn half_stack_reflection<T: Scalar>(layers: &[(LayerOptics<T>, T)]) -> Result<Polarized<T>> {
    if layers.len() < 2 {
        return Err(Error::InvalidArgument(
            "a half-stack needs the gap and at least one more layer".into(),
        ));
    }
    if layers.iter().any(|(_, t)| !(*t >= T::zero())) {
        return Err(Error::InvalidArgument("layer thickness must be >= 0".into()));
    }
    fold_half_stack(layers.len(), |k| layers[k])
}

/// Per-layer media of a stack at one frequency point. Reusable for every
/// `k⊥` at that frequency.
#[derive(Debug, Clone)]
pub struct StackAtFrequency<'a, T> {
    stack: &'a LayerStack<T>,
    frequency: Frequency<T>,
    media: Vec<MediumAtFrequency<T>>,
}

impl<'a, T: Scalar> StackAtFrequency<'a, T> {
    pub fn new(stack: &'a LayerStack<T>, frequency: Frequency<T>) -> Result<Self> {
        let media = stack
            .layers()
            .iter()
            .map(|l| MediumAtFrequency::new(&l.material, frequency))
            .collect::<Result<Vec<_>>>()?;
        Ok(StackAtFrequency {
            stack,
            frequency,
            media,
        })
    }

    pub fn frequency(&self) -> Frequency<T> {
        self.frequency
    }

    pub fn media(&self) -> &[MediumAtFrequency<T>] {
        &self.media
    }

    pub fn gap(&self) -> &MediumAtFrequency<T> {
        &self.media[self.stack.gap_index()]
    }

    fn thickness(&self, i: usize) -> T {
        match self.stack.layers()[i].thickness {
            Thickness::Finite(t) => t,
            Thickness::SemiInfinite => T::zero(),
        }
    }

    /// r⁻ (left) or r⁺ (right) for both polarizations at `k_perp`.
    pub fn reflection(&self, side: Side, k_perp: T) -> Result<Polarized<T>> {
        let j = self.stack.gap_index();
        let n = self.media.len() - 1;
        let layer = |k: usize| {
            let i = match side {
                Side::Left => j - k,
                Side::Right => j + k,
            };
            (self.media[i].optics(k_perp), self.thickness(i))
        };
        match side {
            Side::Left => fold_half_stack(j + 1, layer),
            Side::Right => fold_half_stack(n - j + 1, layer),
        }
    }

    pub fn reflection_pair(&self, k_perp: T) -> Result<ReflectionPair<T>> {
        Ok(ReflectionPair {
            minus: self.reflection(Side::Left, k_perp)?,
            plus: self.reflection(Side::Right, k_perp)?,
        })
    }
}

/// One `(ζ, k⊥)` evaluation point with the optics of every layer.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralPoint<T> {
    pub frequency: Frequency<T>,
    pub k_perp: T,
    pub layers: Vec<LayerOptics<T>>,
}

impl<T: Scalar> SpectralPoint<T> {
    pub fn new(stack: &LayerStack<T>, frequency: Frequency<T>, k_perp: T) -> Result<Self> {
        if !(k_perp >= T::zero()) {
            return Err(Error::InvalidArgument(format!("k_perp must be >= 0, got {k_perp}")));
        }
        let layers = stack
            .layers()
            .iter()
            .map(|l| Ok(MediumAtFrequency::new(&l.material, frequency)?.optics(k_perp)))
            .collect::<Result<Vec<_>>>()?;
        Ok(SpectralPoint {
            frequency,
            k_perp,
            layers,
        })
    }

    pub fn kappa(&self, layer: usize) -> T {
        self.layers[layer].kappa
    }
}

/// Generalized reflection coefficient of one half-stack, as seen from the gap.
pub fn stack_reflection<T: Scalar>(
    stack: &LayerStack<T>,
    side: Side,
    q: Polarization,
    point: &SpectralPoint<T>,
) -> Result<T> {
    if point.layers.len() != stack.layers().len() {
        return Err(Error::InvalidArgument(
            "spectral point was computed for a different stack".into(),
        ));
    }
    let j = stack.gap_index();
    let n = stack.layers().len() - 1;
    let thickness = |i: usize| stack.layers()[i].thickness.finite().unwrap_or(T::zero());
    let layer = |k: usize| {
        let i = match side {
            Side::Left => j - k,
            Side::Right => j + k,
        };
        (point.layers[i], thickness(i))
    };
    let r = match side {
        Side::Left => fold_half_stack(j + 1, layer)?,
        Side::Right => fold_half_stack(n - j + 1, layer)?,
    };
    Ok(r.get(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stack::Layer;
    use approx::assert_relative_eq;
    use num_rational::Ratio;

    const C: f64 = SPEED_OF_LIGHT;

    #[test]
    fn kappa_examples() {
        assert_eq!(kappa(1.0, 1.0, 0.0, 5e6).unwrap(), 5e6);
        let k = kappa(4.0, 1.0, 3e14, 0.0).unwrap();
        assert_relative_eq!(k, 2.0 * 3e14 / C, max_relative = 1e-15);
        assert_relative_eq!(
            kappa(1.0, 1.0, C * 1e6, 1e6).unwrap(),
            2f64.sqrt() * 1e6,
            max_relative = 1e-15
        );
        assert!(kappa(1.0, 1.0, -1.0, 1.0).is_err());
        assert!(kappa(-1.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn fresnel_identical_media_vanish() {
        for q in Polarization::ALL {
            assert_eq!(fresnel_single(q, 2.5, 1.7, 2.5, 1.7, 3e6, 3e6).unwrap(), 0.0);
        }
    }

    #[test]
    fn fresnel_static_ratio() {
        let k = 4e6;
        assert_eq!(fresnel_single(Polarization::TE, 1.0, 1.0, 2.0, 1.0, k, k).unwrap(), 0.0);
        assert_relative_eq!(
            fresnel_single(Polarization::TM, 1.0, 1.0, 2.0, 1.0, k, k).unwrap(),
            1.0 / 3.0,
            max_relative = 1e-15
        );
    }

    #[test]
    fn fresnel_conductor_limit() {
        let (zeta, k) = (2e15, 1e7);
        let mut last = (f64::INFINITY, f64::INFINITY);
        for p in [4, 6, 8] {
            let eps_j = 10f64.powi(p);
            let ki = kappa(1.0, 1.0, zeta, k).unwrap();
            let kj = kappa(eps_j, 1.0, zeta, k).unwrap();
            let tm = fresnel_single(Polarization::TM, 1.0, 1.0, eps_j, 1.0, ki, kj).unwrap();
            let te = fresnel_single(Polarization::TE, 1.0, 1.0, eps_j, 1.0, ki, kj).unwrap();
            let dist = ((1.0 - tm).abs(), (1.0 + te).abs());
            assert!(dist.0 < last.0 && dist.1 < last.1);
            last = dist;
        }
        assert!(last.0 < 1e-3 && last.1 < 1e-3);
    }

    #[test]
    fn fresnel_antisymmetric_exactly() {
        let (ki, kj) = (1.234e6, 7.77e6);
        for q in Polarization::ALL {
            let a = fresnel_single(q, 2.3, 1.1, 7.9, 2.6, ki, kj).unwrap();
            let b = fresnel_single(q, 7.9, 2.6, 2.3, 1.1, kj, ki).unwrap();
            assert_eq!(a, -b);
        }
    }

    #[test]
    fn recursion_without_far_interface() {
        assert_eq!(reflect_recursive(0.37, 0.0, 1e6, 1e-7).unwrap(), 0.37);
        assert_eq!(reflect_recursive(-0.2, 0.9, 1e9, 1.0).unwrap(), -0.2);
    }

    #[test]
    fn recursion_thick_layer_first_order() {
        // kappa * a = 20
        let r = reflect_recursive(0.5, 0.9, 2e7, 1e-6).unwrap();
        let oracle = 0.5 + 0.9 * (-40f64).exp() * (1.0 - 0.25);
        assert!((r - oracle).abs() < 1e-15);
        assert!((r - 0.5).abs() < 1e-15);
    }

    #[test]
    fn recursion_rejects_negative_thickness() {
        assert!(reflect_recursive(0.1, 0.1, 1.0, -1.0).is_err());
    }

    #[test]
    fn rational_layer_collapse_is_exact() {
        // Δ_ij ⊕ Δ_jk at zero thickness collapses to Δ_ik exactly.
        let r = |n: i64, d: i64| Ratio::new(n, d);
        for (yi, yj, yk) in [
            (r(3, 2), r(7, 5), r(11, 3)),
            (r(1, 9), r(13, 4), r(2, 7)),
            (r(5, 1), r(1, 5), r(5, 1)),
        ] {
            let ij = interface_coefficient(yi, yj).unwrap();
            let jk = interface_coefficient(yj, yk).unwrap();
            let ik = interface_coefficient(yi, yk).unwrap();
            assert_eq!(combine_reflections(ij, jk, r(1, 1)).unwrap(), ik);
        }
    }

    #[test]
    fn admittance_limits() {
        let finite = Admittance::finite(2.0);
        let drude = Admittance {
            order: 1,
            coeff: 3.0,
        };
        assert_eq!(interface_from_admittances(finite, drude).unwrap(), 1.0);
        assert_eq!(interface_from_admittances(drude, finite).unwrap(), -1.0);
        let pc = LayerOptics::<f64>::perfect_conductor();
        let vac = LayerOptics::from_values(1.0, 1.0, 5e6);
        let d = interface(&vac, &pc).unwrap();
        assert_eq!((d.te, d.tm), (-1.0, 1.0));
        let d = interface(&pc, &pc).unwrap();
        assert_eq!((d.te, d.tm), (0.0, 0.0));
    }

    fn point_stack(materials: Vec<MaterialModel<f64>>, widths: &[f64], gap: usize) -> LayerStack<f64> {
        let n = materials.len() - 1;
        let layers = materials
            .into_iter()
            .enumerate()
            .map(|(i, m)| {
                if i == 0 || i == n {
                    Layer::semi_infinite(format!("m{i}"), m)
                } else {
                    Layer::finite(format!("m{i}"), m, widths[i - 1])
                }
            })
            .collect();
        LayerStack::new(layers, gap).unwrap()
    }

    #[test]
    fn trizone_reflections_are_single_interfaces() {
        let (e1, e2) = (3.0, 5.5);
        let s = point_stack(
            vec![
                MaterialModel::constant(e1, 1.0),
                MaterialModel::Vacuum,
                MaterialModel::constant(e2, 1.0),
            ],
            &[1e-7],
            1,
        );
        let zeta = 4e14;
        let k = 2.5e6;
        let p = SpectralPoint::new(&s, Frequency::Imaginary(zeta), k).unwrap();
        let (k1, kg, k2) = (p.kappa(0), p.kappa(1), p.kappa(2));
        for q in Polarization::ALL {
            let left = stack_reflection(&s, Side::Left, q, &p).unwrap();
            let right = stack_reflection(&s, Side::Right, q, &p).unwrap();
            let dg1 = fresnel_single(q, 1.0, 1.0, e1, 1.0, kg, k1).unwrap();
            let dg2 = fresnel_single(q, 1.0, 1.0, e2, 1.0, kg, k2).unwrap();
            assert_eq!(left, dg1);
            assert_eq!(right, dg2);
        }
    }

    #[test]
    fn transparent_side_reflects_nothing() {
        let s = point_stack(
            vec![
                MaterialModel::constant(4.0, 1.0),
                MaterialModel::Vacuum,
                MaterialModel::Vacuum,
            ],
            &[1e-7],
            1,
        );
        let p = SpectralPoint::new(&s, Frequency::Imaginary(1e15), 1e6).unwrap();
        for q in Polarization::ALL {
            assert_eq!(stack_reflection(&s, Side::Right, q, &p).unwrap(), 0.0);
        }
    }

    #[test]
    fn four_layer_right_side_matches_closed_form() {
        let m1 = MaterialModel::constant(3.0, 1.2);
        let m2 = MaterialModel::constant(6.0, 1.9);
        let me = MaterialModel::constant(1.5, 1.0);
        let b = 2e-7;
        let s = point_stack(vec![m1, MaterialModel::Vacuum, m2, me], &[1e-7, b], 1);
        let zeta = 3e14;
        let k = 4e6;
        let p = SpectralPoint::new(&s, Frequency::Imaginary(zeta), k).unwrap();
        let (kg, k2, ke) = (p.kappa(1), p.kappa(2), p.kappa(3));
        let e2 = (-2.0 * k2 * b).exp();
        for q in Polarization::ALL {
            let d2g = fresnel_single(q, 6.0, 1.9, 1.0, 1.0, k2, kg).unwrap();
            let d2e = fresnel_single(q, 6.0, 1.9, 1.5, 1.0, k2, ke).unwrap();
            let oracle = (-d2g + d2e * e2) / (1.0 - d2g * d2e * e2);
            let r = stack_reflection(&s, Side::Right, q, &p).unwrap();
            assert_relative_eq!(r, oracle, max_relative = 1e-14);
        }
    }

    #[test]
    fn static_drude_wall_has_no_te_reflection() {
        let gold = MaterialModel::drude(1.37e16, 5.32e13);
        let s = point_stack(vec![gold.clone(), MaterialModel::Vacuum, gold], &[1e-6], 1);
        let at = StackAtFrequency::new(&s, Frequency::Static).unwrap();
        let pair = at.reflection_pair(3e6).unwrap();
        assert_eq!(pair.minus.te, 0.0);
        assert_eq!(pair.plus.te, 0.0);
        assert_eq!(pair.minus.tm, 1.0);
        assert_eq!(pair.plus.tm, 1.0);

        let plasma = MaterialModel::plasma(1.37e16);
        let s = point_stack(vec![plasma.clone(), MaterialModel::Vacuum, plasma], &[1e-6], 1);
        let at = StackAtFrequency::new(&s, Frequency::Static).unwrap();
        let pair = at.reflection_pair(3e6).unwrap();
        assert!(pair.minus.te < 0.0 && pair.minus.te > -1.0);
        assert_eq!(pair.minus.tm, 1.0);
    }

    #[test]
    fn drude_drude_static_tm_uses_residue_ratio() {
        let a = MaterialModel::drude(1e16, 1e13); // residue 1e19
        let b = MaterialModel::drude(2e16, 1e14); // residue 4e18
        let k = 2e6;
        let oa = MediumAtFrequency::new(&a, Frequency::Static).unwrap().optics(k);
        let ob = MediumAtFrequency::new(&b, Frequency::Static).unwrap().optics(k);
        let d = interface(&oa, &ob).unwrap();
        let (ya, yb) = (k / 1e19, k / 4e18);
        assert_relative_eq!(d.tm, (ya - yb) / (ya + yb), max_relative = 1e-15);
        assert_eq!(d.te, 0.0);
        let r = half_stack_reflection(&[(oa, 0.0), (ob, 0.0)]).unwrap();
        assert_eq!(r, d);
    }

    #[test]
    fn perfect_conductor_sides_are_ideal_mirrors() {
        let s = point_stack(
            vec![
                MaterialModel::PerfectConductor,
                MaterialModel::Vacuum,
                MaterialModel::PerfectConductor,
            ],
            &[1e-6],
            1,
        );
        for f in [Frequency::Static, Frequency::Imaginary(1e15)] {
            let pair = StackAtFrequency::new(&s, f).unwrap().reflection_pair(1e6).unwrap();
            let prod = pair.product();
            assert_eq!((prod.te, prod.tm), (1.0, 1.0));
        }
    }
}
