//! Closed-form mode weights for four standard geometries.
//!
//! These are written out directly in terms of single-interface coefficients
//! `Δ_{q,ij} = (κ_i − γ_{q,ij} κ_j)/(κ_i + γ_{q,ij} κ_j)`, with
//! `γ_TE = μ_i/μ_j` and `γ_TM = ε_i/ε_j`, and never go through the stack
//! recursion in [`crate::optics`]. Each geometry also knows its equivalent
//! [`LayerStack`], so both routes can be compared.
//!
//! * [`HalfSpaces`]: `[1 | g | 2]`.
//! * [`PlateWall`]: `[1 | g (a) | 2 (b) | e]`, a wall facing a plate.
//! * [`SlabInCavity`]: `[1 | g (a⁺) | 2 (b) | g (a⁻) | 1]`, net force on
//!   the slab, either from the two gap widths or from the offset `δ` of the
//!   slab centre (`a± = h/2 ± δ`, `h = a⁺ + a⁻`).
//! * [`TwoPlates`]: `[e | 1 (b₁) | g (a) | 2 (b₂) | e]`.
//!
//! The slab force is `+ħ/(2π²) ∫∫ k⊥ κ_g Σ_q (1/d⁻_q − 1/d⁺_q)`: positive
//! when the right gap (−) pulls harder than the left gap (+).

use crate::constants::SPEED_OF_LIGHT;
use crate::error::{Error, Result};
use crate::kernel::{self, ForceIntegrand, ForceResult, FrequencySlice, ModeSum, QuadratureSettings};
use crate::materials::{static_index_weight, Frequency, MaterialModel, Response};
use crate::optics::{Polarization, Polarized};
use crate::scalar::Scalar;
use crate::stack::{Layer, LayerStack};

/// A medium at a fixed frequency; κ is filled in per `k⊥`.
#[derive(Debug, Clone, Copy)]
struct Medium<T> {
    index_weight: T,
    eps: Response<T>,
    mu: Response<T>,
}

#[derive(Debug, Clone, Copy)]
struct MediumPoint<T> {
    kappa: T,
    eps: Response<T>,
    mu: Response<T>,
}

impl<T: Scalar> Medium<T> {
    fn new(model: &MaterialModel<T>, freq: Frequency<T>) -> Result<Self> {
        let (eps, mu) = model.response(freq);
        let c = T::lit(SPEED_OF_LIGHT);
        let index_weight = match (freq, eps, mu) {
            (_, Response::Infinite, _) => T::infinity(),
            (Frequency::Static, _, _) => static_index_weight(eps, mu)? / (c * c),
            (Frequency::Imaginary(z), e, m) => {
                e.coefficient() * m.coefficient() * (z / c) * (z / c)
            }
        };
        Ok(Medium {
            index_weight,
            eps,
            mu,
        })
    }

    /// κ at the probe's `k⊥`; media optically indistinguishable from the gap
    /// share its κ bit for bit.
    fn at(&self, probe: &Probe<T>) -> MediumPoint<T> {
        let kappa = if self.index_weight == probe.gap_weight {
            probe.kappa_gap
        } else {
            (probe.k_perp * probe.k_perp + self.index_weight).sqrt()
        };
        MediumPoint {
            kappa,
            eps: self.eps,
            mu: self.mu,
        }
    }
}

struct Probe<T> {
    k_perp: T,
    kappa_gap: T,
    gap_weight: T,
}

impl<T: Scalar> Probe<T> {
    fn new(k_perp: T, kappa_gap: T, gap: &Medium<T>) -> Self {
        Probe {
            k_perp,
            kappa_gap,
            gap_weight: gap.index_weight,
        }
    }
}

enum Gamma<T> {
    Zero,
    Finite(T),
    Infinite,
}

/// Limit of `p_i/p_j` for two responses at the same frequency point.
fn response_ratio<T: Scalar>(p_i: Response<T>, p_j: Response<T>) -> Gamma<T> {
    match (p_i.pole_order(), p_j.pole_order()) {
        (None, None) => Gamma::Finite(T::one()),
        (None, Some(_)) => Gamma::Infinite,
        (Some(_), None) => Gamma::Zero,
        (Some(oi), Some(oj)) if oi > oj => Gamma::Infinite,
        (Some(oi), Some(oj)) if oi < oj => Gamma::Zero,
        _ => Gamma::Finite(p_i.coefficient() / p_j.coefficient()),
    }
}

/// `Δ_{q,ij}`.
fn delta<T: Scalar>(q: Polarization, i: &MediumPoint<T>, j: &MediumPoint<T>) -> T {
    let perfect = |m: &MediumPoint<T>| matches!(m.eps, Response::Infinite);
    match (perfect(i), perfect(j)) {
        (true, true) => return T::zero(),
        // ε_j → ∞ with κ_j ~ √ε_j: γ_TM κ_j → 0, γ_TE κ_j → ∞
        (false, true) => {
            return match q {
                Polarization::TE => -T::one(),
                Polarization::TM => T::one(),
            }
        }
        (true, false) => {
            return match q {
                Polarization::TE => T::one(),
                Polarization::TM => -T::one(),
            }
        }
        (false, false) => {}
    }
    let gamma = match q {
        Polarization::TE => response_ratio(i.mu, j.mu),
        Polarization::TM => response_ratio(i.eps, j.eps),
    };
    match gamma {
        Gamma::Zero => T::one(),
        Gamma::Infinite => -T::one(),
        Gamma::Finite(g) => (i.kappa - g * j.kappa) / (i.kappa + g * j.kappa),
    }
}

fn both<T: Scalar>(i: &MediumPoint<T>, j: &MediumPoint<T>) -> Polarized<T> {
    Polarized::new(delta(Polarization::TE, i, j), delta(Polarization::TM, i, j))
}

#[inline]
fn decay<T: Scalar>(kappa: T, width: T) -> T {
    (-(kappa + kappa) * width).exp()
}

fn check_width<T: Scalar>(what: &str, w: T) -> Result<()> {
    if w.is_finite() && w > T::zero() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{what} must be finite and > 0, got {w}")))
    }
}

fn check_gap_medium<T: Scalar>(gap: &MaterialModel<T>) -> Result<()> {
    gap.validate()?;
    if matches!(gap, MaterialModel::PerfectConductor) {
        return Err(Error::InvalidMaterial("gap medium cannot be a perfect conductor".into()));
    }
    Ok(())
}

fn finite_weight<T: Scalar>(w: T) -> Result<T> {
    if w.is_finite() {
        Ok(w)
    } else {
        Err(Error::NonFinite("closed-form mode weight"))
    }
}

/// Two half-spaces 1 and 2 across a gap g of width `width`.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfSpaces<T> {
    pub left: MaterialModel<T>,
    pub gap: MaterialModel<T>,
    pub right: MaterialModel<T>,
    pub width: T,
}

pub struct HalfSpacesSlice<T> {
    left: Medium<T>,
    gap: Medium<T>,
    right: Medium<T>,
    width: T,
}

impl<T: Scalar> HalfSpaces<T> {
    pub fn new(
        left: MaterialModel<T>,
        gap: MaterialModel<T>,
        right: MaterialModel<T>,
        width: T,
    ) -> Result<Self> {
        check_width("gap width", width)?;
        check_gap_medium(&gap)?;
        left.validate()?;
        right.validate()?;
        Ok(HalfSpaces {
            left,
            gap,
            right,
            width,
        })
    }

    pub fn to_stack(&self) -> Result<LayerStack<T>> {
        LayerStack::trizone(self.left.clone(), self.gap.clone(), self.right.clone(), self.width)
    }

    /// Reads `[1 | g | 2]` off a three-layer stack.
    pub fn from_stack(stack: &LayerStack<T>) -> Result<Self> {
        let l = stack.layers();
        if l.len() != 3 {
            return Err(Error::InvalidStack(format!(
                "half-spaces geometry needs 3 layers, got {}",
                l.len()
            )));
        }
        Self::new(
            l[0].material.clone(),
            l[1].material.clone(),
            l[2].material.clone(),
            stack.gap_width(),
        )
    }
}

impl<T: Scalar> FrequencySlice<T> for HalfSpacesSlice<T> {
    fn gap_index_weight(&self) -> T {
        self.gap.index_weight
    }

    fn mode_weights(&self, k_perp: T, kappa_gap: T) -> Result<ModeSum<T>> {
        let probe = Probe::new(k_perp, kappa_gap, &self.gap);
        let g = self.gap.at(&probe);
        let d31 = both(&g, &self.left.at(&probe));
        let d32 = both(&g, &self.right.at(&probe));
        let e = decay(kappa_gap, self.width);
        let w = |a: T, b: T| {
            let x = a * b * e;
            finite_weight(x / (T::one() - x))
        };
        Ok(Polarized::new(w(d32.te, d31.te)?, w(d32.tm, d31.tm)?))
    }
}

impl<T: Scalar> ForceIntegrand<T> for HalfSpaces<T> {
    type Slice<'a> = HalfSpacesSlice<T>;

    fn at_frequency(&self, freq: Frequency<T>) -> Result<HalfSpacesSlice<T>> {
        Ok(HalfSpacesSlice {
            left: Medium::new(&self.left, freq)?,
            gap: Medium::new(&self.gap, freq)?,
            right: Medium::new(&self.right, freq)?,
            width: self.width,
        })
    }

    fn decay_length(&self) -> T {
        self.width
    }
}

/// Force between two half-spaces; `temperature = 0` selects the
/// zero-temperature integral.
pub fn lifshitz_halfspaces<T: Scalar>(
    geometry: &HalfSpaces<T>,
    temperature: T,
    settings: &QuadratureSettings<T>,
) -> Result<ForceResult<T>> {
    kernel::force(geometry, temperature, settings)
}

/// Semi-infinite wall 1, gap g (width `width`), plate 2 (thickness
/// `plate_thickness`), exterior e.
#[derive(Debug, Clone, PartialEq)]
pub struct PlateWall<T> {
    pub wall: MaterialModel<T>,
    pub gap: MaterialModel<T>,
    pub plate: MaterialModel<T>,
    pub exterior: MaterialModel<T>,
    pub width: T,
    pub plate_thickness: T,
}

pub struct PlateWallSlice<T> {
    wall: Medium<T>,
    gap: Medium<T>,
    plate: Medium<T>,
    exterior: Medium<T>,
    width: T,
    plate_thickness: T,
}

impl<T: Scalar> PlateWall<T> {
    pub fn new(
        wall: MaterialModel<T>,
        gap: MaterialModel<T>,
        plate: MaterialModel<T>,
        exterior: MaterialModel<T>,
        width: T,
        plate_thickness: T,
    ) -> Result<Self> {
        check_width("gap width", width)?;
        check_width("plate thickness", plate_thickness)?;
        check_gap_medium(&gap)?;
        for m in [&wall, &plate, &exterior] {
            m.validate()?;
        }
        Ok(PlateWall {
            wall,
            gap,
            plate,
            exterior,
            width,
            plate_thickness,
        })
    }

    pub fn to_stack(&self) -> Result<LayerStack<T>> {
        LayerStack::new(
            vec![
                Layer::semi_infinite("wall", self.wall.clone()),
                Layer::finite("gap", self.gap.clone(), self.width),
                Layer::finite("plate", self.plate.clone(), self.plate_thickness),
                Layer::semi_infinite("exterior", self.exterior.clone()),
            ],
            1,
        )
    }

    /// Reads `[1 | g | 2 | e]` (gap at index 1) off a four-layer stack.
    pub fn from_stack(stack: &LayerStack<T>) -> Result<Self> {
        let l = stack.layers();
        if l.len() != 4 || stack.gap_index() != 1 {
            return Err(Error::InvalidStack(
                "plate-wall geometry needs 4 layers with the gap at index 1".into(),
            ));
        }
        Self::new(
            l[0].material.clone(),
            l[1].material.clone(),
            l[2].material.clone(),
            l[3].material.clone(),
            stack.gap_width(),
            l[2].thickness.finite().unwrap_or(T::nan()),
        )
    }
}

impl<T: Scalar> FrequencySlice<T> for PlateWallSlice<T> {
    fn gap_index_weight(&self) -> T {
        self.gap.index_weight
    }

    fn mode_weights(&self, k_perp: T, kappa_gap: T) -> Result<ModeSum<T>> {
        let probe = Probe::new(k_perp, kappa_gap, &self.gap);
        let g = self.gap.at(&probe);
        let p = self.plate.at(&probe);
        let d1g = both(&self.wall.at(&probe), &g);
        let d2g = both(&p, &g);
        let d2e = both(&p, &self.exterior.at(&probe));
        let e2 = decay(p.kappa, self.plate_thickness);
        let eg = decay(kappa_gap, self.width);
        let w = |d1g: T, d2g: T, d2e: T| {
            let num = (d1g * d2g - d1g * d2e * e2) * eg;
            let den = T::one() - d2g * d2e * e2;
            finite_weight(num / (den - num))
        };
        Ok(Polarized::new(
            w(d1g.te, d2g.te, d2e.te)?,
            w(d1g.tm, d2g.tm, d2e.tm)?,
        ))
    }
}

impl<T: Scalar> ForceIntegrand<T> for PlateWall<T> {
    type Slice<'a> = PlateWallSlice<T>;

    fn at_frequency(&self, freq: Frequency<T>) -> Result<PlateWallSlice<T>> {
        Ok(PlateWallSlice {
            wall: Medium::new(&self.wall, freq)?,
            gap: Medium::new(&self.gap, freq)?,
            plate: Medium::new(&self.plate, freq)?,
            exterior: Medium::new(&self.exterior, freq)?,
            width: self.width,
            plate_thickness: self.plate_thickness,
        })
    }

    fn decay_length(&self) -> T {
        self.width
    }
}

pub fn plate_wall<T: Scalar>(
    geometry: &PlateWall<T>,
    temperature: T,
    settings: &QuadratureSettings<T>,
) -> Result<ForceResult<T>> {
    kernel::force(geometry, temperature, settings)
}

/// Which of the two cavity gaps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CavityGap {
    /// Left gap, width `a⁺`.
    Plus,
    /// Right gap, width `a⁻`.
    Minus,
}

/// Slab 2 of thickness `b` inside a cavity with walls 1, both gaps of
/// medium g. Inner cavity width `c = b + a⁺ + a⁻`.
#[derive(Debug, Clone, PartialEq)]
pub struct SlabInCavity<T> {
    pub wall: MaterialModel<T>,
    pub slab: MaterialModel<T>,
    pub gap: MaterialModel<T>,
    pub slab_thickness: T,
    pub a_plus: T,
    pub a_minus: T,
    /// `h = c − b = a⁺ + a⁻`.
    pub h: T,
    /// Offset of the slab centre from the cavity midline; `a± = h/2 ± δ`.
    pub delta: T,
}

impl<T: Scalar> SlabInCavity<T> {
    fn check(wall: &MaterialModel<T>, slab: &MaterialModel<T>, gap: &MaterialModel<T>, b: T) -> Result<()> {
        check_width("slab thickness", b)?;
        check_gap_medium(gap)?;
        wall.validate()?;
        slab.validate()
    }

    /// From the two gap widths.
    pub fn from_gaps(
        wall: MaterialModel<T>,
        slab: MaterialModel<T>,
        gap: MaterialModel<T>,
        slab_thickness: T,
        a_plus: T,
        a_minus: T,
    ) -> Result<Self> {
        Self::check(&wall, &slab, &gap, slab_thickness)?;
        check_width("a+", a_plus)?;
        check_width("a-", a_minus)?;
        let half = T::lit(0.5);
        Ok(SlabInCavity {
            wall,
            slab,
            gap,
            slab_thickness,
            a_plus,
            a_minus,
            h: a_plus + a_minus,
            delta: half * (a_plus - a_minus),
        })
    }

    /// From the free width `h = c − b` and the offset `δ`, `|δ| < h/2`.
    pub fn from_offset(
        wall: MaterialModel<T>,
        slab: MaterialModel<T>,
        gap: MaterialModel<T>,
        slab_thickness: T,
        h: T,
        delta: T,
    ) -> Result<Self> {
        Self::check(&wall, &slab, &gap, slab_thickness)?;
        check_width("h", h)?;
        let half_h = T::lit(0.5) * h;
        if !(delta.abs() < half_h) {
            return Err(Error::InvalidArgument(format!(
                "slab offset |{delta}| must be smaller than h/2 = {half_h}"
            )));
        }
        Ok(SlabInCavity {
            wall,
            slab,
            gap,
            slab_thickness,
            a_plus: half_h + delta,
            a_minus: half_h - delta,
            h,
            delta,
        })
    }

    /// Inner cavity width `c`.
    pub fn cavity_width(&self) -> T {
        self.h + self.slab_thickness
    }

    /// The five-layer stack with the force taken across the given gap.
    pub fn to_stack(&self, across: CavityGap) -> Result<LayerStack<T>> {
        LayerStack::new(
            vec![
                Layer::semi_infinite("wall", self.wall.clone()),
                Layer::finite("gap+", self.gap.clone(), self.a_plus),
                Layer::finite("slab", self.slab.clone(), self.slab_thickness),
                Layer::finite("gap-", self.gap.clone(), self.a_minus),
                Layer::semi_infinite("wall", self.wall.clone()),
            ],
            match across {
                CavityGap::Plus => 1,
                CavityGap::Minus => 3,
            },
        )
    }

    /// Reads `[1 | g | 2 | g | 1]` off a five-layer stack.
    pub fn from_stack(stack: &LayerStack<T>) -> Result<Self> {
        let l = stack.layers();
        let ok = l.len() == 5
            && l[0].material == l[4].material
            && l[1].material == l[3].material
            && (stack.gap_index() == 1 || stack.gap_index() == 3);
        if !ok {
            return Err(Error::InvalidStack(
                "slab-in-cavity geometry needs [wall | gap | slab | gap | wall] with \
                 matching walls and gap media, and the gap at index 1 or 3"
                    .into(),
            ));
        }
        let t = |i: usize| l[i].thickness.finite().unwrap_or(T::nan());
        Self::from_gaps(
            l[0].material.clone(),
            l[2].material.clone(),
            l[1].material.clone(),
            t(2),
            t(1),
            t(3),
        )
    }

    /// Gap-width form of the net slab force.
    pub fn gap_form(&self) -> SlabGapForm<'_, T> {
        SlabGapForm(self)
    }

    /// Offset form (`A_q sinh 2κδ / (B_q − A_q cosh 2κδ)`) of the same force.
    pub fn offset_form(&self) -> SlabOffsetForm<'_, T> {
        SlabOffsetForm(self)
    }

    fn media(&self, freq: Frequency<T>) -> Result<SlabMedia<T>> {
        Ok(SlabMedia {
            wall: Medium::new(&self.wall, freq)?,
            slab: Medium::new(&self.slab, freq)?,
            gap: Medium::new(&self.gap, freq)?,
        })
    }
}

#[derive(Debug, Clone, Copy)]
struct SlabMedia<T> {
    wall: Medium<T>,
    slab: Medium<T>,
    gap: Medium<T>,
}

impl<T: Scalar> SlabMedia<T> {
    /// `(Δ_{q,1g}, Δ_{q,2g}, e^{−2κ₂b})` at `k⊥`.
    fn coefficients(&self, k_perp: T, kappa_gap: T, b: T) -> (Polarized<T>, Polarized<T>, T) {
        let probe = Probe::new(k_perp, kappa_gap, &self.gap);
        let g = self.gap.at(&probe);
        let s = self.slab.at(&probe);
        (
            both(&self.wall.at(&probe), &g),
            both(&s, &g),
            decay(s.kappa, b),
        )
    }
}

pub struct SlabGapForm<'a, T>(&'a SlabInCavity<T>);
pub struct SlabOffsetForm<'a, T>(&'a SlabInCavity<T>);

pub struct SlabSlice<'a, T> {
    geometry: &'a SlabInCavity<T>,
    media: SlabMedia<T>,
}
pub struct SlabOffsetSlice<'a, T> {
    geometry: &'a SlabInCavity<T>,
    media: SlabMedia<T>,
}

impl<T: Scalar> FrequencySlice<T> for SlabSlice<'_, T> {
    fn gap_index_weight(&self) -> T {
        self.media.gap.index_weight
    }

    /// `1/d⁺ − 1/d⁻`, so that the kernel's `−ħ/2π²` produces
    /// `+ħ/2π² (1/d⁻ − 1/d⁺)`.
    fn mode_weights(&self, k_perp: T, kappa_gap: T) -> Result<ModeSum<T>> {
        let geo = self.geometry;
        let (d1, d2, bq) = self.media.coefficients(k_perp, kappa_gap, geo.slab_thickness);
        let e_plus = decay(kappa_gap, geo.a_plus);
        let e_minus = decay(kappa_gap, geo.a_minus);
        let one = T::one();
        let w = |d1: T, d2: T| {
            let u = |e: T| d1 * d2 * (one - d1 * d2 * e) - d1 * (d2 - d1 * e) * bq;
            let v = |e: T| one - d1 * d2 * e - d2 * (d2 - d1 * e) * bq;
            // 1/d± = U∓ e± / (V∓ − U∓ e±)
            let inv_plus = u(e_minus) * e_plus / (v(e_minus) - u(e_minus) * e_plus);
            let inv_minus = u(e_plus) * e_minus / (v(e_plus) - u(e_plus) * e_minus);
            finite_weight(inv_plus - inv_minus)
        };
        Ok(Polarized::new(w(d1.te, d2.te)?, w(d1.tm, d2.tm)?))
    }
}

impl<T: Scalar> FrequencySlice<T> for SlabOffsetSlice<'_, T> {
    fn gap_index_weight(&self) -> T {
        self.media.gap.index_weight
    }

    fn mode_weights(&self, k_perp: T, kappa_gap: T) -> Result<ModeSum<T>> {
        let geo = self.geometry;
        let (d1, d2, bq) = self.media.coefficients(k_perp, kappa_gap, geo.slab_thickness);
        let one = T::one();
        let two = T::lit(2.0);
        let half = T::lit(0.5);
        let probe = Probe::new(k_perp, kappa_gap, &self.media.gap);
        // 1 − e^{−2κ₂b}
        let screen = -(-(two * self.media.slab.at(&probe).kappa) * geo.slab_thickness).exp_m1();
        let screen = if screen.is_nan() { one } else { screen };
        let eh2 = decay(kappa_gap, geo.h);
        // e^{−κh} sinh 2κδ and e^{−κh} cosh 2κδ through e^{−2κa±}
        let a_near = half * geo.h - geo.delta.abs();
        let e_near = decay(kappa_gap, a_near);
        let spread = -(-(T::lit(4.0) * kappa_gap * geo.delta.abs())).exp_m1();
        let sinh_part = half * e_near * spread;
        let sinh_part = if geo.delta < T::zero() { -sinh_part } else { sinh_part };
        let cosh_part = half * (decay(kappa_gap, geo.a_plus) + decay(kappa_gap, geo.a_minus));
        let w = |d1: T, d2: T| {
            let a_coef = two * d1 * d2 * screen;
            let b_q = one - d2 * d2 * bq + d1 * d1 * (d2 * d2 - bq) * eh2;
            finite_weight(-(a_coef * sinh_part) / (b_q - a_coef * cosh_part))
        };
        Ok(Polarized::new(w(d1.te, d2.te)?, w(d1.tm, d2.tm)?))
    }
}

impl<T: Scalar> ForceIntegrand<T> for SlabGapForm<'_, T> {
    type Slice<'b>
        = SlabSlice<'b, T>
    where
        Self: 'b;

    fn at_frequency(&self, freq: Frequency<T>) -> Result<SlabSlice<'_, T>> {
        Ok(SlabSlice {
            geometry: self.0,
            media: self.0.media(freq)?,
        })
    }

    fn decay_length(&self) -> T {
        self.0.a_plus.min(self.0.a_minus)
    }
}

impl<T: Scalar> ForceIntegrand<T> for SlabOffsetForm<'_, T> {
    type Slice<'b>
        = SlabOffsetSlice<'b, T>
    where
        Self: 'b;

    fn at_frequency(&self, freq: Frequency<T>) -> Result<SlabOffsetSlice<'_, T>> {
        Ok(SlabOffsetSlice {
            geometry: self.0,
            media: self.0.media(freq)?,
        })
    }

    fn decay_length(&self) -> T {
        self.0.a_plus.min(self.0.a_minus)
    }
}

/// Net force on the slab from the gap-width form.
pub fn slab_in_cavity_gap_form<T: Scalar>(
    geometry: &SlabInCavity<T>,
    temperature: T,
    settings: &QuadratureSettings<T>,
) -> Result<ForceResult<T>> {
    kernel::force(&geometry.gap_form(), temperature, settings)
}

/// Net force on the slab from the offset form.
pub fn slab_in_cavity_offset_form<T: Scalar>(
    geometry: &SlabInCavity<T>,
    temperature: T,
    settings: &QuadratureSettings<T>,
) -> Result<ForceResult<T>> {
    kernel::force(&geometry.offset_form(), temperature, settings)
}

/// Plates 1 (thickness `b1`) and 2 (thickness `b2`) across gap g, both
/// backed by the exterior medium e.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoPlates<T> {
    pub plate1: MaterialModel<T>,
    pub b1: T,
    pub plate2: MaterialModel<T>,
    pub b2: T,
    pub gap: MaterialModel<T>,
    pub exterior: MaterialModel<T>,
    pub width: T,
}

pub struct TwoPlatesSlice<T> {
    plate1: Medium<T>,
    plate2: Medium<T>,
    gap: Medium<T>,
    exterior: Medium<T>,
    b1: T,
    b2: T,
    width: T,
}

impl<T: Scalar> TwoPlates<T> {
    pub fn new(
        plate1: MaterialModel<T>,
        b1: T,
        plate2: MaterialModel<T>,
        b2: T,
        gap: MaterialModel<T>,
        exterior: MaterialModel<T>,
        width: T,
    ) -> Result<Self> {
        check_width("gap width", width)?;
        check_width("plate 1 thickness", b1)?;
        check_width("plate 2 thickness", b2)?;
        check_gap_medium(&gap)?;
        for m in [&plate1, &plate2, &exterior] {
            m.validate()?;
        }
        Ok(TwoPlates {
            plate1,
            b1,
            plate2,
            b2,
            gap,
            exterior,
            width,
        })
    }

    pub fn to_stack(&self) -> Result<LayerStack<T>> {
        LayerStack::new(
            vec![
                Layer::semi_infinite("exterior", self.exterior.clone()),
                Layer::finite("plate1", self.plate1.clone(), self.b1),
                Layer::finite("gap", self.gap.clone(), self.width),
                Layer::finite("plate2", self.plate2.clone(), self.b2),
                Layer::semi_infinite("exterior", self.exterior.clone()),
            ],
            2,
        )
    }

    /// Reads `[e | 1 | g | 2 | e]` (gap at index 2) off a five-layer stack.
    pub fn from_stack(stack: &LayerStack<T>) -> Result<Self> {
        let l = stack.layers();
        if l.len() != 5 || stack.gap_index() != 2 || l[0].material != l[4].material {
            return Err(Error::InvalidStack(
                "two-plates geometry needs [e | plate | gap | plate | e] with the gap at \
                 index 2 and identical exterior media"
                    .into(),
            ));
        }
        let t = |i: usize| l[i].thickness.finite().unwrap_or(T::nan());
        Self::new(
            l[1].material.clone(),
            t(1),
            l[3].material.clone(),
            t(3),
            l[2].material.clone(),
            l[0].material.clone(),
            stack.gap_width(),
        )
    }
}

impl<T: Scalar> TwoPlatesSlice<T> {
    /// `(r⁻, r⁺)` from the closed forms.
    fn reflections(&self, k_perp: T, kappa_gap: T) -> (Polarized<T>, Polarized<T>) {
        let probe = Probe::new(k_perp, kappa_gap, &self.gap);
        let g = self.gap.at(&probe);
        let ext = self.exterior.at(&probe);
        let plate = |m: &Medium<T>, b: T| {
            let p = m.at(&probe);
            let dg = both(&p, &g);
            let de = both(&p, &ext);
            let e = decay(p.kappa, b);
            let r = |dg: T, de: T| (-dg + de * e) / (T::one() - dg * de * e);
            Polarized::new(r(dg.te, de.te), r(dg.tm, de.tm))
        };
        (plate(&self.plate1, self.b1), plate(&self.plate2, self.b2))
    }
}

impl<T: Scalar> FrequencySlice<T> for TwoPlatesSlice<T> {
    fn gap_index_weight(&self) -> T {
        self.gap.index_weight
    }

    fn mode_weights(&self, k_perp: T, kappa_gap: T) -> Result<ModeSum<T>> {
        let (minus, plus) = self.reflections(k_perp, kappa_gap);
        let e = decay(kappa_gap, self.width);
        let w = |a: T, b: T| {
            let x = a * b * e;
            finite_weight(x / (T::one() - x))
        };
        Ok(Polarized::new(w(plus.te, minus.te)?, w(plus.tm, minus.tm)?))
    }
}

impl<T: Scalar> ForceIntegrand<T> for TwoPlates<T> {
    type Slice<'a> = TwoPlatesSlice<T>;

    fn at_frequency(&self, freq: Frequency<T>) -> Result<TwoPlatesSlice<T>> {
        Ok(TwoPlatesSlice {
            plate1: Medium::new(&self.plate1, freq)?,
            plate2: Medium::new(&self.plate2, freq)?,
            gap: Medium::new(&self.gap, freq)?,
            exterior: Medium::new(&self.exterior, freq)?,
            b1: self.b1,
            b2: self.b2,
            width: self.width,
        })
    }

    fn decay_length(&self) -> T {
        self.width
    }
}

impl<T: Scalar> TwoPlates<T> {
    /// `(r⁻, r⁺)` of the two plates at one spectral point.
    pub fn reflections(&self, freq: Frequency<T>, k_perp: T) -> Result<(Polarized<T>, Polarized<T>)> {
        let slice = self.at_frequency(freq)?;
        let kappa = (k_perp * k_perp + slice.gap.index_weight).sqrt();
        Ok(slice.reflections(k_perp, kappa))
    }
}

pub fn two_plates<T: Scalar>(
    geometry: &TwoPlates<T>,
    temperature: T,
    settings: &QuadratureSettings<T>,
) -> Result<ForceResult<T>> {
    kernel::force(geometry, temperature, settings)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::integrand;
    use approx::assert_relative_eq;

    fn c(eps: f64, mu: f64) -> MaterialModel<f64> {
        MaterialModel::constant(eps, mu)
    }

    fn grid() -> Vec<(Frequency<f64>, f64)> {
        let mut out = Vec::new();
        for &z in &[0.0, 3e12, 1e14, 7e14, 4e15] {
            for &k in &[1e4, 2e6, 9e6, 4e7] {
                out.push((Frequency::from_zeta(z).unwrap(), k));
            }
        }
        out
    }

    fn assert_integrands_match<A, B>(a: &A, b: &B, tol: f64)
    where
        A: ForceIntegrand<f64>,
        B: ForceIntegrand<f64>,
    {
        for (f, k) in grid() {
            let x = integrand(a, f, k).unwrap();
            let y = integrand(b, f, k).unwrap();
            for (p, q) in [(x.te, y.te), (x.tm, y.tm)] {
                assert!(
                    (p - q).abs() <= tol * p.abs().max(q.abs()).max(1e-300),
                    "{f:?} k={k}: {p} vs {q}"
                );
            }
        }
    }

    #[test]
    fn identical_media_give_nothing() {
        let h = HalfSpaces::new(c(2.0, 1.5), c(2.0, 1.5), c(2.0, 1.5), 1e-7).unwrap();
        for (f, k) in grid() {
            assert_eq!(integrand(&h, f, k).unwrap().sum(), 0.0);
        }
    }

    #[test]
    fn halfspaces_match_stack_pointwise() {
        let h = HalfSpaces::new(c(3.0, 1.2), c(1.4, 1.0), c(7.5, 2.0), 2e-7).unwrap();
        assert_integrands_match(&h, &h.to_stack().unwrap(), 1e-13);
        let gold = MaterialModel::drude(1.37e16, 5.32e13);
        let h = HalfSpaces::new(gold.clone(), MaterialModel::Vacuum, gold, 1e-7).unwrap();
        assert_integrands_match(&h, &h.to_stack().unwrap(), 1e-13);
    }

    #[test]
    fn plate_wall_matches_stack_pointwise() {
        let p = PlateWall::new(c(4.0, 1.0), c(1.2, 1.1), c(9.0, 2.5), c(1.7, 1.3), 1.5e-7, 8e-8)
            .unwrap();
        assert_integrands_match(&p, &p.to_stack().unwrap(), 1e-13);
    }

    #[test]
    fn plate_of_exterior_material_is_a_halfspace() {
        let p = PlateWall::new(c(4.0, 1.0), MaterialModel::Vacuum, c(3.0, 1.4), c(3.0, 1.4), 1e-7, 5e-8)
            .unwrap();
        let h = HalfSpaces::new(c(4.0, 1.0), MaterialModel::Vacuum, c(3.0, 1.4), 1e-7).unwrap();
        assert_integrands_match(&p, &h, 1e-14);
    }

    #[test]
    fn slab_forms_match_stack_pointwise() {
        let s = SlabInCavity::from_offset(c(5.0, 1.0), c(2.5, 1.8), c(1.3, 1.0), 6e-8, 4e-7, 7e-8)
            .unwrap();
        let plus = s.to_stack(CavityGap::Plus).unwrap();
        let minus = s.to_stack(CavityGap::Minus).unwrap();
        for (f, k) in grid() {
            let g = integrand(&s.gap_form(), f, k).unwrap();
            let o = integrand(&s.offset_form(), f, k).unwrap();
            let p = integrand(&plus, f, k).unwrap();
            let m = integrand(&minus, f, k).unwrap();
            let scale = p.sum().abs() + m.sum().abs();
            let generic = p.sum() - m.sum();
            assert!((g.sum() - generic).abs() <= 1e-12 * scale.max(1e-300));
            assert!((o.sum() - generic).abs() <= 1e-12 * scale.max(1e-300));
        }
    }

    #[test]
    fn centred_slab_integrand_is_zero_and_odd() {
        let s = SlabInCavity::from_offset(c(5.0, 1.0), c(2.5, 1.8), MaterialModel::Vacuum, 6e-8, 4e-7, 0.0)
            .unwrap();
        for (f, k) in grid() {
            assert_eq!(integrand(&s.gap_form(), f, k).unwrap().sum(), 0.0);
            assert_eq!(integrand(&s.offset_form(), f, k).unwrap().sum(), 0.0);
        }
        let mk = |d: f64| {
            SlabInCavity::from_offset(c(5.0, 1.0), c(2.5, 1.8), MaterialModel::Vacuum, 6e-8, 4e-7, d)
                .unwrap()
        };
        let (pos, neg) = (mk(9e-8), mk(-9e-8));
        for (f, k) in grid() {
            let a = integrand(&pos.offset_form(), f, k).unwrap();
            let b = integrand(&neg.offset_form(), f, k).unwrap();
            assert_eq!(a.te, -b.te);
            assert_eq!(a.tm, -b.tm);
            let a = integrand(&pos.gap_form(), f, k).unwrap();
            let b = integrand(&neg.gap_form(), f, k).unwrap();
            assert_eq!(a.sum(), -b.sum());
        }
    }

    #[test]
    fn vanishing_slab_exerts_nothing() {
        let s = SlabInCavity::from_offset(c(5.0, 1.0), c(2.5, 1.8), MaterialModel::Vacuum, 1e-300, 4e-7, 5e-8)
            .unwrap();
        for (f, k) in grid() {
            assert!(integrand(&s.offset_form(), f, k).unwrap().sum().abs() < 1e-250);
        }
    }

    #[test]
    fn two_plates_match_stack_pointwise() {
        let t = TwoPlates::new(c(6.0, 1.0), 4e-8, c(3.0, 2.2), 9e-8, c(1.1, 1.0), c(1.9, 1.2), 1.2e-7)
            .unwrap();
        assert_integrands_match(&t, &t.to_stack().unwrap(), 1e-13);
    }

    #[test]
    fn identical_plates_in_vacuum_are_symmetric() {
        let t = TwoPlates::new(
            c(6.0, 1.3),
            4e-8,
            c(6.0, 1.3),
            4e-8,
            MaterialModel::Vacuum,
            MaterialModel::Vacuum,
            1.2e-7,
        )
        .unwrap();
        for (f, k) in grid() {
            let (m, p) = t.reflections(f, k).unwrap();
            assert_eq!(m, p);
        }
    }

    #[test]
    fn thick_plates_become_halfspaces() {
        let t = TwoPlates::new(c(6.0, 1.0), 1e-2, c(3.0, 2.2), 1e-2, MaterialModel::Vacuum, c(1.9, 1.2), 1e-7)
            .unwrap();
        let h = HalfSpaces::new(c(6.0, 1.0), MaterialModel::Vacuum, c(3.0, 2.2), 1e-7).unwrap();
        for (f, k) in grid().into_iter().filter(|(_, k)| *k > 1e5) {
            let a = integrand(&t, f, k).unwrap().sum();
            let b = integrand(&h, f, k).unwrap().sum();
            assert_relative_eq!(a, b, max_relative = 1e-12);
        }
    }

    #[test]
    fn geometry_validation() {
        assert!(HalfSpaces::new(c(2.0, 1.0), MaterialModel::Vacuum, c(2.0, 1.0), 0.0).is_err());
        assert!(HalfSpaces::new(
            c(2.0, 1.0),
            MaterialModel::PerfectConductor,
            c(2.0, 1.0),
            1e-7
        )
        .is_err());
        assert!(SlabInCavity::from_offset(c(2.0, 1.0), c(3.0, 1.0), MaterialModel::Vacuum, 1e-7, 1e-6, 5e-7)
            .is_err());
        let s = SlabInCavity::from_gaps(c(2.0, 1.0), c(3.0, 1.0), MaterialModel::Vacuum, 1e-7, 3e-7, 1e-7)
            .unwrap();
        assert_relative_eq!(s.delta, 1e-7, max_relative = 1e-15);
        assert_relative_eq!(s.cavity_width(), 5e-7, max_relative = 1e-15);
    }

    #[test]
    fn stack_round_trips() {
        let p = PlateWall::new(c(4.0, 1.0), c(1.2, 1.1), c(9.0, 2.5), c(1.7, 1.3), 1.5e-7, 8e-8)
            .unwrap();
        assert_eq!(PlateWall::from_stack(&p.to_stack().unwrap()).unwrap(), p);
        let t = TwoPlates::new(c(6.0, 1.0), 4e-8, c(3.0, 2.2), 9e-8, c(1.1, 1.0), c(1.9, 1.2), 1.2e-7)
            .unwrap();
        assert_eq!(TwoPlates::from_stack(&t.to_stack().unwrap()).unwrap(), t);
        let s = SlabInCavity::from_gaps(c(2.0, 1.0), c(3.0, 1.0), MaterialModel::Vacuum, 1e-7, 3e-7, 1e-7)
            .unwrap();
        assert_eq!(SlabInCavity::from_stack(&s.to_stack(CavityGap::Minus).unwrap()).unwrap(), s);
    }
}
