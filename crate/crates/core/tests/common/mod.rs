#![allow(dead_code)]

use planar_casimir::kernel::{self, ForceIntegrand, FrequencySlice, ModeSum, StackSlice};
use planar_casimir::optics::Polarized;
use planar_casimir::scenarios::{CavityGap, HalfSpaces, PlateWall, SlabInCavity, TwoPlates};
use planar_casimir::{constants, Frequency, LayerStack, MaterialModel, QuadratureSettings, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const HBAR: f64 = constants::HBAR;
pub const C: f64 = constants::SPEED_OF_LIGHT;
pub const KB: f64 = constants::BOLTZMANN;
pub const ZETA3: f64 = 1.202_056_903_159_594_3;

/// Pressure of a vacuum trizone with constant ε = 2.25 walls, from a
/// standalone 30-digit double quadrature.
pub const DIELECTRIC_100NM: f64 = -0.678_217_984_512_766_91;
pub const DIELECTRIC_1UM: f64 = -6.782_179_845_127_669_1e-5;

pub fn ideal_pressure(a: f64) -> f64 {
    -std::f64::consts::PI.powi(2) * HBAR * C / (240.0 * a.powi(4))
}

pub fn classical_pressure(a: f64, t: f64) -> f64 {
    -ZETA3 * KB * t / (4.0 * std::f64::consts::PI * a.powi(3))
}

pub fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

pub fn settings() -> QuadratureSettings<f64> {
    QuadratureSettings::default()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Constant magnetodielectric with ε ∈ [1, 10], μ ∈ [1, 3].
pub fn medium(r: &mut impl Rng) -> MaterialModel<f64> {
    MaterialModel::constant(r.gen_range(1.0..10.0), r.gen_range(1.0..3.0))
}

/// Log-uniform in [10 nm, 5 µm].
pub fn length(r: &mut impl Rng) -> f64 {
    10f64.powf(r.gen_range((1e-8f64).log10()..(5e-6f64).log10()))
}

pub fn temperature(r: &mut impl Rng) -> f64 {
    if r.gen_bool(0.5) {
        0.0
    } else {
        300.0
    }
}

pub fn halfspaces(r: &mut impl Rng) -> HalfSpaces<f64> {
    HalfSpaces::new(medium(r), medium(r), medium(r), length(r)).unwrap()
}

pub fn plate_wall(r: &mut impl Rng) -> PlateWall<f64> {
    PlateWall::new(medium(r), medium(r), medium(r), medium(r), length(r), length(r)).unwrap()
}

pub fn slab(r: &mut impl Rng) -> SlabInCavity<f64> {
    SlabInCavity::from_gaps(medium(r), medium(r), medium(r), length(r), length(r), length(r))
        .unwrap()
}

pub fn two_plates(r: &mut impl Rng) -> TwoPlates<f64> {
    TwoPlates::new(medium(r), length(r), medium(r), length(r), medium(r), medium(r), length(r))
        .unwrap()
}

/// `1/d` across gap + minus `1/d` across gap −, both from the generic stack
/// recursion, evaluated pointwise so that one quadrature covers the net
/// slab force.
pub struct GapDifference {
    pub plus: LayerStack<f64>,
    pub minus: LayerStack<f64>,
}

impl GapDifference {
    pub fn new(geo: &SlabInCavity<f64>) -> Self {
        GapDifference {
            plus: geo.to_stack(CavityGap::Plus).unwrap(),
            minus: geo.to_stack(CavityGap::Minus).unwrap(),
        }
    }
}

pub struct GapDifferenceSlice<'a> {
    plus: StackSlice<'a, f64>,
    minus: StackSlice<'a, f64>,
}

impl FrequencySlice<f64> for GapDifferenceSlice<'_> {
    fn gap_index_weight(&self) -> f64 {
        self.plus.gap_index_weight()
    }

    fn mode_weights(&self, k_perp: f64, kappa_gap: f64) -> Result<ModeSum<f64>> {
        let p = self.plus.mode_weights(k_perp, kappa_gap)?;
        let m = self.minus.mode_weights(k_perp, kappa_gap)?;
        Ok(Polarized::new(p.te - m.te, p.tm - m.tm))
    }
}

impl ForceIntegrand<f64> for GapDifference {
    type Slice<'a> = GapDifferenceSlice<'a>;

    fn at_frequency(&self, freq: Frequency<f64>) -> Result<GapDifferenceSlice<'_>> {
        Ok(GapDifferenceSlice {
            plus: self.plus.at_frequency(freq)?,
            minus: self.minus.at_frequency(freq)?,
        })
    }

    fn decay_length(&self) -> f64 {
        self.plus.gap_width().min(self.minus.gap_width())
    }
}

/// Worst relative disagreement between each scenario and the generic stack
/// over `draws` random parameter sets. Returns `(worst, label of worst)`.
pub fn worst_equivalence(seed: u64, draws: usize) -> Vec<(&'static str, f64, String)> {
    let s = settings();
    let mut out = Vec::new();
    let mut r = rng(seed);
    let mut track = |name: &'static str, pairs: Vec<(f64, f64, String)>| {
        let mut worst = (0.0, String::new());
        for (a, b, label) in pairs {
            let e = rel(a, b);
            if !(e <= worst.0) {
                worst = (e, label);
            }
        }
        out.push((name, worst.0, worst.1));
    };

    let pairs = (0..draws)
        .map(|_| {
            let g = halfspaces(&mut r);
            let t = temperature(&mut r);
            let a = kernel::force(&g, t, &s).unwrap().pressure;
            let b = kernel::force(&g.to_stack().unwrap(), t, &s).unwrap().pressure;
            (a, b, format!("{g:?} T={t}"))
        })
        .collect();
    track("halfspaces", pairs);

    let pairs = (0..draws)
        .map(|_| {
            let g = plate_wall(&mut r);
            let t = temperature(&mut r);
            let a = kernel::force(&g, t, &s).unwrap().pressure;
            let b = kernel::force(&g.to_stack().unwrap(), t, &s).unwrap().pressure;
            (a, b, format!("{g:?} T={t}"))
        })
        .collect();
    track("plate-wall", pairs);

    let mut gap_pairs = Vec::new();
    let mut offset_pairs = Vec::new();
    for _ in 0..draws {
        let g = slab(&mut r);
        let t = temperature(&mut r);
        let generic = kernel::force(&GapDifference::new(&g), t, &s).unwrap().pressure;
        let gap = kernel::force(&g.gap_form(), t, &s).unwrap().pressure;
        let off = kernel::force(&g.offset_form(), t, &s).unwrap().pressure;
        gap_pairs.push((gap, generic, format!("{g:?} T={t}")));
        offset_pairs.push((off, generic, format!("{g:?} T={t}")));
    }
    track("slab-in-cavity (gap form)", gap_pairs);
    track("slab-in-cavity (offset form)", offset_pairs);

    let pairs = (0..draws)
        .map(|_| {
            let g = two_plates(&mut r);
            let t = temperature(&mut r);
            let a = kernel::force(&g, t, &s).unwrap().pressure;
            let b = kernel::force(&g.to_stack().unwrap(), t, &s).unwrap().pressure;
            (a, b, format!("{g:?} T={t}"))
        })
        .collect();
    track("two-plates", pairs);
    out
}
