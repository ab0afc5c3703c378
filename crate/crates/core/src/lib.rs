//! Casimir pressure between the two half-stacks bounding a gap layer in a
//! plane-parallel multilayer of magnetodielectric media.
//!
//! All response functions are evaluated on the imaginary frequency axis
//! `ω = iζ`, so every quantity in the force path (decay constants, Fresnel
//! coefficients, reflection coefficients, mode weights) is real.
//!
//! The numerical core is generic over [`Scalar`] (`f64` and `f32`); the
//! aliases at the bottom of this file name the concrete `f64` types that the
//! command-line front-end uses.

pub mod constants;
pub mod error;
pub mod kernel;
pub mod materials;
pub mod optics;
pub mod quadrature;
pub mod scalar;
pub mod scenarios;
pub mod stack;

pub use error::{Error, Result};
pub use kernel::{
    ForceIntegrand, ForceResult, FrequencySlice, IdealMirrors, MatsubaraTerm, ModeSum,
    PhysicalConstants, QuadratureSettings,
};
pub use materials::{Frequency, MaterialModel, Oscillator};
pub use optics::Polarization;
pub use scalar::{Field, Scalar};
pub use stack::{Diagnostic, Layer, LayerStack, Severity, Side, Thickness};

pub type MaterialModel64 = MaterialModel<f64>;
pub type MaterialModel32 = MaterialModel<f32>;
pub type Layer64 = Layer<f64>;
pub type Layer32 = Layer<f32>;
pub type LayerStack64 = LayerStack<f64>;
pub type LayerStack32 = LayerStack<f32>;
pub type ForceResult64 = ForceResult<f64>;
pub type ForceResult32 = ForceResult<f32>;
pub type QuadratureSettings64 = QuadratureSettings<f64>;
pub type QuadratureSettings32 = QuadratureSettings<f32>;
