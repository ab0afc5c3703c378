//! Planar geometry: an ordered list of layers `0..=n` with semi-infinite ends
//! and a designated interior gap layer `j` whose width is the force variable.

use std::fmt;

use crate::error::{Error, Result};
use crate::materials::MaterialModel;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Thickness<T> {
    /// Width in metres.
    Finite(T),
    SemiInfinite,
}

impl<T: Scalar> Thickness<T> {
    pub fn finite(&self) -> Option<T> {
        match *self {
            Thickness::Finite(t) => Some(t),
            Thickness::SemiInfinite => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Layer<T> {
    /// Label of the material this layer is made of.
    pub name: String,
    pub material: MaterialModel<T>,
    pub thickness: Thickness<T>,
}

impl<T: Scalar> Layer<T> {
    pub fn finite(name: impl Into<String>, material: MaterialModel<T>, thickness: T) -> Self {
        Layer {
            name: name.into(),
            material,
            thickness: Thickness::Finite(thickness),
        }
    }

    pub fn semi_infinite(name: impl Into<String>, material: MaterialModel<T>) -> Self {
        Layer {
            name: name.into(),
            material,
            thickness: Thickness::SemiInfinite,
        }
    }
}

/// Which half-stack, seen from the gap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// Layers `0..j`; its reflection coefficient is r⁻.
    Left,
    /// Layers `j+1..=n`; its reflection coefficient is r⁺.
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    /// Index of the offending layer, when there is one.
    pub layer: Option<usize>,
    pub message: String,
}

impl Diagnostic {
    fn error(layer: Option<usize>, message: String) -> Self {
        Diagnostic {
            severity: Severity::Error,
            layer,
            message,
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.severity {
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        match self.layer {
            Some(i) => write!(f, "{tag}: layer {i}: {}", self.message),
            None => write!(f, "{tag}: {}", self.message),
        }
    }
}

/// Structural checks on a prospective stack. Errors make the stack unusable;
/// the only warning is the bulk-force notice for differing exterior media.
pub fn validate<T: Scalar>(layers: &[Layer<T>], gap: usize) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let count = layers.len();
    if count < 3 {
        out.push(Diagnostic::error(
            None,
            format!("a stack needs at least 3 layers, got {count}"),
        ));
        return out;
    }
    let last = count - 1;
    if gap == 0 || gap >= last {
        out.push(Diagnostic::error(
            None,
            format!("gap index {gap} must be interior (0 < j < {last})"),
        ));
    }
    for (i, layer) in layers.iter().enumerate() {
        if let Err(e) = layer.material.validate() {
            out.push(Diagnostic::error(Some(i), format!("'{}': {e}", layer.name)));
        }
        let is_end = i == 0 || i == last;
        match layer.thickness {
            Thickness::SemiInfinite if !is_end => out.push(Diagnostic::error(
                Some(i),
                format!("'{}': only the outermost layers may be semi-infinite", layer.name),
            )),
            Thickness::Finite(_) if is_end => out.push(Diagnostic::error(
                Some(i),
                format!("'{}': outermost layers must be semi-infinite", layer.name),
            )),
            Thickness::Finite(t) if !(t.is_finite() && t > T::zero()) => {
                out.push(Diagnostic::error(
                    Some(i),
                    format!("'{}': thickness must be finite and > 0, got {t}", layer.name),
                ))
            }
            _ => {}
        }
    }
    if let Some(g) = layers.get(gap).filter(|_| gap > 0 && gap < last) {
        if matches!(g.material, MaterialModel::PerfectConductor) {
            out.push(Diagnostic::error(
                Some(gap),
                format!("'{}': the gap medium cannot be a perfect conductor", g.name),
            ));
        }
    }
    if layers[0].material != layers[last].material {
        out.push(Diagnostic {
            severity: Severity::Warning,
            layer: None,
            message: format!(
                "exterior media differ ('{}' vs '{}'): the bulk force on the whole \
                 multilayer is nonzero and is not included in the reported pressure",
                layers[0].name, layers[last].name
            ),
        });
    }
    out
}

/// A validated stack. Construction fails on any error diagnostic; warnings
/// remain available through [`LayerStack::validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct LayerStack<T> {
    layers: Vec<Layer<T>>,
    gap: usize,
}

impl<T: Scalar> LayerStack<T> {
    pub fn new(layers: Vec<Layer<T>>, gap: usize) -> Result<Self> {
        let errors: Vec<String> = validate(&layers, gap)
            .into_iter()
            .filter(Diagnostic::is_error)
            .map(|d| d.to_string())
            .collect();
        if errors.is_empty() {
            Ok(LayerStack { layers, gap })
        } else {
            Err(Error::InvalidStack(errors.join("; ")))
        }
    }

    /// Three-layer stack `[left | gap(width) | right]`.
    pub fn trizone(
        left: MaterialModel<T>,
        gap: MaterialModel<T>,
        right: MaterialModel<T>,
        width: T,
    ) -> Result<Self> {
        Self::new(
            vec![
                Layer::semi_infinite("left", left),
                Layer::finite("gap", gap, width),
                Layer::semi_infinite("right", right),
            ],
            1,
        )
    }

    pub fn validate(&self) -> Vec<Diagnostic> {
        validate(&self.layers, self.gap)
    }

    pub fn layers(&self) -> &[Layer<T>] {
        &self.layers
    }

    pub fn gap_index(&self) -> usize {
        self.gap
    }

    pub fn gap_layer(&self) -> &Layer<T> {
        &self.layers[self.gap]
    }

    pub fn gap_width(&self) -> T {
        match self.layers[self.gap].thickness {
            Thickness::Finite(t) => t,
            Thickness::SemiInfinite => unreachable!("validated gap is finite"),
        }
    }

    /// Copy of the stack with the gap layer resized to `width`.
    pub fn with_gap_width(&self, width: T) -> Result<Self> {
        if !(width.is_finite() && width > T::zero()) {
            return Err(Error::InvalidArgument(format!(
                "gap width must be finite and > 0, got {width}"
            )));
        }
        let mut next = self.clone();
        next.layers[self.gap].thickness = Thickness::Finite(width);
        Ok(next)
    }

    /// Same layers, different gap designation.
    pub fn with_gap_index(&self, gap: usize) -> Result<Self> {
        Self::new(self.layers.clone(), gap)
    }
}
