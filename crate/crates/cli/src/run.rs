//! Sweep execution and CSV output.

use std::io::{self, Write};

use planar_casimir::kernel;
use planar_casimir::scenarios::{
    self, CavityGap, HalfSpaces, PlateWall, SlabInCavity, TwoPlates,
};
use planar_casimir::{Error, ForceResult64, LayerStack64, QuadratureSettings64};
use rayon::prelude::*;

use crate::error::CliError;
use crate::runspec::RunSpec;

pub const CSV_HEADER: &str = "a_m,T_K,pressure_Pa,abs_error_Pa,n_matsubara,n_evals,status";

/// How the stack in a run description is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Generic recursive stack.
    Force,
    HalfSpaces,
    PlateWall,
    /// Net force on the slab; the sweep sets the designated gap and the
    /// other gap takes up the rest of the free width.
    SlabCavity,
    TwoPlates,
}

#[derive(Debug, Clone)]
pub enum Geometry {
    Stack(LayerStack64),
    HalfSpaces(HalfSpaces<f64>),
    PlateWall(PlateWall<f64>),
    SlabCavity {
        geometry: SlabInCavity<f64>,
        across: CavityGap,
    },
    TwoPlates(TwoPlates<f64>),
}

fn layout(mode: Mode) -> impl FnOnce(Error) -> CliError {
    move |e| CliError::Validation(format!("stack does not fit {mode:?}: {e}"))
}

impl Geometry {
    /// Reads the geometry for `mode` off the stack in `spec`.
    pub fn prepare(spec: &RunSpec, mode: Mode) -> Result<Self, CliError> {
        let stack = spec.stack()?;
        Ok(match mode {
            Mode::Force => Geometry::Stack(stack),
            Mode::HalfSpaces => {
                Geometry::HalfSpaces(HalfSpaces::from_stack(&stack).map_err(layout(mode))?)
            }
            Mode::PlateWall => {
                Geometry::PlateWall(PlateWall::from_stack(&stack).map_err(layout(mode))?)
            }
            Mode::SlabCavity => Geometry::SlabCavity {
                geometry: SlabInCavity::from_stack(&stack).map_err(layout(mode))?,
                across: if stack.gap_index() == 1 {
                    CavityGap::Plus
                } else {
                    CavityGap::Minus
                },
            },
            Mode::TwoPlates => {
                Geometry::TwoPlates(TwoPlates::from_stack(&stack).map_err(layout(mode))?)
            }
        })
    }

    /// Pressure with the swept gap set to `width`.
    pub fn force_at(
        &self,
        width: f64,
        temperature: f64,
        settings: &QuadratureSettings64,
    ) -> planar_casimir::Result<ForceResult64> {
        match self {
            Geometry::Stack(s) => kernel::force(&s.with_gap_width(width)?, temperature, settings),
            Geometry::HalfSpaces(g) => {
                let g = HalfSpaces::new(g.left.clone(), g.gap.clone(), g.right.clone(), width)?;
                scenarios::lifshitz_halfspaces(&g, temperature, settings)
            }
            Geometry::PlateWall(g) => {
                let g = PlateWall::new(
                    g.wall.clone(),
                    g.gap.clone(),
                    g.plate.clone(),
                    g.exterior.clone(),
                    width,
                    g.plate_thickness,
                )?;
                scenarios::plate_wall(&g, temperature, settings)
            }
            Geometry::SlabCavity { geometry: g, across } => {
                let other = g.h - width;
                if !(other > 0.0) {
                    return Err(Error::InvalidArgument(format!(
                        "gap width {width} leaves no room in a free width of {}",
                        g.h
                    )));
                }
                let (a_plus, a_minus) = match across {
                    CavityGap::Plus => (width, other),
                    CavityGap::Minus => (other, width),
                };
                let g = SlabInCavity::from_gaps(
                    g.wall.clone(),
                    g.slab.clone(),
                    g.gap.clone(),
                    g.slab_thickness,
                    a_plus,
                    a_minus,
                )?;
                scenarios::slab_in_cavity_gap_form(&g, temperature, settings)
            }
            Geometry::TwoPlates(g) => {
                let g = TwoPlates::new(
                    g.plate1.clone(),
                    g.b1,
                    g.plate2.clone(),
                    g.b2,
                    g.gap.clone(),
                    g.exterior.clone(),
                    width,
                )?;
                scenarios::two_plates(&g, temperature, settings)
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct Row {
    pub width: f64,
    pub temperature: f64,
    pub outcome: Result<ForceResult64, Error>,
}

impl Row {
    pub fn status(&self) -> &'static str {
        match &self.outcome {
            Ok(_) => "ok",
            Err(Error::NotConverged { .. }) => "not_converged",
            Err(Error::MatsubaraTruncation { .. }) => "matsubara_truncation",
            Err(Error::StaticLimit { .. }) => "static_limit",
            Err(Error::Singular(_)) => "singular",
            Err(Error::Unphysical { .. }) => "unphysical",
            Err(Error::NonFinite(_)) => "non_finite",
            Err(
                Error::InvalidArgument(_) | Error::InvalidMaterial(_) | Error::InvalidStack(_),
            ) => "invalid",
        }
    }

    pub fn is_ok(&self) -> bool {
        self.outcome.is_ok()
    }
}

/// Evaluates every row of `spec`. Rows run on a pool of `threads` workers
/// (0 picks the number of CPUs) and come back in spec order.
pub fn compute(
    geometry: &Geometry,
    spec: &RunSpec,
    settings: &QuadratureSettings64,
    threads: usize,
) -> Result<Vec<Row>, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Io(format!("cannot start worker threads: {e}")))?;
    let rows = spec.rows();
    Ok(pool.install(|| {
        rows.par_iter()
            .map(|&(width, temperature)| Row {
                width,
                temperature,
                outcome: geometry.force_at(width, temperature, settings),
            })
            .collect()
    }))
}

fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_csv(rows: &[Row], out: &mut impl Write) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for row in rows {
        let (p, e, m, n) = match &row.outcome {
            Ok(r) => (
                sci(r.pressure),
                sci(r.abs_error_estimate),
                r.n_matsubara_terms,
                r.n_integrand_evals,
            ),
            Err(_) => (sci(f64::NAN), sci(f64::NAN), 0, 0),
        };
        writeln!(
            out,
            "{},{},{p},{e},{m},{n},{}",
            sci(row.width),
            sci(row.temperature),
            row.status()
        )?;
    }
    Ok(())
}
