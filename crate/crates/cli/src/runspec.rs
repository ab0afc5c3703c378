//! Run description files.
//!
//! ```text
//! # two gold half-spaces
//! [material gold]
//! model = drude
//! omega_p = 1.37e16
//! gamma = 5.32e13
//!
//! [material vacuum]
//! model = vacuum
//!
//! [stack]
//! layer = gold semi-infinite
//! layer = vacuum 1e-6
//! layer = gold semi-infinite
//! gap = 1
//!
//! [run]
//! sweep = 5e-7 1e-6 2e-6
//! temperatures = 0 300
//! ```
//!
//! `sweep_log = START STOP COUNT` may replace `sweep`. Optional `[run]` keys:
//! `rel_tol`, `abs_tol`, `max_subdivisions`, `matsubara_rel_cutoff`,
//! `matsubara_max_terms`, `output`. Material models and their keys:
//!
//! | model               | keys                                         |
//! |---------------------|----------------------------------------------|
//! | `vacuum`            |                                              |
//! | `constant`          | `eps`, `mu` (default 1)                      |
//! | `drude`             | `omega_p`, `gamma`                           |
//! | `plasma`            | `omega_p`                                    |
//! | `lorentz`           | `oscillator = f w g` (repeatable), `mu_oscillator = f w g` |
//! | `perfect-conductor` |                                              |

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use planar_casimir::{
    Layer64, LayerStack64, MaterialModel64, Oscillator, QuadratureSettings64, Thickness,
};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Sweep {
    List(Vec<f64>),
    /// `count` log-spaced widths from `start` to `stop` inclusive.
    Log { start: f64, stop: f64, count: usize },
}

impl Sweep {
    pub fn values(&self) -> Vec<f64> {
        match *self {
            Sweep::List(ref v) => v.clone(),
            Sweep::Log { start, stop, count } => {
                if count == 1 {
                    return vec![start];
                }
                let (l0, l1) = (start.ln(), stop.ln());
                (0..count)
                    .map(|i| match i {
                        0 => start,
                        _ if i == count - 1 => stop,
                        _ => (l0 + (l1 - l0) * i as f64 / (count - 1) as f64).exp(),
                    })
                    .collect()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayerSpec {
    pub material: String,
    pub thickness: Thickness<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    /// Materials in declaration order.
    pub materials: Vec<(String, MaterialModel64)>,
    pub layers: Vec<LayerSpec>,
    pub gap: usize,
    pub sweep: Sweep,
    pub temperatures: Vec<f64>,
    pub settings: QuadratureSettings64,
    pub output: Option<PathBuf>,
}

impl RunSpec {
    pub fn material(&self, name: &str) -> Option<&MaterialModel64> {
        self.materials.iter().find(|(n, _)| n == name).map(|(_, m)| m)
    }

    /// The stack as described; every material reference resolved.
    pub fn stack(&self) -> Result<LayerStack64, CliError> {
        LayerStack64::new(self.stack_layers()?, self.gap)
            .map_err(|e| CliError::Validation(e.to_string()))
    }

    fn stack_layers(&self) -> Result<Vec<Layer64>, CliError> {
        self.layers
            .iter()
            .map(|l| {
                let m = self.material(&l.material).ok_or_else(|| {
                    CliError::Validation(format!("unknown material '{}'", l.material))
                })?;
                Ok(Layer64 {
                    name: l.material.clone(),
                    material: m.clone(),
                    thickness: l.thickness,
                })
            })
            .collect()
    }

    /// Every (width, temperature) pair in output order.
    pub fn rows(&self) -> Vec<(f64, f64)> {
        let widths = self.sweep.values();
        widths
            .iter()
            .flat_map(|&a| self.temperatures.iter().map(move |&t| (a, t)))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Material,
    Stack,
    Run,
}

fn perr(line: usize, message: impl Into<String>) -> CliError {
    CliError::Parse {
        line,
        message: message.into(),
    }
}

fn number(line: usize, key: &str, text: &str) -> Result<f64, CliError> {
    text.trim()
        .parse::<f64>()
        .map_err(|_| perr(line, format!("'{key}': '{}' is not a number", text.trim())))
}

fn count(line: usize, key: &str, text: &str) -> Result<usize, CliError> {
    text.trim()
        .parse::<usize>()
        .map_err(|_| perr(line, format!("'{key}': '{}' is not a count", text.trim())))
}

fn numbers(line: usize, key: &str, text: &str) -> Result<Vec<f64>, CliError> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| number(line, key, s))
        .collect()
}

/// Key/value lines of one `[material]` block, with their line numbers.
#[derive(Default)]
struct MaterialBlock {
    line: usize,
    name: String,
    model: Option<(usize, String)>,
    scalars: BTreeMap<String, (usize, f64)>,
    oscillators: Vec<(usize, Oscillator<f64>)>,
    mu_oscillators: Vec<(usize, Oscillator<f64>)>,
}

impl MaterialBlock {
    fn take(&mut self, key: &str) -> Option<f64> {
        self.scalars.remove(key).map(|(_, v)| v)
    }

    fn require(&mut self, key: &str) -> Result<f64, CliError> {
        let model = self.model.as_ref().map(|m| m.1.clone()).unwrap_or_default();
        self.take(key).ok_or_else(|| {
            perr(
                self.line,
                format!("material '{}': model '{model}' needs '{key}'", self.name),
            )
        })
    }

    fn build(mut self) -> Result<(String, MaterialModel64), CliError> {
        let (model_line, model) = self
            .model
            .clone()
            .ok_or_else(|| perr(self.line, format!("material '{}' has no 'model'", self.name)))?;
        let built = match model.as_str() {
            "vacuum" => MaterialModel64::Vacuum,
            "perfect-conductor" => MaterialModel64::PerfectConductor,
            "constant" => {
                let eps = self.require("eps")?;
                let mu = self.take("mu").unwrap_or(1.0);
                MaterialModel64::constant(eps, mu)
            }
            "drude" => {
                let wp = self.require("omega_p")?;
                let g = self.require("gamma")?;
                MaterialModel64::drude(wp, g)
            }
            "plasma" => MaterialModel64::plasma(self.require("omega_p")?),
            "lorentz" => {
                let terms = self.oscillators.drain(..).map(|(_, o)| o).collect();
                let mu: Vec<_> = self.mu_oscillators.drain(..).map(|(_, o)| o).collect();
                MaterialModel64::lorentz(terms, if mu.is_empty() { None } else { Some(mu) })
            }
            other => {
                return Err(perr(
                    model_line,
                    format!(
                        "unknown model '{other}' (expected vacuum, constant, drude, plasma, \
                         lorentz or perfect-conductor)"
                    ),
                ))
            }
        };
        let leftover = self
            .scalars
            .iter()
            .map(|(k, (l, _))| (*l, k.clone()))
            .chain(self.oscillators.iter().map(|(l, _)| (*l, "oscillator".into())))
            .chain(self.mu_oscillators.iter().map(|(l, _)| (*l, "mu_oscillator".into())))
            .min();
        if let Some((line, key)) = leftover {
            return Err(perr(
                line,
                format!("'{key}' does not apply to model '{model}' (material '{}')", self.name),
            ));
        }
        built
            .validate()
            .map_err(|e| perr(self.line, format!("material '{}': {e}", self.name)))?;
        Ok((self.name, built))
    }
}

fn finish_material(
    block: &mut Option<MaterialBlock>,
    materials: &mut Vec<(String, MaterialModel64)>,
) -> Result<(), CliError> {
    if let Some(b) = block.take() {
        let line = b.line;
        let (name, m) = b.build()?;
        if materials.iter().any(|(n, _)| *n == name) {
            return Err(perr(line, format!("material '{name}' is defined twice")));
        }
        materials.push((name, m));
    }
    Ok(())
}

fn oscillator(line: usize, key: &str, text: &str) -> Result<Oscillator<f64>, CliError> {
    match numbers(line, key, text)?.as_slice() {
        &[f, w, g] => Ok(Oscillator::new(f, w, g)),
        _ => Err(perr(line, format!("'{key}' needs three numbers: strength resonance damping"))),
    }
}

/// Parses and fully validates a run description.
pub fn parse_runspec(text: &str) -> Result<RunSpec, CliError> {
    let mut section = Section::None;
    let mut materials: Vec<(String, MaterialModel64)> = Vec::new();
    let mut block: Option<MaterialBlock> = None;
    let mut layers: Vec<(usize, String, Thickness<f64>)> = Vec::new();
    let mut gap: Option<(usize, usize)> = None;
    let mut sweep: Option<(usize, Sweep)> = None;
    let mut temperatures: Option<Vec<f64>> = None;
    let mut settings = QuadratureSettings64::default();
    let mut output = None;
    let mut seen_run_keys: BTreeMap<String, usize> = BTreeMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(header) = content.strip_prefix('[') {
            let header = header
                .strip_suffix(']')
                .ok_or_else(|| perr(line, "section header is missing ']'"))?
                .trim();
            finish_material(&mut block, &mut materials)?;
            let mut words = header.split_whitespace();
            section = match (words.next(), words.next(), words.next()) {
                (Some("material"), Some(name), None) => {
                    block = Some(MaterialBlock {
                        line,
                        name: name.to_string(),
                        ..Default::default()
                    });
                    Section::Material
                }
                (Some("stack"), None, None) => Section::Stack,
                (Some("run"), None, None) => Section::Run,
                _ => {
                    return Err(perr(
                        line,
                        format!(
                            "unknown section '[{header}]' (expected [material NAME], [stack] or [run])"
                        ),
                    ))
                }
            };
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or_else(|| perr(line, format!("expected 'key = value', got '{content}'")))?;

        match section {
            Section::None => {
                return Err(perr(line, format!("'{key}' appears before any section")));
            }
            Section::Material => {
                let b = block.as_mut().expect("material section has a block");
                match key {
                    "model" => {
                        if b.model.is_some() {
                            return Err(perr(line, "'model' given twice"));
                        }
                        b.model = Some((line, value.to_string()));
                    }
                    "eps" | "mu" | "omega_p" | "gamma" => {
                        let v = number(line, key, value)?;
                        if b.scalars.insert(key.to_string(), (line, v)).is_some() {
                            return Err(perr(line, format!("'{key}' given twice")));
                        }
                    }
                    "oscillator" => b.oscillators.push((line, oscillator(line, key, value)?)),
                    "mu_oscillator" => {
                        b.mu_oscillators.push((line, oscillator(line, key, value)?))
                    }
                    _ => {
                        return Err(perr(
                            line,
                            format!("unknown material key '{key}' (material '{}')", b.name),
                        ))
                    }
                }
            }
            Section::Stack => match key {
                "layer" => {
                    let words: Vec<&str> = value.split_whitespace().collect();
                    let (name, thick) = match words.as_slice() {
                        &[n, t] => (n, t),
                        _ => {
                            return Err(perr(
                                line,
                                "'layer' needs a material name and a thickness or 'semi-infinite'",
                            ))
                        }
                    };
                    let thickness = if thick == "semi-infinite" {
                        Thickness::SemiInfinite
                    } else {
                        Thickness::Finite(number(line, "layer", thick)?)
                    };
                    layers.push((line, name.to_string(), thickness));
                }
                "gap" => {
                    if gap.is_some() {
                        return Err(perr(line, "'gap' given twice"));
                    }
                    gap = Some((line, count(line, key, value)?));
                }
                _ => return Err(perr(line, format!("unknown stack key '{key}'"))),
            },
            Section::Run => {
                if let Some(first) = seen_run_keys.insert(key.to_string(), line) {
                    return Err(perr(line, format!("'{key}' already given on line {first}")));
                }
                match key {
                    "sweep" => {
                        if sweep.is_some() {
                            return Err(perr(line, "give either 'sweep' or 'sweep_log', not both"));
                        }
                        sweep = Some((line, Sweep::List(numbers(line, key, value)?)));
                    }
                    "sweep_log" => {
                        if sweep.is_some() {
                            return Err(perr(line, "give either 'sweep' or 'sweep_log', not both"));
                        }
                        let parts: Vec<&str> = value.split_whitespace().collect();
                        let s = match parts.as_slice() {
                            &[a, b, n] => Sweep::Log {
                                start: number(line, key, a)?,
                                stop: number(line, key, b)?,
                                count: count(line, key, n)?,
                            },
                            _ => return Err(perr(line, "'sweep_log' needs START STOP COUNT")),
                        };
                        sweep = Some((line, s));
                    }
                    "temperatures" => temperatures = Some(numbers(line, key, value)?),
                    "rel_tol" => settings.rel_tol = number(line, key, value)?,
                    "abs_tol" => settings.abs_tol = number(line, key, value)?,
                    "max_subdivisions" => settings.max_subdivisions = count(line, key, value)?,
                    "matsubara_rel_cutoff" => {
                        settings.matsubara_rel_cutoff = number(line, key, value)?
                    }
                    "matsubara_max_terms" => {
                        settings.matsubara_max_terms = count(line, key, value)?
                    }
                    "output" => {
                        if value.is_empty() {
                            return Err(perr(line, "'output' needs a path"));
                        }
                        output = Some(PathBuf::from(value));
                    }
                    _ => return Err(perr(line, format!("unknown run key '{key}'"))),
                }
            }
        }
    }
    finish_material(&mut block, &mut materials)?;

    // semantic checks
    if layers.is_empty() {
        return Err(CliError::Validation("no [stack] layers given".into()));
    }
    let (gap_line, gap) =
        gap.ok_or_else(|| CliError::Validation("[stack] has no 'gap = INDEX'".into()))?;
    for (line, name, _) in &layers {
        if !materials.iter().any(|(n, _)| n == name) {
            return Err(perr(*line, format!("layer refers to unknown material '{name}'")));
        }
    }
    let (sweep_line, sweep) = sweep.ok_or_else(|| {
        CliError::Validation("[run] needs 'sweep' or 'sweep_log'".into())
    })?;
    match &sweep {
        Sweep::List(v) if v.is_empty() => {
            return Err(perr(sweep_line, "the sweep is empty"));
        }
        Sweep::List(v) => {
            if let Some(bad) = v.iter().find(|a| !(a.is_finite() && **a > 0.0)) {
                return Err(perr(sweep_line, format!("sweep widths must be > 0, got {bad}")));
            }
        }
        Sweep::Log { start, stop, count } => {
            if *count == 0 {
                return Err(perr(sweep_line, "the sweep is empty (count = 0)"));
            }
            if !(start.is_finite() && stop.is_finite() && *start > 0.0 && *stop > 0.0) {
                return Err(perr(sweep_line, "log sweep bounds must be > 0"));
            }
        }
    }
    let temperatures = temperatures.unwrap_or_else(|| vec![0.0]);
    if temperatures.is_empty() {
        return Err(perr(seen_run_keys["temperatures"], "no temperatures given"));
    }
    if let Some(bad) = temperatures.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
        return Err(perr(
            seen_run_keys["temperatures"],
            format!("temperatures must be >= 0, got {bad}"),
        ));
    }
    settings
        .validate()
        .map_err(|e| CliError::Validation(e.to_string()))?;

    let spec = RunSpec {
        materials,
        layers: layers
            .iter()
            .map(|(_, name, t)| LayerSpec {
                material: name.clone(),
                thickness: *t,
            })
            .collect(),
        gap,
        sweep,
        temperatures,
        settings,
        output,
    };
    let diagnostics = planar_casimir::stack::validate(&spec.stack_layers()?, gap);
    if let Some(d) = diagnostics.iter().find(|d| d.is_error()) {
        let line = match d.layer {
            Some(i) => layers[i].0,
            None => gap_line,
        };
        return Err(perr(line, d.to_string()));
    }
    Ok(spec)
}

fn write_oscillators(out: &mut String, key: &str, terms: &[Oscillator<f64>]) {
    for o in terms {
        let _ = writeln!(out, "{key} = {:?} {:?} {:?}", o.strength, o.resonance, o.damping);
    }
}

/// Canonical text form; `parse_runspec(&serialize(s)) == s`.
pub fn serialize(spec: &RunSpec) -> String {
    let mut out = String::new();
    for (name, m) in &spec.materials {
        let _ = writeln!(out, "[material {name}]");
        match m {
            MaterialModel64::Vacuum => out.push_str("model = vacuum\n"),
            MaterialModel64::PerfectConductor => out.push_str("model = perfect-conductor\n"),
            MaterialModel64::Constant { eps, mu } => {
                let _ = writeln!(out, "model = constant\neps = {eps:?}\nmu = {mu:?}");
            }
            MaterialModel64::Drude { omega_p, gamma } => {
                let _ = writeln!(out, "model = drude\nomega_p = {omega_p:?}\ngamma = {gamma:?}");
            }
            MaterialModel64::Plasma { omega_p } => {
                let _ = writeln!(out, "model = plasma\nomega_p = {omega_p:?}");
            }
            MaterialModel64::LorentzOscillators { terms, mu_terms } => {
                out.push_str("model = lorentz\n");
                write_oscillators(&mut out, "oscillator", terms);
                if let Some(mu) = mu_terms {
                    write_oscillators(&mut out, "mu_oscillator", mu);
                }
            }
        }
        out.push('\n');
    }
    out.push_str("[stack]\n");
    for l in &spec.layers {
        match l.thickness {
            Thickness::SemiInfinite => {
                let _ = writeln!(out, "layer = {} semi-infinite", l.material);
            }
            Thickness::Finite(t) => {
                let _ = writeln!(out, "layer = {} {t:?}", l.material);
            }
        }
    }
    let _ = writeln!(out, "gap = {}\n", spec.gap);
    out.push_str("[run]\n");
    match &spec.sweep {
        Sweep::List(v) => {
            let items: Vec<String> = v.iter().map(|x| format!("{x:?}")).collect();
            let _ = writeln!(out, "sweep = {}", items.join(" "));
        }
        Sweep::Log { start, stop, count } => {
            let _ = writeln!(out, "sweep_log = {start:?} {stop:?} {count}");
        }
    }
    let temps: Vec<String> = spec.temperatures.iter().map(|x| format!("{x:?}")).collect();
    let s = &spec.settings;
    let _ = writeln!(out, "temperatures = {}", temps.join(" "));
    let _ = writeln!(out, "rel_tol = {:?}", s.rel_tol);
    let _ = writeln!(out, "abs_tol = {:?}", s.abs_tol);
    let _ = writeln!(out, "max_subdivisions = {}", s.max_subdivisions);
    let _ = writeln!(out, "matsubara_rel_cutoff = {:?}", s.matsubara_rel_cutoff);
    let _ = writeln!(out, "matsubara_max_terms = {}", s.matsubara_max_terms);
    if let Some(p) = &spec.output {
        let _ = writeln!(out, "output = {}", p.display());
    }
    out
}
