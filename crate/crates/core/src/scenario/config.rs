//! Run configuration: a TOML document with `[material]`, `[density]`, `[drive]` and `[beam]`
//! sections. A file only needs the keys it changes; everything else comes from the built-in
//! scenario it names.

use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::beam::{BeamMesh, BeamModel, BoundaryData, Signal, StepperConfig};
use crate::constitutive::{HermiteTable, Material, MaterialParams, ShapeFunction};
use crate::error::{Error, Result};
use crate::hysteresis::{PreisachDensity, RGrid};

pub const SCENARIOS: [&str; 5] = ["bipolar-linear", "stress-linear", "bipolar-quartic", "stress-quartic", "beam-demo"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShapeKind {
    Linear,
    Quartic,
    Table,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MaterialSection {
    pub c: f64,
    pub e: f64,
    pub kappa: f64,
    pub nu: f64,
    pub rho: f64,
    pub shape: ShapeKind,
    /// Rows `[x, f, f']` for `shape = "table"`.
    pub shape_table: Vec<[f64; 3]>,
}

impl Default for MaterialSection {
    fn default() -> Self {
        MaterialSection {
            c: 1.0,
            e: 0.0,
            kappa: 0.01,
            nu: 0.0,
            rho: 1.0,
            shape: ShapeKind::Linear,
            shape_table: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DensityKind {
    Projection,
    Prandtl,
    Zero,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DensitySection {
    pub kind: DensityKind,
    /// Rows `[r, mu]` for `kind = "prandtl"`.
    pub stack: Vec<[f64; 2]>,
    /// Memory levels of the r-grid.
    pub levels: usize,
    pub cutoff: f64,
}

impl Default for DensitySection {
    fn default() -> Self {
        DensitySection { kind: DensityKind::Projection, stack: Vec::new(), levels: 1000, cutoff: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DriveMode {
    Field,
    Stress,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Waveform {
    Triangle,
    Sine,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DriveSection {
    pub mode: DriveMode,
    pub waveform: Waveform,
    pub amplitude: f64,
    pub periods: usize,
    pub samples_per_period: usize,
    /// Stress mode: peak field of the poling ramp.
    pub pole_amplitude: f64,
    pub pole_samples: usize,
    /// Stress mode: field left applied after poling (the ramp returns to this value).
    pub hold_field: f64,
    /// Stress mode: magnitude of the compressive ramp `0 -> -stress_max`.
    pub stress_max: f64,
    pub stress_samples: usize,
}

impl Default for DriveSection {
    fn default() -> Self {
        DriveSection {
            mode: DriveMode::Field,
            waveform: Waveform::Triangle,
            amplitude: 1.0,
            periods: 3,
            samples_per_period: 2000,
            pole_amplitude: 1.0,
            pole_samples: 2000,
            hold_field: 0.0,
            stress_max: 1.0,
            stress_samples: 2000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SignalSpec {
    Constant {
        value: f64,
    },
    Sine {
        amplitude: f64,
        period: f64,
        #[serde(default)]
        offset: f64,
    },
    Samples {
        t: Vec<f64>,
        y: Vec<f64>,
    },
}

impl SignalSpec {
    pub fn to_signal(&self) -> Result<Signal<f64>> {
        let s = match self {
            SignalSpec::Constant { value } => Signal::Constant(*value),
            SignalSpec::Sine { amplitude, period, offset } => {
                Signal::Sine { amplitude: *amplitude, period: *period, offset: *offset }
            }
            SignalSpec::Samples { t, y } => Signal::Samples { t: t.clone(), y: y.clone() },
        };
        s.validate()?;
        Ok(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BeamSection {
    pub length: f64,
    pub elements: usize,
    pub dt: f64,
    pub t_end: f64,
    pub picard_tol: f64,
    pub picard_max: usize,
    pub lumped_mass: bool,
    pub output_stride: usize,
    /// Memory levels per element (overrides `density.levels` for the beam).
    pub levels: usize,
    pub r: SignalSpec,
    pub s: SignalSpec,
}

impl Default for BeamSection {
    fn default() -> Self {
        BeamSection {
            length: 1.0,
            elements: 64,
            dt: 1e-3,
            t_end: 2.0,
            picard_tol: 1e-10,
            picard_max: 50,
            lumped_mass: false,
            output_stride: 50,
            levels: 200,
            r: SignalSpec::Sine { amplitude: 0.55, period: 1.0, offset: 0.0 },
            s: SignalSpec::Constant { value: 0.0 },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: String,
    pub seed: u64,
    pub out_dir: Option<PathBuf>,
    pub material: MaterialSection,
    pub density: DensitySection,
    pub drive: DriveSection,
    pub beam: BeamSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            scenario: "bipolar-linear".into(),
            seed: 0,
            out_dir: None,
            material: MaterialSection::default(),
            density: DensitySection::default(),
            drive: DriveSection::default(),
            beam: BeamSection::default(),
        }
    }
}

fn merge(base: &mut toml::Value, over: toml::Value) {
    match (base, over) {
        (toml::Value::Table(b), toml::Value::Table(o)) => {
            for (k, v) in o {
                match b.get_mut(&k) {
                    // signal specs are replaced whole, a different kind has different keys
                    Some(slot) if k != "r" && k != "s" => merge(slot, v),
                    _ => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}

impl RunConfig {
    /// Defaults of a built-in scenario.
    pub fn builtin(name: &str) -> Result<Self> {
        let mut cfg = RunConfig { scenario: name.to_string(), ..RunConfig::default() };
        match name {
            "bipolar-linear" => {}
            "bipolar-quartic" => cfg.material.shape = ShapeKind::Quartic,
            "stress-linear" | "stress-quartic" => {
                cfg.drive.mode = DriveMode::Stress;
                cfg.drive.hold_field = 0.2;
                if name == "stress-quartic" {
                    cfg.material.shape = ShapeKind::Quartic;
                }
            }
            "beam-demo" => {
                cfg.material.nu = 0.01;
                cfg.beam.elements = 32;
            }
            other => {
                return Err(Error::Config(format!("unknown scenario '{other}' (known: {})", SCENARIOS.join(", "))))
            }
        }
        Ok(cfg)
    }

    /// Parses a configuration text. `scenario` (from the text, else `fallback`) selects the
    /// defaults the text is layered on.
    pub fn parse(text: &str, fallback: Option<&str>) -> Result<Self> {
        let over: toml::Value = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let name = over
            .get("scenario")
            .and_then(|v| v.as_str())
            .map(str::to_string)
            .or_else(|| fallback.map(str::to_string))
            .unwrap_or_else(|| "bipolar-linear".to_string());
        let base_cfg = Self::builtin(&name)?;
        let mut base = toml::Value::try_from(&base_cfg).map_err(|e| Error::Config(e.to_string()))?;
        merge(&mut base, over);
        let cfg: RunConfig = base.try_into().map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path, fallback: Option<&str>) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text, fallback)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        Self::builtin(&self.scenario)?;
        let d = &self.drive;
        if d.samples_per_period < 4 || d.periods == 0 || d.pole_samples < 2 || d.stress_samples == 0 {
            return Err(Error::Config("drive sample counts are too small".into()));
        }
        if self.density.levels == 0 || self.beam.levels == 0 {
            return Err(Error::Config("memory grid needs at least one level".into()));
        }
        let material = self.material()?;
        self.point_grid(&material)?;
        Ok(())
    }

    pub fn shape(&self) -> Result<ShapeFunction<f64>> {
        Ok(match self.material.shape {
            ShapeKind::Linear => ShapeFunction::Linear,
            ShapeKind::Quartic => ShapeFunction::Quartic,
            ShapeKind::Table => ShapeFunction::Table(HermiteTable::new(
                self.material.shape_table.iter().map(|r| (r[0], r[1], r[2])).collect(),
            )?),
        })
    }

    pub fn density(&self) -> Result<PreisachDensity<f64>> {
        Ok(match self.density.kind {
            DensityKind::Projection => PreisachDensity::Projection,
            DensityKind::Zero => PreisachDensity::Zero,
            DensityKind::Prandtl => {
                let pairs: Vec<(f64, f64)> = self.density.stack.iter().map(|p| (p[0], p[1])).collect();
                PreisachDensity::prandtl(&pairs)?
            }
        })
    }

    pub fn material(&self) -> Result<Material<f64>> {
        let m = &self.material;
        let params = MaterialParams { c: m.c, e: m.e, kappa: m.kappa, nu: m.nu, rho: m.rho, shape: self.shape()? };
        Material::new(params, self.density()?)
    }

    pub fn point_grid(&self, material: &Material<f64>) -> Result<Arc<RGrid<f64>>> {
        material.grid(self.density.levels, self.density.cutoff)
    }

    pub fn beam_model(&self) -> Result<BeamModel<f64>> {
        let material = self.material()?;
        let grid = material.grid(self.beam.levels, self.density.cutoff)?;
        Ok(BeamModel { mesh: BeamMesh::new(self.beam.length, self.beam.elements)?, material, grid })
    }

    pub fn stepper(&self) -> StepperConfig<f64> {
        let b = &self.beam;
        StepperConfig {
            dt: b.dt,
            picard_tol: b.picard_tol,
            picard_max: b.picard_max,
            lumped_mass: b.lumped_mass,
            output_stride: b.output_stride,
        }
    }

    pub fn boundary(&self) -> Result<BoundaryData<f64>> {
        Ok(BoundaryData { r: self.beam.r.to_signal()?, s: self.beam.s.to_signal()? })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_validate_and_round_trip() {
        for name in SCENARIOS {
            let cfg = RunConfig::builtin(name).unwrap();
            cfg.validate().unwrap();
            let text = cfg.to_toml().unwrap();
            assert_eq!(RunConfig::parse(&text, None).unwrap(), cfg);
        }
        assert!(RunConfig::builtin("nope").is_err());
    }

    #[test]
    fn partial_file_layers_on_scenario() {
        let text =
            "scenario = \"stress-quartic\"\n[material]\nkappa = 0.02\n[beam.s]\nkind = \"constant\"\nvalue = 0.1\n";
        let cfg = RunConfig::parse(text, None).unwrap();
        assert_eq!(cfg.material.kappa, 0.02);
        assert_eq!(cfg.material.shape, ShapeKind::Quartic);
        assert_eq!(cfg.drive.mode, DriveMode::Stress);
        assert_eq!(cfg.beam.s, SignalSpec::Constant { value: 0.1 });
    }

    #[test]
    fn rejects_bad_input() {
        assert!(RunConfig::parse("[material]\nbogus = 1\n", None).is_err());
        assert!(RunConfig::parse("[material]\nkappa = -1.0\n", None).is_err());
        assert!(RunConfig::parse("scenario = \"x\"", None).is_err());
        assert!(RunConfig::parse("[density]\nkind = \"prandtl\"\n", None).is_err());
    }
}
