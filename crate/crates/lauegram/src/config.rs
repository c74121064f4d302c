//! Scene configuration: a TOML document describing beam, crystal, detector,
//! phase objects per path, and the optional reconstruction / sweep /
//! analysis blocks. Parsing applies and records all defaults, rejects
//! unknown keys (listing every one), and validates invariants with
//! field-level messages. `parse → serialize → parse` is idempotent.

use crate::analysis::CoherenceAreaConvention;
use crate::dyndiff::CrystalParams;
use crate::error::{Error, Result};
use crate::export::ImageFormat;
use crate::grid::GridGeometry;
use crate::interferogram::{DetectorSpec, Port};
use crate::phase_objects::{
    lambda_thickness, Material, ObjectShape, Orientation, PhaseObjectSpec,
};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SceneConfig {
    pub beam: BeamConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub crystal: Option<CrystalConfig>,
    #[serde(default)]
    pub detector: DetectorConfig,
    #[serde(default)]
    pub simulation: SimulationConfig,
    /// Objects in the upper path (I).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub path1: Vec<ObjectConfig>,
    /// Objects in the lower path (II).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub path2: Vec<ObjectConfig>,
    /// Multi-panel figures: each panel overrides the object lists. When
    /// empty, the top-level paths form a single implicit panel, or a
    /// closed-form fringe panel when `oam_panels` is set.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub panels: Vec<PanelConfig>,
    /// Closed-form fringe-model panels (topological charges to render).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub oam_panels: Vec<OamPanelConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reconstruction: Option<ReconstructionConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    #[serde(default)]
    pub analysis: AnalysisConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BeamConfig {
    /// Neutron wavelength, m.
    pub wavelength: f64,
    /// Beam flux, neutrons/(m² s).
    #[serde(default = "default_flux")]
    pub flux: f64,
    /// Horizontal transverse coherence length, m.
    #[serde(default = "default_sigma_x")]
    pub sigma_x: f64,
    /// Vertical transverse coherence length, m.
    #[serde(default = "default_sigma_z")]
    pub sigma_z: f64,
}

fn default_flux() -> f64 {
    1e7
}
fn default_sigma_x() -> f64 {
    5e-6
}
fn default_sigma_z() -> f64 {
    8e-8
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrystalConfig {
    pub bragg_angle: f64,
    pub plate_thickness: f64,
    pub fourier_potential: f64,
    pub neutron_energy: f64,
    #[serde(default = "default_asymmetry")]
    pub asymmetry_cos: f64,
    pub lattice_spacing: f64,
}

fn default_asymmetry() -> f64 {
    1.0
}

impl CrystalConfig {
    pub fn to_params(&self, wavelength: f64) -> CrystalParams {
        CrystalParams {
            wavelength,
            bragg_angle: self.bragg_angle,
            plate_thickness: self.plate_thickness,
            fourier_potential: self.fourier_potential,
            neutron_energy: self.neutron_energy,
            asymmetry_cos: self.asymmetry_cos,
            lattice_spacing: self.lattice_spacing,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectorConfig {
    /// Detector pixel pitch, m.
    #[serde(default = "default_pixel_pitch")]
    pub pixel_pitch: f64,
    #[serde(default = "default_detector_side")]
    pub width: usize,
    #[serde(default = "default_detector_side")]
    pub height: usize,
    /// Output ports to record, at most one detector per port.
    #[serde(default = "default_ports")]
    pub ports: Vec<Port>,
}

fn default_pixel_pitch() -> f64 {
    100e-6
}
fn default_detector_side() -> usize {
    200
}
fn default_ports() -> Vec<Port> {
    vec![Port::O, Port::G]
}

impl Default for DetectorConfig {
    fn default() -> Self {
        DetectorConfig {
            pixel_pitch: default_pixel_pitch(),
            width: default_detector_side(),
            height: default_detector_side(),
            ports: default_ports(),
        }
    }
}

impl DetectorConfig {
    pub fn spec(&self, port: Port) -> DetectorSpec {
        DetectorSpec {
            pixel_pitch: self.pixel_pitch,
            width: self.width,
            height: self.height,
            port,
        }
    }

    /// Detector field centered on the beam axis.
    pub fn field_geometry(&self) -> GridGeometry {
        GridGeometry::centered(self.width, self.height, self.pixel_pitch)
    }
}

/// Camera model for the recorded pattern: an imaging camera keeps spatial
/// structure; an integrating counter records only the total rate, rendering
/// every panel as its spatial mean.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CameraPosition {
    #[default]
    Imaging,
    Integrating,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    /// Phase-flag offset φ₀, rad.
    #[serde(default)]
    pub phi0: f64,
    /// Fine samples per detector pixel (per axis).
    #[serde(default = "default_supersample")]
    pub supersample: usize,
    #[serde(default)]
    pub camera: CameraPosition,
}

fn default_supersample() -> usize {
    4
}

impl Default for SimulationConfig {
    fn default() -> Self {
        SimulationConfig {
            phi0: 0.0,
            supersample: default_supersample(),
            camera: CameraPosition::default(),
        }
    }
}

/// Material reference: a named preset, or explicit constants.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaterialConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coherent_scattering_length: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atom_density: Option<f64>,
}

impl Default for MaterialConfig {
    fn default() -> Self {
        MaterialConfig {
            preset: Some("aluminum".into()),
            name: None,
            coherent_scattering_length: None,
            atom_density: None,
        }
    }
}

impl MaterialConfig {
    pub fn resolve(&self) -> Result<Material> {
        if let Some(preset) = &self.preset {
            if self.coherent_scattering_length.is_some() || self.atom_density.is_some() {
                return Err(Error::Config(
                    "material: give either `preset` or explicit constants, not both".into(),
                ));
            }
            return match preset.to_ascii_lowercase().as_str() {
                "aluminum" | "al" => Ok(Material::aluminum()),
                "silicon" | "si" => Ok(Material::silicon()),
                other => Err(Error::Config(format!("unknown material preset `{other}`"))),
            };
        }
        match (self.coherent_scattering_length, self.atom_density) {
            (Some(b), Some(n)) => {
                let m = Material {
                    name: self.name.clone().unwrap_or_else(|| "custom".into()),
                    coherent_scattering_length: b,
                    atom_density: n,
                };
                m.validate()?;
                Ok(m)
            }
            _ => Err(Error::Config(
                "material needs `preset` or both `coherent_scattering_length` and `atom_density`"
                    .into(),
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObjectConfig {
    /// "spiral_plate", "wedge" or "slab".
    pub kind: String,
    /// Transverse center (u0, v0), m.
    #[serde(default)]
    pub center: (f64, f64),
    #[serde(default)]
    pub material: MaterialConfig,
    // Spiral plate fields.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diameter: Option<f64>,
    /// Thickness increase over one turn; defaults to the 2π-thickness D_λ
    /// of the material at the beam wavelength.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step_height: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_thickness: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub turns: Option<u32>,
    // Wedge fields.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub opening_angle: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientation: Option<Orientation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extent: Option<f64>,
    // Slab fields.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thickness: Option<f64>,
}

impl ObjectConfig {
    /// Fill in wavelength-dependent defaults so the recorded config is
    /// fully explicit.
    fn resolve_defaults(&mut self, wavelength: f64) -> Result<()> {
        if self.kind == "spiral_plate" {
            let material = self.material.resolve()?;
            if self.step_height.is_none() {
                self.step_height = Some(lambda_thickness(&material, wavelength)?);
            }
            if self.base_thickness.is_none() {
                self.base_thickness = Some(1e-3);
            }
            if self.turns.is_none() {
                self.turns = Some(1);
            }
            if self.diameter.is_none() {
                self.diameter = Some(0.015);
            }
        }
        Ok(())
    }

    pub fn to_spec(&self) -> Result<PhaseObjectSpec> {
        let material = self.material.resolve()?;
        let shape = match self.kind.as_str() {
            "spiral_plate" => ObjectShape::SpiralPlate {
                diameter: self
                    .diameter
                    .ok_or_else(|| Error::Config("spiral_plate: `diameter` is required".into()))?,
                step_height: self.step_height.ok_or_else(|| {
                    Error::Config("spiral_plate: `step_height` unresolved".into())
                })?,
                base_thickness: self.base_thickness.ok_or_else(|| {
                    Error::Config("spiral_plate: `base_thickness` unresolved".into())
                })?,
                turns: self.turns.unwrap_or(1),
            },
            "wedge" => ObjectShape::Wedge {
                opening_angle: self.opening_angle.ok_or_else(|| {
                    Error::Config("wedge: `opening_angle` is required".into())
                })?,
                orientation: self.orientation.unwrap_or(Orientation::Vertical),
                extent: self
                    .extent
                    .ok_or_else(|| Error::Config("wedge: `extent` is required".into()))?,
            },
            "slab" => ObjectShape::Slab {
                thickness: self
                    .thickness
                    .ok_or_else(|| Error::Config("slab: `thickness` is required".into()))?,
                extent: self.extent,
            },
            other => {
                return Err(Error::Config(format!(
                    "unknown object kind `{other}` (expected spiral_plate, wedge or slab)"
                )))
            }
        };
        let spec = PhaseObjectSpec {
            shape,
            center: self.center,
            material,
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PanelConfig {
    pub id: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub path1: Vec<ObjectConfig>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub path2: Vec<ObjectConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi0: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OamPanelConfig {
    pub id: String,
    /// Topological charge q.
    pub charge: i32,
    /// Fringe period on the detector, m.
    #[serde(default = "default_fringe_period")]
    pub fringe_period: f64,
    #[serde(default)]
    pub theta: f64,
    #[serde(default = "default_half")]
    pub mean: f64,
    #[serde(default = "default_half")]
    pub modulation: f64,
    /// Global pattern rotation, rad. For the two-path synthesis a global
    /// rotation is equivalent to a constant phase shift (use `phi0`).
    #[serde(default)]
    pub rotation: f64,
}

fn default_fringe_period() -> f64 {
    1e-3
}
fn default_half() -> f64 {
    0.5
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionConfig {
    /// λ·d in the same squared unit as the pitches below (default: mm²).
    #[serde(default = "default_lambda_d")]
    pub lambda_d: f64,
    #[serde(default = "default_recon_n")]
    pub n: usize,
    #[serde(default = "default_one")]
    pub delta_x: f64,
    #[serde(default = "default_one")]
    pub delta_y: f64,
    /// Window applied before transforming: "none" (default) or "hann".
    #[serde(default)]
    pub window: WindowKind,
    /// Optional CSV interferogram to reconstruct instead of simulating.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input_csv: Option<String>,
}

fn default_lambda_d() -> f64 {
    70.0
}
fn default_recon_n() -> usize {
    100
}
fn default_one() -> f64 {
    1.0
}

impl Default for ReconstructionConfig {
    fn default() -> Self {
        ReconstructionConfig {
            lambda_d: default_lambda_d(),
            n: default_recon_n(),
            delta_x: default_one(),
            delta_y: default_one(),
            window: WindowKind::default(),
            input_csv: None,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WindowKind {
    #[default]
    None,
    Hann,
}

/// 1D sweep specification: `kind` is "rocking_curve", "pendelloesung" or
/// "phase_scan". A flat struct keeps every key visible to unknown-key
/// detection.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub kind: String,
    /// Thickness parameter; falls back to the crystal block when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a1: Option<f64>,
    #[serde(default = "default_y_lo")]
    pub y_min: f64,
    #[serde(default = "default_y_hi")]
    pub y_max: f64,
    #[serde(default)]
    pub y: f64,
    #[serde(default = "default_a1_lo")]
    pub a1_min: f64,
    #[serde(default = "default_a1_hi")]
    pub a1_max: f64,
    #[serde(default = "default_one")]
    pub psi0_sq: f64,
    #[serde(default)]
    pub chi_min: f64,
    #[serde(default = "default_chi_hi")]
    pub chi_max: f64,
    #[serde(default = "default_samples")]
    pub samples: usize,
}

fn default_y_lo() -> f64 {
    -10.0
}
fn default_y_hi() -> f64 {
    10.0
}
fn default_a1_lo() -> f64 {
    0.05
}
fn default_a1_hi() -> f64 {
    20.0
}
fn default_chi_hi() -> f64 {
    4.0 * std::f64::consts::PI
}
fn default_samples() -> usize {
    1001
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisConfig {
    /// Coherent-aperture scale a for Fresnel numbers, m.
    #[serde(default = "default_aperture")]
    pub aperture: f64,
    /// Object-to-analyzer distances to evaluate, m.
    #[serde(default = "default_distances")]
    pub distances: Vec<f64>,
    /// Flight path from wedge to detector for the same-pixel verdict, m.
    #[serde(default = "default_flight_path")]
    pub flight_path: f64,
    /// Run duration for the capture estimate, hours.
    #[serde(default = "default_duration_hours")]
    pub duration_hours: f64,
    /// Assumed isotropic coherence length for the capture estimate, m.
    #[serde(default = "default_sigma_iso")]
    pub sigma_iso: f64,
    #[serde(default)]
    pub area_convention: CoherenceAreaConvention,
    /// tan α of the reference deflection wedge used when no wedge is in
    /// the scene.
    #[serde(default = "default_reference_wedge_tan")]
    pub reference_wedge_tan: f64,
    /// Relative lattice/fringe spacing mismatch for the Moiré estimate.
    #[serde(default = "default_moire_mismatch")]
    pub moire_mismatch: f64,
}

fn default_aperture() -> f64 {
    2e-6
}
fn default_distances() -> Vec<f64> {
    vec![0.05, 0.017]
}
fn default_flight_path() -> f64 {
    0.1
}
fn default_duration_hours() -> f64 {
    100.0
}
fn default_sigma_iso() -> f64 {
    1e-6
}
fn default_reference_wedge_tan() -> f64 {
    0.2058
}
fn default_moire_mismatch() -> f64 {
    1e-7
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            aperture: default_aperture(),
            distances: default_distances(),
            flight_path: default_flight_path(),
            duration_hours: default_duration_hours(),
            sigma_iso: default_sigma_iso(),
            area_convention: CoherenceAreaConvention::default(),
            reference_wedge_tan: default_reference_wedge_tan(),
            moire_mismatch: default_moire_mismatch(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutputConfig {
    /// Image format for emitted patterns.
    #[serde(default = "default_image_format")]
    pub image_format: ImageFormat,
    /// Whether to also emit full-precision CSV grids.
    #[serde(default = "default_true")]
    pub csv: bool,
    /// Whether to emit images at all (false = CSV only).
    #[serde(default = "default_true")]
    pub images: bool,
}

fn default_image_format() -> ImageFormat {
    ImageFormat::Png
}
fn default_true() -> bool {
    true
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            image_format: default_image_format(),
            csv: default_true(),
            images: default_true(),
        }
    }
}

impl SceneConfig {
    /// Fine (supersampled) grid geometry covering the detector field.
    pub fn fine_geometry(&self) -> GridGeometry {
        let ss = self.simulation.supersample.max(1);
        GridGeometry::centered(
            self.detector.width * ss,
            self.detector.height * ss,
            self.detector.pixel_pitch / ss as f64,
        )
    }

    /// Resolve wavelength-dependent defaults in place.
    fn resolve(&mut self) -> Result<()> {
        let wl = self.beam.wavelength;
        for obj in self
            .path1
            .iter_mut()
            .chain(self.path2.iter_mut())
            .chain(
                self.panels
                    .iter_mut()
                    .flat_map(|p| p.path1.iter_mut().chain(p.path2.iter_mut())),
            )
        {
            obj.resolve_defaults(wl)?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beam.wavelength > 0.0) {
            return Err(Error::Config(
                "beam.wavelength must be > 0 (meters)".into(),
            ));
        }
        if !(self.beam.flux > 0.0) {
            return Err(Error::Config("beam.flux must be > 0".into()));
        }
        if !(self.beam.sigma_x > 0.0 && self.beam.sigma_z > 0.0) {
            return Err(Error::Config("beam coherence lengths must be > 0".into()));
        }
        if !(self.detector.pixel_pitch > 0.0) {
            return Err(Error::Config("detector.pixel_pitch must be > 0".into()));
        }
        if self.detector.width < 1 || self.detector.height < 1 {
            return Err(Error::Config("detector must be at least 1x1".into()));
        }
        let mut seen = BTreeSet::new();
        for port in &self.detector.ports {
            if !seen.insert(port.label()) {
                return Err(Error::Config(format!(
                    "detector.ports lists port {} more than once (at most one detector per port)",
                    port.label()
                )));
            }
        }
        if self.detector.ports.is_empty() {
            return Err(Error::Config("detector.ports must not be empty".into()));
        }
        if self.simulation.supersample < 1 {
            return Err(Error::Config("simulation.supersample must be >= 1".into()));
        }
        if let Some(sweep) = &self.sweep {
            match sweep.kind.as_str() {
                "rocking_curve" | "pendelloesung" | "phase_scan" => {}
                other => {
                    return Err(Error::Config(format!(
                        "sweep.kind `{other}` unknown (expected rocking_curve, pendelloesung or phase_scan)"
                    )))
                }
            }
            if sweep.samples < 2 {
                return Err(Error::Config("sweep.samples must be >= 2".into()));
            }
        }
        // Object validity and footprint containment.
        let field = self.detector.field_geometry();
        let (u_lo, u_hi) = (field.origin_u, field.origin_u + field.width());
        let (v_lo, v_hi) = (field.origin_v, field.origin_v + field.height());
        let check_objects = |label: &str, objs: &[ObjectConfig]| -> Result<()> {
            for (idx, obj) in objs.iter().enumerate() {
                let spec = obj
                    .to_spec()
                    .map_err(|e| Error::Config(format!("{label}[{idx}]: {e}")))?;
                if matches!(spec.shape, ObjectShape::Slab { extent: None, .. }) {
                    continue; // sized to the field by the pipeline
                }
                let ((fu0, fu1), (fv0, fv1)) = spec.footprint();
                let eps = 1e-12;
                if fu0 < u_lo - eps || fu1 > u_hi + eps || fv0 < v_lo - eps || fv1 > v_hi + eps {
                    return Err(Error::Config(format!(
                        "{label}[{idx}] ({}) footprint exceeds the simulated field",
                        obj.kind
                    )));
                }
            }
            Ok(())
        };
        check_objects("path1", &self.path1)?;
        check_objects("path2", &self.path2)?;
        for panel in &self.panels {
            check_objects(&format!("panel `{}` path1", panel.id), &panel.path1)?;
            check_objects(&format!("panel `{}` path2", panel.id), &panel.path2)?;
        }
        let mut ids = BTreeSet::new();
        for panel in &self.panels {
            if !ids.insert(panel.id.as_str()) {
                return Err(Error::Config(format!("duplicate panel id `{}`", panel.id)));
            }
        }
        for panel in &self.oam_panels {
            if !ids.insert(panel.id.as_str()) {
                return Err(Error::Config(format!("duplicate panel id `{}`", panel.id)));
            }
            if !(panel.fringe_period > 0.0) {
                return Err(Error::Config(format!(
                    "oam panel `{}`: fringe_period must be > 0",
                    panel.id
                )));
            }
            if panel.modulation.abs() > panel.mean {
                return Err(Error::Config(format!(
                    "oam panel `{}`: modulation must not exceed mean",
                    panel.id
                )));
            }
        }
        if let Some(rc) = &self.reconstruction {
            if !(rc.lambda_d > 0.0) {
                return Err(Error::Config("reconstruction.lambda_d must be > 0".into()));
            }
            if rc.n < 2 {
                return Err(Error::Config("reconstruction.n must be >= 2".into()));
            }
            if !(rc.delta_x > 0.0 && rc.delta_y > 0.0) {
                return Err(Error::Config(
                    "reconstruction sample pitches must be > 0".into(),
                ));
            }
        }
        if !(self.analysis.aperture > 0.0) {
            return Err(Error::Config("analysis.aperture must be > 0".into()));
        }
        Ok(())
    }
}

/// Parse, resolve defaults, and validate a scene configuration. Unknown
/// keys are collected and reported together.
pub fn parse_config(text: &str) -> Result<SceneConfig> {
    let de = toml::de::Deserializer::new(text);
    let mut unknown: Vec<String> = Vec::new();
    let mut config: SceneConfig = serde_ignored::deserialize(de, |path| {
        unknown.push(path.to_string());
    })
    .map_err(|e| Error::Config(format!("parse failure: {e}")))?;
    if !unknown.is_empty() {
        return Err(Error::Config(format!(
            "unknown config keys: {}",
            unknown.join(", ")
        )));
    }
    config.resolve()?;
    config.validate()?;
    Ok(config)
}

/// Serialize a configuration back to TOML with all resolved defaults
/// recorded.
pub fn serialize_config(config: &SceneConfig) -> Result<String> {
    toml::to_string_pretty(config).map_err(|e| Error::Config(format!("serialize failure: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
[beam]
wavelength = 2.71e-10

[[path2]]
kind = "spiral_plate"
"#;

    #[test]
    fn minimal_config_fills_defaults() {
        let cfg = parse_config(MINIMAL).unwrap();
        assert_eq!(cfg.detector.pixel_pitch, 100e-6);
        assert_eq!(cfg.simulation.phi0, 0.0);
        assert_eq!(cfg.simulation.supersample, 4);
        assert!(cfg.path1.is_empty());
        let spp = &cfg.path2[0];
        assert_eq!(spp.diameter, Some(0.015));
        assert_eq!(spp.base_thickness, Some(1e-3));
        // step_height resolved to D_λ of aluminum at the beam wavelength.
        let d = spp.step_height.unwrap();
        assert!((d - 1.115547984218239e-4).abs() < 1e-12);
        let spec = spp.to_spec().unwrap();
        assert!(matches!(spec.shape, ObjectShape::SpiralPlate { .. }));
    }

    #[test]
    fn paper_scene_section_five() {
        let text = r#"
[beam]
wavelength = 2.71e-10

[detector]
width = 375
height = 375

[[path1]]
kind = "wedge"
opening_angle = 0.1111
extent = 0.0375

[[path2]]
kind = "spiral_plate"
turns = 2
"#;
        let cfg = parse_config(text).unwrap();
        let wedge = cfg.path1[0].to_spec().unwrap();
        match wedge.shape {
            ObjectShape::Wedge { orientation, .. } => {
                assert_eq!(orientation, Orientation::Vertical)
            }
            _ => panic!("expected wedge"),
        }
        let spp = cfg.path2[0].to_spec().unwrap();
        match spp.shape {
            ObjectShape::SpiralPlate { turns, .. } => assert_eq!(turns, 2),
            _ => panic!("expected spiral plate"),
        }
    }

    #[test]
    fn negative_wavelength_rejected_with_field_name() {
        let text = "[beam]\nwavelength = -1.0\n";
        let err = parse_config(text).unwrap_err();
        assert!(err.to_string().contains("beam.wavelength"));
    }

    #[test]
    fn unknown_keys_listed() {
        let text = r#"
[beam]
wavelength = 2.71e-10
wavelenght = 1.0

[detector]
pitch = 5.0
"#;
        let err = parse_config(text).unwrap_err().to_string();
        assert!(err.contains("beam.wavelenght"), "{err}");
        assert!(err.contains("detector.pitch"), "{err}");
    }

    #[test]
    fn round_trip_is_idempotent() {
        let cfg = parse_config(MINIMAL).unwrap();
        let text = serialize_config(&cfg).unwrap();
        let cfg2 = parse_config(&text).unwrap();
        assert_eq!(cfg, cfg2);
        let text2 = serialize_config(&cfg2).unwrap();
        assert_eq!(text, text2);
    }

    #[test]
    fn footprint_must_fit_field() {
        let text = r#"
[beam]
wavelength = 2.71e-10

[detector]
width = 100
height = 100

[[path2]]
kind = "spiral_plate"
diameter = 0.05
"#;
        let err = parse_config(text).unwrap_err().to_string();
        assert!(err.contains("footprint"), "{err}");
    }

    #[test]
    fn duplicate_ports_rejected() {
        let text = r#"
[beam]
wavelength = 2.71e-10

[detector]
ports = ["O", "O"]
"#;
        let err = parse_config(text).unwrap_err().to_string();
        assert!(err.contains("more than once"), "{err}");
    }
}
