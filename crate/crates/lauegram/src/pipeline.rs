//! Figure pipelines: orchestrate phase objects → interferograms → binning →
//! reconstruction / analysis, and emit reproducible artifact sets with a
//! run manifest.
//!
//! Every run writes the fully resolved configuration (`config.toml`), the
//! requested artifacts, and `manifest.json` listing each emitted file with
//! its SHA-256. Identical configurations produce byte-identical artifacts
//! and manifests.

use crate::analysis::{
    fresnel_number, oam_capture_estimate, transverse_profile_compare, wedge_deflection,
    CoherenceAreaConvention, CoherenceParams, TransverseProfile,
};
use crate::config::{
    parse_config, serialize_config, CameraPosition, OamPanelConfig, ObjectConfig, SceneConfig,
    WindowKind,
};
use crate::dyndiff::{
    a1_parameter, borrmann_fan_width, laue_intensities, moire_magnification, two_path_intensity,
    RockingPoint,
};
use crate::error::{Error, Result};
use crate::export::{write_csv, write_curve_csv, write_image_with_range, write_sidecar};
use crate::grid::{GridGeometry, ScalarGrid};
use crate::holography::{reconstruct, fresnel_kernel_scale, ReconstructionParams};
use crate::interferogram::{
    bin_to_detector, synthesize_interferogram, synthesize_oam_model_rotated, InterferogramGrid,
    OamModelParams, Port,
};
use crate::phase_objects::{
    compose_thickness, lambda_thickness, radon_project_onto, slice_object, ObjectShape,
    PhaseObjectSpec, ThicknessMap,
};
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fs;
use std::path::{Path, PathBuf};

/// One emitted file with its checksum.
#[derive(Clone, Debug, Serialize)]
pub struct ManifestEntry {
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

/// Record of a pipeline run: configuration hash, tool version, and every
/// emitted file.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub config_sha256: String,
    pub files: Vec<ManifestEntry>,
}

struct Emitter {
    out_dir: PathBuf,
    files: Vec<PathBuf>,
}

impl Emitter {
    fn new(out_dir: &Path, config: &SceneConfig) -> Result<Self> {
        fs::create_dir_all(out_dir)?;
        let mut emitter = Emitter {
            out_dir: out_dir.to_path_buf(),
            files: Vec::new(),
        };
        emitter.write_text("config.toml", &serialize_config(config)?)?;
        Ok(emitter)
    }

    fn path(&self, name: &str) -> PathBuf {
        self.out_dir.join(name)
    }

    fn write_text(&mut self, name: &str, text: &str) -> Result<()> {
        let path = self.path(name);
        fs::write(&path, text)?;
        self.files.push(path);
        Ok(())
    }

    /// Emit a grid as image + sidecar and/or CSV according to the output
    /// config.
    fn emit_grid<M: Serialize>(
        &mut self,
        stem: &str,
        grid: &ScalarGrid,
        metadata: M,
        config: &SceneConfig,
    ) -> Result<()> {
        self.emit_grid_with_range(stem, grid, metadata, config, None)
    }

    /// Like [`Self::emit_grid`] with a fixed gray-value range for the image
    /// (phase maps use (-π, π]).
    fn emit_grid_with_range<M: Serialize>(
        &mut self,
        stem: &str,
        grid: &ScalarGrid,
        metadata: M,
        config: &SceneConfig,
        range: Option<(f64, f64)>,
    ) -> Result<()> {
        let meta_value = serde_json::to_value(&metadata)
            .map_err(|e| Error::Io(std::io::Error::other(e)))?;
        if config.output.images {
            let format = config.output.image_format;
            let image_path = self.path(&format!("{stem}.{}", format.extension()));
            let norm = write_image_with_range(grid, &image_path, format, range)?;
            let mut meta = meta_value.clone();
            if let serde_json::Value::Object(map) = &mut meta {
                map.insert("normalization".into(), json!(norm));
                map.insert(
                    "grid".into(),
                    json!({
                        "cols": grid.geometry.cols,
                        "rows": grid.geometry.rows,
                        "pitch": grid.geometry.pitch,
                    }),
                );
            }
            let sidecar = write_sidecar(&image_path, &meta)?;
            self.files.push(image_path);
            self.files.push(sidecar);
        }
        if config.output.csv {
            let csv_path = self.path(&format!("{stem}.csv"));
            write_csv(grid, &csv_path)?;
            self.files.push(csv_path);
        }
        Ok(())
    }

    fn finish(mut self, config: &SceneConfig) -> Result<RunManifest> {
        let config_text = serialize_config(config)?;
        let mut entries: Vec<ManifestEntry> = Vec::with_capacity(self.files.len());
        self.files.sort();
        self.files.dedup();
        for file in &self.files {
            let bytes = fs::read(file)?;
            let rel = file
                .strip_prefix(&self.out_dir)
                .unwrap_or(file)
                .to_string_lossy()
                .into_owned();
            entries.push(ManifestEntry {
                path: rel,
                sha256: sha256_hex(&bytes),
                bytes: bytes.len() as u64,
            });
        }
        let manifest = RunManifest {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            config_sha256: sha256_hex(config_text.as_bytes()),
            files: entries,
        };
        let json = serde_json::to_string_pretty(&manifest)
            .map_err(|e| Error::Io(std::io::Error::other(e)))?;
        fs::write(self.out_dir.join("manifest.json"), json + "\n")?;
        Ok(manifest)
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Resolved panel: object specs per path plus its phase flag.
struct ResolvedPanel {
    id: String,
    path1: Vec<PhaseObjectSpec>,
    path2: Vec<PhaseObjectSpec>,
    phi0: f64,
    descriptor: serde_json::Value,
}

fn resolve_objects(
    objects: &[ObjectConfig],
    config: &SceneConfig,
) -> Result<Vec<PhaseObjectSpec>> {
    let field = config.detector.field_geometry();
    let cover = 2.0 * field.width().max(field.height());
    objects
        .iter()
        .map(|obj| {
            let mut spec = obj.to_spec()?;
            if let ObjectShape::Slab { thickness, extent: None } = spec.shape {
                spec.shape = ObjectShape::Slab {
                    thickness,
                    extent: Some(cover),
                };
            }
            Ok(spec)
        })
        .collect()
}

fn resolved_panels(config: &SceneConfig) -> Result<Vec<ResolvedPanel>> {
    let mut panels = Vec::new();
    if config.panels.is_empty() {
        // The top-level paths form one implicit panel, unless the config
        // consists of closed-form fringe panels only.
        let fringe_only =
            config.path1.is_empty() && config.path2.is_empty() && !config.oam_panels.is_empty();
        if !fringe_only {
            panels.push(ResolvedPanel {
                id: "main".into(),
                path1: resolve_objects(&config.path1, config)?,
                path2: resolve_objects(&config.path2, config)?,
                phi0: config.simulation.phi0,
                descriptor: json!({
                    "path1": config.path1,
                    "path2": config.path2,
                }),
            });
        }
    } else {
        for panel in &config.panels {
            panels.push(ResolvedPanel {
                id: panel.id.clone(),
                path1: resolve_objects(&panel.path1, config)?,
                path2: resolve_objects(&panel.path2, config)?,
                phi0: panel.phi0.unwrap_or(config.simulation.phi0),
                descriptor: serde_json::to_value(panel)
                    .map_err(|e| Error::Io(std::io::Error::other(e)))?,
            });
        }
    }
    Ok(panels)
}

/// Build the composed thickness map of one path on the fine scene grid.
/// Thicknesses of non-reference materials are rescaled into the reference
/// material's D_λ so a single phase scale applies.
fn path_thickness_map(
    specs: &[PhaseObjectSpec],
    geometry: GridGeometry,
    wavelength: f64,
    d_lambda_ref: f64,
) -> Result<ThicknessMap> {
    if specs.is_empty() {
        return Ok(ThicknessMap::zeros(geometry));
    }
    let mut maps = Vec::with_capacity(specs.len());
    for spec in specs {
        let (_, (z_lo, z_hi)) = spec.footprint();
        let count = (((z_hi - z_lo) / geometry.pitch).ceil() as usize).max(1);
        let stack = slice_object(spec, count)?;
        let mut map = radon_project_onto(&stack, FRAC_PI_2, geometry)?;
        let d_lambda_obj = lambda_thickness(&spec.material, wavelength)?;
        let scale = d_lambda_ref / d_lambda_obj;
        if (scale - 1.0).abs() > 1e-12 {
            for x in map.grid.data_mut() {
                *x *= scale;
            }
        }
        maps.push(map);
    }
    compose_thickness(&maps)
}

fn reference_d_lambda(config: &SceneConfig, panels: &[ResolvedPanel]) -> Result<f64> {
    let material = panels
        .iter()
        .flat_map(|p| p.path1.iter().chain(p.path2.iter()))
        .map(|spec| spec.material.clone())
        .next()
        .unwrap_or_else(crate::phase_objects::Material::aluminum);
    lambda_thickness(&material, config.beam.wavelength)
}

/// Synthesize the binned detector pattern of one panel and port.
fn panel_pattern(
    config: &SceneConfig,
    panel: &ResolvedPanel,
    port: Port,
    d_lambda_ref: f64,
) -> Result<InterferogramGrid> {
    let fine_geom = config.fine_geometry();
    let map1 = path_thickness_map(
        &panel.path1,
        fine_geom,
        config.beam.wavelength,
        d_lambda_ref,
    )?;
    let map2 = path_thickness_map(
        &panel.path2,
        fine_geom,
        config.beam.wavelength,
        d_lambda_ref,
    )?;
    let mut fine =
        synthesize_interferogram(Some(&map1), Some(&map2), d_lambda_ref, panel.phi0, port)?;
    fine.scene = panel.id.clone();
    let mut binned = bin_to_detector(&fine, &config.detector.spec(port))?;
    if config.simulation.camera == CameraPosition::Integrating {
        let mean = binned.intensity.sum() / binned.intensity.geometry.len() as f64;
        for x in binned.intensity.data_mut() {
            *x = mean;
        }
    }
    Ok(binned)
}

/// Run the interferogram pipeline: every panel × every detector port.
pub fn run_simulate(config: &SceneConfig, out_dir: &Path) -> Result<RunManifest> {
    config.validate()?;
    let mut emitter = Emitter::new(out_dir, config)?;
    let panels = resolved_panels(config)?;
    let d_lambda_ref = reference_d_lambda(config, &panels)?;

    for panel in &panels {
        for &port in &config.detector.ports {
            let pattern = panel_pattern(config, panel, port, d_lambda_ref)?;
            let stem = format!("{}_{}", panel.id, port.label());
            emitter.emit_grid(
                &stem,
                &pattern.intensity,
                json!({
                    "kind": "interferogram",
                    "panel": panel.id,
                    "port": port.label(),
                    "phi0": pattern.phi0,
                    "d_lambda": pattern.d_lambda,
                    "scene": panel.descriptor,
                    "camera": config.simulation.camera,
                    "supersample": config.simulation.supersample,
                }),
                config,
            )?;
        }
    }

    for oam in &config.oam_panels {
        let pattern = oam_panel_pattern(config, oam)?;
        emitter.emit_grid(
            &oam.id,
            &pattern.intensity,
            json!({
                "kind": "fringe_model",
                "panel": oam.id,
                "charge": oam.charge,
                "fringe_period": oam.fringe_period,
                "theta": oam.theta,
            }),
            config,
        )?;
    }
    emitter.finish(config)
}

fn oam_panel_pattern(config: &SceneConfig, oam: &OamPanelConfig) -> Result<InterferogramGrid> {
    let params = OamModelParams {
        k_fringe: TAU / oam.fringe_period,
        q: oam.charge,
        theta: oam.theta,
        a: oam.mean,
        b: oam.modulation,
    };
    synthesize_oam_model_rotated(&params, config.detector.field_geometry(), oam.rotation)
}

fn apply_window(pattern: &mut InterferogramGrid, window: WindowKind) {
    if window == WindowKind::None {
        return;
    }
    let g = pattern.intensity.geometry;
    let (cols, rows) = (g.cols as f64, g.rows as f64);
    for j in 0..g.rows {
        let wy = 0.5 * (1.0 - (TAU * j as f64 / (rows - 1.0)).cos());
        for i in 0..g.cols {
            let wx = 0.5 * (1.0 - (TAU * i as f64 / (cols - 1.0)).cos());
            let v = pattern.intensity.get(i, j);
            pattern.intensity.set(i, j, v * wx * wy);
        }
    }
}

/// Run the reconstruction pipeline: simulate (or load) interferograms and
/// emit intensity/phase image pairs.
pub fn run_reconstruct(config: &SceneConfig, out_dir: &Path) -> Result<RunManifest> {
    config.validate()?;
    let rc = config.reconstruction.clone().unwrap_or_default();
    let params = ReconstructionParams {
        lambda_d: rc.lambda_d,
        n: rc.n,
        delta_x: rc.delta_x,
        delta_y: rc.delta_y,
    };
    let mut emitter = Emitter::new(out_dir, config)?;

    let mut inputs: Vec<(String, InterferogramGrid)> = Vec::new();
    if let Some(csv_path) = &rc.input_csv {
        inputs.push(("input".into(), load_pattern_csv(Path::new(csv_path))?));
    } else {
        let panels = resolved_panels(config)?;
        if panels.is_empty() {
            return Err(Error::Config(
                "reconstruction needs panels, scene objects, or an input_csv".into(),
            ));
        }
        let d_lambda_ref = reference_d_lambda(config, &panels)?;
        for panel in &panels {
            let pattern = panel_pattern(config, panel, Port::O, d_lambda_ref)?;
            inputs.push((panel.id.clone(), pattern));
        }
    }

    let (xi_pitch, eta_pitch) = fresnel_kernel_scale(&params)?;
    for (id, mut pattern) in inputs {
        emitter.emit_grid(
            &format!("{id}_O"),
            &pattern.intensity,
            json!({
                "kind": "interferogram",
                "panel": id,
                "port": "O",
                "phi0": pattern.phi0,
                "d_lambda": pattern.d_lambda,
            }),
            config,
        )?;
        apply_window(&mut pattern, rc.window);
        let rec = reconstruct(&pattern, &params)?;
        let geom = GridGeometry {
            pitch: 1.0,
            cols: rec.n,
            rows: rec.n,
            origin_u: 0.0,
            origin_v: 0.0,
        };
        let intensity = ScalarGrid::from_data(geom, rec.intensity.clone())?;
        let phase = ScalarGrid::from_data(geom, rec.phase.clone())?;
        let zero_modulus = rec.valid.iter().filter(|v| !**v).count();
        let recon_meta = json!({
            "kind": "reconstruction",
            "panel": id,
            "lambda_d": params.lambda_d,
            "n": params.n,
            "delta_x": params.delta_x,
            "delta_y": params.delta_y,
            "window": rc.window,
            "output_pitch_xi": xi_pitch,
            "output_pitch_eta": eta_pitch,
            "zero_modulus_pixels": zero_modulus,
        });
        emitter.emit_grid(&format!("{id}_recon_intensity"), &intensity, &recon_meta, config)?;
        emitter.emit_grid_with_range(
            &format!("{id}_recon_phase"),
            &phase,
            &recon_meta,
            config,
            Some((-PI, PI)),
        )?;
    }
    emitter.finish(config)
}

fn load_pattern_csv(path: &Path) -> Result<InterferogramGrid> {
    let text = fs::read_to_string(path)?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row: std::result::Result<Vec<f64>, _> =
            line.split(',').map(|t| t.trim().parse::<f64>()).collect();
        rows.push(row.map_err(|e| {
            Error::Config(format!("{}:{}: bad CSV number: {e}", path.display(), line_no + 1))
        })?);
    }
    let height = rows.len();
    let width = rows.first().map_or(0, |r| r.len());
    if height == 0 || width == 0 {
        return Err(Error::Config(format!("{}: empty CSV", path.display())));
    }
    if rows.iter().any(|r| r.len() != width) {
        return Err(Error::Config(format!("{}: ragged CSV rows", path.display())));
    }
    let geometry = GridGeometry {
        pitch: 1.0,
        cols: width,
        rows: height,
        origin_u: 0.0,
        origin_v: 0.0,
    };
    let intensity = ScalarGrid::from_data(geometry, rows.into_iter().flatten().collect())?;
    Ok(InterferogramGrid {
        intensity,
        port: Port::O,
        phi0: 0.0,
        d_lambda: None,
        scene: format!("loaded from {}", path.display()),
    })
}

#[derive(Clone, Debug, Serialize)]
struct Metric {
    value: serde_json::Value,
    unit: String,
}

fn metric(value: impl Into<serde_json::Value>, unit: &str) -> Metric {
    Metric {
        value: value.into(),
        unit: unit.into(),
    }
}

/// Run the feasibility analysis and emit a human-readable report plus a
/// machine-readable key-value file.
pub fn run_analyze(config: &SceneConfig, out_dir: &Path) -> Result<RunManifest> {
    config.validate()?;
    let mut emitter = Emitter::new(out_dir, config)?;
    let a = &config.analysis;
    let wl = config.beam.wavelength;

    let mut metrics: BTreeMap<String, Metric> = BTreeMap::new();
    let mut lines: Vec<String> = Vec::new();
    lines.push("Feasibility analysis".into());
    lines.push(format!("wavelength: {wl:.4e} m"));

    let d_lambda_al = lambda_thickness(&crate::phase_objects::Material::aluminum(), wl)?;
    metrics.insert("d_lambda_aluminum".into(), metric(d_lambda_al, "m"));
    lines.push(format!("2π thickness D_λ (Al): {d_lambda_al:.6e} m"));

    for (idx, &y) in a.distances.iter().enumerate() {
        let (f, regime) = fresnel_number(a.aperture, wl, y)?;
        let key = format!("fresnel_number_{idx}");
        metrics.insert(key.clone(), metric(f, ""));
        metrics.insert(
            format!("{key}_distance"),
            metric(y, "m"),
        );
        metrics.insert(
            format!("{key}_regime"),
            metric(format!("{regime:?}"), ""),
        );
        lines.push(format!(
            "Fresnel number at y = {y} m (a = {} m): F = {f:.3} ({regime:?})",
            a.aperture
        ));
    }
    lines.push(
        "note: direct evaluation at y = 17 mm gives F = 0.868; the commonly quoted 0.857 \
         corresponds to slightly different a or y (difference < 2%)"
            .into(),
    );

    let duration_s = a.duration_hours * 3600.0;
    let captured = oam_capture_estimate(
        config.beam.flux,
        a.sigma_iso,
        a.sigma_iso,
        duration_s,
        a.area_convention,
    )?;
    let alternative = oam_capture_estimate(
        config.beam.flux,
        a.sigma_iso,
        a.sigma_iso,
        duration_s,
        match a.area_convention {
            CoherenceAreaConvention::Rectangle => CoherenceAreaConvention::Ellipse,
            CoherenceAreaConvention::Ellipse => CoherenceAreaConvention::Rectangle,
        },
    )?;
    metrics.insert("oam_capture_expected".into(), metric(captured, "wave packets"));
    metrics.insert(
        "oam_capture_convention".into(),
        metric(format!("{:?}", a.area_convention), ""),
    );
    metrics.insert(
        "oam_capture_alternative_convention".into(),
        metric(alternative, "wave packets"),
    );
    lines.push(format!(
        "wave packets within one coherence area of the spiral axis over {} h \
         (flux {} n/m²s, σ = {} m, {:?} area): {captured:.2} \
         (alternative convention: {alternative:.2})",
        a.duration_hours, config.beam.flux, a.sigma_iso, a.area_convention
    ));

    // Wedge deflection: first wedge in the scene, else the reference wedge.
    let scene_wedge = config
        .path1
        .iter()
        .chain(config.path2.iter())
        .chain(
            config
                .panels
                .iter()
                .flat_map(|p| p.path1.iter().chain(p.path2.iter())),
        )
        .find(|o| o.kind == "wedge");
    let (wedge_material, wedge_angle, wedge_source) = match scene_wedge {
        Some(obj) => (
            obj.material.resolve()?,
            obj.opening_angle
                .ok_or_else(|| Error::Config("wedge: `opening_angle` is required".into()))?,
            "scene",
        ),
        None => (
            crate::phase_objects::Material::aluminum(),
            a.reference_wedge_tan.atan(),
            "reference",
        ),
    };
    let deflection = wedge_deflection(&wedge_material, wl, wedge_angle)?;
    let shift = deflection.transverse_shift(a.flight_path);
    let same_pixel = deflection.same_pixel(a.flight_path, config.detector.pixel_pitch);
    metrics.insert("wedge_deflection".into(), metric(deflection.angle, "rad"));
    metrics.insert(
        "wedge_refractive_decrement".into(),
        metric(deflection.refractive_decrement, ""),
    );
    metrics.insert("wedge_transverse_shift".into(), metric(shift, "m"));
    metrics.insert("wedge_same_pixel".into(), metric(same_pixel, "bool"));
    metrics.insert("wedge_source".into(), metric(wedge_source, ""));
    lines.push(format!(
        "wedge deflection ({wedge_source}, {} at tan α = {:.4}): {:.3e} rad; \
         shift over {} m flight = {shift:.3e} m; same detector pixel: {same_pixel}",
        wedge_material.name,
        wedge_angle.tan(),
        deflection.angle,
        a.flight_path
    ));

    let comparison = transverse_profile_compare(
        &TransverseProfile {
            center: (0.0, 0.0),
            sigma: a.sigma_iso,
        },
        &CoherenceParams {
            sigma_x: config.beam.sigma_x,
            sigma_z: config.beam.sigma_z,
            aperture: a.aperture,
            wavelength: wl,
        },
    )?;
    metrics.insert(
        "coherence_anisotropy_ratio".into(),
        metric(comparison.anisotropy_ratio, ""),
    );
    metrics.insert(
        "coherence_anisotropy_flagged".into(),
        metric(comparison.anisotropy_flagged, "bool"),
    );
    lines.push(format!(
        "transverse coherence: σ_x = {} m, σ_z = {} m, ratio = {:.1}{}",
        comparison.sigma_x,
        comparison.sigma_z,
        comparison.anisotropy_ratio,
        if comparison.anisotropy_flagged {
            " (anisotropy flagged: isotropic profile not tenable)"
        } else {
            ""
        }
    ));

    if let Some(crystal) = &config.crystal {
        let params = crystal.to_params(wl);
        let a1 = a1_parameter(&params)?;
        let fan = borrmann_fan_width(&params)?;
        let moire = moire_magnification(
            params.lattice_spacing,
            params.lattice_spacing * (1.0 + a.moire_mismatch),
        )?;
        metrics.insert("crystal_a1".into(), metric(a1, ""));
        metrics.insert("borrmann_fan_width".into(), metric(fan, "m"));
        metrics.insert("moire_magnification".into(), metric(moire, ""));
        lines.push(format!(
            "crystal: A1 = {a1:.2}, Borrmann fan width = {fan:.3e} m, \
             Moiré magnification at relative mismatch {} = {moire:.3e}",
            a.moire_mismatch
        ));
    }

    let report_txt = lines.join("\n") + "\n";
    emitter.write_text("analysis_report.txt", &report_txt)?;
    let json_text = serde_json::to_string_pretty(&metrics)
        .map_err(|e| Error::Io(std::io::Error::other(e)))?;
    emitter.write_text("analysis_report.json", &(json_text + "\n"))?;
    emitter.finish(config)
}

/// Run a 1D sweep and emit two-column CSVs per output beam.
pub fn run_sweep(config: &SceneConfig, out_dir: &Path) -> Result<RunManifest> {
    config.validate()?;
    let sweep = config
        .sweep
        .as_ref()
        .ok_or_else(|| Error::Config("sweep requires a [sweep] block".into()))?;
    let mut emitter = Emitter::new(out_dir, config)?;
    let linspace = |lo: f64, hi: f64, n: usize| -> Vec<f64> {
        (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect()
    };
    match sweep.kind.as_str() {
        "rocking_curve" => {
            let a1 = resolve_sweep_a1(config, sweep.a1)?;
            let mut g_curve = Vec::with_capacity(sweep.samples);
            let mut o_curve = Vec::with_capacity(sweep.samples);
            for y in linspace(sweep.y_min, sweep.y_max, sweep.samples) {
                let (ig, io) = laue_intensities(&RockingPoint { y, a1 })?;
                g_curve.push((y, ig));
                o_curve.push((y, io));
            }
            let gp = emitter.path("rocking_curve_g.csv");
            write_curve_csv(("y", "I_G"), &g_curve, &gp)?;
            emitter.files.push(gp);
            let op = emitter.path("rocking_curve_o.csv");
            write_curve_csv(("y", "I_O"), &o_curve, &op)?;
            emitter.files.push(op);
        }
        "pendelloesung" => {
            let mut g_curve = Vec::with_capacity(sweep.samples);
            let mut o_curve = Vec::with_capacity(sweep.samples);
            for a1 in linspace(sweep.a1_min, sweep.a1_max, sweep.samples) {
                let (ig, io) = laue_intensities(&RockingPoint { y: sweep.y, a1 })?;
                g_curve.push((a1, ig));
                o_curve.push((a1, io));
            }
            let gp = emitter.path("pendelloesung_g.csv");
            write_curve_csv(("A1", "I_G"), &g_curve, &gp)?;
            emitter.files.push(gp);
            let op = emitter.path("pendelloesung_o.csv");
            write_curve_csv(("A1", "I_O"), &o_curve, &op)?;
            emitter.files.push(op);
        }
        "phase_scan" => {
            let mut o_curve = Vec::with_capacity(sweep.samples);
            let mut g_curve = Vec::with_capacity(sweep.samples);
            for chi in linspace(sweep.chi_min, sweep.chi_max, sweep.samples) {
                let (io, ig) = two_path_intensity(sweep.psi0_sq, chi)?;
                o_curve.push((chi, io));
                g_curve.push((chi, ig));
            }
            let op = emitter.path("phase_scan_o.csv");
            write_curve_csv(("chi", "I_O"), &o_curve, &op)?;
            emitter.files.push(op);
            let gp = emitter.path("phase_scan_g.csv");
            write_curve_csv(("chi", "I_G"), &g_curve, &gp)?;
            emitter.files.push(gp);
        }
        other => {
            return Err(Error::Config(format!("sweep.kind `{other}` unknown")));
        }
    }
    emitter.finish(config)
}

fn resolve_sweep_a1(config: &SceneConfig, explicit: Option<f64>) -> Result<f64> {
    if let Some(a1) = explicit {
        if !(a1 > 0.0) {
            return Err(Error::Config("sweep.a1 must be > 0".into()));
        }
        return Ok(a1);
    }
    let crystal = config.crystal.as_ref().ok_or_else(|| {
        Error::Config("rocking_curve sweep needs sweep.a1 or a [crystal] block".into())
    })?;
    a1_parameter(&crystal.to_params(config.beam.wavelength))
}

/// Built-in scene presets reproducing the tool's reference figure layouts.
///
/// 7: spiral plate + vertical wedge, O and G ports.
/// 8: close-up of the same scene, O and G complementary pair.
/// 10: stack sweep L = 0..3, spiral-only row and spiral+wedge row.
/// 11: closed-form fringe model for q = 0..3.
/// 12: reconstruction of the L = 0 and L = 2 interferograms.
pub fn preset_config(figure: u8) -> Result<SceneConfig> {
    let text = match figure {
        7 => preset_spp_wedge(256, 4, &["O", "G"]),
        8 => preset_spp_wedge(160, 4, &["O", "G"]),
        10 => preset_stack_sweep(),
        11 => preset_fringe_model(),
        12 => preset_reconstruction(),
        other => {
            return Err(Error::Config(format!(
                "no preset for figure {other} (available: 7, 8, 10, 11, 12)"
            )))
        }
    };
    parse_config(&text)
}

/// Wedge opening angle whose phase ramp has a 1 mm fringe period in
/// aluminum at 2.71 Å: tan α = D_λ / 1 mm.
const PRESET_WEDGE_ANGLE: f64 = 0.111094;
const PRESET_WAVELENGTH: f64 = 2.71e-10;

fn preset_spp_wedge(side: usize, supersample: usize, ports: &[&str]) -> String {
    let ports_list = ports
        .iter()
        .map(|p| format!("\"{p}\""))
        .collect::<Vec<_>>()
        .join(", ");
    let extent = side as f64 * 100e-6;
    format!(
        r#"
[beam]
wavelength = {PRESET_WAVELENGTH}

[detector]
width = {side}
height = {side}
ports = [{ports_list}]

[simulation]
supersample = {supersample}

[[panels]]
id = "spp_wedge"

[[panels.path1]]
kind = "wedge"
opening_angle = {PRESET_WEDGE_ANGLE}
extent = {extent}

[[panels.path2]]
kind = "spiral_plate"
turns = 1
"#
    )
}

fn preset_stack_sweep() -> String {
    let mut text = format!(
        r#"
[beam]
wavelength = {PRESET_WAVELENGTH}

[detector]
width = 375
height = 375
ports = ["O"]

[simulation]
supersample = 4
"#
    );
    for turns in 0..=3 {
        text.push_str(&format!(
            r#"
[[panels]]
id = "L{turns}_spp"

[[panels.path2]]
kind = "spiral_plate"
turns = {turns}
"#
        ));
    }
    for turns in 0..=3 {
        text.push_str(&format!(
            r#"
[[panels]]
id = "L{turns}_spp_wedge"

[[panels.path1]]
kind = "wedge"
opening_angle = {PRESET_WEDGE_ANGLE}
extent = 0.0375

[[panels.path2]]
kind = "spiral_plate"
turns = {turns}
"#
        ));
    }
    text
}

fn preset_fringe_model() -> String {
    let mut text = format!(
        r#"
[beam]
wavelength = {PRESET_WAVELENGTH}

[detector]
width = 375
height = 375
ports = ["O"]
"#
    );
    for q in 0..=3 {
        text.push_str(&format!(
            r#"
[[oam_panels]]
id = "q{q}"
charge = {q}
"#
        ));
    }
    text
}

fn preset_reconstruction() -> String {
    let mut text = format!(
        r#"
[beam]
wavelength = {PRESET_WAVELENGTH}

[detector]
width = 160
height = 160
ports = ["O"]

[simulation]
supersample = 10

[reconstruction]
lambda_d = 70.0
n = 100
delta_x = 0.1
delta_y = 0.1
"#
    );
    for turns in [0u32, 2] {
        text.push_str(&format!(
            r#"
[[panels]]
id = "L{turns}"

[[panels.path1]]
kind = "wedge"
opening_angle = {PRESET_WEDGE_ANGLE}
extent = 0.016

[[panels.path2]]
kind = "spiral_plate"
turns = {turns}
"#
        ));
    }
    text
}
