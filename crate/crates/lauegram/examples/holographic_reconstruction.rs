//! Discrete Fresnel reconstruction of synthesized interferograms.
//!
//! Builds the L = 0 (wedge only) and L = 2 (wedge + double spiral plate)
//! interferograms, applies the discrete Fresnel transform with λd = 70 mm²
//! on N = 100 samples, and exports intensity and phase images.
//!
//! Run with: cargo run --example holographic_reconstruction

use lauegram::export::{write_image, ImageFormat};
use lauegram::grid::GridGeometry;
use lauegram::holography::{reconstruct, ReconstructionParams};
use lauegram::interferogram::{bin_to_detector, synthesize_interferogram, DetectorSpec, Port};
use lauegram::phase_objects::{
    lambda_thickness, radon_project_onto, slice_object, Material, ObjectShape, Orientation,
    PhaseObjectSpec, ThicknessMap,
};
use lauegram::ScalarGrid;
use std::f64::consts::FRAC_PI_2;
use std::path::PathBuf;

fn aligned_map(
    spec: &PhaseObjectSpec,
    geometry: GridGeometry,
) -> lauegram::Result<ThicknessMap> {
    let (_, (z_lo, z_hi)) = spec.footprint();
    let slices = (((z_hi - z_lo) / geometry.pitch).round() as usize).max(1);
    let stack = slice_object(spec, slices)?;
    radon_project_onto(&stack, FRAC_PI_2, geometry)
}

fn main() -> lauegram::Result<()> {
    let out = PathBuf::from("examples_out/holographic_reconstruction");
    std::fs::create_dir_all(&out)?;

    let material = Material::aluminum();
    let d_lambda = lambda_thickness(&material, 2.71e-10)?;
    let detector = DetectorSpec {
        pixel_pitch: 100e-6,
        width: 160,
        height: 160,
        port: Port::O,
    };
    let supersample = 10;
    let fine = GridGeometry::centered(
        detector.width * supersample,
        detector.height * supersample,
        detector.pixel_pitch / supersample as f64,
    );
    let wedge = aligned_map(
        &PhaseObjectSpec {
            shape: ObjectShape::Wedge {
                opening_angle: (d_lambda / 1e-3).atan(),
                orientation: Orientation::Vertical,
                extent: 0.016,
            },
            center: (0.0, 0.0),
            material: material.clone(),
        },
        fine,
    )?;

    // Pitches in mm so that λd = 70 mm² is consistent with 0.1 mm pixels.
    let params = ReconstructionParams {
        lambda_d: 70.0,
        n: 100,
        delta_x: 0.1,
        delta_y: 0.1,
    };

    for turns in [0u32, 2] {
        let spiral = aligned_map(
            &PhaseObjectSpec {
                shape: ObjectShape::SpiralPlate {
                    diameter: 0.015,
                    step_height: d_lambda,
                    base_thickness: 1e-3,
                    turns,
                },
                center: (0.0, 0.0),
                material: material.clone(),
            },
            fine,
        )?;
        let pattern =
            synthesize_interferogram(Some(&wedge), Some(&spiral), d_lambda, 0.0, Port::O)?;
        let binned = bin_to_detector(&pattern, &detector)?;
        write_image(
            &binned.intensity,
            &out.join(format!("L{turns}_interferogram.pgm")),
            ImageFormat::Pgm,
        )?;

        let rec = reconstruct(&binned, &params)?;
        let geom = GridGeometry {
            pitch: 1.0,
            cols: rec.n,
            rows: rec.n,
            origin_u: 0.0,
            origin_v: 0.0,
        };
        let intensity = ScalarGrid::from_data(geom, rec.intensity.clone())?;
        let phase = ScalarGrid::from_data(geom, rec.phase.clone())?;
        write_image(
            &intensity,
            &out.join(format!("L{turns}_recon_intensity.pgm")),
            ImageFormat::Pgm,
        )?;
        write_image(
            &phase,
            &out.join(format!("L{turns}_recon_phase.pgm")),
            ImageFormat::Pgm,
        )?;
        let total: f64 = rec.intensity.iter().sum();
        println!("L = {turns}: reconstructed energy {total:.3e}, images written");
    }
    println!("outputs in {}", out.display());
    Ok(())
}
