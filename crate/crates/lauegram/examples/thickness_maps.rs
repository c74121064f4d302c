//! Beam-path thickness maps of the phase objects.
//!
//! Slices a spiral phase plate and a vertical wedge into horizontal
//! cross-sections, Radon-projects them along the beam, and exports the
//! resulting thickness maps as CSV plus 16-bit PGM with sidecar metadata.
//!
//! Run with: cargo run --example thickness_maps

use lauegram::export::{write_csv, write_image, write_sidecar, ImageFormat};
use lauegram::grid::GridGeometry;
use lauegram::phase_objects::{
    lambda_thickness, radon_project_onto, slice_object, Material, ObjectShape, Orientation,
    PhaseObjectSpec,
};
use serde_json::json;
use std::f64::consts::FRAC_PI_2;
use std::path::PathBuf;

fn main() -> lauegram::Result<()> {
    let out = PathBuf::from("examples_out/thickness_maps");
    std::fs::create_dir_all(&out)?;

    let wavelength = 2.71e-10;
    let material = Material::aluminum();
    let d_lambda = lambda_thickness(&material, wavelength)?;
    println!("2π thickness of Al at {wavelength:.2e} m: D_λ = {d_lambda:.4e} m");

    let geometry = GridGeometry::centered(512, 512, 16e-3 / 512.0);

    let spiral = PhaseObjectSpec {
        shape: ObjectShape::SpiralPlate {
            diameter: 0.015,
            step_height: d_lambda,
            base_thickness: 1e-3,
            turns: 2,
        },
        center: (0.0, 0.0),
        material: material.clone(),
    };
    let wedge = PhaseObjectSpec {
        shape: ObjectShape::Wedge {
            opening_angle: 0.111094,
            orientation: Orientation::Vertical,
            extent: 0.016,
        },
        center: (0.0, 0.0),
        material,
    };

    for (name, spec) in [("spiral_plate", &spiral), ("wedge", &wedge)] {
        let (_, (z_lo, z_hi)) = spec.footprint();
        let slices = (((z_hi - z_lo) / geometry.pitch).round() as usize).max(1);
        let stack = slice_object(spec, slices)?;
        let map = radon_project_onto(&stack, FRAC_PI_2, geometry)?;
        let (lo, hi) = map.grid.min_max();
        println!("{name}: thickness range [{lo:.4e}, {hi:.4e}] m over {slices} slices");

        write_csv(&map.grid, &out.join(format!("{name}.csv")))?;
        let image = out.join(format!("{name}.pgm"));
        let norm = write_image(&map.grid, &image, ImageFormat::Pgm)?;
        write_sidecar(
            &image,
            &json!({
                "kind": "thickness_map",
                "object": name,
                "units": "m",
                "normalization": norm,
                "pitch": geometry.pitch,
            }),
        )?;
    }
    println!("maps written to {}", out.display());
    Ok(())
}
