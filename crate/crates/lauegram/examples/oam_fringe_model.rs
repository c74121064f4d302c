//! Closed-form fringe model I = A + B cos(k v - q φ + θ).
//!
//! Renders the pattern for topological charges q = 0..3 directly at
//! detector resolution and verifies each fork order; the q-step plate
//! stack in `fork_interferogram` produces the same patterns.
//!
//! Run with: cargo run --example oam_fringe_model

use lauegram::export::{write_image, ImageFormat};
use lauegram::grid::GridGeometry;
use lauegram::interferogram::{fork_fringe_count, synthesize_oam_model, OamModelParams};
use std::f64::consts::TAU;
use std::path::PathBuf;

fn main() -> lauegram::Result<()> {
    let out = PathBuf::from("examples_out/oam_fringe_model");
    std::fs::create_dir_all(&out)?;

    let geometry = GridGeometry::centered(256, 256, 100e-6);
    for q in 0..=3 {
        let params = OamModelParams {
            k_fringe: TAU / 1e-3,
            q,
            theta: 0.0,
            a: 0.5,
            b: 0.5,
        };
        let pattern = synthesize_oam_model(&params, geometry)?;
        write_image(
            &pattern.intensity,
            &out.join(format!("model_q{q}.pgm")),
            ImageFormat::Pgm,
        )?;
        if q == 0 {
            println!("q = 0: straight fringes of period {:.1} mm", 1e3 * TAU / params.k_fringe);
        } else {
            let order = fork_fringe_count(&pattern, (0.0, 0.0))?;
            println!("q = {q}: fork order {order}");
        }
    }
    println!("patterns written to {}", out.display());
    Ok(())
}
