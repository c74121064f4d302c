//! Rocking curve and Pendellösung oscillation of a perfect crystal plate.
//!
//! Sweeps the deviation parameter y at fixed plate thickness, then the
//! thickness parameter A1 at exact Bragg incidence, and writes both sweeps
//! as two-column CSVs.
//!
//! Run with: cargo run --example rocking_curve

use lauegram::dyndiff::{laue_intensities, RockingPoint};
use lauegram::export::write_curve_csv;
use std::f64::consts::PI;
use std::path::PathBuf;

fn main() -> lauegram::Result<()> {
    let out = PathBuf::from("examples_out/rocking_curve");
    std::fs::create_dir_all(&out)?;

    // Rocking curve at A1 = π/2 (quarter Pendellösung: full transfer at y = 0).
    let a1 = PI / 2.0;
    let mut g_curve = Vec::new();
    let mut o_curve = Vec::new();
    for i in 0..2001 {
        let y = -10.0 + 20.0 * i as f64 / 2000.0;
        let (ig, io) = laue_intensities(&RockingPoint { y, a1 })?;
        g_curve.push((y, ig));
        o_curve.push((y, io));
    }
    write_curve_csv(("y", "I_G"), &g_curve, &out.join("rocking_curve_g.csv"))?;
    write_curve_csv(("y", "I_O"), &o_curve, &out.join("rocking_curve_o.csv"))?;

    let (ig0, _) = laue_intensities(&RockingPoint { y: 0.0, a1 })?;
    println!("rocking curve at A1 = π/2: I_G(0) = {ig0:.6} (full transfer)");

    // Pendellösung: diffracted intensity vs thickness parameter at y = 0.
    let mut pend = Vec::new();
    for i in 0..2001 {
        let a1 = 0.01 + 20.0 * i as f64 / 2000.0;
        let (ig, _) = laue_intensities(&RockingPoint { y: 0.0, a1 })?;
        pend.push((a1, ig));
    }
    write_curve_csv(("A1", "I_G"), &pend, &out.join("pendelloesung_g.csv"))?;
    for m in 1..=3 {
        let node = m as f64 * PI;
        let (ig, _) = laue_intensities(&RockingPoint { y: 0.0, a1: node })?;
        println!("Pendellösung node at A1 = {m}π: I_G = {ig:.2e}");
    }
    println!("CSV sweeps written to {}", out.display());
    Ok(())
}
