//! Geometric estimates of the interferometer: Borrmann fan width and the
//! Moiré magnification of the analyzer crystal.
//!
//! Run with: cargo run --example moire_and_fan

use lauegram::dyndiff::{borrmann_fan_width, moire_magnification, CrystalParams};

fn main() -> lauegram::Result<()> {
    let params = CrystalParams {
        wavelength: 2.71e-10,
        bragg_angle: 30f64.to_radians(),
        plate_thickness: 4.46e-3,
        fourier_potential: 8.649e-27,
        neutron_energy: 1.7846e-21,
        asymmetry_cos: 1.0,
        lattice_spacing: 1.92e-10,
    };
    let width = borrmann_fan_width(&params)?;
    println!(
        "Borrmann fan base width for D = {:.2} mm at Θ_B = 30°: {:.2} mm",
        params.plate_thickness * 1e3,
        width * 1e3
    );

    println!("\nMoiré magnification vs fringe/lattice mismatch (d = {:.3} nm):", params.lattice_spacing * 1e9);
    for mismatch in [1e-2, 1e-4, 1e-6, 1e-7, 1e-8] {
        let fringe_d = params.lattice_spacing * (1.0 + mismatch);
        let m = moire_magnification(params.lattice_spacing, fringe_d)?;
        println!("  relative mismatch {mismatch:>7.0e}: M = {m:.3e}");
    }
    let exact = moire_magnification(params.lattice_spacing, params.lattice_spacing)?;
    println!("  coinciding spacings: M = {exact}");
    Ok(())
}
