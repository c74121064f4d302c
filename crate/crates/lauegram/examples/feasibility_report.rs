//! Quantitative feasibility numbers for interferometric vortex detection.
//!
//! Fresnel numbers at the two relevant object-analyzer distances, the
//! coherence-area capture estimate, the wedge beam deflection with its
//! same-pixel verdict, and the transverse anisotropy comparison.
//!
//! Run with: cargo run --example feasibility_report

use lauegram::analysis::{
    fresnel_number, oam_capture_estimate, transverse_profile_compare, wedge_deflection,
    CoherenceAreaConvention, CoherenceParams, TransverseProfile,
};
use lauegram::phase_objects::Material;

fn main() -> lauegram::Result<()> {
    let wavelength = 2.71e-10;
    let aperture = 2e-6;

    println!("Fresnel numbers (a = {aperture:.0e} m, λ = {wavelength:.2e} m):");
    for y in [0.05, 0.017] {
        let (f, regime) = fresnel_number(aperture, wavelength, y)?;
        println!("  y = {:>5.0} mm: F = {f:.3} ({regime:?})", y * 1e3);
    }
    println!("  (direct evaluation at 17 mm gives 0.868; the often-quoted 0.857 differs by <2%)");

    let flux = 1e7; // 10³ n/(cm² s)
    let duration = 100.0 * 3600.0;
    let rect = oam_capture_estimate(flux, 1e-6, 1e-6, duration, CoherenceAreaConvention::Rectangle)?;
    let ell = oam_capture_estimate(flux, 1e-6, 1e-6, duration, CoherenceAreaConvention::Ellipse)?;
    println!(
        "\nwave packets within one coherence area of the spiral axis in 100 h:\n  \
         rectangle convention {rect:.1}, ellipse convention {ell:.1}"
    );

    let deflection = wedge_deflection(&Material::aluminum(), wavelength, 0.2058f64.atan())?;
    let flight = 0.1;
    let pixel = 100e-6;
    println!(
        "\nwedge deflection (Al, tan α = 0.2058): {:.2e} rad\n  \
         |n-1| = {:.2e}; shift over {flight} m = {:.2e} m; same {pixel:.0e} m pixel: {}",
        deflection.angle,
        deflection.refractive_decrement,
        deflection.transverse_shift(flight),
        deflection.same_pixel(flight, pixel)
    );

    let comparison = transverse_profile_compare(
        &TransverseProfile {
            center: (0.0, 0.0),
            sigma: 1e-6,
        },
        &CoherenceParams {
            sigma_x: 5e-6,
            sigma_z: 8e-8,
            aperture,
            wavelength,
        },
    )?;
    println!(
        "\ntransverse coherence: σ_x/σ_z = {:.1} (anisotropy flagged: {})",
        comparison.anisotropy_ratio, comparison.anisotropy_flagged
    );
    Ok(())
}
