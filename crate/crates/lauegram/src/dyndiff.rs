//! Two-beam dynamical Laue diffraction in a perfect crystal.
//!
//! A plane wave incident near the Bragg angle on a perfect crystal plate
//! excites two wavefields (the α and β branches of the dispersion surface).
//! Behind the plate the forward (O) and diffracted (G) beams are coherent
//! sums of both branches; their amplitudes are the crystal functions
//! `v0` and `vG`. On the rocking-curve scale everything is controlled by two
//! dimensionless numbers: the deviation parameter `y` and the thickness
//! parameter `A1`.
//!
//! The closed forms used for the branch amplitude ratios and excitation
//! errors are the standard symmetric-Laue two-beam results
//! `X_{1,2} = -y ± sqrt(1+y²)`; assembling the crystal functions from them
//! reproduces the rocking-curve intensities exactly, which the tests pin
//! down to machine precision.

use crate::constants::{HBAR, NEUTRON_MASS};
use crate::error::{Error, Result};
use crate::numerics::adaptive_simpson;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Perfect-crystal and beam parameters feeding dynamical diffraction.
///
/// All quantities SI: `wavelength` in m, `fourier_potential` (the Fourier
/// component V(G) of the lattice potential) and `neutron_energy` in J,
/// `asymmetry_cos` is cos γ = k⊥/k, `lattice_spacing` the Bragg-plane
/// spacing used for Moiré estimates.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct CrystalParams {
    pub wavelength: f64,
    pub bragg_angle: f64,
    pub plate_thickness: f64,
    pub fourier_potential: f64,
    pub neutron_energy: f64,
    pub asymmetry_cos: f64,
    pub lattice_spacing: f64,
}

impl CrystalParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.wavelength > 0.0) {
            return Err(Error::Domain("wavelength must be > 0".into()));
        }
        if !(self.bragg_angle > 0.0 && self.bragg_angle < std::f64::consts::FRAC_PI_2) {
            return Err(Error::Domain("bragg_angle must lie in (0, π/2)".into()));
        }
        if !(self.plate_thickness > 0.0) {
            return Err(Error::Domain("plate_thickness must be > 0".into()));
        }
        if !(self.asymmetry_cos > 0.0 && self.asymmetry_cos <= 1.0) {
            return Err(Error::Domain("asymmetry_cos must lie in (0, 1]".into()));
        }
        if !(self.neutron_energy > 0.0) {
            return Err(Error::Domain("neutron_energy must be > 0".into()));
        }
        if !(self.lattice_spacing > 0.0) {
            return Err(Error::Domain("lattice_spacing must be > 0".into()));
        }
        Ok(())
    }

    /// Vacuum wavenumber k = 2π/λ.
    pub fn wavenumber(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.wavelength
    }
}

/// One point on the rocking curve: deviation parameter `y` and thickness
/// parameter `a1`.
#[derive(Clone, Copy, Debug)]
pub struct RockingPoint {
    /// Dimensionless deviation from the Bragg angle, y ≈ -2 sin(Θ_B) δΘ_B.
    pub y: f64,
    /// Dimensionless thickness parameter, see [`a1_parameter`].
    pub a1: f64,
}

/// Branch amplitude ratios and excitation errors of the two wavefields.
#[derive(Clone, Copy, Debug)]
pub struct BranchAmplitudes {
    /// Amplitude ratio u(G)/u(0) on the α branch.
    pub x1: f64,
    /// Amplitude ratio u(G)/u(0) on the β branch.
    pub x2: f64,
    /// Excitation error of the α branch (dimensionless, multiplies k).
    pub eps1: f64,
    /// Excitation error of the β branch (dimensionless, multiplies k).
    pub eps2: f64,
}

/// Forward and diffracted complex amplitudes behind one plate.
#[derive(Clone, Copy, Debug)]
pub struct CrystalFunctions {
    pub v0: Complex64,
    pub v_g: Complex64,
}

/// Branch amplitude ratios X₁,₂ = -y ± √(1+y²) and the matching excitation
/// errors for a plate described by `params`.
///
/// The excitation errors are scaled so that k ε_{1,2} D / cos γ =
/// A1 (-y ± √(1+y²)); with that choice the assembled crystal functions
/// reproduce the closed-form rocking-curve intensities.
pub fn branch_amplitudes(params: &CrystalParams, y: f64) -> Result<BranchAmplitudes> {
    params.validate()?;
    if !y.is_finite() {
        return Err(Error::Domain("deviation parameter y must be finite".into()));
    }
    let root = (1.0 + y * y).sqrt();
    let a1 = a1_parameter(params)?;
    let scale = params.asymmetry_cos / (params.wavenumber() * params.plate_thickness);
    Ok(BranchAmplitudes {
        x1: -y + root,
        x2: -y - root,
        eps1: a1 * (-y + root) * scale,
        eps2: a1 * (-y - root) * scale,
    })
}

/// Crystal functions (v0, vG) behind one plate, assembled from the branch
/// amplitudes:
///
/// v0 = (X₂ e^{i k ε₁ D / cos γ} - X₁ e^{i k ε₂ D / cos γ}) / (X₂ - X₁)
/// vG = X₁ X₂ (e^{i k ε₁ D / cos γ} - e^{i k ε₂ D / cos γ}) / (X₂ - X₁)
pub fn crystal_functions(params: &CrystalParams, y: f64) -> Result<CrystalFunctions> {
    let b = branch_amplitudes(params, y)?;
    let denom = b.x2 - b.x1;
    if denom == 0.0 {
        return Err(Error::Numerics(
            "degenerate branches: X2 == X1 (cannot occur for real y)".into(),
        ));
    }
    let k = params.wavenumber();
    let d_over_cos = params.plate_thickness / params.asymmetry_cos;
    let phase1 = Complex64::new(0.0, k * b.eps1 * d_over_cos).exp();
    let phase2 = Complex64::new(0.0, k * b.eps2 * d_over_cos).exp();
    let v0 = (b.x2 * phase1 - b.x1 * phase2) / denom;
    let v_g = b.x1 * b.x2 * (phase1 - phase2) / denom;
    Ok(CrystalFunctions { v0, v_g })
}

/// Rocking-curve intensities behind one plate:
/// IG = sin²(A1 √(1+y²)) / (1+y²) and I0 = 1 - IG.
pub fn laue_intensities(point: &RockingPoint) -> Result<(f64, f64)> {
    if !(point.a1 > 0.0) {
        return Err(Error::Domain("A1 must be > 0".into()));
    }
    let root = (1.0 + point.y * point.y).sqrt();
    let ig = (point.a1 * root).sin().powi(2) / (1.0 + point.y * point.y);
    Ok((ig, 1.0 - ig))
}

/// Thickness parameter A1 = k V(G) D / (2 cos γ E).
pub fn a1_parameter(params: &CrystalParams) -> Result<f64> {
    params.validate()?;
    Ok(params.wavenumber() * params.fourier_potential * params.plate_thickness
        / (2.0 * params.asymmetry_cos * params.neutron_energy))
}

/// Interferometer output intensities for a phase shift χ between the paths:
/// IO = ½ |ψ0|² (1 + cos χ), IG = |ψ0|² - IO, so IO + IG is constant.
pub fn two_path_intensity(psi0_sq: f64, chi: f64) -> Result<(f64, f64)> {
    if psi0_sq < 0.0 {
        return Err(Error::Domain("|ψ0|² must be >= 0".into()));
    }
    let io = 0.5 * psi0_sq * (1.0 + chi.cos());
    Ok((io, psi0_sq - io))
}

/// Spectral and transverse description of the incident Gaussian wave packet.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct WavePacketSpec {
    /// Mean wavenumber k0, 1/m.
    pub k0: f64,
    /// Spectral width δk, 1/m.
    pub delta_k: f64,
    /// Horizontal transverse coherence length, m.
    pub sigma_x: f64,
    /// Vertical transverse coherence length, m.
    pub sigma_z: f64,
}

impl WavePacketSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.delta_k > 0.0) {
            return Err(Error::Domain("delta_k must be > 0".into()));
        }
        if !(self.k0 > 0.0) {
            return Err(Error::Domain("k0 must be > 0".into()));
        }
        if !(self.sigma_x > 0.0 && self.sigma_z > 0.0) {
            return Err(Error::Domain("coherence lengths must be > 0".into()));
        }
        Ok(())
    }
}

/// Gaussian spectral amplitude
/// Γ(k - k0) = [2π (δk)²]^{-1/4} exp[-(k/k0 - 1)² / (4 (δk/k0)²)],
/// normalized so that ∫ |Γ|² dk = 1.
pub fn gaussian_spectrum(spec: &WavePacketSpec, k: f64) -> Result<f64> {
    spec.validate()?;
    if !(k > 0.0) {
        return Err(Error::Domain("wavenumber must be > 0".into()));
    }
    let norm = (2.0 * std::f64::consts::PI * spec.delta_k * spec.delta_k).powf(-0.25);
    let ratio = (k / spec.k0 - 1.0) / (2.0 * spec.delta_k / spec.k0);
    Ok(norm * (-ratio * ratio).exp())
}

/// Free-space wave packet
/// ψ(x, t) = (2π)^{-1/2} ∫ Γ(k - k0) e^{i (k x - Ω t)} dk with
/// Ω = ħ k² / (2 m), integrated adaptively over k0 ± 8 δk.
pub fn packet_evaluate(spec: &WavePacketSpec, x: f64, t: f64) -> Result<Complex64> {
    spec.validate()?;
    if !x.is_finite() || !t.is_finite() {
        return Err(Error::Domain("x and t must be finite".into()));
    }
    let norm = (2.0 * std::f64::consts::PI * spec.delta_k * spec.delta_k).powf(-0.25);
    let k0 = spec.k0;
    let dk = spec.delta_k;
    let omega_scale = HBAR / (2.0 * NEUTRON_MASS);
    let integrand = move |k: f64| {
        let ratio = (k - k0) / (2.0 * dk);
        let gamma = norm * (-ratio * ratio).exp();
        gamma * Complex64::new(0.0, k * x - omega_scale * k * k * t).exp()
    };
    let lo = k0 - 8.0 * dk;
    let hi = k0 + 8.0 * dk;
    let integral = adaptive_simpson(&integrand, lo, hi, 1e-8)?;
    Ok(integral / (2.0 * std::f64::consts::PI).sqrt())
}

/// Group velocity ħ k0 / m of the packet envelope.
pub fn group_velocity(spec: &WavePacketSpec) -> f64 {
    HBAR * spec.k0 / NEUTRON_MASS
}

/// Base width 2 D tan(Θ_B) of the Borrmann triangle spanned inside the
/// plate between the O and G directions.
pub fn borrmann_fan_width(params: &CrystalParams) -> Result<f64> {
    params.validate()?;
    Ok(2.0 * params.plate_thickness * params.bragg_angle.tan())
}

/// Moiré magnification M = d_f / |d_f - d_l| of a fringe pattern of spacing
/// `fringe_d` beating against an analyzer lattice of spacing `lattice_d`.
/// Coinciding spacings magnify infinitely; that is reported as `f64::INFINITY`.
pub fn moire_magnification(lattice_d: f64, fringe_d: f64) -> Result<f64> {
    if !(lattice_d > 0.0 && fringe_d > 0.0) {
        return Err(Error::Domain("spacings must be > 0".into()));
    }
    let beat = (fringe_d - lattice_d).abs();
    if beat == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(fringe_d / beat)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn si_220_params() -> CrystalParams {
        // Si (220) at 2.71 Å; V(G) from the delta-potential Fourier
        // component 2π ħ² N b_c / m.
        CrystalParams {
            wavelength: 2.71e-10,
            bragg_angle: 0.7843,
            plate_thickness: 4.46e-3,
            fourier_potential: 8.649e-27,
            neutron_energy: 1.7846e-21,
            asymmetry_cos: 1.0,
            lattice_spacing: 1.92e-10,
        }
    }

    /// Params engineered so that A1 comes out exactly as requested.
    fn params_with_a1(a1: f64) -> CrystalParams {
        let mut p = si_220_params();
        // A1 = k V D / (2 cos γ E); solve for V.
        p.fourier_potential =
            a1 * 2.0 * p.asymmetry_cos * p.neutron_energy / (p.wavenumber() * p.plate_thickness);
        p
    }

    #[test]
    fn branch_symmetry_at_exact_bragg() {
        let b = branch_amplitudes(&si_220_params(), 0.0).unwrap();
        assert_eq!(b.x1, 1.0);
        assert_eq!(b.x2, -1.0);
    }

    #[test]
    fn branch_product_is_minus_one() {
        // (-y + √(1+y²))(-y - √(1+y²)) = y² - (1+y²) = -1
        let p = si_220_params();
        for &y in &[-10.0, -2.5, -0.3, 0.0, 0.7, 4.2, 10.0] {
            let b = branch_amplitudes(&p, y).unwrap();
            assert!((b.x1 * b.x2 + 1.0).abs() < 1e-12, "y = {y}");
        }
    }

    #[test]
    fn single_branch_limit_at_large_y() {
        let b = branch_amplitudes(&si_220_params(), 1e6).unwrap();
        assert!(b.x1.abs() < 1e-5);
        assert!(b.x2.abs() > 1e5);
    }

    #[test]
    fn crystal_functions_unitary() {
        let p = params_with_a1(3.7);
        for &y in &[-8.0, -1.0, 0.0, 0.5, 2.0, 9.0] {
            let cf = crystal_functions(&p, y).unwrap();
            let total = cf.v0.norm_sqr() + cf.v_g.norm_sqr();
            assert!((total - 1.0).abs() < 1e-12, "y = {y}: {total}");
        }
    }

    #[test]
    fn full_transfer_at_quarter_pendelloesung() {
        let p = params_with_a1(std::f64::consts::FRAC_PI_2);
        let cf = crystal_functions(&p, 0.0).unwrap();
        assert!((cf.v_g.norm_sqr() - 1.0).abs() < 1e-12);
        assert!(cf.v0.norm_sqr() < 1e-12);
    }

    #[test]
    fn pendelloesung_node_at_a1_pi() {
        let p = params_with_a1(std::f64::consts::PI);
        let cf = crystal_functions(&p, 0.0).unwrap();
        assert!(cf.v_g.norm_sqr() < 1e-12);
    }

    #[test]
    fn assembled_intensity_matches_closed_form() {
        // |vG|² from Eqs-style assembly against the closed rocking-curve
        // formula over a (y, A1) grid.
        for iy in 0..40 {
            let y = -10.0 + 20.0 * iy as f64 / 39.0;
            for ia in 1..=20 {
                let a1 = ia as f64;
                let p = params_with_a1(a1);
                let cf = crystal_functions(&p, y).unwrap();
                let (ig, _) = laue_intensities(&RockingPoint { y, a1 }).unwrap();
                assert!(
                    (cf.v_g.norm_sqr() - ig).abs() < 1e-10,
                    "y = {y}, A1 = {a1}"
                );
            }
        }
    }

    #[test]
    fn laue_intensity_values() {
        let (ig, i0) = laue_intensities(&RockingPoint {
            y: 0.0,
            a1: std::f64::consts::FRAC_PI_2,
        })
        .unwrap();
        assert!((ig - 1.0).abs() < 1e-15);
        assert!(i0.abs() < 1e-15);

        // Direct evaluation of sin²(A1 √2)/2 at A1 = π/2, y = 1.
        let (ig, _) = laue_intensities(&RockingPoint {
            y: 1.0,
            a1: std::f64::consts::FRAC_PI_2,
        })
        .unwrap();
        assert!((ig - 0.3165638355103539).abs() < 1e-12);

        // Cross-check against the assembled crystal functions.
        let p = params_with_a1(std::f64::consts::FRAC_PI_2);
        let cf = crystal_functions(&p, 1.0).unwrap();
        assert!((cf.v_g.norm_sqr() - ig).abs() < 1e-12);
    }

    #[test]
    fn rocking_curve_envelope_and_symmetry() {
        let (ig, _) = laue_intensities(&RockingPoint { y: 1e4, a1: 5.0 }).unwrap();
        assert!(ig < 1e-7);
        for &y in &[0.3, 1.7, 6.4] {
            let (plus, _) = laue_intensities(&RockingPoint { y, a1: 2.2 }).unwrap();
            let (minus, _) = laue_intensities(&RockingPoint { y: -y, a1: 2.2 }).unwrap();
            assert_eq!(plus, minus);
        }
    }

    #[test]
    fn a1_linear_in_thickness_and_zero_without_potential() {
        let p = si_220_params();
        let a1 = a1_parameter(&p).unwrap();
        let mut doubled = p;
        doubled.plate_thickness *= 2.0;
        assert!((a1_parameter(&doubled).unwrap() - 2.0 * a1).abs() < 1e-9 * a1.abs());

        let mut empty = p;
        empty.fourier_potential = 0.0;
        assert_eq!(a1_parameter(&empty).unwrap(), 0.0);
    }

    #[test]
    fn two_path_complementarity() {
        let (io, ig) = two_path_intensity(2.0, 0.0).unwrap();
        assert_eq!(io, 2.0);
        assert_eq!(ig, 0.0);
        let (io, _) = two_path_intensity(2.0, std::f64::consts::PI).unwrap();
        assert!(io.abs() < 1e-15);
        for i in 0..100 {
            let chi = -7.0 + 14.0 * i as f64 / 99.0;
            let (io, ig) = two_path_intensity(1.3, chi).unwrap();
            assert!((io + ig - 1.3).abs() < 1e-12);
            assert!(io >= 0.0 && ig >= 0.0);
        }
    }

    fn packet() -> WavePacketSpec {
        WavePacketSpec {
            k0: 1e10,
            delta_k: 5e7,
            sigma_x: 5e-6,
            sigma_z: 8e-8,
        }
    }

    #[test]
    fn spectrum_peak_and_falloff() {
        let spec = packet();
        let peak = gaussian_spectrum(&spec, spec.k0).unwrap();
        let expected =
            (2.0 * std::f64::consts::PI * spec.delta_k * spec.delta_k).powf(-0.25);
        assert!((peak - expected).abs() < 1e-12 * expected);
        let shifted = gaussian_spectrum(&spec, spec.k0 + spec.delta_k).unwrap();
        assert!((shifted / peak - (-0.25f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn spectrum_normalized() {
        // Simpson quadrature of |Γ|² over k0 ± 8 δk.
        let spec = packet();
        let n = 4000;
        let lo = spec.k0 - 8.0 * spec.delta_k;
        let hi = spec.k0 + 8.0 * spec.delta_k;
        let h = (hi - lo) / n as f64;
        let mut acc = 0.0;
        for i in 0..=n {
            let k = lo + i as f64 * h;
            let w = if i == 0 || i == n {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            acc += w * gaussian_spectrum(&spec, k).unwrap().powi(2);
        }
        acc *= h / 3.0;
        assert!((acc - 1.0).abs() < 1e-6);
    }

    #[test]
    fn packet_envelope_gaussian_at_t0() {
        // |ψ(x, 0)| ∝ exp(-x² δk²): spatial envelope width 1/(2 δk).
        let spec = packet();
        let center = packet_evaluate(&spec, 0.0, 0.0).unwrap().norm();
        let sigma = 1.0 / (2.0 * spec.delta_k);
        let at_sigma = packet_evaluate(&spec, sigma, 0.0).unwrap().norm();
        assert!((at_sigma / center - (-0.25f64).exp()).abs() < 1e-6);
    }

    #[test]
    fn packet_moves_at_group_velocity() {
        // Locate the envelope peak at t1 by scanning |ψ| on a fine grid and
        // refining with a parabola; brute-force quadrature is the oracle.
        let spec = packet();
        let vg = group_velocity(&spec);
        let sigma = 1.0 / (2.0 * spec.delta_k);
        let t1 = 10.0 * sigma / vg;
        let expected = vg * t1;

        let mut best = (0.0f64, f64::MIN);
        let n = 80;
        for i in 0..=n {
            let x = expected + sigma * (-2.0 + 4.0 * i as f64 / n as f64);
            let a = packet_evaluate(&spec, x, t1).unwrap().norm();
            if a > best.1 {
                best = (x, a);
            }
        }
        let dx = sigma * 4.0 / n as f64;
        let (x0, _) = best;
        let f = |x: f64| packet_evaluate(&spec, x, t1).unwrap().norm();
        let (ym, y0, yp) = (f(x0 - dx), f(x0), f(x0 + dx));
        let refined = x0 + 0.5 * dx * (ym - yp) / (ym - 2.0 * y0 + yp);
        assert!(
            (refined - expected).abs() < 0.02 * sigma,
            "peak at {refined}, expected {expected}"
        );
    }

    #[test]
    fn packet_probability_conserved() {
        let spec = packet();
        let sigma = 1.0 / (2.0 * spec.delta_k);
        let vg = group_velocity(&spec);
        let t1 = 4.0 * sigma / vg;
        let norm_at = |t: f64, center: f64| -> f64 {
            let n = 600;
            let lo = center - 8.0 * sigma;
            let h = 16.0 * sigma / n as f64;
            let mut acc = 0.0;
            for i in 0..=n {
                let x = lo + i as f64 * h;
                let w = if i == 0 || i == n {
                    1.0
                } else if i % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                acc += w * packet_evaluate(&spec, x, t).unwrap().norm_sqr();
            }
            acc * h / 3.0
        };
        let p0 = norm_at(0.0, 0.0);
        let p1 = norm_at(t1, vg * t1);
        assert!((p1 / p0 - 1.0).abs() < 1e-4, "p0 = {p0}, p1 = {p1}");
    }

    #[test]
    fn borrmann_width_matches_geometry() {
        let mut p = si_220_params();
        p.bragg_angle = 30f64.to_radians();
        let w = borrmann_fan_width(&p).unwrap();
        assert!((w - 5.149964401171462e-3).abs() < 1e-12);
        // Linear in D.
        p.plate_thickness *= 3.0;
        assert!((borrmann_fan_width(&p).unwrap() - 3.0 * w).abs() < 1e-12);
    }

    proptest::proptest! {
        #[test]
        fn unitarity_for_random_parameters(y in -10.0..10.0f64, a1 in 0.05..20.0f64) {
            let cf = crystal_functions(&params_with_a1(a1), y).unwrap();
            proptest::prop_assert!((cf.v0.norm_sqr() + cf.v_g.norm_sqr() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn two_path_total_constant_for_random_sweeps(
            psi0_sq in 0.0..10.0f64,
            chi in -50.0..50.0f64,
        ) {
            let (io, ig) = two_path_intensity(psi0_sq, chi).unwrap();
            proptest::prop_assert!((io + ig - psi0_sq).abs() < 1e-12);
            proptest::prop_assert!(io >= 0.0 && ig >= -1e-15);
        }

        #[test]
        fn rocking_curve_even_in_y(y in 0.0..10.0f64, a1 in 0.05..20.0f64) {
            let (plus, _) = laue_intensities(&RockingPoint { y, a1 }).unwrap();
            let (minus, _) = laue_intensities(&RockingPoint { y: -y, a1 }).unwrap();
            proptest::prop_assert_eq!(plus, minus);
        }
    }

    #[test]
    fn moire_magnification_values() {
        let d = 1.92e-10;
        let m = moire_magnification(d, d * (1.0 + 1e-7)).unwrap();
        assert!((m / 1e7 - 1.0).abs() < 1e-3);
        assert!((moire_magnification(d, 2.0 * d).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(moire_magnification(d, d).unwrap(), f64::INFINITY);
        // Diverges monotonically as the spacings approach.
        let mut last = 0.0;
        for &eps in &[1e-2, 1e-4, 1e-6, 1e-8] {
            let m = moire_magnification(d, d * (1.0 + eps)).unwrap();
            assert!(m > last);
            last = m;
        }
    }
}
