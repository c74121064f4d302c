//! Digital-holography reconstruction via the discrete Fresnel transform.
//!
//! The transform of an N×N input h is
//!
//! ```text
//! Γ(m,n) = i/(λd) · exp[-iπλd (m²/(N²Δx²) + n²/(N²Δy²))]
//!          · Σ_{k,l} h(k,l) · exp[-iπ (k²Δx² + l²Δy²)/(λd)]
//!                          · exp[+i2π (km + ln)/N]
//! ```
//!
//! i.e. a chirp pre-multiplication, an unnormalized positive-exponent DFT
//! (an inverse-style FFT without the 1/N² factor), and a chirp-and-prefactor
//! post-multiplication. `lambda_d`, `delta_x` and `delta_y` must be given in
//! consistent units (e.g. λd in mm² with sample pitches in mm).

use crate::error::{Error, Result};
use crate::interferogram::InterferogramGrid;
use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Parameters of the discrete Fresnel transform.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionParams {
    /// Product λ·d of wavelength and reconstruction distance.
    pub lambda_d: f64,
    /// Square grid size.
    pub n: usize,
    /// Input sample pitch along x (same units as √λd).
    pub delta_x: f64,
    /// Input sample pitch along y.
    pub delta_y: f64,
}

impl Default for ReconstructionParams {
    fn default() -> Self {
        ReconstructionParams {
            lambda_d: 70.0,
            n: 100,
            delta_x: 1.0,
            delta_y: 1.0,
        }
    }
}

impl ReconstructionParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda_d > 0.0) {
            return Err(Error::Domain("lambda_d must be > 0".into()));
        }
        if self.n < 2 {
            return Err(Error::Domain("grid size N must be >= 2".into()));
        }
        if !(self.delta_x > 0.0 && self.delta_y > 0.0) {
            return Err(Error::Domain("sample pitches must be > 0".into()));
        }
        Ok(())
    }
}

/// Complex reconstruction field Γ(m,n), row-major with n as the row index.
#[derive(Clone, Debug)]
pub struct ComplexField {
    pub n: usize,
    pub params: ReconstructionParams,
    data: Vec<Complex64>,
}

impl ComplexField {
    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn get(&self, m: usize, n_idx: usize) -> Complex64 {
        self.data[n_idx * self.n + m]
    }
}

/// Discrete Fresnel transform of an N×N complex grid (row-major, row index
/// pairs with Δy).
pub fn discrete_fresnel_transform(
    h: &[Complex64],
    params: &ReconstructionParams,
) -> Result<ComplexField> {
    params.validate()?;
    let n = params.n;
    if h.len() != n * n {
        return Err(Error::Shape(format!(
            "input has {} samples, expected {}x{}",
            h.len(),
            n,
            n
        )));
    }
    let lam_d = params.lambda_d;
    let dx2 = params.delta_x * params.delta_x;
    let dy2 = params.delta_y * params.delta_y;

    // Chirp pre-multiplication.
    let mut buf: Vec<Complex64> = Vec::with_capacity(n * n);
    for l in 0..n {
        let ly = (l * l) as f64 * dy2;
        for k in 0..n {
            let kx = (k * k) as f64 * dx2;
            let chirp = Complex64::new(0.0, -PI * (kx + ly) / lam_d).exp();
            buf.push(h[l * n + k] * chirp);
        }
    }

    // Unnormalized positive-exponent DFT: inverse FFT over rows, then
    // columns, without any 1/N scaling.
    fft2_inplace(&mut buf, n, FftDirection::Inverse);

    // Prefactor and output chirp.
    let nn = (n * n) as f64;
    for n_idx in 0..n {
        let ny = (n_idx * n_idx) as f64 / (nn * dy2);
        for m in 0..n {
            let mx = (m * m) as f64 / (nn * dx2);
            let chirp = Complex64::new(0.0, -PI * lam_d * (mx + ny)).exp();
            buf[n_idx * n + m] *= Complex64::new(0.0, 1.0 / lam_d) * chirp;
        }
    }
    Ok(ComplexField {
        n,
        params: *params,
        data: buf,
    })
}

fn fft2_inplace(data: &mut [Complex64], n: usize, direction: FftDirection) {
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft(n, direction);
    let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
    for row in data.chunks_exact_mut(n) {
        fft.process_with_scratch(row, &mut scratch);
    }
    let mut transposed = transpose(data, n);
    for row in transposed.chunks_exact_mut(n) {
        fft.process_with_scratch(row, &mut scratch);
    }
    let back = transpose(&transposed, n);
    data.copy_from_slice(&back);
}

fn transpose(data: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::default(); n * n];
    for j in 0..n {
        for i in 0..n {
            out[i * n + j] = data[j * n + i];
        }
    }
    out
}

/// Intensity, phase and phase-validity mask of a reconstruction.
#[derive(Clone, Debug)]
pub struct Reconstruction {
    pub n: usize,
    pub intensity: Vec<f64>,
    /// Four-quadrant phase in (-π, π]; 0 where `valid` is false.
    pub phase: Vec<f64>,
    /// False where |Γ| = 0 and the phase is undefined.
    pub valid: Vec<bool>,
}

/// Reconstruct intensity |Γ|² and phase arg Γ from an interferogram.
///
/// Inputs larger than N×N are center-cropped to an integer multiple of N
/// and block-averaged down; an exactly N×N input passes through unchanged.
pub fn reconstruct(
    pattern: &InterferogramGrid,
    params: &ReconstructionParams,
) -> Result<Reconstruction> {
    params.validate()?;
    let n = params.n;
    let g = pattern.geometry();
    if g.cols < n || g.rows < n {
        return Err(Error::Resample(format!(
            "pattern {}x{} smaller than reconstruction grid {}x{}",
            g.cols, g.rows, n, n
        )));
    }
    let factor = (g.cols.min(g.rows)) / n;
    let side = factor * n;
    let off_i = (g.cols - side) / 2;
    let off_j = (g.rows - side) / 2;
    let inv = 1.0 / (factor * factor) as f64;
    let mut h = Vec::with_capacity(n * n);
    for bj in 0..n {
        for bi in 0..n {
            let mut acc = 0.0;
            for dj in 0..factor {
                let row = pattern.intensity.row(off_j + bj * factor + dj);
                for di in 0..factor {
                    acc += row[off_i + bi * factor + di];
                }
            }
            h.push(Complex64::new(acc * inv, 0.0));
        }
    }
    let field = discrete_fresnel_transform(&h, params)?;
    Ok(field_to_reconstruction(&field))
}

pub fn field_to_reconstruction(field: &ComplexField) -> Reconstruction {
    let mut intensity = Vec::with_capacity(field.data.len());
    let mut phase = Vec::with_capacity(field.data.len());
    let mut valid = Vec::with_capacity(field.data.len());
    for c in &field.data {
        let mag2 = c.norm_sqr();
        intensity.push(mag2);
        if mag2 == 0.0 {
            phase.push(0.0);
            valid.push(false);
        } else {
            let mut p = c.im.atan2(c.re);
            if p <= -PI {
                p += 2.0 * PI;
            }
            phase.push(p);
            valid.push(true);
        }
    }
    Reconstruction {
        n: field.n,
        intensity,
        phase,
        valid,
    }
}

/// Physical output-plane sample pitches (ξ, η): adjacent output indices are
/// separated by λd/(NΔx) and λd/(NΔy), so ν = 1 maps to ξ = λd.
pub fn fresnel_kernel_scale(params: &ReconstructionParams) -> Result<(f64, f64)> {
    params.validate()?;
    Ok((
        params.lambda_d / (params.n as f64 * params.delta_x),
        params.lambda_d / (params.n as f64 * params.delta_y),
    ))
}
