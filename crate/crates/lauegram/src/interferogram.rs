//! Interference pattern synthesis and fork-dislocation analysis.
//!
//! Two routes produce a 2D pattern:
//!
//! - [`synthesize_interferogram`] — the point-to-point model: every detector
//!   position sees the phase 2π (D_I(u,v) + D_II(u,v)) / D_λ accumulated from
//!   the thickness maps of both paths, with a phase-flag offset φ₀. The O
//!   port carries ½(1 + cos), the G port the complement.
//! - [`synthesize_oam_model`] — the closed-form comparison model
//!   I = A + B cos(k v - q φ + θ) with integer topological charge q and the
//!   azimuth φ about the grid center.
//!
//! [`bin_to_detector`] block-averages a supersampled pattern onto detector
//! pixels; [`fork_fringe_count`] recovers the dislocation order from either
//! pattern by counting fringe maxima along two cut lines flanking the
//! dislocation.

use crate::error::{Error, Result};
use crate::grid::{GridGeometry, ScalarGrid};
use crate::phase_objects::ThicknessMap;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Output port of the interferometer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Port {
    O,
    G,
}

impl Port {
    pub fn label(&self) -> &'static str {
        match self {
            Port::O => "O",
            Port::G => "G",
        }
    }
}

/// Position-sensitive detector: square pixels of `pixel_pitch` meters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectorSpec {
    pub pixel_pitch: f64,
    pub width: usize,
    pub height: usize,
    pub port: Port,
}

impl DetectorSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.pixel_pitch > 0.0) {
            return Err(Error::Domain("pixel_pitch must be > 0".into()));
        }
        if self.width < 1 || self.height < 1 {
            return Err(Error::Domain("detector must be at least 1x1".into()));
        }
        Ok(())
    }
}

/// A synthesized 2D intensity pattern plus its provenance.
#[derive(Clone, Debug)]
pub struct InterferogramGrid {
    pub intensity: ScalarGrid,
    pub port: Port,
    pub phi0: f64,
    /// Phase-shifting 2π-thickness for pattern provenance (absent for the
    /// closed-form model).
    pub d_lambda: Option<f64>,
    /// Human-readable scene description for sidecar metadata.
    pub scene: String,
}

impl InterferogramGrid {
    pub fn geometry(&self) -> &GridGeometry {
        &self.intensity.geometry
    }
}

/// Closed-form fringe model parameters: I = A + B cos(k_fringe v - q φ + θ).
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct OamModelParams {
    /// Transverse fringe wavenumber, rad/m (fringe period 2π/k).
    pub k_fringe: f64,
    /// Integer topological charge.
    pub q: i32,
    /// Phase offset θ.
    pub theta: f64,
    /// Mean intensity A.
    pub a: f64,
    /// Modulation amplitude B (|B| <= A keeps intensity non-negative).
    pub b: f64,
}

impl OamModelParams {
    pub fn validate(&self) -> Result<()> {
        if self.b.abs() > self.a {
            return Err(Error::Domain(
                "modulation B must not exceed mean intensity A".into(),
            ));
        }
        Ok(())
    }
}

/// Point-to-point interference of the two paths:
/// I_O(u,v) = ½ (1 + cos[φ₀ + 2π (D_I + D_II) / D_λ]), I_G = 1 - I_O.
///
/// Thickness maps of the two paths must share the grid geometry; either may
/// be `None` for an empty path.
pub fn synthesize_interferogram(
    path_i: Option<&ThicknessMap>,
    path_ii: Option<&ThicknessMap>,
    d_lambda: f64,
    phi0: f64,
    port: Port,
) -> Result<InterferogramGrid> {
    if !(d_lambda > 0.0) {
        return Err(Error::Domain("d_lambda must be > 0".into()));
    }
    let geometry = match (path_i, path_ii) {
        (Some(a), Some(b)) => {
            if !a.geometry().same_as(b.geometry()) {
                return Err(Error::Shape(
                    "path thickness maps have different grid geometry".into(),
                ));
            }
            *a.geometry()
        }
        (Some(a), None) => *a.geometry(),
        (None, Some(b)) => *b.geometry(),
        (None, None) => {
            return Err(Error::Shape(
                "at least one path thickness map is required".into(),
            ))
        }
    };
    use rayon::prelude::*;
    let cols = geometry.cols;
    let mut data = vec![0.0; geometry.len()];
    data.par_chunks_mut(cols).enumerate().for_each(|(j, row)| {
        let d1_row = path_i.map(|m| m.grid.row(j));
        let d2_row = path_ii.map(|m| m.grid.row(j));
        for (i, out) in row.iter_mut().enumerate() {
            let d1 = d1_row.map_or(0.0, |r| r[i]);
            let d2 = d2_row.map_or(0.0, |r| r[i]);
            let chi = phi0 + TAU * (d1 + d2) / d_lambda;
            *out = match port {
                Port::O => 0.5 * (1.0 + chi.cos()),
                Port::G => 0.5 * (1.0 - chi.cos()),
            };
        }
    });
    let intensity = ScalarGrid::from_data(geometry, data)?;
    Ok(InterferogramGrid {
        intensity,
        port,
        phi0,
        d_lambda: Some(d_lambda),
        scene: String::new(),
    })
}

/// Closed-form fringe pattern over the given grid; φ is the
/// counterclockwise azimuth about the grid center. The spiral-plate
/// thickness winds clockwise, so a stack of q unit-step plates and this
/// model with charge q produce the same fork.
pub fn synthesize_oam_model(
    params: &OamModelParams,
    geometry: GridGeometry,
) -> Result<InterferogramGrid> {
    synthesize_oam_model_rotated(params, geometry, 0.0)
}

/// [`synthesize_oam_model`] with the whole pattern rotated by `rotation`
/// (counterclockwise, rad) about the grid center.
pub fn synthesize_oam_model_rotated(
    params: &OamModelParams,
    geometry: GridGeometry,
    rotation: f64,
) -> Result<InterferogramGrid> {
    params.validate()?;
    let center_u = geometry.origin_u + geometry.width() / 2.0;
    let center_v = geometry.origin_v + geometry.height() / 2.0;
    let q = params.q as f64;
    let (k, theta, a, b) = (params.k_fringe, params.theta, params.a, params.b);
    let (sin_r, cos_r) = rotation.sin_cos();
    let intensity = ScalarGrid::from_fn(geometry, |u, v| {
        let (du, dv) = (u - center_u, v - center_v);
        // Sample the unrotated pattern at the back-rotated point.
        let u_src = du * cos_r + dv * sin_r;
        let v_src = -du * sin_r + dv * cos_r;
        let mut phi = v_src.atan2(u_src);
        if phi < 0.0 {
            phi += TAU;
        }
        a + b * (k * v_src - q * phi + theta).cos()
    });
    Ok(InterferogramGrid {
        intensity,
        port: Port::O,
        phi0: theta,
        d_lambda: None,
        scene: format!("closed-form fringe model, q = {}", params.q),
    })
}

/// Block-average a supersampled pattern onto detector pixels. The fine pitch
/// must divide the detector pixel pitch by an integer factor.
pub fn bin_to_detector(fine: &InterferogramGrid, det: &DetectorSpec) -> Result<InterferogramGrid> {
    det.validate()?;
    let ratio = det.pixel_pitch / fine.geometry().pitch;
    let factor = ratio.round();
    if factor < 1.0 || (ratio - factor).abs() > 1e-9 * ratio {
        return Err(Error::Resample(format!(
            "detector pitch {} is not an integer multiple of the fine pitch {}",
            det.pixel_pitch,
            fine.geometry().pitch
        )));
    }
    let binned = fine.intensity.block_mean(factor as usize)?;
    if binned.geometry.cols != det.width || binned.geometry.rows != det.height {
        return Err(Error::Resample(format!(
            "binned grid {}x{} does not match detector {}x{}",
            binned.geometry.cols, binned.geometry.rows, det.width, det.height
        )));
    }
    Ok(InterferogramGrid {
        intensity: binned,
        port: fine.port,
        phi0: fine.phi0,
        d_lambda: fine.d_lambda,
        scene: fine.scene.clone(),
    })
}

/// Offset of the fork cut lines from the dislocation, in pixels.
const CUT_LINE_OFFSET_PX: usize = 5;
/// Maxima must rise above this fraction of the line's contrast to count as
/// resolvable fringes.
const PEAK_THRESHOLD: f64 = 0.10;
/// Minimum usable pattern contrast, as a fraction of the peak intensity.
const MIN_CONTRAST: f64 = 1e-3;

/// Signed fork order of a dislocation at `center` (u, v in meters):
/// the difference in fringes crossed along two cut lines flanking the
/// center at ±5 pixels, perpendicular to the fringes. The sign is positive
/// for patterns of the form cos(k r - q φ) with q > 0.
///
/// Each line must show resolvable fringe maxima (local peaks above 10% of
/// the pattern contrast). The fringe totals themselves are measured by
/// demodulating the line with its analytic signal and accumulating the
/// unwrapped phase, which stays exact where detector binning distorts
/// fringe shapes near the fork core; the difference of the two line totals,
/// rounded to an integer, is the dislocation order.
pub fn fork_fringe_count(pattern: &InterferogramGrid, center: (f64, f64)) -> Result<i32> {
    let g = *pattern.geometry();
    if g.cols < 2 * CUT_LINE_OFFSET_PX + 1 || g.rows < 2 * CUT_LINE_OFFSET_PX + 1 {
        return Err(Error::Analysis("pattern too small for fork analysis".into()));
    }
    let (lo, hi) = pattern.intensity.min_max();
    if hi - lo < MIN_CONTRAST * hi.abs().max(1e-300) {
        return Err(Error::Analysis(
            "no resolvable fringes: contrast below threshold".into(),
        ));
    }

    let ci = ((center.0 - g.origin_u) / g.pitch - 0.5).round() as isize;
    let cj = ((center.1 - g.origin_v) / g.pitch - 0.5).round() as isize;
    if ci < 0 || cj < 0 || ci as usize >= g.cols || cj as usize >= g.rows {
        return Err(Error::Analysis("fork center outside the pattern".into()));
    }
    let (ci, cj) = (ci as usize, cj as usize);

    // Fringe normal: the axis with the stronger mean absolute gradient far
    // from the center. Vertical wedges make horizontal fringes (normal
    // along v); the cut lines then run vertically on both sides of the
    // dislocation.
    let normal_along_v = dominant_gradient_axis(&pattern.intensity);

    let fringes = |offset: isize| -> Result<f64> {
        let line = if normal_along_v {
            let i = ci as isize + offset;
            if i < 0 || i as usize >= g.cols {
                return Err(Error::Analysis("cut line outside the pattern".into()));
            }
            (0..g.rows)
                .map(|j| pattern.intensity.get(i as usize, j))
                .collect::<Vec<f64>>()
        } else {
            let j = cj as isize + offset;
            if j < 0 || j as usize >= g.rows {
                return Err(Error::Analysis("cut line outside the pattern".into()));
            }
            pattern.intensity.row(j as usize).to_vec()
        };
        line_fringe_total(&line)
    };

    let off = CUT_LINE_OFFSET_PX as isize;
    let (minus, plus) = (fringes(-off)?, fringes(off)?);
    // Sign convention: positive order for cos(k·r - q φ_ccw). The winding
    // term raises the count left of the dislocation for horizontal fringes
    // and above it for vertical fringes.
    let diff = if normal_along_v { minus - plus } else { plus - minus };
    Ok(diff.round() as i32)
}

fn dominant_gradient_axis(grid: &ScalarGrid) -> bool {
    let g = grid.geometry;
    let mut along_u = 0.0;
    let mut along_v = 0.0;
    for j in 1..g.rows {
        for i in 1..g.cols {
            along_u += (grid.get(i, j) - grid.get(i - 1, j)).abs();
            along_v += (grid.get(i, j) - grid.get(i, j - 1)).abs();
        }
    }
    along_v >= along_u
}

/// Total fringe count along one cut line, in fringes (can be fractional).
///
/// The line is treated as A + B cos φ(v) with monotone phase: each sample
/// is mapped back to a phase via arccos, and the branch at every step is
/// chosen nearest the carrier rate estimated from the fringe maxima. Local
/// contrast attenuation distorts the arccos by less than π/2, so with the
/// fork winding bounded by 1/(cut offset) per pixel the branch decisions
/// stay unambiguous, and no error accumulates across the line.
fn line_fringe_total(line: &[f64]) -> Result<f64> {
    let lo = line.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = line.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let contrast = hi - lo;
    let threshold = lo + PEAK_THRESHOLD * contrast;
    // Resolvable-fringe precondition and carrier estimate: local maxima
    // above the 10% contrast threshold.
    let mut first_max = None;
    let mut last_max = None;
    let mut maxima = 0usize;
    for k in 1..line.len().saturating_sub(1) {
        if line[k] >= threshold && line[k] > line[k - 1] && line[k] >= line[k + 1] {
            maxima += 1;
            if first_max.is_none() {
                first_max = Some(k);
            }
            last_max = Some(k);
        }
    }
    let (Some(first), Some(last)) = (first_max, last_max) else {
        return Err(Error::Analysis(
            "too few fringe maxima along a cut line".into(),
        ));
    };
    if maxima < 2 {
        return Err(Error::Analysis(
            "too few fringe maxima along a cut line".into(),
        ));
    }
    let carrier_step = TAU * (maxima - 1) as f64 / (last - first) as f64;

    let mid = 0.5 * (hi + lo);
    let amplitude = 0.5 * contrast;
    let wrapped = |x: f64| ((x - mid) / amplitude).clamp(-1.0, 1.0).acos();
    let advance = |phase: f64, value: f64| -> f64 {
        let base = wrapped(value);
        // Candidate phases ±acos + 2πm; pick the one nearest the carrier
        // prediction.
        let predicted = phase + carrier_step;
        let mut best = f64::INFINITY;
        let mut next = predicted;
        for sign in [1.0, -1.0] {
            let m = ((predicted - sign * base) / TAU).round();
            let candidate = sign * base + TAU * m;
            let miss = (candidate - predicted).abs();
            if miss < best {
                best = miss;
                next = candidate;
            }
        }
        next
    };
    // The sign of the initial arccos is ambiguous; resolve it by whichever
    // branch lets the first step land nearer the carrier rate.
    let start = {
        let plus = wrapped(line[0]);
        let step_plus = (advance(plus, line[1]) - plus - carrier_step).abs();
        let step_minus = (advance(-plus, line[1]) + plus - carrier_step).abs();
        if step_plus <= step_minus {
            plus
        } else {
            -plus
        }
    };
    let mut phase = start;
    for &value in &line[1..] {
        phase = advance(phase, value);
    }
    Ok((phase - start).abs() / TAU)
}
