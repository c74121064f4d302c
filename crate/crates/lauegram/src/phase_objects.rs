//! Macroscopic phase objects and their beam-path thickness maps.
//!
//! Objects (spiral phase plate, wedge, slab) are described geometrically,
//! cut into slices parallel to the horizontal (x, y) plane, and converted
//! into thickness maps by Radon projection of each slice. The beam runs
//! along y; at the default projection angle ϑ = 90° the line integrals run
//! along the beam, so the map entry at (u, v) is the chord length through
//! matter seen by the ray hitting the detector at (u, v).
//!
//! Slice-plane coordinates are (depth, transverse): depth along the beam,
//! transverse along the detector u axis. The Radon line for offset p at
//! angle ϑ is {depth·cos ϑ + transverse·sin ϑ = p}.

use crate::error::{Error, Result};
use crate::grid::{GridGeometry, ScalarGrid};
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI, TAU};

/// Material constants entering phase shift and refraction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Material {
    pub name: String,
    /// Coherent scattering length b_c, meters.
    pub coherent_scattering_length: f64,
    /// Atom number density N, 1/m³.
    pub atom_density: f64,
}

impl Material {
    pub fn aluminum() -> Self {
        Material {
            name: "Al".into(),
            coherent_scattering_length: 3.449e-15,
            atom_density: 6.026e28,
        }
    }

    pub fn silicon() -> Self {
        Material {
            name: "Si".into(),
            coherent_scattering_length: 4.1491e-15,
            atom_density: 4.996e28,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.atom_density > 0.0) {
            return Err(Error::Domain("atom_density must be > 0".into()));
        }
        if self.coherent_scattering_length == 0.0 || !self.coherent_scattering_length.is_finite() {
            return Err(Error::Domain(
                "coherent_scattering_length must be finite and nonzero".into(),
            ));
        }
        Ok(())
    }

    /// Refractive-index decrement |n - 1| = λ² N b_c / (2π) for thermal
    /// neutrons.
    pub fn refractive_decrement(&self, wavelength: f64) -> Result<f64> {
        self.validate()?;
        if !(wavelength > 0.0) {
            return Err(Error::Domain("wavelength must be > 0".into()));
        }
        Ok(wavelength * wavelength * self.atom_density * self.coherent_scattering_length.abs()
            / TAU)
    }
}

/// Thickness of material that shifts the neutron phase by 2π:
/// D_λ = 2π / (N b_c λ).
pub fn lambda_thickness(material: &Material, wavelength: f64) -> Result<f64> {
    material.validate()?;
    if !(wavelength > 0.0) {
        return Err(Error::Domain("wavelength must be > 0".into()));
    }
    Ok(TAU / (material.atom_density * material.coherent_scattering_length * wavelength))
}

/// Orientation of a wedge's thickness gradient in the detector plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// Thickness grows with the vertical coordinate v.
    Vertical,
    /// Thickness grows with the horizontal coordinate u.
    Horizontal,
}

/// Geometry of one phase object.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum ObjectShape {
    /// Disc whose thickness ramps linearly with azimuth: one full turn
    /// raises the thickness by `step_height` above `base_thickness`.
    /// `turns` is the number of identical plates stacked along the beam
    /// (0 = object absent). Azimuth is measured clockwise from the +u axis
    /// as seen along the beam, so a stack of plates imprints the phase
    /// -q φ with q = turns · step_height / D_λ.
    SpiralPlate {
        diameter: f64,
        step_height: f64,
        base_thickness: f64,
        turns: u32,
    },
    /// Prism with opening angle α: thickness grows as tan(α) times the
    /// distance from the thin edge, over `extent` (the footprint is the
    /// `extent`×`extent` square around the center).
    Wedge {
        opening_angle: f64,
        orientation: Orientation,
        extent: f64,
    },
    /// Plate of uniform thickness. `extent` is the side of its square
    /// footprint; `None` means "sized to the simulated field", which the
    /// scene pipeline resolves before slicing.
    Slab { thickness: f64, extent: Option<f64> },
}

/// A phase object placed in one interferometer path.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseObjectSpec {
    pub shape: ObjectShape,
    /// Transverse position (u0, v0) of the object center, meters.
    pub center: (f64, f64),
    pub material: Material,
}

impl PhaseObjectSpec {
    pub fn validate(&self) -> Result<()> {
        self.material.validate()?;
        match &self.shape {
            ObjectShape::SpiralPlate {
                diameter,
                step_height,
                base_thickness,
                ..
            } => {
                if !(*diameter > 0.0 && *step_height > 0.0 && *base_thickness > 0.0) {
                    return Err(Error::Domain(
                        "spiral plate lengths must be > 0".into(),
                    ));
                }
            }
            ObjectShape::Wedge {
                opening_angle,
                extent,
                ..
            } => {
                if !(*opening_angle > 0.0 && *opening_angle < FRAC_PI_2) {
                    return Err(Error::Domain(
                        "wedge opening angle must lie in (0, π/2)".into(),
                    ));
                }
                if !(*extent > 0.0) {
                    return Err(Error::Domain("wedge extent must be > 0".into()));
                }
            }
            ObjectShape::Slab { thickness, extent } => {
                if !(*thickness > 0.0) {
                    return Err(Error::Domain("slab thickness must be > 0".into()));
                }
                if let Some(e) = extent {
                    if !(*e > 0.0) {
                        return Err(Error::Domain("slab extent must be > 0".into()));
                    }
                }
            }
        }
        Ok(())
    }

    /// Maximum chord an object ray can traverse, meters.
    pub fn max_thickness(&self) -> f64 {
        match &self.shape {
            ObjectShape::SpiralPlate {
                step_height,
                base_thickness,
                turns,
                ..
            } => *turns as f64 * (base_thickness + step_height),
            ObjectShape::Wedge {
                opening_angle,
                extent,
                ..
            } => opening_angle.tan() * extent,
            ObjectShape::Slab { thickness, .. } => *thickness,
        }
    }

    /// Bounding box of the footprint in the detector plane:
    /// ((u_min, u_max), (v_min, v_max)).
    pub fn footprint(&self) -> ((f64, f64), (f64, f64)) {
        let (u0, v0) = self.center;
        let half = match &self.shape {
            ObjectShape::SpiralPlate { diameter, .. } => diameter / 2.0,
            ObjectShape::Wedge { extent, .. } => extent / 2.0,
            ObjectShape::Slab { thickness, extent } => extent.unwrap_or(*thickness) / 2.0,
        };
        ((u0 - half, u0 + half), (v0 - half, v0 + half))
    }
}

/// Depth profile of material within one slice, as a function of the
/// transverse coordinate. Material occupies depth ∈ [0, thickness(t)].
#[derive(Clone, Debug)]
pub enum DepthProfile {
    Uniform(f64),
    /// thickness(t) = value_at_start + slope · (t - t_start)
    Linear { value_at_start: f64, slope: f64 },
    /// Azimuthal ramp of a spiral plate evaluated at height offset `dz`
    /// from the plate axis. `cut_band` marks the slice whose band contains
    /// the azimuth branch cut; there, samples on the cut side take the
    /// mid-value of the two sides.
    Spiral {
        axis_u: f64,
        dz: f64,
        base_total: f64,
        ramp_total: f64,
        cut_band: bool,
    },
}

impl DepthProfile {
    fn thickness_at(&self, t: f64, t_start: f64) -> f64 {
        match self {
            DepthProfile::Uniform(d) => *d,
            DepthProfile::Linear {
                value_at_start,
                slope,
            } => value_at_start + slope * (t - t_start),
            DepthProfile::Spiral {
                axis_u,
                dz,
                base_total,
                ramp_total,
                cut_band,
            } => {
                let du = t - axis_u;
                if *cut_band && du >= 0.0 {
                    return base_total + 0.5 * ramp_total;
                }
                base_total + ramp_total * spiral_azimuth(du, *dz) / TAU
            }
        }
    }

    fn max_value(&self, t_start: f64, t_end: f64) -> f64 {
        match self {
            DepthProfile::Uniform(d) => *d,
            DepthProfile::Linear {
                value_at_start,
                slope,
            } => value_at_start + slope.max(0.0) * (t_end - t_start),
            DepthProfile::Spiral {
                base_total,
                ramp_total,
                ..
            } => base_total + ramp_total,
        }
    }
}

/// Clockwise azimuth (seen along the beam) of the point (du, dz) about the
/// plate axis, in [0, 2π).
pub fn spiral_azimuth(du: f64, dz: f64) -> f64 {
    let a = (-dz).atan2(du);
    if a < 0.0 {
        a + TAU
    } else {
        a
    }
}

/// One analytic region of material in a slice plane.
#[derive(Clone, Debug)]
pub enum SliceRegion {
    /// Axis-aligned box: depth × transverse intervals.
    Box2 {
        depth: (f64, f64),
        transverse: (f64, f64),
    },
    /// Disc in the slice plane.
    Disc {
        depth_center: f64,
        transverse_center: f64,
        radius: f64,
    },
    /// Depth profile over a transverse interval, material at
    /// depth ∈ [depth_start, depth_start + profile(t)].
    Profile {
        transverse: (f64, f64),
        depth_start: f64,
        profile: DepthProfile,
    },
}

/// One horizontal cross-section of an object.
#[derive(Clone, Debug)]
pub struct Slice {
    pub z_center: f64,
    pub regions: Vec<SliceRegion>,
}

/// Ordered stack of horizontal slices covering a z interval.
#[derive(Clone, Debug)]
pub struct SliceStack {
    pub slices: Vec<Slice>,
    /// Slice band thickness Δz, meters.
    pub slice_thickness: f64,
    /// Bottom of the first slice band, meters.
    pub z_min: f64,
    /// Transverse extent covered by the stack, meters.
    pub transverse_bounds: (f64, f64),
}

impl SliceStack {
    pub fn slice_count(&self) -> usize {
        self.slices.len()
    }

    pub fn z_max(&self) -> f64 {
        self.z_min + self.slice_thickness * self.slices.len() as f64
    }

    fn slice_for_height(&self, v: f64) -> Option<&Slice> {
        if self.slices.is_empty() || v < self.z_min || v >= self.z_max() {
            return None;
        }
        let idx = ((v - self.z_min) / self.slice_thickness) as usize;
        self.slices.get(idx.min(self.slices.len() - 1))
    }
}

/// Cut an object into `slice_count` slices parallel to the (x, y) plane,
/// spanning the object's own vertical extent.
pub fn slice_object(spec: &PhaseObjectSpec, slice_count: usize) -> Result<SliceStack> {
    spec.validate()?;
    if slice_count < 1 {
        return Err(Error::Domain("slice_count must be >= 1".into()));
    }
    let (u0, v0) = spec.center;
    let (t_bounds, z_bounds) = spec.footprint();
    let dz = (z_bounds.1 - z_bounds.0) / slice_count as f64;
    let mut slices = Vec::with_capacity(slice_count);
    for j in 0..slice_count {
        let z_center = z_bounds.0 + (j as f64 + 0.5) * dz;
        slices.push(Slice {
            z_center,
            regions: regions_at_height(spec, u0, v0, z_center, dz, t_bounds)?,
        });
    }
    Ok(SliceStack {
        slices,
        slice_thickness: dz,
        z_min: z_bounds.0,
        transverse_bounds: t_bounds,
    })
}

fn regions_at_height(
    spec: &PhaseObjectSpec,
    u0: f64,
    v0: f64,
    z: f64,
    dz_band: f64,
    t_bounds: (f64, f64),
) -> Result<Vec<SliceRegion>> {
    let regions = match &spec.shape {
        ObjectShape::SpiralPlate {
            diameter,
            step_height,
            base_thickness,
            turns,
        } => {
            if *turns == 0 {
                return Ok(Vec::new());
            }
            let r = diameter / 2.0;
            let dz = z - v0;
            if dz.abs() > r {
                return Ok(Vec::new());
            }
            let half_width = (r * r - dz * dz).sqrt();
            // The azimuth branch cut lies along +u at dz = 0; the slice
            // whose band straddles it evaluates the cut side mid-valued.
            let cut_band = -dz_band / 2.0 <= dz && dz < dz_band / 2.0;
            vec![SliceRegion::Profile {
                transverse: (u0 - half_width, u0 + half_width),
                depth_start: 0.0,
                profile: DepthProfile::Spiral {
                    axis_u: u0,
                    dz,
                    base_total: *turns as f64 * base_thickness,
                    ramp_total: *turns as f64 * step_height,
                    cut_band,
                },
            }]
        }
        ObjectShape::Wedge {
            opening_angle,
            orientation,
            extent,
        } => {
            let half = extent / 2.0;
            match orientation {
                Orientation::Vertical => {
                    // Thin edge at the bottom of the footprint.
                    let depth = opening_angle.tan() * (z - (v0 - half));
                    if depth <= 0.0 || (z - v0).abs() > half {
                        Vec::new()
                    } else {
                        vec![SliceRegion::Box2 {
                            depth: (0.0, depth),
                            transverse: t_bounds,
                        }]
                    }
                }
                Orientation::Horizontal => {
                    if (z - v0).abs() > half {
                        Vec::new()
                    } else {
                        // Thin edge at the left of the footprint.
                        vec![SliceRegion::Profile {
                            transverse: (u0 - half, u0 + half),
                            depth_start: 0.0,
                            profile: DepthProfile::Linear {
                                value_at_start: 0.0,
                                slope: opening_angle.tan(),
                            },
                        }]
                    }
                }
            }
        }
        ObjectShape::Slab { thickness, extent } => {
            let e = extent.ok_or_else(|| {
                Error::Domain(
                    "slab extent unresolved: size it explicitly or via the scene pipeline".into(),
                )
            })?;
            if (z - v0).abs() > e / 2.0 {
                Vec::new()
            } else {
                vec![SliceRegion::Box2 {
                    depth: (0.0, *thickness),
                    transverse: t_bounds,
                }]
            }
        }
    };
    Ok(regions)
}

/// A 2D grid of beam-path lengths through matter, meters.
#[derive(Clone, Debug, PartialEq)]
pub struct ThicknessMap {
    pub grid: ScalarGrid,
}

impl ThicknessMap {
    pub fn zeros(geometry: GridGeometry) -> Self {
        ThicknessMap {
            grid: ScalarGrid::zeros(geometry),
        }
    }

    pub fn geometry(&self) -> &GridGeometry {
        &self.grid.geometry
    }
}

/// Radon-project a slice stack at angle ϑ with the given sampling pitch.
///
/// The output grid is derived from the stack: one column per offset p
/// across the projected support, one row per `pitch` of stack height; each
/// row uses the slice whose band contains the row center. An empty stack
/// produces an empty map.
pub fn radon_project(stack: &SliceStack, theta: f64, pitch: f64) -> Result<ThicknessMap> {
    validate_radon_inputs(theta, pitch)?;
    if stack.slices.is_empty() {
        return Ok(ThicknessMap::zeros(GridGeometry {
            pitch,
            cols: 0,
            rows: 0,
            origin_u: 0.0,
            origin_v: 0.0,
        }));
    }
    let (p_min, p_max) = projected_support(stack, theta);
    let height = stack.z_max() - stack.z_min;
    let rows = (height / pitch).ceil().max(1.0) as usize;
    let cols = ((p_max - p_min) / pitch).ceil().max(1.0) as usize;
    let geometry = GridGeometry {
        pitch,
        cols,
        rows,
        origin_u: p_min,
        origin_v: stack.z_min,
    };
    radon_project_onto(stack, theta, geometry)
}

/// Radon-project onto an explicit grid (used to place several objects on a
/// shared scene grid). Column coordinates are offsets p; rows sample stack
/// height, zero outside the stack.
pub fn radon_project_onto(
    stack: &SliceStack,
    theta: f64,
    geometry: GridGeometry,
) -> Result<ThicknessMap> {
    validate_radon_inputs(theta, geometry.pitch)?;
    let exact_beam_axis = (theta - FRAC_PI_2).abs() < 1e-12;
    let grid = ScalarGrid::from_fn(geometry, |p, v| {
        let Some(slice) = stack.slice_for_height(v) else {
            return 0.0;
        };
        let mut acc = 0.0;
        for region in &slice.regions {
            acc += if exact_beam_axis {
                chord_at_beam_axis(region, p)
            } else {
                chord_general(region, theta, p)
            };
        }
        acc
    });
    Ok(ThicknessMap { grid })
}

fn validate_radon_inputs(theta: f64, pitch: f64) -> Result<()> {
    if !(theta > 0.0 && theta <= PI) {
        return Err(Error::Domain("projection angle must lie in (0, π]".into()));
    }
    if !(pitch > 0.0) {
        return Err(Error::Domain("sampling pitch must be > 0".into()));
    }
    Ok(())
}

fn projected_support(stack: &SliceStack, theta: f64) -> (f64, f64) {
    let (ct, st) = (theta.cos(), theta.sin());
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut corners: Vec<(f64, f64)> = Vec::new();
    for slice in &stack.slices {
        for region in &slice.regions {
            corners.clear();
            match region {
                SliceRegion::Box2 { depth, transverse } => {
                    for &d in &[depth.0, depth.1] {
                        for &t in &[transverse.0, transverse.1] {
                            corners.push((d, t));
                        }
                    }
                }
                SliceRegion::Disc {
                    depth_center,
                    transverse_center,
                    radius,
                } => {
                    let c = depth_center * ct + transverse_center * st;
                    lo = lo.min(c - radius);
                    hi = hi.max(c + radius);
                }
                SliceRegion::Profile {
                    transverse,
                    depth_start,
                    profile,
                } => {
                    let dmax = depth_start + profile.max_value(transverse.0, transverse.1);
                    for &d in &[*depth_start, dmax] {
                        for &t in &[transverse.0, transverse.1] {
                            corners.push((d, t));
                        }
                    }
                }
            }
            for &(d, t) in &corners {
                let p = d * ct + t * st;
                lo = lo.min(p);
                hi = hi.max(p);
            }
        }
    }
    if lo > hi {
        (0.0, 0.0)
    } else {
        (lo, hi)
    }
}

/// Chord along the beam (ϑ = 90°) at transverse offset p — the production
/// path, exact for every region kind.
fn chord_at_beam_axis(region: &SliceRegion, p: f64) -> f64 {
    match region {
        SliceRegion::Box2 { depth, transverse } => {
            if p >= transverse.0 && p <= transverse.1 {
                depth.1 - depth.0
            } else {
                0.0
            }
        }
        SliceRegion::Disc {
            transverse_center,
            radius,
            ..
        } => {
            let d = p - transverse_center;
            if d.abs() <= *radius {
                2.0 * (radius * radius - d * d).sqrt()
            } else {
                0.0
            }
        }
        SliceRegion::Profile {
            transverse,
            profile,
            ..
        } => {
            if p >= transverse.0 && p <= transverse.1 {
                profile.thickness_at(p, transverse.0).max(0.0)
            } else {
                0.0
            }
        }
    }
}

/// Chord through a region along the line {depth cos ϑ + transverse sin ϑ = p}
/// for general ϑ (test and verification path).
fn chord_general(region: &SliceRegion, theta: f64, p: f64) -> f64 {
    let (ct, st) = (theta.cos(), theta.sin());
    match region {
        SliceRegion::Box2 { depth, transverse } => {
            // Clip the line against the box; parameter s runs along the
            // line direction (-sin ϑ, cos ϑ) in (depth, transverse).
            let (px, py) = (p * ct, p * st);
            let (dx, dy) = (-st, ct);
            let mut s0 = f64::NEG_INFINITY;
            let mut s1 = f64::INFINITY;
            for (pos, dir, lo, hi) in [
                (px, dx, depth.0, depth.1),
                (py, dy, transverse.0, transverse.1),
            ] {
                if dir.abs() < 1e-300 {
                    if pos < lo || pos > hi {
                        return 0.0;
                    }
                } else {
                    let a = (lo - pos) / dir;
                    let b = (hi - pos) / dir;
                    s0 = s0.max(a.min(b));
                    s1 = s1.min(a.max(b));
                }
            }
            (s1 - s0).max(0.0)
        }
        SliceRegion::Disc {
            depth_center,
            transverse_center,
            radius,
        } => {
            let dist = (depth_center * ct + transverse_center * st - p).abs();
            if dist <= *radius {
                2.0 * (radius * radius - dist * dist).sqrt()
            } else {
                0.0
            }
        }
        SliceRegion::Profile {
            transverse,
            depth_start,
            profile,
        } => {
            if ct.abs() < 1e-12 {
                return chord_at_beam_axis(region, p / st.max(1e-300));
            }
            // Parametrize by the transverse coordinate t; the line gives
            // depth(t) = (p - t sin ϑ) / cos ϑ and arc length |dt| / |cos ϑ|.
            // Subdivide and treat the profile as linear on each segment;
            // exact for Uniform and Linear profiles.
            let segments = 512;
            let h = (transverse.1 - transverse.0) / segments as f64;
            let mut acc = 0.0;
            for i in 0..segments {
                let ta = transverse.0 + i as f64 * h;
                let tb = ta + h;
                let fa = profile.thickness_at(ta, transverse.0).max(0.0);
                let fb = profile.thickness_at(tb, transverse.0).max(0.0);
                // depth(t) within [depth_start, depth_start + f(t)] with f
                // linear on [ta, tb]: two linear inequalities in t.
                let mut lo = ta;
                let mut hi = tb;
                // depth(t) >= depth_start  ⇒  p - t sin ϑ >= depth_start cos ϑ (sign of cos ϑ)
                let bound = |rhs: f64, lo: &mut f64, hi: &mut f64, coef_t: f64, cons: f64| {
                    // Solve cons + coef_t · t >= rhs over [lo, hi].
                    if coef_t.abs() < 1e-300 {
                        if cons < rhs {
                            *lo = 1.0;
                            *hi = 0.0;
                        }
                    } else {
                        let t_star = (rhs - cons) / coef_t;
                        if coef_t > 0.0 {
                            *lo = lo.max(t_star);
                        } else {
                            *hi = hi.min(t_star);
                        }
                    }
                };
                // Inequality A: depth(t) - depth_start >= 0. Dividing the
                // line equation by cos ϑ keeps the true sign of the
                // expression, so no case split on the sign of cos ϑ.
                let depth_cons = p / ct - depth_start;
                let depth_coef = -st / ct;
                bound(0.0, &mut lo, &mut hi, depth_coef, depth_cons);
                // Inequality B: depth_start + f(t) - depth(t) >= 0 with
                // f(t) = fa + slope (t - ta).
                let slope = (fb - fa) / h;
                let f_cons = fa - slope * ta;
                let g_cons = f_cons - depth_cons;
                let g_coef = slope - depth_coef;
                bound(0.0, &mut lo, &mut hi, g_coef, g_cons);
                if hi > lo {
                    acc += (hi - lo) / ct.abs();
                }
            }
            acc
        }
    }
}

/// Element-wise sum of thickness maps sharing a grid geometry.
pub fn compose_thickness(maps: &[ThicknessMap]) -> Result<ThicknessMap> {
    let first = maps
        .first()
        .ok_or_else(|| Error::Shape("compose_thickness needs at least one map".into()))?;
    let mut acc = first.grid.clone();
    for m in &maps[1..] {
        acc = acc.add(&m.grid)?;
    }
    Ok(ThicknessMap { grid: acc })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spiral_spec(turns: u32) -> PhaseObjectSpec {
        PhaseObjectSpec {
            shape: ObjectShape::SpiralPlate {
                diameter: 0.015,
                step_height: 1.115547984218239e-4,
                base_thickness: 1e-3,
                turns,
            },
            center: (0.0, 0.0),
            material: Material::aluminum(),
        }
    }

    #[test]
    fn lambda_thickness_aluminum() {
        let d = lambda_thickness(&Material::aluminum(), 2.71e-10).unwrap();
        assert!((d - 1.115547984218239e-4).abs() < 1e-18);
    }

    #[test]
    fn lambda_thickness_unit_case_and_scaling() {
        let m = Material {
            name: "unit".into(),
            coherent_scattering_length: 1.0,
            atom_density: TAU,
        };
        assert_eq!(lambda_thickness(&m, 1.0).unwrap(), 1.0);

        let al = Material::aluminum();
        let d1 = lambda_thickness(&al, 2.71e-10).unwrap();
        let d2 = lambda_thickness(&al, 2.0 * 2.71e-10).unwrap();
        assert_eq!(d1 / d2, 2.0);
    }

    #[test]
    fn lambda_thickness_rejects_bad_inputs() {
        assert!(lambda_thickness(&Material::aluminum(), -1e-10).is_err());
        let bad = Material {
            name: "bad".into(),
            coherent_scattering_length: 1e-15,
            atom_density: -1.0,
        };
        assert!(lambda_thickness(&bad, 1e-10).is_err());
    }

    #[test]
    fn slab_slices_identical() {
        let spec = PhaseObjectSpec {
            shape: ObjectShape::Slab {
                thickness: 2e-3,
                extent: Some(0.01),
            },
            center: (0.0, 0.0),
            material: Material::aluminum(),
        };
        let stack = slice_object(&spec, 7).unwrap();
        assert_eq!(stack.slice_count(), 7);
        for slice in &stack.slices {
            match &slice.regions[..] {
                [SliceRegion::Box2 { depth, .. }] => {
                    assert_eq!(*depth, (0.0, 2e-3));
                }
                other => panic!("unexpected regions {other:?}"),
            }
        }
    }

    #[test]
    fn slice_count_zero_rejected() {
        assert!(slice_object(&spiral_spec(1), 0).is_err());
    }

    #[test]
    fn vertical_wedge_slice_depth_grows_linearly() {
        let spec = PhaseObjectSpec {
            shape: ObjectShape::Wedge {
                opening_angle: 0.2,
                orientation: Orientation::Vertical,
                extent: 0.01,
            },
            center: (0.0, 0.0),
            material: Material::aluminum(),
        };
        let stack = slice_object(&spec, 10).unwrap();
        let depths: Vec<f64> = stack
            .slices
            .iter()
            .map(|s| match &s.regions[..] {
                [SliceRegion::Box2 { depth, .. }] => depth.1,
                _ => panic!("expected one box region"),
            })
            .collect();
        let tan = 0.2f64.tan();
        let dz = 0.01 / 10.0;
        for (j, d) in depths.iter().enumerate() {
            let expected = tan * (j as f64 + 0.5) * dz;
            assert!((d - expected).abs() < 1e-15, "slice {j}");
        }
    }

    #[test]
    fn slab_projection_flat_inside_footprint() {
        let spec = PhaseObjectSpec {
            shape: ObjectShape::Slab {
                thickness: 3e-3,
                extent: Some(0.008),
            },
            center: (0.0, 0.0),
            material: Material::aluminum(),
        };
        let stack = slice_object(&spec, 16).unwrap();
        let map = radon_project(&stack, FRAC_PI_2, 0.0005).unwrap();
        let g = map.geometry();
        for j in 0..g.rows {
            for i in 0..g.cols {
                let u = g.sample_u(i);
                let expected = if u.abs() <= 0.004 { 3e-3 } else { 0.0 };
                assert_eq!(map.grid.get(i, j), expected);
            }
        }
    }

    #[test]
    fn disc_slice_projects_to_analytic_chord() {
        let radius = 0.003;
        let stack = SliceStack {
            slices: vec![Slice {
                z_center: 0.0,
                regions: vec![SliceRegion::Disc {
                    depth_center: 0.0,
                    transverse_center: 0.0,
                    radius,
                }],
            }],
            slice_thickness: 1e-4,
            z_min: -5e-5,
            transverse_bounds: (-radius, radius),
        };
        let pitch = radius / 50.0;
        let map = radon_project(&stack, FRAC_PI_2, pitch).unwrap();
        let g = map.geometry();
        for j in 0..g.rows {
            for i in 0..g.cols {
                let p = g.sample_u(i);
                let expected = if p.abs() <= radius {
                    2.0 * (radius * radius - p * p).sqrt()
                } else {
                    0.0
                };
                assert!((map.grid.get(i, j) - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn disc_chord_rotation_invariant() {
        let region = SliceRegion::Disc {
            depth_center: 0.0,
            transverse_center: 0.0,
            radius: 1.0,
        };
        for &theta in &[0.3, 1.0, FRAC_PI_2, 2.5, PI] {
            let c = chord_general(&region, theta, 0.6);
            assert!((c - 2.0 * (1.0f64 - 0.36).sqrt()).abs() < 1e-12, "{theta}");
        }
    }

    #[test]
    fn spiral_projection_ramps_with_azimuth() {
        let spec = spiral_spec(1);
        let step = 1.115547984218239e-4;
        let stack = slice_object(&spec, 600).unwrap();
        let pitch = 0.015 / 600.0;
        let map = radon_project(&stack, FRAC_PI_2, pitch).unwrap();
        let g = map.geometry();
        // Walk a circle of half the plate radius; thickness must track the
        // clockwise azimuth ramp.
        let r_probe = 0.015 / 4.0;
        for k in 0..32 {
            let phi = (k as f64 + 0.5) * TAU / 32.0;
            // A clockwise azimuth of phi sits at (du, dz) = (r cos φ, -r sin φ).
            let u = r_probe * phi.cos();
            let v = -r_probe * phi.sin();
            let i = ((u - g.origin_u) / g.pitch) as usize;
            let j = ((v - g.origin_v) / g.pitch) as usize;
            let got = map.grid.get(i, j);
            // Recompute the azimuth at the actual sample center.
            let phi_sample = spiral_azimuth(g.sample_u(i), g.sample_v(j));
            let expected = 1e-3 + step * phi_sample / TAU;
            assert!(
                (got - expected).abs() < 1e-12,
                "phi = {phi}: got {got}, expected {expected}"
            );
        }
    }

    #[test]
    fn radon_linear_in_disjoint_regions() {
        let geometry = GridGeometry::centered(64, 8, 0.001);
        let box_a = SliceRegion::Box2 {
            depth: (0.0, 2e-3),
            transverse: (-0.02, -0.005),
        };
        let box_b = SliceRegion::Box2 {
            depth: (0.0, 1e-3),
            transverse: (0.002, 0.017),
        };
        let stack_with = |regions: Vec<SliceRegion>| SliceStack {
            slices: vec![Slice {
                z_center: 0.0,
                regions,
            }],
            slice_thickness: 0.008,
            z_min: -0.004,
            transverse_bounds: (-0.032, 0.032),
        };
        for &theta in &[FRAC_PI_2, 1.1, 2.2] {
            let a = radon_project_onto(&stack_with(vec![box_a.clone()]), theta, geometry).unwrap();
            let b = radon_project_onto(&stack_with(vec![box_b.clone()]), theta, geometry).unwrap();
            let both = radon_project_onto(
                &stack_with(vec![box_a.clone(), box_b.clone()]),
                theta,
                geometry,
            )
            .unwrap();
            let summed = compose_thickness(&[a, b]).unwrap();
            for (x, y) in both.grid.data().iter().zip(summed.grid.data()) {
                assert!((x - y).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn projected_mass_matches_volume() {
        let spec = spiral_spec(1);
        let diameter = 0.015;
        let pitch = diameter / 220.0;
        let stack = slice_object(&spec, 220).unwrap();
        let map = radon_project(&stack, FRAC_PI_2, pitch).unwrap();
        let mass = map.grid.sum() * pitch * pitch;
        let r = diameter / 2.0;
        let volume = PI * r * r * (1e-3 + 0.5 * 1.115547984218239e-4);
        assert!(
            (mass / volume - 1.0).abs() < 0.01,
            "mass {mass}, volume {volume}"
        );
    }

    #[test]
    fn slice_refinement_reduces_error_monotonically() {
        // Vertical wedge: analytic thickness tan(α)(v - v_bottom); halving
        // Δz at fixed pitch must shrink the max error.
        let spec = PhaseObjectSpec {
            shape: ObjectShape::Wedge {
                opening_angle: 0.3,
                orientation: Orientation::Vertical,
                extent: 0.01,
            },
            center: (0.0, 0.0),
            material: Material::aluminum(),
        };
        let pitch = 0.01 / 256.0;
        let tan = 0.3f64.tan();
        let mut last = f64::INFINITY;
        for &n in &[4usize, 8, 16, 32] {
            let stack = slice_object(&spec, n).unwrap();
            let map = radon_project(&stack, FRAC_PI_2, pitch).unwrap();
            let g = map.geometry();
            let mut max_err = 0.0f64;
            for j in 0..g.rows {
                let v = g.sample_v(j);
                let expected = (tan * (v + 0.005)).max(0.0);
                let err = (map.grid.get(g.cols / 2, j) - expected).abs();
                max_err = max_err.max(err);
            }
            assert!(max_err < last, "n = {n}: {max_err} !< {last}");
            last = max_err;
        }
    }

    #[test]
    fn compose_identity_and_stacking() {
        let geometry = GridGeometry::centered(32, 32, 0.001);
        let spec = spiral_spec(1);
        let stack = slice_object(&spec, 32).unwrap();
        let one = radon_project_onto(&stack, FRAC_PI_2, geometry).unwrap();
        let zero = ThicknessMap::zeros(geometry);
        let same = compose_thickness(&[one.clone(), zero]).unwrap();
        assert_eq!(same.grid.data(), one.grid.data());

        let doubled = compose_thickness(&[one.clone(), one.clone()]).unwrap();
        for (d, s) in doubled.grid.data().iter().zip(one.grid.data()) {
            assert_eq!(*d, 2.0 * s);
        }

        // Three stacked unit-step plates span 3 step heights azimuthally.
        let tri_spec = spiral_spec(3);
        let tri_stack = slice_object(&tri_spec, 256).unwrap();
        let tri = radon_project(&tri_stack, FRAC_PI_2, 0.015 / 256.0).unwrap();
        let (lo, hi) = {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for &x in tri.grid.data() {
                if x > 0.0 {
                    lo = lo.min(x);
                    hi = hi.max(x);
                }
            }
            (lo, hi)
        };
        let span = hi - lo;
        let expected = 3.0 * 1.115547984218239e-4;
        assert!((span / expected - 1.0).abs() < 0.02, "span {span}");
    }

    #[test]
    fn compose_rejects_mismatched_grids() {
        let a = ThicknessMap::zeros(GridGeometry::centered(8, 8, 1e-3));
        let b = ThicknessMap::zeros(GridGeometry::centered(8, 9, 1e-3));
        assert!(matches!(
            compose_thickness(&[a, b]),
            Err(Error::Shape(_))
        ));
    }

    proptest::proptest! {
        #[test]
        fn radon_additive_over_disjoint_slabs(
            edges in proptest::collection::vec(-0.02f64..0.02, 4),
            depth_a in 1e-4..5e-3f64,
            depth_b in 1e-4..5e-3f64,
            theta in 0.3..std::f64::consts::PI,
        ) {
            let mut sorted = edges.clone();
            sorted.sort_by(f64::total_cmp);
            proptest::prop_assume!(sorted[1] - sorted[0] > 1e-4);
            proptest::prop_assume!(sorted[3] - sorted[2] > 1e-4);
            proptest::prop_assume!(sorted[2] - sorted[1] > 1e-4);
            let box_a = SliceRegion::Box2 {
                depth: (0.0, depth_a),
                transverse: (sorted[0], sorted[1]),
            };
            let box_b = SliceRegion::Box2 {
                depth: (0.0, depth_b),
                transverse: (sorted[2], sorted[3]),
            };
            let stack = |regions: Vec<SliceRegion>| SliceStack {
                slices: vec![Slice { z_center: 0.0, regions }],
                slice_thickness: 0.004,
                z_min: -0.002,
                transverse_bounds: (-0.03, 0.03),
            };
            let geometry = GridGeometry::centered(48, 4, 0.0015);
            let a = radon_project_onto(&stack(vec![box_a.clone()]), theta, geometry).unwrap();
            let b = radon_project_onto(&stack(vec![box_b.clone()]), theta, geometry).unwrap();
            let both =
                radon_project_onto(&stack(vec![box_a, box_b]), theta, geometry).unwrap();
            for ((x, y), z) in a
                .grid
                .data()
                .iter()
                .zip(b.grid.data())
                .zip(both.grid.data())
            {
                proptest::prop_assert!((x + y - z).abs() < 1e-12);
            }
        }

        #[test]
        fn lambda_thickness_scales_inversely(
            lambda in 5e-11..1e-9f64,
            factor in 1.1..10.0f64,
        ) {
            let al = Material::aluminum();
            let d1 = lambda_thickness(&al, lambda).unwrap();
            let d2 = lambda_thickness(&al, lambda * factor).unwrap();
            proptest::prop_assert!((d1 / d2 / factor - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn empty_stack_projects_to_empty_map() {
        let stack = SliceStack {
            slices: Vec::new(),
            slice_thickness: 1e-3,
            z_min: 0.0,
            transverse_bounds: (0.0, 0.0),
        };
        let map = radon_project(&stack, FRAC_PI_2, 1e-3).unwrap();
        assert_eq!(map.geometry().len(), 0);
    }

    #[test]
    fn unsized_slab_cannot_be_sliced_standalone() {
        let spec = PhaseObjectSpec {
            shape: ObjectShape::Slab {
                thickness: 1e-3,
                extent: None,
            },
            center: (0.0, 0.0),
            material: Material::aluminum(),
        };
        assert!(matches!(slice_object(&spec, 4), Err(Error::Domain(_))));
    }

    #[test]
    fn absent_spiral_projects_to_zero() {
        let stack = slice_object(&spiral_spec(0), 16).unwrap();
        let map = radon_project(&stack, FRAC_PI_2, 1e-3).unwrap();
        assert!(map.grid.data().iter().all(|&x| x == 0.0));
    }
}
