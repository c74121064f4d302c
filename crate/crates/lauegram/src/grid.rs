//! Row-major 2D sample grids with physical geometry.
//!
//! All 2D data in the crate (thickness maps, interferograms, reconstruction
//! inputs) lives on a [`ScalarGrid`]: a row-major `Vec<f64>` plus a
//! [`GridGeometry`] that places sample centers in the transverse plane.
//! The transverse axes are `u` (horizontal, columns) and `v` (vertical,
//! rows); the beam runs normal to the grid.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Placement of a rectangular grid of square pixels in the (u, v) plane.
///
/// Sample `(col i, row j)` is centered at
/// `(origin_u + (i + 1/2) pitch, origin_v + (j + 1/2) pitch)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridGeometry {
    /// Sample spacing in meters (square pixels).
    pub pitch: f64,
    /// Number of columns (u samples).
    pub cols: usize,
    /// Number of rows (v samples).
    pub rows: usize,
    /// u coordinate of the left grid edge, meters.
    pub origin_u: f64,
    /// v coordinate of the bottom grid edge, meters.
    pub origin_v: f64,
}

impl GridGeometry {
    /// A `cols`×`rows` grid centered on (0, 0).
    pub fn centered(cols: usize, rows: usize, pitch: f64) -> Self {
        GridGeometry {
            pitch,
            cols,
            rows,
            origin_u: -(cols as f64) * pitch / 2.0,
            origin_v: -(rows as f64) * pitch / 2.0,
        }
    }

    pub fn sample_u(&self, col: usize) -> f64 {
        self.origin_u + (col as f64 + 0.5) * self.pitch
    }

    pub fn sample_v(&self, row: usize) -> f64 {
        self.origin_v + (row as f64 + 0.5) * self.pitch
    }

    pub fn width(&self) -> f64 {
        self.cols as f64 * self.pitch
    }

    pub fn height(&self) -> f64 {
        self.rows as f64 * self.pitch
    }

    pub fn len(&self) -> usize {
        self.cols * self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Geometries match when their samples coincide (tolerant to f64 noise
    /// well below a pixel).
    pub fn same_as(&self, other: &GridGeometry) -> bool {
        let tol = 1e-9 * self.pitch.max(other.pitch);
        self.cols == other.cols
            && self.rows == other.rows
            && (self.pitch - other.pitch).abs() <= tol
            && (self.origin_u - other.origin_u).abs() <= tol
            && (self.origin_v - other.origin_v).abs() <= tol
    }
}

/// A scalar field sampled on a [`GridGeometry`], row-major, row 0 at the
/// bottom (smallest v).
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarGrid {
    pub geometry: GridGeometry,
    data: Vec<f64>,
}

impl ScalarGrid {
    pub fn zeros(geometry: GridGeometry) -> Self {
        ScalarGrid {
            data: vec![0.0; geometry.len()],
            geometry,
        }
    }

    pub fn from_data(geometry: GridGeometry, data: Vec<f64>) -> Result<Self> {
        if data.len() != geometry.len() {
            return Err(Error::Shape(format!(
                "grid data length {} does not match {}x{} geometry",
                data.len(),
                geometry.cols,
                geometry.rows
            )));
        }
        Ok(ScalarGrid { geometry, data })
    }

    /// Fill from a per-sample function of (u, v), parallel over rows.
    /// Each sample is computed independently, so the result is bit-identical
    /// for any parallel schedule.
    pub fn from_fn<F>(geometry: GridGeometry, f: F) -> Self
    where
        F: Fn(f64, f64) -> f64 + Sync,
    {
        use rayon::prelude::*;
        let cols = geometry.cols;
        let mut data = vec![0.0; geometry.len()];
        data.par_chunks_mut(cols).enumerate().for_each(|(j, row)| {
            let v = geometry.sample_v(j);
            for (i, out) in row.iter_mut().enumerate() {
                *out = f(geometry.sample_u(i), v);
            }
        });
        ScalarGrid { geometry, data }
    }

    pub fn get(&self, col: usize, row: usize) -> f64 {
        self.data[row * self.geometry.cols + col]
    }

    pub fn set(&mut self, col: usize, row: usize, value: f64) {
        self.data[row * self.geometry.cols + col] = value;
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn row(&self, row: usize) -> &[f64] {
        let c = self.geometry.cols;
        &self.data[row * c..(row + 1) * c]
    }

    pub fn min_max(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &x in &self.data {
            lo = lo.min(x);
            hi = hi.max(x);
        }
        (lo, hi)
    }

    pub fn sum(&self) -> f64 {
        self.data.iter().sum()
    }

    /// Element-wise sum of two grids on the same geometry.
    pub fn add(&self, other: &ScalarGrid) -> Result<ScalarGrid> {
        if !self.geometry.same_as(&other.geometry) {
            return Err(Error::Shape(
                "cannot add grids with different geometry".into(),
            ));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Ok(ScalarGrid {
            geometry: self.geometry,
            data,
        })
    }

    /// Block mean over `factor`×`factor` blocks. Both dimensions must be
    /// divisible by `factor`.
    pub fn block_mean(&self, factor: usize) -> Result<ScalarGrid> {
        if factor == 0 {
            return Err(Error::Resample("binning factor must be >= 1".into()));
        }
        let g = self.geometry;
        if !g.cols.is_multiple_of(factor) || !g.rows.is_multiple_of(factor) {
            return Err(Error::Resample(format!(
                "grid {}x{} not divisible by binning factor {}",
                g.cols, g.rows, factor
            )));
        }
        let out_geom = GridGeometry {
            pitch: g.pitch * factor as f64,
            cols: g.cols / factor,
            rows: g.rows / factor,
            origin_u: g.origin_u,
            origin_v: g.origin_v,
        };
        let norm = 1.0 / (factor * factor) as f64;
        let mut out = ScalarGrid::zeros(out_geom);
        for j in 0..out_geom.rows {
            for i in 0..out_geom.cols {
                let mut acc = 0.0;
                for dj in 0..factor {
                    let row = self.row(j * factor + dj);
                    for di in 0..factor {
                        acc += row[i * factor + di];
                    }
                }
                out.set(i, j, acc * norm);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centered_geometry_is_symmetric() {
        let g = GridGeometry::centered(4, 4, 0.5);
        assert_eq!(g.sample_u(0), -0.75);
        assert_eq!(g.sample_u(3), 0.75);
        assert_eq!(g.sample_v(1), -0.25);
    }

    #[test]
    fn block_mean_averages_blocks() {
        let g = GridGeometry::centered(4, 2, 1.0);
        let grid = ScalarGrid::from_data(g, vec![1.0, 3.0, 5.0, 7.0, 1.0, 3.0, 5.0, 7.0]).unwrap();
        let binned = grid.block_mean(2).unwrap();
        assert_eq!(binned.data(), &[2.0, 6.0]);
        assert_eq!(binned.geometry.pitch, 2.0);
    }

    #[test]
    fn block_mean_rejects_non_divisor() {
        let g = GridGeometry::centered(5, 5, 1.0);
        let grid = ScalarGrid::zeros(g);
        assert!(matches!(grid.block_mean(2), Err(Error::Resample(_))));
    }

    #[test]
    fn add_rejects_geometry_mismatch() {
        let a = ScalarGrid::zeros(GridGeometry::centered(4, 4, 1.0));
        let b = ScalarGrid::zeros(GridGeometry::centered(4, 5, 1.0));
        assert!(matches!(a.add(&b), Err(Error::Shape(_))));
    }
}
