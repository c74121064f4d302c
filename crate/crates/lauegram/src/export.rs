//! Artifact emission: full-precision CSV, 16-bit grayscale images (PNG or
//! PGM), and sidecar metadata recording the normalization constants so raw
//! values stay recoverable from the CSV exactly.

use crate::error::{Error, Result};
use crate::grid::ScalarGrid;
use serde::Serialize;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

/// Image container format for 16-bit grayscale output.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ImageFormat {
    Png,
    Pgm,
}

impl ImageFormat {
    pub fn extension(&self) -> &'static str {
        match self {
            ImageFormat::Png => "png",
            ImageFormat::Pgm => "pgm",
        }
    }
}

/// Min-max normalization actually applied to an emitted image.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Normalization {
    pub min: f64,
    pub max: f64,
    /// Gray value = round((value - min) * scale); 0 for a constant image.
    pub scale: f64,
}

fn normalize_u16(grid: &ScalarGrid, range: Option<(f64, f64)>) -> (Vec<u16>, Normalization) {
    let (lo, hi) = range.unwrap_or_else(|| grid.min_max());
    let span = hi - lo;
    let scale = if span > 0.0 { 65535.0 / span } else { 0.0 };
    let pixels = grid
        .data()
        .iter()
        .map(|&x| ((x - lo) * scale).round().clamp(0.0, 65535.0) as u16)
        .collect();
    (
        pixels,
        Normalization {
            min: lo,
            max: hi,
            scale,
        },
    )
}

/// Write the grid as CSV, row-major, one grid row per line, shortest
/// round-trippable float formatting. Row 0 is the bottom of the field.
pub fn write_csv(grid: &ScalarGrid, path: &Path) -> Result<()> {
    let mut out = String::new();
    for j in 0..grid.geometry.rows {
        let row = grid.row(j);
        for (i, x) in row.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&format!("{x}"));
        }
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

/// Write a min-max normalized 16-bit grayscale image. Image rows run top to
/// bottom, so grid row `rows-1` (largest v) is the first image row.
/// Returns the normalization for the sidecar.
pub fn write_image(grid: &ScalarGrid, path: &Path, format: ImageFormat) -> Result<Normalization> {
    write_image_with_range(grid, path, format, None)
}

/// Like [`write_image`] but with a fixed (min, max) gray mapping instead of
/// the grid's own range — used for phase images spanning (-π, π].
pub fn write_image_with_range(
    grid: &ScalarGrid,
    path: &Path,
    format: ImageFormat,
    range: Option<(f64, f64)>,
) -> Result<Normalization> {
    let (pixels, norm) = normalize_u16(grid, range);
    let (cols, rows) = (grid.geometry.cols, grid.geometry.rows);
    // Flip vertically for image convention.
    let mut flipped: Vec<u16> = Vec::with_capacity(pixels.len());
    for j in (0..rows).rev() {
        flipped.extend_from_slice(&pixels[j * cols..(j + 1) * cols]);
    }
    match format {
        ImageFormat::Pgm => {
            let mut bytes = format!("P5\n{cols} {rows}\n65535\n").into_bytes();
            for px in &flipped {
                bytes.extend_from_slice(&px.to_be_bytes());
            }
            fs::write(path, bytes)?;
        }
        ImageFormat::Png => {
            let file = fs::File::create(path)?;
            let w = std::io::BufWriter::new(file);
            let mut encoder = png::Encoder::new(w, cols as u32, rows as u32);
            encoder.set_color(png::ColorType::Grayscale);
            encoder.set_depth(png::BitDepth::Sixteen);
            let mut writer = encoder
                .write_header()
                .map_err(|e| Error::Io(std::io::Error::other(e)))?;
            let mut bytes = Vec::with_capacity(flipped.len() * 2);
            for px in &flipped {
                bytes.extend_from_slice(&px.to_be_bytes());
            }
            writer
                .write_image_data(&bytes)
                .map_err(|e| Error::Io(std::io::Error::other(e)))?;
        }
    }
    Ok(norm)
}

/// Write the JSON sidecar next to an emitted image.
pub fn write_sidecar<M: Serialize>(image_path: &Path, metadata: &M) -> Result<PathBuf> {
    let mut sidecar = image_path.as_os_str().to_owned();
    sidecar.push(".meta.json");
    let path = PathBuf::from(sidecar);
    let json = serde_json::to_string_pretty(metadata)
        .map_err(|e| Error::Io(std::io::Error::other(e)))?;
    let mut file = fs::File::create(&path)?;
    file.write_all(json.as_bytes())?;
    file.write_all(b"\n")?;
    Ok(path)
}

/// Two-column CSV for 1D sweeps (parameter, value).
pub fn write_curve_csv(header: (&str, &str), points: &[(f64, f64)], path: &Path) -> Result<()> {
    let mut out = format!("{},{}\n", header.0, header.1);
    for (x, y) in points {
        out.push_str(&format!("{x},{y}\n"));
    }
    fs::write(path, out)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridGeometry;

    #[test]
    fn csv_round_trips_exact_values() {
        let g = GridGeometry::centered(3, 2, 1.0);
        let grid = ScalarGrid::from_data(
            g,
            vec![0.1, -2.5e-7, std::f64::consts::PI, 1.0 / 3.0, 6.02e23, 0.0],
        )
        .unwrap();
        let dir = std::env::temp_dir().join(format!("lauegram-csv-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("grid.csv");
        write_csv(&grid, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let parsed: Vec<f64> = text
            .lines()
            .flat_map(|l| l.split(','))
            .map(|t| t.parse().unwrap())
            .collect();
        assert_eq!(parsed, grid.data());
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn pgm_has_expected_header_and_size() {
        let g = GridGeometry::centered(4, 3, 1.0);
        let grid = ScalarGrid::from_fn(g, |u, v| u + 2.0 * v);
        let dir = std::env::temp_dir().join(format!("lauegram-pgm-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("grid.pgm");
        let norm = write_image(&grid, &path, ImageFormat::Pgm).unwrap();
        let bytes = std::fs::read(&path).unwrap();
        assert!(bytes.starts_with(b"P5\n4 3\n65535\n"));
        assert_eq!(bytes.len(), b"P5\n4 3\n65535\n".len() + 4 * 3 * 2);
        assert!(norm.max > norm.min);
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn constant_image_normalizes_to_zero() {
        let g = GridGeometry::centered(2, 2, 1.0);
        let grid = ScalarGrid::from_data(g, vec![3.0; 4]).unwrap();
        let (pixels, norm) = normalize_u16(&grid, None);
        assert!(pixels.iter().all(|&p| p == 0));
        assert_eq!(norm.scale, 0.0);
    }

    #[test]
    fn fixed_range_mapping_is_linear_over_the_range() {
        let g = GridGeometry::centered(3, 1, 1.0);
        let grid =
            ScalarGrid::from_data(g, vec![-std::f64::consts::PI, 0.0, std::f64::consts::PI])
                .unwrap();
        let (pixels, norm) = normalize_u16(
            &grid,
            Some((-std::f64::consts::PI, std::f64::consts::PI)),
        );
        assert_eq!(pixels, vec![0, 32768, 65535]);
        assert_eq!(norm.min, -std::f64::consts::PI);
    }
}
