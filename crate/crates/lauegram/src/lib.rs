// Validation deliberately uses `!(x > 0.0)` so that NaN fails the check;
// rewriting as `x <= 0.0` would accept NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Wave-optics simulation of a perfect-crystal neutron interferometer.
//!
//! The crate models the full chain from dynamical Laue diffraction in the
//! interferometer crystals to the interference patterns recorded behind it:
//!
//! - [`dyndiff`] — two-beam dynamical diffraction in a perfect crystal plate:
//!   crystal functions, rocking-curve intensities, Pendellösung, two-path
//!   interferometer intensities, Gaussian wave packets, and the geometric
//!   Borrmann-fan / Moiré-magnification estimates.
//! - [`phase_objects`] — macroscopic phase objects (spiral phase plate, wedge,
//!   slab) converted into beam-path thickness maps by slice-wise Radon
//!   projection.
//! - [`interferogram`] — point-to-point synthesis of two-dimensional
//!   interference patterns from thickness maps, the closed-form fringe model
//!   with a topological charge, detector binning, and fork-dislocation
//!   analysis.
//! - [`holography`] — digital-holography reconstruction of interferograms via
//!   the discrete Fresnel transform.
//! - [`analysis`] — quantitative feasibility numbers: Fresnel numbers,
//!   coherence-area capture estimates, wedge beam deflection, transverse
//!   profile comparison.
//! - [`config`] / [`pipeline`] / [`export`] — scene configuration, figure
//!   pipelines, and artifact emission (CSV, 16-bit PNG/PGM, sidecar metadata,
//!   run manifests).
//!
//! Start with the runnable examples (`cargo run --example <name>`); each one
//! exercises one capability end to end.

pub mod analysis;
pub mod config;
pub mod dyndiff;
pub mod error;
pub mod export;
pub mod grid;
pub mod holography;
pub mod interferogram;
pub mod phase_objects;
pub mod pipeline;

mod numerics;

pub use error::{Error, Result};
pub use grid::{GridGeometry, ScalarGrid};

/// Physical constants used throughout (SI).
pub mod constants {
    /// Reduced Planck constant, J s.
    pub const HBAR: f64 = 1.054_571_817e-34;
    /// Neutron mass, kg.
    pub const NEUTRON_MASS: f64 = 1.674_927_498_04e-27;
}
