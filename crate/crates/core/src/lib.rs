//! Geometric inference from point clouds: geodesic metric estimation,
//! spherical distortion radius, curvature radius and reach.
//!
//! ```
//! use reachkit::{sdr, synth};
//!
//! let shape = synth::ShapeSpec::Circle { r: 1.0 };
//! let space = synth::exact_metric_space(&shape, 100, 7).unwrap();
//! let res = sdr::sdr_delta(&space, 0.5, false).unwrap();
//! assert!((res.value - 1.0).abs() < 1e-9);
//! ```

pub mod bench;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod graph;
pub mod io;
pub mod localpoly;
pub mod metric;
pub mod reach;
pub mod rng;
pub mod sdr;
pub mod synth;
pub mod tensor;

pub use error::{Error, Result};
pub use geometry::{FiniteMetricSpace, ModelParams, PointCloud};
