//! Planar convex geometry around the Blaschke-Santaló inequality: polar
//! bodies, Santaló points, the Λ-body, John position, Banach-Mazur estimates,
//! Steiner symmetrization, and the experiment harness that measures how
//! close near-extremal bodies are to ellipses.

pub mod affine;
pub mod body;
pub mod error;
pub mod grid;
pub mod lab;
pub mod minkowski;
pub mod optim;
pub mod santalo;
pub mod symmetrize;

pub use body::{AffineMap, Body, BodyStats, FourierBody, Polygon, Shape, SupportVector, SurfaceMeasure};
pub use error::{GeomError, Result};
pub use grid::AngleGrid;
