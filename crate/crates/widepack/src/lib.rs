//! Parameterized approximation scheme for two-dimensional knapsack with wide
//! rectangles: given `n` axis-aligned rectangles with integer sidelengths,
//! each at least as wide as tall, and a target count `k`, either produce a
//! non-overlapping axis-aligned packing of at least `(1 - eps) * k` of them
//! into the box, or correctly conclude that no `k` of them fit.
//!
//! The crate exposes the full pipeline as a library:
//!
//! - [`geometry`]: grid regions, orthogonal polylines, shift zones;
//! - [`model`]: instances, packings, rounding, JSON formats, generators;
//! - [`colorcode`]: exhaustive and randomized coloring families;
//! - [`exact`]: exact packing of few rectangles into a grid region;
//! - [`conflict`]: horizontal visibility graphs, disjoint path families and
//!   minimum vertex separators;
//! - [`structure`]: the structural transformation of a packing into slices
//!   between low-complexity polylines, with repacking certificates;
//! - [`dp`]: the dynamic program over polylines and color sets;
//! - [`solver`]: the top-level solver with thin-item reduction;
//! - [`oracle`]: an independent brute-force reference solver;
//! - [`render`]: SVG output; [`suite`]: batch experiment runner.

pub mod colorcode;
pub mod conflict;
pub mod dp;
pub mod error;
pub mod exact;
pub mod geometry;
pub mod model;
pub mod oracle;
pub mod render;
pub mod solver;
pub mod structure;
pub mod suite;

pub use error::{Error, Result};
pub use geometry::{BBox, PlacedRect, Polyline, Rect, Region, ShiftDir};
pub use model::{Instance, Item, Packing, Placement, RoundingParams};
