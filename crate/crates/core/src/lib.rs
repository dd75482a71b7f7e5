//! Elastica constructions, the adapted elastic energy `E = B + D`, and a
//! semi-implicit solver for the elastic flow of complete planar curves.
//!
//! Complete curves are handled on a truncated window whose ends are clamped
//! to the horizontal asymptote; every energy carries a separate bound for the
//! omitted tails.

pub mod banded;
pub mod curve;
pub mod energy;
pub mod error;
pub mod experiments;
pub mod flow;
pub mod geometry;
pub mod io;
pub mod specfun;
pub mod spline;
pub mod verify;
pub mod zoo;

pub use curve::{ArcCurve, CurveKind};
pub use error::{Error, Result};
