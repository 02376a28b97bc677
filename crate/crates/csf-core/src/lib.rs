//! Numerical kernel for curve shortening flow experiments.
//!
//! Everything in this crate is pure computation on plane curves: sampled
//! graphs `x = u(y)`, oriented polylines, closed-form soliton profiles,
//! glued initial data built from clipped Grim Reapers, a semi-implicit
//! graphical solver, a semi-implicit parametric solver, and the geometric
//! measurements (signed areas, intersections, hulls, extrema counts) used
//! to turn flow runs into verdicts.
//!
//! The crate is `no_std` (with `alloc`); IO, file formats, rendering and
//! the CLI live in the companion `csf-lab` crate.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod curve;
pub mod error;
pub mod exact;
pub mod gluing;
pub mod graph_flow;
pub mod param_flow;

mod math;
mod tridiag;

pub use curve::{FlowTrajectory, Point, PolyCurve, SampledGraph, Snapshot, StepStats};
pub use error::{Error, Result};
