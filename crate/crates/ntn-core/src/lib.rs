//! Spherical stochastic-geometry models of non-terrestrial networks.
//!
//! This crate provides the computational core for modeling constellations of
//! non-terrestrial platforms (satellites, HAPs) as point processes on a
//! sphere, evaluating topology-level statistics in closed form, and estimating
//! channel-level metrics (coverage, localizability) by seeded Monte Carlo.
//!
//! The crate is `no_std` (with `alloc`); float math goes through [`libm`] so
//! results are bit-reproducible across platforms. Everything randomized is
//! driven by explicit 64-bit seeds with documented substream derivation (see
//! [`rng`]), so parallel and serial evaluations of the same configuration
//! agree bit-for-bit.
//!
//! Unit conventions: geometry in kilometers and radians, link budgets in SI
//! (watts, meters, hertz). Decibel conversions live in [`link::db`] and are
//! meant for I/O boundaries only.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod error;
pub mod fading;
pub mod geometry;
pub mod link;
pub mod mc;
pub mod numeric;
pub mod process;
pub mod rng;
pub mod special;
pub mod stats;
pub mod study;
pub mod topology;

pub use error::{Error, Result};
pub use geometry::{CentralAngle, SpacePoint, ZenithAngle, EARTH_RADIUS_KM};
pub use process::{ConstellationSample, OrbitSpec, ProcessSpec};
