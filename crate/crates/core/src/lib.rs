//! Random-walk quantities on distance-regular graphs, computed exactly from the
//! intersection array `{b_0, ..., b_{D-1}; c_1, ..., c_D}`.
//!
//! Everything that has a rational closed form is returned as a [`rational::Q`];
//! spectral data and generating functions are `f64`.

#![allow(clippy::needless_range_loop)]

pub mod array;
pub mod error;
pub mod harmonic;
pub mod potentials;
pub mod rational;
pub mod spectral;
pub mod walk;

pub use array::{parse_array, FamilySpec, IntersectionArray};
pub use error::{Error, Result};
pub use potentials::{biggs_potentials, constant_c, GammaStatus, PotentialTable};
pub use rational::{MaybeExact, Q};
