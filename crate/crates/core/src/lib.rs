//! Casimir force between a gold sphere and a silicon plate: permittivities,
//! Lifshitz force, roughness corrections, calibration fits and the
//! statistical comparison of theory with measured force curves.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod calibration;
pub mod compare;
pub mod constants;
pub mod dielectric;
pub mod fixtures;
pub mod interp;
pub mod lifshitz;
pub mod quad;
pub mod roughness;
pub mod stats;
