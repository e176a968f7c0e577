//! Verification-grade numerics for the Kerr exterior: exact Boyer-Lindquist
//! metric evaluation, jet-based tensor calculus, principal null frames and
//! their transformations, the non-integrable horizontal calculus with its
//! renormalization, the Carter tensor and operator, and a 1+1 Regge-Wheeler
//! evolver in tortoise coordinates.

// explicit index loops mirror the tensor index notation throughout
#![allow(clippy::needless_range_loop)]

pub mod carter;
pub mod diffgeo;
pub mod error;
pub mod frames;
pub mod gcm;
pub mod horizontal;
pub mod jet;
pub mod kerr;
pub mod quad;
pub mod rw;
pub mod sampler;

pub use error::{KerrError, Result};
pub use kerr::{BLPoint, KerrParams};
