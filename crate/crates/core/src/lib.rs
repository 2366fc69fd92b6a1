//! Hecke-character Maass forms over real quadratic fields: ideals, narrow
//! class groups, theta lifts, their L-functions and Petersson norms.

pub mod arith;
pub mod error;
pub mod heckechar;
pub mod lseries;
pub mod maassform;
pub mod petersson;
pub mod classforms;
pub mod cyclo;
pub mod quadfield;
pub mod special;

pub use error::{Error, Result};
