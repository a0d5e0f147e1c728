//! Colored braids, ladder webs over `Λ^•(C^N)`, cone presentations of colored braid
//! complexes, and numerical stabilization of infinite colored twists.

pub mod braid;
pub mod operator;
pub mod web;
pub mod error;
pub mod poly;
pub mod skeleton;
pub mod stab;

pub use error::{Error, Result};
