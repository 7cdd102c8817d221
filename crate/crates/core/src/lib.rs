//! Steering robustness, MUB witnesses and certified cooling advantage.

pub mod assemblage;
pub mod bounds;
pub mod conic;
pub mod cooling;
pub mod error;
pub mod linop;
pub mod mub;
pub mod random;
pub mod steering;

pub use error::{Error, Result};
