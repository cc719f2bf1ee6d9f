pub mod asymptotics;
pub mod bitmatrix;
pub mod certified;
pub mod classifier;
pub mod construction;
pub mod dense;
pub mod error;
pub mod sparse;
pub mod targets;
pub mod uepoly;
pub mod weights;

pub use error::{Error, Result};
