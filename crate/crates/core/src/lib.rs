pub mod cli;
pub mod coxeter;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod lp;
pub mod numfield;
pub mod subgroups;
pub mod vinberg;
pub mod zariski;

pub use error::{Error, Result};
