//! Barnes multiple gamma functions, Barnes beta distributions, the Selberg
//! and Morris integral laws, and discrete Gaussian free field maxima.

pub mod barnesbeta;
pub mod error;
pub mod gffmax;
pub mod multigamma;
pub mod numerics;
pub mod report;
pub mod selbergmorris;
pub mod special;

pub use error::{Error, Result};
pub use num_complex::Complex64;
