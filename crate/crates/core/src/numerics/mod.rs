//! Shared numerical kernels: quadrature on the half line, truncated power
//! series, characteristic-function inversion, quasi-random points and a few
//! sample statistics.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

pub mod inversion;
pub mod qmc;
pub mod quadrature;
pub mod series;
pub mod stats;

pub use inversion::{invert_cf_to_cdf, invert_cf_to_cdf_with, InversionOptions, TabulatedCDF};
pub use qmc::ScrambledSobol;
pub use quadrature::{
    integrate_finite, integrate_semiline, integrate_tail, QuadratureResult, SemilineIntegrand,
};
pub use series::{series_product, SeriesCoeffs};

/// Field scalar shared by the real and complex kernels.
pub trait Scalar:
    Copy
    + Send
    + Sync
    + Debug
    + PartialEq
    + From<f64>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
    + Neg<Output = Self>
{
    fn modulus(self) -> f64;
    fn is_finite_value(self) -> bool;
    fn to_complex(self) -> Complex64;
    fn recip(self) -> Self;
    fn zero() -> Self {
        Self::from(0.0)
    }
}

impl Scalar for f64 {
    fn modulus(self) -> f64 {
        self.abs()
    }
    fn is_finite_value(self) -> bool {
        self.is_finite()
    }
    fn to_complex(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
    fn recip(self) -> Self {
        1.0 / self
    }
}

impl Scalar for Complex64 {
    fn modulus(self) -> f64 {
        self.norm()
    }
    fn is_finite_value(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
    fn to_complex(self) -> Complex64 {
        self
    }
    fn recip(self) -> Self {
        self.inv()
    }
}
