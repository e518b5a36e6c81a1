//! Complex log-gamma and a few elementary helpers.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

// B_{2k}/(2k(2k−1)) for k = 1..10.
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
];

/// log Γ(z) for complex z off the non-positive integers. For Re z ≥ 1/2 this
/// is the branch continuous from the positive axis; below that the
/// reflection formula is used and only exp of the result is meaningful.
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("log-gamma of non-finite {z}")));
    }
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        return Err(Error::Pole { location: z, detail: "gamma pole".into() });
    }
    if z.re < 0.5 {
        let s = (z * PI).sin();
        return Ok(Complex64::new(PI.ln(), 0.0) - s.ln() - ln_gamma(1.0 - z)?);
    }
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.norm() < 15.0 {
        shift += w.ln();
        w += 1.0;
    }
    let inv = 1.0 / w;
    let inv2 = inv * inv;
    let mut corr = Complex64::new(0.0, 0.0);
    let mut p = inv;
    for c in STIRLING {
        corr += p * c;
        p *= inv2;
    }
    Ok((w - 0.5) * w.ln() - w + LN_SQRT_2PI + corr - shift)
}

/// log Γ(x) for real x > 0.
pub fn ln_gamma_real(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x)
}

/// Γ(x) for real x, negative arguments included.
pub fn gamma_real(x: f64) -> f64 {
    statrs::function::gamma::gamma(x)
}

/// e^z − 1 without cancellation for small |z|.
pub fn expm1_complex(z: Complex64) -> Complex64 {
    let (s, c) = z.im.sin_cos();
    let h = (0.5 * z.im).sin();
    Complex64::new(z.re.exp_m1() * c - 2.0 * h * h, z.re.exp() * s)
}

/// Harmonic number H_n.
pub fn harmonic(n: usize) -> f64 {
    (1..=n).map(|l| 1.0 / l as f64).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_real_log_gamma() {
        for &x in &[0.1, 0.5, 1.0, 2.5, 7.0, 30.0, 171.0] {
            let v = ln_gamma(Complex64::new(x, 0.0)).unwrap();
            assert!((v.re - ln_gamma_real(x)).abs() < 1e-13 * (1.0 + ln_gamma_real(x).abs()));
            assert_eq!(v.im, 0.0);
        }
    }

    #[test]
    fn recurrence_off_axis() {
        let z = Complex64::new(0.7, 3.1);
        let a = ln_gamma(z + 1.0).unwrap();
        let b = ln_gamma(z).unwrap() + z.ln();
        assert!((a - b).norm() < 1e-13);
    }

    #[test]
    fn reflection_region() {
        let z = Complex64::new(-0.5, 0.0);
        let v = ln_gamma(z).unwrap().exp();
        assert!((v.re + 2.0 * PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn expm1_small() {
        let z = Complex64::new(1e-12, -2e-12);
        let v = expm1_complex(z);
        assert!((v - z).norm() < 1e-23);
    }
}
