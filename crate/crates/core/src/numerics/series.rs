//! Truncated Taylor series around t = 0.

use super::Scalar;
use crate::error::{Error, Result};

/// Taylor coefficients `c_0..c_K` of a function analytic near zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesCoeffs<T: Scalar = f64> {
    coefficients: Vec<T>,
    radius_hint: f64,
}

impl<T: Scalar> SeriesCoeffs<T> {
    pub fn new(coefficients: Vec<T>, radius_hint: f64) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::InvalidParameter("series needs at least one coefficient".into()));
        }
        if !(radius_hint > 0.0) {
            return Err(Error::InvalidParameter(format!("radius hint must be positive, got {radius_hint}")));
        }
        if let Some(k) = coefficients.iter().position(|c| !c.is_finite_value()) {
            return Err(Error::InvalidParameter(format!("series coefficient {k} is not finite")));
        }
        Ok(Self { coefficients, radius_hint })
    }

    /// The series of the constant 1 through order `k`.
    pub fn identity(k: usize) -> Self {
        let mut c = vec![T::zero(); k + 1];
        c[0] = T::from(1.0);
        Self { coefficients: c, radius_hint: f64::INFINITY }
    }

    pub fn coefficients(&self) -> &[T] {
        &self.coefficients
    }

    pub fn radius_hint(&self) -> f64 {
        self.radius_hint
    }

    /// Highest retained order K.
    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn eval(&self, t: f64) -> T {
        self.coefficients
            .iter()
            .rev()
            .fold(T::zero(), |acc, &c| acc * t + c)
    }

    pub fn truncate(&self, k: usize) -> Self {
        let k = k.min(self.order());
        Self { coefficients: self.coefficients[..=k].to_vec(), radius_hint: self.radius_hint }
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            coefficients: self.coefficients.iter().map(|&c| c * s).collect(),
            radius_hint: self.radius_hint,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let k = self.order().min(other.order());
        Self {
            coefficients: (0..=k).map(|i| self.coefficients[i] + other.coefficients[i]).collect(),
            radius_hint: self.radius_hint.min(other.radius_hint),
        }
    }

    /// Drops the constant term and divides by t. The constant term is ignored,
    /// so callers check it vanishes.
    pub fn shift_down(&self) -> Self {
        let c = if self.coefficients.len() > 1 {
            self.coefficients[1..].to_vec()
        } else {
            vec![T::zero()]
        };
        Self { coefficients: c, radius_hint: self.radius_hint }
    }

    /// Multiplies by t^m, keeping the order fixed.
    pub fn shift_up(&self, m: usize) -> Self {
        let k = self.order();
        let mut c = vec![T::zero(); k + 1];
        for i in m..=k {
            c[i] = self.coefficients[i - m];
        }
        Self { coefficients: c, radius_hint: self.radius_hint }
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn reciprocal(&self) -> Result<Self> {
        let c0 = self.coefficients[0];
        if c0.modulus() == 0.0 {
            return Err(Error::Domain("series reciprocal needs a nonzero constant term".into()));
        }
        let inv0 = c0.recip();
        let k = self.order();
        let mut r = vec![T::zero(); k + 1];
        r[0] = inv0;
        for n in 1..=k {
            let mut s = T::zero();
            for j in 1..=n {
                s = s + self.coefficients[j] * r[n - j];
            }
            r[n] = -(s * inv0);
        }
        Ok(Self { coefficients: r, radius_hint: self.radius_hint })
    }
}

/// Cauchy product of all factors through order `k`. An empty list gives the
/// identity series.
pub fn series_product<T: Scalar>(factors: &[SeriesCoeffs<T>], k: usize) -> Result<SeriesCoeffs<T>> {
    let mut acc: SeriesCoeffs<T> = SeriesCoeffs::identity(k);
    for (idx, f) in factors.iter().enumerate() {
        if f.order() < k {
            return Err(Error::Contract(format!(
                "factor {idx} has order {} but order {k} was requested",
                f.order()
            )));
        }
        let mut out = vec![T::zero(); k + 1];
        for (i, &a) in acc.coefficients.iter().enumerate() {
            if Scalar::modulus(a) == 0.0 {
                continue;
            }
            for j in 0..=(k - i) {
                out[i + j] = out[i + j] + a * f.coefficients[j];
            }
        }
        acc = SeriesCoeffs { coefficients: out, radius_hint: acc.radius_hint.min(f.radius_hint) };
    }
    Ok(acc)
}

/// Series of e^{ct}.
pub fn exp_series<T: Scalar>(c: T, k: usize) -> SeriesCoeffs<T> {
    let mut coeffs = Vec::with_capacity(k + 1);
    let mut term = T::from(1.0);
    coeffs.push(term);
    for n in 1..=k {
        term = term * c / n as f64;
        coeffs.push(term);
    }
    SeriesCoeffs { coefficients: coeffs, radius_hint: f64::INFINITY }
}

/// Series of (1 − e^{−bt})/t.
pub fn one_minus_exp_over_t(b: f64, k: usize) -> SeriesCoeffs<f64> {
    let mut coeffs = Vec::with_capacity(k + 1);
    // (1 − e^{−bt})/t = Σ_n (−1)^n b^{n+1} t^n/(n+1)!
    let mut term = b;
    for n in 0..=k {
        coeffs.push(term);
        term *= -b / (n + 2) as f64;
    }
    SeriesCoeffs { coefficients: coeffs, radius_hint: f64::INFINITY }
}

/// Series of t/(1 − e^{−at}); its radius is 2π/a.
pub fn t_over_one_minus_exp(a: f64, k: usize) -> SeriesCoeffs<f64> {
    let c = bernoulli_over_factorial(k);
    let coeffs = c.iter().enumerate().map(|(n, cn)| cn * a.powi(n as i32 - 1)).collect();
    SeriesCoeffs { coefficients: coeffs, radius_hint: 2.0 * std::f64::consts::PI / a }
}

/// B_n/n! for n = 0..=k with B_1 = +1/2, the Taylor coefficients of t/(1 − e^{−t}).
pub fn bernoulli_over_factorial(k: usize) -> Vec<f64> {
    let mut c = vec![0.0; k + 1];
    c[0] = 1.0;
    if k >= 1 {
        c[1] = 0.5;
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    for n in (2..=k).step_by(2) {
        // B_n/n! = (−1)^{n/2+1} 2ζ(n)/(2π)^n
        let zeta = zeta_even(n);
        let sign = if (n / 2) % 2 == 1 { 1.0 } else { -1.0 };
        c[n] = sign * 2.0 * zeta / two_pi.powi(n as i32);
    }
    c
}

// Partial sum to 63 plus Euler-Maclaurin corrections at 64.
fn zeta_even(n: usize) -> f64 {
    let s = n as f64;
    let big = 64.0f64;
    let head: f64 = (1..64).rev().map(|j| (j as f64).powi(-(n as i32))).sum();
    let p = big.powf(-s);
    head + big * p / (s - 1.0) + 0.5 * p + s * p / (12.0 * big)
        - s * (s + 1.0) * (s + 2.0) * p / (720.0 * big.powi(3))
}

/// Bernoulli numbers with B_1 = +1/2.
pub fn bernoulli_plus(k: usize) -> Vec<f64> {
    let mut fact = 1.0;
    bernoulli_over_factorial(k)
        .into_iter()
        .enumerate()
        .map(|(n, c)| {
            if n > 0 {
                fact *= n as f64;
            }
            c * fact
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn bernoulli_numbers() {
        let b = bernoulli_plus(12);
        let expect = [1.0, 0.5, 1.0 / 6.0, 0.0, -1.0 / 30.0, 0.0, 1.0 / 42.0, 0.0, -1.0 / 30.0, 0.0, 5.0 / 66.0, 0.0, -691.0 / 2730.0];
        for (x, y) in b.iter().zip(expect) {
            assert!((x - y).abs() < 1e-14, "{x} {y}");
        }
    }

    #[test]
    fn reciprocal_of_complex_series() {
        let s = exp_series(Complex64::new(0.3, -1.2), 10);
        let r = s.reciprocal().unwrap();
        let e = exp_series(Complex64::new(-0.3, 1.2), 10);
        for (x, y) in r.coefficients().iter().zip(e.coefficients()) {
            assert!((x - y).norm() < 1e-14);
        }
    }

    #[test]
    fn shifts() {
        let s = SeriesCoeffs::new(vec![0.0, 1.0, 2.0], 1.0).unwrap();
        assert_eq!(s.shift_down().coefficients(), &[1.0, 2.0]);
        assert_eq!(s.shift_up(1).coefficients(), &[0.0, 0.0, 1.0]);
    }
}
