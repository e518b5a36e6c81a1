//! Barnes multiple gamma functions Γ_M(w|a) in the Ruijsenaars normalization.
//!
//! log Γ_M is evaluated by shifting w along the largest period with the
//! functional equation Γ_M(w) = Γ_{M−1}(w|â_i)Γ_M(w + a_i) until |w| clears
//! a switch radius, and then summing the large-|w| expansion including its
//! full inverse-power tail. The Malmstén integral is available separately
//! and serves as an independent cross-check.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::quadrature::integrate_semiline;
use crate::numerics::series::{exp_series, series_product, t_over_one_minus_exp};
use crate::numerics::{SemilineIntegrand, SeriesCoeffs};
use crate::special::{harmonic, ln_gamma};

/// Largest supported order.
pub const MAX_ORDER: usize = 12;
const TAIL_TERMS: usize = 48;
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Order M and periods a of Γ_M(·|a).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiGammaParams {
    a: Vec<f64>,
}

impl MultiGammaParams {
    pub fn new(a: Vec<f64>) -> Result<Self> {
        if a.len() > MAX_ORDER {
            return Err(Error::InvalidParameter(format!("order {} exceeds {MAX_ORDER}", a.len())));
        }
        if let Some(x) = a.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
            return Err(Error::InvalidParameter(format!("periods must be positive and finite, got {x}")));
        }
        Ok(Self { a })
    }

    pub fn order(&self) -> usize {
        self.a.len()
    }

    pub fn periods(&self) -> &[f64] {
        &self.a
    }

    /// |a| = Σ a_i.
    pub fn total(&self) -> f64 {
        self.a.iter().sum()
    }

    /// The periods with axis `i` removed (â_i).
    pub fn without(&self, i: usize) -> Self {
        let mut a = self.a.clone();
        a.remove(i);
        Self { a }
    }

    pub fn scaled(&self, kappa: f64) -> Self {
        Self { a: self.a.iter().map(|x| x * kappa).collect() }
    }

    /// Default switch radius 20·max a_i of the large-|w| expansion.
    pub fn switch_radius(&self) -> f64 {
        20.0 * self.a.iter().cloned().fold(0.0, f64::max)
    }

    /// Taylor coefficients of f_M(t|a) = Π t/(1 − e^{−a_i t}) through order k.
    pub fn f_series(&self, k: usize) -> SeriesCoeffs<f64> {
        let factors: Vec<_> = self.a.iter().map(|&ai| t_over_one_minus_exp(ai, k)).collect();
        series_product(&factors, k).expect("factor orders match")
    }
}

/// Precomputed evaluator for log Γ_M(·|a).
#[derive(Debug, Clone)]
pub struct MultiGamma {
    params: MultiGammaParams,
    // c_k = B_{M,k}(0|a)/k!
    coeffs: Vec<f64>,
    axis: usize,
    radius: f64,
    sub: Option<Box<MultiGamma>>,
}

impl MultiGamma {
    pub fn new(params: &MultiGammaParams) -> Self {
        let m = params.order();
        let coeffs = params.f_series(m + TAIL_TERMS).coefficients().to_vec();
        let axis = params
            .a
            .iter()
            .enumerate()
            .fold(0, |best, (i, &x)| if x > params.a[best] { i } else { best });
        let sub = if m >= 2 { Some(Box::new(MultiGamma::new(&params.without(axis)))) } else { None };
        Self { params: params.clone(), coeffs, axis, radius: params.switch_radius(), sub }
    }

    pub fn params(&self) -> &MultiGammaParams {
        &self.params
    }

    /// log Γ_M(w|a) for Re w > 0.
    pub fn log_gamma(&self, w: Complex64) -> Result<Complex64> {
        if !(w.re > 0.0) || !w.im.is_finite() {
            return Err(Error::Domain(format!("log Γ_M needs Re(w) > 0, got {w}")));
        }
        Ok(self.eval(w))
    }

    fn eval(&self, w: Complex64) -> Complex64 {
        let m = self.params.order();
        match m {
            0 => -w.ln(),
            1 => {
                let a = self.params.a[0];
                let z = w / a;
                (z - 0.5) * a.ln() + ln_gamma(z).expect("Re z > 0") - LN_SQRT_2PI
            }
            _ => {
                let sub = self.sub.as_ref().expect("order ≥ 2 has a sub-evaluator");
                let step = self.params.a[self.axis];
                let mut acc = Complex64::new(0.0, 0.0);
                let mut z = w;
                while z.norm() < self.radius {
                    acc += sub.eval(z);
                    z += step;
                }
                acc + self.expansion(z, true)
            }
        }
    }

    // Large-|w| expansion; `tail` adds the Σ_{k>M} inverse powers.
    fn expansion(&self, w: Complex64, tail: bool) -> Complex64 {
        let m = self.params.order();
        let c = &self.coeffs;
        let mut fact = vec![1.0; m + 1];
        for j in 1..=m {
            fact[j] = fact[j - 1] * j as f64;
        }
        let neg = -w;
        let mut bmm = Complex64::new(0.0, 0.0);
        let mut poly = Complex64::new(0.0, 0.0);
        for k in 0..=m {
            let p = neg.powi((m - k) as i32) * (c[k] / fact[m - k]);
            bmm += p;
            poly += p * harmonic(m - k);
        }
        let mut out = -bmm * w.ln() + poly;
        if tail {
            // At |w| ≥ 20·max a the optimal truncation lies near k ≈ 125, so
            // all tail terms are summed; magnitudes need not be monotone.
            let inv = 1.0 / w;
            let mut pw = inv;
            let mut fk = 1.0; // (k − M − 1)!
            for k in (m + 1)..c.len() {
                if k > m + 1 {
                    fk *= (k - m - 1) as f64;
                }
                let term = pw * (c[k] * fk);
                out += term;
                if term.norm() <= 1e-18 * out.norm() && c[k] != 0.0 {
                    break;
                }
                pw *= inv;
            }
        }
        out
    }

    /// log Γ_M(w|a) anywhere off the pole set, via repeated shifts along
    /// axis `i` until the real part is positive. At least one shift is taken.
    pub fn log_gamma_extended(&self, w: Complex64, i: usize) -> Result<Complex64> {
        let m = self.params.order();
        if m == 0 {
            return log_gamma0(w);
        }
        if i >= m {
            return Err(Error::InvalidParameter(format!("axis {i} out of range for order {m}")));
        }
        let step = self.params.a[i];
        let sub = MultiGamma::new(&self.params.without(i));
        let mut acc = Complex64::new(0.0, 0.0);
        let mut z = w;
        loop {
            acc += sub.log_gamma_any(z).map_err(|e| relocate(e, w))?;
            z += step;
            if z.re > 0.0 {
                break;
            }
        }
        Ok(acc + self.eval(z))
    }

    /// log Γ_M(w|a) for any w off the pole set. Direct when Re w > 0.
    pub fn log_gamma_any(&self, w: Complex64) -> Result<Complex64> {
        if !(w.re.is_finite() && w.im.is_finite()) {
            return Err(Error::Domain(format!("non-finite argument {w}")));
        }
        if w.re > 0.0 {
            return Ok(self.eval(w));
        }
        if self.params.order() == 0 {
            return log_gamma0(w);
        }
        self.log_gamma_extended(w, self.axis)
    }
}

fn log_gamma0(w: Complex64) -> Result<Complex64> {
    if w.norm() <= 1e-13 {
        return Err(Error::Pole { location: w, detail: "Γ_0(w) = 1/w has a pole at 0".into() });
    }
    Ok(-w.ln())
}

fn relocate(e: Error, w: Complex64) -> Error {
    match e {
        Error::Pole { location, detail } => Error::Pole {
            location: w,
            detail: format!("{detail}; reached from w = {w} via the lattice point {}", w - location),
        },
        other => other,
    }
}

/// B_{M,m}(x|a) = m!·[t^m] f_M(t|a)e^{−xt}.
pub fn bernoulli_poly(params: &MultiGammaParams, m: usize, x: Complex64) -> Result<Complex64> {
    let cap = 2 * params.order() + 4;
    if m > cap {
        return Err(Error::Contract(format!("Bernoulli order {m} exceeds cap {cap}")));
    }
    Ok(bernoulli_poly_uncapped(params, m, x))
}

pub(crate) fn bernoulli_poly_uncapped(params: &MultiGammaParams, m: usize, x: Complex64) -> Complex64 {
    let c = params.f_series(m);
    let mut fact = 1.0;
    let mut acc = Complex64::new(0.0, 0.0);
    // m!·Σ_j c_j (−x)^{m−j}/(m−j)!
    let neg = -x;
    for j in (0..=m).rev() {
        let d = m - j;
        if d > 0 {
            fact *= d as f64;
        }
        acc += neg.powi(d as i32) * (c.coefficients()[j] / fact);
    }
    let mut mfact = 1.0;
    for j in 2..=m {
        mfact *= j as f64;
    }
    acc * mfact
}

/// log Γ_M(w|a) for Re w > 0.
pub fn log_multi_gamma(params: &MultiGammaParams, w: Complex64) -> Result<Complex64> {
    MultiGamma::new(params).log_gamma(w)
}

/// The leading large-|w| form −B_{M,M}(w)log w/M! + polynomial part, with
/// an O(1/w) remainder. Meant for |w| beyond [`MultiGammaParams::switch_radius`].
pub fn log_multi_gamma_asymptotic(params: &MultiGammaParams, w: Complex64) -> Result<Complex64> {
    if w.norm() == 0.0 || (w.im == 0.0 && w.re < 0.0) || !(w.re.is_finite() && w.im.is_finite()) {
        return Err(Error::Domain(format!("asymptotic form needs |arg w| < π, got {w}")));
    }
    Ok(MultiGamma::new(params).expansion(w, false))
}

/// log Γ_M(w|a) by direct quadrature of the Malmstén integral.
pub fn log_multi_gamma_integral(params: &MultiGammaParams, w: Complex64, rel_tol: f64) -> Result<Complex64> {
    if !(w.re > 0.0) {
        return Err(Error::Domain(format!("Malmstén integral needs Re(w) > 0, got {w}")));
    }
    let m = params.order();
    if m == 0 {
        return Ok(-w.ln());
    }
    let k = 60;
    let f = params.f_series(m + k + 2);
    let fc: Vec<Complex64> = f.coefficients().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let fser = SeriesCoeffs::new(fc, f.radius_hint())?;
    // [t^j] f_M(t)e^{−wt} = B_{M,j}(w)/j!
    let g = series_product(&[fser, exp_series(-w, m + k + 2)], m + k + 2)?;
    let b = g.coefficients().to_vec();
    let bm = b[m];
    // Small-t expansion of the bracket divided by t^{M+1}.
    let mut small = Vec::with_capacity(k + 1);
    let mut inv_fact = 1.0; // 1/(n+1)!
    for n in 0..=k {
        inv_fact /= (n + 1) as f64;
        let sign = if n % 2 == 0 { -1.0 } else { 1.0 };
        small.push(b[m + 1 + n] - bm * (sign * inv_fact));
    }
    let series = SeriesCoeffs::new(small, f.radius_hint())?;
    let a = params.a.clone();
    let direct = move |t: f64| -> Complex64 {
        let mut fm = 1.0;
        for &ai in &a {
            fm *= t / -(-ai * t).exp_m1();
        }
        let mut poly = Complex64::new(0.0, 0.0);
        let mut tp = 1.0;
        for bj in b.iter().take(m) {
            poly += bj * tp;
            tp *= t;
        }
        let val = (-w * t).exp() * fm - poly - bm * (tp * (-t).exp());
        val / t.powi(m as i32 + 1)
    };
    let integrand = SemilineIntegrand::with_series(direct, series);
    Ok(integrate_semiline(&integrand, 1.0, rel_tol)?.value)
}

/// log Γ_M(w|a) by shifting along axis `i`; handles Re w ≤ 0 off the poles.
pub fn extend_by_functional_eq(params: &MultiGammaParams, w: Complex64, i: usize) -> Result<Complex64> {
    MultiGamma::new(params).log_gamma_extended(w, i)
}

/// S_M(w|a) = Γ_M(|a| − w|a)^{(−1)^M}/Γ_M(w|a).
pub fn multiple_sine(params: &MultiGammaParams, w: Complex64) -> Result<Complex64> {
    Ok(log_multiple_sine(params, w)?.exp())
}

pub fn log_multiple_sine(params: &MultiGammaParams, w: Complex64) -> Result<Complex64> {
    let g = MultiGamma::new(params);
    let sign = if params.order() % 2 == 0 { 1.0 } else { -1.0 };
    Ok(g.log_gamma_any(params.total() - w)? * sign - g.log_gamma_any(w)?)
}

/// log Γ_M(w) − log Γ_{M−1}(w|â_i) − log Γ_M(w + a_i).
pub fn functional_equation_residual(params: &MultiGammaParams, w: Complex64, i: usize) -> Result<Complex64> {
    if params.order() == 0 || i >= params.order() {
        return Err(Error::InvalidParameter("functional equation needs an axis 0 ≤ i < M".into()));
    }
    let g = MultiGamma::new(params);
    let s = MultiGamma::new(&params.without(i));
    Ok(g.log_gamma(w)? - s.log_gamma(w)? - g.log_gamma(w + params.a[i])?)
}

/// log Γ_M(κw|κa) + (B_{M,M}(w|a)/M!)·log κ − log Γ_M(w|a).
pub fn scaling_residual(params: &MultiGammaParams, w: Complex64, kappa: f64) -> Result<Complex64> {
    if !(kappa > 0.0) {
        return Err(Error::InvalidParameter("κ must be positive".into()));
    }
    let m = params.order();
    let b = bernoulli_poly_uncapped(params, m, w) / factorial(m);
    Ok(log_multi_gamma(&params.scaled(kappa), w * kappa)? + b * kappa.ln() - log_multi_gamma(params, w)?)
}

/// Difference of the two sides of the multiplication formula in log form.
pub fn multiplication_residual(params: &MultiGammaParams, w: Complex64, k: usize) -> Result<Complex64> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let m = params.order();
    let g = MultiGamma::new(params);
    let kf = k as f64;
    let b = bernoulli_poly_uncapped(params, m, w * kf) / factorial(m);
    let mut rhs = -b * kf.ln();
    let mut idx = vec![0usize; m];
    loop {
        let shift: f64 = idx.iter().zip(&params.a).map(|(&p, &a)| p as f64 * a).sum::<f64>() / kf;
        rhs += g.log_gamma(w + shift)?;
        // Odometer over {0..k−1}^M.
        let mut d = 0;
        while d < m {
            idx[d] += 1;
            if idx[d] < k {
                break;
            }
            idx[d] = 0;
            d += 1;
        }
        if d == m {
            break;
        }
    }
    Ok(g.log_gamma(w * kf)? - rhs)
}

pub(crate) fn factorial(m: usize) -> f64 {
    (1..=m).fold(1.0, |acc, j| acc * j as f64)
}

/// Closed form log Γ_1(w|a) = (w/a − 1/2) log a + log Γ(w/a) − log √(2π).
pub fn log_gamma1_closed(a: f64, w: Complex64) -> Result<Complex64> {
    let z = w / a;
    Ok((z - 0.5) * a.ln() + ln_gamma(z)? - 0.5 * (2.0 * PI).ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn integral_matches_shift_expansion() {
        for a in [vec![1.0], vec![1.0, 1.0], vec![1.0, 3.0], vec![0.5, 1.5, 2.0]] {
            let p = MultiGammaParams::new(a.clone()).unwrap();
            for w in [c(0.3, 0.0), c(1.0, 0.0), c(2.5, 1.5), c(7.0, -3.0)] {
                let x = log_multi_gamma(&p, w).unwrap();
                let y = log_multi_gamma_integral(&p, w, 1e-12).unwrap();
                assert!((x - y).norm() < 1e-9 * (1.0 + x.norm()), "{a:?} {w}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn order_zero_extension_pole() {
        let p = MultiGammaParams::new(vec![1.0]).unwrap();
        let e = extend_by_functional_eq(&p, c(-2.0, 0.0), 0).unwrap_err();
        assert!(matches!(e, Error::Pole { .. }));
    }
}
