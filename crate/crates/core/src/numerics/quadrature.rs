//! Double-exponential quadrature: tanh-sinh on finite panels with adaptive
//! bisection, exp-sinh on half lines.

use std::f64::consts::FRAC_PI_2;

use super::series::SeriesCoeffs;
use super::Scalar;
use crate::error::{Error, Result};

const MAX_LEVEL: usize = 8;
const MAX_DEPTH: usize = 14;
const TANH_SINH_TMAX: f64 = 3.6;
const EXP_SINH_TMIN: f64 = -4.2;
const EXP_SINH_TMAX: f64 = 4.4;
// Relative noise floor against the L1 mass of the integrand.
const NOISE_FLOOR: f64 = 1e-15;
const MAX_EVALS: usize = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult<T: Scalar = f64> {
    pub value: T,
    pub error_estimate: f64,
    pub evaluations: usize,
}

/// An integrand on (0, ∞) with an optional Taylor expansion used near zero.
pub struct SemilineIntegrand<F, T: Scalar = f64> {
    f: F,
    series: Option<SeriesCoeffs<T>>,
}

impl<F: Fn(f64) -> T, T: Scalar> SemilineIntegrand<F, T> {
    pub fn new(f: F) -> Self {
        Self { f, series: None }
    }

    pub fn with_series(f: F, series: SeriesCoeffs<T>) -> Self {
        Self { f, series: Some(series) }
    }

    /// Below this point the series replaces the direct formula.
    pub fn t_switch(&self) -> f64 {
        match &self.series {
            Some(s) => {
                let r = if s.radius_hint().is_finite() { s.radius_hint() } else { 1.0 };
                r / 64.0
            }
            None => 0.0,
        }
    }

    pub fn eval(&self, t: f64) -> T {
        match &self.series {
            Some(s) if t <= self.t_switch() => s.eval(t),
            _ => (self.f)(t),
        }
    }
}

struct Acc<T: Scalar> {
    value: T,
    error: f64,
    evals: usize,
}

fn check<T: Scalar>(v: T, x: f64) -> Result<T> {
    if v.is_finite_value() {
        Ok(v)
    } else {
        Err(Error::Domain(format!("integrand is not finite at t = {x}")))
    }
}

// One tanh-sinh pass over [a, b] with level refinement. Returns
// (value, error, evaluations, l1 mass, converged).
fn tanh_sinh_panel<T: Scalar>(
    f: &dyn Fn(f64) -> T,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<(T, f64, usize, f64, bool)> {
    let hw = 0.5 * (b - a);
    let mut evals = 0usize;
    // Sum of w·f over nodes at the current level, before multiplying by h.
    let mut sum = T::zero();
    let mut l1 = 0.0;
    let node = |t: f64, sum: &mut T, l1: &mut f64, evals: &mut usize| -> Result<()> {
        let s = FRAC_PI_2 * t.sinh();
        let cs = s.cosh();
        let w = hw * FRAC_PI_2 * t.cosh() / (cs * cs);
        if w == 0.0 {
            return Ok(());
        }
        // Distance to the nearer endpoint, computed without cancellation.
        let e = (-2.0 * s.abs()).exp();
        let d = hw * 2.0 * e / (1.0 + e);
        let x = if t < 0.0 { a + d } else if t > 0.0 { b - d } else { a + hw };
        if x <= a || x >= b {
            return Ok(());
        }
        let v = check(f(x), x)?;
        *evals += 1;
        *sum = *sum + v * w;
        *l1 += v.modulus() * w;
        Ok(())
    };

    node(0.0, &mut sum, &mut l1, &mut evals)?;
    let mut k = 1;
    while (k as f64) <= TANH_SINH_TMAX {
        node(k as f64, &mut sum, &mut l1, &mut evals)?;
        node(-(k as f64), &mut sum, &mut l1, &mut evals)?;
        k += 1;
    }
    let mut h = 1.0;
    let mut prev = sum * h;
    for _level in 1..=MAX_LEVEL {
        h *= 0.5;
        let mut t = h;
        while t <= TANH_SINH_TMAX {
            node(t, &mut sum, &mut l1, &mut evals)?;
            node(-t, &mut sum, &mut l1, &mut evals)?;
            t += 2.0 * h;
        }
        let cur = sum * h;
        let err = (cur - prev).modulus();
        let tol = (rel_tol * cur.modulus()).max(NOISE_FLOOR * l1 * h).max(abs_tol);
        if err <= tol {
            return Ok((cur, err, evals, l1 * h, true));
        }
        prev = cur;
    }
    let err = f64::max((sum * h - prev).modulus(), 0.0);
    Ok((sum * h, err, evals, l1 * h, false))
}

// Bisects until every panel meets max(rel_tol·|panel|, abs_density·width).
fn adaptive_finite<T: Scalar>(
    f: &dyn Fn(f64) -> T,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_density: f64,
    depth: usize,
    acc: &mut Acc<T>,
) -> Result<bool> {
    let (v, e, n, _l1, ok) = tanh_sinh_panel(f, a, b, rel_tol, abs_density * (b - a))?;
    if ok || depth >= MAX_DEPTH || acc.evals + n > MAX_EVALS {
        acc.value = acc.value + v;
        acc.error += e;
        acc.evals += n;
        return Ok(ok);
    }
    acc.evals += n;
    let m = 0.5 * (a + b);
    let left = adaptive_finite(f, a, m, rel_tol, abs_density, depth + 1, acc)?;
    let right = adaptive_finite(f, m, b, rel_tol, abs_density, depth + 1, acc)?;
    Ok(left && right)
}

/// Integral of `f` over the finite interval [a, b].
pub fn integrate_finite<T: Scalar>(
    f: impl Fn(f64) -> T,
    a: f64,
    b: f64,
    rel_tol: f64,
) -> Result<QuadratureResult<T>> {
    if !(a.is_finite() && b.is_finite()) || b < a {
        return Err(Error::InvalidParameter(format!("bad interval [{a}, {b}]")));
    }
    if a == b {
        return Ok(QuadratureResult { value: T::zero(), error_estimate: 0.0, evaluations: 1 });
    }
    // A first pass fixes the absolute scale shared by all sub-panels.
    let (v, e, n, l1, ok) = tanh_sinh_panel(&f, a, b, rel_tol, 0.0)?;
    if ok {
        return Ok(QuadratureResult { value: v, error_estimate: e, evaluations: n.max(1) });
    }
    let scale = v.modulus().max(NOISE_FLOOR * l1);
    let mut acc = Acc { value: T::zero(), error: 0.0, evals: n };
    let ok = adaptive_finite(&f, a, b, rel_tol, rel_tol * scale / (b - a), 0, &mut acc)?;
    finish(acc, ok)
}

fn finish<T: Scalar>(acc: Acc<T>, ok: bool) -> Result<QuadratureResult<T>> {
    if !ok {
        return Err(Error::NonConvergence {
            estimate: acc.value.to_complex(),
            error_estimate: acc.error,
            evaluations: acc.evals,
        });
    }
    Ok(QuadratureResult { value: acc.value, error_estimate: acc.error, evaluations: acc.evals.max(1) })
}

// exp-sinh on [a, ∞): x = a + exp(π/2 sinh t).
fn exp_sinh<T: Scalar>(f: &dyn Fn(f64) -> T, a: f64, rel_tol: f64) -> Result<(T, f64, usize, bool)> {
    let mut evals = 0usize;
    let mut sum = T::zero();
    let mut l1 = 0.0;
    let node = |t: f64, sum: &mut T, l1: &mut f64, evals: &mut usize| -> Result<()> {
        let s = FRAC_PI_2 * t.sinh();
        let d = s.exp();
        let w = FRAC_PI_2 * t.cosh() * d;
        let x = a + d;
        if x <= a || !x.is_finite() {
            return Ok(());
        }
        let v = f(x);
        if !v.is_finite_value() {
            // Overflow far out in the tail is treated as a negligible node.
            if t > 3.0 {
                return Ok(());
            }
            return Err(Error::Domain(format!("integrand is not finite at t = {x}")));
        }
        *evals += 1;
        *sum = *sum + v * w;
        *l1 += v.modulus() * w;
        Ok(())
    };
    let mut k = EXP_SINH_TMIN.ceil() as i64;
    while (k as f64) <= EXP_SINH_TMAX {
        node(k as f64, &mut sum, &mut l1, &mut evals)?;
        k += 1;
    }
    let mut h = 1.0;
    let mut prev = sum * h;
    for _level in 1..=MAX_LEVEL {
        h *= 0.5;
        // Odd multiples of h inside [TMIN, TMAX].
        let mut j = (EXP_SINH_TMIN / h).ceil() as i64;
        if j % 2 == 0 {
            j += 1;
        }
        while (j as f64) * h <= EXP_SINH_TMAX {
            node(j as f64 * h, &mut sum, &mut l1, &mut evals)?;
            j += 2;
        }
        let cur = sum * h;
        let err = (cur - prev).modulus();
        let tol = (rel_tol * cur.modulus()).max(NOISE_FLOOR * l1 * h);
        if err <= tol {
            return Ok((cur, err, evals, true));
        }
        prev = cur;
    }
    let cur = sum * h;
    Ok((cur, (cur - prev).modulus(), evals, false))
}

/// Integral of `f` over [a, ∞). Falls back to finite panels of doubling
/// length when the exp-sinh rule does not settle (oscillatory tails).
pub fn integrate_tail<T: Scalar>(
    f: impl Fn(f64) -> T,
    a: f64,
    rel_tol: f64,
) -> Result<QuadratureResult<T>> {
    let (v, e, n, ok) = exp_sinh(&f, a, rel_tol)?;
    if ok {
        return Ok(QuadratureResult { value: v, error_estimate: e, evaluations: n });
    }
    let mut acc = Acc { value: T::zero(), error: 0.0, evals: n };
    let mut lo = a;
    let mut len = a.abs().max(1.0);
    let mut all_ok = true;
    for _ in 0..40 {
        let hi = lo + len;
        let before = acc.value;
        let abs_density = rel_tol * acc.value.modulus().max(v.modulus()) / len;
        all_ok &= adaptive_finite(&f, lo, hi, rel_tol, abs_density, 0, &mut acc)?;
        if acc.evals > MAX_EVALS {
            return finish(acc, false);
        }
        let (tv, te, tn, tok) = exp_sinh(&f, hi, rel_tol)?;
        if tok {
            acc.value = acc.value + tv;
            acc.error += te;
            acc.evals += tn;
            return finish(acc, all_ok);
        }
        acc.evals += tn;
        let piece = (acc.value - before).modulus();
        if piece <= f64::EPSILON * acc.value.modulus() && tv.modulus() <= f64::EPSILON * acc.value.modulus() {
            return finish(acc, all_ok);
        }
        lo = hi;
        len *= 2.0;
    }
    finish(acc, false)
}

/// Integral over (0, ∞) split at `split`: tanh-sinh panels on [0, split]
/// using the series near zero, exp-sinh on [split, ∞).
pub fn integrate_semiline<F, T>(
    integrand: &SemilineIntegrand<F, T>,
    split: f64,
    rel_tol: f64,
) -> Result<QuadratureResult<T>>
where
    F: Fn(f64) -> T,
    T: Scalar,
{
    if !(split > 0.0) {
        return Err(Error::InvalidParameter(format!("split must be positive, got {split}")));
    }
    let g = |t: f64| integrand.eval(t);
    let head = integrate_finite(g, 0.0, split, rel_tol)?;
    let tail = integrate_tail(g, split, rel_tol)?;
    Ok(QuadratureResult {
        value: head.value + tail.value,
        error_estimate: head.error_estimate + tail.error_estimate,
        evaluations: head.evaluations + tail.evaluations,
    })
}

/// Gauss–Legendre nodes and weights on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn endpoint_singularity() {
        let r = integrate_finite(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, 1e-12).unwrap();
        assert!((r.value - 2.0).abs() < 1e-10);
    }

    #[test]
    fn oscillatory_tail() {
        // ∫_0^∞ e^{−t} cos(20t) dt = 1/401
        let r = integrate_tail(|t: f64| (-t).exp() * (20.0 * t).cos(), 0.0, 1e-10).unwrap();
        assert!((r.value - 1.0 / 401.0).abs() < 1e-12, "{}", r.value);
    }

    #[test]
    fn complex_values() {
        let w = Complex64::new(1.0, 2.0);
        let r = integrate_tail(|t: f64| (-w * t).exp(), 0.0, 1e-12).unwrap();
        assert!((r.value - 1.0 / w).norm() < 1e-12);
    }

    #[test]
    fn gauss_legendre_exactness() {
        let (x, w) = gauss_legendre(16);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(30)).sum();
        assert!((s - 2.0 / 31.0).abs() < 1e-14);
    }

    #[test]
    fn nan_is_reported() {
        let r = integrate_finite(|_x: f64| f64::NAN, 0.0, 1.0, 1e-10);
        assert!(matches!(r, Err(Error::Domain(_))));
    }
}
