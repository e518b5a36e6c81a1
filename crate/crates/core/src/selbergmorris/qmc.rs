//! Quasi-Monte-Carlo estimates of the Selberg and Morris integrals.
//!
//! Points are ordered and written through stick-breaking fractions. Each
//! fraction next to a singular pair |s_i − s_j|^{−2/τ} goes through
//! w = u^c/(u^c + (1 − u)^c) with c = 1/(1 − 2/τ), which cancels the
//! singularity against the Jacobian. The standard error comes from
//! independently scrambled replicates.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::SelbergParams;
use crate::error::{Error, Result};
use crate::numerics::qmc::{ScrambledSobol, MAX_POINTS};

const MIN_REPLICATES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QmcMode {
    /// Singularity-cancelling power transform.
    Transformed,
    /// Plain coordinates on the cube.
    Plain,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QmcEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub replicates: usize,
    pub points_per_replicate: usize,
    pub seed: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexQmcEstimate {
    pub estimate: Complex64,
    pub stderr_re: f64,
    pub stderr_im: f64,
    pub replicates: usize,
    pub points_per_replicate: usize,
    pub seed: u32,
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn layout(samples: usize) -> Result<(usize, usize)> {
    if samples < MIN_REPLICATES {
        return Err(Error::InvalidParameter(format!("need at least {MIN_REPLICATES} samples")));
    }
    let reps = MIN_REPLICATES.max(samples.div_ceil(MAX_POINTS as usize));
    Ok((reps, samples / reps))
}

// Returns (w, 1 − w, dw/du).
fn stretch(u: f64, c: f64) -> (f64, f64, f64) {
    let a = u.powf(c);
    let b = (1.0 - u).powf(c);
    let s = a + b;
    (a / s, b / s, c * (u * (1.0 - u)).powf(c - 1.0) / (s * s))
}

fn replicate_means<F>(dims: usize, reps: usize, per: usize, seed: u32, f: F) -> Vec<Complex64>
where
    F: Fn(&[f64]) -> Complex64 + Sync,
{
    (0..reps)
        .into_par_iter()
        .map(|r| {
            let mut seq = ScrambledSobol::new(dims, seed.wrapping_add(r as u32).wrapping_mul(0x9e37_79b9));
            let mut u = vec![0.0; dims];
            let mut acc = Complex64::new(0.0, 0.0);
            for _ in 0..per {
                seq.next_point(&mut u).expect("point budget checked");
                acc += f(&u);
            }
            acc / per as f64
        })
        .collect()
}

fn summarize(means: &[Complex64]) -> (Complex64, f64, f64) {
    let r = means.len() as f64;
    let m = means.iter().sum::<Complex64>() / r;
    let vr = means.iter().map(|v| (v.re - m.re).powi(2)).sum::<f64>() / (r - 1.0);
    let vi = means.iter().map(|v| (v.im - m.im).powi(2)).sum::<f64>() / (r - 1.0);
    (m, (vr / r).sqrt(), (vi / r).sqrt())
}

/// ∫_{[0,1]^n} Π s_i^{λ_1}(1 − s_i)^{λ_2} Π_{i<j} |s_i − s_j|^{−2/τ} ds for n ≤ 4.
pub fn selberg_integral_qmc(n: usize, p: &SelbergParams, samples: usize, seed: u32, mode: QmcMode) -> Result<QmcEstimate> {
    if !(1..=4).contains(&n) {
        return Err(Error::InvalidParameter(format!("dimension {n} outside 1..=4")));
    }
    let tau = p.tau();
    if !(2.0 / tau < 1.0) {
        return Err(Error::Domain(format!("the integral diverges for τ = {tau} ≤ 2")));
    }
    let (l1, l2) = (p.lambda1(), p.lambda2());
    let (reps, per) = layout(samples)?;
    let cexp = 1.0 / (1.0 - 2.0 / tau);
    let f = |u: &[f64]| -> Complex64 {
        // Ordered points x, their gaps g (g[0] = x[0]) and 1 − x. Distances
        // are summed from gaps, since x_i − x_j loses tiny gaps.
        let mut x = [0.0; 4];
        let mut g = [0.0; 4];
        let mut right = [0.0; 4];
        let v = match mode {
            QmcMode::Plain => {
                let mut order = [0.0; 4];
                order[..n].copy_from_slice(&u[..n]);
                order[..n].sort_by(f64::total_cmp);
                for k in 0..n {
                    x[k] = order[k];
                    g[k] = if k == 0 { order[0] } else { order[k] - order[k - 1] };
                    right[k] = 1.0 - order[k];
                }
                factorial(n)
            }
            QmcMode::Transformed => {
                // Only gaps between neighbouring points are stretched.
                let mut rem = 1.0;
                let mut pos = 0.0;
                let mut jac = factorial(n);
                for k in 0..n {
                    let (w, w_c, dw) = if k == 0 { (u[0], 1.0 - u[0], 1.0) } else { stretch(u[k], cexp) };
                    g[k] = rem * w;
                    jac *= rem * dw;
                    pos += g[k];
                    rem *= w_c;
                    x[k] = pos;
                    right[k] = rem;
                }
                jac
            }
        };
        let mut val = v;
        for i in 0..n {
            val *= x[i].powf(l1) * right[i].powf(l2);
            let mut d = 0.0;
            for j in (0..i).rev() {
                d += g[j + 1];
                val *= d.powf(-2.0 / tau);
            }
        }
        Complex64::new(if val.is_finite() { val } else { 0.0 }, 0.0)
    };
    let means = replicate_means(n, reps, per, seed, f);
    let (m, se, _) = summarize(&means);
    Ok(QmcEstimate { estimate: m.re, stderr: se, replicates: reps, points_per_replicate: per, seed })
}

/// ∫_{[−π,π]^n} Π e^{iθ_l(λ_1−λ_2)/2}|1 + e^{iθ_l}|^{λ_1+λ_2} Π_{k<l}|e^{iθ_k} − e^{iθ_l}|^{−2/τ} dθ for n ≤ 3.
pub fn morris_integral_qmc(
    n: usize,
    p: &SelbergParams,
    samples: usize,
    seed: u32,
    mode: QmcMode,
) -> Result<ComplexQmcEstimate> {
    if !(1..=3).contains(&n) {
        return Err(Error::InvalidParameter(format!("dimension {n} outside 1..=3")));
    }
    let tau = p.tau();
    if !(2.0 / tau < 1.0) {
        return Err(Error::Domain(format!("the integral diverges for τ = {tau} ≤ 2")));
    }
    let (l1, l2) = (p.lambda1(), p.lambda2());
    let (reps, per) = layout(samples)?;
    let cexp = 1.0 / (1.0 - 2.0 / tau);
    let two_pi = 2.0 * PI;
    let wrap = |t: f64| (t + PI).rem_euclid(two_pi) - PI;
    let f = |u: &[f64]| -> Complex64 {
        // Angles in counterclockwise order from θ_1 and the arcs between
        // neighbours, arc[n] closing the circle. Chords come from the shorter
        // of the two summed arcs.
        let mut th = [0.0; 3];
        let mut arc = [0.0; 4];
        let jac = match mode {
            QmcMode::Plain => {
                let mut raw = [0.0; 3];
                for k in 0..n {
                    raw[k] = two_pi * u[k];
                }
                let mut rel = [0.0; 3];
                for k in 1..n {
                    rel[k] = (raw[k] - raw[0]).rem_euclid(two_pi);
                }
                rel[1..n].sort_by(f64::total_cmp);
                for k in 0..n {
                    th[k] = wrap(-PI + raw[0] + rel[k]);
                    arc[k] = if k == 0 { 0.0 } else { rel[k] - rel[k - 1] };
                }
                arc[n] = two_pi - rel[n - 1];
                two_pi.powi(n as i32)
            }
            QmcMode::Transformed => {
                th[0] = -PI + two_pi * u[0];
                let mut rem = two_pi;
                let mut jac = two_pi * factorial(n - 1);
                for k in 1..n {
                    let (w, w_c, dw) = stretch(u[k], cexp);
                    arc[k] = rem * w;
                    jac *= rem * dw;
                    rem *= w_c;
                    th[k] = wrap(th[k - 1] + arc[k]);
                }
                arc[n] = rem;
                jac
            }
        };
        let mut val = Complex64::new(jac, 0.0);
        for k in 0..n {
            let z = Complex64::from_polar(1.0, th[k]);
            val *= Complex64::from_polar((1.0 + z).norm().powf(l1 + l2), th[k] * (l1 - l2) / 2.0);
            for j in 0..k {
                let inner: f64 = arc[j + 1..=k].iter().sum();
                let outer: f64 = arc[1..=j].iter().chain(&arc[k + 1..=n]).sum();
                val *= (2.0 * (0.5 * inner.min(outer)).sin()).powf(-2.0 / tau);
            }
        }
        if val.re.is_finite() && val.im.is_finite() {
            val
        } else {
            Complex64::new(0.0, 0.0)
        }
    };
    let means = replicate_means(n, reps, per, seed, f);
    let (m, se_re, se_im) = summarize(&means);
    Ok(ComplexQmcEstimate { estimate: m, stderr_re: se_re, stderr_im: se_im, replicates: reps, points_per_replicate: per, seed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stretch_is_a_bijection() {
        let (w, wc, d) = stretch(0.5, 3.0);
        assert!((w - 0.5).abs() < 1e-15 && (wc - 0.5).abs() < 1e-15 && d > 0.0);
        let (w0, wc0, _) = stretch(1e-3, 3.0);
        assert!(w0 < 1e-8 && wc0 < 1.0);
        let (w1, wc1, _) = stretch(1.0 - 1e-3, 3.0);
        assert!(wc1 < 1e-8 && wc1 > 0.0 && w1 <= 1.0);
    }
}
