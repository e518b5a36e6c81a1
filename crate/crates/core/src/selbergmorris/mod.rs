//! Selberg and Morris integral probability distributions.
//!
//! Both laws live on (0, ∞) with Mellin transforms built from Γ_2(·|1, τ).
//! Most evaluations go through the reduced transform
//! R(q) = 𝔐(q)·(Γ(1 − 1/τ)/2π)^q, which stays finite as τ ↓ 1 and is
//! defined for every τ > 0.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::barnesbeta::{BarnesBeta, BarnesBetaSampler, BarnesBetaSpec};
use crate::error::{Error, Result};
use crate::multigamma::{MultiGamma, MultiGammaParams};
use crate::special::{ln_gamma, ln_gamma_real};

mod qmc;

pub use qmc::{morris_integral_qmc, selberg_integral_qmc, ComplexQmcEstimate, QmcEstimate, QmcMode};

const BRIDGE_TOL: f64 = 1e-9;
const CHUNK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IntegralKind {
    Selberg,
    Morris,
}

/// (τ, λ_1, λ_2) with τ > 1 and λ_i ≥ 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelbergParams {
    tau: f64,
    lambda1: f64,
    lambda2: f64,
}

impl SelbergParams {
    pub fn new(tau: f64, lambda1: f64, lambda2: f64) -> Result<Self> {
        if !(tau > 1.0 && tau.is_finite()) {
            return Err(Error::InvalidParameter(format!("τ must exceed 1, got {tau}")));
        }
        check_lambdas(lambda1, lambda2)?;
        Ok(Self { tau, lambda1, lambda2 })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn lambda1(&self) -> f64 {
        self.lambda1
    }

    pub fn lambda2(&self) -> f64 {
        self.lambda2
    }
}

fn check_lambdas(l1: f64, l2: f64) -> Result<()> {
    if !(l1 >= 0.0 && l2 >= 0.0 && l1.is_finite() && l2.is_finite()) {
        return Err(Error::InvalidParameter(format!("λ must be finite and ≥ 0, got ({l1}, {l2})")));
    }
    Ok(())
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn check_strip(q: Complex64, tau: f64) -> Result<()> {
    if !(q.re < tau) || !q.im.is_finite() {
        return Err(Error::Domain(format!("Mellin transform needs Re(q) < τ = {tau}, got {q}")));
    }
    Ok(())
}

/// log R(q|τ,λ) for the chosen kind; any τ > 0, Re q < τ.
pub fn log_reduced_mellin(kind: IntegralKind, tau: f64, l1: f64, l2: f64, q: Complex64) -> Result<Complex64> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::InvalidParameter(format!("τ must be positive, got {tau}")));
    }
    check_lambdas(l1, l2)?;
    check_strip(q, tau)?;
    let g = MultiGamma::new(&MultiGammaParams::new(vec![1.0, tau])?);
    let lg = |w: Complex64| g.log_gamma_any(w);
    let head = q * tau.ln() / tau;
    let body = match kind {
        IntegralKind::Selberg => {
            let s = tau * (2.0 + l1 + l2);
            lg(1.0 - q + tau * (1.0 + l1))? - lg(c(1.0 + tau * (1.0 + l1)))?
                + lg(1.0 - q + tau * (1.0 + l2))?
                - lg(c(1.0 + tau * (1.0 + l2)))?
                + lg(tau - q)?
                - lg(c(tau))?
                + lg(2.0 - q + s)?
                - lg(2.0 - 2.0 * q + s)?
        }
        IntegralKind::Morris => {
            let s = tau * (l1 + l2 + 1.0) + 1.0;
            lg(s - q)? - lg(c(s))? + lg(tau - q)? - lg(c(tau))? + lg(c(tau * (1.0 + l1) + 1.0))?
                - lg(tau * (1.0 + l1) + 1.0 - q)?
                + lg(c(tau * (1.0 + l2) + 1.0))?
                - lg(tau * (1.0 + l2) + 1.0 - q)?
        }
    };
    Ok(head + body)
}

// q·log(2π/Γ(1 − 1/τ)); Γ(1 − 1/τ) > 0 for τ > 1.
fn prefactor(tau: f64, q: Complex64) -> Complex64 {
    q * (2.0 * PI).ln() - q * ln_gamma_real(1.0 - 1.0 / tau)
}

/// log 𝔐(q|τ,λ_1,λ_2) of the Selberg law, Re q < τ.
pub fn log_selberg_mellin(p: &SelbergParams, q: Complex64) -> Result<Complex64> {
    Ok(prefactor(p.tau, q) + log_reduced_mellin(IntegralKind::Selberg, p.tau, p.lambda1, p.lambda2, q)?)
}

pub fn selberg_mellin(p: &SelbergParams, q: Complex64) -> Result<Complex64> {
    Ok(log_selberg_mellin(p, q)?.exp())
}

/// log 𝔐(q|τ,λ_1,λ_2) of the Morris law, Re q < τ.
pub fn log_morris_mellin(p: &SelbergParams, q: Complex64) -> Result<Complex64> {
    Ok(prefactor(p.tau, q) + log_reduced_mellin(IntegralKind::Morris, p.tau, p.lambda1, p.lambda2, q)?)
}

pub fn morris_mellin(p: &SelbergParams, q: Complex64) -> Result<Complex64> {
    Ok(log_morris_mellin(p, q)?.exp())
}

pub fn log_mellin(kind: IntegralKind, p: &SelbergParams, q: Complex64) -> Result<Complex64> {
    match kind {
        IntegralKind::Selberg => log_selberg_mellin(p, q),
        IntegralKind::Morris => log_morris_mellin(p, q),
    }
}

fn integer_moment_guard(l: u32, tau: f64) -> Result<()> {
    if !((l as f64) < tau) {
        return Err(Error::Domain(format!("moment of order {l} needs l < τ = {tau}")));
    }
    Ok(())
}

fn bridge(product: f64, mellin: Complex64, what: &str) -> Result<f64> {
    let rel = (mellin - product).norm() / product.abs();
    if rel > BRIDGE_TOL {
        return Err(Error::Mismatch(format!(
            "{what}: product {product} vs Mellin transform {mellin} (relative gap {rel:e})"
        )));
    }
    Ok(product)
}

/// The Selberg integral over [0,1]^l as a finite gamma product.
pub fn selberg_product(p: &SelbergParams, l: u32) -> f64 {
    let (t, l1, l2) = (p.tau, p.lambda1, p.lambda2);
    let lf = l as f64;
    let mut acc = 0.0;
    for k in 0..l {
        let k = k as f64;
        acc += ln_gamma_real(1.0 - (k + 1.0) / t) - ln_gamma_real(1.0 - 1.0 / t)
            + ln_gamma_real(1.0 + l1 - k / t)
            + ln_gamma_real(1.0 + l2 - k / t)
            - ln_gamma_real(2.0 + l1 + l2 - (lf + k - 1.0) / t);
    }
    acc.exp()
}

/// E[M^l] by the finite product; checked against the Mellin transform.
pub fn selberg_moment_formula(p: &SelbergParams, l: u32) -> Result<f64> {
    integer_moment_guard(l, p.tau)?;
    bridge(selberg_product(p, l), selberg_mellin(p, c(l as f64))?, "Selberg moment")
}

/// The Morris integral over [−π,π]^n as a finite gamma product.
pub fn morris_product(p: &SelbergParams, n: u32) -> f64 {
    let (t, l1, l2) = (p.tau, p.lambda1, p.lambda2);
    let mut acc = n as f64 * (2.0 * PI).ln();
    for j in 0..n {
        let j = j as f64;
        acc += ln_gamma_real(1.0 + l1 + l2 - j / t) + ln_gamma_real(1.0 - (j + 1.0) / t)
            - ln_gamma_real(1.0 + l1 - j / t)
            - ln_gamma_real(1.0 + l2 - j / t)
            - ln_gamma_real(1.0 - 1.0 / t);
    }
    acc.exp()
}

/// E[M^n] of the Morris law by the finite product; checked against the Mellin transform.
pub fn morris_moment_formula(p: &SelbergParams, n: u32) -> Result<f64> {
    integer_moment_guard(n, p.tau)?;
    bridge(morris_product(p, n), morris_mellin(p, c(n as f64))?, "Morris moment")
}

/// E[M^{−n}] of the Morris law; checked against the Mellin transform.
pub fn morris_negative_moment(p: &SelbergParams, n: u32) -> Result<f64> {
    let (t, l1, l2) = (p.tau, p.lambda1, p.lambda2);
    let mut acc = -(n as f64) * (2.0 * PI).ln();
    for j in 0..n {
        let j = j as f64;
        acc += ln_gamma_real(1.0 + l1 + (j + 1.0) / t) + ln_gamma_real(1.0 + l2 + (j + 1.0) / t)
            + ln_gamma_real(1.0 - 1.0 / t)
            - ln_gamma_real(1.0 + l1 + l2 + (j + 1.0) / t)
            - ln_gamma_real(1.0 + j / t);
    }
    bridge(acc.exp(), morris_mellin(p, c(-(n as f64)))?, "Morris negative moment")
}

/// A product of independent factors: constant · L · Π β^{−1}_{2,2} · Π β^{−1}_{1,0} · (Y′).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionComponents {
    pub constant: f64,
    /// Variance of log L.
    pub lognormal_sigma2: f64,
    pub inverse_bb_factors: Vec<BarnesBetaSpec>,
    /// (a, b_0) of each β^{−1}_{1,0}(a, b_0).
    pub frechet_factors: Vec<(f64, f64)>,
    /// An extra independent factor with Mellin transform Γ(1 − q).
    pub extra_gamma_factor: bool,
}

impl DistributionComponents {
    fn frechet_specs(&self) -> Result<Vec<BarnesBetaSpec>> {
        self.frechet_factors
            .iter()
            .map(|&(a, b0)| BarnesBetaSpec::new(vec![a], vec![b0]))
            .collect()
    }

    /// Number of nontrivial random factors.
    pub fn factor_count(&self) -> usize {
        usize::from(self.lognormal_sigma2 > 0.0)
            + self.inverse_bb_factors.len()
            + self.frechet_factors.len()
            + usize::from(self.extra_gamma_factor)
    }

    /// log E[X^q] as the sum of factor-wise log Mellin transforms.
    pub fn log_mellin(&self, q: Complex64) -> Result<Complex64> {
        let mut acc = q * self.constant.ln() + 0.5 * self.lognormal_sigma2 * q * q;
        for s in self.inverse_bb_factors.iter().chain(&self.frechet_specs()?) {
            acc += BarnesBeta::new(s)?.log_eta(-q)?;
        }
        if self.extra_gamma_factor {
            acc += ln_gamma(1.0 - q)?;
        }
        Ok(acc)
    }

    /// n draws of log X. Each factor uses its own stream.
    pub fn sample_log(&self, n: usize, seed: u64) -> Result<Vec<f64>> {
        let mut out = vec![self.constant.ln(); n];
        if self.lognormal_sigma2 > 0.0 {
            let normal = Normal::new(0.0, self.lognormal_sigma2.sqrt())
                .map_err(|e| Error::InvalidParameter(e.to_string()))?;
            let z = stream_draws(n, seed, 1, |rng| normal.sample(rng));
            add(&mut out, &z, 1.0);
        }
        let mut stream = 16;
        for s in self.inverse_bb_factors.iter().chain(&self.frechet_specs()?) {
            let x = BarnesBetaSampler::new(s)?.sample_log_stream(n, seed, stream);
            add(&mut out, &x, -1.0);
            stream += 1;
        }
        if self.extra_gamma_factor {
            let e = stream_draws(n, seed, 2, |rng| {
                let e: f64 = rand_distr::Exp1.sample(rng);
                e.max(f64::MIN_POSITIVE)
            });
            let ln: Vec<f64> = e.iter().map(|v| v.ln()).collect();
            add(&mut out, &ln, -1.0);
        }
        Ok(out)
    }

    pub fn sample(&self, n: usize, seed: u64) -> Result<Vec<f64>> {
        Ok(self.sample_log(n, seed)?.into_iter().map(f64::exp).collect())
    }
}

fn add(out: &mut [f64], x: &[f64], sign: f64) {
    for (o, v) in out.iter_mut().zip(x) {
        *o += sign * v;
    }
}

fn stream_draws<F>(n: usize, seed: u64, stream: u32, f: F) -> Vec<f64>
where
    F: Fn(&mut ChaCha20Rng) -> f64 + Sync,
{
    let chunks = n.div_ceil(CHUNK);
    let parts: Vec<Vec<f64>> = (0..chunks)
        .into_par_iter()
        .map(|ci| {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            rng.set_stream((u64::from(stream) << 32) | ci as u64);
            (0..CHUNK.min(n - ci * CHUNK)).map(|_| f(&mut rng)).collect()
        })
        .collect();
    parts.concat()
}

// Three β^{−1}_{2,2} factors of the Selberg law with a = (1, τ). X_1 is
// written with b_1 = b_2 = τ|λ_2 − λ_1|/2 so it stays valid for λ_1 > λ_2,
// and is dropped when λ_1 = λ_2.
fn selberg_x_factors(tau: f64, l1: f64, l2: f64) -> Result<Vec<BarnesBetaSpec>> {
    let a = vec![1.0, tau];
    let mut out = Vec::with_capacity(3);
    let d = tau * (l2 - l1).abs() / 2.0;
    if d > 0.0 {
        out.push(BarnesBetaSpec::new(a.clone(), vec![1.0 + tau + tau * l1.min(l2), d, d])?);
    }
    out.push(BarnesBetaSpec::new(a.clone(), vec![1.0 + tau + tau * (l1 + l2) / 2.0, 0.5, tau / 2.0])?);
    let h = (1.0 + tau + tau * l1 + tau * l2) / 2.0;
    out.push(BarnesBetaSpec::new(a, vec![1.0 + tau, h, h])?);
    Ok(out)
}

fn selberg_components_at(tau: f64, l1: f64, l2: f64, reduced: bool) -> Result<DistributionComponents> {
    let log2 = 2f64.ln();
    let mut log_const = -(3.0 * (1.0 + tau) + 2.0 * tau * (l1 + l2)) / tau * log2 + tau.ln() / tau;
    if !reduced {
        log_const += (2.0 * PI).ln() - ln_gamma_real(1.0 - 1.0 / tau);
    }
    Ok(DistributionComponents {
        constant: log_const.exp(),
        lognormal_sigma2: 4.0 * log2 / tau,
        inverse_bb_factors: selberg_x_factors(tau, l1, l2)?,
        frechet_factors: vec![(tau, tau)],
        extra_gamma_factor: false,
    })
}

fn morris_components_at(tau: f64, l1: f64, l2: f64, reduced: bool) -> Result<DistributionComponents> {
    let mut log_const = tau.ln() / tau;
    if !reduced {
        log_const += (2.0 * PI).ln() - ln_gamma_real(1.0 - 1.0 / tau);
    }
    Ok(DistributionComponents {
        constant: log_const.exp(),
        lognormal_sigma2: 0.0,
        inverse_bb_factors: vec![BarnesBetaSpec::new(
            vec![1.0, tau],
            vec![tau, 1.0 + tau * l1, 1.0 + tau * l2],
        )?],
        frechet_factors: vec![(tau, tau * (l1 + l2 + 1.0) + 1.0)],
        extra_gamma_factor: false,
    })
}

/// Factors of the Selberg law. The constant carries the τ^{1/τ} that turns
/// β^{−1}_{1,0}(τ, τ) into Y.
pub fn selberg_components(p: &SelbergParams) -> Result<DistributionComponents> {
    selberg_components_at(p.tau, p.lambda1, p.lambda2, false)
}

/// Factors of the Morris law.
pub fn morris_components(p: &SelbergParams) -> Result<DistributionComponents> {
    morris_components_at(p.tau, p.lambda1, p.lambda2, false)
}

pub fn sample_selberg(p: &SelbergParams, n: usize, seed: u64) -> Result<Vec<f64>> {
    selberg_components(p)?.sample(n, seed)
}

pub fn sample_morris(p: &SelbergParams, n: usize, seed: u64) -> Result<Vec<f64>> {
    morris_components(p)?.sample(n, seed)
}

/// F(q|β,λ_1,λ_2) = 𝔐(q/β | 1/β², βλ_1, βλ_2)(2π)^{−q/β} Γ^{q/β}(1 − β²) Γ(1 − q/β).
pub fn duality_f(kind: IntegralKind, q: Complex64, beta: f64, l1: f64, l2: f64) -> Result<Complex64> {
    Ok(log_duality_f(kind, q, beta, l1, l2)?.exp())
}

pub fn log_duality_f(kind: IntegralKind, q: Complex64, beta: f64, l1: f64, l2: f64) -> Result<Complex64> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::InvalidParameter(format!("β must be positive, got {beta}")));
    }
    let qb = q / beta;
    if !(qb.re < 1.0) {
        return Err(Error::Domain(format!("F needs Re(q)/β < 1, got q = {q}, β = {beta}")));
    }
    let tau = 1.0 / (beta * beta);
    Ok(log_reduced_mellin(kind, tau, beta * l1, beta * l2, qb)? + ln_gamma(1.0 - qb)?)
}

/// |F(q|β) − F(q|1/β)|.
pub fn duality_residual(kind: IntegralKind, q: Complex64, beta: f64, l1: f64, l2: f64) -> Result<f64> {
    if beta == 1.0 {
        duality_f(kind, q, beta, l1, l2)?;
        return Ok(0.0);
    }
    Ok((duality_f(kind, q, beta, l1, l2)? - duality_f(kind, q, 1.0 / beta, l1, l2)?).norm())
}

/// Residual of the involution τ → 1/τ, q → q/τ, λ → τλ written with 𝔐.
pub fn involution_residual(kind: IntegralKind, p: &SelbergParams, q: Complex64) -> Result<f64> {
    let tau = p.tau;
    let qt = q / tau;
    if !(q.re < 1.0) {
        return Err(Error::Domain(format!("involution needs Re(q) < 1, got {q}")));
    }
    // 𝔐(q|τ)(2π)^{−q}Γ^q(1 − 1/τ) is the reduced transform.
    let rhs = log_mellin(kind, p, q)? - q * (2.0 * PI).ln() + q * ln_gamma_real(1.0 - 1.0 / tau) + ln_gamma(1.0 - q)?;
    let lhs = log_reduced_mellin(kind, 1.0 / tau, tau * p.lambda1, tau * p.lambda2, qt)? + ln_gamma(1.0 - qt)?;
    Ok((lhs.exp() - rhs.exp()).norm())
}

/// The τ ↓ 1 limit of (Γ(1 − 1/τ)/2π)·M.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalLaw {
    pub kind: IntegralKind,
    pub lambda1: f64,
    pub lambda2: f64,
    pub components: DistributionComponents,
}

pub fn critical_law(kind: IntegralKind, lambda1: f64, lambda2: f64) -> Result<CriticalLaw> {
    check_lambdas(lambda1, lambda2)?;
    let components = match kind {
        IntegralKind::Selberg => selberg_components_at(1.0, lambda1, lambda2, true)?,
        IntegralKind::Morris => {
            if lambda1 != lambda2 {
                return Err(Error::InvalidParameter(
                    "critical Morris law needs λ_1 = λ_2".into(),
                ));
            }
            morris_components_at(1.0, lambda1, lambda2, true)?
        }
    };
    Ok(CriticalLaw { kind, lambda1, lambda2, components })
}

impl CriticalLaw {
    /// Closed-form log Mellin transform, Re q < 1.
    pub fn log_mellin(&self, q: Complex64) -> Result<Complex64> {
        log_reduced_mellin(self.kind, 1.0, self.lambda1, self.lambda2, q)
    }

    /// Factors of the conjectured fluctuation of the recentered maximum:
    /// the critical law times an independent Y′ with Mellin Γ(1 − q).
    pub fn fluctuation_components(&self) -> DistributionComponents {
        DistributionComponents { extra_gamma_factor: true, ..self.components.clone() }
    }

    /// n draws of the conjectured fluctuation log M_crit + log Y′.
    pub fn sample_fluctuation(&self, n: usize, seed: u64) -> Result<Vec<f64>> {
        self.fluctuation_components().sample_log(n, seed)
    }
}
