//! Discrete log-correlated Gaussian fields on the unit interval and the
//! circle, their maxima, exponential functionals, and the comparison of the
//! recentered maximum with the critical Selberg/Morris fluctuation laws.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::quadrature::integrate_semiline;
use crate::numerics::stats::{centered_moments, ks_critical_95, ks_two_sample, mean, median, std_error};
use crate::numerics::SemilineIntegrand;
use crate::selbergmorris::{critical_law, selberg_product, IntegralKind, SelbergParams};
use crate::special::ln_gamma_real;

const BATCH: usize = 256;
const REPAIR_LIMIT: f64 = 1e-6;
/// Fewest runs for which a comparison verdict is reported.
pub const MIN_VERDICT_RUNS: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GffDomain {
    Interval,
    Circle,
}

/// Default κ on the circle. With ε = 2π/N the constant Fourier mode of the
/// discrete covariance equals 2(κ − log 2π), so κ must exceed log 2π.
pub const CIRCLE_KAPPA: f64 = 1.0 + 1.837_877_066_409_345_5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GffConfig {
    pub domain: GffDomain,
    pub n: usize,
    pub kappa: f64,
    /// (λ_1, λ_2) on the interval; (α, α) on the circle.
    pub potentials: (f64, f64),
    pub beta: f64,
    /// Rotation of the circle grid, in radians.
    pub offset: f64,
    pub seed: u64,
}

impl GffConfig {
    pub fn interval(n: usize, lambda1: f64, lambda2: f64, seed: u64) -> Self {
        Self { domain: GffDomain::Interval, n, kappa: 1.0, potentials: (lambda1, lambda2), beta: 0.5, offset: 0.0, seed }
    }

    pub fn circle(n: usize, alpha: f64, seed: u64) -> Self {
        Self { domain: GffDomain::Circle, n, kappa: CIRCLE_KAPPA, potentials: (alpha, alpha), beta: 0.5, offset: 0.0, seed }
    }

    pub fn with_n(&self, n: usize) -> Self {
        Self { n, ..self.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 8 {
            return Err(Error::InvalidParameter(format!("grid size {} below 8", self.n)));
        }
        if self.domain == GffDomain::Circle && self.n % 2 != 0 {
            return Err(Error::InvalidParameter("circle grid size must be even".into()));
        }
        if !(self.kappa >= 0.0) || !(self.potentials.0 >= 0.0 && self.potentials.1 >= 0.0) {
            return Err(Error::InvalidParameter("κ and potentials must be ≥ 0".into()));
        }
        if self.domain == GffDomain::Circle && self.potentials.0 != self.potentials.1 {
            return Err(Error::InvalidParameter("circle potential is a single α".into()));
        }
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return Err(Error::InvalidParameter(format!("β must be ≥ 0, got {}", self.beta)));
        }
        Ok(())
    }

    pub fn epsilon(&self) -> f64 {
        match self.domain {
            GffDomain::Interval => 1.0 / self.n as f64,
            GffDomain::Circle => 2.0 * PI / self.n as f64,
        }
    }

    /// x_i = i/N for i = 1..N, or ψ_j = jε for j = −N/2..N/2 − 1 (ψ = ±π coincide).
    pub fn points(&self) -> Vec<f64> {
        let eps = self.epsilon();
        match self.domain {
            GffDomain::Interval => (1..=self.n).map(|i| i as f64 * eps).collect(),
            GffDomain::Circle => {
                let h = (self.n / 2) as i64;
                (-h..h).map(|j| j as f64 * eps + self.offset).collect()
            }
        }
    }

    /// Deterministic potential at each point; −∞ where the logarithm diverges.
    pub fn potential(&self) -> Vec<f64> {
        let (l1, l2) = self.potentials;
        let log_term = |lam: f64, x: f64| if lam == 0.0 { 0.0 } else { lam * x.ln() };
        self.points()
            .iter()
            .map(|&x| match self.domain {
                GffDomain::Interval => log_term(l1, x) + log_term(l2, 1.0 - x),
                GffDomain::Circle => 2.0 * log_term(l1, (1.0 + num_complex::Complex64::from_polar(1.0, x)).norm()),
            })
            .collect()
    }

    /// Weights x^{βλ_1}(1 − x)^{βλ_2} or |1 + e^{iψ}|^{2αβ} of the exponential functional.
    pub fn z_weights(&self) -> Vec<f64> {
        if self.beta == 0.0 {
            return vec![1.0; self.n];
        }
        self.potential().iter().map(|p| (self.beta * p).exp()).collect()
    }
}

/// Covariance matrix with a sampling factor.
#[derive(Debug, Clone)]
pub struct Covariance {
    matrix: DMatrix<f64>,
    factor: DMatrix<f64>,
    min_eigenvalue: f64,
    repaired: f64,
}

impl Covariance {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// F with F Fᵀ equal to the repaired covariance.
    pub fn factor(&self) -> &DMatrix<f64> {
        &self.factor
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.min_eigenvalue
    }

    /// Total negative eigenvalue mass clipped to zero.
    pub fn repaired(&self) -> f64 {
        self.repaired
    }
}

fn covariance_entry(cfg: &GffConfig, u: f64, v: f64) -> f64 {
    if u == v {
        return 2.0 * (cfg.kappa - cfg.epsilon().ln());
    }
    match cfg.domain {
        GffDomain::Interval => -2.0 * (u - v).abs().ln(),
        GffDomain::Circle => -2.0 * (2.0 * ((u - v) / 2.0).sin().abs()).ln(),
    }
}

/// The covariance of the discrete field with its sampling factor.
pub fn covariance_matrix(cfg: &GffConfig) -> Result<Covariance> {
    cfg.validate()?;
    let pts = cfg.points();
    let n = pts.len();
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let v = covariance_entry(cfg, pts[i], pts[j]);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    let trace = m.trace();
    if let Some(l) = m.clone().cholesky() {
        let min = SymmetricEigen::new(m.clone()).eigenvalues.min();
        return Ok(Covariance { matrix: m, factor: l.l(), min_eigenvalue: min, repaired: 0.0 });
    }
    let eig = SymmetricEigen::new(m.clone());
    let min = eig.eigenvalues.min();
    let repaired: f64 = eig.eigenvalues.iter().filter(|&&x| x < 0.0).map(|x| -x).sum();
    if repaired > REPAIR_LIMIT * trace {
        return Err(Error::CovarianceRepair { repaired, trace });
    }
    let mut f = eig.eigenvectors.clone();
    for (k, mut col) in f.column_iter_mut().enumerate() {
        col *= eig.eigenvalues[k].max(0.0).sqrt();
    }
    Ok(Covariance { matrix: m, factor: f, min_eigenvalue: min, repaired })
}

/// Field realizations in batches; `visit` receives each batch (columns are fields).
fn for_each_batch<T, F>(cov: &Covariance, runs: usize, seed: u64, stream: u32, visit: F) -> Vec<T>
where
    F: Fn(&DMatrix<f64>) -> Vec<T> + Sync,
    T: Send,
{
    let n = cov.factor.nrows();
    let batches = runs.div_ceil(BATCH);
    let parts: Vec<Vec<T>> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            rng.set_stream((u64::from(stream) << 40) | b as u64);
            let cols = BATCH.min(runs - b * BATCH);
            let z = DMatrix::<f64>::from_fn(n, cols, |_, _| StandardNormal.sample(&mut rng));
            let v = &cov.factor * z;
            visit(&v)
        })
        .collect();
    parts.into_iter().flatten().collect()
}

/// n_runs raw field realizations, each of length N.
pub fn sample_fields(cfg: &GffConfig, n_runs: usize) -> Result<Vec<Vec<f64>>> {
    let cov = covariance_matrix(cfg)?;
    Ok(for_each_batch(&cov, n_runs, cfg.seed, 0, |v| {
        v.column_iter().map(|c| c.iter().copied().collect()).collect()
    }))
}

/// n_runs draws of V_N = max(V + potential).
pub fn sample_max_values(cfg: &GffConfig, n_runs: usize) -> Result<Vec<f64>> {
    let cov = covariance_matrix(cfg)?;
    let pot = cfg.potential();
    Ok(for_each_batch(&cov, n_runs, cfg.seed, 1, |v| {
        v.column_iter()
            .map(|c| c.iter().zip(&pot).map(|(x, p)| x + p).fold(f64::NEG_INFINITY, f64::max))
            .collect()
    }))
}

/// n_runs draws of the exponential functional Z(β).
pub fn exponential_functional(cfg: &GffConfig, n_runs: usize) -> Result<Vec<f64>> {
    let cov = covariance_matrix(cfg)?;
    let w = cfg.z_weights();
    let beta = cfg.beta;
    Ok(for_each_batch(&cov, n_runs, cfg.seed, 2, |v| {
        v.column_iter().map(|c| c.iter().zip(&w).map(|(x, wi)| wi * (beta * x).exp()).sum()).collect()
    }))
}

/// N^{1+β²}e^{β²κ} on the interval, (N/2π)^{1+β²}e^{β²κ} on the circle.
pub fn z_normalization(cfg: &GffConfig) -> f64 {
    let b2 = cfg.beta * cfg.beta;
    let n = match cfg.domain {
        GffDomain::Interval => cfg.n as f64,
        GffDomain::Circle => cfg.n as f64 / (2.0 * PI),
    };
    n.powf(1.0 + b2) * (b2 * cfg.kappa).exp()
}

/// Exact E[Z] from the covariance diagonal.
pub fn z_exact_mean(cfg: &GffConfig) -> Result<f64> {
    let cov = covariance_matrix(cfg)?;
    let b2 = cfg.beta * cfg.beta;
    Ok(cfg.z_weights().iter().enumerate().map(|(i, w)| w * (0.5 * b2 * cov.matrix[(i, i)]).exp()).sum())
}

/// Exact E[(Z/norm)²] from the covariance.
pub fn z_exact_second_moment(cfg: &GffConfig) -> Result<f64> {
    let cov = covariance_matrix(cfg)?;
    let b2 = cfg.beta * cfg.beta;
    let w = cfg.z_weights();
    let c = &cov.matrix;
    let n = w.len();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            acc += w[i] * w[j] * (b2 * (0.5 * c[(i, i)] + 0.5 * c[(j, j)] + c[(i, j)])).exp();
        }
    }
    let norm = z_normalization(cfg);
    Ok(acc / (norm * norm))
}

/// |∫ e^{yq} d/dy exp(−e^{−βy}X) dy − X^{q/β}Γ(1 − q/β)| for Re q < 0.
pub fn general_identity_check(beta: f64, q: f64, x: f64) -> Result<f64> {
    if !(q < 0.0) || !(beta > 0.0) || !(x > 0.0) {
        return Err(Error::Domain(format!("need q < 0, β > 0, X > 0; got q = {q}, β = {beta}, X = {x}")));
    }
    let y0 = x.ln() / beta;
    let log_f = |y: f64| (beta * x).ln() + (q - beta) * y - x * (-beta * y).exp();
    let right = SemilineIntegrand::new(|s: f64| log_f(y0 + s).exp());
    let left = SemilineIntegrand::new(|s: f64| log_f(y0 - s).exp());
    let v = integrate_semiline(&right, 1.0, 1e-13)?.value + integrate_semiline(&left, 1.0, 1e-13)?.value;
    let exact = ((q / beta) * x.ln() + ln_gamma_real(1.0 - q / beta)).exp();
    Ok((v - exact).abs())
}

/// c1·log N + c2·log log N + c0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriftFit {
    pub c1: f64,
    pub c2: f64,
    pub c0: f64,
}

/// Least squares fit of the mean maximum over a ladder of grid sizes.
pub fn fit_drift(ns: &[usize], means: &[f64]) -> Result<DriftFit> {
    if ns.len() < 4 || ns.len() != means.len() {
        return Err(Error::InvalidParameter("drift fit needs at least 4 ladder points".into()));
    }
    let x = DMatrix::from_fn(ns.len(), 3, |i, j| {
        let l = (ns[i] as f64).ln();
        match j {
            0 => l,
            1 => l.ln(),
            _ => 1.0,
        }
    });
    let y = nalgebra::DVector::from_column_slice(means);
    let sol = x
        .svd(true, true)
        .solve(&y, 1e-14)
        .map_err(|e| Error::Contract(format!("drift fit failed: {e}")))?;
    Ok(DriftFit { c1: sol[0], c2: sol[1], c0: sol[2] })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxRunResult {
    pub config: GffConfig,
    pub samples: Vec<f64>,
    pub centered_samples: Vec<f64>,
    pub mean: f64,
    pub stderr: f64,
}

pub fn sample_max(cfg: &GffConfig, n_runs: usize) -> Result<MaxRunResult> {
    let samples = sample_max_values(cfg, n_runs)?;
    let med = if samples.is_empty() { 0.0 } else { median(&samples) };
    Ok(MaxRunResult {
        config: cfg.clone(),
        centered_samples: samples.iter().map(|v| v - med).collect(),
        mean: mean(&samples),
        stderr: std_error(&samples),
        samples,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderPoint {
    pub n: usize,
    pub mean: f64,
    pub stderr: f64,
    pub ks_distance: f64,
    /// Gaps in mean, variance and third central moment.
    pub moment_gaps: [f64; 3],
    /// Raw maxima at this grid size.
    #[serde(skip)]
    pub samples: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjectureComparison {
    pub ladder: Vec<LadderPoint>,
    pub drift: DriftFit,
    pub runs: usize,
    pub conjecture_samples: usize,
    /// Slack allowed between successive Kolmogorov distances.
    pub ks_slack: f64,
    pub ks_non_increasing: bool,
    pub self_test_distance: f64,
    pub self_test_bound: f64,
}

fn moment_gaps(a: &[f64], b: &[f64]) -> [f64; 3] {
    let ma = centered_moments(a);
    let mb = centered_moments(b);
    [ma[0] - mb[0], ma[1] - mb[1], ma[2] - mb[2]]
}

/// Draws of the conjectured fluctuation law of V_N for this configuration.
pub fn conjecture_samples(cfg: &GffConfig, n: usize, seed: u64) -> Result<Vec<f64>> {
    let law = match cfg.domain {
        GffDomain::Interval => critical_law(IntegralKind::Selberg, cfg.potentials.0, cfg.potentials.1)?,
        GffDomain::Circle => critical_law(IntegralKind::Morris, cfg.potentials.0, cfg.potentials.1)?,
    };
    law.sample_fluctuation(n, seed)
}

fn centered(xs: &[f64]) -> Vec<f64> {
    let m = median(xs);
    xs.iter().map(|v| v - m).collect()
}

/// Maxima over a ladder of grid sizes compared with the conjectured law.
/// The trend verdict allows each distance to exceed the previous one by
/// the two-sample 95% critical value, the size of sampling noise alone.
pub fn compare_to_conjecture(cfg: &GffConfig, ladder: &[usize], n_runs: usize) -> Result<ConjectureComparison> {
    if n_runs < MIN_VERDICT_RUNS {
        return Err(Error::InvalidParameter(format!(
            "{n_runs} runs is below the {MIN_VERDICT_RUNS} needed for a verdict"
        )));
    }
    let conj = centered(&conjecture_samples(cfg, n_runs, cfg.seed ^ 0xc0ff_ee00)?);
    let conj2 = centered(&conjecture_samples(cfg, n_runs, cfg.seed ^ 0x0bad_cafe)?);
    let self_test_distance = ks_two_sample(&conj, &conj2);
    let self_test_bound = ks_critical_95(n_runs, n_runs);
    let mut points = Vec::with_capacity(ladder.len());
    for &n in ladder {
        let r = sample_max(&cfg.with_n(n), n_runs)?;
        points.push(LadderPoint {
            n,
            mean: r.mean,
            stderr: r.stderr,
            ks_distance: ks_two_sample(&r.centered_samples, &conj),
            moment_gaps: moment_gaps(&r.centered_samples, &conj),
            samples: r.samples,
        });
    }
    let ns: Vec<usize> = points.iter().map(|p| p.n).collect();
    let means: Vec<f64> = points.iter().map(|p| p.mean).collect();
    let drift = fit_drift(&ns, &means)?;
    let ks_slack = self_test_bound;
    let ks_non_increasing = points.windows(2).all(|w| w[1].ks_distance <= w[0].ks_distance + ks_slack);
    Ok(ConjectureComparison {
        ladder: points,
        drift,
        runs: n_runs,
        conjecture_samples: n_runs,
        ks_slack,
        ks_non_increasing,
        self_test_distance,
        self_test_bound,
    })
}

/// One row of the freezing table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FreezingRow {
    pub beta: f64,
    pub f_beta: f64,
    pub f_inverse: f64,
    /// |F(β) − F(1/β)| / max(1, |F(β)|).
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FreezingTable {
    pub kind: IntegralKind,
    pub q: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub rows: Vec<FreezingRow>,
    pub frozen_value: f64,
}

/// F(q|β) and F(q|1/β) along a grid of β ∈ (0, 1), with the value at β = 1.
pub fn freezing_demo(kind: IntegralKind, betas: &[f64], q: f64, lambda1: f64, lambda2: f64) -> Result<FreezingTable> {
    use crate::selbergmorris::duality_f;
    use num_complex::Complex64;
    let qc = Complex64::new(q, 0.0);
    let mut rows = Vec::with_capacity(betas.len());
    for &b in betas {
        if !(b > 0.0 && b < 1.0) {
            return Err(Error::InvalidParameter(format!("β = {b} outside (0, 1)")));
        }
        let f = duality_f(kind, qc, b, lambda1, lambda2)?.re;
        let g = duality_f(kind, qc, 1.0 / b, lambda1, lambda2)?.re;
        rows.push(FreezingRow { beta: b, f_beta: f, f_inverse: g, residual: (f - g).abs() / f.abs().max(1.0) });
    }
    let frozen_value = duality_f(kind, qc, 1.0, lambda1, lambda2)?.re;
    Ok(FreezingTable { kind, q, lambda1, lambda2, rows, frozen_value })
}

/// The l = 2 moment of the total mass predicted for the normalized Z.
pub fn z_second_moment_target(cfg: &GffConfig) -> Result<f64> {
    let b = cfg.beta;
    let p = SelbergParams::new(1.0 / (b * b), b * cfg.potentials.0, b * cfg.potentials.1)?;
    Ok(selberg_product(&p, 2))
}
