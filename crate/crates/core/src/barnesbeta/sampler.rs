//! Random variates of log β_{M,N}(a, b).

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Beta, Distribution, Gamma, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{atom_mass, BarnesBeta, BarnesBetaSpec, RatioSpec, Regime};
use crate::error::{Error, Result};
use crate::numerics::{invert_cf_to_cdf_with, InversionOptions, TabulatedCDF};

const CHUNK: usize = 4096;
const GRID_POINTS: usize = 4097;
const STEP: f64 = 1e-3;
// Below this C the characteristic function decays too slowly to invert.
const SPLIT_BELOW: f64 = 0.5;
const SPLIT_GRID: usize = 40_001;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplerPath {
    /// M = N = 0: U^{1/b_0}.
    UniformPower,
    /// M = 1, N = 0: (a·G)^{1/a} with G ~ Gamma(b_0/a).
    GammaPower,
    /// M = N = 1: Beta(b_0/a, b_1/a)^{1/a}.
    BetaPower,
    /// M < N: compound Poisson jumps drawn by rejection from a gamma mixture.
    CompoundPoisson,
    /// Quantile transform of a CDF tabulated by characteristic-function inversion.
    CfInversion,
    /// M = N with a weak t^{−1} singularity: Gamma(C, λ) plus compound
    /// Poisson jumps from the tabulated remainder of the Lévy density.
    GammaSplit,
}

#[derive(Debug, Clone)]
struct Component {
    shape: f64,
    weight: f64,
}

#[derive(Debug, Clone)]
struct Envelope {
    // Indices (into b_1..b_N) bounded by b_j t.
    linear: Vec<usize>,
    components: Vec<Component>,
    total: f64,
}

#[derive(Debug, Clone)]
enum Engine {
    UniformPower { b0: f64 },
    GammaPower { a: f64, gamma: Gamma<f64> },
    BetaPower { a: f64, beta: Beta<f64> },
    CompoundPoisson { poisson: Option<Poisson<f64>>, envelope: Envelope },
    Table(TabulatedCDF),
    GammaSplit { gamma: Gamma<f64>, poisson: Option<Poisson<f64>>, jumps: JumpTable },
}

// Piecewise linear CDF of the finite remainder measure.
#[derive(Debug, Clone)]
struct JumpTable {
    t: Vec<f64>,
    cdf: Vec<f64>,
}

impl JumpTable {
    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u = rng.random::<f64>() * self.cdf[self.cdf.len() - 1];
        let i = self.cdf.partition_point(|&c| c <= u).clamp(1, self.cdf.len() - 1);
        let (c0, c1) = (self.cdf[i - 1], self.cdf[i]);
        let w = if c1 > c0 { (u - c0) / (c1 - c0) } else { 0.5 };
        self.t[i - 1] + w * (self.t[i] - self.t[i - 1])
    }
}

/// A prepared sampler for log β. Construction may tabulate a CDF, so reuse
/// it when drawing repeatedly from the same law.
#[derive(Debug, Clone)]
pub struct BarnesBetaSampler {
    spec: BarnesBetaSpec,
    path: SamplerPath,
    engine: Engine,
}

impl BarnesBetaSampler {
    pub fn new(spec: &BarnesBetaSpec) -> Result<Self> {
        let (m, n) = (spec.m(), spec.n());
        let b0 = spec.b0();
        let (path, engine) = if m == 0 && n == 0 {
            (SamplerPath::UniformPower, Engine::UniformPower { b0 })
        } else if m == 1 && n == 0 {
            let a = spec.a()[0];
            let gamma = Gamma::new(b0 / a, 1.0).map_err(|e| Error::InvalidParameter(e.to_string()))?;
            (SamplerPath::GammaPower, Engine::GammaPower { a, gamma })
        } else if m == 1 && n == 1 {
            let a = spec.a()[0];
            let beta = Beta::new(b0 / a, spec.b()[1] / a).map_err(|e| Error::InvalidParameter(e.to_string()))?;
            (SamplerPath::BetaPower, Engine::BetaPower { a, beta })
        } else if spec.regime() == Regime::Sub {
            let lambda = -atom_mass(spec)?.ln();
            let poisson = if lambda > 0.0 {
                Some(Poisson::new(lambda).map_err(|e| Error::InvalidParameter(e.to_string()))?)
            } else {
                None
            };
            (SamplerPath::CompoundPoisson, Engine::CompoundPoisson { poisson, envelope: envelope(spec) })
        } else if spec.regime() == Regime::Critical && singularity_weight(spec) < SPLIT_BELOW {
            (SamplerPath::GammaSplit, gamma_split(spec)?)
        } else {
            (SamplerPath::CfInversion, Engine::Table(tabulate(spec)?))
        };
        Ok(Self { spec: spec.clone(), path, engine })
    }

    pub fn spec(&self) -> &BarnesBetaSpec {
        &self.spec
    }

    pub fn path(&self) -> SamplerPath {
        self.path
    }

    /// The tabulated CDF of log β when the inversion path is used.
    pub fn table(&self) -> Option<&TabulatedCDF> {
        match &self.engine {
            Engine::Table(t) => Some(t),
            _ => None,
        }
    }

    pub fn sample_log_one<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match &self.engine {
            Engine::UniformPower { b0 } => open_unit(rng).ln() / b0,
            Engine::GammaPower { a, gamma } => {
                let g: f64 = gamma.sample(rng);
                (a * g.max(f64::MIN_POSITIVE)).ln() / a
            }
            Engine::BetaPower { a, beta } => {
                let x: f64 = beta.sample(rng);
                x.max(f64::MIN_POSITIVE).ln() / a
            }
            Engine::CompoundPoisson { poisson, envelope } => {
                let k = match poisson {
                    Some(p) => p.sample(rng) as u64,
                    None => 0,
                };
                let mut s = 0.0;
                for _ in 0..k {
                    s += jump(&self.spec, envelope, rng);
                }
                -s
            }
            Engine::Table(t) => t.quantile(open_unit(rng)),
            Engine::GammaSplit { gamma, poisson, jumps } => {
                let mut s: f64 = gamma.sample(rng);
                let k = poisson.as_ref().map_or(0, |p| p.sample(rng) as u64);
                for _ in 0..k {
                    s += jumps.draw(rng);
                }
                -s
            }
        }
    }

    /// n draws of log β. Deterministic in (seed, stream) for any thread count.
    pub fn sample_log_stream(&self, n: usize, seed: u64, stream: u32) -> Vec<f64> {
        let chunks = n.div_ceil(CHUNK);
        let out: Vec<Vec<f64>> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut rng = ChaCha20Rng::seed_from_u64(seed);
                rng.set_stream((u64::from(stream) << 32) | c as u64);
                let len = CHUNK.min(n - c * CHUNK);
                (0..len).map(|_| self.sample_log_one(&mut rng)).collect()
            })
            .collect();
        out.concat()
    }

    pub fn sample_log(&self, n: usize, seed: u64) -> Vec<f64> {
        self.sample_log_stream(n, seed, 0)
    }

    pub fn sample(&self, n: usize, seed: u64) -> Vec<f64> {
        let crit = self.spec.regime() == Regime::Critical;
        self.sample_log(n, seed).into_iter().map(|x| to_beta(x, crit)).collect()
    }
}

fn to_beta(x: f64, critical: bool) -> f64 {
    let v = x.exp();
    if critical {
        // Support is the open interval (0, 1).
        v.min(1.0 - f64::EPSILON / 2.0).max(f64::MIN_POSITIVE)
    } else {
        v
    }
}

fn open_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let u: f64 = rng.random();
        if u > 0.0 {
            return u;
        }
    }
}

/// n draws of β_{M,N}(a, b).
pub fn sample(spec: &BarnesBetaSpec, n: usize, seed: u64) -> Result<Vec<f64>> {
    Ok(BarnesBetaSampler::new(spec)?.sample(n, seed))
}

/// n draws of log β_{M,N}(a, b).
pub fn sample_log(spec: &BarnesBetaSpec, n: usize, seed: u64) -> Result<Vec<f64>> {
    Ok(BarnesBetaSampler::new(spec)?.sample_log(n, seed))
}

/// n draws of β(a, b)/β(a, b̄) from independent streams.
pub fn sample_ratio(ratio: &RatioSpec, n: usize, seed: u64) -> Result<Vec<f64>> {
    let x = BarnesBetaSampler::new(ratio.base())?.sample_log_stream(n, seed, 1);
    let y = BarnesBetaSampler::new(&ratio.bar())?.sample_log_stream(n, seed, 2);
    Ok(x.iter().zip(&y).map(|(u, v)| (u - v).exp()).collect())
}

// Jump density ν(t) ≤ C t^{k−M−1} e^{−b_0 t} Π_i (1 + a_i t), using
// 1 − e^{−bt} ≤ bt on the k smallest b_j, ≤ 1 on the rest, and
// 1/(1 − e^{−x}) ≤ 1 + 1/x. The k with the smallest total mass is kept.
fn envelope(spec: &BarnesBetaSpec) -> Envelope {
    let (m, n) = (spec.m(), spec.n());
    let b0 = spec.b0();
    let bs = &spec.b()[1..];
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| bs[i].total_cmp(&bs[j]));
    let pa: f64 = spec.a().iter().product();
    let mut best: Option<Envelope> = None;
    for k in (m + 1)..=n {
        let linear: Vec<usize> = order[..k].to_vec();
        let coefficient = linear.iter().map(|&j| bs[j]).product::<f64>() / pa;
        let mut components = Vec::with_capacity(1 << m);
        let mut total = 0.0;
        for mask in 0u32..(1u32 << m) {
            let pa_s: f64 = (0..m).filter(|i| mask & (1 << i) != 0).map(|i| spec.a()[i]).product();
            let shape = (k - m) as f64 + mask.count_ones() as f64;
            let weight = coefficient
                * pa_s
                * (crate::special::ln_gamma_real(shape) - shape * b0.ln()).exp();
            total += weight;
            components.push(Component { shape, weight });
        }
        if best.as_ref().is_none_or(|e| total < e.total) {
            best = Some(Envelope { linear, components, total });
        }
    }
    best.expect("M < N")
}

fn jump<R: Rng + ?Sized>(spec: &BarnesBetaSpec, env: &Envelope, rng: &mut R) -> f64 {
    let b0 = spec.b0();
    let bs = &spec.b()[1..];
    loop {
        let mut pick = rng.random::<f64>() * env.total;
        let mut shape = env.components[env.components.len() - 1].shape;
        for c in &env.components {
            if pick < c.weight {
                shape = c.shape;
                break;
            }
            pick -= c.weight;
        }
        let t: f64 = Gamma::new(shape, 1.0 / b0).expect("positive shape").sample(rng);
        if !(t > 0.0) {
            continue;
        }
        let mut ratio = 1.0;
        for (j, &bj) in bs.iter().enumerate() {
            let g = -(-bj * t).exp_m1();
            ratio *= if env.linear.contains(&j) { g / (bj * t) } else { g };
        }
        for &ai in spec.a() {
            let x = ai * t;
            ratio *= x / (-(-x).exp_m1() * (1.0 + x));
        }
        if rng.random::<f64>() < ratio {
            return t;
        }
    }
}

// C = lim t·ν(t) as t → 0, for M = N.
fn singularity_weight(spec: &BarnesBetaSpec) -> f64 {
    spec.b()[1..].iter().product::<f64>() / spec.a().iter().product::<f64>()
}

fn levy_density(spec: &BarnesBetaSpec, t: f64) -> f64 {
    let mut v = (-spec.b0() * t).exp() / t;
    for &bj in &spec.b()[1..] {
        v *= -(-bj * t).exp_m1();
    }
    for &ai in spec.a() {
        v /= -(-ai * t).exp_m1();
    }
    v
}

// ν(t) = C e^{−λt}/t + ρ(t) with ρ ≥ 0 of finite mass. λ is the smallest
// rate keeping ρ nonnegative on a fine grid, padded slightly.
fn gamma_split(spec: &BarnesBetaSpec) -> Result<Engine> {
    let c = singularity_weight(spec);
    let b0 = spec.b0();
    let scale = spec.a().iter().chain(&spec.b()[1..]).fold(b0, |m, &x| m.max(x));
    let t_max = 60.0 / b0;
    let t_min = 1e-6 / scale;
    let mut lambda = b0;
    let steps = 4000;
    for i in 0..=steps {
        let t = t_min * (t_max / t_min).powf(i as f64 / steps as f64);
        let r = levy_density(spec, t) * t / c;
        lambda = lambda.max(-r.ln() / t);
    }
    lambda = lambda * (1.0 + 1e-6) + 1e-9 * scale;
    let gamma = Gamma::new(c, 1.0 / lambda).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    // ρ is bounded at 0; below t_floor the subtraction cancels, so hold it constant.
    let t_floor = 1e-4 / scale;
    let rho = |t: f64| {
        let t = t.max(t_floor);
        (levy_density(spec, t) - c * (-lambda * t).exp() / t).max(0.0)
    };
    let t: Vec<f64> = (0..SPLIT_GRID)
        .map(|i| t_max * (i as f64 / (SPLIT_GRID - 1) as f64).powi(2))
        .collect();
    let mut cdf = vec![0.0; SPLIT_GRID];
    let mut prev = rho(t[0]);
    for i in 1..SPLIT_GRID {
        let cur = rho(t[i]);
        cdf[i] = cdf[i - 1] + 0.5 * (prev + cur) * (t[i] - t[i - 1]);
        prev = cur;
    }
    let mass = cdf[SPLIT_GRID - 1];
    if !mass.is_finite() {
        return Err(Error::Contract("remainder Lévy mass is not finite".into()));
    }
    let poisson = if mass > 0.0 {
        Some(Poisson::new(mass).map_err(|e| Error::InvalidParameter(e.to_string()))?)
    } else {
        None
    };
    Ok(Engine::GammaSplit { gamma, poisson, jumps: JumpTable { t, cdf } })
}

/// First two cumulants of log β from a complex step of log η.
pub fn log_cumulants(spec: &BarnesBetaSpec) -> Result<(f64, f64)> {
    let e = BarnesBeta::new(spec)?;
    let f = e.log_eta(Complex64::new(0.0, STEP))?;
    Ok((f.im / STEP, -2.0 * f.re / (STEP * STEP)))
}

fn tabulate(spec: &BarnesBetaSpec) -> Result<TabulatedCDF> {
    let (mu, var) = log_cumulants(spec)?;
    let sd = var.max(0.0).sqrt();
    let lo = mu - 10.0 * sd - 30.0 / spec.b0();
    let hi = match spec.regime() {
        Regime::Critical => 0.0,
        _ => mu + 12.0 * sd + 1.0,
    };
    let h = (hi - lo) / (GRID_POINTS - 1) as f64;
    let grid: Vec<f64> = (0..GRID_POINTS).map(|i| lo + h * i as f64).collect();
    let e = BarnesBeta::new(spec)?;
    let phi = |u: f64| {
        e.log_eta(Complex64::new(0.0, u))
            .map(|v| v.exp())
            .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    };
    invert_cf_to_cdf_with(phi, &grid, &InversionOptions::default())
}
