//! CDF tabulation from a characteristic function by Gil-Pelaez inversion.
//!
//! F(x) = m/2 − (1/π) ∫_0^∞ Im[e^{−iux} ψ(u)]/u du, where ψ is the
//! characteristic function with any atom at zero removed and m its mass.
//! The integral is truncated at U once |ψ| falls below a threshold; if it
//! never does, a power-law model A·u^{−p}·e^{iμu} is fitted at U and its tail
//! is integrated along a rotated contour.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use super::quadrature::{gauss_legendre, integrate_tail};
use super::stats::pool_adjacent_violators;
use crate::error::{Error, Result};

const GL_POINTS: usize = 16;
const NODE_CHUNK: usize = 512;
const REANCHOR: usize = 128;

/// A CDF tabulated on a strictly increasing grid. `cdf` holds the
/// continuous part; the atom at zero (β = 1, i.e. log β = 0) is kept apart.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedCDF {
    grid: Vec<f64>,
    cdf: Vec<f64>,
    atom_at_zero: f64,
    max_repair: f64,
    // Full CDF with the jump at zero made explicit, used for quantiles.
    q_grid: Vec<f64>,
    q_cdf: Vec<f64>,
}

impl TabulatedCDF {
    pub fn new(grid: Vec<f64>, cdf: Vec<f64>, atom_at_zero: f64) -> Result<Self> {
        validate_grid(&grid)?;
        if cdf.len() != grid.len() {
            return Err(Error::InvalidParameter("grid and cdf lengths differ".into()));
        }
        if cdf.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::Contract("cdf must be nondecreasing".into()));
        }
        if !(0.0..=1.0).contains(&atom_at_zero) {
            return Err(Error::InvalidParameter(format!("atom mass {atom_at_zero} outside [0, 1]")));
        }
        if cdf[0] < 0.0 || cdf[cdf.len() - 1] + atom_at_zero > 1.0 + 1e-9 {
            return Err(Error::Contract("cdf values outside [0, 1 − atom]".into()));
        }
        let (q_grid, q_cdf) = full_table(&grid, &cdf, atom_at_zero);
        Ok(Self { grid, cdf, atom_at_zero, max_repair: 0.0, q_grid, q_cdf })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    /// Continuous part of the CDF at the grid points.
    pub fn cdf(&self) -> &[f64] {
        &self.cdf
    }

    pub fn atom_at_zero(&self) -> f64 {
        self.atom_at_zero
    }

    /// Largest adjustment made by the monotone repair.
    pub fn max_repair(&self) -> f64 {
        self.max_repair
    }

    /// Largest grid spacing.
    pub fn resolution(&self) -> f64 {
        self.grid.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
    }

    /// Full CDF at `x` by linear interpolation, atom included.
    pub fn eval(&self, x: f64) -> f64 {
        let g = &self.grid;
        let cont = if x <= g[0] {
            self.cdf[0]
        } else if x >= g[g.len() - 1] {
            self.cdf[g.len() - 1]
        } else {
            let j = g.partition_point(|&v| v <= x) - 1;
            let t = (x - g[j]) / (g[j + 1] - g[j]);
            self.cdf[j] + t * (self.cdf[j + 1] - self.cdf[j])
        };
        cont + if x >= 0.0 { self.atom_at_zero } else { 0.0 }
    }

    /// Generalized inverse by linear interpolation; clamps to the grid ends.
    pub fn quantile(&self, p: f64) -> f64 {
        let (g, c) = (&self.q_grid, &self.q_cdf);
        if p <= c[0] {
            return g[0];
        }
        if p >= c[c.len() - 1] {
            return g[g.len() - 1];
        }
        let j = c.partition_point(|&v| v < p);
        // c[j−1] < p ≤ c[j]
        let (c0, c1) = (c[j - 1], c[j]);
        if c1 <= c0 {
            return g[j];
        }
        g[j - 1] + (p - c0) / (c1 - c0) * (g[j] - g[j - 1])
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.quantile(rng.random::<f64>())
    }
}

fn full_table(grid: &[f64], cdf: &[f64], atom: f64) -> (Vec<f64>, Vec<f64>) {
    let mut g = Vec::with_capacity(grid.len() + 2);
    let mut c = Vec::with_capacity(grid.len() + 2);
    let mut inserted = atom == 0.0 || grid[0] > 0.0 || grid[grid.len() - 1] < 0.0;
    for (j, (&x, &f)) in grid.iter().zip(cdf).enumerate() {
        if !inserted && x >= 0.0 {
            // Continuous part at 0 by interpolation, then the jump.
            let f0 = if j == 0 || x == 0.0 {
                f
            } else {
                let t = -grid[j - 1] / (x - grid[j - 1]);
                cdf[j - 1] + t * (f - cdf[j - 1])
            };
            if x > 0.0 || j > 0 {
                g.push(0.0);
                c.push(f0);
            }
            g.push(0.0);
            c.push(f0 + atom);
            inserted = true;
            if x == 0.0 {
                continue;
            }
        }
        let shift = if atom > 0.0 && x >= 0.0 { atom } else { 0.0 };
        g.push(x);
        c.push(f + shift);
    }
    (g, c)
}

fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.len() < 2 {
        return Err(Error::InvalidParameter("grid needs at least two points".into()));
    }
    if grid.iter().any(|x| !x.is_finite()) || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("grid must be finite and strictly increasing".into()));
    }
    Ok(())
}

/// Tuning knobs for [`invert_cf_to_cdf_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InversionOptions {
    /// Gaussian window e^{−(damping·u)²/2}; smooths lattice laws.
    pub damping: f64,
    /// Mass of the atom at zero, removed from φ before inversion.
    pub atom_at_zero: f64,
    /// Largest truncation point tried before falling back to a tail model.
    pub u_max: f64,
    /// |ψ| level regarded as negligible.
    pub decay_threshold: f64,
    /// Largest allowed monotone repair.
    pub max_repair: f64,
    /// Phase center; defaults to the grid midpoint.
    pub center: Option<f64>,
}

impl Default for InversionOptions {
    fn default() -> Self {
        Self {
            damping: 0.0,
            atom_at_zero: 0.0,
            u_max: 2048.0,
            decay_threshold: 1e-13,
            max_repair: 1e-4,
            center: None,
        }
    }
}

/// Inverts a characteristic function to a tabulated CDF on `grid`.
pub fn invert_cf_to_cdf<F>(phi: F, grid: &[f64], damping: f64) -> Result<TabulatedCDF>
where
    F: Fn(f64) -> Complex64 + Sync,
{
    invert_cf_to_cdf_with(phi, grid, &InversionOptions { damping, ..Default::default() })
}

#[derive(Debug, Clone, Copy)]
struct PowerTail {
    u: f64,
    p: f64,
    mu: f64,
    amp: Complex64,
}

pub fn invert_cf_to_cdf_with<F>(phi: F, grid: &[f64], opts: &InversionOptions) -> Result<TabulatedCDF>
where
    F: Fn(f64) -> Complex64 + Sync,
{
    validate_grid(grid)?;
    if !(opts.damping >= 0.0) || !(0.0..1.0).contains(&opts.atom_at_zero) {
        return Err(Error::InvalidParameter("damping must be ≥ 0 and atom in [0, 1)".into()));
    }
    let p0 = phi(0.0);
    if (p0 - 1.0).norm() > 1e-8 {
        return Err(Error::Contract(format!("phi(0) = {p0}, expected 1")));
    }
    let atom = opts.atom_at_zero;
    let mass = 1.0 - atom;
    let lo = grid[0];
    let hi = grid[grid.len() - 1];
    let center = opts.center.unwrap_or(0.5 * (lo + hi));
    let window = |u: f64| (-0.5 * (opts.damping * u).powi(2)).exp();
    let phi0 = |u: f64| phi(u) - atom;
    let psi = |u: f64| {
        let (s, c) = (-u * center).sin_cos();
        Complex64::new(c, s) * phi0(u) * window(u)
    };

    // Truncation point by doubling.
    let mut u = 1.0;
    let mut tail = None;
    loop {
        let m = (0..8)
            .map(|j| psi(u * (1.0 + j as f64 / 8.0)).norm())
            .fold(0.0, f64::max);
        if !m.is_finite() {
            return Err(Error::Inversion(format!("phi is not finite near u = {u}")));
        }
        if m <= opts.decay_threshold {
            break;
        }
        if u >= opts.u_max {
            if opts.damping > 0.0 {
                return Err(Error::Inversion(format!(
                    "|psi| = {m:e} at u = {u} does not fall below {:e}",
                    opts.decay_threshold
                )));
            }
            tail = Some(fit_power_tail(&phi0, u)?);
            break;
        }
        u *= 2.0;
    }
    let big_u = u;

    // Panels of bounded phase span, 16-point Gauss–Legendre on each.
    let half_width = (hi - center).abs().max((center - lo).abs());
    let drift = tail.map(|t| (t.mu - center).abs()).unwrap_or(0.0);
    let width = (4.0 * PI / (half_width + drift + 1.0)).min(big_u / 8.0);
    let n_panels = (big_u / width).ceil() as usize;
    let width = big_u / n_panels as f64;
    let (gx, gw) = gauss_legendre(GL_POINTS);
    let nodes: Vec<(f64, Complex64)> = (0..n_panels)
        .into_par_iter()
        .flat_map_iter(|k| {
            let a = k as f64 * width;
            let psi = &psi;
            gx.iter().zip(&gw).map(move |(&x, &w)| {
                let uu = a + 0.5 * width * (x + 1.0);
                (uu, psi(uu) * (0.5 * width * w / uu))
            })
        })
        .collect();
    if let Some(bad) = nodes.iter().find(|(_, v)| !(v.re.is_finite() && v.im.is_finite())) {
        return Err(Error::Inversion(format!("phi is not finite at u = {}", bad.0)));
    }

    let sums = oscillatory_sums(&nodes, grid, center);

    let tails: Vec<f64> = match tail {
        Some(t) => grid
            .par_iter()
            .map(|&x| Ok((t.amp * power_tail_integral(t.u, t.p, x - t.mu)?).im))
            .collect::<Result<Vec<f64>>>()?,
        None => vec![0.0; grid.len()],
    };

    let raw: Vec<f64> = sums
        .iter()
        .zip(&tails)
        .map(|(s, t)| 0.5 * mass - (s + t) / PI)
        .collect();
    let clamped: Vec<f64> = raw.iter().map(|v| v.clamp(0.0, mass)).collect();
    let repaired = pool_adjacent_violators(&clamped);
    let max_repair = raw
        .iter()
        .zip(&repaired)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if max_repair > opts.max_repair {
        return Err(Error::Inversion(format!(
            "monotone repair of {max_repair:e} exceeds {:e} (truncation u = {big_u}, tail model {})",
            opts.max_repair,
            tail.is_some()
        )));
    }
    let mut out = TabulatedCDF::new(grid.to_vec(), repaired, atom)?;
    out.max_repair = max_repair;
    Ok(out)
}

// Σ_k Im[e^{−iu_k (x − c)} ω_k] for every grid point x.
fn oscillatory_sums(nodes: &[(f64, Complex64)], grid: &[f64], center: f64) -> Vec<f64> {
    let n = grid.len();
    let step = (grid[n - 1] - grid[0]) / (n - 1) as f64;
    let uniform = grid
        .windows(2)
        .all(|w| ((w[1] - w[0]) - step).abs() <= 1e-9 * step);
    if !uniform {
        return grid
            .par_iter()
            .map(|&x| {
                let xp = x - center;
                nodes
                    .iter()
                    .map(|&(u, w)| {
                        let (s, c) = (-u * xp).sin_cos();
                        (Complex64::new(c, s) * w).im
                    })
                    .sum()
            })
            .collect();
    }
    let x0 = grid[0] - center;
    let partials: Vec<Vec<f64>> = nodes
        .par_chunks(NODE_CHUNK)
        .map(|chunk| {
            let mut acc = vec![0.0; n];
            for &(u, w) in chunk {
                let (ss, cs) = (-u * step).sin_cos();
                let rot = Complex64::new(cs, ss);
                let mut r = Complex64::new(0.0, 0.0);
                for (j, a) in acc.iter_mut().enumerate() {
                    if j % REANCHOR == 0 {
                        let (s, c) = (-u * (x0 + j as f64 * step)).sin_cos();
                        r = Complex64::new(c, s) * w;
                    }
                    *a += r.im;
                    r *= rot;
                }
            }
            acc
        })
        .collect();
    let mut total = vec![0.0; n];
    for p in &partials {
        for (t, v) in total.iter_mut().zip(p) {
            *t += v;
        }
    }
    total
}

fn fit_power_tail(phi0: &dyn Fn(f64) -> Complex64, u: f64) -> Result<PowerTail> {
    let a = phi0(u);
    let b = phi0(0.5 * u);
    let p = -(a.norm() / b.norm()).ln() / 2f64.ln();
    if !(p > 0.05) || !p.is_finite() {
        return Err(Error::Inversion(format!(
            "no decay of |phi| by u = {u}: |phi(u)| = {:e}, |phi(u/2)| = {:e}",
            a.norm(),
            b.norm()
        )));
    }
    let d = 1e-3 * u;
    let mu = (phi0(u + d) / phi0(u - d)).arg() / (2.0 * d);
    let (s, c) = (-mu * u).sin_cos();
    let amp = a * u.powf(p) * Complex64::new(c, s);
    let t = PowerTail { u, p, mu, amp };
    // The model must predict a nearby value.
    let v = 0.8 * u;
    let (s, c) = (mu * v).sin_cos();
    let pred = amp * v.powf(-p) * Complex64::new(c, s);
    let actual = phi0(v);
    if (pred - actual).norm() > 0.02 * actual.norm() {
        return Err(Error::Inversion(format!(
            "power-law tail model fails at u = {v}: predicted {pred}, actual {actual}"
        )));
    }
    Ok(t)
}

/// ∫_U^∞ e^{−iuy} u^{−p−1} du for p > 0.
fn power_tail_integral(big_u: f64, p: f64, y: f64) -> Result<Complex64> {
    if y == 0.0 {
        return Ok(Complex64::new(big_u.powf(-p) / p, 0.0));
    }
    let sigma = y.signum();
    let ay = y.abs();
    // u = U − iσ s/|y| turns the oscillation into e^{−s}.
    let inner = integrate_tail(
        |s: f64| Complex64::new(big_u, -sigma * s / ay).powf(-p - 1.0) * (-s).exp(),
        0.0,
        1e-10,
    )?;
    let (sn, cs) = (-big_u * y).sin_cos();
    Ok(Complex64::new(cs, sn) * Complex64::new(0.0, -sigma / ay) * inner.value)
}
