//! Barnes beta distributions β_{M,N}(a, b) for M ≤ N + 1.
//!
//! The Mellin transform is η_{M,N}(q|a,b) = exp((𝒮_N log Γ_M)(q) − (𝒮_N log Γ_M)(0)),
//! where 𝒮_N is the alternating sum over shifts q + b_0 + b_{k_1} + … + b_{k_p}.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multigamma::{log_multiple_sine, MultiGamma, MultiGammaParams};
use crate::numerics::quadrature::integrate_semiline;
use crate::numerics::series::{exp_series, one_minus_exp_over_t, series_product, t_over_one_minus_exp};
use crate::numerics::{SemilineIntegrand, SeriesCoeffs};
use crate::special::expm1_complex;

mod sampler;

pub use sampler::{log_cumulants, sample, sample_log, sample_ratio, BarnesBetaSampler, SamplerPath};

/// Largest N accepted by the 2^N alternating sum.
pub const MAX_N: usize = 20;
const LK_REL_TOL: f64 = 1e-11;
const SERIES_ORDER: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Regime {
    /// M < N: support (0, 1] with an atom at 1.
    Sub,
    /// M = N: support (0, 1), absolutely continuous.
    Critical,
    /// M = N + 1: support (0, ∞).
    Super,
}

/// Parameters (M, N, a, b) of β_{M,N}(a, b); `b` holds b_0..b_N.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BarnesBetaSpec {
    a: Vec<f64>,
    b: Vec<f64>,
}

impl BarnesBetaSpec {
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if b.is_empty() {
            return Err(Error::InvalidParameter("b must contain at least b_0".into()));
        }
        let (m, n) = (a.len(), b.len() - 1);
        if m > n + 1 {
            return Err(Error::InvalidParameter(format!("need M ≤ N + 1, got M = {m}, N = {n}")));
        }
        if n > MAX_N {
            return Err(Error::InvalidParameter(format!("N = {n} exceeds the cap {MAX_N}")));
        }
        if let Some(x) = a.iter().chain(&b).find(|x| !(x.is_finite() && **x > 0.0)) {
            return Err(Error::InvalidParameter(format!("parameters must be positive and finite, got {x}")));
        }
        MultiGammaParams::new(a.clone())?;
        Ok(Self { a, b })
    }

    pub fn m(&self) -> usize {
        self.a.len()
    }

    pub fn n(&self) -> usize {
        self.b.len() - 1
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn b0(&self) -> f64 {
        self.b[0]
    }

    pub fn regime(&self) -> Regime {
        match self.m().cmp(&self.n()) {
            std::cmp::Ordering::Less => Regime::Sub,
            std::cmp::Ordering::Equal => Regime::Critical,
            std::cmp::Ordering::Greater => Regime::Super,
        }
    }

    /// Π_{j≥1} b_j / Π a_i.
    pub fn drift_constant(&self) -> f64 {
        self.b[1..].iter().product::<f64>() / self.a.iter().product::<f64>()
    }

    pub fn with_b0(&self, b0: f64) -> Result<Self> {
        let mut b = self.b.clone();
        b[0] = b0;
        Self::new(self.a.clone(), b)
    }

    pub fn scaled(&self, kappa: f64) -> Result<Self> {
        Self::new(
            self.a.iter().map(|x| x * kappa).collect(),
            self.b.iter().map(|x| x * kappa).collect(),
        )
    }

    pub fn multigamma_params(&self) -> MultiGammaParams {
        MultiGammaParams::new(self.a.clone()).expect("validated at construction")
    }
}

/// (𝒮_N h)(q|b) = Σ_p (−1)^p Σ_{k_1<…<k_p} h(q + b_0 + b_{k_1} + … + b_{k_p}).
pub fn s_operator<H>(h: H, q: Complex64, b: &[f64]) -> Result<Complex64>
where
    H: Fn(Complex64) -> Result<Complex64>,
{
    if b.is_empty() {
        return Err(Error::InvalidParameter("b must contain at least b_0".into()));
    }
    let n = b.len() - 1;
    if n > MAX_N {
        return Err(Error::InvalidParameter(format!("N = {n} exceeds the cap {MAX_N}")));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for mask in 0u32..(1u32 << n) {
        let mut shift = b[0];
        for (j, bj) in b[1..].iter().enumerate() {
            if mask & (1 << j) != 0 {
                shift += bj;
            }
        }
        let v = h(q + shift)?;
        if mask.count_ones() % 2 == 0 {
            acc += v;
        } else {
            acc -= v;
        }
    }
    Ok(acc)
}

/// Reusable evaluator of log η_{M,N}(q|a,b).
#[derive(Debug, Clone)]
pub struct BarnesBeta {
    spec: BarnesBetaSpec,
    gamma: MultiGamma,
    at_zero: Complex64,
}

impl BarnesBeta {
    pub fn new(spec: &BarnesBetaSpec) -> Result<Self> {
        let gamma = MultiGamma::new(&spec.multigamma_params());
        let at_zero = s_operator(|x| gamma.log_gamma_any(x), Complex64::new(0.0, 0.0), &spec.b)?;
        Ok(Self { spec: spec.clone(), gamma, at_zero })
    }

    pub fn spec(&self) -> &BarnesBetaSpec {
        &self.spec
    }

    /// (𝒮_N log Γ_M)(0|a,b).
    pub fn s_log_gamma_at_zero(&self) -> Complex64 {
        self.at_zero
    }

    pub fn log_eta(&self, q: Complex64) -> Result<Complex64> {
        let b0 = self.spec.b0();
        if !(q.re.is_finite() && q.im.is_finite()) {
            return Err(Error::Domain(format!("non-finite q = {q}")));
        }
        if q.im == 0.0 && q.re <= -b0 {
            return Err(Error::Pole {
                location: q,
                detail: format!(
                    "q lies on the forbidden ray (−∞, −b_0] with b_0 = {b0}; nearest pole of Γ_M(q + b_0) at q = −(b_0 + Ω) with Ω = {}",
                    nearest_lattice(&self.spec.a, -q.re - b0)
                ),
            });
        }
        if q == Complex64::new(0.0, 0.0) {
            return Ok(q);
        }
        let v = s_operator(|x| self.gamma.log_gamma_any(x), q, &self.spec.b)?;
        Ok(v - self.at_zero)
    }

    pub fn eta(&self, q: Complex64) -> Result<Complex64> {
        Ok(self.log_eta(q)?.exp())
    }
}

// Nearest Ω = Σ n_i a_i to x ≥ 0 over a bounded search.
fn nearest_lattice(a: &[f64], x: f64) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    let mut best = 0.0f64;
    let mut stack = vec![(0usize, 0.0f64)];
    let mut visited = 0usize;
    while let Some((i, s)) = stack.pop() {
        visited += 1;
        if visited > 100_000 {
            break;
        }
        if i == a.len() {
            if (s - x).abs() < (best - x).abs() {
                best = s;
            }
            continue;
        }
        let mut v = s;
        while v <= x + a[i] {
            stack.push((i + 1, v));
            v += a[i];
        }
    }
    best
}

/// log η_{M,N}(q|a,b).
pub fn log_eta(spec: &BarnesBetaSpec, q: Complex64) -> Result<Complex64> {
    BarnesBeta::new(spec)?.log_eta(q)
}

// Series of e^{−b_0 t}Π_j (1 − e^{−b_j t})/t · Π_i t/(1 − e^{−a_i t}).
fn levy_core_series(spec: &BarnesBetaSpec, k: usize) -> Result<SeriesCoeffs<f64>> {
    let mut factors = vec![exp_series(-spec.b0(), k)];
    factors.extend(spec.b[1..].iter().map(|&bj| one_minus_exp_over_t(bj, k)));
    factors.extend(spec.a.iter().map(|&ai| t_over_one_minus_exp(ai, k)));
    series_product(&factors, k)
}

// e^{−b_0 t}Π_j (1 − e^{−b_j t})/Π_i (1 − e^{−a_i t}).
fn levy_ratio(spec: &BarnesBetaSpec, t: f64) -> f64 {
    (-spec.b0() * t).exp() * levy_products(spec, t)
}

fn levy_products(spec: &BarnesBetaSpec, t: f64) -> f64 {
    let mut v = 1.0;
    for &bj in &spec.b[1..] {
        v *= -(-bj * t).exp_m1();
    }
    for &ai in &spec.a {
        v /= -(-ai * t).exp_m1();
    }
    v
}

/// The Lévy–Khinchine exponent of log β evaluated by quadrature. For
/// M = N + 1 the compensated form with the q·e^{−t}·Πb/Πa term is used.
pub fn log_eta_lk(spec: &BarnesBetaSpec, q: Complex64) -> Result<Complex64> {
    let b0 = spec.b0();
    if !(q.re > -b0) {
        return Err(Error::Domain(format!("Lévy–Khinchine form needs Re(q) > −b_0 = {}", -b0)));
    }
    if q == Complex64::new(0.0, 0.0) {
        return Ok(q);
    }
    let (m, n) = (spec.m(), spec.n());
    let k = SERIES_ORDER;
    let core = levy_core_series(spec, k + 2)?;
    let core_c: Vec<Complex64> = core.coefficients().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    // (e^{−qt} − 1)/t
    let eq = exp_series(-q, k + 3);
    let qser = SeriesCoeffs::new(eq.coefficients()[1..].to_vec(), f64::INFINITY)?;
    let prod = series_product(&[qser, SeriesCoeffs::new(core_c, core.radius_hint())?], k + 2)?;
    let c = spec.drift_constant();
    let series = if m <= n {
        prod.shift_up(n - m).truncate(k)
    } else {
        let comp = exp_series(Complex64::new(-1.0, 0.0), k + 2).scale(q * c);
        prod.add(&comp).shift_down().truncate(k)
    };
    let super_regime = m > n;
    let s = spec.clone();
    let f = move |t: f64| -> Complex64 {
        let main = if t < 1.0 {
            expm1_complex(-q * t) * levy_ratio(&s, t) / t
        } else {
            // e^{−qt} and e^{−b_0 t} combined so neither overflows alone.
            let r = levy_products(&s, t);
            ((-(q + s.b0()) * t).exp() - (-s.b0() * t).exp()) * r / t
        };
        if super_regime {
            main + q * c * (-t).exp() / t
        } else {
            main
        }
    };
    let integrand = SemilineIntegrand::with_series(f, series);
    Ok(integrate_semiline(&integrand, 1.0, LK_REL_TOL)?.value)
}

/// Both evaluations of the atom P[β = 1] for M < N.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomMass {
    pub via_integral: f64,
    pub via_gamma: f64,
}

pub fn atom_mass_routes(spec: &BarnesBetaSpec) -> Result<AtomMass> {
    if spec.regime() != Regime::Sub {
        return Err(Error::Contract(format!("atom mass needs M < N, got {:?}", spec.regime())));
    }
    let (m, n) = (spec.m(), spec.n());
    let k = SERIES_ORDER;
    let series = levy_core_series(spec, k)?.shift_up(n - m - 1);
    let s = spec.clone();
    let integrand = SemilineIntegrand::with_series(move |t: f64| levy_ratio(&s, t) / t, series);
    let exponent = integrate_semiline(&integrand, 1.0, LK_REL_TOL)?.value;
    let g = BarnesBeta::new(spec)?.s_log_gamma_at_zero();
    Ok(AtomMass { via_integral: (-exponent).exp(), via_gamma: (-g.re).exp() })
}

/// P[β = 1] for M < N. Both routes must agree within 1e−8.
pub fn atom_mass(spec: &BarnesBetaSpec) -> Result<f64> {
    let r = atom_mass_routes(spec)?;
    if (r.via_integral - r.via_gamma).abs() > 1e-8 {
        return Err(Error::Mismatch(format!(
            "atom mass routes disagree: integral {} vs gamma {}",
            r.via_integral, r.via_gamma
        )));
    }
    Ok(r.via_integral)
}

/// E[β^k] for integer k through the shifted 𝒮_N log Γ_{M−1} sums; needs
/// a_i = 1 for some i. Negative k requires |k| < b_0.
pub fn moment(spec: &BarnesBetaSpec, k: i64) -> Result<f64> {
    if k == 0 {
        return Ok(1.0);
    }
    let i = spec
        .a
        .iter()
        .position(|&x| (x - 1.0).abs() < 1e-12)
        .ok_or_else(|| Error::Contract("integer moments need a_i = 1 for some i".into()))?;
    if k < 0 && ((-k) as f64) >= spec.b0() {
        return Err(Error::Domain(format!("negative moment of order {k} needs |k| < b_0 = {}", spec.b0())));
    }
    let sub = MultiGamma::new(&spec.multigamma_params().without(i));
    let h = |x: Complex64| sub.log_gamma_any(x);
    let mut acc = 0.0;
    if k > 0 {
        for l in 0..k {
            acc -= s_operator(h, Complex64::new(l as f64, 0.0), &spec.b)?.re;
        }
    } else {
        for l in 0..(-k) {
            acc += s_operator(h, Complex64::new(-(l as f64) - 1.0, 0.0), &spec.b)?.re;
        }
    }
    Ok(acc.exp())
}

/// Π b_j ≤ 2 Π a_i, the moment-determinacy condition for M = N + 1.
pub fn stieltjes_determinate(spec: &BarnesBetaSpec) -> Result<bool> {
    if spec.regime() != Regime::Super {
        return Err(Error::Contract("determinacy criterion applies to M = N + 1".into()));
    }
    let pb: f64 = spec.b[1..].iter().product();
    let pa: f64 = spec.a.iter().product();
    Ok(pb <= 2.0 * pa)
}

/// Ratio β_{M,M−1}(a,b)·β_{M,M−1}(a,b̄)^{−1} with b̄ = (b̄_0, b_1, …).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioSpec {
    base: BarnesBetaSpec,
    bbar0: f64,
}

impl RatioSpec {
    pub fn new(base: BarnesBetaSpec, bbar0: f64) -> Result<Self> {
        if base.regime() != Regime::Super {
            return Err(Error::InvalidParameter("ratio needs a base with M = N + 1".into()));
        }
        if !(bbar0 > 0.0 && bbar0.is_finite()) {
            return Err(Error::InvalidParameter(format!("b̄_0 must be positive, got {bbar0}")));
        }
        Ok(Self { base, bbar0 })
    }

    /// The choice b̄_0 = |a| − Σ_{j<M} b_j, under which the Mellin transform
    /// is a ratio of multiple sine functions.
    pub fn with_sine_choice(base: BarnesBetaSpec) -> Result<Self> {
        let bbar0 = base.a.iter().sum::<f64>() - base.b.iter().sum::<f64>();
        if !(bbar0 > 0.0) {
            return Err(Error::InvalidParameter(format!("|a| − Σ b_j = {bbar0} must be positive")));
        }
        Self::new(base, bbar0)
    }

    pub fn base(&self) -> &BarnesBetaSpec {
        &self.base
    }

    pub fn bbar0(&self) -> f64 {
        self.bbar0
    }

    pub fn bar(&self) -> BarnesBetaSpec {
        self.base.with_b0(self.bbar0).expect("validated")
    }

    pub fn is_sine_choice(&self) -> bool {
        let s = self.base.a.iter().sum::<f64>() - self.base.b.iter().sum::<f64>();
        (s - self.bbar0).abs() <= 1e-12 * s.abs().max(1.0)
    }

    /// log E[ratio^q] on the strip −b_0 < Re q < b̄_0.
    pub fn log_mellin(&self, q: Complex64) -> Result<Complex64> {
        self.check_strip(q)?;
        Ok(log_eta(&self.base, q)? + log_eta(&self.bar(), -q)?)
    }

    /// (𝒮 log S_M)(0) − (𝒮 log S_M)(q), valid for the sine choice of b̄_0.
    pub fn log_mellin_sine(&self, q: Complex64) -> Result<Complex64> {
        if !self.is_sine_choice() {
            return Err(Error::Contract("multiple sine form needs b̄_0 = |a| − Σ b_j".into()));
        }
        self.check_strip(q)?;
        let p = self.base.multigamma_params();
        let h = |x: Complex64| log_multiple_sine(&p, x);
        Ok(s_operator(h, Complex64::new(0.0, 0.0), &self.base.b)? - s_operator(h, q, &self.base.b)?)
    }

    fn check_strip(&self, q: Complex64) -> Result<()> {
        if !(q.re > -self.base.b0() && q.re < self.bbar0) {
            return Err(Error::Domain(format!(
                "ratio Mellin transform needs −b_0 < Re(q) < b̄_0, got {q}"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FactorizationMode {
    /// Product over k of η_{M−1,N} with b_0 shifted by k·a_1.
    Shintani,
    /// Product over the lattice Ω = Σ n_i a_i of rational factors.
    Barnes,
}

/// Partial product of the infinite factorization of η_{M,N}(q) for M ≤ N,
/// truncated at k < T (shintani) or Ω ≤ T·min(a) (barnes).
pub fn factorization_partial_product(
    spec: &BarnesBetaSpec,
    q: Complex64,
    mode: FactorizationMode,
    t: usize,
) -> Result<Complex64> {
    if t == 0 {
        return Err(Error::InvalidParameter("truncation must be at least 1".into()));
    }
    if spec.regime() == Regime::Super {
        return Err(Error::Contract("the factorization diverges for M = N + 1; use the ratio form".into()));
    }
    if q == Complex64::new(0.0, 0.0) {
        return Ok(Complex64::new(1.0, 0.0));
    }
    Ok(log_partial(spec, q, mode, t)?.exp())
}

/// Partial product of the factorization of the ratio Mellin transform.
pub fn ratio_factorization_partial_product(
    ratio: &RatioSpec,
    q: Complex64,
    mode: FactorizationMode,
    t: usize,
) -> Result<Complex64> {
    if t == 0 {
        return Err(Error::InvalidParameter("truncation must be at least 1".into()));
    }
    ratio.check_strip(q)?;
    if q == Complex64::new(0.0, 0.0) {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let a = log_partial(&ratio.base, q, mode, t)?;
    let b = log_partial(&ratio.bar(), -q, mode, t)?;
    Ok((a + b).exp())
}

fn log_partial(spec: &BarnesBetaSpec, q: Complex64, mode: FactorizationMode, t: usize) -> Result<Complex64> {
    if spec.m() == 0 {
        return log_eta(spec, q);
    }
    match mode {
        FactorizationMode::Shintani => {
            let step = spec.a[0];
            let sub = MultiGamma::new(&spec.multigamma_params().without(0));
            let h = |x: Complex64| sub.log_gamma_any(x);
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..t {
                let shift = Complex64::new(k as f64 * step, 0.0);
                acc += s_operator(h, q + shift, &spec.b)? - s_operator(h, shift, &spec.b)?;
            }
            Ok(acc)
        }
        FactorizationMode::Barnes => {
            let amin = spec.a.iter().cloned().fold(f64::INFINITY, f64::min);
            let bound = t as f64 * amin;
            let n = spec.n();
            // Subset sums of b_1..b_N with their parity.
            let subsets: Vec<(f64, bool)> = (0u32..(1u32 << n))
                .map(|mask| {
                    let s: f64 = (0..n).filter(|j| mask & (1 << j) != 0).map(|j| spec.b[j + 1]).sum();
                    (spec.b0() + s, mask.count_ones() % 2 == 0)
                })
                .collect();
            let mut acc = Complex64::new(0.0, 0.0);
            let mut err = None;
            for_each_lattice_point(&spec.a, bound, &mut |omega| {
                for &(x, even) in &subsets {
                    let base = x + omega;
                    let num = q + base;
                    if num.norm() == 0.0 {
                        err = Some(Error::Pole {
                            location: q,
                            detail: format!("factor vanishes at b_0 + Σb + Ω = {base}"),
                        });
                        return;
                    }
                    // Even subsets contribute base/(q + base), odd ones the inverse.
                    let l = (q / base).ln_1p();
                    if even {
                        acc -= l;
                    } else {
                        acc += l;
                    }
                }
            });
            if let Some(e) = err {
                return Err(e);
            }
            Ok(acc)
        }
    }
}

trait Ln1p {
    fn ln_1p(self) -> Self;
}

impl Ln1p for Complex64 {
    fn ln_1p(self) -> Self {
        if self.norm() < 1e-4 {
            // ln(1+z) = z − z²/2 + z³/3 − z⁴/4 + …
            let mut term = self;
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 1..12 {
                acc += term / k as f64 * if k % 2 == 1 { 1.0 } else { -1.0 };
                term *= self;
            }
            acc
        } else {
            (1.0 + self).ln()
        }
    }
}

fn for_each_lattice_point(a: &[f64], bound: f64, f: &mut dyn FnMut(f64)) {
    fn rec(a: &[f64], i: usize, s: f64, bound: f64, f: &mut dyn FnMut(f64)) {
        if i == a.len() {
            f(s);
            return;
        }
        let mut v = s;
        while v <= bound * (1.0 + 1e-12) {
            rec(a, i + 1, v, bound, f);
            v += a[i];
        }
    }
    rec(a, 0, 0.0, bound, f);
}
