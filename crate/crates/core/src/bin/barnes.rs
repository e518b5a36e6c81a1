use barnes_beta::barnesbeta::{
    atom_mass_routes, log_eta, log_eta_lk, moment, sample_log, sample_ratio, BarnesBetaSampler, BarnesBetaSpec,
    RatioSpec,
};
use barnes_beta::gffmax::{
    compare_to_conjecture, exponential_functional, freezing_demo, sample_max, z_exact_mean, z_normalization,
    GffConfig,
};
use barnes_beta::multigamma::{log_multi_gamma_asymptotic, log_multi_gamma_integral, MultiGamma, MultiGammaParams};
use barnes_beta::numerics::stats::{mean, std_error};
use barnes_beta::report::{
    complex_json, config_hash, default_out_dir, manifest_path, write_grouped_csv, write_report, write_samples_csv,
    Report, RunManifest, Thresholds, Verdict,
};
use barnes_beta::selbergmorris::{
    critical_law, duality_residual, involution_residual, morris_integral_qmc, morris_mellin, morris_product,
    selberg_integral_qmc, selberg_mellin, selberg_product, IntegralKind, QmcMode, SelbergParams,
};
use barnes_beta::special::ln_gamma_real;
use barnes_beta::{Complex64, Error, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "barnes", version, about = "Barnes beta distributions, Selberg and Morris laws, GFF maxima")]
struct Cli {
    /// Base seed for every random stream.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Write the JSON report here.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Print the JSON report to stdout.
    #[arg(long, global = true)]
    json: bool,
    /// JSON file overriding verdict tolerances.
    #[arg(long, global = true)]
    thresholds: Option<PathBuf>,
    /// Path of the sample dump.
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Cmd {
    /// log Γ_M(w | a).
    EvalGamma(EvalGamma),
    /// log η_{M,N}(q | a, b).
    EvalEta(EvalEta),
    /// P[β = 1] by both routes.
    Atom(SpecArgs),
    /// Integer moments against the Mellin transform.
    Moments(Moments),
    /// Sample β_{M,N}(a, b).
    Sample(Sample),
    /// Sample the ratio β_{M,M−1}(a, b, b̄).
    SampleRatio(SampleRatio),
    /// Mellin transform against the Lévy–Khinchine integral.
    VerifyLk(VerifyLk),
    /// Selberg moments: gamma product, Mellin transform and QMC.
    VerifySelberg(VerifyIntegral),
    /// Morris moments: gamma product, Mellin transform and QMC.
    VerifyMorris(VerifyIntegral),
    /// Involution and self-duality residuals.
    VerifyDuality(VerifyDuality),
    /// The critical (τ = 1) law.
    Critical(Critical),
    /// Simulate the discrete GFF maximum.
    GffSim(GffSim),
    /// Drift fit and trend comparison against the conjectured law.
    GffCompare(GffCompare),
    /// F(q|β) against F(q|1/β) across β.
    FreezingDemo(FreezingDemo),
}

impl Cmd {
    fn name(&self) -> &'static str {
        match self {
            Cmd::EvalGamma(_) => "eval-gamma",
            Cmd::EvalEta(_) => "eval-eta",
            Cmd::Atom(_) => "atom",
            Cmd::Moments(_) => "moments",
            Cmd::Sample(_) => "sample",
            Cmd::SampleRatio(_) => "sample-ratio",
            Cmd::VerifyLk(_) => "verify-lk",
            Cmd::VerifySelberg(_) => "verify-selberg",
            Cmd::VerifyMorris(_) => "verify-morris",
            Cmd::VerifyDuality(_) => "verify-duality",
            Cmd::Critical(_) => "critical",
            Cmd::GffSim(_) => "gff-sim",
            Cmd::GffCompare(_) => "gff-compare",
            Cmd::FreezingDemo(_) => "freezing-demo",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
struct List(Vec<f64>);

#[derive(Debug, Clone, Serialize)]
struct Ints(Vec<i64>);

#[derive(Debug, Clone, Serialize)]
struct Sizes(Vec<usize>);

#[derive(Debug, Clone, Copy, Serialize)]
struct Count(usize);

fn parse_list(s: &str) -> std::result::Result<List, String> {
    if s.trim().is_empty() {
        return Ok(List(Vec::new()));
    }
    s.split(',').map(|x| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}"))).collect::<std::result::Result<_, _>>().map(List)
}

fn parse_ints(s: &str) -> std::result::Result<Ints, String> {
    s.split(',').map(|x| x.trim().parse::<i64>().map_err(|e| format!("{x:?}: {e}"))).collect::<std::result::Result<_, _>>().map(Ints)
}

fn parse_sizes(s: &str) -> std::result::Result<Sizes, String> {
    s.split(',').map(|x| parse_count(x).map(|c| c.0)).collect::<std::result::Result<_, _>>().map(Sizes)
}

/// Accepts `2000000` or `2e6`.
fn parse_count(s: &str) -> std::result::Result<Count, String> {
    let v: f64 = s.trim().parse().map_err(|e| format!("{s:?}: {e}"))?;
    if !(v >= 0.0 && v.fract() == 0.0 && v < 1e15) {
        return Err(format!("{s:?} is not a count"));
    }
    Ok(Count(v as usize))
}

/// `re` or `re,im`.
fn parse_complex(s: &str) -> std::result::Result<Complex64, String> {
    let parts = parse_list(s)?.0;
    match parts[..] {
        [re] => Ok(Complex64::new(re, 0.0)),
        [re, im] => Ok(Complex64::new(re, im)),
        _ => Err(format!("{s:?} is not `re` or `re,im`")),
    }
}

#[derive(Args, Serialize)]
struct SpecArgs {
    /// Number of a parameters (checked).
    #[arg(long = "M")]
    m: Option<usize>,
    /// Number of b parameters minus one (checked).
    #[arg(long = "N")]
    n_order: Option<usize>,
    /// a_1,…,a_M.
    #[arg(long, value_parser = parse_list, default_value = "", allow_hyphen_values = true)]
    a: List,
    /// b_0,…,b_N.
    #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
    b: List,
}

impl SpecArgs {
    fn spec(&self) -> Result<BarnesBetaSpec> {
        if let Some(m) = self.m.filter(|&m| m != self.a.0.len()) {
            return Err(Error::InvalidParameter(format!("--M {m} but {} a values", self.a.0.len())));
        }
        if let Some(n) = self.n_order.filter(|&n| n + 1 != self.b.0.len()) {
            return Err(Error::InvalidParameter(format!("--N {n} but {} b values", self.b.0.len())));
        }
        BarnesBetaSpec::new(self.a.0.clone(), self.b.0.clone())
    }
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Route {
    /// Functional-equation shifts plus asymptotics, extended to Re w ≤ 0.
    Auto,
    /// Asymptotic expansion only.
    Asymptotic,
    /// The Malmstén-type integral, Re w > 0.
    Integral,
}

#[derive(Args, Serialize)]
struct EvalGamma {
    #[arg(long = "M")]
    m: Option<usize>,
    #[arg(long, value_parser = parse_list, default_value = "", allow_hyphen_values = true)]
    a: List,
    /// Argument as `re` or `re,im`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    w: Complex64,
    #[arg(long, value_enum, default_value_t = Route::Auto)]
    route: Route,
}

#[derive(Args, Serialize)]
struct EvalEta {
    #[command(flatten)]
    spec: SpecArgs,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    q: Complex64,
    /// Also evaluate the Lévy–Khinchine route.
    #[arg(long)]
    lk: bool,
}

#[derive(Args, Serialize)]
struct Moments {
    #[command(flatten)]
    spec: SpecArgs,
    /// Moment orders; negative orders need |k| < b_0.
    #[arg(long, value_parser = parse_ints, allow_hyphen_values = true)]
    k: Ints,
}

#[derive(Args, Serialize)]
struct Sample {
    #[command(flatten)]
    spec: SpecArgs,
    #[arg(long, value_parser = parse_count, default_value = "10000")]
    n: Count,
    /// Dump log β instead of β.
    #[arg(long)]
    log: bool,
    /// Check empirical E[β^q] at these real q.
    #[arg(long, value_parser = parse_list, default_value = "", allow_hyphen_values = true)]
    q: List,
}

#[derive(Args, Serialize)]
struct SampleRatio {
    #[command(flatten)]
    spec: SpecArgs,
    /// b̄_0; the sine choice b̄_0 = Σa − b_0 when omitted.
    #[arg(long, allow_hyphen_values = true)]
    bbar0: Option<f64>,
    #[arg(long, value_parser = parse_count, default_value = "10000")]
    n: Count,
    #[arg(long, value_parser = parse_list, default_value = "", allow_hyphen_values = true)]
    q: List,
}

#[derive(Args, Serialize)]
struct VerifyLk {
    #[command(flatten)]
    spec: SpecArgs,
    /// Evaluation points, repeatable: `--q 0.5 --q 1,2`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    q: Vec<Complex64>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Mode {
    Transformed,
    Plain,
}

impl From<Mode> for QmcMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Transformed => QmcMode::Transformed,
            Mode::Plain => QmcMode::Plain,
        }
    }
}

#[derive(Args, Serialize)]
struct VerifyIntegral {
    #[arg(long)]
    tau: f64,
    #[arg(long, default_value_t = 0.0)]
    l1: f64,
    #[arg(long, default_value_t = 0.0)]
    l2: f64,
    /// Dimension, 1 to 3.
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, value_parser = parse_count, default_value = "2e6")]
    samples: Count,
    #[arg(long, value_enum, default_value_t = Mode::Transformed)]
    mode: Mode,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Kind {
    Selberg,
    Morris,
}

impl From<Kind> for IntegralKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Selberg => IntegralKind::Selberg,
            Kind::Morris => IntegralKind::Morris,
        }
    }
}

#[derive(Args, Serialize)]
struct VerifyDuality {
    #[arg(long, value_enum, default_value_t = Kind::Selberg)]
    kind: Kind,
    #[arg(long, default_value_t = 0.0)]
    l1: f64,
    #[arg(long, default_value_t = 0.0)]
    l2: f64,
    /// β values for the self-duality check.
    #[arg(long, value_parser = parse_list, default_value = "0.3,0.5,0.7")]
    beta: List,
    /// τ values for the involution check.
    #[arg(long, value_parser = parse_list, default_value = "1.5,2.7,4")]
    tau: List,
    /// Evaluation points, repeatable.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    q: Vec<Complex64>,
}

#[derive(Args, Serialize)]
struct Critical {
    #[arg(long, value_enum, default_value_t = Kind::Selberg)]
    kind: Kind,
    #[arg(long, default_value_t = 0.0)]
    l1: f64,
    #[arg(long, default_value_t = 0.0)]
    l2: f64,
    /// Evaluation points, repeatable; Re q < 1.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    q: Vec<Complex64>,
    /// Number of draws to dump.
    #[arg(long, value_parser = parse_count)]
    n: Option<Count>,
    /// Dump log M_crit + log Y′ instead of M_crit.
    #[arg(long)]
    fluctuation: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Domain {
    Interval,
    Circle,
}

#[derive(Args, Serialize)]
struct FieldArgs {
    #[arg(long, value_enum, default_value_t = Domain::Interval)]
    domain: Domain,
    /// Interval potential exponents.
    #[arg(long, default_value_t = 0.0)]
    l1: f64,
    #[arg(long, default_value_t = 0.0)]
    l2: f64,
    /// Circle potential exponent.
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
    /// Inverse temperature of the exponential functional.
    #[arg(long, default_value_t = 0.5)]
    beta: f64,
    /// Rotation of the circle grid, radians.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    offset: f64,
}

impl FieldArgs {
    fn config(&self, n: usize, seed: u64) -> GffConfig {
        let base = match self.domain {
            Domain::Interval => GffConfig::interval(n, self.l1, self.l2, seed),
            Domain::Circle => GffConfig::circle(n, self.alpha, seed),
        };
        GffConfig { beta: self.beta, offset: self.offset, ..base }
    }
}

#[derive(Args, Serialize)]
struct GffSim {
    #[command(flatten)]
    field: FieldArgs,
    /// Grid size.
    #[arg(long, value_parser = parse_count, default_value = "256")]
    n: Count,
    #[arg(long, value_parser = parse_count, default_value = "1000")]
    runs: Count,
    /// Dump the exponential functional Z instead of the maximum.
    #[arg(long)]
    functional: bool,
}

#[derive(Args, Serialize)]
struct GffCompare {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long, value_parser = parse_sizes, default_value = "64,96,128,192,256,384,512")]
    ladder: Sizes,
    /// Runs per ladder point; at least 500.
    #[arg(long, value_parser = parse_count, default_value = "1000")]
    runs: Count,
}

#[derive(Args, Serialize)]
struct FreezingDemo {
    #[arg(long, value_enum, default_value_t = Kind::Selberg)]
    kind: Kind,
    #[arg(long, default_value_t = -0.4, allow_hyphen_values = true)]
    q: f64,
    #[arg(long, default_value_t = 0.0)]
    l1: f64,
    #[arg(long, default_value_t = 0.0)]
    l2: f64,
    #[arg(
        long,
        value_parser = parse_list,
        default_value = "0.05,0.1,0.15,0.2,0.25,0.3,0.35,0.4,0.45,0.5,0.55,0.6,0.65,0.7,0.75,0.8,0.85,0.9,0.95"
    )]
    betas: List,
}

enum Dump {
    Samples(Vec<f64>),
    Grouped(Vec<(usize, Vec<f64>)>),
}

struct Ctx<'a> {
    seed: u64,
    th: &'a Thresholds,
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli, argv) {
        Ok(Some(Verdict::Fail)) => ExitCode::from(2),
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli, argv: Vec<String>) -> Result<Option<Verdict>> {
    let start = Instant::now();
    let th = match &cli.thresholds {
        Some(p) => Thresholds::from_path(p)?,
        None => Thresholds::default(),
    };
    if cli.threads == 0 {
        return Err(Error::InvalidParameter("--threads must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build_global()
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let hash = config_hash(&json!({
        "command": &cli.cmd,
        "seed": cli.seed,
        "threads": cli.threads,
        "thresholds": &th,
    }))?;
    let name = cli.cmd.name();
    let mut report = Report::new(name, cli.seed, cli.threads, hash);
    let ctx = Ctx { seed: cli.seed, th: &th };
    let dump = dispatch(&cli.cmd, &ctx, &mut report)?;

    let csv_path = dump.as_ref().map(|_| match (&cli.csv, &cli.out) {
        (Some(p), _) => p.clone(),
        (None, Some(out)) => out.with_extension("csv"),
        (None, None) => default_out_dir().join(format!("{name}-{}.csv", cli.seed)),
    });
    let primary = cli.out.clone().or_else(|| csv_path.clone());
    let manifest = primary.as_deref().map(manifest_path);
    if let Some(p) = &manifest {
        report.manifest = Some(file_name(p));
    }
    if let Some(p) = &csv_path {
        report.insert("samples_csv", file_name(p))?;
        match dump.as_ref().unwrap() {
            Dump::Samples(v) => write_samples_csv(p, v)?,
            Dump::Grouped(g) => {
                let groups: Vec<(usize, &[f64])> = g.iter().map(|(n, v)| (*n, v.as_slice())).collect();
                write_grouped_csv(p, &groups)?
            }
        }
    }
    if let Some(p) = &cli.out {
        write_report(p, &report)?;
    }
    if let Some(mp) = &manifest {
        let mut m = RunManifest::new(argv, &report, start.elapsed().as_secs_f64());
        for p in csv_path.iter().chain(cli.out.iter()) {
            m.record(p)?;
        }
        m.write(mp)?;
    }
    if cli.json {
        print!("{}", report.to_json()?);
    } else {
        print_summary(&report);
    }
    Ok(report.verdict)
}

fn file_name(p: &Path) -> String {
    p.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn print_summary(report: &Report) {
    println!("{}", report.command);
    for (k, v) in &report.result {
        match v {
            serde_json::Value::Array(xs) if xs.len() > 4 => println!("  {k}: [{} entries]", xs.len()),
            serde_json::Value::Object(_) | serde_json::Value::Array(_) => println!("  {k}: {v}"),
            _ => println!("  {k}: {v}"),
        }
    }
    if let Some(v) = report.verdict {
        println!("verdict: {}", v.as_str());
    }
}

fn dispatch(cmd: &Cmd, ctx: &Ctx, r: &mut Report) -> Result<Option<Dump>> {
    match cmd {
        Cmd::EvalGamma(a) => eval_gamma(a, r),
        Cmd::EvalEta(a) => eval_eta(a, ctx, r),
        Cmd::Atom(a) => atom(a, ctx, r),
        Cmd::Moments(a) => moments(a, ctx, r),
        Cmd::Sample(a) => sample(a, ctx, r),
        Cmd::SampleRatio(a) => sample_ratio_cmd(a, ctx, r),
        Cmd::VerifyLk(a) => verify_lk(a, ctx, r),
        Cmd::VerifySelberg(a) => verify_integral(IntegralKind::Selberg, a, ctx, r),
        Cmd::VerifyMorris(a) => verify_integral(IntegralKind::Morris, a, ctx, r),
        Cmd::VerifyDuality(a) => verify_duality(a, ctx, r),
        Cmd::Critical(a) => critical(a, ctx, r),
        Cmd::GffSim(a) => gff_sim(a, ctx, r),
        Cmd::GffCompare(a) => gff_compare(a, ctx, r),
        Cmd::FreezingDemo(a) => freezing(a, ctx, r),
    }
}

fn eval_gamma(a: &EvalGamma, r: &mut Report) -> Result<Option<Dump>> {
    if let Some(m) = a.m.filter(|&m| m != a.a.0.len()) {
        return Err(Error::InvalidParameter(format!("--M {m} but {} a values", a.a.0.len())));
    }
    let p = MultiGammaParams::new(a.a.0.clone())?;
    let v = match a.route {
        Route::Auto => MultiGamma::new(&p).log_gamma_any(a.w)?,
        Route::Asymptotic => log_multi_gamma_asymptotic(&p, a.w)?,
        Route::Integral => log_multi_gamma_integral(&p, a.w, 1e-12)?,
    };
    r.insert("log_gamma", complex_json(v))?;
    Ok(None)
}

fn eval_eta(a: &EvalEta, ctx: &Ctx, r: &mut Report) -> Result<Option<Dump>> {
    let s = a.spec.spec()?;
    let v = log_eta(&s, a.q)?;
    r.insert("regime", s.regime())?;
    r.insert("log_eta", complex_json(v))?;
    if a.lk {
        let w = log_eta_lk(&s, a.q)?;
        let d = (v - w).norm();
        r.insert("log_eta_lk", complex_json(w))?;
        r.insert("difference", d)?;
        r.verdict = Some(Verdict::from_bool(d <= ctx.th.levy_khinchine));
    }
    Ok(None)
}

fn atom(a: &SpecArgs, ctx: &Ctx, r: &mut Report) -> Result<Option<Dump>> {
    let m = atom_mass_routes(&a.spec()?)?;
    let d = (m.via_integral - m.via_gamma).abs();
    r.insert("via_gamma", m.via_gamma)?;
    r.insert("via_integral", m.via_integral)?;
    r.insert("difference", d)?;
    r.verdict = Some(Verdict::from_bool(d <= ctx.th.atom));
    Ok(None)
}

fn moments(a: &Moments, ctx: &Ctx, r: &mut Report) -> Result<Option<Dump>> {
    let s = a.spec.spec()?;
    let mut rows = Vec::new();
    let mut ok = true;
    for &k in &a.k.0 {
        let m = moment(&s, k)?;
        let e = log_eta(&s, Complex64::new(k as f64, 0.0))?.re.exp();
        let d = (m / e - 1.0).abs();
        ok &= d <= ctx.th.moments;
        rows.push(json!({"k": k, "moment": m, "via_eta": e, "relative_difference": d}));
    }
    r.insert("moments", rows)?;
    r.verdict = Some(Verdict::from_bool(ok));
    Ok(None)
}

// Empirical E[X^q] with its standard error against the closed form.
fn mellin_rows(x: &[f64], qs: &[f64], closed: impl Fn(f64) -> Result<f64>, sigmas: f64) -> Result<(Vec<serde_json::Value>, bool)> {
    let mut rows = Vec::new();
    let mut ok = true;
    for &q in qs {
        let p: Vec<f64> = x.iter().map(|v| v.powf(q)).collect();
        let (m, se) = (mean(&p), std_error(&p));
        let e = closed(q)?;
        let z = (m - e) / se;
        ok &= z.abs() <= sigmas;
        rows.push(json!({"q": q, "empirical": m, "stderr": se, "closed_form": e, "z": z}));
    }
    Ok((rows, ok))
}

fn sample(a: &Sample, ctx: &Ctx, r: &mut Report) -> Result<Option<Dump>> {
    let s = a.spec.spec()?;
    let sampler = BarnesBetaSampler::new(&s)?;
    let logs = sample_log(&s, a.n.0, ctx.seed)?;
    let x: Vec<f64> = logs.iter().map(|v| v.exp()).collect();
    r.insert("spec", &s)?;
    r.insert("regime", s.regime())?;
    r.insert("sampler_path", sampler.path())?;
    r.insert("n", a.n.0)?;
    r.insert("log_values", a.log)?;
    r.insert("mean", mean(&x))?;
    r.insert("mean_log", mean(&logs))?;
    r.insert("sampler_sigmas", ctx.th.sampler_sigmas)?;
    if !a.q.0.is_empty() {
        let (rows, ok) = mellin_rows(&x, &a.q.0, |q| Ok(log_eta(&s, Complex64::new(q, 0.0))?.re.exp()), ctx.th.sampler_sigmas)?;
        r.insert("mellin", rows)?;
        r.verdict = Some(Verdict::from_bool(ok));
    }
    Ok(Some(Dump::Samples(if a.log { logs } else { x })))
}

fn sample_ratio_cmd(a: &SampleRatio, ctx: &Ctx, r: &mut Report) -> Result<Option<Dump>> {
    let s = a.spec.spec()?;
    let ratio = match a.bbar0 {
        Some(b) => RatioSpec::new(s, b)?,
        None => RatioSpec::with_sine_choice(s)?,
    };
    let x = sample_ratio(&ratio, a.n.0, ctx.seed)?;
    r.insert("ratio", &ratio)?;
    r.insert("n", a.n.0)?;
    r.insert("mean", mean(&x))?;
    r.insert("sampler_sigmas", ctx.th.sampler_sigmas)?;
    if !a.q.0.is_empty() {
        let (rows, ok) =
            mellin_rows(&x, &a.q.0, |q| Ok(ratio.log_mellin(Complex64::new(q, 0.0))?.re.exp()), ctx.th.sampler_sigmas)?;
        r.insert("mellin", rows)?;
        r.verdict = Some(Verdict::from_bool(ok));
    }
    Ok(Some(Dump::Samples(x)))
}

fn verify_lk(a: &VerifyLk, ctx: &Ctx, r: &mut Report) -> Result<Option<Dump>> {
    let s = a.spec.spec()?;
    let qs = if a.q.is_empty() {
        vec![Complex64::new(0.5, 0.0), Complex64::new(1.0, 1.0), Complex64::new(2.0, -0.5)]
    } else {
        a.q.clone()
    };
    let mut rows = Vec::new();
    let mut worst: f64 = 0.0;
    for q in qs {
        let (x, y) = (log_eta(&s, q)?, log_eta_lk(&s, q)?);
        let d = (x - y).norm();
        worst = worst.max(d);
        rows.push(json!({"q": complex_json(q), "log_eta": complex_json(x), "log_eta_lk": complex_json(y), "difference": d}));
    }
    r.insert("regime", s.regime())?;
    r.insert("rows", rows)?;
    r.insert("max_difference", worst)?;
    r.verdict = Some(Verdict::from_bool(worst <= ctx.th.levy_khinchine));
    Ok(None)
}

fn verify_integral(kind: IntegralKind, a: &VerifyIntegral, ctx: &Ctx, r: &mut Report) -> Result<Option<Dump>> {
    let p = SelbergParams::new(a.tau, a.l1, a.l2)?;
    let n = a.n as u32;
    let q = Complex64::new(n as f64, 0.0);
    let seed = (ctx.seed & 0xffff_ffff) as u32;
    let (formula, mellin, oracle, se, im_ok) = match kind {
        IntegralKind::Selberg => {
            let est = selberg_integral_qmc(a.n, &p, a.samples.0, seed, a.mode.into())?;
            (selberg_product(&p, n), selberg_mellin(&p, q)?.re, est.estimate, est.stderr, true)
        }
        IntegralKind::Morris => {
            let est = morris_integral_qmc(a.n, &p, a.samples.0, seed, a.mode.into())?;
            let im_ok = est.estimate.im.abs() <= ctx.th.qmc_sigmas * est.stderr_im.max(1e-12);
            (morris_product(&p, n), morris_mellin(&p, q)?.re, est.estimate.re, est.stderr_re, im_ok)
        }
    };
    let bridge = (formula / mellin - 1.0).abs();
    let z = if se > 0.0 { (oracle - formula) / se } else if oracle == formula { 0.0 } else { f64::INFINITY };
    r.insert("params", json!({"tau": a.tau, "lambda1": a.l1, "lambda2": a.l2}))?;
    r.insert("quantity", format!("E[M^{n}]"))?;
    r.insert("formula_value", formula)?;
    r.insert("mellin_value", mellin)?;
    r.insert("bridge_residual", bridge)?;
    r.insert("oracle_value", oracle)?;
    r.insert("stderr", se)?;
    r.insert("z", z)?;
    let mut ok = bridge <= ctx.th.moment_bridge && z.abs() <= ctx.th.qmc_sigmas && im_ok;
    if kind == IntegralKind::Morris && a.l1 == 0.0 && a.l2 == 0.0 {
        // (2π)^q Γ(1 − q/τ)/Γ^q(1 − 1/τ).
        let mut rows = Vec::new();
        for q in [-1.5, -0.5, 0.25, 0.5, 1.0, 1.5] {
            if q >= a.tau {
                continue;
            }
            let e = q * (2.0 * PI).ln() + ln_gamma_real(1.0 - q / a.tau) - q * ln_gamma_real(1.0 - 1.0 / a.tau);
            let v = morris_mellin(&p, Complex64::new(q, 0.0))?.re;
            let d = (v / e.exp() - 1.0).abs();
            ok &= d <= ctx.th.morris_lambda_zero;
            rows.push(json!({"q": q, "mellin": v, "closed_form": e.exp(), "relative_difference": d}));
        }
        r.insert("lambda_zero", rows)?;
    }
    r.verdict = Some(Verdict::from_bool(ok));
    Ok(None)
}

fn verify_duality(a: &VerifyDuality, ctx: &Ctx, r: &mut Report) -> Result<Option<Dump>> {
    let kind: IntegralKind = a.kind.into();
    let qs = if a.q.is_empty() { vec![Complex64::new(0.2, 0.0), Complex64::new(-0.3, 0.5)] } else { a.q.clone() };
    let mut worst: f64 = 0.0;
    let mut duality = Vec::new();
    for &beta in &a.beta.0 {
        for &q in &qs {
            let d = duality_residual(kind, q, beta, a.l1, a.l2)?;
            worst = worst.max(d);
            duality.push(json!({"beta": beta, "q": complex_json(q), "residual": d}));
        }
    }
    let mut involution = Vec::new();
    for &tau in &a.tau.0 {
        let p = SelbergParams::new(tau, a.l1, a.l2)?;
        for &q in &qs {
            let d = involution_residual(kind, &p, q)?;
            worst = worst.max(d);
            involution.push(json!({"tau": tau, "q": complex_json(q), "residual": d}));
        }
    }
    r.insert("kind", kind)?;
    r.insert("self_duality", duality)?;
    r.insert("involution", involution)?;
    r.insert("max_residual", worst)?;
    r.verdict = Some(Verdict::from_bool(worst <= ctx.th.duality));
    Ok(None)
}

fn critical(a: &Critical, ctx: &Ctx, r: &mut Report) -> Result<Option<Dump>> {
    let law = critical_law(a.kind.into(), a.l1, a.l2)?;
    let qs = if a.q.is_empty() { vec![Complex64::new(0.5, 0.0)] } else { a.q.clone() };
    let mut rows = Vec::new();
    for q in qs {
        rows.push(json!({"q": complex_json(q), "log_mellin": complex_json(law.log_mellin(q)?)}));
    }
    r.insert("law", &law)?;
    r.insert("rows", rows)?;
    let Some(n) = a.n else { return Ok(None) };
    let x = if a.fluctuation {
        law.sample_fluctuation(n.0, ctx.seed)?
    } else {
        law.components.sample(n.0, ctx.seed)?
    };
    r.insert("n", n.0)?;
    r.insert("fluctuation", a.fluctuation)?;
    Ok(Some(Dump::Samples(x)))
}

fn gff_sim(a: &GffSim, ctx: &Ctx, r: &mut Report) -> Result<Option<Dump>> {
    let cfg = a.field.config(a.n.0, ctx.seed);
    r.insert("config", &cfg)?;
    r.insert("runs", a.runs.0)?;
    if a.functional {
        let z = exponential_functional(&cfg, a.runs.0)?;
        r.insert("quantity", "Z")?;
        r.insert("mean", mean(&z))?;
        r.insert("stderr", std_error(&z))?;
        r.insert("normalization", z_normalization(&cfg))?;
        r.insert("exact_mean", z_exact_mean(&cfg)?)?;
        return Ok(Some(Dump::Samples(z)));
    }
    let res = sample_max(&cfg, a.runs.0)?;
    r.insert("quantity", "V_N")?;
    r.insert("mean", res.mean)?;
    r.insert("stderr", res.stderr)?;
    Ok(Some(Dump::Samples(res.samples)))
}

fn gff_compare(a: &GffCompare, ctx: &Ctx, r: &mut Report) -> Result<Option<Dump>> {
    let cfg = a.field.config(a.ladder.0[0], ctx.seed);
    let cmp = compare_to_conjecture(&cfg, &a.ladder.0, a.runs.0)?;
    let [lo, hi] = ctx.th.drift_c1;
    let drift_ok = cmp.drift.c1 >= lo && cmp.drift.c1 <= hi;
    r.insert("config", &cfg)?;
    r.insert("comparison", &cmp)?;
    r.insert("drift_c1_in_range", drift_ok)?;
    r.insert("trend_only", true)?;
    r.verdict = Some(Verdict::from_bool(drift_ok && cmp.ks_non_increasing));
    Ok(Some(Dump::Grouped(cmp.ladder.into_iter().map(|p| (p.n, p.samples)).collect())))
}

fn freezing(a: &FreezingDemo, ctx: &Ctx, r: &mut Report) -> Result<Option<Dump>> {
    let t = freezing_demo(a.kind.into(), &a.betas.0, a.q, a.l1, a.l2)?;
    let worst = t.rows.iter().map(|row| row.residual).fold(0.0, f64::max);
    r.insert("table", &t)?;
    r.insert("max_residual", worst)?;
    r.verdict = Some(Verdict::from_bool(worst <= ctx.th.freezing));
    Ok(None)
}
