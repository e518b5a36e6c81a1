//! Sampling Barnes beta variables and ratios, checked against the Mellin
//! transform.

use barnes_beta::barnesbeta::{log_eta, sample, sample_ratio, BarnesBetaSampler, BarnesBetaSpec, RatioSpec};
use barnes_beta::numerics::stats::{mean, std_error};
use barnes_beta::{Complex64, Result};

fn main() -> Result<()> {
    let n = 100_000;
    for s in [
        BarnesBetaSpec::new(vec![1.0], vec![2.0, 0.5, 1.5])?,
        BarnesBetaSpec::new(vec![1.0, 1.0], vec![2.2, 0.15, 0.15])?,
        BarnesBetaSpec::new(vec![1.0, 2.0], vec![3.0, 1.0])?,
    ] {
        let path = BarnesBetaSampler::new(&s)?.path();
        let xs = sample(&s, n, 7)?;
        for q in [0.5, 1.0] {
            let powered: Vec<f64> = xs.iter().map(|x| x.powf(q)).collect();
            let exact = log_eta(&s, Complex64::new(q, 0.0))?.re.exp();
            let z = (mean(&powered) - exact) / std_error(&powered);
            println!("{:?} via {path:?}: E[β^{q}] = {:.5} vs {exact:.5} (z = {z:+.2})", s.regime(), mean(&powered));
        }
    }

    let base = BarnesBetaSpec::new(vec![1.0, 2.0], vec![3.0, 1.0])?;
    let ratio = RatioSpec::new(base, 2.0)?;
    let xs = sample_ratio(&ratio, n, 11)?;
    let exact = ratio.log_mellin(Complex64::new(0.5, 0.0))?.re.exp();
    let powered: Vec<f64> = xs.iter().map(|x| x.sqrt()).collect();
    println!("ratio with b̄_0 = 2: E[r^0.5] = {:.5} vs {exact:.5}", mean(&powered));
    Ok(())
}
