//! Selberg and Morris integrals: Mellin transforms, the moment bridge,
//! quasi-Monte Carlo checks and the factorised samplers.

use barnes_beta::selbergmorris::{
    log_selberg_mellin, morris_integral_qmc, morris_mellin, morris_product, sample_selberg, selberg_components,
    selberg_integral_qmc, selberg_mellin, selberg_moment_formula, selberg_product, QmcMode, SelbergParams,
};
use barnes_beta::numerics::stats::mean;
use barnes_beta::{Complex64, Result};

fn main() -> Result<()> {
    let p = SelbergParams::new(3.0, 0.5, 0.2)?;
    for l in 1..=2u32 {
        let m = selberg_mellin(&p, Complex64::new(l as f64, 0.0))?.re;
        println!("Selberg M({l}) = {m:.12}, gamma product {:.12}", selberg_product(&p, l));
    }
    for n in 1..=2u32 {
        let m = morris_mellin(&p, Complex64::new(n as f64, 0.0))?.re;
        println!("Morris  M({n}) = {m:.12}, gamma product {:.12}", morris_product(&p, n));
    }

    let est = selberg_integral_qmc(2, &p, 1 << 20, 1, QmcMode::Transformed)?;
    let exact = selberg_moment_formula(&p, 2)?;
    println!("Selberg n = 2 by QMC: {:.6} ± {:.1e} (exact {exact:.6})", est.estimate, est.stderr);
    let est = morris_integral_qmc(2, &p, 1 << 20, 2, QmcMode::Transformed)?;
    println!("Morris n = 2 by QMC: {:.6} ± {:.1e} (exact {:.6})", est.estimate.re, est.stderr_re, morris_product(&p, 2));

    let c = selberg_components(&p)?;
    println!(
        "Selberg law: constant {:.6}, lognormal σ² {:.6}, {} inverse Barnes beta factors, {} Fréchet factors",
        c.constant,
        c.lognormal_sigma2,
        c.inverse_bb_factors.len(),
        c.frechet_factors.len()
    );
    let xs = sample_selberg(&p, 100_000, 3)?;
    let q = 0.7;
    let emp = mean(&xs.iter().map(|x| x.powf(q)).collect::<Vec<_>>());
    let exact = log_selberg_mellin(&p, Complex64::new(q, 0.0))?.re.exp();
    println!("sampled E[M^{q}] = {emp:.5} vs {exact:.5}");
    Ok(())
}
