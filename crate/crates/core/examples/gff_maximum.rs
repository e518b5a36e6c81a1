//! Discrete log-correlated fields: the maximum against the conjectured law,
//! the exponential functional and the freezing table.

use barnes_beta::gffmax::{
    compare_to_conjecture, exponential_functional, freezing_demo, z_exact_mean, GffConfig,
};
use barnes_beta::numerics::stats::mean;
use barnes_beta::selbergmorris::IntegralKind;
use barnes_beta::Result;

fn main() -> Result<()> {
    let cfg = GffConfig::interval(64, 0.0, 0.0, 1);
    let cmp = compare_to_conjecture(&cfg, &[32, 64, 128, 256], 2_000)?;
    for p in &cmp.ladder {
        println!("N = {:>3}: mean max {:.4} ± {:.4}, KS distance {:.3}", p.n, p.mean, p.stderr, p.ks_distance);
    }
    println!("drift c1 = {:.3}, KS non-increasing: {}", cmp.drift.c1, cmp.ks_non_increasing);

    let z = exponential_functional(&cfg, 5_000)?;
    println!("Z: sample mean {:.4}, exact {:.4}", mean(&z), z_exact_mean(&cfg)?);

    let table = freezing_demo(IntegralKind::Selberg, &[0.4, 0.7, 0.95], 0.2, 0.0, 0.0)?;
    for row in &table.rows {
        println!("β = {:.2}: F = {:.6e}, F(1/β) = {:.6e}", row.beta, row.f_beta, row.f_inverse);
    }
    Ok(())
}
