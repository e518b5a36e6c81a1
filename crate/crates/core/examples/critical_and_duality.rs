//! Critical laws at τ = 1 and the β ↔ 1/β duality of the Mellin transforms.

use barnes_beta::numerics::stats::mean;
use barnes_beta::selbergmorris::{critical_law, duality_residual, involution_residual, IntegralKind, SelbergParams};
use barnes_beta::special::ln_gamma_real;
use barnes_beta::{Complex64, Result};

fn main() -> Result<()> {
    for kind in [IntegralKind::Selberg, IntegralKind::Morris] {
        for beta in [0.4, 0.7, 0.9] {
            let r = duality_residual(kind, Complex64::new(0.3, 0.2), beta, 0.2, 0.1)?;
            println!("{kind:?} duality at β = {beta}: residual {r:.1e}");
        }
        let p = SelbergParams::new(2.5, 0.3, 0.1)?;
        println!("{kind:?} involution residual {:.1e}", involution_residual(kind, &p, Complex64::new(0.4, 0.0))?);
    }

    // The fluctuation is the critical law times an independent factor with
    // Mellin transform Γ(1 − q); samples are logarithms.
    let law = critical_law(IntegralKind::Morris, 0.0, 0.0)?;
    let logs = law.sample_fluctuation(100_000, 5)?;
    let q = -0.5;
    let emp = mean(&logs.iter().map(|x| (q * x).exp()).collect::<Vec<_>>());
    let exact = (law.log_mellin(Complex64::new(q, 0.0))?.re + ln_gamma_real(1.0 - q)).exp();
    println!("critical Morris fluctuation: E[Y^{q}] = {emp:.5} vs {exact:.5}");
    Ok(())
}
