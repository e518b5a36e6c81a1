//! Multiple gamma and sine functions: values, identities and the two
//! evaluation routes.

use barnes_beta::multigamma::{
    functional_equation_residual, log_multi_gamma, log_multi_gamma_asymptotic, log_multi_gamma_integral,
    multiple_sine, MultiGammaParams,
};
use barnes_beta::{Complex64, Result};

fn main() -> Result<()> {
    let w = Complex64::new(1.5, 0.7);
    for a in [vec![1.0], vec![1.0, 2.5], vec![0.5, 1.0, 3.0]] {
        let p = MultiGammaParams::new(a.clone())?;
        let v = log_multi_gamma(&p, w)?;
        let via_integral = log_multi_gamma_integral(&p, w, 1e-12)?;
        println!("a = {a:?}: log Γ_M({w}) = {v:.12}  (integral route differs by {:.1e})", (v - via_integral).norm());
        for i in 0..a.len() {
            let r = functional_equation_residual(&p, w, i)?;
            println!("  shift by a_{i}: residual {:.1e}", r.norm());
        }
    }

    let p = MultiGammaParams::new(vec![1.0, 2.0])?;
    for r in [20.0, 80.0, 320.0] {
        let w = Complex64::new(r, 0.0);
        let gap = log_multi_gamma_asymptotic(&p, w)? - log_multi_gamma_integral(&p, w, 1e-13)?;
        println!("asymptotic expansion at w = {r}: error {:.2e}", gap.norm());
    }

    let s = MultiGammaParams::new(vec![1.0])?;
    for x in [0.25, 0.5, 0.75] {
        let v = multiple_sine(&s, Complex64::new(x, 0.0))?;
        println!("S_1({x}|1) = {:.12} (2 sin πx = {:.12})", v.re, 2.0 * (std::f64::consts::PI * x).sin());
    }
    Ok(())
}
