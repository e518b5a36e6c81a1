//! Barnes beta laws in each regime: Mellin transform by the gamma product
//! and by the Lévy–Khinchine integral, atom mass and integer moments.

use barnes_beta::barnesbeta::{atom_mass_routes, log_eta, log_eta_lk, moment, stieltjes_determinate, BarnesBetaSpec};
use barnes_beta::{Complex64, Result};

fn main() -> Result<()> {
    let specs = [
        BarnesBetaSpec::new(vec![1.0], vec![2.0, 0.5, 1.5])?,
        BarnesBetaSpec::new(vec![1.0, 2.0], vec![2.5, 0.3, 0.7])?,
        BarnesBetaSpec::new(vec![1.0, 2.0], vec![3.0, 1.0])?,
    ];
    for s in &specs {
        println!("a = {:?}, b = {:?}: {:?}", s.a(), s.b(), s.regime());
        for q in [Complex64::new(0.5, 0.0), Complex64::new(-0.4, 1.0), Complex64::new(2.0, 0.0)] {
            let x = log_eta(s, q)?;
            let y = log_eta_lk(s, q)?;
            println!("  log η({q}) = {x:.10}  Lévy–Khinchine gap {:.1e}", (x - y).norm());
        }
        for k in [-2, 1, 3] {
            match moment(s, k) {
                Ok(m) => println!("  E[β^{k}] = {m:.10}"),
                Err(e) => println!("  E[β^{k}]: {e}"),
            }
        }
    }

    let atom = atom_mass_routes(&specs[0])?;
    println!("atom at 1: {:.12} (gamma route) vs {:.12} (integral route)", atom.via_gamma, atom.via_integral);
    println!("moment determinate: {}", stieltjes_determinate(&specs[2])?);
    Ok(())
}
