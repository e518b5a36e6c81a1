use barnes_beta::barnesbeta::s_operator;
use barnes_beta::multigamma::*;
use barnes_beta::numerics::series::exp_series;
use barnes_beta::numerics::{series_product, SeriesCoeffs};
use barnes_beta::special::ln_gamma;
use barnes_beta::{Complex64, Error};
use proptest::prelude::*;
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn mp(a: &[f64]) -> MultiGammaParams {
    MultiGammaParams::new(a.to_vec()).unwrap()
}

fn fact(m: usize) -> f64 {
    (1..=m).map(|k| k as f64).product()
}

#[test]
fn bernoulli_examples() {
    let v = bernoulli_poly(&mp(&[1.0, 1.0]), 2, c(0.0, 0.0)).unwrap();
    assert!((v.re - 5.0 / 6.0).abs() < 1e-14 && v.im == 0.0);
    for a in [vec![], vec![2.0], vec![0.5, 3.0], vec![1.0, 2.0, 4.0]] {
        let v = bernoulli_poly(&mp(&a), 0, c(1.7, -0.3)).unwrap();
        assert!((v.re - 1.0 / a.iter().product::<f64>()).abs() < 1e-14);
    }
    for &tau in &[0.5, 3.0] {
        for &x in &[0.0, 0.7, 2.5] {
            let v = bernoulli_poly(&mp(&[1.0, tau]), 2, c(x, 0.0)).unwrap().re;
            let e = x * x / tau - x * (1.0 + tau) / tau + (1.0 + 3.0 * tau + tau * tau) / (6.0 * tau);
            assert!((v - e).abs() < 1e-12, "{tau} {x}: {v} vs {e}");
        }
    }
    assert!(matches!(bernoulli_poly(&mp(&[1.0]), 7, c(0.0, 0.0)), Err(Error::Contract(_))));
}

#[test]
fn log_gamma_examples() {
    let v = log_multi_gamma(&mp(&[]), c(2.0, 0.0)).unwrap();
    assert!((v.re + 2f64.ln()).abs() < 1e-15);
    let v = log_multi_gamma(&mp(&[1.0]), c(1.0, 0.0)).unwrap();
    assert!((v.re + 0.5 * (2.0 * PI).ln()).abs() < 1e-12 && v.im.abs() < 1e-12);
    let p = mp(&[1.0, 1.0]);
    let d = log_multi_gamma(&p, c(2.0, 0.0)).unwrap() - log_multi_gamma(&p, c(1.0, 0.0)).unwrap();
    assert!((d.re - 0.5 * (2.0 * PI).ln()).abs() < 1e-10, "{d}");
    for &a in &[0.5, 1.0, 3.0] {
        for w in [c(0.2, 0.0), c(1.5, 2.0), c(30.0, -5.0)] {
            let x = log_multi_gamma(&mp(&[a]), w).unwrap();
            let y = log_gamma1_closed(a, w).unwrap();
            assert!(((x - y).exp() - 1.0).norm() < 1e-11, "{a} {w}");
        }
    }
    assert!(matches!(log_multi_gamma(&p, c(0.0, 1.0)), Err(Error::Domain(_))));
}

#[test]
fn asymptotic_examples() {
    let p = mp(&[1.0]);
    let w = c(50.0, 0.0);
    let x = log_multi_gamma_asymptotic(&p, w).unwrap();
    let y = log_multi_gamma_integral(&p, w, 1e-12).unwrap();
    assert!((x - y).norm() < 1e-3 * y.norm());
    let p = mp(&[1.0, 2.0]);
    let w = c(100.0, 0.0);
    let x = log_multi_gamma_asymptotic(&p, w).unwrap();
    let y = log_multi_gamma_integral(&p, w, 1e-12).unwrap();
    assert!((x - y).norm() < 1e-3 * y.norm());
    let scaled: Vec<f64> = [40.0, 80.0, 160.0, 320.0]
        .iter()
        .map(|&r| {
            let w = c(r, 0.0);
            let d = log_multi_gamma_asymptotic(&p, w).unwrap() - log_multi_gamma_integral(&p, w, 1e-13).unwrap();
            d.norm() * r
        })
        .collect();
    let spread = scaled.iter().cloned().fold(0.0, f64::max) / scaled.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(spread < 1.5, "{scaled:?}");
    assert!(log_multi_gamma_asymptotic(&p, c(-3.0, 0.0)).is_err());
}

#[test]
fn integral_route_agrees() {
    for a in [vec![1.0], vec![1.0, 1.0], vec![0.7, 2.0], vec![1.0, 2.0, 3.0]] {
        let p = mp(&a);
        for w in [c(0.4, 0.0), c(3.0, 2.0), c(12.0, -1.0)] {
            let x = log_multi_gamma(&p, w).unwrap();
            let y = log_multi_gamma_integral(&p, w, 1e-12).unwrap();
            assert!((x - y).norm() < 1e-9 * (1.0 + x.norm()), "{a:?} {w}");
        }
    }
}

#[test]
fn extension_examples() {
    let p = mp(&[1.0]);
    let x = extend_by_functional_eq(&p, c(0.5, 0.0), 0).unwrap();
    let y = log_multi_gamma(&p, c(0.5, 0.0)).unwrap();
    assert!((x - y).norm() < 1e-10);
    // Γ_1(−1.5|1) from Γ(−1.5) = 4√π/3.
    let x = extend_by_functional_eq(&p, c(-1.5, 0.0), 0).unwrap();
    let e = log_gamma1_closed(1.0, c(-1.5, 0.0)).unwrap();
    assert!(((x - e).exp() - 1.0).norm() < 1e-10);
    assert!(matches!(extend_by_functional_eq(&p, c(-2.0, 0.0), 0), Err(Error::Pole { .. })));
    let tau = 3.0;
    let p = mp(&[1.0, tau]);
    let z = tau;
    let lhs = log_multi_gamma(&p, c(z - 1.0, 0.0)).unwrap() - log_multi_gamma(&p, c(z + 1.0, 0.0)).unwrap();
    let rhs = -(2.0 * PI * tau).ln()
        + (2.0 * z - 1.0) / tau * tau.ln()
        + ln_gamma(c(z / tau, 0.0)).unwrap()
        + ln_gamma(c((z - 1.0) / tau, 0.0)).unwrap();
    assert!((lhs - rhs).norm() < 1e-10, "{lhs} vs {rhs}");
    let p0 = mp(&[]);
    let w = c(1.3, 0.4);
    let shift = log_multi_gamma(&p0, w).unwrap() + w.ln();
    assert!(shift.norm() < 1e-15);
}

#[test]
fn sine_examples() {
    let v = multiple_sine(&mp(&[1.0]), c(0.5, 0.0)).unwrap();
    assert!((v - 2.0).norm() < 1e-10, "{v}");
    for &w in &[0.3, 0.8] {
        let v = multiple_sine(&mp(&[1.0]), c(w, 0.0)).unwrap();
        assert!((v.re - 2.0 * (PI * w).sin()).abs() < 1e-10);
    }
    let v = multiple_sine(&mp(&[1.0, 1.0]), c(1.0, 0.0)).unwrap();
    assert!((v - 1.0).norm() < 1e-10);
}

// S_{M−1} acting on B^{(f)}_k with f = f_M(·|a).
fn s_on_bernoulli(p: &MultiGammaParams, k: usize, q: f64, b: &[f64]) -> f64 {
    s_operator(|x| bernoulli_poly(p, k, x), c(q, 0.0), b).unwrap().re
}

fn action_case(a: &[f64], b: &[f64], q: f64) {
    let p = mp(a);
    let m = a.len();
    let f0 = 1.0 / a.iter().product::<f64>();
    let scale = 1.0 + q.abs() + b.iter().sum::<f64>();
    for k in 0..m.saturating_sub(1) {
        let v = s_on_bernoulli(&p, k, q, b);
        assert!(v.abs() < 1e-9 * scale.powi(k as i32 + 1), "id1 k={k}: {v}");
    }
    let d = s_on_bernoulli(&p, m - 1, q, b) - s_on_bernoulli(&p, m - 1, 0.0, b);
    assert!(d.abs() < 1e-9 * scale.powi(m as i32), "id2: {d}");
    let d = s_on_bernoulli(&p, m, q, b) - s_on_bernoulli(&p, m, 0.0, b);
    let e = -q * f0 * fact(m) * b[1..].iter().product::<f64>();
    assert!((d - e).abs() < 1e-8 * scale.powi(m as i32 + 1), "id3: {d} vs {e}");
}

#[test]
fn polynomial_action_identities() {
    action_case(&[1.0], &[0.5], 0.7);
    action_case(&[1.0, 2.0], &[0.5, 1.5], 2.3);
    action_case(&[0.5, 1.0, 3.0], &[1.0, 0.25, 2.0], -0.4);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn action_identities(
        a in prop::collection::vec(0.3f64..3.0, 1..=3),
        bs in prop::collection::vec(0.1f64..3.0, 3),
        q in -2.0f64..5.0,
    ) {
        let b: Vec<f64> = bs[..a.len()].to_vec();
        action_case(&a, &b, q);
    }

    #[test]
    fn functional_equation(
        a in prop::collection::vec(0.3f64..3.0, 1..=3),
        re in 0.1f64..50.0,
        im in -10.0f64..10.0,
        i in 0usize..3,
    ) {
        let p = mp(&a);
        let i = i % a.len();
        let r = functional_equation_residual(&p, c(re, im), i).unwrap();
        prop_assert!(r.norm() < 1e-9, "{}", r);
    }

    #[test]
    fn scaling(
        a in prop::collection::vec(0.3f64..3.0, 0..=3),
        re in 0.1f64..20.0,
        im in -5.0f64..5.0,
        kappa in 0.25f64..4.0,
    ) {
        let r = scaling_residual(&mp(&a), c(re, im), kappa).unwrap();
        prop_assert!(r.norm() < 1e-8, "{}", r);
    }

    #[test]
    fn multiplication(
        a in prop::collection::vec(0.3f64..3.0, 2),
        re in 0.1f64..20.0,
        im in -5.0f64..5.0,
    ) {
        let r = multiplication_residual(&mp(&a), c(re, im), 2).unwrap();
        prop_assert!(r.norm() < 1e-7, "{}", r);
    }

    #[test]
    fn conjugate_symmetry(
        a in prop::collection::vec(0.3f64..3.0, 0..=3),
        re in 0.1f64..30.0,
        im in -10.0f64..10.0,
    ) {
        let p = mp(&a);
        let w = c(re, im);
        let x = log_multi_gamma(&p, w.conj()).unwrap();
        let y = log_multi_gamma(&p, w).unwrap().conj();
        prop_assert!((x - y).norm() < 1e-12 * (1.0 + x.norm()));
    }

    #[test]
    fn bernoulli_is_a_taylor_coefficient(
        a in prop::collection::vec(0.3f64..3.0, 0..=4),
        m in 0usize..=8,
        x in -3.0f64..3.0,
    ) {
        let p = mp(&a);
        prop_assume!(m <= 2 * a.len() + 4);
        let f = p.f_series(m);
        let fc: Vec<Complex64> = f.coefficients().iter().map(|&v| c(v, 0.0)).collect();
        let g = series_product(&[SeriesCoeffs::new(fc, 1.0).unwrap(), exp_series(c(-x, 0.0), m)], m).unwrap();
        let e = g.coefficients()[m] * fact(m);
        let v = bernoulli_poly(&p, m, c(x, 0.0)).unwrap();
        prop_assert!((v - e).norm() < 1e-10 * (1.0 + e.norm()), "{} vs {}", v, e);
    }
}
