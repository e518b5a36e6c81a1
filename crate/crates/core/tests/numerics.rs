use barnes_beta::numerics::series::{t_over_one_minus_exp, exp_series};
use barnes_beta::numerics::stats::ks_one_sample;
use barnes_beta::numerics::*;
use barnes_beta::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use statrs::function::erf::erf;

fn normal_cdf(x: f64) -> f64 {
    0.5 * (1.0 + erf(x / std::f64::consts::SQRT_2))
}

#[test]
fn semiline_examples() {
    let r = integrate_semiline(&SemilineIntegrand::new(|t: f64| (-t).exp()), 1.0, 1e-12).unwrap();
    assert!((r.value - 1.0).abs() < 1e-12 && r.evaluations >= 1 && r.error_estimate >= 0.0);
    let r = integrate_semiline(&SemilineIntegrand::new(|t: f64| t * (-t).exp()), 1.0, 1e-12).unwrap();
    assert!((r.value - 1.0).abs() < 1e-12);
    // Frullani-type: e^{−2t}(1 − e^{−t})/t, with its Taylor series near 0.
    let f = |t: f64| (-2.0 * t).exp() * -(-t).exp_m1() / t;
    let k = 30;
    // (e^{−2t} − e^{−3t})/t = Σ_n ((−2)^{n+1} − (−3)^{n+1})/(n+1)! t^n
    let mut coeffs = Vec::with_capacity(k + 1);
    let mut fact = 1.0;
    for n in 0..=k {
        fact *= (n + 1) as f64;
        coeffs.push(((-2.0f64).powi(n as i32 + 1) - (-3.0f64).powi(n as i32 + 1)) / fact);
    }
    let integrand = SemilineIntegrand::with_series(f, SeriesCoeffs::new(coeffs, 1.0).unwrap());
    let r = integrate_semiline(&integrand, 1.0, 1e-12).unwrap();
    assert!((r.value - 0.405_465_108_108_164_4).abs() < 1e-10, "{}", r.value);
    assert!(integrate_semiline(&SemilineIntegrand::new(|_t: f64| f64::NAN), 1.0, 1e-10).is_err());
}

#[test]
fn series_examples() {
    let one_plus_t = SeriesCoeffs::new(vec![1.0, 1.0, 0.0], 1.0).unwrap();
    let p = series_product(&[one_plus_t.clone(), one_plus_t], 2).unwrap();
    assert_eq!(p.coefficients(), &[1.0, 2.0, 1.0]);
    let e = series_product(&[exp_series(1.0, 5), exp_series(-1.0, 5)], 5).unwrap();
    assert!(e.coefficients()[0] == 1.0 && e.coefficients()[1..].iter().all(|c| c.abs() < 1e-16));
    let b = t_over_one_minus_exp(1.0, 2);
    let want = [1.0, 0.5, 1.0 / 12.0];
    for (x, y) in b.coefficients().iter().zip(want) {
        assert!((x - y).abs() < 1e-15);
    }
    let id = series_product::<f64>(&[], 3).unwrap();
    assert_eq!(id.coefficients(), &[1.0, 0.0, 0.0, 0.0]);
}

#[test]
fn inversion_examples() {
    let grid: Vec<f64> = (0..=160).map(|i| -4.0 + 0.05 * i as f64).collect();
    let t = invert_cf_to_cdf(|u| Complex64::new((-0.5 * u * u).exp(), 0.0), &grid, 0.0).unwrap();
    for (x, f) in t.grid().iter().zip(t.cdf()) {
        assert!((f - normal_cdf(*x)).abs() < 1e-6, "{x}: {f}");
    }
    let grid: Vec<f64> = (0..=200).map(|i| 0.05 * i as f64).collect();
    let t = invert_cf_to_cdf(|u| 1.0 / Complex64::new(1.0, -u), &grid, 0.0).unwrap();
    for (x, f) in t.grid().iter().zip(t.cdf()) {
        assert!((f - (1.0 - (-x).exp())).abs() < 1e-6, "{x}: {f}");
    }
    // Compound Poisson with unit jumps; a narrow Gaussian window smooths the
    // lattice and half-integer points read off the step CDF.
    let lambda = 2.5;
    let phi = |u: f64| (lambda * (Complex64::new(0.0, u).exp() - 1.0)).exp();
    let grid: Vec<f64> = (-1..=12).map(|k| k as f64 + 0.5).collect();
    let t = invert_cf_to_cdf(phi, &grid, 0.05).unwrap();
    let mut cdf = 0.0;
    let mut pk = (-lambda).exp();
    for (k, f) in t.cdf().iter().enumerate().skip(1) {
        cdf += pk;
        pk *= lambda / k as f64;
        assert!((f - cdf).abs() < 1e-5, "{k}: {f} vs {cdf}");
    }
    assert!(t.cdf()[0].abs() < 1e-5);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn semiline_is_linear(a in 0.2f64..3.0, b in 0.2f64..3.0, al in -2.0f64..2.0, be in -2.0f64..2.0) {
        let tol = 1e-10;
        let f = move |t: f64| (-a * t).exp();
        let g = move |t: f64| t * (-b * t).exp() / (1.0 + t);
        let rf = integrate_semiline(&SemilineIntegrand::new(f), 1.0, tol).unwrap().value;
        let rg = integrate_semiline(&SemilineIntegrand::new(g), 1.0, tol).unwrap().value;
        let h = move |t: f64| al * f(t) + be * g(t);
        let rh = integrate_semiline(&SemilineIntegrand::new(h), 1.0, tol).unwrap().value;
        let scale = al.abs() * rf.abs() + be.abs() * rg.abs();
        prop_assert!((rh - (al * rf + be * rg)).abs() <= 10.0 * tol * scale.max(1e-300));
    }

    #[test]
    fn series_product_is_associative_and_commutative(
        x in prop::collection::vec(-2.0f64..2.0, 17),
        y in prop::collection::vec(-2.0f64..2.0, 17),
        z in prop::collection::vec(-2.0f64..2.0, 17),
        k in 0usize..=16,
    ) {
        let s = |v: &Vec<f64>| SeriesCoeffs::new(v.clone(), 1.0).unwrap();
        let (a, b, c) = (s(&x), s(&y), s(&z));
        let ab_c = series_product(&[series_product(&[a.clone(), b.clone()], k).unwrap(), c.clone()], k).unwrap();
        let a_bc = series_product(&[a.clone(), series_product(&[b.clone(), c.clone()], k).unwrap()], k).unwrap();
        let cba = series_product(&[c, b, a], k).unwrap();
        for i in 0..=k {
            let m = ab_c.coefficients()[i].abs().max(1.0);
            prop_assert!((ab_c.coefficients()[i] - a_bc.coefficients()[i]).abs() < 1e-12 * m * 16.0);
            prop_assert!((ab_c.coefficients()[i] - cba.coefficients()[i]).abs() < 1e-12 * m * 16.0);
        }
    }

    #[test]
    fn inversion_round_trip(mu in -1.0f64..1.0, sd in 0.3f64..2.0, seed in 0u64..1000) {
        let grid: Vec<f64> = (0..=400).map(|i| mu - 7.0 * sd + 14.0 * sd * i as f64 / 400.0).collect();
        let phi = move |u: f64| Complex64::new(0.0, mu * u).exp() * (-0.5 * sd * sd * u * u).exp();
        let t = invert_cf_to_cdf(phi, &grid, 0.0).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let n = 4000;
        let xs: Vec<f64> = (0..n).map(|_| t.sample(&mut rng)).collect();
        let d = ks_one_sample(&xs, |x| normal_cdf((x - mu) / sd));
        prop_assert!(d <= 3.0 / (n as f64).sqrt() + t.resolution(), "{}", d);
    }
}
