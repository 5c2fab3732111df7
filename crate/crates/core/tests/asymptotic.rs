use diophantine_core::asymptotic::{
    build_upsilon, build_upsilon_with, constant_c, envelope_fit, fit_upsilon, log_grid,
    residual_exponent, FitBasis, Kernel, KernelSpec, ModelMethod, UpsilonModel, DEFAULT_NODES,
};
use diophantine_core::series::{
    eval_series_batch, mu_log_anchor, mu_mu_log_anchor, SeriesSpec, TruncationPlan,
};
use diophantine_core::special::gamma_complex;
use diophantine_core::{Complex64, Error};

const KERNELS: [Kernel; 2] = [Kernel::ZetaPrimeOverZeta, Kernel::ZetaPrimeOverZetaSquared];

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * b.abs().max(1e-300)
}

#[test]
fn census_matches_extraction() {
    for kernel in KERNELS {
        for m in 2..=4u32 {
            let spec = KernelSpec::new(m, kernel).unwrap();
            for l in 0..m + 4 {
                let lc = spec.laurent_extract(c(-(l as f64)), 0.25, DEFAULT_NODES).unwrap();
                let coeffs = [lc.c_m1.norm(), lc.c_m2.norm(), lc.c_m3.norm()];
                let scale = coeffs.iter().chain([lc.c_0.norm()].iter()).fold(0.0f64, |a, &b| a.max(b));
                let observed = coeffs
                    .iter()
                    .rposition(|&v| v > 1e-9 * scale.max(1e-6))
                    .map_or(0, |i| i as u32 + 1);
                assert_eq!(observed, spec.pole_order(l), "{kernel} m={m} l={l} {coeffs:?}");
            }
        }
    }
}

#[test]
fn extraction_is_stable_under_radius_and_nodes() {
    for kernel in KERNELS {
        for m in [2u32, 3] {
            let spec = KernelSpec::new(m, kernel).unwrap();
            for l in [0u32, 2, m + 2] {
                let a = spec.laurent_extract(c(-(l as f64)), 0.25, 256).unwrap();
                let b = spec.laurent_extract(c(-(l as f64)), 0.125, 512).unwrap();
                for (u, v) in [(a.c_m1, b.c_m1), (a.c_m2, b.c_m2), (a.c_m3, b.c_m3)] {
                    assert!((u - v).norm() <= 1e-8 * (1.0 + u.norm()), "{kernel} m={m} l={l}");
                }
            }
        }
    }
}

#[test]
fn extraction_rejects_bad_configuration() {
    let spec = KernelSpec::new(3, Kernel::ZetaPrimeOverZeta).unwrap();
    assert!(matches!(
        spec.laurent_extract(c(-1.0), 0.6, 256),
        Err(Error::Configuration(_))
    ));
    assert!(spec.laurent_extract(c(-1.0), 0.25, 100).is_err());
}

#[test]
fn gamma_at_zero_residue() {
    // Γ has residue (−1)^l/l! at −l; probe with a centred circle
    let h = 1e-6;
    for l in 0..5u32 {
        let s = c(-(l as f64) + h);
        let approx = gamma_complex(s).unwrap() * h;
        let fact: f64 = (1..=l).map(f64::from).product();
        let want = if l % 2 == 0 { 1.0 } else { -1.0 } / fact;
        assert!((approx.re - want).abs() < 1e-5 * want.abs() * (l + 1) as f64);
    }
}

#[test]
fn constant_is_the_origin_residue() {
    for kernel in KERNELS {
        for k in 2..=5u32 {
            let spec = KernelSpec::new(k, kernel).unwrap();
            let lc = spec.laurent_extract(c(0.0), 0.25, 256).unwrap();
            let want = constant_c(k, kernel).unwrap();
            assert!((lc.c_m1.re - want).abs() < 1e-12 * (1.0 + want.abs()), "{kernel} k={k}");
            assert!(lc.c_m2.norm() < 1e-10 && lc.c_m3.norm() < 1e-10);
        }
    }
}

#[test]
fn constant_matches_series_anchor() {
    for k in [2u32, 4, 6] {
        let a = constant_c(k, Kernel::ZetaPrimeOverZeta).unwrap();
        assert!(close(a, mu_log_anchor(k).unwrap(), 1e-12));
        let b = constant_c(k, Kernel::ZetaPrimeOverZetaSquared).unwrap();
        assert!(close(b, mu_mu_log_anchor(k).unwrap(), 1e-12));
    }
    assert_eq!(constant_c(3, Kernel::ZetaPrimeOverZeta).unwrap(), 0.0);
}

fn poly(m: &UpsilonModel, e: u32) -> (f64, f64) {
    m.poly_term(e).map_or((0.0, 0.0), |t| (t.coeff, t.log_coeff))
}

#[test]
fn model_coefficients_k2() {
    let m = build_upsilon(2, Kernel::ZetaPrimeOverZeta, 2).unwrap();
    assert_eq!(m.method, ModelMethod::Residue);
    assert!(close(m.constant, -0.0577491224503, 1e-10));
    assert!(close(poly(&m, 1).0, 1.0, 1e-10));
    assert!(close(m.p(0), -3.6757541, 1e-7));
    assert!(close(m.p(1), 4.92267, 1e-5));
    assert!(close(m.r(1), -6.57974, 1e-5));
    assert!(m.h_dot().abs() < 1e-10);
    assert!(m.imaginary_leak < 1e-10);
}

#[test]
fn model_coefficients_k3() {
    let m = build_upsilon(3, Kernel::ZetaPrimeOverZeta, 2).unwrap();
    assert!(m.constant.abs() < 1e-12);
    assert!(close(poly(&m, 1).0, -0.17324737, 1e-7));
    assert!(close(poly(&m, 2).0, 1.5, 1e-10));
    assert!(close(m.p(0), -3.6757541, 1e-7));
    assert!(close(m.p(1), 3.7431699, 1e-7));
    assert!(close(m.r(1), -3.9478418, 1e-7));
    assert!(close(m.p(2), -1.9930086, 1e-7));
    assert!(close(m.r(2), 3.7108225, 1e-7));
    assert!(m.h_dot().abs() < 1e-10);
    for l in 0..=2 {
        assert!(m.q(l).abs() < 1e-10, "q_{l}");
    }
}

#[test]
fn model_coefficients_k4_and_squared_kernel() {
    let m = build_upsilon(4, Kernel::ZetaPrimeOverZeta, 1).unwrap();
    assert!(close(m.constant, 0.00196089803157528, 1e-10));
    assert!(close(poly(&m, 2).0, -0.346495, 1e-5));
    assert!(close(poly(&m, 3).0, 2.0, 1e-10));

    let m = build_upsilon(2, Kernel::ZetaPrimeOverZetaSquared, 1).unwrap();
    assert!(close(m.constant, -0.035107, 1e-4));
    let m = build_upsilon(3, Kernel::ZetaPrimeOverZetaSquared, 1).unwrap();
    assert!(close(poly(&m, 1).0, -0.10532177, 1e-7));
    // no pole at s = 1 − k for this kernel
    assert!(poly(&m, 2).0.abs() < 1e-10);
}

#[test]
fn model_tends_to_constant() {
    for k in [2u32, 4] {
        let m = build_upsilon(k, Kernel::ZetaPrimeOverZeta, 1).unwrap();
        assert!((m.eval(1e-12) - m.constant).abs() < 1e-10);
        assert!(m.upsilon(1e-300).abs() < 1e-290);
    }
}

#[test]
fn model_build_rejections() {
    assert!(build_upsilon(1, Kernel::ZetaPrimeOverZeta, 1).is_err());
    assert!(build_upsilon(3, Kernel::ZetaPrimeOverZeta, 5).is_err());
    assert!(build_upsilon(3, Kernel::Zeta, 1).is_err());
    assert!(build_upsilon_with(3, Kernel::ZetaPrimeOverZeta, 1, 0.25, 48).is_err());
}

#[test]
fn fit_recovers_residue_coefficients() {
    let xs = log_grid(1e-6, 1e-4, 25);
    let plan = TruncationPlan::new(10_000_000);
    for (k, poly_want) in [(2u32, vec![1.0]), (3, vec![-0.1732474, 1.5])] {
        let vals = eval_series_batch(&SeriesSpec::mu_log(k), &xs, &plan).unwrap();
        let samples: Vec<(f64, f64)> = vals.iter().map(|v| (v.x, v.value)).collect();
        let fit = fit_upsilon(&samples, k, FitBasis::Standard).unwrap();
        assert_eq!(fit.method, ModelMethod::Fit);
        let c_want = constant_c(k, Kernel::ZetaPrimeOverZeta).unwrap();
        assert!((fit.constant - c_want).abs() < 1e-7, "k={k}");
        for (e, want) in poly_want.iter().enumerate() {
            let got = poly(&fit, e as u32 + 1).0;
            assert!((got - want).abs() <= 0.01 * want.abs(), "k={k} e={} {got}", e + 1);
        }
        let scale = poly_want.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        assert!(fit.h_dot().abs() <= 0.05 * scale);
    }
}

#[test]
fn fit_rejects_thin_grids() {
    let xs = log_grid(1e-4, 5e-4, 30);
    let s: Vec<(f64, f64)> = xs.iter().map(|&x| (x, x)).collect();
    assert!(matches!(fit_upsilon(&s, 2, FitBasis::Standard), Err(Error::Fit(_)) | Err(Error::InvalidArgument(_))));
    let xs = log_grid(1e-6, 1e-4, 5);
    let s: Vec<(f64, f64)> = xs.iter().map(|&x| (x, x)).collect();
    assert!(fit_upsilon(&s, 3, FitBasis::Standard).is_err());
}

#[test]
fn residual_exponent_on_synthetic_data() {
    let model = build_upsilon(3, Kernel::ZetaPrimeOverZeta, 2).unwrap();
    let xs = log_grid(1e-4, 1e-1, 60);
    let series: Vec<f64> = xs.iter().map(|&x| model.eval(x) + 0.3 * x.powf(2.5)).collect();
    let tails = vec![1e-20; xs.len()];
    let r = residual_exponent(&xs, &series, &tails, &model).unwrap();
    assert!((r.exponent - 2.5).abs() < 1e-6, "{}", r.exponent);
    assert!(r.exponent_ci < 1e-6);
    assert!((r.intercept - 0.3f64.ln()).abs() < 1e-5);

    let exact: Vec<f64> = xs.iter().map(|&x| model.eval(x)).collect();
    assert!(matches!(residual_exponent(&xs, &exact, &tails, &model), Err(Error::Fit(_))));
    let tiny: Vec<f64> = xs.iter().map(|&x| model.eval(x) + 1e-12).collect();
    let wide = vec![1e-9; xs.len()];
    assert!(matches!(
        residual_exponent(&xs, &tiny, &wide, &model),
        Err(Error::InsufficientPrecision(_))
    ));
    assert!(matches!(
        residual_exponent(&xs[..5], &series[..5], &tails[..5], &model),
        Err(Error::InvalidArgument(_))
    ));
}

#[test]
fn envelope_needs_three_bins() {
    let xs = log_grid(0.01, 0.02, 20);
    let r: Vec<f64> = xs.iter().map(|x| x * x).collect();
    assert!(envelope_fit(&xs, &r).is_err());
}
