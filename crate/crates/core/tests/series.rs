use std::f64::consts::PI;

use diophantine_core::exec::ExecMode;
use diophantine_core::series::{
    eval_f_complex, eval_f_complex_batch, eval_fourier_rhs, eval_series, eval_series_batch,
    f_constant, mu_log_anchor, Coefficient, SeriesSpec, TruncationPlan,
};
use diophantine_core::Complex64;
use rand::{rngs::StdRng, Rng, SeedableRng};

fn identity_22(x: f64) -> f64 {
    (2.0 * PI * x).cos() / (PI * PI) + 1.0 / (2.0 * PI * PI)
}

#[test]
fn mu_log_at_integer_is_the_anchor() {
    let v = eval_series(&SeriesSpec::mu_log(2), 1.0, &TruncationPlan::new(10_000_000)).unwrap();
    let anchor = mu_log_anchor(2).unwrap();
    assert!((anchor + 0.0577491224503).abs() < 1e-11);
    assert!((v.value - anchor).abs() <= v.tail_bound + 1e-10, "{} {}", v.value, anchor);
}

#[test]
fn odd_order_is_antisymmetric() {
    let plan = TruncationPlan::new(1_000_000);
    let spec = SeriesSpec::mu_log(3);
    let a = eval_series(&spec, 0.37, &plan).unwrap();
    let b = eval_series(&spec, 0.63, &plan).unwrap();
    assert!((a.value + b.value).abs() <= 2.0 * a.tail_bound + 1e-14);
}

#[test]
fn squared_mu_series_matches_inversion() {
    let spec = SeriesSpec::squared(Coefficient::Mu);
    let plan = TruncationPlan::new(2_000_000);
    let xs: Vec<f64> = (0..20).map(|i| i as f64 / 20.0 + 0.013).collect();
    for v in eval_series_batch(&spec, &xs, &plan).unwrap() {
        let want = identity_22(v.x);
        assert!((v.value - want).abs() <= 1e-6 + v.tail_bound, "x={} {} {}", v.x, v.value, want);
    }
}

#[test]
fn squared_mu_square_at_zero() {
    let spec = SeriesSpec::squared(Coefficient::MuSquare);
    let v = eval_series(&spec, 0.0, &TruncationPlan::new(1_000_000)).unwrap();
    // B̄_1(0)² = 1/4 times Σμ²/n² = ζ(2)/ζ(4)
    assert!((v.value - 0.3799544).abs() < 1e-6 + v.tail_bound);
    assert!((3.0 * f_constant() - v.value).abs() < 1e-6);
}

#[test]
fn lambda_weights_give_log_derivative() {
    let spec = SeriesSpec::standard(Coefficient::Lambda, 2);
    let v = eval_series(&spec, 0.0, &TruncationPlan::new(1_000_000)).unwrap();
    let sum = v.value * 6.0;
    assert!((sum - 0.5699609930945).abs() <= 6.0 * v.tail_bound);
    assert!((sum - 0.5699609930945).abs() < 1e-4);
}

#[test]
fn two_omega_sum_at_zero() {
    let v = eval_fourier_rhs(0.0, &TruncationPlan::new(1_000_000)).unwrap();
    assert!((v.sum.re - 2.5).abs() < 1e-4);
    assert!((v.sum.re - 2.5).abs() <= v.tail_bound);
    let h = eval_fourier_rhs(0.5, &TruncationPlan::new(100_000)).unwrap();
    assert!(h.sum.im.abs() <= h.tail_bound);
}

#[test]
fn f_on_the_real_line_matches_the_squared_series() {
    let plan = TruncationPlan::new(1_000_000);
    let x = 0.1;
    let f = eval_f_complex(Complex64::new(x, 0.0), &plan).unwrap();
    let s = eval_series(&SeriesSpec::squared(Coefficient::MuSquare), x, &plan).unwrap();
    assert!((f.value.re - s.value).abs() <= f.tail_bound + s.tail_bound, "{} {}", f.value, s.value);
}

#[test]
fn f_is_periodic_and_tends_to_its_constant() {
    let mut rng = StdRng::seed_from_u64(7);
    let plan = TruncationPlan::new(20_000);
    let zs: Vec<Complex64> = (0..100)
        .map(|_| Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(0.0..2.0)))
        .collect();
    let shifted: Vec<Complex64> = zs.iter().map(|z| z + 1.0).collect();
    let a = eval_f_complex_batch(&zs, &plan).unwrap();
    let b = eval_f_complex_batch(&shifted, &plan).unwrap();
    for (u, v) in a.iter().zip(&b) {
        assert!((u.value - v.value).norm() < 1e-10, "{} {}", u.z, u.value - v.value);
    }
    let far = eval_f_complex(Complex64::new(0.3, 20.0), &plan).unwrap();
    assert!((far.value.re - 0.1266515).abs() < 1e-7);
}

#[test]
fn worker_count_does_not_change_bits() {
    let spec = SeriesSpec::mu_log(3);
    let xs = [0.011, 0.05, 0.3];
    let base = TruncationPlan::new(300_000).with_chunk(4096);
    let runs: Vec<Vec<u64>> = [(Some(1), ExecMode::Parallel), (Some(2), ExecMode::Parallel), (Some(8), ExecMode::Parallel), (None, ExecMode::Sequential)]
        .iter()
        .map(|&(w, mode)| {
            eval_series_batch(&spec, &xs, &base.with_workers(w).with_mode(mode))
                .unwrap()
                .iter()
                .map(|v| v.value.to_bits())
                .collect()
        })
        .collect();
    for r in &runs[1..] {
        assert_eq!(r, &runs[0]);
    }
}

#[test]
fn tail_bounds_are_honest() {
    let mut rng = StdRng::seed_from_u64(11);
    let xs: Vec<f64> = (0..100).map(|_| rng.random_range(0.0..1.0)).collect();
    let specs = [
        SeriesSpec::mu_log(2),
        SeriesSpec::mu_log(3),
        SeriesSpec::mu_mu_log(2),
        SeriesSpec::standard(Coefficient::Lambda, 3),
        SeriesSpec::standard(Coefficient::Mu, 2),
        SeriesSpec::squared(Coefficient::Mu),
        SeriesSpec::squared(Coefficient::MuSquare),
    ];
    let n = 2_000;
    for spec in specs {
        let short = eval_series_batch(&spec, &xs, &TruncationPlan::new(n)).unwrap();
        let long = eval_series_batch(&spec, &xs, &TruncationPlan::new(4 * n)).unwrap();
        for (a, b) in short.iter().zip(&long) {
            assert!((a.value - b.value).abs() <= a.tail_bound, "{spec:?} x={}", a.x);
        }
    }
}

#[test]
fn chunk_size_only_moves_rounding() {
    let spec = SeriesSpec::mu_log(2);
    let a = eval_series(&spec, 0.2, &TruncationPlan::new(100_000).with_chunk(1000)).unwrap();
    let b = eval_series(&spec, 0.2, &TruncationPlan::new(100_000).with_chunk(65_536)).unwrap();
    assert!((a.value - b.value).abs() < 1e-14);
}
