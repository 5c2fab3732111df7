use diophantine_core::asymptotic::{Kernel, KernelSpec};
use diophantine_core::mellin::{line_integral, line_integral_batch, LineIntegralSpec};
use diophantine_core::periodic_bernoulli::pb_closed;
use diophantine_core::{Complex64, Error};

#[test]
fn zeta_kernel_recovers_bernoulli() {
    let spec = LineIntegralSpec::new(3, 500.0, Kernel::Zeta);
    let xs = [0.2, 0.3, 0.7];
    for v in line_integral_batch(&spec, &xs).unwrap() {
        let want = pb_closed(3, v.x).unwrap();
        assert!((v.value.re - want).abs() < 5e-6, "x={}: {} vs {want}", v.x, v.value);
        assert!(v.value.im.abs() < 5e-6);
    }
    let one = line_integral(&LineIntegralSpec::new(2, 500.0, Kernel::Zeta), 0.3).unwrap();
    assert!((one.value.re - pb_closed(2, 0.3).unwrap()).abs() < 5e-6);
    let scaled = one.scaled() / Complex64::new(0.0, 2.0 * std::f64::consts::PI).powu(2);
    assert!((scaled - one.value).norm() < 1e-15);
}

#[test]
fn refinement_is_stable() {
    let mut spec = LineIntegralSpec::new(3, 250.0, Kernel::Zeta);
    spec.steps = 100_000;
    let coarse = line_integral(&spec, 0.2).unwrap().value;
    spec.steps = 200_000;
    let fine = line_integral(&spec, 0.2).unwrap().value;
    assert!((coarse - fine).norm() < 1e-9);
    spec.t_max = 500.0;
    let tall = line_integral(&spec, 0.2).unwrap().value;
    let want = pb_closed(3, 0.2).unwrap();
    assert!((tall.re - want).abs() < (fine.re - want).abs());
}

#[test]
fn integrand_stays_bounded_on_the_line() {
    // |F(1/2 + it)| does not decay along the line, so only check it stays the same size
    let spec = KernelSpec::new(2, Kernel::Zeta).unwrap();
    let a = spec.integrand(Complex64::new(0.5, 100.0)).unwrap().norm();
    let b = spec.integrand(Complex64::new(0.5, 200.0)).unwrap().norm();
    assert!(a > 0.0 && b / a < 2.0 && b / a > 0.5, "{a} {b}");
}

#[test]
fn rejects_bad_lines() {
    let mut spec = LineIntegralSpec::new(2, 100.0, Kernel::Zeta);
    spec.c = 1.2;
    assert!(matches!(line_integral(&spec, 0.3), Err(Error::InvalidArgument(_))));
    let mut spec = LineIntegralSpec::new(2, 600.0, Kernel::Zeta);
    assert!(line_integral(&spec, 0.3).is_err());
    spec.t_max = 100.0;
    spec.steps = 1001;
    assert!(line_integral(&spec, 0.3).is_err());
    let mut spec = LineIntegralSpec::new(1, 100.0, Kernel::Zeta);
    spec.c = 0.0005;
    assert!(matches!(line_integral(&spec, 0.3), Err(Error::Configuration(_))));
}
