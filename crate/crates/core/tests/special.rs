use std::f64::consts::PI;

use diophantine_core::special::{
    bernoulli_f64, bernoulli_number, chi, gamma_complex, zeta, zeta_log_deriv,
    zeta_with_derivatives, ZetaOrder,
};
use diophantine_core::{Complex64, Error};
use num_rational::BigRational;
use rand::{rngs::StdRng, Rng, SeedableRng};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn bernoulli_examples() {
    assert_eq!(bernoulli_number(0).unwrap(), BigRational::from_integer(1.into()));
    assert_eq!(
        bernoulli_number(1).unwrap(),
        BigRational::new((-1).into(), 2.into())
    );
    assert_eq!(
        bernoulli_number(4).unwrap(),
        BigRational::new((-1).into(), 30.into())
    );
    assert!(bernoulli_number(65).is_err());
}

#[test]
fn zeta_examples() {
    assert!((zeta(c(2.0, 0.0)).unwrap().re - PI * PI / 6.0).abs() < 1e-13);
    assert!((zeta(c(0.0, 0.0)).unwrap().re + 0.5).abs() < 1e-13);
    assert!(zeta(c(-2.0, 0.0)).unwrap().norm() < 1e-13);
    let d = zeta_with_derivatives(c(2.0, 0.0), ZetaOrder::First).unwrap();
    assert!((d.re + 0.937548254315844).abs() < 1e-12);
    assert!(zeta(c(0.5, 14.134725141734694)).unwrap().norm() < 1e-8);
    assert!(matches!(zeta(c(1.0, 0.0)), Err(Error::Pole(_))));
    assert!(matches!(zeta(c(0.5, 600.0)), Err(Error::UnsupportedRange(_))));
}

#[test]
fn log_derivative_examples() {
    assert!((zeta_log_deriv(c(2.0, 0.0)).unwrap().re + 0.5699609930945).abs() < 1e-11);
    assert!((zeta_log_deriv(c(0.0, 0.0)).unwrap().re - (2.0 * PI).ln()).abs() < 1e-11);
    for j in 2..7 {
        let h = 10f64.powi(-j);
        let v = zeta_log_deriv(c(1.0 + h, 0.0)).unwrap() * h;
        assert!((v.re + 1.0).abs() < 2.0 * h, "j={j}");
    }
    assert!(matches!(
        zeta_log_deriv(c(0.5, 14.134725141734694)),
        Err(Error::NearSingularity(_))
    ));
}

#[test]
fn gamma_examples() {
    assert!((gamma_complex(c(1.0, 0.0)).unwrap().re - 1.0).abs() < 1e-14);
    assert!((gamma_complex(c(5.0, 0.0)).unwrap().re - 24.0).abs() < 1e-12);
    assert!((gamma_complex(c(0.5, 0.0)).unwrap().re - PI.sqrt()).abs() < 1e-13);
    assert!((gamma_complex(c(-1.5, 0.0)).unwrap().re - 4.0 * PI.sqrt() / 3.0).abs() < 1e-13);
    assert!(matches!(gamma_complex(c(-3.0, 0.0)), Err(Error::Pole(_))));
}

#[test]
fn functional_equation() {
    let mut rng = StdRng::seed_from_u64(1);
    for _ in 0..100 {
        let s = c(rng.random_range(0.01..0.99), rng.random_range(-50.0..50.0));
        let lhs = zeta(s).unwrap();
        let rhs = chi(s).unwrap() * zeta(1.0 - s).unwrap();
        assert!((lhs - rhs).norm() < 1e-9 * (1.0 + lhs.norm()), "s={s}");
    }
}

#[test]
fn derivative_consistency() {
    let mut rng = StdRng::seed_from_u64(2);
    let h = 1e-5;
    for _ in 0..50 {
        let s = c(rng.random_range(-3.0..4.0), rng.random_range(-40.0..40.0));
        if (s - 1.0).norm() < 0.2 {
            continue;
        }
        let d = zeta_with_derivatives(s, ZetaOrder::First).unwrap();
        let fd = (zeta(s + h).unwrap() - zeta(s - h).unwrap()) / (2.0 * h);
        assert!((d - fd).norm() < 1e-6 * (1.0 + d.norm()), "s={s}: {d} vs {fd}");
        let d2 = zeta_with_derivatives(s, ZetaOrder::Second).unwrap();
        let fd2 = (zeta_with_derivatives(s + h, ZetaOrder::First).unwrap()
            - zeta_with_derivatives(s - h, ZetaOrder::First).unwrap())
            / (2.0 * h);
        assert!((d2 - fd2).norm() < 1e-6 * (1.0 + d2.norm()), "s={s}");
    }
}

#[test]
fn gamma_recurrence() {
    let mut rng = StdRng::seed_from_u64(3);
    for _ in 0..100 {
        let s = c(rng.random_range(-8.0..8.0), rng.random_range(-30.0..30.0));
        if s.im.abs() < 0.05 && (s.re - s.re.round()).abs() < 0.05 && s.re < 0.5 {
            continue;
        }
        let a = gamma_complex(s + 1.0).unwrap();
        let b = s * gamma_complex(s).unwrap();
        assert!((a - b).norm() <= 1e-10 * a.norm(), "s={s}");
    }
}

#[test]
fn bernoulli_zeta_bridge() {
    let mut fact = 1.0;
    for m in 1..=6u32 {
        let two_m = 2 * m;
        fact *= ((two_m - 1) * two_m) as f64;
        let want = (-1f64).powi(m as i32 + 1) * (2.0 * PI).powi(two_m as i32)
            * bernoulli_f64(two_m as usize).unwrap()
            / (2.0 * fact);
        let got = zeta(c(two_m as f64, 0.0)).unwrap().re;
        assert!((got - want).abs() < 1e-12, "m={m}");
    }
}
