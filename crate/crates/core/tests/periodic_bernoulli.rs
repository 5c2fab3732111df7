use diophantine_core::periodic_bernoulli::{
    fourier_tail_bound, frac, pb_closed, pb_closed_eval, pb_fourier, BernoulliPolynomial, PbMethod,
};
use diophantine_core::Error;
use proptest::prelude::*;

#[test]
fn closed_form_examples() {
    assert!((pb_closed(1, 0.25).unwrap() + 0.25).abs() < 1e-15);
    // closed form takes {0} = 0, so the jump sits at −1/2
    assert_eq!(pb_closed(1, 0.0).unwrap(), -0.5);
    assert_eq!(pb_closed(1, 3.0).unwrap(), -0.5);
    assert!((pb_closed(2, 0.0).unwrap() - 1.0 / 6.0).abs() < 1e-15);
    assert!((pb_closed(2, 0.5).unwrap() + 1.0 / 12.0).abs() < 1e-15);
    assert!((pb_closed(3, 0.25).unwrap() - 3.0 / 64.0).abs() < 1e-15);
    assert!((pb_closed(2, -0.25).unwrap() - pb_closed(2, 0.75).unwrap()).abs() < 1e-15);
    assert!(pb_closed(0, 0.3).is_err());
    assert!(pb_closed(33, 0.3).is_err());
    assert!(pb_closed(2, f64::NAN).is_err());
}

#[test]
fn polynomial_matches_closed_form_on_unit_interval() {
    for m in 1..=8 {
        let p = BernoulliPolynomial::new(m).unwrap();
        for i in 1..100 {
            let t = i as f64 / 100.0;
            assert!((p.eval(t) - pb_closed(m, t).unwrap()).abs() < 1e-13);
        }
    }
}

#[test]
fn fourier_agrees_with_closed_form() {
    for m in 2..=6 {
        for &x in &[0.1, 0.37, 0.5, 0.9, 2.25] {
            let f = pb_fourier(m, x, 100_000).unwrap();
            let c = pb_closed_eval(m, x).unwrap();
            assert_eq!(f.method, PbMethod::Fourier);
            assert_eq!(c.method, PbMethod::ClosedForm);
            let bound = f.tail_bound.unwrap();
            assert!((f.value - c.value).abs() <= bound + 1e-14, "m={m} x={x}");
        }
    }
    // m = 1 converges conditionally; away from integers it still settles
    let f = pb_fourier(1, 0.3, 1_000_000).unwrap();
    assert!((f.value - pb_closed(1, 0.3).unwrap()).abs() < 1e-5);
    assert!(matches!(pb_fourier(1, 1.0 + 1e-9, 1000), Err(Error::Domain(_))));
}

#[test]
fn tail_bound_shrinks() {
    let a = fourier_tail_bound(3, 0.2, 100);
    let b = fourier_tail_bound(3, 0.2, 1000);
    assert!(b < a && b > 0.0);
}

#[test]
fn sup_bound_holds() {
    for m in 1..=10 {
        let p = BernoulliPolynomial::new(m).unwrap();
        let sup = (0..=2000)
            .map(|i| p.eval_frac(i as f64 / 2000.0).abs())
            .fold(0.0, f64::max);
        assert!(sup <= p.sup_bound() * (1.0 + 1e-12), "m={m}");
    }
}

proptest! {
    #[test]
    fn periodic(m in 1u32..12, x in -50.0f64..50.0, shift in -20i32..20) {
        let a = pb_closed(m, x).unwrap();
        let b = pb_closed(m, x + shift as f64).unwrap();
        prop_assert!((a - b).abs() < 1e-9 * (1.0 + a.abs()));
    }

    #[test]
    fn parity(m in 1u32..12, x in 0.001f64..0.999) {
        let a = pb_closed(m, x).unwrap();
        let b = pb_closed(m, -x).unwrap();
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!((a - sign * b).abs() < 1e-12);
    }

    #[test]
    fn frac_in_unit_interval(x in -1e6f64..1e6) {
        let f = frac(x);
        prop_assert!((0.0..1.0).contains(&f));
    }
}
