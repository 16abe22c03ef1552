use hurwitz_core::integral::{phi_continued, phi_integral};
use hurwitz_core::laurent::{laurent_eval, laurent_expand};
use hurwitz_core::oracles::dirichlet_oracle;
use hurwitz_core::sums::{s_n_asymptotic, s_n_direct, s_n_shifted};
use hurwitz_core::{Error, EvalConfig, EvalResult, MpComplex, ShiftParameter};
use proptest::prelude::*;

fn cx(p: u32, re: f64, im: f64) -> MpComplex {
    MpComplex::from_f64(p, re, im)
}

fn sp(a: f64) -> ShiftParameter {
    ShiftParameter::from_f64(128, a).unwrap()
}

fn best(r: hurwitz_core::Result<EvalResult>) -> EvalResult {
    match r {
        Ok(v) => v,
        Err(Error::Accuracy { best, .. }) => *best,
        Err(e) => panic!("unexpected error {e}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn continued_overlaps_basic_integral(
        re in 0.05f64..3.0,
        im in -5.0f64..5.0,
        a in 0.05f64..=1.0,
        k in 1i32..=3,
    ) {
        let cfg = EvalConfig::with_digits(20);
        let s = cx(cfg.precision_bits, re, im);
        let x = phi_integral(&s, &sp(a), &cfg).unwrap();
        let y = phi_continued(&s, &sp(a), k, &cfg).unwrap();
        let d = x.phi.dist_f64(&y.phi);
        prop_assert!(d <= x.err_estimate.to_f64() + y.err_estimate.to_f64(), "{d}");
    }

    #[test]
    fn doubling_precision_stays_within_reported_error(
        re in 0.1f64..4.0,
        im in -8.0f64..8.0,
        a in 0.05f64..=1.0,
    ) {
        let low = EvalConfig::with_digits(20);
        let high = EvalConfig::with_digits(40);
        let s = cx(high.precision_bits, re, im);
        let x = phi_integral(&s, &sp(a), &low).unwrap();
        let y = phi_integral(&s, &sp(a), &high).unwrap();
        prop_assert!(x.phi.dist_f64(&y.phi) < x.err_estimate.to_f64());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn direct_and_shifted_sums_agree(
        n in 1u64..=200,
        re in -7.0f64..7.0,
        im in -7.0f64..7.0,
        tenth in 1u32..=10,
    ) {
        prop_assume!(re.hypot(im) <= 10.0);
        let cfg = EvalConfig::with_digits(20);
        let s = cx(cfg.precision_bits, re, im);
        let a = ShiftParameter::parse(128, &format!("0.{tenth}")).unwrap_or_else(|_| sp(1.0));
        let x = s_n_direct(n, &s, &a, &cfg).unwrap();
        let y = s_n_shifted(n, &s, &a, &cfg).unwrap();
        prop_assert!(x.value.dist_f64(&y.value) <= x.err.to_f64() + y.err.to_f64());
    }
}

#[test]
fn zeta_matches_dirichlet_oracle() {
    let cfg = EvalConfig::with_digits(30);
    let p = cfg.precision_bits;
    for (re, im) in [(1.5, 0.0), (2.0, 3.0), (3.5, -1.0), (6.0, 10.0)] {
        for a in [0.25, 0.5, 0.75, 1.0] {
            let s = cx(p, re, im);
            let x = phi_integral(&s, &sp(a), &cfg).unwrap();
            let o = dirichlet_oracle(&s, &sp(a), &cfg).unwrap();
            let d = x.zeta.clone().unwrap().dist_f64(&o.value);
            let allowed = x.zeta_err_estimate().unwrap().to_f64().max(o.err.to_f64());
            assert!(d <= allowed, "s = {re}{im:+}i, a = {a}: {d:e} > {allowed:e}");
        }
    }
}

/// The Taylor remainder after order 12 is estimated from the coefficients
/// 13..=24 of a longer expansion and added to the coefficient errors.
#[test]
fn laurent_reconstruction_within_combined_error() {
    let cfg = EvalConfig::with_digits(25);
    let p = cfg.precision_bits;
    for (re, im) in [(1.0, 0.0), (2.0, 0.0), (1.0, 1.0)] {
        for a in [0.5, 1.0] {
            let s0 = cx(p, re, im);
            let exp = laurent_expand(&s0, &sp(a), 12, &cfg).unwrap();
            let long = laurent_expand(&s0, &sp(a), 24, &cfg).unwrap();
            for r in [0.25f64, 0.5] {
                let coeff_err: f64 = exp.gamma_errs.iter().enumerate().map(|(n, e)| e.to_f64() * r.powi(n as i32)).sum();
                let remainder: f64 = (13..=24).map(|n| long.gamma_coeffs[n].abs_f64() * r.powi(n as i32)).sum();
                for j in 0..8 {
                    let angle = std::f64::consts::PI * j as f64 / 4.0;
                    let s = cx(p, re + r * angle.cos(), im + r * angle.sin());
                    let direct = phi_integral(&s, &sp(a), &cfg).unwrap();
                    let d = laurent_eval(&exp, &s).dist_f64(&direct.phi);
                    let combined = coeff_err + remainder + direct.err_estimate.to_f64();
                    assert!(d <= 10.0 * combined, "s0 = {re}{im:+}i, a = {a}, r = {r}: {d:e} > 10 * {combined:e}");
                }
            }
        }
    }
}

#[test]
fn more_quadrature_levels_shrink_the_error() {
    let p = EvalConfig::with_digits(80).precision_bits;
    let s = cx(p, 0.7, 4.0);
    let mut last = f64::INFINITY;
    for levels in 3..=7 {
        let cfg = EvalConfig::with_digits(80).with_quad_levels(levels);
        let r = best(phi_integral(&s, &sp(0.4), &cfg));
        let err = r.err_estimate.to_f64();
        assert!(err <= last, "levels {levels}: {err:e} > {last:e}");
        last = err;
    }
}

#[test]
fn a_one_sums_follow_the_large_n_estimate() {
    let cfg = EvalConfig::with_digits(15);
    let p = cfg.precision_bits;
    for (re, im) in [(1.5, 0.0), (2.5, 0.0), (2.0, 1.0)] {
        let s = cx(p, re, im);
        for n in [1_000u64, 3_000] {
            let v = s_n_direct(n, &s, &sp(1.0), &cfg).unwrap();
            let est = s_n_asymptotic(n, &s, &sp(1.0)).unwrap();
            let ratio = v.value.abs_f64() / est.abs_f64();
            assert!((0.3..=3.0).contains(&ratio), "s = {re}{im:+}i, n = {n}: {ratio}");
        }
    }
}
