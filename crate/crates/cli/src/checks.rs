//! Built-in consistency checks for the `check` command.

use hurwitz_core::integral::{phi_auto, phi_integral};
use hurwitz_core::kernels::{identity_lhs_rhs, Identity};
use hurwitz_core::oracles::{dirichlet_oracle, negative_integer_oracle};
use hurwitz_core::series::phi_series;
use hurwitz_core::sums::{s_n_direct, s_n_shifted, stirling_generalized};
use hurwitz_core::{Error, EvalConfig, MpComplex, ShiftParameter};
use rug::Float;

use crate::report::{Cell, Report, Status};
use crate::{CheckArgs, Suite};

struct Outcome {
    suite: &'static str,
    name: String,
    pass: bool,
    detail: String,
}

fn outcome(suite: &'static str, name: String, pass: bool, detail: String) -> Outcome {
    Outcome { suite, name, pass, detail }
}

fn point(p: u32, re: f64, im: f64) -> MpComplex {
    MpComplex::from_f64(p, re, im)
}

fn shift(p: u32, a: &str) -> ShiftParameter {
    ShiftParameter::parse(p, a).expect("built-in shift is valid")
}

fn identities() -> Vec<Outcome> {
    let mut out = Vec::new();
    for which in [Identity::Reciprocal, Identity::Shifted] {
        for t in ["0.01", "0.1", "1", "5", "20"] {
            let tf = Float::with_val(200, Float::parse(t).unwrap());
            for n in [10u64, 100, 1000] {
                let name = format!("{which:?} t={t} N={n}");
                match identity_lhs_rhs(which, &tf, n) {
                    Ok(c) => {
                        let d = Float::with_val(64, &c.lhs - &c.partial_rhs).abs();
                        let detail = format!("|lhs-rhs| {:.3e} <= {:.3e}", d.to_f64(), c.tail_bound.to_f64());
                        out.push(outcome("identities", name, c.holds(), detail));
                    }
                    Err(e) => out.push(outcome("identities", name, false, e.to_string())),
                }
            }
        }
    }
    out
}

fn sums(cfg: &EvalConfig) -> Vec<Outcome> {
    let p = cfg.precision_bits;
    let mut out = Vec::new();
    for (re, im) in [(2.0, 0.0), (0.5, 3.0), (-1.5, 0.0), (-3.0, 2.0)] {
        for a in ["0.25", "0.5", "1"] {
            let s = point(p, re, im);
            let sa = shift(p, a);
            let mut worst = 0f64;
            let mut pass = true;
            for n in [1u64, 2, 5, 10, 50, 100] {
                match (s_n_direct(n, &s, &sa, cfg), s_n_shifted(n, &s, &sa, cfg)) {
                    (Ok(x), Ok(y)) => {
                        let d = x.value.dist_f64(&y.value);
                        let allowed = x.err.to_f64() + y.err.to_f64();
                        worst = worst.max(d / allowed.max(f64::MIN_POSITIVE));
                        pass &= d <= allowed;
                    }
                    _ => pass = false,
                }
            }
            let detail = format!("max |direct-shifted|/err {worst:.3}");
            out.push(outcome("sums", format!("direct=shifted s={re}{im:+}i a={a}"), pass, detail));
        }
    }
    for k in 0..=8u64 {
        let s = point(p, -(k as f64), 0.0);
        let mut pass = true;
        for a in ["0.25", "0.5", "1"] {
            for n in k + 2..=k + 12 {
                pass &= s_n_direct(n, &s, &shift(p, a), cfg).map(|v| v.value.is_zero()).unwrap_or(false);
            }
        }
        out.push(outcome("sums", format!("vanishing k={k}"), pass, format!("S_n(-{k},a) = 0 for n in {}..={}", k + 2, k + 12)));
    }
    for k in 0..=8u64 {
        let s = point(p, -(k as f64), 0.0);
        let mut pass = true;
        for a in ["0.25", "0.5", "1"] {
            let sa = shift(p, a);
            for n in 1..=12u64 {
                let ok = match (stirling_generalized(n, k, &sa), s_n_direct(n, &s, &sa, cfg)) {
                    (Ok(x), Ok(y)) => y.value.dist_f64(&MpComplex::from_real(x)) <= y.err.to_f64(),
                    _ => false,
                };
                pass &= ok;
            }
        }
        out.push(outcome("sums", format!("stirling k={k}"), pass, "n <= 12, a in {0.25, 0.5, 1}".into()));
    }
    out
}

fn agreement(cfg: &EvalConfig) -> Vec<Outcome> {
    let p = cfg.precision_bits;
    let mut out = Vec::new();
    for (re, im, a) in [(2.0, 0.0, "1"), (3.0, 0.0, "0.5"), (1.5, 1.0, "0.75"), (4.0, -2.0, "0.3")] {
        let s = point(p, re, im);
        let sa = shift(p, a);
        let name = format!("integral=oracle s={re}{im:+}i a={a}");
        match (phi_integral(&s, &sa, cfg), dirichlet_oracle(&s, &sa, cfg)) {
            (Ok(x), Ok(o)) => {
                let z = x.zeta.clone().unwrap();
                let d = z.dist_f64(&o.value);
                let allowed = x.zeta_err_estimate().unwrap().to_f64() + o.err.to_f64();
                out.push(outcome("agreement", name, d <= allowed, format!("|diff| {d:.3e} <= {allowed:.3e}")));
            }
            (x, o) => {
                let msg = x.err().map(|e| e.to_string()).or(o.err().map(|e| e.to_string())).unwrap_or_default();
                out.push(outcome("agreement", name, false, msg));
            }
        }
    }
    let series_cfg = EvalConfig::with_digits(20).with_target(1e-8).with_series_work_terms(512);
    let int_cfg = EvalConfig::with_digits(20);
    for (re, im, a) in [(2.0, 0.0, "1"), (1.5, 0.0, "0.75"), (0.5, 3.0, "1")] {
        let s = point(p, re, im);
        let sa = shift(p, a);
        let name = format!("series=integral s={re}{im:+}i a={a}");
        let series = match phi_series(&s, &sa, &series_cfg) {
            Ok(v) => Ok(v),
            Err(Error::Accuracy { best, .. }) => Ok(*best),
            Err(e) => Err(e),
        };
        match (series, phi_integral(&s, &sa, &int_cfg)) {
            (Ok(x), Ok(y)) => {
                let d = x.phi.dist_f64(&y.phi);
                let allowed = x.err_estimate.to_f64() + y.err_estimate.to_f64();
                out.push(outcome("agreement", name, d <= allowed, format!("|diff| {d:.3e} <= {allowed:.3e}")));
            }
            (x, y) => {
                let msg = x.err().map(|e| e.to_string()).or(y.err().map(|e| e.to_string())).unwrap_or_default();
                out.push(outcome("agreement", name, false, msg));
            }
        }
    }
    for m in [0u32, 1, 2] {
        for a in ["0.3", "1"] {
            let s = point(p, -f64::from(m), 0.0);
            let sa = shift(p, a);
            let name = format!("continued=bernoulli s=-{m} a={a}");
            match phi_auto(&s, &sa, cfg) {
                Ok(x) => {
                    let exact = MpComplex::from_real(negative_integer_oracle(m, &sa).unwrap());
                    let d = x.zeta.clone().unwrap().dist_f64(&exact);
                    let allowed = x.zeta_err_estimate().unwrap().to_f64() + exact.abs_f64() * 2f64.powi(1 - p as i32);
                    out.push(outcome("agreement", name, d <= allowed, format!("|diff| {d:.3e} <= {allowed:.3e}")));
                }
                Err(e) => out.push(outcome("agreement", name, false, e.to_string())),
            }
        }
    }
    out
}

fn suite_name(s: Suite) -> &'static str {
    match s {
        Suite::Identities => "identities",
        Suite::Sums => "sums",
        Suite::Agreement => "agreement",
        Suite::All => "all",
    }
}

pub fn run(args: &CheckArgs) -> Report {
    let digits = args.common.digits;
    let mut r = Report::new("check", vec!["suite", "check", "pass", "detail"]);
    r.input("suite", suite_name(args.suite));
    r.input("digits", digits);
    if digits == 0 {
        r.fail(Status::Usage, "--digits must be at least 1");
        return r;
    }
    let cfg = EvalConfig::with_digits(digits);
    let mut results = Vec::new();
    if matches!(args.suite, Suite::Identities | Suite::All) {
        results.extend(identities());
    }
    if matches!(args.suite, Suite::Sums | Suite::All) {
        results.extend(sums(&cfg));
    }
    if matches!(args.suite, Suite::Agreement | Suite::All) {
        results.extend(agreement(&cfg));
    }
    let failed = results.iter().filter(|o| !o.pass).count();
    for o in results {
        r.push(vec![Cell::Text(o.suite.into()), Cell::Text(o.name), Cell::Bool(o.pass), Cell::Text(o.detail)]);
    }
    if failed > 0 {
        r.fail(Status::Accuracy, format!("{failed} checks failed"));
    }
    r
}
