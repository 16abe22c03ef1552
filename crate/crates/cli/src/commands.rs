use hurwitz_core::integral::{continuation_order, phi_auto, phi_continued, phi_integral, phi_shifted_integral};
use hurwitz_core::laurent::{laurent_expand, to_berndt};
use hurwitz_core::mp::parse_real;
use hurwitz_core::oracles::{dirichlet_oracle, negative_integer_oracle};
use hurwitz_core::series::{phi_series, phi_shifted_series};
use hurwitz_core::sums::{s_n_asymptotic, s_n_direct, s_n_shifted, SnTable};
use hurwitz_core::{Error, EvalConfig, EvalResult, Method, MpComplex, ShiftParameter};
use rug::Float;

use crate::report::{complex_cell, err_cell, Cell, Report, Status};
use crate::{EvalArgs, LaurentArgs, MethodArg, Rows, SnArgs};

/// Largest n for which the `sn` command fills the shifted column.
const SHIFTED_COLUMN_LIMIT: u64 = 1000;

/// Largest table built by repeated differences in the `sn` command.
const TABLE_LIMIT: u64 = 2000;

/// Parses `RE` or `RE,IM`.
pub fn parse_point(prec: u32, text: &str) -> Result<MpComplex, String> {
    let (re, im) = match text.split_once(',') {
        Some((re, im)) => (re.trim(), im.trim()),
        None => (text.trim(), "0"),
    };
    let re = parse_real(prec, re).map_err(|e| e.to_string())?;
    let im = parse_real(prec, im).map_err(|e| e.to_string())?;
    Ok(MpComplex::new(re, im))
}

fn parse_inputs(prec: u32, s: &str, a: &str) -> Result<(MpComplex, ShiftParameter), String> {
    let s = parse_point(prec, s)?;
    let a = ShiftParameter::parse(prec, a).map_err(|e| e.to_string())?;
    Ok((s, a))
}

/// Classical values: Euler–Maclaurin for Re(s) > 1, Bernoulli polynomials at
/// s = 0, −1, −2, …
fn oracle_eval(s: &MpComplex, a: &ShiftParameter, cfg: &EvalConfig) -> hurwitz_core::Result<EvalResult> {
    let p = cfg.precision_bits;
    let one = MpComplex::one(p);
    let s1 = s - &one;
    let (zeta, err) = if let Some(m) = s.as_real_integer().filter(|k| *k <= 0) {
        let m = (-m).to_u32().ok_or_else(|| Error::Domain(format!("s = {s} is out of range")))?;
        let v = negative_integer_oracle(m, a)?;
        let err = Float::with_val(64, Float::i_exp(1, 1 - p as i32)) * v.clone().abs();
        (MpComplex::from_real(v), err)
    } else if *s == one {
        return Ok(EvalResult {
            s: s.clone(),
            a: a.at_prec(p),
            phi: one,
            zeta: None,
            err_estimate: Float::with_val(64, 0),
            method: Method::Oracle,
            terms_or_nodes: 0,
            caveat: None,
        });
    } else {
        let o = dirichlet_oracle(s, a, cfg)?;
        (o.value, o.err)
    };
    let phi = &s1 * &zeta;
    let err_estimate = Float::with_val(64, &err * s1.abs());
    Ok(EvalResult {
        s: s.clone(),
        a: a.at_prec(p),
        phi,
        zeta: Some(zeta),
        err_estimate,
        method: Method::Oracle,
        terms_or_nodes: 0,
        caveat: None,
    })
}

fn push_eval(r: &mut Report, res: &EvalResult, digits: u32) {
    let zeta = res.zeta.as_ref().map_or(Cell::Empty, |z| complex_cell(z, digits));
    let zeta_err = res.zeta_err_estimate().map_or(Cell::Empty, |e| err_cell(&e));
    r.push(vec![
        complex_cell(&res.s, digits),
        crate::report::real_cell(&res.a, digits),
        Cell::Text(res.method.to_string()),
        complex_cell(&res.phi, digits),
        err_cell(&res.err_estimate),
        zeta,
        zeta_err,
        Cell::Bool(res.is_pole()),
        Cell::Int(res.terms_or_nodes),
        res.caveat.clone().map_or(Cell::Empty, Cell::Text),
    ]);
}

fn method_name(m: MethodArg) -> &'static str {
    match m {
        MethodArg::Auto => "auto",
        MethodArg::Integral => "integral",
        MethodArg::Series => "series",
        MethodArg::Continued => "continued",
        MethodArg::ShiftedIntegral => "shifted-integral",
        MethodArg::ShiftedSeries => "shifted-series",
        MethodArg::Oracle => "oracle",
    }
}

pub fn eval(args: &EvalArgs) -> Report {
    let digits = args.common.digits;
    let shifted = matches!(args.method, MethodArg::ShiftedIntegral | MethodArg::ShiftedSeries);
    // the shifted methods return ζ(s,a) − a^(−s)
    let zeta_col = if shifted { "zeta_shifted" } else { "zeta" };
    let mut r = Report::new(
        "eval",
        vec!["s", "a", "method", "phi", "phi_err", zeta_col, "zeta_err", "pole", "terms_or_nodes", "caveat"],
    );
    r.input("s", &args.s);
    r.input("a", &args.a);
    r.input("method", method_name(args.method));
    r.input("digits", digits);
    if let Some(k) = args.k {
        r.input("k", k);
    }
    if let Some(n) = args.max_terms {
        r.input("max_terms", n);
    }
    if let Some(n) = args.work_terms {
        r.input("work_terms", n);
    }
    if let Some(t) = args.target {
        r.input("target", t);
    }
    if digits == 0 {
        r.fail(Status::Usage, "--digits must be at least 1");
        return r;
    }
    let mut cfg = EvalConfig::with_digits(digits);
    if let Some(t) = args.target {
        if !(t > 0.0) {
            r.fail(Status::Usage, "--target must be positive");
            return r;
        }
        cfg = cfg.with_target(t);
    }
    if let Some(n) = args.max_terms {
        cfg = cfg.with_max_terms(n);
    }
    if let Some(n) = args.work_terms {
        cfg = cfg.with_series_work_terms(n);
    }
    if args.k.is_some() && args.method != MethodArg::Continued {
        r.fail(Status::Usage, "--k applies only to --method continued");
        return r;
    }
    let (s, a) = match parse_inputs(cfg.precision_bits, &args.s, &args.a) {
        Ok(v) => v,
        Err(e) => {
            r.fail(Status::Usage, e);
            return r;
        }
    };
    let outcome = match args.method {
        MethodArg::Auto => phi_auto(&s, &a, &cfg),
        MethodArg::Integral => phi_integral(&s, &a, &cfg),
        MethodArg::Continued => {
            let k = args.k.unwrap_or_else(|| continuation_order(&s) as i32);
            phi_continued(&s, &a, k, &cfg)
        }
        MethodArg::ShiftedIntegral => phi_shifted_integral(&s, &a, &cfg),
        MethodArg::Series => phi_series(&s, &a, &cfg),
        MethodArg::ShiftedSeries => phi_shifted_series(&s, &a, &cfg),
        MethodArg::Oracle => oracle_eval(&s, &a, &cfg),
    };
    let series = matches!(args.method, MethodArg::Series | MethodArg::ShiftedSeries);
    match outcome {
        Ok(res) => push_eval(&mut r, &res, digits),
        Err(Error::Accuracy { reason, best }) => {
            push_eval(&mut r, &best, digits);
            let hint = if series {
                "; the series converges slowly, try --method integral for high accuracy or raise --target"
            } else {
                "; try fewer --digits"
            };
            r.fail(Status::Accuracy, format!("accuracy target not met: {reason}{hint}"));
        }
        Err(e @ Error::QuadratureNotConverged { .. }) => r.fail(Status::Accuracy, e.to_string()),
        Err(e) => r.fail(Status::Usage, e.to_string()),
    }
    r
}

pub fn laurent(args: &LaurentArgs) -> Report {
    let digits = args.common.digits;
    let columns = if args.berndt_normalization {
        vec!["power", "label", "coefficient", "err"]
    } else {
        vec!["n", "a_n", "c_n", "gamma_n", "err"]
    };
    let mut r = Report::new("laurent", columns);
    r.input("s0", &args.s0);
    r.input("a", &args.a);
    r.input("order", args.order);
    r.input("digits", digits);
    r.input("berndt_normalization", args.berndt_normalization);
    if digits == 0 {
        r.fail(Status::Usage, "--digits must be at least 1");
        return r;
    }
    let cfg = EvalConfig::with_digits(digits);
    let (s0, a) = match parse_inputs(cfg.precision_bits, &args.s0, &args.a) {
        Ok(v) => v,
        Err(e) => {
            r.fail(Status::Usage, e);
            return r;
        }
    };
    let exp = match laurent_expand(&s0, &a, args.order, &cfg) {
        Ok(e) => e,
        Err(e) => {
            r.fail(Status::Usage, e.to_string());
            return r;
        }
    };
    if args.berndt_normalization {
        let b = match to_berndt(&exp) {
            Ok(b) => b,
            Err(e) => {
                r.fail(Status::Usage, e.to_string());
                return r;
            }
        };
        r.push(vec![
            Cell::Int(0),
            Cell::Text("constant".into()),
            complex_cell(&b.constant, digits),
            err_cell(&exp.gamma_errs[0]),
        ]);
        for (n, c) in b.coeffs.iter().enumerate() {
            r.push(vec![
                Cell::Int(n as u64 + 1),
                Cell::Text(format!("gamma_tilde_{n}")),
                complex_cell(c, digits),
                err_cell(&exp.gamma_errs[n + 1]),
            ]);
        }
    } else {
        for n in 0..exp.gamma_coeffs.len() {
            r.push(vec![
                Cell::Int(n as u64),
                complex_cell(&exp.a_coeffs[n], digits),
                complex_cell(&exp.c_coeffs[n], digits),
                complex_cell(&exp.gamma_coeffs[n], digits),
                err_cell(&exp.gamma_errs[n]),
            ]);
        }
    }
    r
}

/// Row indices for the `sn` table.
pub fn sample_rows(n_max: u64, rows: Rows) -> Vec<u64> {
    let all = match rows {
        Rows::All => true,
        Rows::Log => false,
        Rows::Auto => n_max <= 1000,
    };
    if all {
        return (1..=n_max).collect();
    }
    let mut out: Vec<u64> = (1..=n_max.min(10)).collect();
    let mut decade = 10u64;
    while decade <= n_max {
        for m in [1, 2, 5] {
            let n = m * decade;
            if n > 10 && n <= n_max {
                out.push(n);
            }
        }
        decade = match decade.checked_mul(10) {
            Some(d) => d,
            None => break,
        };
    }
    if out.last() != Some(&n_max) {
        out.push(n_max);
    }
    out.sort_unstable();
    out.dedup();
    out
}

pub fn sn(args: &SnArgs) -> Report {
    let digits = args.common.digits;
    let mut columns = vec!["n", "direct", "direct_err", "cancellation_bits", "shifted", "shifted_err"];
    if args.with_asymptotic {
        columns.extend(["asymptotic", "ratio"]);
    }
    let mut r = Report::new("sn", columns);
    r.input("n_max", args.n_max);
    r.input("s", &args.s);
    r.input("a", &args.a);
    r.input("digits", digits);
    r.input("with_asymptotic", args.with_asymptotic);
    if args.n_max == 0 {
        r.fail(Status::Usage, "--n-max must be at least 1");
        return r;
    }
    if digits == 0 {
        r.fail(Status::Usage, "--digits must be at least 1");
        return r;
    }
    let cfg = EvalConfig::with_digits(digits);
    let (s, a) = match parse_inputs(cfg.precision_bits, &args.s, &args.a) {
        Ok(v) => v,
        Err(e) => {
            r.fail(Status::Usage, e);
            return r;
        }
    };
    let rows = sample_rows(args.n_max, args.rows);
    let dense = rows.len() as u64 == args.n_max && args.n_max <= TABLE_LIMIT;
    let table = if dense {
        match SnTable::build(&s, &a, args.n_max, &cfg) {
            Ok(t) => Some(t),
            Err(e) => {
                r.fail(Status::Usage, e.to_string());
                return r;
            }
        }
    } else {
        None
    };
    let positive = s.re.cmp0() == Some(std::cmp::Ordering::Greater);
    for n in rows {
        let direct = match &table {
            Some(t) => {
                let e = t.get(n).expect("row inside the table");
                (e.value.clone(), e.err.clone(), e.cancellation_bits)
            }
            None => match s_n_direct(n, &s, &a, &cfg) {
                Ok(v) => (v.value, v.err, v.cancellation_bits),
                Err(e) => {
                    r.fail(Status::Usage, e.to_string());
                    return r;
                }
            },
        };
        let (shifted, shifted_err) = if n <= SHIFTED_COLUMN_LIMIT {
            match s_n_shifted(n, &s, &a, &cfg) {
                Ok(v) => (complex_cell(&v.value, digits), err_cell(&v.err)),
                Err(e) => {
                    r.fail(Status::Usage, e.to_string());
                    return r;
                }
            }
        } else {
            (Cell::Empty, Cell::Empty)
        };
        let mut row = vec![
            Cell::Int(n),
            complex_cell(&direct.0, digits),
            err_cell(&direct.1),
            Cell::Int(u64::from(direct.2)),
            shifted,
            shifted_err,
        ];
        if args.with_asymptotic {
            if n >= 3 && positive {
                match s_n_asymptotic(n, &s, &a) {
                    Ok(est) => {
                        let ratio = &direct.0 / &est;
                        row.push(complex_cell(&est, digits));
                        row.push(complex_cell(&ratio, digits.min(10)));
                    }
                    Err(e) => {
                        r.fail(Status::Usage, e.to_string());
                        return r;
                    }
                }
            } else {
                row.push(Cell::Empty);
                row.push(Cell::Empty);
            }
        }
        r.push(row);
    }
    r
}
