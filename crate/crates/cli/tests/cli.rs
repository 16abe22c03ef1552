use std::process::{Command, Output};

use serde_json::Value;

fn hurwitz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hurwitz"))
        .args(args)
        .env_remove("HURWITZ_DIGITS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (Value, String, i32) {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let o = hurwitz(&full);
    let text = stdout(&o);
    let v: Value = serde_json::from_str(&text).unwrap_or_else(|e| panic!("bad JSON ({e}): {text}"));
    (v, text, o.status.code().unwrap())
}

fn num(v: &Value) -> f64 {
    v.as_str().unwrap().parse().unwrap()
}

#[test]
fn eval_zeta_two() {
    let (v, _, code) = json(&["eval", "--s", "2", "--a", "1", "--method", "integral"]);
    assert_eq!(code, 0);
    let r = &v["results"][0];
    assert!(r["zeta"]["re"].as_str().unwrap().starts_with("1.6449340668482264364724151666"));
    assert_eq!(r["pole"], Value::Bool(false));
    assert_eq!(r["method"], "integral");
}

#[test]
fn eval_continued_at_zero() {
    let (v, _, code) = json(&["eval", "--s", "0", "--a", "0.3", "--method", "continued", "--k", "1"]);
    assert_eq!(code, 0);
    assert!((num(&v["results"][0]["zeta"]["re"]) - 0.2).abs() < 1e-25);
}

#[test]
fn eval_negative_argument_needs_no_equals_sign() {
    let o = hurwitz(&["eval", "--s", "-1", "--a", "1", "--digits", "20"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("zeta            -8.3333333333333333333e-2+0i"));
}

#[test]
fn eval_pole_is_reported() {
    let (v, _, code) = json(&["eval", "--s", "1", "--a", "0.5"]);
    assert_eq!(code, 0);
    let r = &v["results"][0];
    assert_eq!(r["pole"], Value::Bool(true));
    assert_eq!(r["zeta"], Value::Null);
    assert!((num(&r["phi"]["re"]) - 1.0).abs() < 1e-25);
}

#[test]
fn eval_oracle_and_shifted() {
    let (v, _, code) = json(&["eval", "--s", "3,1", "--a", "0.4", "--method", "oracle", "--digits", "25"]);
    assert_eq!(code, 0);
    let (w, _, code) = json(&["eval", "--s", "3,1", "--a", "0.4", "--digits", "25"]);
    assert_eq!(code, 0);
    for part in ["re", "im"] {
        let x = num(&v["results"][0]["zeta"][part]);
        let y = num(&w["results"][0]["zeta"][part]);
        assert!((x - y).abs() < 1e-14);
    }
    let (z, _, code) = json(&["eval", "--s", "2", "--a", "0", "--method", "shifted-integral"]);
    assert_eq!(code, 0);
    let pi2_6 = std::f64::consts::PI.powi(2) / 6.0;
    assert!((num(&z["results"][0]["zeta_shifted"]["re"]) - pi2_6).abs() < 1e-15);
}

#[test]
fn series_shortfall_exits_with_two() {
    let (v, _, code) = json(&["eval", "--s", "2", "--a", "0.5", "--method", "series", "--work-terms", "64"]);
    assert_eq!(code, 2);
    assert!(v["errors"][0].as_str().unwrap().contains("accuracy target not met"));
    // the partial value is still reported, with its error estimate
    let r = &v["results"][0];
    assert!(num(&r["phi_err"]) > 0.0);
    let pi2_2 = std::f64::consts::PI.powi(2) / 2.0;
    assert!((num(&r["phi"]["re"]) - pi2_2).abs() <= num(&r["phi_err"]));
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(hurwitz(&["eval", "--s", "2"]).status.code(), Some(1));
    assert_eq!(hurwitz(&["eval", "--s", "2", "--a", "1.5"]).status.code(), Some(1));
    assert_eq!(hurwitz(&["eval", "--s", "-2", "--a", "0.5", "--method", "integral"]).status.code(), Some(1));
    assert_eq!(hurwitz(&["frobnicate"]).status.code(), Some(1));
    let o = hurwitz(&["laurent", "--s0", "1", "--a", "1", "--order", "33"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8(o.stderr).unwrap().contains("at most 32"));
    assert_eq!(hurwitz(&["--help"]).status.code(), Some(0));
}

#[test]
fn laurent_examples() {
    let (v, _, code) = json(&["laurent", "--s0", "1", "--a", "1", "--order", "1"]);
    assert_eq!(code, 0);
    let rows = v["results"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert!((num(&rows[0]["gamma_n"]["re"]) - 1.0).abs() < 1e-25);
    assert!(rows[1]["gamma_n"]["re"].as_str().unwrap().starts_with("5.772156649015328606065120900"));

    let (v, _, _) = json(&["laurent", "--s0", "2", "--a", "1", "--order", "0"]);
    let pi2_6 = std::f64::consts::PI.powi(2) / 6.0;
    assert!((num(&v["results"][0]["gamma_n"]["re"]) - pi2_6).abs() < 1e-15);

    let (v, _, _) = json(&["laurent", "--s0", "1", "--a", "0.5", "--order", "1"]);
    let expect = 0.5772156649015329 + 2.0 * std::f64::consts::LN_2;
    assert!((num(&v["results"][1]["gamma_n"]["re"]) - expect).abs() < 1e-15);
}

#[test]
fn laurent_berndt_normalization_shifts_the_index() {
    let (plain, _, _) = json(&["laurent", "--s0", "1", "--a", "1", "--order", "3"]);
    let (b, _, code) = json(&["laurent", "--s0", "1", "--a", "1", "--order", "3", "--berndt-normalization"]);
    assert_eq!(code, 0);
    let rows = b["results"].as_array().unwrap();
    assert_eq!(rows[0]["label"], "constant");
    for n in 1..4 {
        assert_eq!(rows[n]["coefficient"], plain["results"][n]["gamma_n"]);
        assert_eq!(rows[n]["power"], Value::from(n as u64));
    }
    let o = hurwitz(&["laurent", "--s0", "2", "--a", "1", "--order", "2", "--berndt-normalization"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn sn_table() {
    let (v, _, code) = json(&["sn", "--n-max", "6", "--s", "-2", "--a", "0.5"]);
    assert_eq!(code, 0);
    let rows = v["results"].as_array().unwrap();
    assert_eq!(rows.len(), 6);
    for r in &rows[3..] {
        assert_eq!(r["direct"]["re"], "0");
        assert_eq!(r["direct"]["im"], "0");
    }
    let (v, _, _) = json(&["sn", "--n-max", "3", "--s", "2.5", "--a", "1"]);
    assert_eq!(num(&v["results"][0]["direct"]["re"]), 1.0);
}

#[test]
fn sn_ratio_trends_to_one() {
    let (v, _, code) = json(&["sn", "--n-max", "10000", "--s", "1.5", "--a", "1", "--with-asymptotic", "--digits", "15"]);
    assert_eq!(code, 0);
    let rows = v["results"].as_array().unwrap();
    let dev = |n: u64| {
        let r = rows.iter().find(|r| r["n"] == Value::from(n)).unwrap();
        (num(&r["ratio"]["re"]) - 1.0).abs()
    };
    assert!(dev(10_000) < dev(1_000) && dev(1_000) < dev(100));
    assert!(dev(10_000) < 0.05);
    // the shifted column stops at n = 1000
    let last = rows.last().unwrap();
    assert_eq!(last["shifted"], Value::Null);
}

#[test]
fn check_suites_pass() {
    for suite in ["identities", "sums", "agreement"] {
        let (v, _, code) = json(&["check", "--suite", suite, "--digits", "20"]);
        assert_eq!(code, 0, "{suite}: {v}");
        let rows = v["results"].as_array().unwrap();
        assert!(!rows.is_empty());
        assert!(rows.iter().all(|r| r["pass"] == Value::Bool(true)));
    }
}

#[test]
fn json_round_trips_byte_for_byte() {
    for args in [
        vec!["eval", "--s", "0.5,14", "--a", "0.25", "--digits", "20"],
        vec!["laurent", "--s0", "1,1", "--a", "0.5", "--order", "4", "--digits", "20"],
        vec!["sn", "--n-max", "5", "--s", "2,-1", "--a", "0.75"],
    ] {
        let (v, text, _) = json(&args);
        let again = serde_json::to_string_pretty(&v).unwrap() + "\n";
        assert_eq!(again, text);
        for key in ["command", "inputs", "results", "errors", "version"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
    }
}

#[test]
fn csv_has_header_and_split_columns() {
    let o = hurwitz(&["sn", "--n-max", "3", "--s", "2", "--a", "1", "--format", "csv"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,direct_re,direct_im,direct_err,cancellation_bits,shifted_re,shifted_im,shifted_err"
    );
    assert_eq!(lines.count(), 3);
}

#[test]
fn digits_come_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_hurwitz"))
        .args(["eval", "--s", "2", "--a", "1", "--format", "json"])
        .env("HURWITZ_DIGITS", "12")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["inputs"]["digits"], "12");
    assert_eq!(v["results"][0]["zeta"]["re"], "1.64493406685");
    // the flag wins over the variable
    let o = Command::new(env!("CARGO_BIN_EXE_hurwitz"))
        .args(["eval", "--s", "2", "--a", "1", "--digits", "5", "--format", "json"])
        .env("HURWITZ_DIGITS", "12")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["results"][0]["zeta"]["re"], "1.6449");
}
