use std::process::Command;

use eta_forge::cli::run;
use serde_json::Value;

fn json(argv: &[&str]) -> (i32, Value) {
    let mut full = vec!["eta-forge", "--no-timing"];
    full.extend_from_slice(argv);
    let out = run(full);
    let v = serde_json::from_str(&out.stdout).unwrap_or(Value::Null);
    (out.code, v)
}

fn complex(v: &Value) -> (f64, f64) {
    let re = v["re"].as_str().expect("re is a string").parse().unwrap();
    let im = v["im"].as_str().expect("im is a string").parse().unwrap();
    (re, im)
}

fn check_envelope(v: &Value, command: &str) {
    assert_eq!(v["schema_version"], "1");
    assert_eq!(v["command"], command);
    assert!(v["parameters"].is_object());
    assert!(v["diagnostics"]["precision"]["working_bits"].is_u64());
    assert!(v.get("results").is_some());
}

#[test]
fn trivial_zero_through_cli() {
    let (code, v) = json(&["eta", "eval", "--family", "hasse", "--n", "3", "--s", " -2"]);
    assert_eq!(code, 0);
    check_envelope(&v, "eta eval");
    assert_eq!(complex(&v["results"]["value"]), (0.0, 0.0));
    assert_eq!(v["results"]["exact"], "0");
}

#[test]
fn quarter_circle_through_cli() {
    let (code, v) = json(&["verify", "thm1", "--n", "1", "--s", "1"]);
    assert_eq!(code, 0);
    check_envelope(&v, "verify thm1");
    let r = v["results"]["max_residual"].as_f64().unwrap();
    assert!(r <= 1e-10);
    let (lhs, _) = complex(&v["results"]["points"][0]["lhs"]);
    assert!((lhs - std::f64::consts::FRAC_PI_2).abs() <= 1e-10);
}

#[test]
fn usage_errors_exit_2() {
    for argv in [
        vec!["eta-forge", "eta", "eval", "--family", "hasse", "--n", "-1", "--s", "1"],
        vec!["eta-forge", "eta", "eval", "--family", "nope", "--n", "1", "--s", "1"],
        vec!["eta-forge", "zeta", "eval", "--s", "1+"],
        vec!["eta-forge", "frobnicate"],
        vec!["eta-forge", "--format", "csv", "zeta", "eval", "--s", "2"],
        vec!["eta-forge", "--tol", "1e-30", "zeta", "eval", "--s", "2"],
    ] {
        let out = run(argv.clone());
        assert_eq!(out.code, 2, "{argv:?}: {}", out.stderr);
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
    }
    assert_eq!(run(["eta-forge", "--help"]).code, 0);
}

#[test]
fn computational_errors_exit_1_with_error_object() {
    for (argv, kind) in [
        (vec!["zeta", "eval", "--s", "1"], None),
        (vec!["apow", "pi-s", "--s", "-0.5"], Some("domain")),
        (vec!["integral", "compute", "--family", "hasse", "--n", "2", "--s", "5"], Some("domain")),
        (vec!["planck", "--p", "91"], Some("domain")),
    ] {
        let (code, v) = json(&argv);
        assert_eq!(code, 1, "{argv:?}");
        assert!(v["error"]["message"].is_string());
        let got = v["error"]["kind"].as_str().unwrap();
        if let Some(k) = kind {
            assert_eq!(got, k, "{argv:?}");
        }
    }
}

#[test]
fn csv_scan_output() {
    let out = run([
        "eta-forge", "--format", "csv", "proto", "scan", "--family", "hasse", "--n", "1", "--t-min", "1", "--t-max", "30",
    ]);
    assert_eq!(out.code, 0);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(lines[0], "n,sigma,t,magnitude,decay");
    assert_eq!(lines.len(), 4);
    let t: f64 = lines[1].split(',').nth(2).unwrap().parse().unwrap();
    assert!((t - 2.0 * std::f64::consts::PI / std::f64::consts::LN_2).abs() < 1e-6);
}

#[test]
fn scans_identical_for_any_job_count() {
    let runs: Vec<String> = ["1", "3", "8"]
        .iter()
        .map(|j| {
            run([
                "eta-forge", "--no-timing", "--jobs", j, "proto", "cloud", "--n-max", "6", "--t-center", "14.13",
                "--half-width", "4", "--compare",
            ])
            .stdout
        })
        .collect();
    assert!(!runs[0].is_empty());
    assert_eq!(runs[0], runs[1]);
    assert_eq!(runs[0], runs[2]);
    let v: Value = serde_json::from_str(&runs[0]).unwrap();
    assert!(v["results"]["comparison"]["zero_t"].as_str().unwrap().starts_with("14.1347"));
}

#[test]
fn every_command_emits_a_parseable_envelope() {
    let cases: Vec<(&str, Vec<&str>)> = vec![
        ("eta zeros", vec!["eta", "zeros", "--family", "hstar", "--n", "5"]),
        ("integral compute", vec!["integral", "compute", "--family", "hstar", "--n", "2", "--s", "1.5+0.5i"]),
        ("verify thm2", vec!["verify", "thm2", "--n", "2", "--samples", "5"]),
        ("zeta eval", vec!["zeta", "eval", "--s", "2"]),
        ("eta-global eval", vec!["eta-global", "eval", "--s", "0.5+14i", "--cap", "300"]),
        ("funceq check", vec!["funceq", "check", "--s", "3+2i"]),
        ("zero refine", vec!["zero", "refine", "--t0", "21"]),
        ("planck", vec!["planck", "--p", "7"]),
        ("weyl normal-order", vec!["weyl", "normal-order", "--expr", "b^2 a^2"]),
        ("weyl lemmas", vec!["weyl", "lemmas", "--n-max", "4"]),
        ("weyl rest-frames", vec!["weyl", "rest-frames", "--u", "i"]),
        ("weyl equilibrium", vec!["weyl", "equilibrium"]),
        ("weyl power", vec!["weyl", "power", "--base", "b", "--order", "2"]),
        ("apow pi-s", vec!["apow", "pi-s", "--s", "0.5"]),
        ("apow clifford", vec!["apow", "clifford", "--grid", "4", "--side", "b"]),
    ];
    for (name, argv) in cases {
        let (code, v) = json(&argv);
        assert_eq!(code, 0, "{name}: {v}");
        check_envelope(&v, name);
    }
    let (_, v) = json(&["weyl", "normal-order", "--word", "BBAA"]);
    assert_eq!(v["results"]["normal_form"], "a^2 b^2 + 4u a b + 2u^2");
    assert_eq!(v["results"]["mod_vacuum"], "2u^2");
    let (_, v) = json(&["weyl", "equilibrium"]);
    assert_eq!(v["results"]["scalar"], "2s^2 - 2s + 1");
}

#[test]
fn output_is_byte_identical_across_runs() {
    let argv = ["eta-forge", "--no-timing", "eta-global", "eval", "--s", "0.25+3i"];
    assert_eq!(run(argv).stdout, run(argv).stdout);
    // timing appears only when asked for
    let timed = run(["eta-forge", "zeta", "eval", "--s", "2"]).stdout;
    assert!(timed.contains("elapsed_ms"));
}

fn config_file(name: &str, body: &str) -> std::path::PathBuf {
    let path = std::env::temp_dir().join(format!("eta-forge-{}-{name}.conf", std::process::id()));
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn precedence_flag_env_config_default() {
    let bin = env!("CARGO_BIN_EXE_eta-forge");
    let cfg = config_file("prec", "tol = 1e-9\nprecision_bits = 64\nno_timing = true\n");
    let tol_of = |extra: &[&str], env: Option<&str>| -> (f64, u64) {
        let mut cmd = Command::new(bin);
        cmd.env_remove("ETA_FORGE_TOL").env_remove("ETA_FORGE_PRECISION_BITS").env_remove("ETA_FORGE_CONFIG");
        if let Some(t) = env {
            cmd.env("ETA_FORGE_TOL", t);
        }
        cmd.args(["--config", cfg.to_str().unwrap()]).args(extra).args(["zeta", "eval", "--s", "2"]);
        let out = cmd.output().unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        let v: Value = serde_json::from_slice(&out.stdout).unwrap();
        assert!(v["diagnostics"].get("runtime").is_none());
        let p = &v["diagnostics"]["precision"];
        (p["target_rel_err"].as_f64().unwrap(), p["working_bits"].as_u64().unwrap())
    };
    assert_eq!(tol_of(&[], None), (1e-9, 64));
    assert_eq!(tol_of(&[], Some("1e-8")), (1e-8, 64));
    assert_eq!(tol_of(&["--tol", "1e-7"], Some("1e-8")), (1e-7, 64));
    std::fs::remove_file(cfg).ok();

    let bad = config_file("bad", "colour = blue\n");
    let out = Command::new(bin).args(["--config", bad.to_str().unwrap(), "planck", "--p", "3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_file(bad).ok();
}
