//! Command-line front end. [`run`] parses an argv, dispatches, and returns
//! the exit code with the rendered output so it can be driven in-process.

pub mod args;
pub mod config;

use std::ffi::OsString;
use std::time::Instant;

use clap::Parser;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::finite_eta::{self, Family, FiniteEtaSpec};
use crate::hasse_global::{self, GlobalEvalResult};
use crate::kernel_integrals;
use crate::numerics::{cpow, ComplexPoint, PrecisionContext};
use crate::proto_zeros::{self, ProtoZeroRecord, ScanConfig};
use crate::weyl::{self, GaussRational, WeylPoly, WeylWord};

use args::{ApowCmd, Cli, Command, EtaCmd, EtaGlobalCmd, Format, FunceqCmd, IntegralCmd, ProtoCmd, VerifyArgs, VerifyCmd, WeylCmd, ZeroCmd, ZetaCmd};
use config::Settings;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Full-precision decimal string; `{:?}` is the shortest round-trip form.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

pub fn cx(z: ComplexPoint) -> Value {
    json!({ "re": num(z.re), "im": num(z.im) })
}

struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

struct Output {
    parameters: Map<String, Value>,
    results: Value,
    diagnostics: Map<String, Value>,
    table: Option<Table>,
}

impl Output {
    fn new(parameters: Value, results: Value) -> Self {
        let parameters = match parameters {
            Value::Object(m) => m,
            _ => Map::new(),
        };
        Self {
            parameters,
            results,
            diagnostics: Map::new(),
            table: None,
        }
    }

    fn diag(mut self, key: &str, v: Value) -> Self {
        self.diagnostics.insert(key.into(), v);
        self
    }

    fn table(mut self, header: Vec<&'static str>, rows: Vec<Vec<String>>) -> Self {
        self.table = Some(Table { header, rows });
        self
    }
}

pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => usage(text),
            };
        }
    };
    let settings = match config::resolve(&cli.global) {
        Ok(s) => s,
        Err(msg) => return usage(format!("error: {msg}\n")),
    };
    let ctx = match settings.context() {
        Ok(c) => c,
        Err(e) => return usage(format!("error: {e}\n")),
    };
    let name = command_name(&cli.command);
    let started = Instant::now();
    let result = dispatch(&cli.command, &settings, &ctx);
    let elapsed = started.elapsed();

    let mut diagnostics = Map::new();
    diagnostics.insert(
        "precision".into(),
        json!({ "working_bits": ctx.working_bits(), "target_rel_err": ctx.target_rel_err() }),
    );
    if !settings.no_timing {
        diagnostics.insert(
            "runtime".into(),
            json!({ "elapsed_ms": elapsed.as_secs_f64() * 1e3, "jobs": settings.jobs }),
        );
    }

    match result {
        Ok(out) => {
            if settings.format == Format::Csv {
                return match out.table {
                    Some(t) => Outcome {
                        code: 0,
                        stdout: render_csv(&t),
                        stderr: String::new(),
                    },
                    None => usage(format!("error: csv output is not available for '{name}'\n")),
                };
            }
            let mut diag = out.diagnostics;
            diag.extend(diagnostics);
            let env = json!({
                "schema_version": SCHEMA_VERSION,
                "command": name,
                "parameters": out.parameters,
                "results": out.results,
                "diagnostics": diag,
            });
            Outcome {
                code: 0,
                stdout: pretty(&env),
                stderr: String::new(),
            }
        }
        Err(e) => {
            let env = json!({
                "schema_version": SCHEMA_VERSION,
                "command": name,
                "error": { "kind": e.kind(), "message": e.to_string() },
                "diagnostics": diagnostics,
            });
            Outcome {
                code: 1,
                stdout: pretty(&env),
                stderr: format!("error: {e}\n"),
            }
        }
    }
}

fn usage(text: String) -> Outcome {
    Outcome {
        code: 2,
        stdout: String::new(),
        stderr: text,
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn render_csv(t: &Table) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&t.header).expect("in-memory write");
    for row in &t.rows {
        w.write_record(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("fields are UTF-8")
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Eta(EtaCmd::Eval { .. }) => "eta eval",
        Command::Eta(EtaCmd::Zeros { .. }) => "eta zeros",
        Command::Integral(_) => "integral compute",
        Command::Verify(VerifyCmd::Thm1(_)) => "verify thm1",
        Command::Verify(VerifyCmd::Thm2(_)) => "verify thm2",
        Command::Zeta(_) => "zeta eval",
        Command::EtaGlobal(_) => "eta-global eval",
        Command::Funceq(_) => "funceq check",
        Command::Zero(_) => "zero refine",
        Command::Proto(ProtoCmd::Scan { .. }) => "proto scan",
        Command::Proto(ProtoCmd::Cloud { .. }) => "proto cloud",
        Command::Planck { .. } => "planck",
        Command::Weyl(WeylCmd::NormalOrder { .. }) => "weyl normal-order",
        Command::Weyl(WeylCmd::Lemmas { .. }) => "weyl lemmas",
        Command::Weyl(WeylCmd::RestFrames { .. }) => "weyl rest-frames",
        Command::Weyl(WeylCmd::Equilibrium) => "weyl equilibrium",
        Command::Weyl(WeylCmd::Power { .. }) => "weyl power",
        Command::Apow(ApowCmd::PiS { .. }) => "apow pi-s",
        Command::Apow(ApowCmd::Clifford { .. }) => "apow clifford",
    }
}

fn dispatch(c: &Command, settings: &Settings, ctx: &PrecisionContext) -> Result<Output> {
    match c {
        Command::Eta(EtaCmd::Eval { spec, s, derivative }) => eta_eval(spec.family, spec.n, *s, *derivative, ctx),
        Command::Eta(EtaCmd::Zeros { spec }) => eta_zeros(spec.family, spec.n),
        Command::Integral(IntegralCmd::Compute { spec, s }) => integral(spec.family, spec.n, *s, ctx),
        Command::Verify(VerifyCmd::Thm1(a)) => verify(Family::HStar, a, ctx),
        Command::Verify(VerifyCmd::Thm2(a)) => verify(Family::Hasse, a, ctx),
        Command::Zeta(ZetaCmd::Eval { s }) => {
            let r = hasse_global::zeta_global(*s, ctx)?;
            Ok(Output::new(json!({ "s": cx(*s) }), global_json(&r)))
        }
        Command::EtaGlobal(EtaGlobalCmd::Eval { s, cap }) => {
            let r = match cap {
                Some(cap) => hasse_global::eta_global_capped(*s, ctx, *cap)?,
                None => hasse_global::eta_global(*s, ctx)?,
            };
            Ok(Output::new(json!({ "s": cx(*s), "cap": cap }), global_json(&r)))
        }
        Command::Funceq(FunceqCmd::Check { s }) => {
            let r = hasse_global::functional_equation_residual(*s, ctx)?;
            Ok(Output::new(json!({ "s": cx(*s) }), json!({ "residual": r })))
        }
        Command::Zero(ZeroCmd::Refine { t0 }) => {
            let z = hasse_global::refine_zero(*t0, ctx)?;
            Ok(Output::new(
                json!({ "t0": num(*t0) }),
                json!({ "t": num(z.t), "residual_eta": z.residual_eta, "iterations": z.iterations }),
            ))
        }
        Command::Proto(ProtoCmd::Scan { spec, sigma, t_min, t_max, step }) => {
            proto_scan(spec.family, spec.n, *sigma, *t_min, *t_max, *step, settings, ctx)
        }
        Command::Proto(ProtoCmd::Cloud { family, n_max, sigma, t_center, half_width, compare }) => {
            proto_cloud(*family, *n_max, *sigma, *t_center, *half_width, *compare, settings, ctx)
        }
        Command::Planck { p } => {
            let info = proto_zeros::planck_resolution(*p)?;
            Ok(Output::new(
                json!({ "p": p }),
                json!({ "p": info.p, "hbar_p": num(info.hbar_p), "resolution": num(info.resolution) }),
            ))
        }
        Command::Weyl(w) => weyl_cmd(w),
        Command::Apow(a) => apow_cmd(a, ctx),
    }
}

fn eta_eval(family: Family, n: u32, s: ComplexPoint, order: u32, ctx: &PrecisionContext) -> Result<Output> {
    let spec = FiniteEtaSpec::new(family, n)?;
    let v = finite_eta::eval_derivative_order(&spec, s, order, ctx)?;
    let mut results = json!({
        "value": cx(v.value),
        "err_bound": v.err_bound,
        "abs_sum": v.abs_sum,
        "guard_bits": v.guard_bits(),
        "tier": v.tier,
        "bits": v.bits,
    });
    // exact rational value at integer arguments
    if order == 0 && s.im == 0.0 && s.re.fract() == 0.0 && s.re.abs() <= 1e6 {
        let exact = finite_eta::eval_exact_integer(&spec, s.re as i64);
        results["exact"] = json!(exact.to_string());
    }
    Ok(Output::new(
        json!({ "family": family, "n": n, "s": cx(s), "derivative": order }),
        results,
    )
    .diag("terms", json!(spec.terms().len())))
}

fn eta_zeros(family: Family, n: u32) -> Result<Output> {
    let spec = FiniteEtaSpec::new(family, n)?;
    let rows = finite_eta::trivial_zero_report(&spec)?;
    let table = rows.iter().map(|r| vec![r.argument.to_string(), r.value.to_string()]).collect();
    let results: Vec<Value> = rows
        .iter()
        .map(|r| json!({ "argument": r.argument, "value": r.value.to_string() }))
        .collect();
    Ok(Output::new(json!({ "family": family, "n": n }), Value::Array(results))
        .table(vec!["argument", "value"], table))
}

fn integral(family: Family, n: u32, s: ComplexPoint, ctx: &PrecisionContext) -> Result<Output> {
    let q = kernel_integrals::integrate_l(family, n, s, ctx)?;
    Ok(Output::new(
        json!({ "family": family, "n": n, "s": cx(s) }),
        json!({ "value": cx(q.value), "abs_err_estimate": q.abs_err_estimate, "budget_exhausted": q.budget_exhausted }),
    )
    .diag("evaluations", json!(q.evaluations)))
}

fn verify(family: Family, a: &VerifyArgs, ctx: &PrecisionContext) -> Result<Output> {
    let spec = FiniteEtaSpec::new(family, a.n)?;
    let zeros = finite_eta::trivial_zero_report(&spec)?;
    let points = match a.s {
        Some(s) => vec![s],
        None => kernel_integrals::identity_sample_points(family, a.n, a.samples),
    };
    let mut rows = Vec::new();
    let mut table = Vec::new();
    let mut worst: f64 = 0.0;
    for s in points {
        let r = kernel_integrals::verify_identity(family, a.n, s, ctx)?;
        if !r.skipped {
            worst = worst.max(r.residual);
        }
        table.push(vec![
            num(s.re),
            num(s.im),
            num(r.lhs.re),
            num(r.lhs.im),
            num(r.rhs.re),
            num(r.rhs.im),
            num(r.residual),
            r.skipped.to_string(),
        ]);
        rows.push(json!({
            "s": cx(s),
            "lhs": cx(r.lhs),
            "rhs": cx(r.rhs),
            "residual": r.residual,
            "lhs_err_estimate": r.lhs_err_estimate,
            "skipped": r.skipped,
            "reason": r.reason,
        }));
    }
    if worst > a.threshold {
        return Err(Error::Assertion(format!(
            "largest identity residual {worst:e} exceeds {:e}",
            a.threshold
        )));
    }
    let zero_args: Vec<i64> = zeros.iter().map(|z| z.argument).collect();
    Ok(Output::new(
        json!({ "family": family, "n": a.n, "s": a.s.map(cx), "samples": a.samples, "threshold": a.threshold }),
        json!({ "trivial_zeros": zero_args, "points": rows, "max_residual": worst, "passed": true }),
    )
    .table(vec!["sigma", "t", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "residual", "skipped"], table))
}

fn global_json(r: &GlobalEvalResult) -> Value {
    json!({
        "value": cx(r.value),
        "terms_used": r.terms_used,
        "tail_bound": r.tail_bound,
        "eval_err": r.eval_err,
        "error_bound": r.error_bound(),
    })
}

fn proto_rows(records: &[ProtoZeroRecord]) -> (Vec<Value>, Vec<Vec<String>>) {
    let json = records
        .iter()
        .map(|r| {
            json!({
                "n": r.spec.n(),
                "sigma": num(r.sigma),
                "t": num(r.t),
                "magnitude": r.magnitude,
                "decay": num(r.decay),
                "bracket": [num(r.bracket.0), num(r.bracket.1)],
            })
        })
        .collect();
    let table = records
        .iter()
        .map(|r| vec![r.spec.n().to_string(), num(r.sigma), num(r.t), num(r.magnitude), num(r.decay)])
        .collect();
    (json, table)
}

#[allow(clippy::too_many_arguments)]
fn proto_scan(
    family: Family,
    n: u32,
    sigma: f64,
    t_min: f64,
    t_max: f64,
    step: Option<f64>,
    settings: &Settings,
    ctx: &PrecisionContext,
) -> Result<Output> {
    let spec = FiniteEtaSpec::new(family, n)?;
    let cfg = match step {
        Some(h) => ScanConfig::new(spec, sigma, t_min, t_max, h)?,
        None => ScanConfig::with_default_step(spec, sigma, t_min, t_max)?,
    }
    .with_jobs(settings.jobs);
    let records = proto_zeros::scan_line(&cfg, ctx)?;
    let (rows, table) = proto_rows(&records);
    Ok(Output::new(
        json!({
            "family": family, "n": n, "sigma": num(sigma),
            "t_min": num(t_min), "t_max": num(t_max), "step": num(cfg.step()),
        }),
        Value::Array(rows),
    )
    .diag("grid_points", json!(cfg.grid().len()))
    .diag("polish_tol", json!(cfg.polish_tol()))
    .table(vec!["n", "sigma", "t", "magnitude", "decay"], table))
}

#[allow(clippy::too_many_arguments)]
fn proto_cloud(
    family: Family,
    n_max: u32,
    sigma: f64,
    t_center: f64,
    half_width: f64,
    compare: bool,
    settings: &Settings,
    ctx: &PrecisionContext,
) -> Result<Output> {
    let records = proto_zeros::proto_cloud(family, n_max, sigma, t_center, half_width, settings.jobs, ctx)?;
    let (rows, table) = proto_rows(&records);
    let mut results = json!({ "records": rows });
    if compare {
        let zero = hasse_global::refine_zero(t_center, ctx)?;
        let cmp = proto_zeros::compare_to_global(&records, &zero)?;
        results["comparison"] = json!({
            "zero_t": num(cmp.zero_t),
            "per_n": cmp.per_n.iter().map(|p| json!({ "n": p.n, "t": num(p.t), "distance": p.distance })).collect::<Vec<_>>(),
            "centroid": num(cmp.centroid),
            "centroid_distance": cmp.centroid_distance,
        });
    }
    Ok(Output::new(
        json!({
            "family": family, "n_max": n_max, "sigma": num(sigma),
            "t_center": num(t_center), "half_width": num(half_width), "compare": compare,
        }),
        results,
    )
    .table(vec!["n", "sigma", "t", "magnitude", "decay"], table))
}

fn weyl_cmd(w: &WeylCmd) -> Result<Output> {
    match w {
        WeylCmd::NormalOrder { word, expr, u_one } => {
            let (p, input) = match (word, expr) {
                (Some(word), _) => (weyl::normal_order(&word.parse::<WeylWord>()?), word.clone()),
                (None, Some(e)) => (e.parse::<WeylPoly>()?, e.clone()),
                (None, None) => return Err(Error::Parse("give --word or --expr".into())),
            };
            let (normal, vacuum) = if *u_one {
                let q = p.eval_u(&GaussRational::one());
                (q.to_string(), q.mod_vacuum().to_string())
            } else {
                (p.to_string(), p.mod_vacuum().to_string())
            };
            Ok(Output::new(
                json!({ "input": input, "u": if *u_one { "1" } else { "symbolic" } }),
                json!({ "normal_form": normal, "mod_vacuum": vacuum, "terms": p.len() }),
            ))
        }
        WeylCmd::Lemmas { n_max } => {
            let report = weyl::lemma_suite(*n_max)?;
            let table = report
                .checks
                .iter()
                .map(|c| vec![c.identity.clone(), c.n.to_string(), c.lhs.clone(), c.rhs.clone()])
                .collect();
            Ok(Output::new(
                json!({ "n_max": n_max }),
                json!({ "passed": true, "checks": report.checks }),
            )
            .diag("identities_checked", json!(report.checks.len()))
            .table(vec!["identity", "n", "lhs", "rhs"], table))
        }
        WeylCmd::RestFrames { u } => {
            let frames = weyl::rest_frames(u)?;
            let table = frames
                .iter()
                .map(|f| vec![f.w.to_string(), f.h_scale.to_string(), f.time_scale.to_string(), f.swaps_ab.to_string()])
                .collect();
            Ok(Output::new(json!({ "u": u.to_string() }), json!(frames))
                .table(vec!["w", "h_scale", "time_scale", "swaps_ab"], table))
        }
        WeylCmd::Equilibrium => {
            let scalar = weyl::equilibrium_identity_check()?;
            Ok(Output::new(
                json!({ "order": 1 }),
                json!({
                    "scalar": scalar.to_string(),
                    "expected": weyl::algebra::equilibrium_target().to_string(),
                    "holds": true,
                    "at_s_half": scalar.eval(&GaussRational::from_ratio(1, 2)).to_string(),
                }),
            ))
        }
        WeylCmd::Power { base, order } => {
            let p = weyl::operator_power_truncated(*base, *order);
            Ok(Output::new(
                json!({ "base": base, "order": order }),
                json!({ "expansion": p.to_string(), "terms": p.len() }),
            ))
        }
    }
}

fn apow_cmd(a: &ApowCmd, ctx: &PrecisionContext) -> Result<Output> {
    match a {
        ApowCmd::PiS { s } => {
            let r = weyl::pi_s(*s, ctx)?;
            let target = cpow(ComplexPoint::new(2.0, 0.0), *s, ctx)?;
            let mut results = global_json(&r);
            results["target_2_pow_s"] = cx(target);
            results["deviation"] = json!((r.value - target).norm());
            Ok(Output::new(json!({ "s": cx(*s) }), results))
        }
        ApowCmd::Clifford { s, side, grid } => {
            let points: Vec<ComplexPoint> = match (s, grid) {
                (Some(s), _) => vec![*s],
                (None, Some(n)) => clifford_grid(*n),
                (None, None) => return Err(Error::Parse("give --s or --grid".into())),
            };
            let rows: Vec<(ComplexPoint, bool)> =
                points.iter().map(|&p| (p, weyl::clifford_contains(p, *side))).collect();
            let table = rows
                .iter()
                .map(|(p, inside)| vec![num(p.re), num(p.im), inside.to_string()])
                .collect();
            let results = if s.is_some() {
                json!({ "inside": rows[0].1 })
            } else {
                Value::Array(rows.iter().map(|(p, inside)| json!({ "s": cx(*p), "inside": inside })).collect())
            };
            Ok(Output::new(json!({ "s": s.map(cx), "side": side, "grid": grid }), results)
                .table(vec!["sigma", "t", "inside"], table))
        }
    }
}

/// `n × n` points over `σ ∈ [0, 1]`, `t ∈ [0, 1/2]`, endpoints included.
pub fn clifford_grid(n: u32) -> Vec<ComplexPoint> {
    let n = n.max(2);
    let d = f64::from(n - 1);
    (0..n)
        .flat_map(|i| (0..n).map(move |j| ComplexPoint::new(f64::from(i) / d, 0.5 * f64::from(j) / d)))
        .collect()
}
