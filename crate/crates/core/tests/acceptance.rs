//! Acceptance run: one line per criterion with its measured worst case and
//! wall time. Exits non-zero if any criterion fails.

mod common;

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use eta_forge::finite_eta::{self, Family, FiniteEtaSpec};
use eta_forge::hasse_global::{self, GlobalEvalResult};
use eta_forge::kernel_integrals;
use eta_forge::numerics::cgamma;
use eta_forge::proto_zeros::{self, ScanConfig};
use eta_forge::weyl::{
    self, a_pow, b_pow, normal_order, normal_order_with, oscillator_h, GaussRational, Phase, SPoly,
    Side, UPoly, WeylPoly,
};
use eta_forge::{ComplexPoint, PrecisionContext};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn c(re: f64, im: f64) -> ComplexPoint {
    ComplexPoint::new(re, im)
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn binomial_row(n: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for _ in 0..n {
        let mut next = vec![BigInt::one(); row.len() + 1];
        for k in 1..row.len() {
            next[k] = &row[k - 1] + &row[k];
        }
        row = next;
    }
    row
}

// ---- 1, 2: exact trivial zeros ----

fn hasse_trivial_zeros() -> Check {
    let mut checked = 0;
    for n in 1..=20usize {
        let row = binomial_row(n);
        let spec = FiniteEtaSpec::hasse(n as u32);
        for m in 0..n as u32 {
            // oracle: Σ (-1)^k C(n,k) (k+1)^m in integers
            let oracle: BigInt = (0..=n)
                .map(|k| {
                    let t = &row[k] * BigInt::from(k + 1).pow(m);
                    if k % 2 == 0 { t } else { -t }
                })
                .sum();
            ensure(oracle.is_zero(), format!("oracle nonzero at n={n}, m={m}"))?;
            let v = finite_eta::eval_exact_integer(&spec, -(m as i64));
            ensure(v.is_zero(), format!("eta_{n}(-{m}) = {v}"))?;
            checked += 1;
        }
        // first non-trivial argument is nonzero: (-1)^n n!
        let v = finite_eta::eval_exact_integer(&spec, -(n as i64));
        ensure(!v.is_zero(), format!("eta_{n}(-{n}) unexpectedly zero"))?;
    }
    Ok(format!("{checked} exact zeros"))
}

fn hstar_trivial_zeros() -> Check {
    let mut checked = 0;
    for n in 2..=15usize {
        let row = binomial_row(2 * n);
        let spec = FiniteEtaSpec::hstar(n as u32).map_err(|e| e.to_string())?;
        for m in 1..n as u32 {
            let oracle: BigInt = (1..=n)
                .map(|k| {
                    let t = &row[n + k] * BigInt::from(k).pow(2 * m);
                    if k % 2 == 1 { t } else { -t }
                })
                .sum();
            ensure(oracle.is_zero(), format!("oracle nonzero at n={n}, m={m}"))?;
            let v = finite_eta::eval_exact_integer(&spec, -2 * i64::from(m));
            ensure(v.is_zero(), format!("zeta*_{n}(-{}) = {v}", 2 * m))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} exact zeros"))
}

// ---- 3, 4: closed-form integrals ----

fn hstar_quarter_circle() -> Check {
    let ctx = PrecisionContext::fast();
    let r = kernel_integrals::integrate_l(Family::HStar, 1, c(1.0, 0.0), &ctx).map_err(|e| e.to_string())?;
    let err = (r.value - c(PI / 2.0, 0.0)).norm();
    ensure(err <= 1e-10, format!("|L - pi/2| = {err:e}"))?;
    Ok(format!("abs err {err:.1e}"))
}

fn hasse_reflection() -> Check {
    let ctx = PrecisionContext::fast();
    let mut worst: f64 = 0.0;
    for s in [0.25, 0.5, 0.75] {
        let r = kernel_integrals::integrate_l(Family::Hasse, 0, c(s, 0.0), &ctx).map_err(|e| e.to_string())?;
        let want = PI / (PI * s).sin();
        let rel = (r.value - c(want, 0.0)).norm() / want;
        worst = worst.max(rel);
    }
    ensure(worst <= 1e-10, format!("rel err {worst:e}"))?;
    Ok(format!("rel err {worst:.1e}"))
}

// ---- 5: identity sweeps ----

fn identity_sweeps() -> Check {
    let ctx = PrecisionContext::fast();
    let mut worst: f64 = 0.0;
    let (mut evaluated, mut guarded) = (0, 0);
    for family in [Family::Hasse, Family::HStar] {
        let first = if family == Family::Hasse { 0 } else { 1 };
        for n in first..=8 {
            for s in kernel_integrals::identity_sample_points(family, n, 25) {
                let r = kernel_integrals::verify_identity(family, n, s, &ctx)
                    .map_err(|e| format!("{family} n={n} s={s}: {e}"))?;
                if r.skipped {
                    guarded += 1;
                    continue;
                }
                evaluated += 1;
                ensure(
                    r.residual <= 1e-8,
                    format!("{family} n={n} s={s}: residual {:e}", r.residual),
                )?;
                worst = worst.max(r.residual);
            }
        }
    }
    Ok(format!("{evaluated} points, {guarded} pole-guarded, worst residual {worst:.1e}"))
}

// ---- 6-9: global series ----

fn global_values() -> Check {
    let ctx = PrecisionContext::fast();
    let ln2 = common::ln2_oracle();
    ensure((ln2 - std::f64::consts::LN_2).abs() < 1e-14, "ln 2 oracle disagrees with the constant")?;
    let eta = hasse_global::eta_global(c(1.0, 0.0), &ctx).map_err(|e| e.to_string())?;
    let e1 = (eta.value - c(ln2, 0.0)).norm();
    let z2_oracle = common::zeta_oracle(c(2.0, 0.0));
    ensure((z2_oracle.re - PI * PI / 6.0).abs() < 1e-14, "Euler-Maclaurin oracle disagrees with pi^2/6")?;
    let zeta = hasse_global::zeta_global(c(2.0, 0.0), &ctx).map_err(|e| e.to_string())?;
    let e2 = (zeta.value - z2_oracle).norm();
    ensure(e1 <= 1e-10 && e2 <= 1e-10, format!("eta(1) err {e1:e}, zeta(2) err {e2:e}"))?;
    Ok(format!("eta(1) err {e1:.1e}, zeta(2) err {e2:.1e}"))
}

fn zero_refinement() -> Check {
    let ctx = PrecisionContext::fast();
    let mut worst_t: f64 = 0.0;
    let mut worst_z: f64 = 0.0;
    for (t0, known) in [(14.1, 14.134_725_141_734_693), (21.0, 21.022_039_638_771_555), (25.0, 25.010_857_580_145_69)] {
        let (oracle_t, oracle_res) = common::critical_zero_oracle(t0);
        ensure(oracle_res < 1e-30, format!("oracle residual {oracle_res:e} at {t0}"))?;
        ensure((oracle_t - known).abs() < 1e-12, format!("oracle zero {oracle_t} vs tabulated {known}"))?;
        let z = hasse_global::refine_zero(t0, &ctx).map_err(|e| e.to_string())?;
        let dt = (z.t - oracle_t).abs();
        let at = c(0.5, z.t);
        let lib = hasse_global::zeta_global(at, &ctx).map_err(|e| e.to_string())?.value.norm();
        let orc = common::zeta_oracle(at).norm();
        worst_t = worst_t.max(dt);
        worst_z = worst_z.max(lib).max(orc);
        ensure(dt <= 1e-6, format!("t0={t0}: refined {} vs oracle {oracle_t}", z.t))?;
        ensure(lib <= 1e-8 && orc <= 1e-8, format!("t0={t0}: |zeta| = {lib:e} (lib), {orc:e} (oracle)"))?;
    }
    Ok(format!("worst |dt| {worst_t:.1e}, worst |zeta| {worst_z:.1e}"))
}

fn proto_zero_example() -> Check {
    let ctx = PrecisionContext::fast();
    let cfg = ScanConfig::with_default_step(FiniteEtaSpec::hasse(1), 0.5, 1.0, 30.0).map_err(|e| e.to_string())?;
    let recs = proto_zeros::scan_line(&cfg, &ctx).map_err(|e| e.to_string())?;
    ensure(recs.len() == 3, format!("{} minima found", recs.len()))?;
    let mut worst: f64 = 0.0;
    for (k, r) in recs.iter().enumerate() {
        let want = 2.0 * PI * (k + 1) as f64 / std::f64::consts::LN_2;
        worst = worst.max((r.t - want).abs());
    }
    ensure(worst <= 1e-4, format!("worst offset {worst:e}"))?;
    Ok(format!("3 minima, worst offset {worst:.1e}"))
}

fn functional_equation() -> Check {
    let ctx = PrecisionContext::fast();
    let mut worst: f64 = 0.0;
    for s in [c(2.0, 0.0), c(3.0, 2.0), c(0.5, 0.0)] {
        let r = hasse_global::functional_equation_residual(s, &ctx).map_err(|e| format!("s={s}: {e}"))?;
        ensure(r <= 1e-7, format!("s={s}: residual {r:e}"))?;
        worst = worst.max(r);
    }
    Ok(format!("worst residual {worst:.1e}"))
}

// ---- 10-12: exact algebra ----

fn lemma_suite() -> Check {
    let report = weyl::lemma_suite(10).map_err(|e| e.to_string())?;
    // independent restatement of the vacuum norm and the eigenvalue rule
    let mut fact = BigInt::one();
    for n in 1..=10u32 {
        fact *= BigInt::from(n);
        let lhs = b_pow::<UPoly>(n).mul(&a_pow(n)).mod_vacuum();
        let rhs = WeylPoly::scalar(UPoly::monomial(GaussRational::from_bigint(fact.clone()), n));
        ensure(lhs == rhs, format!("b^{n} a^{n} mod vacuum = {lhs}"))?;
    }
    for k in 0..=10u32 {
        let lhs = oscillator_h().mul(&a_pow(k)).mod_vacuum();
        let eig = UPoly::monomial(GaussRational::from_ratio(2 * i64::from(k) + 1, 2), 1);
        let rhs = a_pow::<UPoly>(k).scale(&eig);
        ensure(lhs == rhs, format!("H a^{k} mod vacuum = {lhs}"))?;
    }
    Ok(format!("{} identities exact", report.checks.len()))
}

fn rest_frames_unit() -> Check {
    let frames = weyl::rest_frames(&Phase::one()).map_err(|e| e.to_string())?;
    let mut ws: Vec<String> = frames.iter().map(|f| f.w.to_string()).collect();
    ws.sort();
    ensure(ws == ["-1", "-i", "1", "i"], format!("frames {ws:?}"))?;
    for f in &frames {
        let w = f.w.exact().ok_or("non-quarter-turn frame")?;
        let pm_i = w == GaussRational::i() || w == GaussRational::i().conj();
        ensure(f.swaps_ab == pm_i, format!("swap flag wrong at w = {w}"))?;
        // negative energy and reversed time exactly when w² = -1
        let w2 = w.pow(2);
        let neg = w2 == GaussRational::from_int(-1);
        ensure(neg == pm_i, "w^2 classification")?;
        ensure(
            (f.h_scale == Phase::one().neg()) == neg && (f.time_scale == Phase::one().neg()) == neg,
            format!("energy/time scales wrong at w = {w}"),
        )?;
    }
    Ok("{1, i, -1, -i}, flips at ±i".into())
}

fn equilibrium() -> Check {
    let scalar = weyl::equilibrium_identity_check().map_err(|e| e.to_string())?;
    let want = SPoly::from_coeffs(vec![GaussRational::from_int(1), GaussRational::from_int(-2), GaussRational::from_int(2)]);
    ensure(scalar == want, format!("scalar {scalar}"))?;
    ensure(scalar.eval(&GaussRational::zero()) == GaussRational::one(), "value at 0")?;
    ensure(scalar.eval(&GaussRational::from_ratio(1, 2)) == GaussRational::from_ratio(1, 2), "value at 1/2")?;
    Ok(format!("{scalar}"))
}

// ---- 13: operator power ----

fn operator_power() -> Check {
    let ctx = PrecisionContext::fast();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0013);
    let mut worst_ratio: f64 = 0.0;
    for _ in 0..20 {
        let s = c(rng.gen_range(0.1..=3.0), rng.gen_range(-1.0..=1.0));
        let r: GlobalEvalResult = weyl::pi_s(s, &ctx).map_err(|e| format!("s={s}: {e}"))?;
        let target = (s * std::f64::consts::LN_2).exp();
        let allowed = r.error_bound() + 4.0 * f64::EPSILON * target.norm();
        let dev = (r.value - target).norm();
        ensure(dev <= allowed, format!("s={s}: |pi - 2^s| = {dev:e} > {allowed:e}"))?;
        worst_ratio = worst_ratio.max(dev / allowed);
    }
    let mut inside = 0;
    for i in 0..10 {
        for j in 0..10 {
            let (sigma, t) = (0.125 * f64::from(i), f64::from(j) / 10.0 - 0.1);
            let direct = |x: f64| (x - 1.0).powi(2) + t * t < 1.0 && (0.25..=0.75).contains(&x) && (0.0..=0.5).contains(&t);
            let p = c(sigma, t);
            ensure(weyl::clifford_contains(p, Side::A) == direct(sigma), format!("side A at {p}"))?;
            ensure(weyl::clifford_contains(p, Side::B) == direct(1.0 - sigma), format!("side B at {p}"))?;
            inside += usize::from(direct(sigma));
        }
    }
    Ok(format!("20 samples, worst dev/bound {worst_ratio:.2}; grid {inside}/100 inside"))
}

// ---- 14: property suites ----

fn confluence() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x00c0_ffee);
    for _ in 0..500 {
        let w = common::random_word(&mut rng, 12);
        let mut r1 = ChaCha8Rng::seed_from_u64(rng.gen());
        let mut r2 = ChaCha8Rng::seed_from_u64(rng.gen());
        let x = normal_order_with(&w, common::random_strategy(&mut r1));
        let y = normal_order_with(&w, common::random_strategy(&mut r2));
        ensure(x == y, format!("{w}: {x} vs {y}"))?;
        ensure(x == normal_order(&w), format!("{w}: strategy-dependent result"))?;
    }
    Ok(())
}

fn quadrature_halving() -> Result<(), String> {
    let loose = PrecisionContext::new(53, 1e-8).map_err(|e| e.to_string())?;
    let tight = loose.with_tol(5e-9).map_err(|e| e.to_string())?;
    for (family, n, s) in [
        (Family::Hasse, 0, c(0.3, 0.2)),
        (Family::Hasse, 3, c(1.7, -0.8)),
        (Family::HStar, 2, c(2.5, 1.0)),
        (Family::HStar, 5, c(0.4, 0.0)),
    ] {
        let a = kernel_integrals::integrate_l(family, n, s, &loose).map_err(|e| e.to_string())?;
        let b = kernel_integrals::integrate_l(family, n, s, &tight).map_err(|e| e.to_string())?;
        let d = (a.value - b.value).norm();
        ensure(
            d <= a.abs_err_estimate + b.abs_err_estimate,
            format!("{family} n={n} s={s}: halving moved the value by {d:e}"),
        )?;
    }
    Ok(())
}

fn conjugate_symmetry() -> Result<(), String> {
    let ctx = PrecisionContext::fast();
    let close = |a: ComplexPoint, b: ComplexPoint, bound: f64, what: &str| {
        ensure(
            (a - b.conj()).norm() <= 2.0 * bound + 1e-14 * a.norm().max(1.0),
            format!("{what}: {a} vs conj {b}"),
        )
    };
    let e = |x: eta_forge::Error| x.to_string();
    for s in [c(0.5, 3.0), c(2.2, -0.7), c(-1.5, 4.0)] {
        let sc = s.conj();
        let spec = FiniteEtaSpec::hasse(6);
        let (a, b) = (finite_eta::eval(&spec, s, &ctx).map_err(e)?, finite_eta::eval(&spec, sc, &ctx).map_err(e)?);
        close(a.value, b.value, a.err_bound.max(b.err_bound), "eta_6")?;
        let spec = FiniteEtaSpec::hstar(4).map_err(e)?;
        let (a, b) = (
            finite_eta::eval_derivative(&spec, s, &ctx).map_err(e)?,
            finite_eta::eval_derivative(&spec, sc, &ctx).map_err(e)?,
        );
        close(a.value, b.value, a.err_bound.max(b.err_bound), "zeta*_4'")?;
        let (a, b) = (hasse_global::eta_global(s, &ctx).map_err(e)?, hasse_global::eta_global(sc, &ctx).map_err(e)?);
        close(a.value, b.value, a.error_bound().max(b.error_bound()), "eta")?;
        let (a, b) = (hasse_global::zeta_global(s, &ctx).map_err(e)?, hasse_global::zeta_global(sc, &ctx).map_err(e)?);
        close(a.value, b.value, a.error_bound().max(b.error_bound()), "zeta")?;
        let (a, b) = (cgamma(s, &ctx).map_err(e)?, cgamma(sc, &ctx).map_err(e)?);
        close(a, b, 1e-13 * a.norm(), "gamma")?;
        if s.re > 0.0 {
            let (a, b) = (weyl::pi_s(s, &ctx).map_err(e)?, weyl::pi_s(sc, &ctx).map_err(e)?);
            close(a.value, b.value, a.error_bound().max(b.error_bound()), "pi_s")?;
            let (a, b) = (
                kernel_integrals::integrate_l(Family::HStar, 3, s, &ctx).map_err(e)?,
                kernel_integrals::integrate_l(Family::HStar, 3, sc, &ctx).map_err(e)?,
            );
            close(a.value, b.value, a.abs_err_estimate.max(b.abs_err_estimate), "L*_3")?;
            let (a, b) = (
                kernel_integrals::rhs_closed_form(Family::HStar, 3, s, &ctx).map_err(e)?,
                kernel_integrals::rhs_closed_form(Family::HStar, 3, sc, &ctx).map_err(e)?,
            );
            close(a, b, 1e-12 * a.norm(), "closed form")?;
        }
    }
    Ok(())
}

fn cli_determinism() -> Result<(), String> {
    let base = ["eta-forge", "--no-timing", "proto", "scan", "--family", "hasse", "--n", "8", "--t-min", "18", "--t-max", "40"];
    let runs: Vec<String> = ["1", "2", "5"]
        .iter()
        .map(|j| {
            let mut argv: Vec<&str> = base.to_vec();
            argv.extend(["--jobs", j]);
            eta_forge::cli::run(argv).stdout
        })
        .collect();
    ensure(runs.iter().all(|r| r == &runs[0]) && !runs[0].is_empty(), "output differs across --jobs")
}

fn property_suites() -> Check {
    confluence()?;
    quadrature_halving()?;
    conjugate_symmetry()?;
    cli_determinism()?;
    Ok("confluence x500, halving, conjugation, --jobs determinism".into())
}

type Criterion = (&'static str, Duration, fn() -> Check);

fn main() {
    let criteria: [Criterion; 14] = [
        ("hasse trivial zeros, exact", Duration::from_secs(5), hasse_trivial_zeros),
        ("hstar trivial zeros, exact", Duration::from_secs(5), hstar_trivial_zeros),
        ("hstar n=1 integral at s=1", Duration::from_secs(1), hstar_quarter_circle),
        ("hasse n=0 reflection integral", Duration::from_secs(2), hasse_reflection),
        ("integral identity sweeps", Duration::from_secs(180), identity_sweeps),
        ("global eta(1) and zeta(2)", Duration::from_secs(5), global_values),
        ("critical-line zero refinement", Duration::from_secs(30), zero_refinement),
        ("eta_1 proto-zeros on the line", Duration::from_secs(10), proto_zero_example),
        ("functional equation residual", Duration::from_secs(10), functional_equation),
        ("weyl lemma suite n<=10", Duration::from_secs(5), lemma_suite),
        ("rest frames for u=1", Duration::from_secs(1), rest_frames_unit),
        ("equilibrium scalar", Duration::from_secs(1), equilibrium),
        ("binomial power and clifford domain", Duration::from_secs(30), operator_power),
        ("property suites", Duration::from_secs(300), property_suites),
    ];
    let mut failed = 0;
    for (i, (name, budget, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let took = start.elapsed();
        let (status, detail) = match (&outcome, took <= *budget) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("{d}; over budget {budget:?}")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("{status} {:>2} {name:<36} {:>9.3}s  {detail}", i + 1, took.as_secs_f64());
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
