//! Global eta and zeta from Hasse's series
//! `η(s) = Σ_{n≥0} 2^{-(n+1)} η_n(s)`, which converges on the whole plane.
//!
//! The weights `2^{-(n+1)} C(n,k)` are generated row by row (each row is the
//! previous one averaged with its shift) and the powers `(k+1)^{-s}` are
//! shared between rows, so the first `N` terms cost `O(N²)` multiplications
//! and `N` complex powers.

use std::f64::consts::{LN_2, PI};

use astro_float::BigFloat;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::big::{self, BigComplex};
use crate::numerics::{
    cgamma, check_finite, cos_pi, cpow, ComplexPoint, ComplexSum, PrecisionContext, FAST_EPS,
};

/// Maximum number of Hasse terms.
pub const SERIES_CAP: usize = 400;

/// Above this `|Im s|` the series is always summed on the extended tier.
pub const FAST_T_LIMIT: f64 = 60.0;

/// Radius of the disks around zeros of `1 - 2^{1-s}` that `zeta_global`
/// refuses.
pub const EXCLUSION_RADIUS: f64 = 1e-6;

/// Residual `|η(1/2+it)|` a refined zero must reach.
pub const ZERO_RESIDUAL_TOL: f64 = 1e-10;

const CAPTURE_THRESHOLD: f64 = 0.5;
const MAX_NEWTON_STEP: f64 = 0.5;
const MAX_NEWTON_ITERATIONS: u32 = 50;
/// Refinement fails once `t` leaves `t_initial ± CAPTURE_HALF_WIDTH`.
const CAPTURE_HALF_WIDTH: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GlobalEvalResult {
    pub value: ComplexPoint,
    pub terms_used: usize,
    /// Bound on the neglected tail, `8 ×` the last term.
    pub tail_bound: f64,
    /// Accumulated rounding error of the partial sum.
    pub eval_err: f64,
}

impl GlobalEvalResult {
    pub fn error_bound(&self) -> f64 {
        self.tail_bound + self.eval_err
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroRecord {
    pub t: f64,
    pub residual_eta: f64,
    pub iterations: u32,
}

/// Partial sums of the series and (optionally) of its termwise derivative.
#[derive(Debug, Clone, Copy)]
struct Series {
    value: ComplexPoint,
    derivative: ComplexPoint,
    terms_used: usize,
    tail_bound: f64,
    eval_err: f64,
}

impl Series {
    fn result(&self) -> GlobalEvalResult {
        GlobalEvalResult {
            value: self.value,
            terms_used: self.terms_used,
            tail_bound: self.tail_bound,
            eval_err: self.eval_err,
        }
    }
}

/// Three consecutive terms below `max(tol·|partial|, noise)` end the sum.
/// The noise floor keeps the rule usable where the partial sum itself
/// tends to zero.
struct StoppingRule {
    tol: f64,
    quiet: usize,
}

impl StoppingRule {
    fn update(&mut self, term: f64, partial: f64, noise: f64) -> bool {
        if term < (self.tol * partial).max(noise) {
            self.quiet += 1;
        } else {
            self.quiet = 0;
        }
        self.quiet >= 3
    }
}

fn uses_extended(s: ComplexPoint, ctx: &PrecisionContext) -> bool {
    ctx.working_bits() > 53 || s.im.abs() > FAST_T_LIMIT
}

fn hasse_series(
    s: ComplexPoint,
    ctx: &PrecisionContext,
    cap: usize,
    derivative: bool,
) -> Result<Series> {
    check_finite(s, "s")?;
    if cap == 0 {
        return Err(Error::Domain("series cap must be positive".into()));
    }
    if uses_extended(s, ctx) {
        series_extended(s, ctx, cap, derivative)
    } else {
        series_fast(s, ctx.effective_tol(), cap, derivative)
    }
}

fn series_fast(s: ComplexPoint, tol: f64, cap: usize, derivative: bool) -> Result<Series> {
    let mut powers: Vec<ComplexPoint> = Vec::with_capacity(cap);
    let mut logs: Vec<f64> = Vec::with_capacity(cap);
    let mut row: Vec<f64> = Vec::with_capacity(cap);
    let mut acc = ComplexSum::new();
    let mut dacc = ComplexSum::new();
    let mut err = 0.0;
    let mut rule = StoppingRule { tol, quiet: 0 };
    let s_abs = s.norm();

    for n in 0..cap {
        let ln = ((n + 1) as f64).ln();
        logs.push(ln);
        powers.push(if n == 0 {
            ComplexPoint::new(1.0, 0.0)
        } else {
            (-s * ln).exp()
        });
        if n == 0 {
            row.push(0.5);
        } else {
            row.push(0.0);
            for k in (1..=n).rev() {
                row[k] = 0.5 * (row[k] + row[k - 1]);
            }
            row[0] *= 0.5;
        }

        let mut term = ComplexSum::new();
        let mut dterm = ComplexSum::new();
        let mut weight = 0.0;
        for k in 0..=n {
            let w = if k % 2 == 0 { row[k] } else { -row[k] };
            let v = powers[k] * w;
            term.add(v);
            if derivative {
                dterm.add(v * -logs[k]);
            }
            weight += v.norm() * (s_abs * logs[k] + n as f64 + 4.0);
        }
        err += FAST_EPS * weight;
        let t = term.value();
        acc.add(t);
        dacc.add(dterm.value());

        if rule.update(t.norm(), acc.value().norm(), err) {
            return Ok(Series {
                value: acc.value(),
                derivative: dacc.value(),
                terms_used: n + 1,
                tail_bound: 8.0 * t.norm(),
                eval_err: err + FAST_EPS * acc.value().norm(),
            });
        }
    }
    Err(Error::Convergence {
        terms: cap,
        best: acc.value(),
    })
}

fn series_extended(
    s: ComplexPoint,
    ctx: &PrecisionContext,
    cap: usize,
    derivative: bool,
) -> Result<Series> {
    let bits = ctx.working_bits().max(128);
    let p = big::word_bits(bits);
    let unit = 2f64.powi(-(p as i32));
    let tol = ctx.effective_tol();
    let neg_s = BigComplex::from_c64(-s, p);
    let half = BigFloat::from_f64(0.5, p);
    let s_abs = s.norm();

    let mut powers: Vec<BigComplex> = Vec::with_capacity(cap);
    let mut logs: Vec<BigComplex> = Vec::with_capacity(cap);
    let mut logs_f: Vec<f64> = Vec::with_capacity(cap);
    let mut row: Vec<BigFloat> = Vec::with_capacity(cap);
    let mut acc = BigComplex::zero(p);
    let mut dacc = BigComplex::zero(p);
    let mut err = 0.0;
    let mut rule = StoppingRule { tol, quiet: 0 };

    for n in 0..cap {
        let base = BigComplex::from_real(big::from_i64(n as i64 + 1, p), p);
        logs_f.push(((n + 1) as f64).ln());
        powers.push(if n == 0 { BigComplex::one(p) } else { base.pow(&neg_s, p)? });
        if derivative {
            logs.push(if n == 0 { BigComplex::zero(p) } else { base.ln(p)?.neg() });
        }
        if n == 0 {
            row.push(half.clone());
        } else {
            row.push(BigFloat::from_word(0, p));
            for k in (1..=n).rev() {
                let sum = row[k].add(&row[k - 1], p, astro_float::RoundingMode::ToEven);
                row[k] = sum.mul(&half, p, astro_float::RoundingMode::ToEven);
            }
            row[0] = row[0].mul(&half, p, astro_float::RoundingMode::ToEven);
        }

        let mut term = BigComplex::zero(p);
        let mut dterm = BigComplex::zero(p);
        let mut weight = 0.0;
        for k in 0..=n {
            let mut v = powers[k].scale(&row[k], p);
            if k % 2 == 1 {
                v = v.neg();
            }
            weight += v.abs_f64() * (s_abs * logs_f[k] + n as f64 + 8.0);
            if derivative {
                dterm = dterm.add(&v.mul(&logs[k], p), p);
            }
            term = term.add(&v, p);
        }
        err += unit * weight;
        acc = acc.add(&term, p);
        if derivative {
            dacc = dacc.add(&dterm, p);
        }

        let t = term.abs_f64();
        if rule.update(t, acc.abs_f64(), err) {
            let value = acc.to_c64();
            return Ok(Series {
                value,
                derivative: dacc.to_c64(),
                terms_used: n + 1,
                tail_bound: 8.0 * t,
                eval_err: err + FAST_EPS * value.norm(),
            });
        }
    }
    Err(Error::Convergence {
        terms: cap,
        best: acc.to_c64(),
    })
}

/// Dirichlet eta on the whole plane.
pub fn eta_global(s: ComplexPoint, ctx: &PrecisionContext) -> Result<GlobalEvalResult> {
    eta_global_capped(s, ctx, SERIES_CAP)
}

/// [`eta_global`] with an explicit series cap.
pub fn eta_global_capped(
    s: ComplexPoint,
    ctx: &PrecisionContext,
    cap: usize,
) -> Result<GlobalEvalResult> {
    hasse_series(s, ctx, cap, false).map(|r| r.result())
}

/// Centre of the exclusion disk containing `s`, if any.
pub fn exclusion_center(s: ComplexPoint) -> Option<ComplexPoint> {
    let k = (s.im * LN_2 / (2.0 * PI)).round();
    let center = ComplexPoint::new(1.0, 2.0 * PI * k / LN_2);
    ((s - center).norm() < EXCLUSION_RADIUS).then_some(center)
}

/// `1 - 2^{1-s}`, accurate near its zeros.
fn eta_zeta_factor(s: ComplexPoint) -> ComplexPoint {
    let a = (1.0 - s.re) * LN_2;
    // reduce the angle before taking cos - 1
    let b = (-s.im * LN_2).rem_euclid(2.0 * PI);
    let b = if b > PI { b - 2.0 * PI } else { b };
    let half = (0.5 * b).sin();
    let re = a.exp_m1() * b.cos() - 2.0 * half * half;
    let im = a.exp() * b.sin();
    -ComplexPoint::new(re, im)
}

/// Riemann zeta as `η(s) / (1 - 2^{1-s})`.
pub fn zeta_global(s: ComplexPoint, ctx: &PrecisionContext) -> Result<GlobalEvalResult> {
    check_finite(s, "s")?;
    if let Some(center) = exclusion_center(s) {
        return Err(Error::PrefactorSingularity { center });
    }
    let eta = eta_global(s, ctx)?;
    let f = eta_zeta_factor(s);
    let scale = 1.0 / f.norm();
    let value = eta.value / f;
    // the reduced angle carries |Im s|·eps of absolute error
    let factor_err = 4.0 * FAST_EPS * (1.0 + s.norm()) * scale;
    Ok(GlobalEvalResult {
        value,
        terms_used: eta.terms_used,
        tail_bound: eta.tail_bound * scale,
        eval_err: eta.eval_err * scale + value.norm() * factor_err,
    })
}

fn precondition(e: Error) -> Error {
    match e {
        Error::PrefactorSingularity { center } => Error::Domain(format!(
            "argument lies within {EXCLUSION_RADIUS:e} of the prefactor zero {center}"
        )),
        other => other,
    }
}

/// Relative mismatch in `ζ(s)/ζ(1-s) = (2π)^{s-1} · 2 sin(πs/2) · Γ(1-s)`.
pub fn functional_equation_residual(s: ComplexPoint, ctx: &PrecisionContext) -> Result<f64> {
    check_finite(s, "s")?;
    let one = ComplexPoint::new(1.0, 0.0);
    let r = one - s;
    let zs = zeta_global(s, ctx).map_err(precondition)?;
    let zr = zeta_global(r, ctx).map_err(precondition)?;
    if zr.value.norm() <= 1e-8 {
        return Err(Error::Domain(format!(
            "zeta(1 - s) = {} is too close to zero",
            zr.value
        )));
    }
    // 2 sin(πs/2) Γ(1-s) = π / (cos(πs/2) Γ(s)); the right side has no
    // removable singularities at the positive even integers
    let gamma = cgamma(s, ctx).map_err(|_| Error::Domain("right-hand side vanishes".into()))?;
    let denom = cos_pi(s * 0.5) * gamma;
    if denom.norm() == 0.0 {
        return Err(Error::Domain(format!("Gamma(1 - s) has a pole at {r}")));
    }
    let rhs = cpow(ComplexPoint::new(2.0 * PI, 0.0), s - one, ctx)? * PI / denom;
    if rhs.norm() == 0.0 || !rhs.norm().is_finite() {
        return Err(Error::Domain("right-hand side is not finite and nonzero".into()));
    }
    Ok((zs.value / zr.value - rhs).norm() / rhs.norm())
}

/// Newton refinement of a zero of `t ↦ η(1/2 + it)`.
///
/// The step is `-Im(η/η')`: the component of the complex Newton step along
/// the critical line.
pub fn refine_zero(t_initial: f64, ctx: &PrecisionContext) -> Result<ZeroRecord> {
    if !t_initial.is_finite() {
        return Err(Error::Domain("t must be finite".into()));
    }
    let at = |t: f64| hasse_series(ComplexPoint::new(0.5, t), ctx, SERIES_CAP, true);
    let mut cur = at(t_initial)?;
    if cur.value.norm() > CAPTURE_THRESHOLD {
        return Err(Error::NoConvergence(format!(
            "|eta(1/2 + {t_initial}i)| = {:.3e} exceeds the capture threshold {CAPTURE_THRESHOLD}",
            cur.value.norm()
        )));
    }
    let mut t = t_initial;
    for it in 1..=MAX_NEWTON_ITERATIONS {
        if cur.derivative.norm() == 0.0 {
            return Err(Error::NoConvergence(format!("eta' vanishes at t = {t}")));
        }
        let step = -(cur.value / cur.derivative).im;
        let step = step.clamp(-MAX_NEWTON_STEP, MAX_NEWTON_STEP);
        t += step;
        if (t - t_initial).abs() > CAPTURE_HALF_WIDTH {
            return Err(Error::NoConvergence(format!(
                "iterate t = {t} left the capture interval {t_initial} ± {CAPTURE_HALF_WIDTH}"
            )));
        }
        cur = at(t)?;
        let residual = cur.value.norm();
        if residual <= ZERO_RESIDUAL_TOL && step.abs() <= 1e-8 {
            return Ok(ZeroRecord {
                t,
                residual_eta: residual,
                iterations: it,
            });
        }
    }
    Err(Error::NoConvergence(format!(
        "no convergence after {MAX_NEWTON_ITERATIONS} iterations (t = {t}, |eta| = {:.3e})",
        cur.value.norm()
    )))
}
