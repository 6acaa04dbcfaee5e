//! `L_n(s) = ∫₀^∞ x^{s-1} / K_n(x) dx` for the two kernels and the closed
//! forms they reduce to:
//!
//! * `H*_n`: `L_n(s) = π / sin(πs/2) · ζ*_n(-s) / (2n)!`, `0 < Re s < 2n`
//! * `H_n`:  `L_n(s) = π / sin(πs)  · η_n(1-s) / n!`,    `0 < Re s < n+1`
//!
//! The integral is split at 1 and the upper half mapped back onto `[0, 1]`
//! by `x → 1/x`, which turns it into `∫₀¹ y^{D-s-1} / K̃(y) dy` with
//! `K̃(y) = y^D K(1/y)`. Both halves then have a single algebraic end-point
//! singularity at 0 and go to tanh-sinh.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite_eta::{self, eval_exact_integer, Family, FiniteEtaSpec};
use crate::numerics::{check_finite, sin_pi, ComplexPoint, PrecisionContext};
use crate::quadrature::{tanh_sinh_01, QuadOptions, QuadratureResult};

/// Integrals are evaluated on doubles; `(2n)!` must stay finite.
pub const MAX_N: u32 = 80;

/// Radius around integer (Hasse) or even-integer (H*) `s` inside which the
/// closed form is a 0/0 limit.
pub const POLE_GUARD: f64 = 1e-3;

/// Budget per integral.
pub const MAX_EVALS: usize = 200_000;

/// Integral against closed form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityResidual {
    pub lhs: ComplexPoint,
    pub rhs: ComplexPoint,
    /// `|lhs - rhs| / max(1, |rhs|)`.
    pub residual: f64,
    pub lhs_err_estimate: f64,
    pub skipped: bool,
    pub reason: Option<String>,
}

fn check_n(family: Family, n: u32) -> Result<FiniteEtaSpec> {
    if n > MAX_N {
        return Err(Error::Domain(format!("n = {n} exceeds the supported maximum {MAX_N}")));
    }
    FiniteEtaSpec::new(family, n)
}

/// `K_n(x)` evaluated as a product of its linear or quadratic factors.
pub fn kernel_value(family: Family, n: u32, x: f64) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain(format!("kernel argument must be positive, got {x}")));
    }
    check_n(family, n)?;
    let v = match family {
        Family::Hasse => (1..=n + 1).map(|k| x + f64::from(k)).product::<f64>(),
        Family::HStar => (1..=n)
            .map(|k| {
                let k = f64::from(k);
                x * x + k * k
            })
            .product::<f64>(),
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Range(format!("kernel overflows at x = {x}, n = {n}")))
    }
}

/// `y^D K(1/y)`, the kernel after the inversion `x = 1/y`.
fn inverted_kernel(family: Family, n: u32, y: f64) -> f64 {
    match family {
        Family::Hasse => (1..=n + 1).map(|k| 1.0 + f64::from(k) * y).product(),
        Family::HStar => (1..=n)
            .map(|k| {
                let ky = f64::from(k) * y;
                1.0 + ky * ky
            })
            .product(),
    }
}

/// Open strip `0 < Re s < D` in which the integral converges.
pub fn convergence_window(family: Family, n: u32) -> (f64, f64) {
    match family {
        Family::Hasse => (0.0, f64::from(n + 1)),
        Family::HStar => (0.0, f64::from(2 * n)),
    }
}

fn check_window(family: Family, n: u32, s: ComplexPoint) -> Result<()> {
    let (lo, hi) = convergence_window(family, n);
    if s.re > lo && s.re < hi {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "Re(s) = {} is outside the convergence window {lo} < Re(s) < {hi} for {family} n = {n}",
            s.re
        )))
    }
}

/// `∫₀¹ y^{α-1} / k(y) dy`. Below the sampled range `[y₀, 1]` the
/// integrand is `y^{α-1}/k(0) · (1 + O(y))`, which integrates to
/// `y₀^α / (α k(0))`.
fn singular_piece(
    alpha: ComplexPoint,
    k: impl Fn(f64) -> f64,
    opts: &QuadOptions,
) -> QuadratureResult {
    let am1 = alpha - 1.0;
    let raw = tanh_sinh_01(|y, _| (am1 * y.ln()).exp() / k(y), opts);
    let mut r = raw.result;
    let ln_y0 = raw.ln_x_lower;
    let tail = (alpha * ln_y0).exp() / (alpha * k(0.0));
    r.value += tail;
    // first neglected order is relative O(y₀ · deg k)
    r.abs_err_estimate += tail.norm() * ln_y0.exp() * 64.0;
    r
}

/// `L_n(s)` by quadrature.
pub fn integrate_l(
    family: Family,
    n: u32,
    s: ComplexPoint,
    ctx: &PrecisionContext,
) -> Result<QuadratureResult> {
    check_finite(s, "s")?;
    check_n(family, n)?;
    check_window(family, n, s)?;
    let opts = QuadOptions {
        rel_tol: ctx.effective_tol(),
        abs_tol: 1e-15,
        max_evals: MAX_EVALS / 2,
        ..QuadOptions::default()
    };
    let degree = f64::from(match family {
        Family::Hasse => n + 1,
        Family::HStar => 2 * n,
    });
    // [0, 1]: x^{s-1} / K(x)
    let lower = singular_piece(
        s,
        |x| match family {
            Family::Hasse => (1..=n + 1).map(|k| x + f64::from(k)).product(),
            Family::HStar => (1..=n)
                .map(|k| x * x + f64::from(k * k))
                .product(),
        },
        &opts,
    );
    // [1, ∞) as y = 1/x: y^{D-s-1} / K̃(y)
    let upper = singular_piece(
        ComplexPoint::new(degree, 0.0) - s,
        |y| inverted_kernel(family, n, y),
        &opts,
    );
    Ok(QuadratureResult {
        value: lower.value + upper.value,
        abs_err_estimate: lower.abs_err_estimate + upper.abs_err_estimate,
        evaluations: lower.evaluations + upper.evaluations,
        budget_exhausted: lower.budget_exhausted || upper.budget_exhausted,
    })
}

/// Nearest pole of the sine prefactor and its index `m` (`s₀ = m` for
/// Hasse, `s₀ = 2m` for H*).
fn nearest_prefactor_pole(family: Family, s: ComplexPoint) -> (i64, ComplexPoint) {
    match family {
        Family::Hasse => {
            let m = s.re.round();
            (m as i64, ComplexPoint::new(m, 0.0))
        }
        Family::HStar => {
            let m = (s.re / 2.0).round();
            (m as i64, ComplexPoint::new(2.0 * m, 0.0))
        }
    }
}

/// The finite-eta argument paired with `s` in the closed form.
fn eta_argument(family: Family, s: ComplexPoint) -> ComplexPoint {
    match family {
        Family::Hasse => ComplexPoint::new(1.0, 0.0) - s,
        Family::HStar => -s,
    }
}

fn factorial_f64(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

/// Closed-form right-hand side. Within [`POLE_GUARD`] of a sine zero the
/// value is taken as a limit when the eta factor vanishes there, and a
/// pole error is returned otherwise.
pub fn rhs_closed_form(
    family: Family,
    n: u32,
    s: ComplexPoint,
    ctx: &PrecisionContext,
) -> Result<ComplexPoint> {
    check_finite(s, "s")?;
    let spec = check_n(family, n)?;
    let norm = match family {
        Family::Hasse => factorial_f64(n),
        Family::HStar => factorial_f64(2 * n),
    };
    // sin(c s) with c = π (Hasse) or π/2 (H*)
    let (c, scaled) = match family {
        Family::Hasse => (std::f64::consts::PI, s),
        Family::HStar => (std::f64::consts::FRAC_PI_2, s / 2.0),
    };
    let (m, pole) = nearest_prefactor_pole(family, s);
    let delta = s - pole;
    if delta.norm() >= POLE_GUARD {
        let eta = finite_eta::eval(&spec, eta_argument(family, s), ctx)?;
        return Ok(std::f64::consts::PI * eta.value / (sin_pi(scaled) * norm));
    }
    // inside the guard: the eta factor must vanish at the pole itself
    let eta_arg_at_pole = match family {
        Family::Hasse => 1 - m,
        Family::HStar => -2 * m,
    };
    if !eval_exact_integer(&spec, eta_arg_at_pole).is_zero() {
        return Err(Error::pole(
            pole,
            format!("sine prefactor vanishes at s = {pole} but the eta factor does not"),
        ));
    }
    Ok(removable_limit(&spec, family, pole, delta, c, m, ctx)? / norm)
}

/// `π f(s) / sin(c s)` near a common zero `s₀` of numerator and
/// denominator, from the cubic Taylor polynomial of `f` at `s₀`.
fn removable_limit(
    spec: &FiniteEtaSpec,
    family: Family,
    pole: ComplexPoint,
    delta: ComplexPoint,
    c: f64,
    m: i64,
    ctx: &PrecisionContext,
) -> Result<ComplexPoint> {
    let arg = eta_argument(family, pole);
    // f(s) = F(arg(s)) with d arg/ds = -1
    let mut taylor = [ComplexPoint::new(0.0, 0.0); 3];
    for (j, slot) in taylor.iter_mut().enumerate() {
        let order = j as u32 + 1;
        let d = finite_eta::eval_derivative_order(spec, arg, order, ctx)?.value;
        let sign = if order.is_multiple_of(2) { 1.0 } else { -1.0 };
        *slot = d * sign;
    }
    // (f'δ + f''δ²/2 + f'''δ³/6) / sin(cδ) = (f' + f''δ/2 + f'''δ²/6) · δ/sin(cδ)
    let poly = taylor[0] + taylor[1] * delta / 2.0 + taylor[2] * delta * delta / 6.0;
    let cd = delta * c;
    let sinc_inv = if cd.norm() < 1e-4 {
        (ComplexPoint::new(1.0, 0.0) + cd * cd / 6.0 + cd * cd * cd * cd * 7.0 / 360.0) / c
    } else {
        delta / cd.sin()
    };
    // sin(c s) = cos(c s₀) sin(cδ) = (-1)^m sin(cδ)
    let parity = if m.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    Ok(std::f64::consts::PI * parity * poly * sinc_inv)
}

/// Whether `s` sits inside a pole-guard annulus.
pub fn in_pole_guard(family: Family, s: ComplexPoint) -> bool {
    let (_, pole) = nearest_prefactor_pole(family, s);
    (s - pole).norm() < POLE_GUARD
}

/// Integral against closed form at one point.
pub fn verify_identity(
    family: Family,
    n: u32,
    s: ComplexPoint,
    ctx: &PrecisionContext,
) -> Result<IdentityResidual> {
    check_n(family, n)?;
    check_window(family, n, s)?;
    let lhs = integrate_l(family, n, s, ctx)?;
    if in_pole_guard(family, s) {
        let (_, pole) = nearest_prefactor_pole(family, s);
        return Ok(IdentityResidual {
            lhs: lhs.value,
            rhs: ComplexPoint::new(f64::NAN, f64::NAN),
            residual: 0.0,
            lhs_err_estimate: lhs.abs_err_estimate,
            skipped: true,
            reason: Some(format!(
                "s lies within {POLE_GUARD} of {pole}, where the closed form is 0/0"
            )),
        });
    }
    let rhs = rhs_closed_form(family, n, s, ctx)?;
    let residual = (lhs.value - rhs).norm() / rhs.norm().max(1.0);
    Ok(IdentityResidual {
        lhs: lhs.value,
        rhs,
        residual,
        lhs_err_estimate: lhs.abs_err_estimate,
        skipped: false,
        reason: None,
    })
}

/// Points `s = m` (Hasse) or `s = 2m` (H*) inside the convergence window
/// where the sine pole is cancelled by a zero of the eta factor.
pub fn pole_free_points(family: Family, n: u32) -> Vec<i64> {
    match family {
        Family::Hasse => (1..=i64::from(n)).collect(),
        Family::HStar => (1..i64::from(n)).map(|m| 2 * m).collect(),
    }
}

/// `count` deterministic sample points spread over the convergence window,
/// with small imaginary parts, none inside a pole-guard annulus.
pub fn identity_sample_points(family: Family, n: u32, count: usize) -> Vec<ComplexPoint> {
    let (lo, hi) = convergence_window(family, n);
    let width = hi - lo;
    (0..count)
        .map(|j| {
            let sigma = lo + width * (j as f64 + 0.5) / count as f64;
            let t = 1.5 * (1.7 * j as f64 + f64::from(n)).sin();
            let mut s = ComplexPoint::new(sigma, t);
            if in_pole_guard(family, s) {
                s.im += 10.0 * POLE_GUARD;
            }
            s
        })
        .collect()
}
