//! Tanh-sinh (double exponential) quadrature on `[0, 1]`.
//!
//! Abscissae are produced together with their distance to the right end
//! point, so integrands with algebraic singularities at either end can be
//! evaluated without cancellation. The transformed trapezoid sums are
//! refined by halving the step; the difference between the last two levels
//! is the reported error estimate.

use serde::{Deserialize, Serialize};

use crate::numerics::{ComplexPoint, ComplexSum, FAST_EPS};

/// Smallest abscissa the fast tier samples; below this the caller is
/// expected to supply an analytic tail.
pub const X_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_evals: usize,
    pub max_level: u32,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            abs_tol: 1e-14,
            max_evals: 200_000,
            max_level: 12,
        }
    }
}

/// Outcome of one integration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: ComplexPoint,
    pub abs_err_estimate: f64,
    pub evaluations: usize,
    /// True when the budget ran out before the tolerance was met; the
    /// error estimate has then been inflated.
    pub budget_exhausted: bool,
}

/// Result of [`tanh_sinh_01`], plus where the sampled part of `[0, 1]`
/// effectively begins: the trapezoid sum stops half a step below the
/// outermost left node, and `ln_x_lower` is the logarithm of the abscissa
/// there. An analytic tail for `[0, x_lower]` starts at that point.
#[derive(Debug, Clone, Copy)]
pub struct RawQuadrature {
    pub result: QuadratureResult,
    pub ln_x_lower: f64,
}

/// `ln x(t)` without underflow.
fn ln_abscissa(t: f64) -> f64 {
    let u = std::f64::consts::FRAC_PI_2 * t.sinh();
    // x = 1/(1+e^{-2u})
    if u >= 0.0 {
        -(-2.0 * u).exp().ln_1p()
    } else {
        2.0 * u - (2.0 * u).exp().ln_1p()
    }
}

struct Node {
    x: f64,
    one_minus_x: f64,
    weight: f64,
}

fn node(t: f64) -> Node {
    let u = std::f64::consts::FRAC_PI_2 * t.sinh();
    // x = 1/(1+e^{-2u}), 1-x = 1/(1+e^{2u}), both without cancellation
    let (x, one_minus_x) = if u >= 0.0 {
        let e = (-2.0 * u).exp();
        (1.0 / (1.0 + e), e / (1.0 + e))
    } else {
        let e = (2.0 * u).exp();
        (e / (1.0 + e), 1.0 / (1.0 + e))
    };
    let weight = std::f64::consts::PI * t.cosh() * x * one_minus_x;
    Node {
        x,
        one_minus_x,
        weight,
    }
}

/// `∫₀¹ f(x) dx`, where `f` receives `(x, 1 - x)`.
pub fn tanh_sinh_01<F>(f: F, opts: &QuadOptions) -> RawQuadrature
where
    F: Fn(f64, f64) -> ComplexPoint,
{
    let mut walker = Walker {
        f: &f,
        evals: 0,
        t_min: 0.0,
    };
    // level 0 samples t = k·h for all integers k
    let mut h = 0.5;
    let mut acc = ComplexSum::new();
    walker.sweep(0.0, h, &mut acc);
    let mut estimate = acc.value() * h;
    let mut err = f64::INFINITY;
    let mut exhausted = false;

    for _ in 1..=opts.max_level {
        // refinement adds the odd multiples of h/2
        walker.sweep(h / 2.0, h, &mut acc);
        h /= 2.0;
        let next = acc.value() * h;
        let roundoff = 64.0 * FAST_EPS * acc.abs_total() * h;
        err = (next - estimate).norm().max(roundoff);
        estimate = next;
        if err <= opts.abs_tol.max(opts.rel_tol * estimate.norm()) {
            break;
        }
        if walker.evals >= opts.max_evals {
            exhausted = true;
            err *= 10.0;
            break;
        }
    }

    RawQuadrature {
        result: QuadratureResult {
            value: estimate,
            abs_err_estimate: err,
            evaluations: walker.evals,
            budget_exhausted: exhausted,
        },
        ln_x_lower: ln_abscissa(walker.t_min - h / 2.0),
    }
}

const T_MAX: f64 = 8.0;

struct Walker<'a, F> {
    f: &'a F,
    evals: usize,
    t_min: f64,
}

impl<F: Fn(f64, f64) -> ComplexPoint> Walker<'_, F> {
    /// Adds the nodes `±(start + k·stride)`, walking outwards on each side
    /// until contributions are negligible or the abscissae hit the floor.
    fn sweep(&mut self, start: f64, stride: f64, acc: &mut ComplexSum) {
        if start == 0.0 {
            self.visit(0.0, acc);
        }
        for sign in [1.0, -1.0] {
            let mut t = if start == 0.0 { stride } else { start };
            let mut quiet = 0;
            while t <= T_MAX {
                match self.visit(sign * t, acc) {
                    None => break,
                    Some(c) if c <= 1e-3 * FAST_EPS * acc.value().norm() => {
                        quiet += 1;
                        if quiet >= 3 {
                            break;
                        }
                    }
                    Some(_) => quiet = 0,
                }
                t += stride;
            }
        }
    }

    fn visit(&mut self, t: f64, acc: &mut ComplexSum) -> Option<f64> {
        let nd = node(t);
        if nd.x < X_FLOOR || nd.one_minus_x == 0.0 || nd.weight == 0.0 {
            return None;
        }
        let v = (self.f)(nd.x, nd.one_minus_x) * nd.weight;
        self.evals += 1;
        if !(v.re.is_finite() && v.im.is_finite()) {
            return None;
        }
        self.t_min = self.t_min.min(t);
        acc.add(v);
        Some(v.norm())
    }
}
