//! Scalar side of the binomial operator power: generalized binomial
//! coefficients, their sum `π(s) = Σ_k C(s,k)` and the Clifford domain
//! predicate.

use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hasse_global::GlobalEvalResult;
use crate::numerics::{check_finite, ComplexPoint, ComplexSum, PrecisionContext, FAST_EPS};

/// `C(s, k) = s(s-1)…(s-k+1)/k!`.
pub fn binom_coeff(s: ComplexPoint, k: u32, _ctx: &PrecisionContext) -> ComplexPoint {
    let mut c = ComplexPoint::new(1.0, 0.0);
    for j in 0..k {
        c = c * (s - f64::from(j)) / f64::from(j + 1);
    }
    c
}

/// Levels of consecutive-partial-sum averaging.
const AVERAGING_LEVELS: usize = 10;
const PI_S_MAX_TERMS: usize = 1 << 16;

/// Repeatedly averaged partial sums ending at index `k`, and the spread of
/// the last two levels.
fn averaged(partials: &[ComplexPoint]) -> (ComplexPoint, f64) {
    let mut row = partials.to_vec();
    let mut prev = row.clone();
    while row.len() > 1 {
        prev = row.clone();
        row = row.windows(2).map(|w| (w[0] + w[1]) * 0.5).collect();
    }
    let spread = prev.iter().map(|p| (p - row[0]).norm()).fold(0.0, f64::max);
    (row[0], spread)
}

/// `π(s) = Σ_{k≥0} C(s, k)` for `Re s > 0`.
///
/// The terms behave like `(-1)^k k^{-1-s}/Γ(-s)`, so the series converges
/// only algebraically; the partial sums are accelerated by repeated
/// averaging of neighbours. The reported tail bound is the disagreement of
/// the accelerated values at `K` and `K/2` terms plus the spread of the last
/// averaging level.
pub fn pi_s(s: ComplexPoint, ctx: &PrecisionContext) -> Result<GlobalEvalResult> {
    check_finite(s, "s")?;
    if s.re <= 0.0 {
        return Err(Error::Domain(format!(
            "Re(s) = {} <= 0: the binomial series is not absolutely convergent there",
            s.re
        )));
    }
    let tol = ctx.effective_tol();
    let mut partials = Vec::with_capacity(1024);
    let mut acc = ComplexSum::new();
    let mut term = ComplexPoint::new(1.0, 0.0);
    let mut k = 0usize;
    let mut prev: Option<ComplexPoint> = None;
    let mut target = 32usize;

    loop {
        while partials.len() < target + AVERAGING_LEVELS + 1 {
            if term == ComplexPoint::new(0.0, 0.0) {
                // s is a non-negative integer and the sum is finite
                let value = acc.value();
                return Ok(GlobalEvalResult {
                    value,
                    terms_used: k,
                    tail_bound: 0.0,
                    eval_err: 4.0 * FAST_EPS * acc.abs_total(),
                });
            }
            acc.add(term);
            partials.push(acc.value());
            term = term * (s - k as f64) / (k + 1) as f64;
            k += 1;
        }
        let (est, spread) = averaged(&partials[target..]);
        let eval_err = 8.0 * FAST_EPS * acc.abs_total() * (1.0 + (k as f64).log2());
        if let Some(p) = prev {
            let diff = (est - p).norm();
            if diff + spread <= tol * est.norm() || target >= PI_S_MAX_TERMS {
                if diff + spread > tol * est.norm() && target >= PI_S_MAX_TERMS {
                    return Err(Error::Convergence {
                        terms: partials.len(),
                        best: est,
                    });
                }
                return Ok(GlobalEvalResult {
                    value: est,
                    terms_used: partials.len(),
                    tail_bound: diff + spread,
                    eval_err,
                });
            }
        }
        prev = Some(est);
        target *= 2;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    A,
    B,
}

impl FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a" => Ok(Side::A),
            "b" => Ok(Side::B),
            other => Err(Error::Parse(format!("side '{other}' is not a or b"))),
        }
    }
}

/// Clifford domain: `(σ-1)² + t² < 1`, `1/4 ≤ σ ≤ 3/4`, `0 ≤ t ≤ 1/2` for
/// side A; side B is its mirror under `σ → 1-σ`.
pub fn clifford_contains(s: ComplexPoint, side: Side) -> bool {
    let sigma = match side {
        Side::A => s.re,
        Side::B => 1.0 - s.re,
    };
    let t = s.im;
    let disk = (sigma - 1.0).powi(2) + t * t < 1.0;
    let band_sigma = (0.25..=0.75).contains(&sigma);
    let band_t = (0.0..=0.5).contains(&t);
    disk && band_sigma && band_t
}
