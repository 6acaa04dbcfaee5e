//! Complex arithmetic and the handful of special functions the evaluators
//! need.
//!
//! Two tiers exist. The fast tier works on [`ComplexPoint`] (hardware
//! doubles). The extended tier in [`big`] runs the same operations on
//! software big-floats at a caller-chosen number of mantissa bits, and is
//! used when an alternating sum cancels more digits than a double can
//! spare.
//!
//! All logarithms use the principal branch with the imaginary part in
//! (-π, π]. Any other phase band that shows up in contour arguments is a
//! proof device and is not reflected in this API.

pub mod big;
mod gamma;
mod sum;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use gamma::{cgamma, lanczos_gamma};
pub use sum::{CompensatedSum, ComplexSum};

/// A point `s = σ + it` of the complex plane.
pub type ComplexPoint = Complex64;

/// Machine epsilon of the fast tier (unit roundoff is half of this).
pub const FAST_EPS: f64 = f64::EPSILON;

/// Largest argument for which `exp` stays finite in the fast tier.
const EXP_OVERFLOW: f64 = 709.782_712_893_384;

/// Precision budget shared by all evaluators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrecisionContext {
    working_bits: u32,
    target_rel_err: f64,
}

impl PrecisionContext {
    pub fn new(working_bits: u32, target_rel_err: f64) -> Result<Self> {
        if working_bits < 53 {
            return Err(Error::Precision(format!(
                "working_bits must be at least 53, got {working_bits}"
            )));
        }
        if !(target_rel_err.is_finite() && target_rel_err > 0.0) {
            return Err(Error::Precision(format!(
                "target_rel_err must be a positive finite number, got {target_rel_err}"
            )));
        }
        let floor = 2f64.powi(1 - working_bits as i32);
        if target_rel_err < floor {
            return Err(Error::Precision(format!(
                "target_rel_err {target_rel_err:e} is below 2^(1-{working_bits}) = {floor:e}"
            )));
        }
        Ok(Self {
            working_bits,
            target_rel_err,
        })
    }

    /// 53 bits, relative tolerance 1e-12.
    pub fn fast() -> Self {
        Self {
            working_bits: 53,
            target_rel_err: 1e-12,
        }
    }

    pub fn working_bits(&self) -> u32 {
        self.working_bits
    }

    pub fn target_rel_err(&self) -> f64 {
        self.target_rel_err
    }

    /// Same tolerance, at least `bits` of working precision.
    pub fn with_min_bits(&self, bits: u32) -> Self {
        Self {
            working_bits: self.working_bits.max(bits),
            target_rel_err: self.target_rel_err,
        }
    }

    pub fn with_tol(&self, target_rel_err: f64) -> Result<Self> {
        Self::new(self.working_bits, target_rel_err)
    }

    /// Results leave every evaluator as doubles, so tolerances tighter than
    /// a few ulps cannot be certified on output.
    pub fn effective_tol(&self) -> f64 {
        self.target_rel_err.max(4.0 * FAST_EPS)
    }
}

impl Default for PrecisionContext {
    fn default() -> Self {
        Self::fast()
    }
}

pub(crate) fn check_finite(z: ComplexPoint, what: &str) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} must be finite, got {z}")))
    }
}

pub fn cexp(z: ComplexPoint, _ctx: &PrecisionContext) -> Result<ComplexPoint> {
    check_finite(z, "exp argument")?;
    if z.re > EXP_OVERFLOW {
        return Err(Error::Range(format!(
            "exp overflows for Re(z) = {} > {EXP_OVERFLOW}",
            z.re
        )));
    }
    Ok(z.exp())
}

/// Principal logarithm, `Im ∈ (-π, π]`.
pub fn cln(z: ComplexPoint, _ctx: &PrecisionContext) -> Result<ComplexPoint> {
    check_finite(z, "log argument")?;
    if z.re == 0.0 && z.im == 0.0 {
        return Err(Error::Domain("logarithm of zero".into()));
    }
    let mut w = z.ln();
    // atan2(-0.0, x<0) lands on -π; fold it onto the closed end of the band
    if w.im == -std::f64::consts::PI {
        w.im = std::f64::consts::PI;
    }
    Ok(w)
}

/// `z^s = exp(s · ln z)` on the principal branch.
pub fn cpow(z: ComplexPoint, s: ComplexPoint, ctx: &PrecisionContext) -> Result<ComplexPoint> {
    check_finite(z, "base")?;
    check_finite(s, "exponent")?;
    if z.re == 0.0 && z.im == 0.0 {
        return if s.re > 0.0 {
            Ok(ComplexPoint::new(0.0, 0.0))
        } else {
            Err(Error::Domain(format!(
                "0^s is undefined for Re(s) = {} <= 0",
                s.re
            )))
        };
    }
    if s.im == 0.0 && s.re.fract() == 0.0 && s.re.abs() <= 1024.0 {
        let n = s.re as i32;
        if n == 1 {
            return Ok(z);
        }
        let p = z.powi(n);
        check_finite(p, "power")?;
        return Ok(p);
    }
    let l = cln(z, ctx)?;
    cexp(s * l, ctx)
}

pub fn csin(z: ComplexPoint, _ctx: &PrecisionContext) -> Result<ComplexPoint> {
    check_finite(z, "sin argument")?;
    if z.im.abs() > EXP_OVERFLOW {
        return Err(Error::Range(format!(
            "sin overflows for |Im(z)| = {}",
            z.im.abs()
        )));
    }
    Ok(z.sin())
}

/// `sin(π z)` with the argument reduced modulo 2 first, so that values at
/// and near integers keep full absolute accuracy.
pub fn sin_pi(z: ComplexPoint) -> ComplexPoint {
    let r = z.re.rem_euclid(2.0);
    // sin(π(r + i y)) = sin(πr) cosh(πy) + i cos(πr) sinh(πy)
    let (s, c) = sin_cos_pi_real(r);
    let y = std::f64::consts::PI * z.im;
    ComplexPoint::new(s * y.cosh(), c * y.sinh())
}

/// `cos(π z)`, argument reduced like [`sin_pi`].
pub fn cos_pi(z: ComplexPoint) -> ComplexPoint {
    let r = z.re.rem_euclid(2.0);
    let (s, c) = sin_cos_pi_real(r);
    let y = std::f64::consts::PI * z.im;
    ComplexPoint::new(c * y.cosh(), -s * y.sinh())
}

fn sin_cos_pi_real(r: f64) -> (f64, f64) {
    use std::f64::consts::PI;
    // exact values at quarter turns, otherwise reduce to [-1/4, 1/4]
    let q = (r * 2.0).round();
    let d = r - q * 0.5;
    let (sd, cd) = (PI * d).sin_cos();
    match (q as i64).rem_euclid(4) {
        0 => (sd, cd),
        1 => (cd, -sd),
        2 => (-sd, -cd),
        _ => (-cd, sd),
    }
}

/// Whether `z` is a non-positive integer (a pole of Γ).
pub(crate) fn is_nonpositive_integer(z: ComplexPoint) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0
}
