//! Extended tier: complex numbers over `astro_float::BigFloat`.
//!
//! Every operation takes the target precision in bits explicitly; nothing
//! here reads global state except the constant cache, which only memoises
//! π and ln 2 and never changes a result.

use std::cell::RefCell;

use astro_float::{BigFloat, Consts, RoundingMode, Sign, Word};
use num_bigint::{BigInt, Sign as IntSign};

use super::ComplexPoint;
use crate::error::{Error, Result};

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constant cache"));
}

fn with_cc<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

/// Rounds a precision request up to whole 64-bit words.
pub fn word_bits(bits: u32) -> usize {
    (bits as usize).div_ceil(64).max(1) * 64
}

pub fn pi(p: usize) -> BigFloat {
    with_cc(|cc| cc.pi(p, RM))
}

pub fn from_f64(x: f64, p: usize) -> BigFloat {
    BigFloat::from_f64(x, p)
}

pub fn from_i64(x: i64, p: usize) -> BigFloat {
    BigFloat::from_i64(x, p)
}

/// Exact conversion (the result carries as many bits as the integer needs,
/// rounded to `p` if that is smaller).
pub fn from_bigint(n: &BigInt, p: usize) -> BigFloat {
    let (sign, digits) = n.to_u64_digits();
    if digits.is_empty() {
        return BigFloat::from_word(0, p);
    }
    let words: Vec<Word> = digits.iter().map(|&d| d as Word).collect();
    let e = (words.len() * 64) as i32;
    let s = if sign == IntSign::Minus { Sign::Neg } else { Sign::Pos };
    let mut x = BigFloat::from_words(&words, s, e);
    if x.precision().unwrap_or(p) > p {
        x.set_precision(p, RM).ok();
    }
    x
}

/// Nearest double (ties may round twice, so the error is at most one ulp).
pub fn to_f64(x: &BigFloat) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x.is_inf_pos() {
        return f64::INFINITY;
    }
    if x.is_inf_neg() {
        return f64::NEG_INFINITY;
    }
    let Some((m, _, sign, e, _)) = x.as_raw_parts() else {
        return f64::NAN;
    };
    if m.iter().all(|&w| w == 0) {
        return 0.0;
    }
    // value = 0.m × 2^e, most significant word last
    let n = m.len();
    let hi = m[n - 1] as f64;
    let lo = if n >= 2 { m[n - 2] as f64 } else { 0.0 };
    let mag = (hi + lo * 2f64.powi(-64)) * pow2(e as i64 - 64);
    if sign == Sign::Neg {
        -mag
    } else {
        mag
    }
}

fn pow2(e: i64) -> f64 {
    if e > 1023 {
        f64::INFINITY
    } else if e < -1074 {
        0.0
    } else if e < -1022 {
        2f64.powi(-1022) * 2f64.powi((e + 1022) as i32)
    } else {
        2f64.powi(e as i32)
    }
}

/// Base-2 logarithm of `|x|`, good to a few ulps; `-inf` for zero.
pub fn log2_abs(x: &BigFloat) -> f64 {
    match x.as_raw_parts() {
        Some((m, _, _, e, _)) if m.iter().any(|&w| w != 0) => {
            let top = m[m.len() - 1] as f64 * 2f64.powi(-64);
            e as f64 + top.log2()
        }
        _ => f64::NEG_INFINITY,
    }
}

/// Complex number with big-float parts.
#[derive(Debug, Clone)]
pub struct BigComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl BigComplex {
    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        Self { re, im }
    }

    pub fn zero(p: usize) -> Self {
        Self::new(BigFloat::from_word(0, p), BigFloat::from_word(0, p))
    }

    pub fn one(p: usize) -> Self {
        Self::new(BigFloat::from_word(1, p), BigFloat::from_word(0, p))
    }

    pub fn from_c64(z: ComplexPoint, p: usize) -> Self {
        Self::new(from_f64(z.re, p), from_f64(z.im, p))
    }

    pub fn from_real(x: BigFloat, p: usize) -> Self {
        Self::new(x, BigFloat::from_word(0, p))
    }

    pub fn to_c64(&self) -> ComplexPoint {
        ComplexPoint::new(to_f64(&self.re), to_f64(&self.im))
    }

    pub fn is_finite(&self) -> bool {
        !(self.re.is_nan() || self.re.is_inf() || self.im.is_nan() || self.im.is_inf())
    }

    pub fn add(&self, o: &Self, p: usize) -> Self {
        Self::new(self.re.add(&o.re, p, RM), self.im.add(&o.im, p, RM))
    }

    pub fn sub(&self, o: &Self, p: usize) -> Self {
        Self::new(self.re.sub(&o.re, p, RM), self.im.sub(&o.im, p, RM))
    }

    pub fn neg(&self) -> Self {
        Self::new(self.re.neg(), self.im.neg())
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), self.im.neg())
    }

    pub fn mul(&self, o: &Self, p: usize) -> Self {
        let rr = self.re.mul(&o.re, p, RM);
        let ii = self.im.mul(&o.im, p, RM);
        let ri = self.re.mul(&o.im, p, RM);
        let ir = self.im.mul(&o.re, p, RM);
        Self::new(rr.sub(&ii, p, RM), ri.add(&ir, p, RM))
    }

    pub fn scale(&self, x: &BigFloat, p: usize) -> Self {
        Self::new(self.re.mul(x, p, RM), self.im.mul(x, p, RM))
    }

    pub fn norm_sqr(&self, p: usize) -> BigFloat {
        let a = self.re.mul(&self.re, p, RM);
        let b = self.im.mul(&self.im, p, RM);
        a.add(&b, p, RM)
    }

    pub fn abs(&self, p: usize) -> BigFloat {
        self.norm_sqr(p).sqrt(p, RM)
    }

    /// `|z|` as a double.
    pub fn abs_f64(&self) -> f64 {
        self.to_c64().norm()
    }

    pub fn div(&self, o: &Self, p: usize) -> Result<Self> {
        let d = o.norm_sqr(p);
        if d.is_zero() {
            return Err(Error::Domain("division by zero".into()));
        }
        let num = self.mul(&o.conj(), p);
        Ok(Self::new(num.re.div(&d, p, RM), num.im.div(&d, p, RM)))
    }

    pub fn exp(&self, p: usize) -> Result<Self> {
        let (mag, s, c) = with_cc(|cc| {
            let mag = self.re.exp(p, RM, cc);
            let s = self.im.sin(p, RM, cc);
            let c = self.im.cos(p, RM, cc);
            (mag, s, c)
        });
        if mag.is_inf() || mag.is_nan() {
            return Err(Error::Range("exp overflow in extended tier".into()));
        }
        Ok(Self::new(mag.mul(&c, p, RM), mag.mul(&s, p, RM)))
    }

    /// Principal logarithm, `Im ∈ (-π, π]`.
    pub fn ln(&self, p: usize) -> Result<Self> {
        if self.re.is_zero() && self.im.is_zero() {
            return Err(Error::Domain("logarithm of zero".into()));
        }
        let q = p + 64;
        let r2 = self.norm_sqr(q);
        let half = BigFloat::from_f64(0.5, q);
        let lnr = with_cc(|cc| r2.ln(q, RM, cc)).mul(&half, p, RM);
        let arg = atan2(&self.im, &self.re, q);
        let mut arg = arg;
        arg.set_precision(p, RM).ok();
        Ok(Self::new(lnr, arg))
    }

    /// `self^s = exp(s ln self)`.
    pub fn pow(&self, s: &Self, p: usize) -> Result<Self> {
        // the exponent s·ln z is amplified by |s ln z|; carry guard bits
        let q = p + 32;
        let l = self.ln(q)?;
        s.mul(&l, q).exp(p)
    }

    pub fn sin(&self, p: usize) -> Self {
        let (s, c, sh, ch) = with_cc(|cc| {
            (
                self.re.sin(p, RM, cc),
                self.re.cos(p, RM, cc),
                self.im.sinh(p, RM, cc),
                self.im.cosh(p, RM, cc),
            )
        });
        Self::new(s.mul(&ch, p, RM), c.mul(&sh, p, RM))
    }

    /// Decimal rendering of both parts, `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> (String, String) {
        (decimal(&self.re, digits), decimal(&self.im, digits))
    }
}

/// Signed decimal string for `x` with roughly `digits` significant digits.
pub fn decimal(x: &BigFloat, digits: usize) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let bits = ((digits as f64) * std::f64::consts::LOG2_10).ceil() as usize + 8;
    let mut y = x.clone();
    y.set_precision(word_bits(bits as u32), RM).ok();
    let s = with_cc(|cc| y.format(astro_float::Radix::Dec, RM, cc)).unwrap_or_else(|_| "NaN".into());
    trim_decimal(&s, digits)
}

fn trim_decimal(s: &str, digits: usize) -> String {
    // astro-float prints "d.ddddde+x"; keep `digits` mantissa digits
    let (mant, exp) = match s.find('e') {
        Some(i) => (&s[..i], &s[i..]),
        None => (s, ""),
    };
    let neg = mant.starts_with('-');
    let body = mant.trim_start_matches('-');
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    let mut count = 0;
    for ch in body.chars() {
        if ch.is_ascii_digit() {
            if count >= digits {
                continue;
            }
            count += 1;
        }
        out.push(ch);
    }
    if out.ends_with('.') {
        out.pop();
    }
    out.push_str(exp);
    out
}

/// `atan2(y, x)` in `(-π, π]`.
pub fn atan2(y: &BigFloat, x: &BigFloat, p: usize) -> BigFloat {
    let pi = pi(p);
    if x.is_zero() {
        if y.is_zero() {
            return BigFloat::from_word(0, p);
        }
        let half = pi.div(&BigFloat::from_word(2, p), p, RM);
        return if y.is_negative() { half.neg() } else { half };
    }
    let ratio = y.div(x, p, RM);
    let base = with_cc(|cc| ratio.atan(p, RM, cc));
    if x.is_positive() {
        base
    } else if y.is_negative() {
        base.sub(&pi, p, RM)
    } else {
        // y >= 0 (including -0 folded to +) lands on (π/2, π]
        base.add(&pi, p, RM)
    }
}

/// Γ(z) by Spouge's approximation with parameter chosen for `bits` bits of
/// relative accuracy. Returns the value and the a-priori relative error
/// bound `a^{-1/2} (2π)^{-(a+1/2)}` of the truncated series.
pub fn spouge_gamma(z: &BigComplex, bits: u32) -> Result<(BigComplex, f64)> {
    let zc = z.to_c64();
    if super::is_nonpositive_integer(zc) && z.im.is_zero() && z.re.is_int() {
        return Err(Error::pole(zc, "Gamma has a pole at non-positive integers"));
    }
    if zc.re < 0.5 {
        // reflection: Γ(z) = π / (sin(πz) Γ(1-z))
        let p = word_bits(bits + 64);
        let one = BigComplex::one(p);
        let w = one.sub(z, p);
        let (gw, bound) = spouge_gamma(&w, bits)?;
        let piz = z.scale(&pi(p), p);
        let s = piz.sin(p);
        let den = s.mul(&gw, p);
        let num = BigComplex::from_real(pi(p), p);
        return Ok((num.div(&den, p)?, bound * 2.0));
    }
    // Γ(z) = Γ(x+1) with x = z-1, Re(x) > -1/2 so Re(x+a) > 0
    let a = ((bits as f64) * std::f64::consts::LN_2 / (2.0 * std::f64::consts::PI).ln()).ceil() as i64 + 2;
    let bound = (a as f64).powf(-0.5) * (2.0 * std::f64::consts::PI).powf(-(a as f64 + 0.5));
    // the c_k alternate and grow like e^a; carry that many extra bits
    let p = word_bits(bits + (a as f64 * 1.5) as u32 + 64);
    let x = z.sub(&BigComplex::one(p), p);
    let two_pi = pi(p).mul(&BigFloat::from_word(2, p), p, RM);
    let mut series = BigComplex::from_real(two_pi.sqrt(p, RM), p);
    let mut fact = BigFloat::from_word(1, p); // (k-1)!
    for k in 1..a {
        if k > 1 {
            fact = fact.mul(&BigFloat::from_word((k - 1) as Word, p), p, RM);
        }
        let ak = BigFloat::from_i64(a - k, p);
        let half = BigFloat::from_f64(0.5, p);
        let expo = BigFloat::from_i64(k, p).sub(&half, p, RM);
        let (pw, ex) = with_cc(|cc| {
            let pw = ak.pow(&expo, p, RM, cc);
            let ex = ak.exp(p, RM, cc);
            (pw, ex)
        });
        let mut ck = pw.mul(&ex, p, RM).div(&fact, p, RM);
        if k % 2 == 0 {
            ck = ck.neg();
        }
        let den = x.add(&BigComplex::from_real(BigFloat::from_i64(k, p), p), p);
        let term = BigComplex::from_real(ck, p).div(&den, p)?;
        series = series.add(&term, p);
    }
    let xa = x.add(&BigComplex::from_real(BigFloat::from_i64(a, p), p), p);
    let half = BigComplex::from_real(BigFloat::from_f64(0.5, p), p);
    let pow = xa.pow(&x.add(&half, p), p)?;
    let decay = xa.neg().exp(p)?;
    Ok((pow.mul(&decay, p).mul(&series, p), bound))
}
