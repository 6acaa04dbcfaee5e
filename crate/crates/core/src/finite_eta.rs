//! The two finite eta families.
//!
//! * Hasse local eta: `η_n(s) = Σ_{k=0}^{n} (-1)^k C(n,k) (k+1)^{-s}`.
//! * Harmonic-kernel eta: `ζ*_n(s) = Σ_{k=1}^{n} (-1)^{k-1} C(2n,n+k) k^{-s}`.
//!
//! Both are alternating sums with binomial weights, so near their zeros
//! (and for large `n` almost everywhere) the terms cancel to many digits.
//! [`eval`] first sums in doubles with compensated accumulation and a
//! running error bound; when that bound cannot certify the requested
//! relative tolerance it repeats the sum on the extended tier with enough
//! bits to absorb the observed cancellation.

use std::fmt;

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::big::{self, BigComplex};
use crate::numerics::{check_finite, ComplexPoint, ComplexSum, PrecisionContext, FAST_EPS};

/// Upper limit for escalation; beyond this the result is returned with an
/// absolute bound.
const MAX_EXTENDED_BITS: u32 = 8192;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// `η_n`, kernel `H_n(x) = (x+1)(x+2)…(x+n+1)`.
    Hasse,
    /// `ζ*_n`, kernel `H*_n(x) = (x²+1)(x²+4)…(x²+n²)`.
    HStar,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Hasse => f.write_str("hasse"),
            Family::HStar => f.write_str("hstar"),
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hasse" => Ok(Family::Hasse),
            "hstar" | "h*" => Ok(Family::HStar),
            other => Err(Error::Parse(format!("unknown family '{other}'"))),
        }
    }
}

/// Family selector plus index. For `HStar`, `n` is the number of factors
/// `x² + k²` in the kernel (degree `2n`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FiniteEtaSpec {
    family: Family,
    n: u32,
}

/// One summand `coeff · base^{-s}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub coeff: BigInt,
    pub base: u64,
}

impl FiniteEtaSpec {
    pub fn new(family: Family, n: u32) -> Result<Self> {
        if family == Family::HStar && n == 0 {
            return Err(Error::Domain("the H* family needs n >= 1".into()));
        }
        Ok(Self { family, n })
    }

    pub fn hasse(n: u32) -> Self {
        Self {
            family: Family::Hasse,
            n,
        }
    }

    pub fn hstar(n: u32) -> Result<Self> {
        Self::new(Family::HStar, n)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Degree of the kernel polynomial.
    pub fn kernel_degree(&self) -> u32 {
        match self.family {
            Family::Hasse => self.n + 1,
            Family::HStar => 2 * self.n,
        }
    }

    /// Summands in ascending `k`, coefficients exact.
    pub fn terms(&self) -> Vec<Term> {
        let n = BigInt::from(self.n);
        match self.family {
            Family::Hasse => (0..=self.n)
                .map(|k| {
                    let c = binomial(n.clone(), BigInt::from(k));
                    Term {
                        coeff: if k % 2 == 0 { c } else { -c },
                        base: u64::from(k) + 1,
                    }
                })
                .collect(),
            Family::HStar => {
                let two_n = BigInt::from(2 * self.n);
                (1..=self.n)
                    .map(|k| {
                        let c = binomial(two_n.clone(), BigInt::from(self.n + k));
                        Term {
                            coeff: if k % 2 == 1 { c } else { -c },
                            base: u64::from(k),
                        }
                    })
                    .collect()
            }
        }
    }

    /// Bits requested by the escalation policy:
    /// `64 + ⌈log2 C(2n, n)⌉ + 2|Im s|`.
    pub fn escalation_bits(&self, s: ComplexPoint) -> u32 {
        let n = BigInt::from(self.n);
        let central = binomial(BigInt::from(2u32) * &n, n);
        64 + central.bits() as u32 + (2.0 * s.im.abs()).ceil() as u32
    }
}

impl fmt::Display for FiniteEtaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(n={})", self.family, self.n)
    }
}

/// Which tier produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    Fast,
    Extended,
}

/// A finite-eta value with an attached absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EtaValue {
    pub value: ComplexPoint,
    pub err_bound: f64,
    /// `Σ|term|`.
    pub abs_sum: f64,
    /// `max |term|`.
    pub max_term: f64,
    pub tier: Tier,
    pub bits: u32,
}

impl EtaValue {
    /// `log2(Σ|terms| / |value|)`, the number of bits lost to cancellation.
    pub fn guard_bits(&self) -> f64 {
        let v = self.value.norm();
        if v == 0.0 {
            f64::INFINITY
        } else {
            (self.abs_sum / v).log2().max(0.0)
        }
    }

    pub fn certifies_relative(&self, tol: f64) -> bool {
        self.err_bound <= tol * self.value.norm()
    }
}

/// Exact rational value, always reduced with a positive denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExactRational(BigRational);

impl ExactRational {
    pub fn new(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Domain("zero denominator".into()));
        }
        // BigRational::new reduces and normalises the sign
        Ok(Self(BigRational::new(num, den)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

/// Value of the finite sum at `s`, with error bound.
pub fn eval(spec: &FiniteEtaSpec, s: ComplexPoint, ctx: &PrecisionContext) -> Result<EtaValue> {
    eval_derivative_order(spec, s, 0, ctx)
}

/// `d/ds` of the finite sum, termwise `-ln(b) b^{-s}`.
pub fn eval_derivative(
    spec: &FiniteEtaSpec,
    s: ComplexPoint,
    ctx: &PrecisionContext,
) -> Result<EtaValue> {
    eval_derivative_order(spec, s, 1, ctx)
}

/// `order`-th derivative in `s`; order 0 is the value itself.
pub fn eval_derivative_order(
    spec: &FiniteEtaSpec,
    s: ComplexPoint,
    order: u32,
    ctx: &PrecisionContext,
) -> Result<EtaValue> {
    check_finite(s, "s")?;
    let terms = spec.terms();
    let tol = ctx.effective_tol();

    if ctx.working_bits() <= 53 {
        let fast = sum_fast(&terms, s, order);
        if fast.certifies_relative(tol) || fast.abs_sum == 0.0 {
            return Ok(fast);
        }
        let guard = if fast.value.norm() > 0.0 {
            fast.guard_bits().min(60.0)
        } else {
            60.0
        };
        let want = 53 + guard.ceil() as u32 + (1.0 / tol).log2().ceil() as u32 + 8;
        let bits = spec.escalation_bits(s).max(want);
        return escalate(&terms, s, order, bits, tol);
    }
    escalate(&terms, s, order, ctx.working_bits(), tol)
}

fn escalate(terms: &[Term], s: ComplexPoint, order: u32, bits: u32, tol: f64) -> Result<EtaValue> {
    let mut bits = bits;
    loop {
        let (_, ext) = sum_extended(terms, s, order, bits)?;
        if ext.certifies_relative(tol) || ext.value.norm() == 0.0 || bits >= MAX_EXTENDED_BITS {
            return Ok(ext);
        }
        // escalate only while the value is resolved above the noise floor;
        // otherwise it is a near-zero and the absolute bound stands
        let noise = ext.abs_sum * 2f64.powi(-(bits as i32 - 16));
        if ext.value.norm() <= noise {
            return Ok(ext);
        }
        let need = (ext.err_bound / (tol * ext.value.norm())).log2().ceil() as u32 + 16;
        bits = (bits + need).min(MAX_EXTENDED_BITS);
    }
}

fn term_error_factor(s: ComplexPoint, ln_b: f64, order: u32) -> f64 {
    4.0 + f64::from(order) + s.norm() * ln_b
}

/// Fast tier: doubles, compensated accumulation, running error bound.
pub(crate) fn sum_fast(terms: &[Term], s: ComplexPoint, order: u32) -> EtaValue {
    let mut acc = ComplexSum::new();
    let mut err = 0.0;
    for t in terms {
        let c = t.coeff.to_f64().unwrap_or(f64::INFINITY);
        let ln_b = (t.base as f64).ln();
        let pow = if t.base == 1 {
            ComplexPoint::new(1.0, 0.0)
        } else {
            (-s * ln_b).exp()
        };
        let mut term = pow * c;
        if order > 0 {
            term *= (-ln_b).powi(order as i32);
        }
        err += term.norm() * FAST_EPS * term_error_factor(s, ln_b, order);
        acc.add(term);
    }
    let value = acc.value();
    let n = terms.len() as f64;
    err += FAST_EPS * value.norm() + n * FAST_EPS * FAST_EPS * acc.abs_total();
    EtaValue {
        value,
        err_bound: err,
        abs_sum: acc.abs_total(),
        max_term: acc.max_abs(),
        tier: Tier::Fast,
        bits: 53,
    }
}

/// Extended tier at `bits` bits. Returns the big value as well as the
/// rounded summary.
pub fn sum_extended(
    terms: &[Term],
    s: ComplexPoint,
    order: u32,
    bits: u32,
) -> Result<(BigComplex, EtaValue)> {
    let p = big::word_bits(bits);
    sum_extended_at(terms, &BigComplex::from_c64(s, p), order, bits)
}

/// Like [`sum_extended`] with `s` given on the extended tier.
pub fn sum_extended_at(
    terms: &[Term],
    sb: &BigComplex,
    order: u32,
    bits: u32,
) -> Result<(BigComplex, EtaValue)> {
    let p = big::word_bits(bits);
    let s = sb.to_c64();
    let neg_s = sb.neg();
    let mut acc = BigComplex::zero(p);
    let mut abs_sum = 0.0f64;
    let mut max_term = 0.0f64;
    let mut err = 0.0f64;
    let unit = 2f64.powi(-(p as i32));
    for t in terms {
        let base = BigComplex::from_real(big::from_i64(t.base as i64, p), p);
        let ln_b = (t.base as f64).ln();
        let pow = if t.base == 1 {
            BigComplex::one(p)
        } else {
            base.pow(&neg_s, p)?
        };
        let mut term = pow.scale(&big::from_bigint(&t.coeff, p), p);
        if order > 0 {
            let lb = base.ln(p)?.neg();
            for _ in 0..order {
                term = term.mul(&lb, p);
            }
        }
        let a = term.abs_f64();
        abs_sum += a;
        max_term = max_term.max(a);
        err += a * unit * term_error_factor(s, ln_b, order);
        acc = acc.add(&term, p);
    }
    let value = acc.to_c64();
    err += unit * terms.len() as f64 * abs_sum + 0.5 * FAST_EPS * value.norm();
    let summary = EtaValue {
        value,
        err_bound: err,
        abs_sum,
        max_term,
        tier: Tier::Extended,
        bits: p as u32,
    };
    Ok((acc, summary))
}

/// Exact value at the integer argument `s = m`.
pub fn eval_exact_integer(spec: &FiniteEtaSpec, m: i64) -> ExactRational {
    let mut acc = BigRational::zero();
    for t in spec.terms() {
        let b = BigInt::from(t.base);
        let mag = num_traits::pow(b, m.unsigned_abs() as usize);
        let v = if m <= 0 {
            BigRational::from_integer(t.coeff * mag)
        } else {
            BigRational::new(t.coeff, mag)
        };
        acc += v;
    }
    ExactRational(acc)
}

/// One row of a trivial-zero report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrivialZero {
    pub argument: i64,
    pub value: ExactRational,
}

/// The arguments the theorems name as trivial zeros.
pub fn trivial_zero_arguments(spec: &FiniteEtaSpec) -> Vec<i64> {
    let n = i64::from(spec.n());
    match spec.family() {
        Family::Hasse => (0..n).map(|m| -m).collect(),
        Family::HStar => (1..n).map(|m| -2 * m).collect(),
    }
}

/// Evaluates every trivial zero exactly; fails if any is nonzero.
pub fn trivial_zero_report(spec: &FiniteEtaSpec) -> Result<Vec<TrivialZero>> {
    let rows: Vec<TrivialZero> = trivial_zero_arguments(spec)
        .into_iter()
        .map(|m| TrivialZero {
            argument: m,
            value: eval_exact_integer(spec, m),
        })
        .collect();
    if let Some(bad) = rows.iter().find(|r| !r.value.is_zero()) {
        return Err(Error::Assertion(format!(
            "{spec} at s = {} evaluates to {} instead of 0",
            bad.argument, bad.value
        )));
    }
    Ok(rows)
}
