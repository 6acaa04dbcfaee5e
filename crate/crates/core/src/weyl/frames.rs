//! Rest frames: phases `w` with `w⁴ = u²`.
//!
//! Unit phases are stored exactly as rational fractions of a full turn,
//! `e^{2πi q}` with `q ∈ [0, 1)`, so eighth roots and any other rational
//! angle stay exact.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::gauss::GaussRational;
use crate::error::{Error, Result};
use crate::numerics::ComplexPoint;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Phase {
    turn: BigRational,
}

impl Phase {
    /// `e^{2πi·turn}`, reduced into `[0, 1)`.
    pub fn from_turn(turn: BigRational) -> Self {
        let floor = turn.floor();
        Self { turn: turn - floor }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_turn(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn one() -> Self {
        Self::from_ratio(0, 1)
    }

    pub fn turn(&self) -> &BigRational {
        &self.turn
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::from_turn(&self.turn + &o.turn)
    }

    pub fn pow(&self, e: i64) -> Self {
        Self::from_turn(&self.turn * BigRational::from_integer(BigInt::from(e)))
    }

    pub fn neg(&self) -> Self {
        self.mul(&Self::from_ratio(1, 2))
    }

    /// Exact value when the phase is a quarter turn multiple.
    pub fn exact(&self) -> Option<GaussRational> {
        let four = &self.turn * BigRational::from_integer(BigInt::from(4));
        if !four.is_integer() {
            return None;
        }
        Some(GaussRational::i().pow(four.to_integer().to_u32()?))
    }

    pub fn to_c64(&self) -> ComplexPoint {
        let q = self.turn.to_f64().unwrap_or(0.0);
        let (s, c) = crate::numerics::sin_pi(ComplexPoint::new(2.0 * q, 0.0))
            .re
            .atan2(crate::numerics::cos_pi(ComplexPoint::new(2.0 * q, 0.0)).re)
            .sin_cos();
        ComplexPoint::new(c, s)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exact() {
            Some(g) => write!(f, "{g}"),
            None => write!(f, "turn:{}/{}", self.turn.numer(), self.turn.denom()),
        }
    }
}

impl Serialize for Phase {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Accepts `1`, `-1`, `i`, `-i` and `turn:p/q` (or `turn:p`).
impl FromStr for Phase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "1" => return Ok(Self::from_ratio(0, 1)),
            "i" => return Ok(Self::from_ratio(1, 4)),
            "-1" => return Ok(Self::from_ratio(1, 2)),
            "-i" => return Ok(Self::from_ratio(3, 4)),
            _ => {}
        }
        let body = s
            .strip_prefix("turn:")
            .ok_or_else(|| Error::Parse(format!("phase '{s}' is not 1, -1, i, -i or turn:p/q")))?;
        let bad = || Error::Parse(format!("bad turn fraction '{body}'"));
        let (p, q) = match body.split_once('/') {
            Some((p, q)) => (p.trim().parse::<BigInt>().map_err(|_| bad())?, q.trim().parse::<BigInt>().map_err(|_| bad())?),
            None => (body.trim().parse::<BigInt>().map_err(|_| bad())?, BigInt::one()),
        };
        if q.is_zero() {
            return Err(bad());
        }
        Ok(Self::from_turn(BigRational::new(p, q)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RestFrame {
    pub w: Phase,
    /// `w^{-2}`.
    pub h_scale: Phase,
    /// `w^2`.
    pub time_scale: Phase,
    /// `w² = -u`: energy and time change sign and `a`, `b` trade places.
    pub swaps_ab: bool,
}

/// The four solutions of `w⁴ = u²`, in increasing angle.
pub fn rest_frames(u: &Phase) -> Result<Vec<RestFrame>> {
    let u2 = u.pow(2);
    let half_u = BigRational::new(BigInt::one(), BigInt::from(2)) * u.turn();
    let mut frames: Vec<RestFrame> = (0..4)
        .map(|m| {
            let w = Phase::from_turn(&half_u + BigRational::new(BigInt::from(m), BigInt::from(4)));
            let w2 = w.pow(2);
            RestFrame {
                h_scale: w.pow(-2),
                time_scale: w2.clone(),
                swaps_ab: w2 == u.neg(),
                w,
            }
        })
        .collect();
    frames.sort_by(|a, b| a.w.cmp(&b.w));
    for f in &frames {
        if f.w.pow(4) != u2 {
            return Err(Error::Assertion(format!("w = {} does not satisfy w^4 = u^2", f.w)));
        }
        // independent check in Gaussian arithmetic where both sides are exact
        if let (Some(w), Some(uu)) = (f.w.exact(), u.exact()) {
            if w.pow(4) != uu.pow(2) {
                return Err(Error::Assertion(format!("w = {w}: w^4 != u^2 in exact arithmetic")));
            }
        }
    }
    Ok(frames)
}
