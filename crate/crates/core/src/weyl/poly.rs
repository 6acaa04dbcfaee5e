//! Coefficient rings for [`WeylPoly`](super::WeylPoly): polynomials in the
//! central phase `u`, and polynomials in a formal exponent `s` (with `u`
//! specialised to 1).

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::gauss::GaussRational;

/// Operations the normal-ordering product needs from a coefficient.
pub trait Coeff: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_gauss(g: GaussRational) -> Self;
    /// Multiplies by `u^k`.
    fn times_u_pow(&self, k: u32) -> Self;

    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    fn from_int(n: &BigInt) -> Self {
        Self::from_gauss(GaussRational::from_bigint(n.clone()))
    }
}

/// Polynomial in `u`; exponent to non-zero coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct UPoly {
    terms: BTreeMap<u32, GaussRational>,
}

impl UPoly {
    pub fn monomial(c: GaussRational, k: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        Self { terms }
    }

    pub fn u_pow(k: u32) -> Self {
        Self::monomial(GaussRational::one(), k)
    }

    pub fn constant(c: GaussRational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (u32, &GaussRational)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().copied()
    }

    fn add_term(&mut self, k: u32, c: &GaussRational) {
        let e = self.terms.entry(k).or_insert_with(GaussRational::zero);
        *e = &*e + c;
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    /// Value at `u = x`.
    pub fn eval(&self, x: &GaussRational) -> GaussRational {
        let mut acc = GaussRational::zero();
        for (k, c) in self.terms() {
            acc = &acc + &(c * &x.pow(k));
        }
        acc
    }
}

impl Coeff for UPoly {
    fn zero() -> Self {
        Self::default()
    }

    fn one() -> Self {
        Self::constant(GaussRational::one())
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (k, c) in o.terms() {
            r.add_term(k, c);
        }
        r
    }

    fn mul(&self, o: &Self) -> Self {
        let mut r = Self::default();
        for (k1, c1) in self.terms() {
            for (k2, c2) in o.terms() {
                r.add_term(k1 + k2, &(c1 * c2));
            }
        }
        r
    }

    fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }

    fn from_gauss(g: GaussRational) -> Self {
        Self::constant(g)
    }

    fn times_u_pow(&self, k: u32) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }
}

/// Writes `c·x^k` as one summand (without the joining sign) and reports
/// whether it was printed negated.
pub(crate) fn fmt_scaled_power(c: &GaussRational, var: &str, k: u32) -> (bool, String) {
    let neg = c.leading_negative();
    let c = if neg { -c } else { c.clone() };
    let power = match k {
        0 => String::new(),
        1 => var.to_string(),
        _ => format!("{var}^{k}"),
    };
    let s = if power.is_empty() {
        c.to_string()
    } else if c.is_one() {
        power
    } else {
        format!("{c}{power}")
    };
    (neg, s)
}

/// Joins signed summands as `a + b - c`.
pub(crate) fn join_signed(parts: impl IntoIterator<Item = (bool, String)>) -> String {
    let mut out = String::new();
    for (i, (neg, s)) in parts.into_iter().enumerate() {
        match (i, neg) {
            (0, false) => {}
            (0, true) => out.push('-'),
            (_, false) => out.push_str(" + "),
            (_, true) => out.push_str(" - "),
        }
        out.push_str(&s);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = self.terms().rev().map(|(k, c)| fmt_scaled_power(c, "u", k));
        f.write_str(&join_signed(parts))
    }
}

/// Polynomial in the formal exponent `s`; index is the power of `s`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SPoly {
    coeffs: Vec<GaussRational>,
}

impl SPoly {
    pub fn from_coeffs(mut coeffs: Vec<GaussRational>) -> Self {
        while coeffs.last().is_some_and(GaussRational::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// `s`.
    pub fn s() -> Self {
        Self::from_coeffs(vec![GaussRational::zero(), GaussRational::one()])
    }

    pub fn coeffs(&self) -> &[GaussRational] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// `C(s, k) = s(s-1)…(s-k+1)/k!` as a polynomial of degree `k`.
    pub fn binomial(k: u32) -> Self {
        let mut p = <Self as Coeff>::one();
        let mut fact = BigInt::one();
        for j in 0..k {
            let shift = Self::from_coeffs(vec![GaussRational::from_int(-i64::from(j)), GaussRational::one()]);
            p = p.mul(&shift);
            fact *= j + 1;
        }
        let inv = GaussRational::real(BigRational::new(BigInt::one(), fact));
        Self::from_coeffs(p.coeffs.iter().map(|c| c * &inv).collect())
    }

    pub fn eval(&self, x: &GaussRational) -> GaussRational {
        self.coeffs
            .iter()
            .rev()
            .fold(GaussRational::zero(), |acc, c| &(&acc * x) + c)
    }
}

impl Coeff for SPoly {
    fn zero() -> Self {
        Self::default()
    }

    fn one() -> Self {
        Self::from_coeffs(vec![GaussRational::one()])
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = GaussRational::zero();
        Self::from_coeffs(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + o.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::default();
        }
        let mut out = vec![GaussRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Self::from_coeffs(out)
    }

    fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    fn from_gauss(g: GaussRational) -> Self {
        Self::from_coeffs(vec![g])
    }

    /// `u` is specialised to 1 in this ring.
    fn times_u_pow(&self, _k: u32) -> Self {
        self.clone()
    }
}

impl fmt::Display for SPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| fmt_scaled_power(c, "s", k as u32));
        f.write_str(&join_signed(parts))
    }
}
