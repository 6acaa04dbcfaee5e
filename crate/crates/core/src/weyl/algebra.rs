use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use super::gauss::GaussRational;
use super::poly::{fmt_scaled_power, join_signed, Coeff, SPoly, UPoly};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    A,
    B,
}

/// Word in the free algebra on `A` (creation) and `B` (annihilation).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct WeylWord {
    pub letters: Vec<Letter>,
}

impl WeylWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        Self { letters }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Positions `p` with `letters[p..p+2] == [B, A]`.
    pub fn redexes(&self) -> Vec<usize> {
        redexes(&self.letters)
    }
}

fn redexes(w: &[Letter]) -> Vec<usize> {
    w.windows(2)
        .enumerate()
        .filter(|(_, p)| p[0] == Letter::B && p[1] == Letter::A)
        .map(|(i, _)| i)
        .collect()
}

impl FromStr for WeylWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                'A' | 'a' => Ok(Letter::A),
                'B' | 'b' => Ok(Letter::B),
                other => Err(Error::Parse(format!("word letter '{other}' is not A or B"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }
}

impl fmt::Display for WeylWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            f.write_str(match l {
                Letter::A => "A",
                Letter::B => "B",
            })?;
        }
        Ok(())
    }
}

/// Canonical element `Σ c_{ij} a^i b^j`; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct WeylPoly<C: Coeff = UPoly> {
    terms: BTreeMap<(u32, u32), C>,
}

impl<C: Coeff> Default for WeylPoly<C> {
    fn default() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }
}

impl<C: Coeff> WeylPoly<C> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn scalar(c: C) -> Self {
        Self::term(c, 0, 0)
    }

    pub fn one() -> Self {
        Self::scalar(C::one())
    }

    /// `c · a^i b^j`.
    pub fn term(c: C, i: u32, j: u32) -> Self {
        let mut p = Self::default();
        p.add_term(i, j, c);
        p
    }

    pub fn a() -> Self {
        Self::term(C::one(), 1, 0)
    }

    pub fn b() -> Self {
        Self::term(C::one(), 0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Option<&C> {
        self.terms.get(&(i, j))
    }

    /// Terms in ascending `(i, j)`.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = ((u32, u32), &C)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, i: u32, j: u32, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&(i, j)) {
            Some(old) => {
                let sum = old.add(&c);
                if !sum.is_zero() {
                    self.terms.insert((i, j), sum);
                }
            }
            None => {
                self.terms.insert((i, j), c);
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for ((i, j), c) in o.terms() {
            r.add_term(i, j, c.clone());
        }
        r
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, c)| (*k, c.neg())).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut r = Self::default();
        for ((i, j), d) in self.terms() {
            r.add_term(i, j, d.mul(c));
        }
        r
    }

    /// Normal-ordered product, using
    /// `b^j a^k = Σ_r C(j,r) C(k,r) r! u^r a^{k-r} b^{j-r}`.
    pub fn mul(&self, o: &Self) -> Self {
        let mut r = Self::default();
        for ((i, j), c1) in self.terms() {
            for ((k, l), c2) in o.terms() {
                let c12 = c1.mul(c2);
                let mut fact = BigInt::one();
                for m in 0..=j.min(k) {
                    if m > 0 {
                        fact *= m;
                    }
                    let w = binomial(BigInt::from(j), BigInt::from(m))
                        * binomial(BigInt::from(k), BigInt::from(m))
                        * &fact;
                    let c = c12.mul(&C::from_int(&w)).times_u_pow(m);
                    r.add_term(i + k - m, j + l - m, c);
                }
            }
        }
        r
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Residue modulo the left ideal generated by `b`: keeps the monomials
    /// without `b`.
    pub fn mod_vacuum(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|((_, j), _)| *j == 0)
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
        }
    }

    /// Residue modulo `Ψb + aΨ`: only the scalar part survives.
    pub fn mod_observer(&self) -> Self {
        self.coeff(0, 0).map_or_else(Self::zero, |c| Self::scalar(c.clone()))
    }

    /// The `(0, 0)` coefficient.
    pub fn scalar_part(&self) -> C {
        self.coeff(0, 0).cloned().unwrap_or_else(C::zero)
    }
}

impl WeylPoly<UPoly> {
    /// Substitutes `u := x`.
    pub fn eval_u(&self, x: &GaussRational) -> WeylPoly<SPoly> {
        let mut r = WeylPoly::default();
        for ((i, j), c) in self.terms() {
            r.add_term(i, j, SPoly::from_coeffs(vec![c.eval(x)]));
        }
        r
    }

    /// Largest `u` exponent in any coefficient.
    pub fn u_degree(&self) -> u32 {
        self.terms().filter_map(|(_, c)| c.degree()).max().unwrap_or(0)
    }
}

pub fn commutator<C: Coeff>(x: &WeylPoly<C>, y: &WeylPoly<C>) -> WeylPoly<C> {
    x.mul(y).sub(&y.mul(x))
}

/// Normal form of `word` by rewriting `BA → AB + u`, always at the leftmost
/// redex.
pub fn normal_order(word: &WeylWord) -> WeylPoly<UPoly> {
    normal_order_with(word, |_, positions| positions[0])
}

/// Normal form of `word` by rewriting `BA → AB + u`. `choose` picks which
/// redex of the current word to rewrite (it receives the word and the redex
/// positions and returns one of them).
pub fn normal_order_with(
    word: &WeylWord,
    mut choose: impl FnMut(&[Letter], &[usize]) -> usize,
) -> WeylPoly<UPoly> {
    let mut pending: BTreeMap<Vec<Letter>, UPoly> = BTreeMap::new();
    pending.insert(word.letters.clone(), UPoly::one());
    let mut done = WeylPoly::default();

    while let Some((w, c)) = pending.pop_first() {
        let positions = redexes(&w);
        if positions.is_empty() {
            let i = w.iter().filter(|l| **l == Letter::A).count() as u32;
            done.add_term(i, w.len() as u32 - i, c);
            continue;
        }
        let p = choose(&w, &positions);
        assert!(positions.contains(&p), "strategy chose a non-redex position {p}");
        let mut swapped = w.clone();
        swapped.swap(p, p + 1);
        let mut contracted = w.clone();
        contracted.drain(p..p + 2);
        for (next, coeff) in [(swapped, c.clone()), (contracted, c.times_u_pow(1))] {
            let e = pending.entry(next).or_insert_with(UPoly::zero);
            *e = e.add(&coeff);
        }
        pending.retain(|_, c| !c.is_zero());
    }
    done
}

/// `a^n` and `b^n` as polynomials.
pub fn a_pow<C: Coeff>(n: u32) -> WeylPoly<C> {
    WeylPoly::term(C::one(), n, 0)
}

pub fn b_pow<C: Coeff>(n: u32) -> WeylPoly<C> {
    WeylPoly::term(C::one(), 0, n)
}

fn u_times(c: GaussRational, k: u32) -> UPoly {
    UPoly::monomial(c, k)
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `H = a b + u/2`, the normal form of `(ab + ba)/2`.
pub fn oscillator_h() -> WeylPoly<UPoly> {
    WeylPoly::term(UPoly::one(), 1, 1).add(&WeylPoly::scalar(u_times(GaussRational::from_ratio(1, 2), 1)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaCheck {
    pub identity: String,
    pub n: u32,
    pub lhs: String,
    pub rhs: String,
}

/// Every identity checked, in order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaReport {
    pub n_max: u32,
    pub checks: Vec<LemmaCheck>,
}

/// Checks the commutator, vacuum-norm and oscillator identities for
/// `1 ≤ n ≤ n_max` exactly.
pub fn lemma_suite(n_max: u32) -> Result<LemmaReport> {
    if n_max < 1 {
        return Err(Error::Domain("n_max must be at least 1".into()));
    }
    let a = WeylPoly::<UPoly>::a();
    let b = WeylPoly::<UPoly>::b();
    let h = oscillator_h();
    let mut checks = Vec::new();
    let mut check = |identity: &str, n: u32, lhs: WeylPoly, rhs: WeylPoly| -> Result<()> {
        if lhs != rhs {
            return Err(Error::Assertion(format!("{identity} fails at n = {n}: {lhs} != {rhs}")));
        }
        checks.push(LemmaCheck {
            identity: identity.into(),
            n,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        });
        Ok(())
    };
    for n in 1..=n_max {
        let nu = |k: i64| u_times(GaussRational::from_int(k), 1);
        check(
            "[b, a^n] = u n a^(n-1)",
            n,
            commutator(&b, &a_pow(n)),
            a_pow(n - 1).scale(&nu(i64::from(n))),
        )?;
        check(
            "[a, b^n] = -u n b^(n-1)",
            n,
            commutator(&a, &b_pow(n)),
            b_pow(n - 1).scale(&nu(-i64::from(n))),
        )?;
        let bn_an = normal_order(&WeylWord::new(
            std::iter::repeat_n(Letter::B, n as usize)
                .chain(std::iter::repeat_n(Letter::A, n as usize))
                .collect(),
        ));
        check(
            "b^n a^n = u^n n! mod vacuum",
            n,
            bn_an.mod_vacuum(),
            WeylPoly::scalar(u_times(GaussRational::from_bigint(factorial(n)), n)),
        )?;
        check(
            "[H, a^n] = u n a^n",
            n,
            commutator(&h, &a_pow(n)),
            a_pow(n).scale(&nu(i64::from(n))),
        )?;
    }
    for k in 0..=n_max {
        let eigen = GaussRational::real(BigRational::new(BigInt::from(2 * k + 1), BigInt::from(2)));
        check(
            "H a^k = u (k + 1/2) a^k mod vacuum",
            k,
            h.mul(&a_pow(k)).mod_vacuum(),
            a_pow(k).scale(&u_times(eigen, 1)),
        )?;
    }
    Ok(LemmaReport { n_max, checks })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Generator {
    A,
    B,
}

impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" | "A" => Ok(Generator::A),
            "b" | "B" => Ok(Generator::B),
            other => Err(Error::Parse(format!("generator '{other}' is not a or b"))),
        }
    }
}

/// `Σ_{k ≤ K} C(s, k) (x - 1)^k` with `x` the chosen generator, coefficients
/// polynomial in `s` (and `u = 1`).
pub fn operator_power_truncated(base: Generator, order: u32) -> WeylPoly<SPoly> {
    let x: WeylPoly<SPoly> = match base {
        Generator::A => WeylPoly::a(),
        Generator::B => WeylPoly::b(),
    };
    let shifted = x.sub(&WeylPoly::one());
    let mut power = WeylPoly::one();
    let mut acc = WeylPoly::zero();
    for k in 0..=order {
        acc = acc.add(&power.scale(&SPoly::binomial(k)));
        power = power.mul(&shifted);
    }
    acc
}

/// `1 + 2s(s-1)`.
pub fn equilibrium_target() -> SPoly {
    SPoly::from_coeffs(vec![
        GaussRational::one(),
        GaussRational::from_int(-2),
        GaussRational::from_int(2),
    ])
}

/// Scalar of `b^s a^s` truncated at first order in each factor, modulo the
/// observer module; fails unless it equals `1 + 2s(s-1)`.
pub fn equilibrium_identity_check() -> Result<SPoly> {
    let prod = operator_power_truncated(Generator::B, 1).mul(&operator_power_truncated(Generator::A, 1));
    let scalar = prod.mod_observer().scalar_part();
    let want = equilibrium_target();
    if scalar != want {
        return Err(Error::Assertion(format!(
            "equilibrium scalar {scalar} differs from {want}"
        )));
    }
    Ok(scalar)
}

/// Summand text for a coefficient that is a single monomial.
pub trait SingleSummand {
    fn single_summand(&self) -> Option<(bool, String)>;
}

impl SingleSummand for UPoly {
    fn single_summand(&self) -> Option<(bool, String)> {
        let mut it = self.terms();
        match (it.next(), it.next()) {
            (Some((k, c)), None) => Some(fmt_scaled_power(c, "u", k)),
            _ => None,
        }
    }
}

impl SingleSummand for SPoly {
    fn single_summand(&self) -> Option<(bool, String)> {
        let nz: Vec<_> = self.coeffs().iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        match nz.as_slice() {
            [(k, c)] => Some(fmt_scaled_power(c, "s", *k as u32)),
            _ => None,
        }
    }
}

fn monomial_text(i: u32, j: u32) -> String {
    let p = |v: &str, e: u32| match e {
        0 => None,
        1 => Some(v.to_string()),
        _ => Some(format!("{v}^{e}")),
    };
    [p("a", i), p("b", j)].into_iter().flatten().collect::<Vec<_>>().join(" ")
}

/// Terms sorted by `(i, j)` descending, e.g. `a^2 b^2 + 4u a b + 2u^2`.
impl<C: Coeff + SingleSummand> fmt::Display for WeylPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = self.terms().rev().map(|((i, j), c)| {
            let mono = monomial_text(i, j);
            match c.single_summand() {
                Some((neg, s)) if mono.is_empty() => (neg, s),
                Some((neg, s)) if s == "1" => (neg, mono),
                Some((neg, s)) => (neg, format!("{s} {mono}")),
                None if mono.is_empty() => (false, format!("({c})")),
                None => (false, format!("({c}) {mono}")),
            }
        });
        f.write_str(&join_signed(parts))
    }
}
