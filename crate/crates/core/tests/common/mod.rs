//! Oracles shared by the integration tests. Nothing here calls into the
//! library's evaluators.

#![allow(dead_code)]

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use eta_forge::weyl::{Letter, WeylWord};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

const RM: RoundingMode = RoundingMode::ToEven;
/// Oracle precision in bits.
pub const ORACLE_BITS: usize = 192;

#[derive(Clone)]
struct Bc {
    re: BigFloat,
    im: BigFloat,
}

struct Ctx {
    p: usize,
    cc: Consts,
}

impl Ctx {
    fn new() -> Self {
        Self {
            p: ORACLE_BITS,
            cc: Consts::new().expect("constants"),
        }
    }

    fn f(&self, x: f64) -> BigFloat {
        BigFloat::from_f64(x, self.p)
    }

    fn c(&self, re: f64, im: f64) -> Bc {
        Bc { re: self.f(re), im: self.f(im) }
    }

    fn add(&self, a: &Bc, b: &Bc) -> Bc {
        Bc { re: a.re.add(&b.re, self.p, RM), im: a.im.add(&b.im, self.p, RM) }
    }

    fn sub(&self, a: &Bc, b: &Bc) -> Bc {
        Bc { re: a.re.sub(&b.re, self.p, RM), im: a.im.sub(&b.im, self.p, RM) }
    }

    fn mul(&self, a: &Bc, b: &Bc) -> Bc {
        let p = self.p;
        Bc {
            re: a.re.mul(&b.re, p, RM).sub(&a.im.mul(&b.im, p, RM), p, RM),
            im: a.re.mul(&b.im, p, RM).add(&a.im.mul(&b.re, p, RM), p, RM),
        }
    }

    fn scale(&self, a: &Bc, x: &BigFloat) -> Bc {
        Bc { re: a.re.mul(x, self.p, RM), im: a.im.mul(x, self.p, RM) }
    }

    fn div(&self, a: &Bc, b: &Bc) -> Bc {
        let p = self.p;
        let d = b.re.mul(&b.re, p, RM).add(&b.im.mul(&b.im, p, RM), p, RM);
        let conj = Bc { re: b.re.clone(), im: b.im.neg() };
        let n = self.mul(a, &conj);
        Bc { re: n.re.div(&d, p, RM), im: n.im.div(&d, p, RM) }
    }

    /// `m^{-s}` for a positive integer `m`.
    fn int_pow_neg(&mut self, m: u64, s: &Bc) -> Bc {
        let p = self.p;
        let lnm = BigFloat::from_u64(m, p).ln(p, RM, &mut self.cc);
        let mag = s.re.mul(&lnm, p, RM).neg().exp(p, RM, &mut self.cc);
        let ang = s.im.mul(&lnm, p, RM);
        let cos = ang.cos(p, RM, &mut self.cc);
        let sin = ang.sin(p, RM, &mut self.cc);
        Bc { re: mag.mul(&cos, p, RM), im: mag.mul(&sin, p, RM).neg() }
    }

    fn rational(&mut self, q: &BigRational) -> BigFloat {
        let p = self.p;
        let n = BigFloat::parse(&q.numer().to_string(), Radix::Dec, p, RM, &mut self.cc);
        let d = BigFloat::parse(&q.denom().to_string(), Radix::Dec, p, RM, &mut self.cc);
        n.div(&d, p, RM)
    }

    fn f64_of(&mut self, x: &BigFloat) -> f64 {
        x.format(Radix::Dec, RM, &mut self.cc)
            .expect("format")
            .parse()
            .expect("decimal")
    }

    fn abs_f64(&mut self, z: &Bc) -> f64 {
        let (re, im) = (self.f64_of(&z.re), self.f64_of(&z.im));
        re.hypot(im)
    }
}

/// `B_0 … B_{2k}` exactly, from `Σ_{j<m+1} C(m+1, j) B_j = 0`.
pub fn bernoulli(max: usize) -> Vec<BigRational> {
    let mut b = vec![BigRational::one()];
    for m in 1..=max {
        let mut acc = BigRational::zero();
        let mut binom = BigInt::one();
        for (j, bj) in b.iter().enumerate() {
            acc += BigRational::from_integer(binom.clone()) * bj;
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
    }
    b
}

/// Euler–Maclaurin `ζ(s)` at high precision, `N = 40`, 24 correction terms.
struct ZetaEm {
    ctx: Ctx,
    coeffs: Vec<BigFloat>,
}

const EM_N: u64 = 40;
const EM_K: usize = 24;

impl ZetaEm {
    fn new() -> Self {
        let mut ctx = Ctx::new();
        let b = bernoulli(2 * EM_K);
        let mut fact = BigInt::one();
        let mut coeffs = Vec::new();
        for (k, bk) in b.iter().enumerate().take(2 * EM_K + 1).skip(1) {
            fact *= BigInt::from(k);
            if k % 2 == 0 {
                let q = bk / BigRational::from_integer(fact.clone());
                coeffs.push(ctx.rational(&q));
            }
        }
        Self { ctx, coeffs }
    }

    fn eval(&mut self, s: &Bc) -> Bc {
        let c = &mut self.ctx;
        let p = c.p;
        let mut sum = c.c(0.0, 0.0);
        for m in 1..EM_N {
            let t = c.int_pow_neg(m, s);
            sum = c.add(&sum, &t);
        }
        let n_big = BigFloat::from_u64(EM_N, p);
        let n_s = c.int_pow_neg(EM_N, s);
        let one = c.c(1.0, 0.0);
        // N^{1-s}/(s-1)
        let integral = c.div(&c.scale(&n_s, &n_big), &c.sub(s, &one));
        sum = c.add(&sum, &integral);
        let half = BigFloat::from_f64(0.5, p);
        sum = c.add(&sum, &c.scale(&n_s, &half));
        // B_{2k}/(2k)! · s(s+1)…(s+2k-2) · N^{-s-2k+1}
        let mut poch = s.clone();
        let n2 = n_big.mul(&n_big, p, RM);
        let mut npow = c.div(&n_s, &Bc { re: n_big.clone(), im: BigFloat::from_f64(0.0, p) });
        for (k, coeff) in self.coeffs.iter().enumerate() {
            if k > 0 {
                let a = c.add(s, &c.c((2 * k - 1) as f64, 0.0));
                let b = c.add(s, &c.c((2 * k) as f64, 0.0));
                poch = c.mul(&poch, &c.mul(&a, &b));
                npow = Bc { re: npow.re.div(&n2, p, RM), im: npow.im.div(&n2, p, RM) };
            }
            let term = c.scale(&c.mul(&poch, &npow), coeff);
            sum = c.add(&sum, &term);
        }
        sum
    }
}

/// `ζ(s)` by the high-precision Euler–Maclaurin oracle, rounded to doubles.
pub fn zeta_oracle(s: Complex64) -> Complex64 {
    let mut z = ZetaEm::new();
    let sb = z.ctx.c(s.re, s.im);
    let v = z.eval(&sb);
    Complex64::new(z.ctx.f64_of(&v.re), z.ctx.f64_of(&v.im))
}

/// Ordinate of the critical-line zero reached by a complex secant
/// iteration on `t ↦ ζ(1/2 + i t)` from `t0`, carried out entirely at
/// oracle precision. Returns `(t, |ζ(1/2 + i t)|)`.
pub fn critical_zero_oracle(t0: f64) -> (f64, f64) {
    let mut z = ZetaEm::new();
    let at = |z: &mut ZetaEm, t: &Bc| {
        // s = 1/2 + i t for complex t
        let s = Bc {
            re: BigFloat::from_f64(0.5, z.ctx.p).sub(&t.im, z.ctx.p, RM),
            im: t.re.clone(),
        };
        z.eval(&s)
    };
    let mut t_prev = z.ctx.c(t0, 0.0);
    let mut t = z.ctx.c(t0 + 1e-3, 0.0);
    let mut f_prev = at(&mut z, &t_prev);
    let mut f = at(&mut z, &t);
    for _ in 0..60 {
        let c = &z.ctx;
        let denom = c.sub(&f, &f_prev);
        if denom.re.is_zero() && denom.im.is_zero() {
            break;
        }
        let step = c.div(&c.mul(&f, &c.sub(&t, &t_prev)), &denom);
        let next = c.sub(&t, &step);
        let step_size = z.ctx.abs_f64(&step);
        t_prev = std::mem::replace(&mut t, next);
        f_prev = std::mem::replace(&mut f, at(&mut z, &t));
        if step_size < 1e-40 {
            break;
        }
    }
    let residual = z.ctx.abs_f64(&f);
    (z.ctx.f64_of(&t.re), residual)
}

/// `ln 2` from alternating harmonic partial sums, accelerated by repeated
/// averaging of neighbouring partial sums.
pub fn ln2_oracle() -> f64 {
    let mut partial = Vec::new();
    let mut s = 0.0;
    for k in 1..=60 {
        s += if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64;
        partial.push(s);
    }
    while partial.len() > 1 {
        partial = partial.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    }
    partial[0]
}

pub fn random_word(rng: &mut ChaCha8Rng, max_len: usize) -> WeylWord {
    let len = rng.gen_range(0..=max_len);
    WeylWord::new(
        (0..len)
            .map(|_| if rng.gen_bool(0.5) { Letter::A } else { Letter::B })
            .collect(),
    )
}

/// Picks a uniformly random redex.
pub fn random_strategy(rng: &mut ChaCha8Rng) -> impl FnMut(&[Letter], &[usize]) -> usize + '_ {
    move |_, positions| positions[rng.gen_range(0..positions.len())]
}

/// Acts with a word on `x^m` in the polynomial model `A = x·`, `B = d/dx`
/// (so `[B, A] = 1`) and returns the coefficient vector of the image.
pub fn act_on_monomial(word: &WeylWord, m: usize) -> Vec<BigInt> {
    let len = word.len();
    let mut v = vec![BigInt::zero(); m + len + 1];
    v[m] = BigInt::one();
    // rightmost letter acts first
    for l in word.letters.iter().rev() {
        let mut w = vec![BigInt::zero(); v.len()];
        for (k, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            match l {
                Letter::A => w[k + 1] += c,
                Letter::B => {
                    if k > 0 {
                        w[k - 1] += c * BigInt::from(k);
                    }
                }
            }
        }
        v = w;
    }
    v
}

/// Same action for a normal-ordered polynomial `Σ c_ij u^e a^i b^j` at
/// `u = 1`, with integer coefficients.
pub fn act_normal_form(p: &eta_forge::weyl::WeylPoly, m: usize, len: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); m + len + 1];
    for ((i, j), c) in p.terms() {
        let (i, j) = (i as usize, j as usize);
        let one = eta_forge::weyl::GaussRational::one();
        let coeff = c.eval(&one);
        let coeff = coeff.re.to_integer();
        if j > m {
            continue;
        }
        // b^j x^m = m!/(m-j)! x^{m-j}, then a^i shifts up
        let falling: BigInt = ((m - j + 1)..=m).fold(BigInt::one(), |acc, k| acc * BigInt::from(k));
        v[m - j + i] += coeff * falling;
    }
    v
}
