use super::big::{spouge_gamma, word_bits, BigComplex};
use super::{check_finite, is_nonpositive_integer, sin_pi, ComplexPoint, PrecisionContext};
use crate::error::{Error, Result};

// g = 7, n = 9 (Godfrey's coefficients)
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Complex Γ. Uses the Lanczos approximation when the context asks for
/// 53 bits and Spouge's series (with its a-priori bound) above that.
pub fn cgamma(z: ComplexPoint, ctx: &PrecisionContext) -> Result<ComplexPoint> {
    check_finite(z, "Gamma argument")?;
    if is_nonpositive_integer(z) {
        return Err(Error::pole(z, "Gamma has a pole at non-positive integers"));
    }
    if ctx.working_bits() <= 53 {
        lanczos_gamma(z)
    } else {
        let p = word_bits(ctx.working_bits());
        let (g, _) = spouge_gamma(&BigComplex::from_c64(z, p), ctx.working_bits())?;
        Ok(g.to_c64())
    }
}

/// Fast-tier Γ on doubles.
pub fn lanczos_gamma(z: ComplexPoint) -> Result<ComplexPoint> {
    if is_nonpositive_integer(z) {
        return Err(Error::pole(z, "Gamma has a pole at non-positive integers"));
    }
    if z.re < 0.5 {
        let s = sin_pi(z);
        let g = lanczos_gamma(ComplexPoint::new(1.0, 0.0) - z)?;
        return Ok(std::f64::consts::PI / (s * g));
    }
    let x = z - 1.0;
    let mut acc = ComplexPoint::new(LANCZOS[0], 0.0);
    for (k, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += *c / (x + k as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    let sqrt_2pi = (2.0 * std::f64::consts::PI).sqrt();
    // t^(x+1/2) e^{-t} in one exponential keeps large |Im z| finite
    let log_part = (x + 0.5) * t.ln() - t;
    Ok(sqrt_2pi * log_part.exp() * acc)
}
