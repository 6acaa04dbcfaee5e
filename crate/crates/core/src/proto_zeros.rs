//! Proto-zeros: local minima of `|η_n(σ + it)|` along a vertical line.
//!
//! A scan evaluates the magnitude on a uniform `t` grid, keeps the strict
//! local minima and polishes each by golden-section search inside its
//! grid bracket. Golden section alone only pins a smooth minimum to about
//! `√ε` relative, so the final bracket is finished off by regula falsi on
//! `d|η|²/dt` when that changes sign across it.
//!
//! Grid evaluation and polishing are split into contiguous chunks that run
//! on scoped threads; the merged output does not depend on the number of
//! chunks.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite_eta::{self, Family, FiniteEtaSpec};
use crate::hasse_global::ZeroRecord;
use crate::numerics::{ComplexPoint, PrecisionContext};

/// Ceiling on the polish bracket width, whatever the grid step.
pub const POLISH_TOL_CAP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanckInfo {
    pub p: u64,
    pub hbar_p: f64,
    pub resolution: f64,
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin; these bases are exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for p in BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    'witness: for a in BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// `ħ_p = ln p / 2π` and the oscillation interval `1/ħ_p`.
pub fn planck_resolution(p: u64) -> Result<PlanckInfo> {
    if !is_prime(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    let hbar_p = (p as f64).ln() / (2.0 * PI);
    Ok(PlanckInfo {
        p,
        hbar_p,
        resolution: 2.0 * PI / (p as f64).ln(),
    })
}

/// Largest prime among the bases `k` that appear in the finite sum.
pub fn largest_participating_prime(spec: &FiniteEtaSpec) -> Option<u64> {
    let top = match spec.family() {
        Family::Hasse => u64::from(spec.n()) + 1,
        Family::HStar => u64::from(spec.n()),
    };
    (2..=top).rev().find(|&k| is_prime(k))
}

fn resolution_of(spec: &FiniteEtaSpec) -> f64 {
    let p = largest_participating_prime(spec).unwrap_or(2);
    2.0 * PI / (p as f64).ln()
}

/// Grid step used when none is given: a twentieth of the resolution of the
/// largest participating prime.
pub fn default_step(spec: &FiniteEtaSpec) -> f64 {
    resolution_of(spec) / 20.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    spec: FiniteEtaSpec,
    sigma: f64,
    t_min: f64,
    t_max: f64,
    step: f64,
    jobs: usize,
}

impl ScanConfig {
    pub fn new(spec: FiniteEtaSpec, sigma: f64, t_min: f64, t_max: f64, step: f64) -> Result<Self> {
        if !(sigma.is_finite() && t_min.is_finite() && t_max.is_finite()) {
            return Err(Error::Domain("scan bounds must be finite".into()));
        }
        if t_min >= t_max {
            return Err(Error::Domain(format!("need t_min < t_max, got [{t_min}, {t_max}]")));
        }
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::Domain(format!("step must be positive, got {step}")));
        }
        let limit = resolution_of(&spec) / 10.0;
        if step > limit {
            return Err(Error::Domain(format!(
                "step {step} exceeds a tenth of the prime resolution ({limit:.6})"
            )));
        }
        Ok(Self {
            spec,
            sigma,
            t_min,
            t_max,
            step,
            jobs: 1,
        })
    }

    /// Config with [`default_step`].
    pub fn with_default_step(spec: FiniteEtaSpec, sigma: f64, t_min: f64, t_max: f64) -> Result<Self> {
        Self::new(spec, sigma, t_min, t_max, default_step(&spec))
    }

    pub fn with_jobs(mut self, jobs: usize) -> Self {
        self.jobs = jobs.max(1);
        self
    }

    pub fn spec(&self) -> FiniteEtaSpec {
        self.spec
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn t_range(&self) -> (f64, f64) {
        (self.t_min, self.t_max)
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn jobs(&self) -> usize {
        self.jobs
    }

    /// Width of the final golden-section bracket.
    pub fn polish_tol(&self) -> f64 {
        (self.step / 100.0).min(POLISH_TOL_CAP)
    }

    pub fn grid(&self) -> Vec<f64> {
        let count = ((self.t_max - self.t_min) / self.step * (1.0 + 1e-12)).floor() as usize;
        (0..=count)
            .map(|j| (self.t_min + j as f64 * self.step).min(self.t_max))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProtoZeroRecord {
    pub spec: FiniteEtaSpec,
    pub sigma: f64,
    pub t: f64,
    pub magnitude: f64,
    /// Imaginary offset `d` such that `t + i·d` deepens the minimum.
    pub decay: f64,
    /// Final golden-section bracket.
    pub bracket: (f64, f64),
}

/// Maps `f` over `items` on up to `jobs` scoped threads, keeping order.
fn par_map<T: Sync, R: Send>(
    items: &[T],
    jobs: usize,
    f: impl Fn(&T) -> Result<R> + Sync,
) -> Result<Vec<R>> {
    if jobs <= 1 || items.len() < 2 {
        return items.iter().map(&f).collect();
    }
    let chunk = items.len().div_ceil(jobs);
    std::thread::scope(|scope| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|part| {
                let f = &f;
                scope.spawn(move || part.iter().map(f).collect::<Result<Vec<R>>>())
            })
            .collect();
        let mut out = Vec::with_capacity(items.len());
        for h in handles {
            out.extend(h.join().expect("scan worker panicked")?);
        }
        Ok(out)
    })
}

fn magnitude(spec: &FiniteEtaSpec, sigma: f64, t: f64, ctx: &PrecisionContext) -> Result<f64> {
    Ok(finite_eta::eval(spec, ComplexPoint::new(sigma, t), ctx)?.value.norm())
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for the minimum of `f` on `[a, b]`, down to a
/// bracket no wider than `tol`. Returns the best point seen and the final
/// bracket.
fn golden_section(
    mut a: f64,
    mut b: f64,
    tol: f64,
    f: impl Fn(f64) -> Result<f64>,
) -> Result<(f64, f64, (f64, f64))> {
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while b - a > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2)?;
        }
    }
    let (t, m) = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    Ok((t, m, (a, b)))
}

/// `d|η|²/dt = -2 Im(conj(η) η')`.
fn slope(spec: &FiniteEtaSpec, sigma: f64, t: f64, ctx: &PrecisionContext) -> Result<f64> {
    let s = ComplexPoint::new(sigma, t);
    let v = finite_eta::eval(spec, s, ctx)?.value;
    let d = finite_eta::eval_derivative(spec, s, ctx)?.value;
    Ok(-2.0 * (v.conj() * d).im)
}

/// Illinois regula falsi for the root of the slope inside `bracket`.
fn finish_on_slope(
    spec: &FiniteEtaSpec,
    sigma: f64,
    (mut a, mut b): (f64, f64),
    ctx: &PrecisionContext,
) -> Result<Option<(f64, f64)>> {
    let mut ga = slope(spec, sigma, a, ctx)?;
    let mut gb = slope(spec, sigma, b, ctx)?;
    if !(ga < 0.0 && gb > 0.0) {
        return Ok(None);
    }
    let mut side = 0;
    let mut best = 0.5 * (a + b);
    for _ in 0..60 {
        let c = (a * gb - b * ga) / (gb - ga);
        if !(c > a && c < b) {
            break;
        }
        let moved = (c - best).abs();
        best = c;
        if moved <= 4.0 * f64::EPSILON * c.abs().max(1.0) {
            break;
        }
        let gc = slope(spec, sigma, c, ctx)?;
        if gc == 0.0 {
            break;
        }
        if gc < 0.0 {
            a = c;
            ga = gc;
            if side == -1 {
                gb *= 0.5;
            }
            side = -1;
        } else {
            b = c;
            gb = gc;
            if side == 1 {
                ga *= 0.5;
            }
            side = 1;
        }
    }
    Ok(Some((best, magnitude(spec, sigma, best, ctx)?)))
}

/// Strict local minima of `|η_n|` on the grid, polished.
pub fn scan_line(cfg: &ScanConfig, ctx: &PrecisionContext) -> Result<Vec<ProtoZeroRecord>> {
    let spec = cfg.spec;
    let sigma = cfg.sigma;
    let grid = cfg.grid();
    let mags = par_map(&grid, cfg.jobs, |&t| magnitude(&spec, sigma, t, ctx))?;

    let minima: Vec<usize> = (1..grid.len().saturating_sub(1))
        .filter(|&j| mags[j] < mags[j - 1] && mags[j] < mags[j + 1])
        .collect();

    let tol = cfg.polish_tol();
    let mut records = par_map(&minima, cfg.jobs, |&j| {
        let (t, m, bracket) = golden_section(grid[j - 1], grid[j + 1], tol, |t| {
            magnitude(&spec, sigma, t, ctx)
        })?;
        let (t, m) = match finish_on_slope(&spec, sigma, bracket, ctx)? {
            // the minimum is flat to a few ulps, so compare with slack
            Some((t2, m2)) if m2 <= m * (1.0 + 8.0 * f64::EPSILON) => (t2, m2),
            _ => (t, m),
        };
        let s = ComplexPoint::new(sigma, t);
        let v = finite_eta::eval(&spec, s, ctx)?.value;
        let d = finite_eta::eval_derivative(&spec, s, ctx)?.value;
        // Newton step in t is iη/η'; its imaginary part is Re(η/η')
        let decay = if d.norm() > 0.0 { (v / d).re } else { 0.0 };
        Ok(ProtoZeroRecord {
            spec,
            sigma,
            t,
            magnitude: m,
            decay,
            bracket,
        })
    })?;
    records.sort_by(|a, b| a.t.total_cmp(&b.t));
    Ok(records)
}

/// Union of the scans for `n = 1 … n_max` over `t_center ± half_width`,
/// each at its default step.
pub fn proto_cloud(
    family: Family,
    n_max: u32,
    sigma: f64,
    t_center: f64,
    half_width: f64,
    jobs: usize,
    ctx: &PrecisionContext,
) -> Result<Vec<ProtoZeroRecord>> {
    if n_max < 1 {
        return Err(Error::Domain("n_max must be at least 1".into()));
    }
    if !(half_width.is_finite() && half_width >= 0.0) {
        return Err(Error::Domain(format!("half width must be non-negative, got {half_width}")));
    }
    if half_width == 0.0 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for n in 1..=n_max {
        let spec = FiniteEtaSpec::new(family, n)?;
        let cfg = ScanConfig::with_default_step(spec, sigma, t_center - half_width, t_center + half_width)?
            .with_jobs(jobs);
        out.extend(scan_line(&cfg, ctx)?);
    }
    out.sort_by(|a, b| a.spec.n().cmp(&b.spec.n()).then(a.t.total_cmp(&b.t)));
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NearestProto {
    pub n: u32,
    pub t: f64,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CloudComparison {
    pub zero_t: f64,
    pub per_n: Vec<NearestProto>,
    /// `Σ w_n t_n / Σ w_n` over the per-n nearest proto-zeros, `w_n = 2^{-(n+1)}`.
    pub centroid: f64,
    pub centroid_distance: f64,
}

/// Descriptive statistics of a cloud against a refined zero.
pub fn compare_to_global(records: &[ProtoZeroRecord], zero: &ZeroRecord) -> Result<CloudComparison> {
    if records.is_empty() {
        return Err(Error::Domain("no proto-zero records to compare".into()));
    }
    let mut per_n: Vec<NearestProto> = Vec::new();
    for r in records {
        let n = r.spec.n();
        let distance = (r.t - zero.t).abs();
        match per_n.iter_mut().find(|p| p.n == n) {
            Some(p) if distance < p.distance => {
                p.t = r.t;
                p.distance = distance;
            }
            Some(_) => {}
            None => per_n.push(NearestProto { n, t: r.t, distance }),
        }
    }
    per_n.sort_by_key(|p| p.n);
    let (mut num, mut den) = (0.0, 0.0);
    for p in &per_n {
        let w = 2f64.powi(-(p.n as i32 + 1));
        num += w * p.t;
        den += w;
    }
    let centroid = num / den;
    Ok(CloudComparison {
        zero_t: zero.t,
        per_n,
        centroid,
        centroid_distance: (centroid - zero.t).abs(),
    })
}
