use super::ComplexPoint;

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated sum of complex terms that also tracks `Σ|term|`, which is
/// what the cancellation estimates are measured against.
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexSum {
    re: CompensatedSum,
    im: CompensatedSum,
    abs_total: f64,
    max_abs: f64,
}

impl ComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, z: ComplexPoint) {
        self.re.add(z.re);
        self.im.add(z.im);
        let a = z.norm();
        self.abs_total += a;
        self.max_abs = self.max_abs.max(a);
    }

    pub fn value(&self) -> ComplexPoint {
        ComplexPoint::new(self.re.value(), self.im.value())
    }

    pub fn abs_total(&self) -> f64 {
        self.abs_total
    }

    pub fn max_abs(&self) -> f64 {
        self.max_abs
    }
}
