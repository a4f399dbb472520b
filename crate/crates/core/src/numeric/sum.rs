use num_complex::Complex64;

/// Neumaier-compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }

    /// Unevaluated (high, low) pair, used for prefix sums that are later
    /// differenced.
    #[inline]
    pub fn parts(&self) -> DoubleDouble {
        let hi = self.sum + self.comp;
        let lo = self.comp - (hi - self.sum);
        DoubleDouble { hi, lo }
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Compensated sum of complex terms, real and imaginary parts separately.
pub(crate) fn complex_sum<I: IntoIterator<Item = Complex64>>(iter: I) -> Complex64 {
    let mut re = CompensatedSum::new();
    let mut im = CompensatedSum::new();
    for z in iter {
        re.add(z.re);
        im.add(z.im);
    }
    Complex64::new(re.value(), im.value())
}

/// A value carried as `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

impl DoubleDouble {
    /// `self - other`, rounded back to `f64`.
    #[inline]
    pub fn diff(self, other: DoubleDouble) -> f64 {
        (self.hi - other.hi) + (self.lo - other.lo)
    }
}
