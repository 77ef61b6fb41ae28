//! Minimal double-double arithmetic (~31 significant digits).
//!
//! Used only by the Airy Maclaurin series, where the two constituent power
//! series cancel to roughly e^{(4/3)|x|^{3/2}} against the result and plain
//! f64 accumulation would lose up to 16 digits inside the series region.

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let v = s - a;
    (s, (a - (s - v)) + (b - v))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    // requires |a| >= |b|
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[cfg(test)]
    pub fn new(hi: f64, lo: f64) -> Dd {
        Dd { hi, lo }
    }

    #[inline]
    pub fn add(self, other: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, other.hi);
        let e = e + self.lo + other.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn mul(self, other: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, other.hi);
        let e = e + self.hi * other.lo + self.lo * other.hi;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn mul_f64(self, c: f64) -> Dd {
        let (p, e) = two_prod(self.hi, c);
        let e = e + self.lo * c;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    /// Division by an exactly representable f64 (integer products here).
    #[inline]
    pub fn div_f64(self, c: f64) -> Dd {
        let q0 = self.hi / c;
        // residual r = self - q0*c, exact via two_prod
        let (p, e) = two_prod(q0, c);
        let (rh, rl) = two_sum(self.hi, -p);
        let r = rh + (rl + self.lo - e);
        let q1 = r / c;
        let (hi, lo) = quick_two_sum(q0, q1);
        Dd { hi, lo }
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn abs_hi(self) -> f64 {
        self.hi.abs()
    }
}

/// √y to double-double accuracy (one exact-residual Newton correction).
pub(crate) fn sqrt_dd(y: f64) -> Dd {
    let s0 = y.sqrt();
    if s0 == 0.0 || !s0.is_finite() {
        return Dd::from_f64(s0);
    }
    let (p, e) = two_prod(s0, s0);
    let r = (y - p) - e;
    let c = r / (2.0 * s0);
    let (hi, lo) = quick_two_sum(s0, c);
    Dd { hi, lo }
}

pub(crate) const TWO_PI: Dd = Dd {
    hi: 6.283185307179586,
    lo: 2.4492935982947064e-16,
};
