//! Double-double (pair-of-f64) arithmetic for the characteristic-polynomial
//! recurrence.
//!
//! The Faddeev-LeVerrier recurrence forms coefficients spanning many orders of
//! magnitude; the small trailing coefficients of a tilted Liouvillian come out
//! of cancellations against intermediates ~1e10 larger, which costs ~10 decimal
//! digits in plain f64. Working the recurrence in ~31-digit double-double
//! arithmetic keeps those coefficients accurate to well below any tolerance
//! used downstream. Error-free transforms follow Dekker (1971) and Knuth;
//! products use Dekker splitting so no FMA support is required.

use num_complex::Complex64;

/// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline(always)]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline(always)]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    // requires |a| >= |b|
    let s = a + b;
    (s, b - (s - a))
}

#[inline(always)]
fn split(a: f64) -> (f64, f64) {
    // 2^27 + 1
    let t = 134217729.0 * a;
    let hi = t - (t - a);
    (hi, a - hi)
}

#[inline(always)]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    let err = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
    (p, err)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    #[inline(always)]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline(always)]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline(always)]
    pub fn add(self, other: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, other.hi);
        let e = e + self.lo + other.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }

    #[inline(always)]
    pub fn sub(self, other: Dd) -> Dd {
        self.add(other.neg())
    }

    #[inline(always)]
    pub fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    #[inline(always)]
    pub fn mul(self, other: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, other.hi);
        let e = e + self.hi * other.lo + self.lo * other.hi;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    #[inline(always)]
    pub fn div_f64(self, d: f64) -> Dd {
        let q1 = self.hi / d;
        let (p, e) = two_prod(q1, d);
        let r = ((self.hi - p) - e + self.lo) / d;
        let (hi, lo) = quick_two_sum(q1, r);
        Dd { hi, lo }
    }

    #[inline(always)]
    pub fn is_finite(self) -> bool {
        self.hi.is_finite()
    }
}

/// Complex double-double value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct DdC {
    pub re: Dd,
    pub im: Dd,
}

impl DdC {
    pub const ZERO: DdC = DdC { re: Dd::ZERO, im: Dd::ZERO };

    #[inline(always)]
    pub fn from_c64(z: Complex64) -> DdC {
        DdC { re: Dd::from_f64(z.re), im: Dd::from_f64(z.im) }
    }

    #[inline(always)]
    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    #[inline(always)]
    pub fn add(self, other: DdC) -> DdC {
        DdC { re: self.re.add(other.re), im: self.im.add(other.im) }
    }

    #[inline(always)]
    pub fn mul(self, other: DdC) -> DdC {
        DdC {
            re: self.re.mul(other.re).sub(self.im.mul(other.im)),
            im: self.re.mul(other.im).add(self.im.mul(other.re)),
        }
    }

    /// self + a*b, the matrix-product inner kernel.
    #[inline(always)]
    pub fn mul_add(self, a: DdC, b: DdC) -> DdC {
        self.add(a.mul(b))
    }

    #[inline(always)]
    pub fn div_f64(self, d: f64) -> DdC {
        DdC { re: self.re.div_f64(d), im: self.im.div_f64(d) }
    }

    #[inline(always)]
    pub fn neg(self) -> DdC {
        DdC { re: self.re.neg(), im: self.im.neg() }
    }

    #[inline(always)]
    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}
