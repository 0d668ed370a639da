//! Error-free transformations for sums with heavy cancellation.
//!
//! Both combinatorial routes add up thousands of unit-modulus terms whose
//! total can be many orders of magnitude below the partial sums (deep
//! interference minima). Plain `f64` accumulation then loses the digits
//! that the comparison tolerances need.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// Double-double real: `hi + lo` with `|lo| <= ulp(hi) / 2`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

impl DoubleDouble {
    pub const ZERO: Self = Self { hi: 0.0, lo: 0.0 };

    pub fn from_f64(v: f64) -> Self {
        Self { hi: v, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    /// Exact product of two doubles.
    pub fn product(a: f64, b: f64) -> Self {
        let (hi, lo) = two_prod(a, b);
        Self { hi, lo }
    }

    pub fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p, e + self.lo * b);
        Self { hi, lo }
    }
}

impl Add for DoubleDouble {
    type Output = Self;

    fn add(self, other: Self) -> Self {
        let (s, e) = two_sum(self.hi, other.hi);
        let (t, f) = two_sum(self.lo, other.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Self { hi, lo }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;

    fn sub(self, other: Self) -> Self {
        self + (-other)
    }
}

impl Neg for DoubleDouble {
    type Output = Self;

    fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Mul for DoubleDouble {
    type Output = Self;

    fn mul(self, other: Self) -> Self {
        let (p, e) = two_prod(self.hi, other.hi);
        let e = e + (self.hi * other.lo + self.lo * other.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Self { hi, lo }
    }
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

/// Complex number with double-double parts.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DdComplex {
    pub re: DoubleDouble,
    pub im: DoubleDouble,
}

impl DdComplex {
    pub const ZERO: Self = Self {
        re: DoubleDouble::ZERO,
        im: DoubleDouble::ZERO,
    };

    pub fn from_c64(z: Complex64) -> Self {
        Self {
            re: DoubleDouble::from_f64(z.re),
            im: DoubleDouble::from_f64(z.im),
        }
    }

    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    /// `a * conj(b)` for ordinary complex inputs, carried to double-double
    /// precision.
    pub fn mul_conj(a: Complex64, b: Complex64) -> Self {
        Self {
            re: DoubleDouble::product(a.re, b.re) + DoubleDouble::product(a.im, b.im),
            im: DoubleDouble::product(a.im, b.re) - DoubleDouble::product(a.re, b.im),
        }
    }

    /// `self * w` with `w` an ordinary complex number.
    pub fn mul_c64(self, w: Complex64) -> Self {
        Self {
            re: self.re.mul_f64(w.re) - self.im.mul_f64(w.im),
            im: self.re.mul_f64(w.im) + self.im.mul_f64(w.re),
        }
    }
}

impl Add for DdComplex {
    type Output = Self;

    fn add(self, other: Self) -> Self {
        Self {
            re: self.re + other.re,
            im: self.im + other.im,
        }
    }
}

impl Neg for DdComplex {
    type Output = Self;

    fn neg(self) -> Self {
        Self {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Mul for DdComplex {
    type Output = Self;

    fn mul(self, w: Self) -> Self {
        Self {
            re: self.re * w.re - self.im * w.im,
            im: self.re * w.im + self.im * w.re,
        }
    }
}

/// Neumaier-compensated running sum of complex terms.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: Complex64,
    carry: Complex64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        let (re, ce) = two_sum(self.sum.re, z.re);
        let (im, ci) = two_sum(self.sum.im, z.im);
        self.sum = Complex64::new(re, im);
        self.carry += Complex64::new(ce, ci);
    }

    pub fn value(&self) -> Complex64 {
        self.sum + self.carry
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn double_double_keeps_small_residue() {
        // (1e16 + 1) - 1e16 loses the 1 in plain f64
        let big = DoubleDouble::from_f64(1e16);
        let r = big + DoubleDouble::from_f64(1.0) + (-big);
        assert_eq!(r.to_f64(), 1.0);
        let p = DoubleDouble::from_f64(1.0 + f64::EPSILON).mul_f64(1.0 + f64::EPSILON);
        // exact square is 1 + 2 eps + eps^2
        assert_eq!(p.hi, 1.0 + 2.0 * f64::EPSILON);
        assert_eq!(p.lo, f64::EPSILON * f64::EPSILON);
    }

    #[test]
    fn compensated_sum_cancels_cleanly() {
        let mut s = CompensatedSum::new();
        for _ in 0..1000 {
            s.add(Complex64::new(1e8, -3.0));
            s.add(Complex64::new(0.1, 0.0));
        }
        for _ in 0..1000 {
            s.add(Complex64::new(-1e8, 3.0));
        }
        assert!((s.value().re - 100.0).abs() < 1e-9);
        assert_eq!(s.value().im, 0.0);
    }

    #[test]
    fn dd_products() {
        let a = Complex64::new(0.6, 0.8);
        let z = DdComplex::mul_conj(a, a);
        assert!((z.re.to_f64() - 1.0).abs() < 1e-15);
        assert_eq!(z.im.to_f64(), 0.0);
        let x = DoubleDouble::from_f64(3.0) * DoubleDouble::from_f64(1.0 / 3.0);
        assert!((x.to_f64() - 1.0).abs() <= f64::EPSILON);
    }

    #[test]
    fn dd_complex_multiply() {
        let z = DdComplex::from_c64(Complex64::new(1.5, -2.0));
        let w = Complex64::new(0.25, 4.0);
        assert_eq!(z.mul_c64(w).to_c64(), Complex64::new(1.5, -2.0) * w);
    }
}
