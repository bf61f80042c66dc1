//! Complex numbers over [`Real`].

use std::fmt;

use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::real::Real;

#[derive(Clone, Debug)]
pub struct Cx {
    pub re: Real,
    pub im: Real,
}

impl Cx {
    pub fn new(re: Real, im: Real) -> Self {
        Cx { re, im }
    }

    pub fn zero(prec: usize) -> Self {
        Cx { re: Real::zero(prec), im: Real::zero(prec) }
    }

    pub fn one(prec: usize) -> Self {
        Cx { re: Real::one(prec), im: Real::zero(prec) }
    }

    pub fn from_real(re: Real) -> Self {
        let p = re.prec();
        Cx { re, im: Real::zero(p) }
    }

    pub fn i(prec: usize) -> Self {
        Cx { re: Real::zero(prec), im: Real::one(prec) }
    }

    pub fn prec(&self) -> usize {
        self.re.prec().max(self.im.prec())
    }

    pub fn add(&self, rhs: &Cx) -> Self {
        Cx { re: self.re.add(&rhs.re), im: self.im.add(&rhs.im) }
    }

    pub fn sub(&self, rhs: &Cx) -> Self {
        Cx { re: self.re.sub(&rhs.re), im: self.im.sub(&rhs.im) }
    }

    pub fn mul(&self, rhs: &Cx) -> Self {
        Cx {
            re: self.re.mul(&rhs.re).sub(&self.im.mul(&rhs.im)),
            im: self.re.mul(&rhs.im).add(&self.im.mul(&rhs.re)),
        }
    }

    pub fn mul_real(&self, rhs: &Real) -> Self {
        Cx { re: self.re.mul(rhs), im: self.im.mul(rhs) }
    }

    pub fn div(&self, rhs: &Cx) -> Self {
        let n = rhs.norm_sq();
        let num = self.mul(&rhs.conj());
        Cx { re: num.re.div(&n), im: num.im.div(&n) }
    }

    pub fn neg(&self) -> Self {
        Cx { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn conj(&self) -> Self {
        Cx { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn norm_sq(&self) -> Real {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    pub fn abs(&self) -> Real {
        self.norm_sq().sqrt()
    }

    pub fn powi(&self, n: i64) -> Self {
        if n < 0 {
            return Cx::one(self.prec()).div(&self.powi(-n));
        }
        let mut acc = Cx::one(self.prec());
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }

    /// e^{2*pi*i*q} for a rational q.
    pub fn root_of_unity(q: &BigRational, prec: usize) -> Self {
        let two_pi = Real::pi(prec).mul(&Real::from_i64(2, prec));
        // reduce q mod 1 to keep the angle small
        let mut qr = q.clone();
        let fl = qr.floor();
        qr -= fl;
        let theta = two_pi.mul(&Real::from_rational(&qr, prec));
        Cx { re: theta.cos(), im: theta.sin() }
    }

    /// x^s for real positive x and complex exponent is not needed; this is
    /// z^s for real s with z given in polar pieces (used by the functional
    /// equation where the base is a positive real).
    pub fn real_pow(base: &Real, s: &Real) -> Real {
        base.pow(s)
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    pub fn dist(&self, rhs: &Cx) -> Real {
        self.sub(rhs).abs()
    }

    /// Scale by an exact rational.
    pub fn mul_rational(&self, q: &BigRational) -> Self {
        let r = Real::from_rational(q, self.prec());
        self.mul_real(&r)
    }
}

impl fmt::Display for Cx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}*i)", self.re, self.im)
    }
}

/// A complex value together with a propagated error-magnitude bound.
///
/// The bound is an upper estimate for |true - stored| carried as a plain
/// f64 magnitude; arithmetic on values combines bounds first-order.
#[derive(Clone, Debug)]
pub struct CxBall {
    pub value: Cx,
    pub err: f64,
}

impl CxBall {
    pub fn exact(value: Cx) -> Self {
        CxBall { value, err: 0.0 }
    }

    pub fn new(value: Cx, err: f64) -> Self {
        CxBall { value, err }
    }

    pub fn add(&self, rhs: &CxBall) -> Self {
        CxBall { value: self.value.add(&rhs.value), err: self.err + rhs.err }
    }

    pub fn sub(&self, rhs: &CxBall) -> Self {
        CxBall { value: self.value.sub(&rhs.value), err: self.err + rhs.err }
    }

    pub fn mul(&self, rhs: &CxBall) -> Self {
        let a = self.value.abs().to_f64().abs();
        let b = rhs.value.abs().to_f64().abs();
        CxBall {
            value: self.value.mul(&rhs.value),
            err: self.err * b + rhs.err * a + self.err * rhs.err,
        }
    }

    pub fn div(&self, rhs: &CxBall) -> Self {
        let a = self.value.abs().to_f64().abs();
        let b = rhs.value.abs().to_f64().abs().max(f64::MIN_POSITIVE);
        CxBall {
            value: self.value.div(&rhs.value),
            err: self.err / b + rhs.err * a / (b * b),
        }
    }

    /// True when the ball certainly excludes zero.
    pub fn nonzero(&self) -> bool {
        self.value.abs().to_f64() > self.err * 4.0
    }

    pub fn abs_f64(&self) -> f64 {
        self.value.abs().to_f64()
    }
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    const P: usize = 192;

    #[test]
    fn i_squared() {
        let i = Cx::i(P);
        let m1 = i.mul(&i);
        assert!(m1.re.add(&Real::one(P)).abs().log10_abs() < -50.0);
        assert!(m1.im.abs().log10_abs() < -50.0);
    }

    #[test]
    fn fifth_roots_sum_to_minus_one() {
        let mut s = Cx::zero(P);
        for j in 1..5 {
            let q = BigRational::new(BigInt::from(j), BigInt::from(5));
            s = s.add(&Cx::root_of_unity(&q, P));
        }
        assert!(s.re.add(&Real::one(P)).abs().log10_abs() < -50.0);
        assert!(s.im.abs().log10_abs() < -50.0);
    }
}
