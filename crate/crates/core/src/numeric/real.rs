//! Arbitrary-precision real numbers.
//!
//! Thin wrapper over `astro_float::BigFloat` that fixes the rounding mode,
//! threads the shared constants cache, and carries the working precision
//! inside each value. Binary operations work at the larger precision of the
//! two operands.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::{BigInt, BigUint, Sign as IntSign};
use num_rational::BigRational;
use num_traits::Zero;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constants cache"));
}

fn with_cc<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Convert a decimal digit count to a binary precision with guard bits.
pub fn digits_to_bits(digits: u32) -> usize {
    (digits as f64 * 3.3219281).ceil() as usize + 32
}

/// An arbitrary-precision real number with value-carried precision.
#[derive(Clone, Debug)]
pub struct Real {
    x: BigFloat,
    prec: usize,
}

impl Real {
    pub fn zero(prec: usize) -> Self {
        Real { x: BigFloat::new(prec), prec }
    }

    pub fn one(prec: usize) -> Self {
        Real::from_i64(1, prec)
    }

    pub fn from_i64(v: i64, prec: usize) -> Self {
        Real { x: BigFloat::from_i64(v, prec), prec }
    }

    pub fn from_f64(v: f64, prec: usize) -> Self {
        Real { x: BigFloat::from_f64(v, prec), prec }
    }

    pub fn from_bigint(v: &BigInt, prec: usize) -> Self {
        let (sign, digits) = v.to_u64_digits();
        let mut r = Real::zero(prec.max(64 * digits.len().max(1)));
        let shift = Real::from_f64(18446744073709551616.0, r.prec); // 2^64
        for w in digits.iter().rev() {
            r = r.mul(&shift).add(&Real::from_u64_full(*w, r.prec));
        }
        if sign == IntSign::Minus {
            r = r.neg();
        }
        r.with_prec(prec)
    }

    fn from_u64_full(v: u64, prec: usize) -> Self {
        Real { x: BigFloat::from_u64(v, prec), prec }
    }

    pub fn from_rational(v: &BigRational, prec: usize) -> Self {
        // work with guard bits so the quotient is good to `prec`
        let p = prec + 32;
        Real::from_bigint(v.numer(), p)
            .div(&Real::from_bigint(v.denom(), p))
            .with_prec(prec)
    }

    pub fn pi(prec: usize) -> Self {
        Real { x: with_cc(|cc| cc.pi(prec, RM)), prec }
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    pub fn with_prec(&self, prec: usize) -> Self {
        let mut x = self.x.clone();
        x.set_precision(prec, RM).expect("set_precision");
        Real { x, prec }
    }

    fn join(&self, rhs: &Real) -> usize {
        self.prec.max(rhs.prec)
    }

    pub fn add(&self, rhs: &Real) -> Self {
        let p = self.join(rhs);
        Real { x: self.x.add(&rhs.x, p, RM), prec: p }
    }

    pub fn sub(&self, rhs: &Real) -> Self {
        let p = self.join(rhs);
        Real { x: self.x.sub(&rhs.x, p, RM), prec: p }
    }

    pub fn mul(&self, rhs: &Real) -> Self {
        let p = self.join(rhs);
        Real { x: self.x.mul(&rhs.x, p, RM), prec: p }
    }

    pub fn div(&self, rhs: &Real) -> Self {
        let p = self.join(rhs);
        Real { x: self.x.div(&rhs.x, p, RM), prec: p }
    }

    pub fn neg(&self) -> Self {
        Real { x: self.x.neg(), prec: self.prec }
    }

    pub fn abs(&self) -> Self {
        let mut x = self.x.clone();
        x.set_sign(Sign::Pos);
        Real { x, prec: self.prec }
    }

    pub fn sqrt(&self) -> Self {
        Real { x: self.x.sqrt(self.prec, RM), prec: self.prec }
    }

    pub fn exp(&self) -> Self {
        Real { x: with_cc(|cc| self.x.exp(self.prec, RM, cc)), prec: self.prec }
    }

    pub fn ln(&self) -> Self {
        Real { x: with_cc(|cc| self.x.ln(self.prec, RM, cc)), prec: self.prec }
    }

    pub fn sin(&self) -> Self {
        Real { x: with_cc(|cc| self.x.sin(self.prec, RM, cc)), prec: self.prec }
    }

    pub fn cos(&self) -> Self {
        Real { x: with_cc(|cc| self.x.cos(self.prec, RM, cc)), prec: self.prec }
    }

    /// Integer power with correct handling of negative exponents.
    pub fn powi(&self, n: i64) -> Self {
        if n < 0 {
            return Real::one(self.prec).div(&self.powi(-n));
        }
        Real { x: self.x.powi(n as usize, self.prec, RM), prec: self.prec }
    }

    /// Real power `self^e` for `self > 0`.
    pub fn pow(&self, e: &Real) -> Self {
        let p = self.join(e);
        Real { x: with_cc(|cc| self.x.pow(&e.x, p, RM, cc)), prec: p }
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.x.is_negative()
    }

    pub fn cmp(&self, rhs: &Real) -> Ordering {
        match self.x.cmp(&rhs.x) {
            Some(v) if v < 0 => Ordering::Less,
            Some(v) if v > 0 => Ordering::Greater,
            _ => Ordering::Equal,
        }
    }

    /// Binary exponent of the value: |x| < 2^exponent. Zero returns i64::MIN.
    pub fn exponent(&self) -> i64 {
        if self.x.is_zero() {
            i64::MIN
        } else {
            self.x.exponent().map(|e| e as i64).unwrap_or(i64::MIN)
        }
    }

    /// log10 of |x|, as a rough f64. Used for error bookkeeping only.
    pub fn log10_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        self.exponent() as f64 * std::f64::consts::LOG10_2
    }

    pub fn to_f64(&self) -> f64 {
        if self.x.is_zero() {
            return 0.0;
        }
        let e = self.exponent();
        if e > 1000 {
            return if self.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY };
        }
        if e < -1000 {
            return 0.0;
        }
        let (words, n, sign, _, _) = self.x.as_raw_parts().expect("raw parts");
        let top = words.last().copied().unwrap_or(0) as f64;
        let mut v = top / 2f64.powi(64) * 2f64.powi(e as i32);
        if n > 64 {
            if let Some(w2) = words.get(words.len().wrapping_sub(2)) {
                v += (*w2 as f64) / 2f64.powi(128) * 2f64.powi(e as i32);
            }
        }
        if sign == Sign::Neg {
            v = -v;
        }
        v
    }

    /// Nearest integer, as a BigInt.
    pub fn round_bigint(&self) -> BigInt {
        let half = Real::from_rational(&BigRational::new(BigInt::from(1), BigInt::from(2)), self.prec);
        let shifted = if self.is_negative() { self.sub(&half) } else { self.add(&half) };
        shifted.trunc_bigint()
    }

    /// Truncation toward zero, as a BigInt.
    pub fn trunc_bigint(&self) -> BigInt {
        if self.x.is_zero() {
            return BigInt::zero();
        }
        let (words, n, sign, exp, _) = self.x.as_raw_parts().expect("raw parts");
        let e = exp as i64;
        if e <= 0 {
            return BigInt::zero();
        }
        let mant = BigUint::from_slice(
            &words.iter().flat_map(|w| [*w as u32, (*w >> 32) as u32]).collect::<Vec<_>>(),
        );
        // value = mant / 2^n * 2^e
        let val = if e >= n as i64 {
            mant << ((e - n as i64) as usize)
        } else {
            mant >> ((n as i64 - e) as usize)
        };
        let v = BigInt::from(val);
        if sign == Sign::Neg {
            -v
        } else {
            v
        }
    }

    /// Nearest rational with denominator `den`.
    pub fn round_to_den(&self, den: &BigInt) -> BigRational {
        let num = self.mul(&Real::from_bigint(den, self.prec)).round_bigint();
        BigRational::new(num, den.clone())
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = with_cc(|cc| self.x.format(Radix::Dec, RM, cc)).map_err(|_| fmt::Error)?;
        write!(f, "{s}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::str::FromStr;

    const P: usize = 192;

    #[test]
    fn bigint_roundtrip() {
        let v = BigInt::from_str("123456789012345678901234567890").unwrap();
        let r = Real::from_bigint(&v, P);
        assert_eq!(r.trunc_bigint(), v);
        let neg = Real::from_bigint(&(-&v), P);
        assert_eq!(neg.trunc_bigint(), -v);
    }

    #[test]
    fn rational_and_round() {
        let q = BigRational::new(BigInt::from(22), BigInt::from(7));
        let r = Real::from_rational(&q, P);
        assert_eq!(r.round_bigint(), BigInt::from(3));
        assert_eq!(r.round_to_den(&BigInt::from(7)), q);
    }

    #[test]
    fn pi_digits() {
        let pi = Real::pi(P);
        let approx = Real::from_f64(3.141592653589793, P);
        let d = pi.sub(&approx).abs();
        assert!(d.cmp(&Real::from_f64(1e-15, P)) == Ordering::Less);
    }

    #[test]
    fn exp_ln_inverse() {
        let x = Real::from_f64(1.75, P);
        let y = x.exp().ln();
        let d = y.sub(&x).abs();
        assert!(d.log10_abs() < -50.0);
    }
}
