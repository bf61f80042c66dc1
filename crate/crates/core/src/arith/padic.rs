//! Truncated p-adic numbers with explicit precision tracking.
//!
//! A nonzero value is p^val * unit + O(p^(val+prec)) with the unit stored
//! modulo p^prec and coprime to p. Zero is stored as O(p^abs): a value known
//! to vanish to that absolute precision (i64::MAX marks an exact zero).
//! Operations return the correct, possibly reduced, precision; precision is
//! never silently increased.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum PadicError {
    #[error("division by (p-adic) zero")]
    DivisionByZero,
    #[error("precision exhausted")]
    PrecisionExhausted,
    #[error("modulus p^{n} of prime {p} overflows the word size")]
    ModulusOverflow { p: u64, n: u32 },
}

/// p^n as u128, checked to stay below 2^63 so products fit in u128.
pub fn pow_u128(p: u64, n: u32) -> Result<u128, PadicError> {
    let mut acc: u128 = 1;
    for _ in 0..n {
        acc = acc.checked_mul(p as u128).ok_or(PadicError::ModulusOverflow { p, n })?;
        if acc >= (1u128 << 63) {
            return Err(PadicError::ModulusOverflow { p, n });
        }
    }
    Ok(acc)
}

fn inv_mod(a: u128, m: u128) -> u128 {
    // extended euclid
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    assert!(r0 == 1, "inverse of non-unit");
    t0.rem_euclid(m as i128) as u128
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Body {
    /// O(p^abs); abs = i64::MAX for exact zero.
    Zero { abs: i64 },
    NonZero { val: i64, unit: u128, prec: u32 },
}

/// A truncated p-adic number.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct PadicNum {
    p: u64,
    body: Body,
}

impl PadicNum {
    pub fn zero_exact(p: u64) -> Self {
        PadicNum { p, body: Body::Zero { abs: i64::MAX } }
    }

    pub fn zero_prec(p: u64, abs: i64) -> Self {
        PadicNum { p, body: Body::Zero { abs } }
    }

    pub fn from_parts(p: u64, val: i64, unit: u128, prec: u32) -> Result<Self, PadicError> {
        let m = pow_u128(p, prec)?;
        let u = unit % m;
        if u == 0 {
            // the claimed unit is 0 mod p^prec: it's a zero to that precision
            return Ok(PadicNum::zero_prec(p, val + prec as i64));
        }
        if u % p as u128 == 0 {
            // not actually a unit: renormalize
            let mut u2 = u;
            let mut v2 = val;
            let mut n2 = prec;
            while u2 % p as u128 == 0 {
                u2 /= p as u128;
                v2 += 1;
                n2 -= 1;
            }
            return Ok(PadicNum { p, body: Body::NonZero { val: v2, unit: u2, prec: n2 } });
        }
        Ok(PadicNum { p, body: Body::NonZero { val, unit: u, prec } })
    }

    pub fn from_i64(p: u64, v: i64, prec: u32) -> Self {
        PadicNum::from_bigint(p, &BigInt::from(v), prec)
    }

    pub fn from_bigint(p: u64, v: &BigInt, prec: u32) -> Self {
        if v.is_zero() {
            return PadicNum::zero_exact(p);
        }
        let pb = BigInt::from(p);
        let mut val = 0i64;
        let mut rest = v.clone();
        while (&rest % &pb).is_zero() {
            rest /= &pb;
            val += 1;
        }
        let m = BigInt::from(pow_u128(p, prec).expect("modulus overflow"));
        let unit = rest.mod_floor(&m).to_u128().unwrap();
        PadicNum::from_parts(p, val, unit, prec).unwrap()
    }

    pub fn from_rational(p: u64, q: &BigRational, prec: u32) -> Self {
        if q.is_zero() {
            return PadicNum::zero_exact(p);
        }
        let num = PadicNum::from_bigint(p, q.numer(), prec);
        let den = PadicNum::from_bigint(p, q.denom(), prec);
        num.div(&den).expect("denominator nonzero")
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.body, Body::Zero { .. })
    }

    /// Valuation; None for a (possibly inexact) zero.
    pub fn valuation(&self) -> Option<i64> {
        match self.body {
            Body::Zero { .. } => None,
            Body::NonZero { val, .. } => Some(val),
        }
    }

    /// Lower bound for the valuation that is always available.
    pub fn valuation_floor(&self) -> i64 {
        match self.body {
            Body::Zero { abs } => abs,
            Body::NonZero { val, .. } => val,
        }
    }

    /// Relative precision (significant p-adic digits); None for zero.
    pub fn rel_prec(&self) -> Option<u32> {
        match self.body {
            Body::Zero { .. } => None,
            Body::NonZero { prec, .. } => Some(prec),
        }
    }

    /// Absolute precision exponent: the value is known modulo p^(this).
    pub fn abs_prec(&self) -> i64 {
        match self.body {
            Body::Zero { abs } => abs,
            Body::NonZero { val, prec, .. } => val + prec as i64,
        }
    }

    pub fn unit_residue(&self) -> Option<u128> {
        match self.body {
            Body::Zero { .. } => None,
            Body::NonZero { unit, .. } => Some(unit),
        }
    }

    /// The residue of the value modulo p^k, for val >= 0 values. Errors if
    /// the stored precision cannot see p^k.
    pub fn residue_mod(&self, k: u32) -> Result<u128, PadicError> {
        if self.abs_prec() < k as i64 {
            return Err(PadicError::PrecisionExhausted);
        }
        let m = pow_u128(self.p, k)?;
        match self.body {
            Body::Zero { .. } => Ok(0),
            Body::NonZero { val, unit, .. } => {
                if val < 0 {
                    return Err(PadicError::PrecisionExhausted);
                }
                let mut r = unit % m;
                for _ in 0..val.min(k as i64) {
                    r = (r * self.p as u128) % m;
                }
                Ok(r)
            }
        }
    }

    /// Truncate to absolute precision `abs`.
    pub fn truncate_abs(&self, abs: i64) -> Self {
        match self.body {
            Body::Zero { abs: a } => PadicNum::zero_prec(self.p, a.min(abs)),
            Body::NonZero { val, unit, prec } => {
                if val >= abs {
                    return PadicNum::zero_prec(self.p, abs);
                }
                let new_prec = ((abs - val) as u32).min(prec);
                let m = pow_u128(self.p, new_prec).expect("overflow");
                PadicNum::from_parts(self.p, val, unit % m, new_prec).unwrap()
            }
        }
    }

    pub fn add(&self, rhs: &PadicNum) -> Self {
        assert_eq!(self.p, rhs.p);
        let abs = self.abs_prec().min(rhs.abs_prec());
        match (self.body, rhs.body) {
            (Body::Zero { .. }, _) => rhs.truncate_abs(abs),
            (_, Body::Zero { .. }) => self.truncate_abs(abs),
            (
                Body::NonZero { val: v1, unit: u1, .. },
                Body::NonZero { val: v2, unit: u2, .. },
            ) => {
                let v = v1.min(v2);
                if abs <= v {
                    return PadicNum::zero_prec(self.p, abs);
                }
                let n = (abs - v) as u32;
                let m = match pow_u128(self.p, n) {
                    Ok(m) => m,
                    Err(_) => panic!("padic add: modulus overflow"),
                };
                let lift = |vv: i64, uu: u128| -> u128 {
                    let mut r = uu % m;
                    for _ in 0..(vv - v) {
                        r = (r * self.p as u128) % m;
                    }
                    r
                };
                let s = (lift(v1, u1) + lift(v2, u2)) % m;
                if s == 0 {
                    PadicNum::zero_prec(self.p, abs)
                } else {
                    PadicNum::from_parts(self.p, v, s, n).unwrap().truncate_abs(abs)
                }
            }
        }
    }

    pub fn neg(&self) -> Self {
        match self.body {
            Body::Zero { .. } => *self,
            Body::NonZero { val, unit, prec } => {
                let m = pow_u128(self.p, prec).unwrap();
                PadicNum::from_parts(self.p, val, m - unit, prec).unwrap()
            }
        }
    }

    pub fn sub(&self, rhs: &PadicNum) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &PadicNum) -> Self {
        assert_eq!(self.p, rhs.p);
        match (self.body, rhs.body) {
            (Body::Zero { abs }, _) => {
                // O(p^a) * (p^v u + O(..)) = O(p^(a + v_floor))
                let shift = rhs.valuation_floor();
                PadicNum::zero_prec(self.p, abs.saturating_add(shift))
            }
            (_, Body::Zero { abs }) => {
                let shift = self.valuation_floor();
                PadicNum::zero_prec(self.p, abs.saturating_add(shift))
            }
            (
                Body::NonZero { val: v1, unit: u1, prec: n1 },
                Body::NonZero { val: v2, unit: u2, prec: n2 },
            ) => {
                let n = n1.min(n2);
                let m = pow_u128(self.p, n).unwrap();
                let u = (u1 % m) * (u2 % m) % m;
                PadicNum::from_parts(self.p, v1 + v2, u, n).unwrap()
            }
        }
    }

    pub fn inv(&self) -> Result<Self, PadicError> {
        match self.body {
            Body::Zero { .. } => Err(PadicError::DivisionByZero),
            Body::NonZero { val, unit, prec } => {
                let m = pow_u128(self.p, prec)?;
                Ok(PadicNum::from_parts(self.p, -val, inv_mod(unit, m), prec).unwrap())
            }
        }
    }

    pub fn div(&self, rhs: &PadicNum) -> Result<Self, PadicError> {
        Ok(self.mul(&rhs.inv()?))
    }

    pub fn pow(&self, n: i64) -> Result<Self, PadicError> {
        if n < 0 {
            return self.inv()?.pow(-n);
        }
        let mut acc = match self.body {
            Body::Zero { .. } if n == 0 => return Ok(PadicNum::from_i64(self.p, 1, 1)),
            Body::NonZero { prec, .. } => PadicNum::from_i64(self.p, 1, prec),
            Body::Zero { abs } => {
                return Ok(PadicNum::zero_prec(self.p, abs.saturating_mul(n)));
            }
        };
        let mut base = *self;
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        Ok(acc)
    }

    /// Do the stored digits of both values agree wherever both are known?
    pub fn agrees_with(&self, rhs: &PadicNum) -> bool {
        let abs = self.abs_prec().min(rhs.abs_prec());
        if abs == i64::MAX {
            return self.body == rhs.body;
        }
        let d = self.sub(rhs);
        d.valuation_floor() >= abs
    }
}

fn fmt_padic(x: &PadicNum, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match x.body {
        Body::Zero { abs: i64::MAX } => write!(f, "0 (exact, p={})", x.p),
        Body::Zero { abs } => write!(f, "O({}^{})", x.p, abs),
        Body::NonZero { val, unit, prec } => {
            write!(f, "{}^{} * {} + O({}^{})", x.p, val, unit, x.p, val + prec as i64)
        }
    }
}

impl fmt::Debug for PadicNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_padic(self, f)
    }
}

impl fmt::Display for PadicNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_padic(self, f)
    }
}
