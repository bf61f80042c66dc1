//! Exact elements of the imaginary quadratic field K = Q(sqrt(-D)).
//!
//! Coordinates are rational in the integral basis {1, omega}, where
//! omega = sqrt(-d0) when -D = -4 d0, and omega = (1 + sqrt(-D))/2 when
//! -D = 1 mod 4. Multiplication uses omega^2 = s + t omega.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::cyclotomic::CycNum;

/// Shape of the ring of integers, fixed by the discriminant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BasisShape {
    /// omega^2 = s + t*omega
    pub s: i64,
    pub t: i64,
    /// squarefree core: omega involves sqrt(-d0)
    pub d0: i64,
    /// true when omega = (1 + sqrt(-D))/2
    pub half: bool,
}

impl BasisShape {
    /// From the positive D with -D a fundamental discriminant.
    pub fn from_disc(d: u64) -> Self {
        if d % 4 == 0 {
            let d0 = (d / 4) as i64;
            BasisShape { s: -d0, t: 0, d0, half: false }
        } else {
            // -D = 1 mod 4: omega = (1+sqrt(-D))/2, omega^2 = omega - (1+D)/4
            let s = -(((d + 1) / 4) as i64);
            BasisShape { s, t: 1, d0: d as i64, half: true }
        }
    }
}

/// x + y*omega with exact rational coordinates.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ElemK {
    pub x: BigRational,
    pub y: BigRational,
    pub shape: BasisShape,
}

impl ElemK {
    pub fn new(x: BigRational, y: BigRational, shape: BasisShape) -> Self {
        ElemK { x, y, shape }
    }

    pub fn from_ints(x: i64, y: i64, shape: BasisShape) -> Self {
        ElemK {
            x: BigRational::from_integer(BigInt::from(x)),
            y: BigRational::from_integer(BigInt::from(y)),
            shape,
        }
    }

    pub fn zero(shape: BasisShape) -> Self {
        ElemK::from_ints(0, 0, shape)
    }

    pub fn one(shape: BasisShape) -> Self {
        ElemK::from_ints(1, 0, shape)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.x.is_one() && self.y.is_zero()
    }

    /// Integral in O_K: both coordinates in Z.
    pub fn is_integral(&self) -> bool {
        self.x.is_integer() && self.y.is_integer()
    }

    pub fn add(&self, rhs: &ElemK) -> Self {
        ElemK::new(&self.x + &rhs.x, &self.y + &rhs.y, self.shape)
    }

    pub fn sub(&self, rhs: &ElemK) -> Self {
        ElemK::new(&self.x - &rhs.x, &self.y - &rhs.y, self.shape)
    }

    pub fn neg(&self) -> Self {
        ElemK::new(-&self.x, -&self.y, self.shape)
    }

    pub fn mul(&self, rhs: &ElemK) -> Self {
        // (x1 + y1 w)(x2 + y2 w) = x1 x2 + y1 y2 (s + t w) + (x1 y2 + x2 y1) w
        let s = BigRational::from_integer(BigInt::from(self.shape.s));
        let t = BigRational::from_integer(BigInt::from(self.shape.t));
        let yy = &self.y * &rhs.y;
        let x = &self.x * &rhs.x + &yy * s;
        let y = &self.x * &rhs.y + &self.y * &rhs.x + &yy * t;
        ElemK::new(x, y, self.shape)
    }

    /// Complex conjugation.
    pub fn conj(&self) -> Self {
        if self.shape.half {
            // conj(omega) = 1 - omega
            ElemK::new(&self.x + &self.y, -&self.y, self.shape)
        } else {
            ElemK::new(self.x.clone(), -&self.y, self.shape)
        }
    }

    /// Field norm, always >= 0.
    pub fn norm(&self) -> BigRational {
        let n = self.mul(&self.conj());
        debug_assert!(n.y.is_zero());
        n.x
    }

    pub fn trace(&self) -> BigRational {
        let c = self.add(&self.conj());
        debug_assert!(c.y.is_zero());
        c.x
    }

    pub fn inv(&self) -> Option<ElemK> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        let c = self.conj();
        Some(ElemK::new(&c.x / &n, &c.y / &n, self.shape))
    }

    pub fn div(&self, rhs: &ElemK) -> Option<ElemK> {
        Some(self.mul(&rhs.inv()?))
    }

    /// Does rhs divide self in O_K?
    pub fn divisible_by(&self, rhs: &ElemK) -> bool {
        match self.div(rhs) {
            Some(q) => q.is_integral(),
            None => false,
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = ElemK::one(self.shape);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Express as an exact cyclotomic number, through
    /// sqrt(-D) = sum_a kronecker(-D, a) zeta_D^a (quadratic Gauss sum
    /// for the fundamental discriminant -D).
    pub fn to_cyc(&self, d_disc: u64) -> CycNum {
        let sqrt_md = sqrt_minus_disc_cyc(d_disc);
        // omega in terms of sqrt(-D):
        let omega = if self.shape.half {
            // (1 + sqrt(-D))/2
            CycNum::one()
                .add(&sqrt_md)
                .scale(&BigRational::new(BigInt::one(), BigInt::from(2)))
        } else {
            // sqrt(-d0) = sqrt(-D)/2
            sqrt_md.scale(&BigRational::new(BigInt::one(), BigInt::from(2)))
        };
        CycNum::from_rational(self.x.clone()).add(&omega.scale(&self.y))
    }

    /// Real and imaginary parts under the canonical complex embedding
    /// (omega maps to the upper half plane).
    pub fn complex_parts(&self) -> (BigRational, BigRational) {
        // x + y*omega; omega = u + v*sqrt(d0)*i with (u, v) below
        let (u, v) = if self.shape.half {
            (
                BigRational::new(BigInt::one(), BigInt::from(2)),
                BigRational::new(BigInt::one(), BigInt::from(2)),
            )
        } else {
            (BigRational::zero(), BigRational::one())
        };
        // beware: v multiplies sqrt(d0); we return (re, im/sqrt(d0))
        (&self.x + &self.y * u, &self.y * v)
    }
}

/// sqrt(-D) as an element of Q(zeta_D) via the quadratic Gauss sum.
pub fn sqrt_minus_disc_cyc(d_disc: u64) -> CycNum {
    if d_disc == 4 {
        // 2i
        return CycNum::zeta(4).scale(&BigRational::from_integer(BigInt::from(2)));
    }
    let mut s = CycNum::zero();
    for a in 1..d_disc {
        let k = kronecker(-(d_disc as i64), a as i64);
        if k == 1 {
            s = s.add(&CycNum::zeta_pow(d_disc, a as i64));
        } else if k == -1 {
            s = s.sub(&CycNum::zeta_pow(d_disc, a as i64));
        }
    }
    s
}

/// Kronecker symbol (a|n).
pub fn kronecker(a: i64, n: i64) -> i64 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut a = a;
    let mut n = n;
    let mut result = 1i64;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    // strip factors of 2 from n
    let mut e2 = 0;
    while n % 2 == 0 {
        n /= 2;
        e2 += 1;
    }
    if e2 > 0 {
        if a % 2 == 0 {
            return 0;
        }
        // (a|2) = 1 if a = ±1 mod 8 else -1
        let am8 = a.rem_euclid(8);
        if e2 % 2 == 1 && (am8 == 3 || am8 == 5) {
            result = -result;
        }
    }
    a = a.rem_euclid(n);
    // Jacobi on odd n
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let nm8 = n.rem_euclid(8);
            if nm8 == 3 || nm8 == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a.rem_euclid(4) == 3 && n.rem_euclid(4) == 3 {
            result = -result;
        }
        a = a.rem_euclid(n);
    }
    if n == 1 {
        result
    } else {
        0
    }
}

impl fmt::Debug for ElemK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}*w)", self.x, self.y)
    }
}

impl fmt::Display for ElemK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_arithmetic() {
        let sh = BasisShape::from_disc(4);
        let a = ElemK::from_ints(2, 1, sh); // 2 + i
        let b = ElemK::from_ints(2, -1, sh); // 2 - i
        assert_eq!(a.conj(), b);
        assert_eq!(a.conj().conj(), a);
        let n = a.mul(&b);
        assert!(n.y.is_zero());
        assert_eq!(n.x, BigRational::from_integer(BigInt::from(5)));
        assert_eq!(a.norm(), BigRational::from_integer(BigInt::from(5)));
    }

    #[test]
    fn half_basis_norms() {
        // D = 3: omega = (1+sqrt(-3))/2, norm(omega) = 1
        let sh = BasisShape::from_disc(3);
        let w = ElemK::from_ints(0, 1, sh);
        assert_eq!(w.norm(), BigRational::from_integer(BigInt::one()));
        assert_eq!(w.trace(), BigRational::from_integer(BigInt::one()));
    }

    #[test]
    fn norm_zero_iff_zero() {
        let sh = BasisShape::from_disc(4);
        for x in -3i64..=3 {
            for y in -3i64..=3 {
                let e = ElemK::from_ints(x, y, sh);
                assert_eq!(e.norm().is_zero(), e.is_zero());
            }
        }
    }

    #[test]
    fn cyc_embedding_of_i() {
        let sh = BasisShape::from_disc(4);
        let i = ElemK::from_ints(0, 1, sh);
        assert_eq!(i.to_cyc(4), CycNum::zeta(4));
        let z = ElemK::from_ints(2, 3, sh);
        let zc = z.to_cyc(4);
        // norm through cyclotomic conj matches
        assert_eq!(
            zc.mul(&zc.conj()).as_rational().unwrap(),
            BigRational::from_integer(BigInt::from(13))
        );
    }

    #[test]
    fn kronecker_values() {
        // chi_{-4}: 1 on 1 mod 4, -1 on 3 mod 4, 0 on even
        assert_eq!(kronecker(-4, 5), 1);
        assert_eq!(kronecker(-4, 7), -1);
        assert_eq!(kronecker(-4, 2), 0);
        // chi_{-3}
        assert_eq!(kronecker(-3, 7), 1);
        assert_eq!(kronecker(-3, 5), -1);
        // chi_{-8}
        assert_eq!(kronecker(-8, 3), 1);
        assert_eq!(kronecker(-8, 5), -1);
    }

    #[test]
    fn sqrt_disc_squares_correctly() {
        for d in [3u64, 4, 7, 8, 11] {
            let s = sqrt_minus_disc_cyc(d);
            let sq = s.mul(&s);
            assert_eq!(
                sq.as_rational().expect("square is rational"),
                BigRational::from_integer(BigInt::from(-(d as i64))),
                "sqrt(-{d})^2"
            );
        }
    }
}
