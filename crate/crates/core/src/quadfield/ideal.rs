//! Ideals of O_K at class number one: principal representation with a
//! canonical generator, Z-basis extraction, prime splitting, factorization.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use super::elem::ElemK;
use super::field::FieldK;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum IdealError {
    #[error("zero ideal")]
    Zero,
    #[error("generator is not integral")]
    NotIntegral,
    #[error("no element of norm {0} found; ideal is not principal (h > 1?)")]
    NoGenerator(u64),
}

/// A nonzero integral ideal of O_K, stored by its canonical generator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IdealK {
    gen: ElemK,
}

impl IdealK {
    pub fn from_gen(field: &FieldK, g: &ElemK) -> Result<Self, IdealError> {
        if g.is_zero() {
            return Err(IdealError::Zero);
        }
        if !g.is_integral() {
            return Err(IdealError::NotIntegral);
        }
        let (canon, _) = field.canonical_associate(g);
        Ok(IdealK { gen: canon })
    }

    pub fn one(field: &FieldK) -> Self {
        IdealK::from_gen(field, &ElemK::one(field.shape)).unwrap()
    }

    pub fn generator(&self) -> &ElemK {
        &self.gen
    }

    pub fn norm(&self) -> BigInt {
        self.gen.norm().to_integer()
    }

    pub fn norm_u64(&self) -> u64 {
        self.norm().to_u64().expect("ideal norm fits u64")
    }

    pub fn is_one(&self) -> bool {
        self.norm() == BigInt::one()
    }

    pub fn mul(&self, field: &FieldK, rhs: &IdealK) -> Self {
        IdealK::from_gen(field, &self.gen.mul(&rhs.gen)).unwrap()
    }

    pub fn conj(&self, field: &FieldK) -> Self {
        IdealK::from_gen(field, &self.gen.conj()).unwrap()
    }

    pub fn pow(&self, field: &FieldK, e: u32) -> Self {
        IdealK::from_gen(field, &self.gen.pow(e)).unwrap()
    }

    pub fn contains(&self, z: &ElemK) -> bool {
        z.divisible_by(&self.gen)
    }

    pub fn divides(&self, field: &FieldK, other: &IdealK) -> bool {
        let _ = field;
        other.gen.divisible_by(&self.gen)
    }

    /// Valuation of an element at this (prime) ideal.
    pub fn valuation_of(&self, z: &ElemK) -> u32 {
        assert!(!z.is_zero());
        let mut v = 0;
        let mut cur = z.clone();
        while cur.divisible_by(&self.gen) {
            cur = cur.div(&self.gen).unwrap();
            v += 1;
        }
        v
    }

    /// Coprimality with another integral ideal.
    pub fn coprime(&self, field: &FieldK, other: &IdealK) -> bool {
        let g = self.norm().gcd(&other.norm());
        if g.is_one() {
            return true;
        }
        // check prime by prime over the common rational primes
        let gu = g.to_u64().expect("norm gcd fits u64");
        for (q, _) in factor_u64(gu) {
            match factor_prime(field, q).expect("splitting") {
                Splitting::Split(p1, p2) => {
                    if (p1.divides(field, self) && p1.divides(field, other))
                        || (p2.divides(field, self) && p2.divides(field, other))
                    {
                        return false;
                    }
                }
                Splitting::Inert(p) | Splitting::Ramified(p) => {
                    if p.divides(field, self) && p.divides(field, other) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Hermite-form Z-basis of the ideal lattice in coordinates (x, y) of
    /// the integral basis {1, omega}: vectors (a, 0) and (t, b) with
    /// a*b = N(ideal), 0 <= t < a.
    pub fn zbasis(&self) -> ZBasis {
        let gx = self.gen.x.to_integer();
        let gy = self.gen.y.to_integer();
        let gw = self.gen.mul(&ElemK::from_ints(0, 1, self.gen.shape));
        let hx = gw.x.to_integer();
        let hy = gw.y.to_integer();
        // lattice spanned by (gx, gy), (hx, hy); bring to HNF
        let e = gy.extended_gcd(&hy);
        let b = e.gcd.clone(); // y-gcd
        // vector with y-coord b:
        let ux = &e.x * &gx + &e.y * &hx;
        // vector with y-coord 0: (s/b) v1 - (q/b) v2 where q = gy, s = hy
        let wx = (&hy / &b) * &gx - (&gy / &b) * &hx;
        let a = wx.abs();
        let t = ux.mod_floor(&a);
        ZBasis { a, t, b: b.abs() }
    }
}

/// Basis (a, 0), (t, b): residues are x + y*omega, 0 <= x < a, 0 <= y < b.
#[derive(Clone, Debug)]
pub struct ZBasis {
    pub a: BigInt,
    pub t: BigInt,
    pub b: BigInt,
}

impl ZBasis {
    /// Reduce integral coordinates to the canonical box representative.
    pub fn reduce(&self, x: &BigInt, y: &BigInt) -> (BigInt, BigInt) {
        let (qy, ry) = y.div_mod_floor(&self.b);
        let x2 = x - qy * &self.t;
        (x2.mod_floor(&self.a), ry)
    }
}

impl std::fmt::Debug for IdealK {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({:?})", self.gen)
    }
}

/// Splitting behavior of a rational prime in O_K.
#[derive(Clone, Debug)]
pub enum Splitting {
    /// q O_K = p1 * p2 with p2 the conjugate of p1 (ordering is fixed later
    /// by the p-adic embedding).
    Split(IdealK, IdealK),
    Inert(IdealK),
    /// q O_K = p^2.
    Ramified(IdealK),
}

/// Factor a rational prime in O_K (h = 1: generators are searched).
pub fn factor_prime(field: &FieldK, q: u64) -> Result<Splitting, IdealError> {
    let chi = field.chi(q as i64);
    if chi == -1 {
        let g = ElemK::from_ints(q as i64, 0, field.shape);
        return Ok(Splitting::Inert(IdealK::from_gen(field, &g)?));
    }
    let g = find_norm_element(field, q).ok_or(IdealError::NoGenerator(q))?;
    let p1 = IdealK::from_gen(field, &g)?;
    let p2 = p1.conj(field);
    if chi == 0 {
        Ok(Splitting::Ramified(p1))
    } else {
        Ok(Splitting::Split(p1, p2))
    }
}

/// Search an element of norm exactly n (n modest; used for prime norms).
pub fn find_norm_element(field: &FieldK, n: u64) -> Option<ElemK> {
    let sh = field.shape;
    if sh.half {
        // norm(x + y w) = x^2 + x y + y^2 (1 + D)/4 with D = field.d
        let c = ((field.d + 1) / 4) as i64;
        let ymax = ((4 * n) as f64 / field.d as f64).sqrt() as i64 + 1;
        for y in -ymax..=ymax {
            // x^2 + xy + (c y^2 - n) = 0
            let disc = y * y - 4 * (c * y * y - n as i64);
            if disc < 0 {
                continue;
            }
            let s = (disc as f64).sqrt() as i64;
            for r in [s - 1, s, s + 1] {
                if r >= 0 && r * r == disc && (-y + r) % 2 == 0 {
                    return Some(ElemK::from_ints((-y + r) / 2, y, sh));
                }
            }
        }
        None
    } else {
        let d0 = sh.d0;
        let ymax = ((n as i64) / d0).max(0);
        for y in 0..=((ymax as f64).sqrt() as i64 + 1) {
            let rest = n as i64 - d0 * y * y;
            if rest < 0 {
                break;
            }
            let x = (rest as f64).sqrt() as i64;
            for r in [x - 1, x, x + 1] {
                if r >= 0 && r * r == rest {
                    return Some(ElemK::from_ints(r, y, sh));
                }
            }
        }
        None
    }
}

/// Factor a u64 into (prime, exponent) pairs.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Full factorization of an integral ideal into prime ideals.
pub fn factor_ideal(field: &FieldK, ideal: &IdealK) -> Vec<(IdealK, u32)> {
    let mut out: Vec<(IdealK, u32)> = Vec::new();
    let n = ideal.norm_u64();
    for (q, _) in factor_u64(n) {
        match factor_prime(field, q).expect("prime splits") {
            Splitting::Split(p1, p2) => {
                for p in [p1, p2] {
                    let v = p.valuation_of(ideal.generator());
                    if v > 0 {
                        out.push((p, v));
                    }
                }
            }
            Splitting::Inert(p) | Splitting::Ramified(p) => {
                let v = p.valuation_of(ideal.generator());
                if v > 0 {
                    out.push((p, v));
                }
            }
        }
    }
    out
}

/// Rational q with denominator coprime to the ideal reduced to a residue:
/// num * den^-1 is well defined in O/f only when den is invertible; the
/// caller guarantees that. Returns integral coordinates of a representative.
pub fn rational_coords(z: &ElemK) -> Option<(BigInt, BigInt)> {
    if z.x.is_integer() && z.y.is_integer() {
        Some((z.x.to_integer(), z.y.to_integer()))
    } else {
        None
    }
}

/// Scale helper: multiply rational coordinates by an integer.
pub fn scale_int(z: &ElemK, n: i64) -> ElemK {
    let q = BigRational::from_integer(BigInt::from(n));
    ElemK::new(&z.x * &q, &z.y * &q, z.shape)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn qi() -> FieldK {
        FieldK::new(4).unwrap()
    }

    #[test]
    fn five_splits() {
        let k = qi();
        match factor_prime(&k, 5).unwrap() {
            Splitting::Split(p1, p2) => {
                assert_eq!(p1.norm_u64(), 5);
                assert_eq!(p2.norm_u64(), 5);
                assert_ne!(p1, p2);
                let prod = p1.mul(&k, &p2);
                let five = IdealK::from_gen(&k, &ElemK::from_ints(5, 0, k.shape)).unwrap();
                assert_eq!(prod, five);
            }
            other => panic!("expected split, got {other:?}"),
        }
    }

    #[test]
    fn two_ramifies() {
        let k = qi();
        match factor_prime(&k, 2).unwrap() {
            Splitting::Ramified(p) => {
                assert_eq!(p.norm_u64(), 2);
                let sq = p.pow(&k, 2);
                let two = IdealK::from_gen(&k, &ElemK::from_ints(2, 0, k.shape)).unwrap();
                assert_eq!(sq, two);
            }
            other => panic!("expected ramified, got {other:?}"),
        }
    }

    #[test]
    fn seven_inert() {
        let k = qi();
        assert!(matches!(factor_prime(&k, 7).unwrap(), Splitting::Inert(_)));
    }

    #[test]
    fn norm_multiplicative_spot() {
        let k = qi();
        let a = IdealK::from_gen(&k, &ElemK::from_ints(2, 1, k.shape)).unwrap();
        let b = IdealK::from_gen(&k, &ElemK::from_ints(1, 1, k.shape)).unwrap();
        assert_eq!(a.mul(&k, &b).norm(), a.norm() * b.norm());
    }

    #[test]
    fn zbasis_counts_residues() {
        let k = qi();
        let p = IdealK::from_gen(&k, &ElemK::from_ints(2, 1, k.shape)).unwrap();
        let zb = p.zbasis();
        assert_eq!(&zb.a * &zb.b, BigInt::from(5));
        // reduction is idempotent and stays in the box
        let (x, y) = zb.reduce(&BigInt::from(17), &BigInt::from(-3));
        assert!(x >= BigInt::zero() && x < zb.a);
        assert!(y >= BigInt::zero() && y < zb.b);
        let (x2, y2) = zb.reduce(&x, &y);
        assert_eq!((x2, y2), (x, y));
    }

    #[test]
    fn ideal_factorization() {
        let k = qi();
        // (1+i)^3 * (2+i)^2
        let g = ElemK::from_ints(1, 1, k.shape)
            .pow(3)
            .mul(&ElemK::from_ints(2, 1, k.shape).pow(2));
        let f = IdealK::from_gen(&k, &g).unwrap();
        let fac = factor_ideal(&k, &f);
        let total: u64 = fac
            .iter()
            .map(|(p, e)| p.norm_u64().pow(*e))
            .product();
        assert_eq!(total, f.norm_u64());
        assert_eq!(fac.len(), 2);
    }

    #[test]
    fn coprimality() {
        let k = qi();
        let p1 = IdealK::from_gen(&k, &ElemK::from_ints(2, 1, k.shape)).unwrap();
        let p2 = p1.conj(&k);
        assert!(p1.coprime(&k, &p2));
        assert!(!p1.coprime(&k, &p1.pow(&k, 2)));
    }
}
