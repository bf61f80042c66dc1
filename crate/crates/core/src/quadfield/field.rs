//! The imaginary quadratic field K: discriminant data, units, class number.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::elem::{kronecker, BasisShape, ElemK};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("-{0} is not a fundamental discriminant")]
    NotFundamental(u64),
    #[error("class number is {h}, pipeline execution requires h = 1")]
    ClassNumberNotOne { h: u32 },
}

/// The field K = Q(sqrt(-D)) with -D a fundamental discriminant.
#[derive(Clone, Debug)]
pub struct FieldK {
    pub d: u64,
    pub shape: BasisShape,
    /// |O_K^x|
    pub w: u32,
    /// class number
    pub h: u32,
    units: Vec<ElemK>,
}

impl FieldK {
    pub fn new(d: u64) -> Result<Self, FieldError> {
        if !is_fundamental(d) {
            return Err(FieldError::NotFundamental(d));
        }
        let shape = BasisShape::from_disc(d);
        let w = match d {
            3 => 6,
            4 => 4,
            _ => 2,
        };
        let h = class_number(d);
        let units = unit_list(shape, w);
        Ok(FieldK { d, shape, w, h, units })
    }

    /// Errors unless h = 1; the pipeline entry point.
    pub fn new_h1(d: u64) -> Result<Self, FieldError> {
        let k = FieldK::new(d)?;
        if k.h != 1 {
            return Err(FieldError::ClassNumberNotOne { h: k.h });
        }
        Ok(k)
    }

    pub fn units(&self) -> &[ElemK] {
        &self.units
    }

    /// delta = sqrt(-D), the generator of the different.
    pub fn delta(&self) -> ElemK {
        // sqrt(-D) = 2*omega - t in both basis shapes? Check:
        //  half:   omega = (1+sqrt(-D))/2  => sqrt(-D) = 2 omega - 1
        //  even D: omega = sqrt(-D/4)      => sqrt(-D) = 2 omega
        let two_omega = ElemK::from_ints(0, 2, self.shape);
        if self.shape.half {
            two_omega.sub(&ElemK::one(self.shape))
        } else {
            two_omega
        }
    }

    /// Kronecker character of the field at a rational integer.
    pub fn chi(&self, n: i64) -> i64 {
        kronecker(-(self.d as i64), n)
    }

    /// The canonical associate of z: the unit multiple landing in the fixed
    /// fundamental sector of angle 2 pi / w. Zero is returned unchanged.
    pub fn canonical_associate(&self, z: &ElemK) -> (ElemK, ElemK) {
        if z.is_zero() {
            return (z.clone(), ElemK::one(self.shape));
        }
        for u in &self.units {
            let c = z.mul(u);
            if self.in_fundamental_sector(&c) {
                return (c, u.clone());
            }
        }
        unreachable!("one associate per sector");
    }

    fn in_fundamental_sector(&self, z: &ElemK) -> bool {
        // complex_parts returns (re, im0) with im = im0 * sqrt(d0)
        let (re, im0) = z.complex_parts();
        match self.w {
            2 => im0.is_positive() || (im0.is_zero() && re.is_positive()),
            4 => re.is_positive() && !im0.is_negative(),
            6 => {
                // angle in [0, pi/3): re > 0 and 0 <= im0 sqrt(3) < re sqrt(3), i.e. 0 <= im0 < re... careful:
                // tan(pi/3) = sqrt(3); im/re = im0*sqrt(3)/re < sqrt(3) <=> im0 < re
                re.is_positive() && !im0.is_negative() && im0 < re
            }
            _ => unreachable!(),
        }
    }
}

/// Is -d a fundamental discriminant (d > 0)?
pub fn is_fundamental(d: u64) -> bool {
    if d == 0 {
        return false;
    }
    let m = (-(d as i64)).rem_euclid(4);
    if m == 1 {
        squarefree(d)
    } else if m == 0 {
        let q = d / 4;
        let qm = (-(q as i64)).rem_euclid(4);
        squarefree(q) && (qm == 2 || qm == 3)
    } else {
        false
    }
}

fn squarefree(mut n: u64) -> bool {
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

/// Class number of -D by counting reduced binary quadratic forms.
pub fn class_number(d: u64) -> u32 {
    let disc = -(d as i64);
    let mut count = 0u32;
    let mut a = 1i64;
    while 3 * a * a <= d as i64 {
        for b in -a + 1..=a {
            if (b * b - disc) % (4 * a) != 0 {
                continue;
            }
            let c = (b * b - disc) / (4 * a);
            if c < a {
                continue;
            }
            if (a == c && b < 0) || (b == -a) {
                continue;
            }
            count += 1;
        }
        a += 1;
    }
    count
}

fn unit_list(shape: BasisShape, w: u32) -> Vec<ElemK> {
    let one = ElemK::one(shape);
    match w {
        2 => vec![one.clone(), one.neg()],
        4 => {
            let i = ElemK::from_ints(0, 1, shape);
            vec![one.clone(), i.clone(), one.neg(), i.neg()]
        }
        6 => {
            // omega = (1+sqrt(-3))/2 is a primitive 6th root of unity
            let mut units = Vec::with_capacity(6);
            let omega = ElemK::from_ints(0, 1, shape);
            let mut u = one;
            for _ in 0..6 {
                units.push(u.clone());
                u = u.mul(&omega);
            }
            units
        }
        _ => unreachable!(),
    }
}

/// Rational gcd helper for integer coordinates.
pub fn rational_is_unit_norm(q: &BigRational) -> bool {
    q.abs() == BigRational::from_integer(BigInt::from(1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_basics() {
        let k = FieldK::new(4).unwrap();
        assert_eq!(k.w, 4);
        assert_eq!(k.h, 1);
        let delta = k.delta();
        assert_eq!(delta.norm(), BigRational::from_integer(BigInt::from(4)));
        // chi_{-4}(5) = 1 (5 splits), chi_{-4}(7) = -1 (inert)
        assert_eq!(k.chi(5), 1);
        assert_eq!(k.chi(7), -1);
        assert_eq!(k.chi(2), 0);
    }

    #[test]
    fn class_numbers() {
        assert_eq!(class_number(3), 1);
        assert_eq!(class_number(4), 1);
        assert_eq!(class_number(7), 1);
        assert_eq!(class_number(8), 1);
        assert_eq!(class_number(11), 1);
        assert_eq!(class_number(15), 2);
        assert_eq!(class_number(20), 2);
        assert_eq!(class_number(23), 3);
        assert_eq!(class_number(163), 1);
    }

    #[test]
    fn fundamental_discs() {
        for d in [3u64, 4, 7, 8, 11, 15, 19, 20, 23, 24] {
            assert!(is_fundamental(d), "-{d}");
        }
        for d in [1u64, 2, 5, 6, 9, 12, 16, 25] {
            assert!(!is_fundamental(d), "-{d}");
        }
    }

    #[test]
    fn h_gate() {
        assert!(FieldK::new_h1(4).is_ok());
        assert!(matches!(
            FieldK::new_h1(15),
            Err(FieldError::ClassNumberNotOne { h: 2 })
        ));
    }

    #[test]
    fn canonical_associate_unique() {
        let k = FieldK::new(4).unwrap();
        let z = ElemK::from_ints(2, -1, k.shape);
        let mut canon = std::collections::HashSet::new();
        for u in k.units() {
            let (c, _) = k.canonical_associate(&z.mul(u));
            canon.insert(format!("{c:?}"));
        }
        assert_eq!(canon.len(), 1);
    }

    #[test]
    fn sixth_root_units() {
        let k = FieldK::new(3).unwrap();
        assert_eq!(k.units().len(), 6);
        for u in k.units() {
            assert_eq!(u.norm(), BigRational::from_integer(BigInt::from(1)));
        }
        let z = ElemK::from_ints(3, 1, k.shape);
        let mut canon = std::collections::HashSet::new();
        for u in k.units() {
            let (c, _) = k.canonical_associate(&z.mul(u));
            canon.insert(format!("{c:?}"));
        }
        assert_eq!(canon.len(), 1);
    }
}
