//! Cusps of the hyperbolic 3-space boundary P^1(K), their normal form, the
//! distinguished cusp set C, and stability checks.
//!
//! C consists of infinity together with the finite cusps x/y (lowest terms)
//! with x in O_K and y either in the auxiliary level m or invertible mod m.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::elem::ElemK;
use super::field::FieldK;
use super::ideal::IdealK;

/// A point of P^1(K) in normalized coordinates.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Cusp {
    Infinity,
    /// x/y in lowest terms, y the canonical associate of its unit class.
    Finite { x: ElemK, y: ElemK },
}

impl std::fmt::Debug for Cusp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Cusp::Infinity => write!(f, "oo"),
            Cusp::Finite { x, y } => write!(f, "[{x:?}/{y:?}]"),
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CuspError {
    #[error("gcd normalization needs a norm-Euclidean field (d0 in {{1,2,3,7,11}}), got d0 = {0}")]
    NotEuclidean(i64),
    #[error("cusp coordinates are both zero")]
    BothZero,
}

/// Nearest-integer rounding of a rational.
fn round_rat(q: &BigRational) -> BigInt {
    use num_integer::Integer;
    let two = BigInt::from(2);
    let num = q.numer() * &two + q.denom();
    let den = q.denom() * &two;
    num.div_floor(&den)
}

/// gcd in a norm-Euclidean imaginary quadratic field.
pub fn gcd_elem(field: &FieldK, a: &ElemK, b: &ElemK) -> Result<ElemK, CuspError> {
    if ![1, 2, 3, 7, 11].contains(&field.shape.d0) {
        return Err(CuspError::NotEuclidean(field.shape.d0));
    }
    let mut x = a.clone();
    let mut y = b.clone();
    while !y.is_zero() {
        let q = x.div(&y).unwrap();
        let qr = ElemK::new(
            BigRational::from_integer(round_rat(&q.x)),
            BigRational::from_integer(round_rat(&q.y)),
            field.shape,
        );
        let r = x.sub(&qr.mul(&y));
        x = y;
        y = r;
    }
    Ok(x)
}

impl Cusp {
    pub fn infinity() -> Self {
        Cusp::Infinity
    }

    /// Normalize homogeneous coordinates (x : y).
    pub fn new(field: &FieldK, x: &ElemK, y: &ElemK) -> Result<Self, CuspError> {
        if x.is_zero() && y.is_zero() {
            return Err(CuspError::BothZero);
        }
        if y.is_zero() {
            return Ok(Cusp::Infinity);
        }
        // clear denominators
        let den = num_integer::lcm(
            num_integer::lcm(x.x.denom().clone(), x.y.denom().clone()),
            num_integer::lcm(y.x.denom().clone(), y.y.denom().clone()),
        );
        let d = BigRational::from_integer(den);
        let xi = ElemK::new(&x.x * &d, &x.y * &d, field.shape);
        let yi = ElemK::new(&y.x * &d, &y.y * &d, field.shape);
        let g = gcd_elem(field, &xi, &yi)?;
        let xr = xi.div(&g).unwrap();
        let yr = yi.div(&g).unwrap();
        // canonical unit normalization through the denominator
        let (y_c, u) = field.canonical_associate(&yr);
        let x_c = xr.mul(&u);
        Ok(Cusp::Finite { x: x_c, y: y_c })
    }

    /// From a field element a (the cusp a/1).
    pub fn from_elem(field: &FieldK, a: &ElemK) -> Self {
        Cusp::new(field, a, &ElemK::one(field.shape)).unwrap()
    }

    /// The field element x/y; None for infinity.
    pub fn as_elem(&self) -> Option<ElemK> {
        match self {
            Cusp::Infinity => None,
            Cusp::Finite { x, y } => x.div(y),
        }
    }

    pub fn denominator(&self) -> Option<&ElemK> {
        match self {
            Cusp::Infinity => None,
            Cusp::Finite { y, .. } => Some(y),
        }
    }
}

/// 2x2 matrix over K acting on P^1(K) by fractional-linear maps.
#[derive(Clone, Debug)]
pub struct MatK {
    pub a: ElemK,
    pub b: ElemK,
    pub c: ElemK,
    pub d: ElemK,
}

impl MatK {
    pub fn new(a: ElemK, b: ElemK, c: ElemK, d: ElemK) -> Self {
        MatK { a, b, c, d }
    }

    pub fn identity(field: &FieldK) -> Self {
        MatK::new(
            ElemK::one(field.shape),
            ElemK::zero(field.shape),
            ElemK::zero(field.shape),
            ElemK::one(field.shape),
        )
    }

    pub fn det(&self) -> ElemK {
        self.a.mul(&self.d).sub(&self.b.mul(&self.c))
    }

    pub fn mul(&self, rhs: &MatK) -> Self {
        MatK::new(
            self.a.mul(&rhs.a).add(&self.b.mul(&rhs.c)),
            self.a.mul(&rhs.b).add(&self.b.mul(&rhs.d)),
            self.c.mul(&rhs.a).add(&self.d.mul(&rhs.c)),
            self.c.mul(&rhs.b).add(&self.d.mul(&rhs.d)),
        )
    }

    /// gamma . (x : y) = (a x + b y : c x + d y).
    pub fn act_cusp(&self, field: &FieldK, cusp: &Cusp) -> Result<Cusp, CuspError> {
        let (x, y) = match cusp {
            Cusp::Infinity => (ElemK::one(field.shape), ElemK::zero(field.shape)),
            Cusp::Finite { x, y } => (x.clone(), y.clone()),
        };
        let nx = self.a.mul(&x).add(&self.b.mul(&y));
        let ny = self.c.mul(&x).add(&self.d.mul(&y));
        Cusp::new(field, &nx, &ny)
    }
}

/// Membership in the cusp set C (class index fixed to 1: h = 1).
pub fn cusp_in_c(field: &FieldK, m: &IdealK, cusp: &Cusp) -> bool {
    match cusp {
        Cusp::Infinity => true,
        Cusp::Finite { x, y } => {
            if !x.is_integral() || !y.is_integral() {
                return false;
            }
            // x in I_1 = O_K always at h = 1; condition falls on y
            m.contains(y) || m.coprime(field, &IdealK::from_gen(field, y).unwrap())
        }
    }
}

/// Report of a C-stability sweep: every (matrix, cusp) image must stay in C.
#[derive(Debug, Default)]
pub struct StabilityReport {
    pub tested: usize,
    pub failures: Vec<(String, String)>,
}

impl StabilityReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Apply every matrix to every cusp and check the image lies in C.
pub fn c_stability_check(
    field: &FieldK,
    m: &IdealK,
    matrices: &[MatK],
    cusps: &[Cusp],
) -> StabilityReport {
    let mut report = StabilityReport::default();
    for mat in matrices {
        for cusp in cusps {
            report.tested += 1;
            match mat.act_cusp(field, cusp) {
                Ok(img) => {
                    if !cusp_in_c(field, m, &img) {
                        report
                            .failures
                            .push((format!("{mat:?}"), format!("{cusp:?} -> {img:?}")));
                    }
                }
                Err(e) => report
                    .failures
                    .push((format!("{mat:?}"), format!("{cusp:?}: {e}"))),
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qi() -> FieldK {
        FieldK::new(4).unwrap()
    }

    fn level_m(field: &FieldK) -> IdealK {
        IdealK::from_gen(field, &ElemK::from_ints(1, 1, field.shape).pow(3)).unwrap()
    }

    #[test]
    fn normalization_and_unit_invariance() {
        let k = qi();
        let x = ElemK::from_ints(3, 1, k.shape);
        let y = ElemK::from_ints(2, -1, k.shape);
        let c1 = Cusp::new(&k, &x, &y).unwrap();
        for u in k.units() {
            let c2 = Cusp::new(&k, &x.mul(u), &y.mul(u)).unwrap();
            assert_eq!(c1, c2);
        }
        // gcd cancellation: (2x : 2y) = (x : y)
        let two = ElemK::from_ints(2, 0, k.shape);
        let c3 = Cusp::new(&k, &x.mul(&two), &y.mul(&two)).unwrap();
        assert_eq!(c1, c3);
    }

    #[test]
    fn infinity_and_zero_in_c() {
        let k = qi();
        let m = level_m(&k);
        assert!(cusp_in_c(&k, &m, &Cusp::infinity()));
        let zero = Cusp::from_elem(&k, &ElemK::zero(k.shape));
        assert!(cusp_in_c(&k, &m, &zero));
    }

    #[test]
    fn one_over_one_plus_i_not_in_c() {
        let k = qi();
        let m = level_m(&k);
        let c = Cusp::new(
            &k,
            &ElemK::one(k.shape),
            &ElemK::from_ints(1, 1, k.shape),
        )
        .unwrap();
        assert!(!cusp_in_c(&k, &m, &c));
    }

    #[test]
    fn denominator_invertible_mod_m_in_c() {
        let k = qi();
        let m = level_m(&k);
        // a/(2-i): 2-i is invertible mod (1+i)^3
        let c = Cusp::new(
            &k,
            &ElemK::from_ints(7, 2, k.shape),
            &ElemK::from_ints(2, -1, k.shape),
        )
        .unwrap();
        assert!(cusp_in_c(&k, &m, &c));
    }

    #[test]
    fn stability_of_gamma_and_stabilization_matrices() {
        let k = qi();
        let m = level_m(&k);
        let sh = k.shape;
        // sample cusps of C
        let cusps = vec![
            Cusp::infinity(),
            Cusp::from_elem(&k, &ElemK::zero(sh)),
            Cusp::new(&k, &ElemK::from_ints(1, 0, sh), &ElemK::from_ints(2, -1, sh)).unwrap(),
            Cusp::new(&k, &ElemK::from_ints(3, 2, sh), &ElemK::from_ints(2, 1, sh)).unwrap(),
        ];
        // gamma in Gamma_1(n) with n = (1+i)^3 * 5: unipotents and a generic one
        let n_gen = ElemK::from_ints(1, 1, sh).pow(3).mul(&ElemK::from_ints(5, 0, sh));
        let gamma = MatK::new(
            ElemK::one(sh),
            ElemK::from_ints(1, 0, sh),
            n_gen.mul(&ElemK::from_ints(5, 0, sh)),
            ElemK::one(sh).add(&n_gen.mul(&ElemK::from_ints(5, 0, sh))),
        );
        assert!(gamma.det().is_one());
        // stabilization-type matrix (1 0; 0 pi) and a Hecke representative
        let stab = MatK::new(
            ElemK::one(sh),
            ElemK::zero(sh),
            ElemK::zero(sh),
            ElemK::from_ints(2, -1, sh),
        );
        let report = c_stability_check(&k, &m, &[MatK::identity(&k), gamma, stab], &cusps);
        assert!(report.ok(), "failures: {:?}", report.failures);
        assert_eq!(report.tested, 12);
    }
}
