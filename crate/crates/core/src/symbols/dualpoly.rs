//! The dual polynomial coefficient module V_{k,l}^* and its right action.
//!
//! A functional is stored by its values c[i][j] on the monomial basis
//! X^i Y^(k-i) Xbar^j Ybar^(l-j). The right action is (v|g)(P) = v(g.P)
//! with g.P(X, Y) = P(dX + bY, cX + aY) and the conjugate block on the
//! barred variables.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::arith::cyclotomic::CycNum;

/// A functional on V_{k,l} with cyclotomic entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualPoly {
    pub k: usize,
    pub l: usize,
    /// c[i][j] = value on X^i Y^(k-i) Xbar^j Ybar^(l-j)
    pub c: Vec<Vec<CycNum>>,
}

impl DualPoly {
    pub fn zero(k: usize, l: usize) -> Self {
        DualPoly { k, l, c: vec![vec![CycNum::zero(); l + 1]; k + 1] }
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|row| row.iter().all(|x| x.is_zero()))
    }

    pub fn add(&self, rhs: &DualPoly) -> Self {
        assert_eq!((self.k, self.l), (rhs.k, rhs.l));
        let mut out = self.clone();
        for i in 0..=self.k {
            for j in 0..=self.l {
                out.c[i][j] = out.c[i][j].add(&rhs.c[i][j]);
            }
        }
        out
    }

    pub fn scale(&self, s: &CycNum) -> Self {
        let mut out = self.clone();
        for i in 0..=self.k {
            for j in 0..=self.l {
                out.c[i][j] = out.c[i][j].mul(s);
            }
        }
        out
    }
}

/// A 2x2 matrix with cyclotomic entries together with its conjugate block.
#[derive(Clone, Debug)]
pub struct MatCyc {
    pub a: CycNum,
    pub b: CycNum,
    pub c: CycNum,
    pub d: CycNum,
    pub abar: CycNum,
    pub bbar: CycNum,
    pub cbar: CycNum,
    pub dbar: CycNum,
}

impl MatCyc {
    /// From a matrix over K (entries as field elements), with conjugates.
    pub fn from_k(field_d: u64, m: &crate::quadfield::MatK) -> Self {
        let cv = |e: &crate::quadfield::ElemK| e.to_cyc(field_d);
        MatCyc {
            a: cv(&m.a),
            b: cv(&m.b),
            c: cv(&m.c),
            d: cv(&m.d),
            abar: cv(&m.a.conj()),
            bbar: cv(&m.b.conj()),
            cbar: cv(&m.c.conj()),
            dbar: cv(&m.d.conj()),
        }
    }
}

/// One-variable action matrix: expands (d X + b Y)^i (c X + a Y)^(k-i) and
/// returns M[i'][i], the coefficient of X^i' Y^(k-i').
fn action_matrix(k: usize, a: &CycNum, b: &CycNum, c: &CycNum, d: &CycNum) -> Vec<Vec<CycNum>> {
    let mut m = vec![vec![CycNum::zero(); k + 1]; k + 1];
    for i in 0..=k {
        // poly = (dX + bY)^i (cX + aY)^(k-i), coefficients over X-degree
        let mut poly = vec![CycNum::zero(); k + 1];
        poly[0] = CycNum::one();
        let mut deg = 0usize;
        for _ in 0..i {
            poly = mul_linear(&poly, deg, d, b);
            deg += 1;
        }
        for _ in 0..(k - i) {
            poly = mul_linear(&poly, deg, c, a);
            deg += 1;
        }
        for (ip, entry) in poly.into_iter().enumerate() {
            m[ip][i] = entry;
        }
    }
    m
}

/// Multiply a polynomial (coefficients by X-degree, current degree `deg`)
/// by (u X + v Y); the Y-degree is implicit.
fn mul_linear(poly: &[CycNum], deg: usize, u: &CycNum, v: &CycNum) -> Vec<CycNum> {
    let mut out = vec![CycNum::zero(); deg + 2];
    for (i, p) in poly.iter().enumerate().take(deg + 1) {
        if p.is_zero() {
            continue;
        }
        out[i + 1] = out[i + 1].add(&p.mul(u));
        out[i] = out[i].add(&p.mul(v));
    }
    out
}

/// The right action v|g.
pub fn gamma_action(g: &MatCyc, v: &DualPoly) -> DualPoly {
    let mx = action_matrix(v.k, &g.a, &g.b, &g.c, &g.d);
    let my = action_matrix(v.l, &g.abar, &g.bbar, &g.cbar, &g.dbar);
    let mut out = DualPoly::zero(v.k, v.l);
    for i in 0..=v.k {
        for j in 0..=v.l {
            // (v|g)[i][j] = v(g . X^i Y^(k-i) Xbar^j Ybar^(l-j))
            let mut acc = CycNum::zero();
            for (ip, row) in v.c.iter().enumerate() {
                if mx[ip][i].is_zero() {
                    continue;
                }
                for (jp, val) in row.iter().enumerate() {
                    if val.is_zero() || my[jp][j].is_zero() {
                        continue;
                    }
                    acc = acc.add(&mx[ip][i].mul(&my[jp][j]).mul(val));
                }
            }
            out.c[i][j] = acc;
        }
    }
    out
}

/// Pairing values c_{q,r}(a) against the cusp-adapted basis
/// (X + aY)^q Y^(k-q) (Xbar + abar Ybar)^r Ybar^(l-r): convert them to the
/// monomial-basis functional via X^i = sum_q binom(i, q) (-a)^(i-q) (X+aY)^q Y^...
pub fn dual_from_cusp_values(
    k: usize,
    l: usize,
    a: &CycNum,
    abar: &CycNum,
    cqr: &dyn Fn(usize, usize) -> CycNum,
) -> DualPoly {
    let mut out = DualPoly::zero(k, l);
    let minus_a = a.neg();
    let minus_abar = abar.neg();
    for i in 0..=k {
        for j in 0..=l {
            let mut acc = CycNum::zero();
            for q in 0..=i {
                for r in 0..=j {
                    let coef = binom(i, q) * binom(j, r);
                    let term = minus_a
                        .pow((i - q) as i64)
                        .unwrap()
                        .mul(&minus_abar.pow((j - r) as i64).unwrap())
                        .scale(&BigRational::from_integer(BigInt::from(coef)))
                        .mul(&cqr(q, r));
                    acc = acc.add(&term);
                }
            }
            out.c[i][j] = acc;
        }
    }
    out
}

/// Read off c_{q,r}(a) = value on (X + aY)^q Y^(k-q) (conj): the inverse of
/// the transform above.
pub fn cusp_value_from_dual(v: &DualPoly, a: &CycNum, abar: &CycNum, q: usize, r: usize) -> CycNum {
    // (X + aY)^q Y^(k-q) = sum_i binom(q, i) a^(q-i) X^i Y^(k-i)
    let mut acc = CycNum::zero();
    for i in 0..=q {
        for j in 0..=r {
            let coef = binom(q, i) * binom(r, j);
            let term = a
                .pow((q - i) as i64)
                .unwrap()
                .mul(&abar.pow((r - j) as i64).unwrap())
                .scale(&BigRational::from_integer(BigInt::from(coef)))
                .mul(&v.c[i][j]);
            acc = acc.add(&term);
        }
    }
    acc
}

pub fn binom(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    let mut r = 1i64;
    for j in 0..k {
        r = r * (n - j) as i64 / (j + 1) as i64;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadfield::{BasisShape, ElemK, FieldK, MatK};

    fn idmat() -> MatCyc {
        let k = FieldK::new(4).unwrap();
        MatCyc::from_k(4, &MatK::identity(&k))
    }

    #[test]
    fn identity_acts_trivially() {
        let mut v = DualPoly::zero(2, 1);
        v.c[1][0] = CycNum::from_int(3);
        v.c[2][1] = CycNum::zeta(4);
        assert_eq!(gamma_action(&idmat(), &v), v);
    }

    #[test]
    fn weight_zero_action_is_trivial() {
        let sh = BasisShape::from_disc(4);
        let k = FieldK::new(4).unwrap();
        let g = MatK::new(
            ElemK::from_ints(1, 1, sh),
            ElemK::from_ints(2, -1, sh),
            ElemK::from_ints(0, 0, sh),
            ElemK::from_ints(1, 0, sh),
        );
        let mut v = DualPoly::zero(0, 0);
        v.c[0][0] = CycNum::from_int(7);
        assert_eq!(gamma_action(&MatCyc::from_k(k.d, &g), &v), v);
    }

    #[test]
    fn action_composition() {
        // (v|g1)|g2 = v|(g1 g2) on random-ish matrices of weight (2, 1)
        let sh = BasisShape::from_disc(4);
        let field = FieldK::new(4).unwrap();
        let mats = [
            MatK::new(
                ElemK::from_ints(1, 0, sh),
                ElemK::from_ints(1, 1, sh),
                ElemK::from_ints(0, 0, sh),
                ElemK::from_ints(1, 0, sh),
            ),
            MatK::new(
                ElemK::from_ints(2, 1, sh),
                ElemK::from_ints(1, 0, sh),
                ElemK::from_ints(5, 0, sh),
                ElemK::from_ints(1, 1, sh),
            ),
            MatK::new(
                ElemK::from_ints(0, 1, sh),
                ElemK::from_ints(3, 0, sh),
                ElemK::from_ints(1, 0, sh),
                ElemK::from_ints(0, -1, sh),
            ),
        ];
        let mut v = DualPoly::zero(2, 1);
        v.c[0][0] = CycNum::from_int(1);
        v.c[1][1] = CycNum::zeta(4);
        v.c[2][0] = CycNum::from_int(-2);
        for g1 in &mats {
            for g2 in &mats {
                let lhs = gamma_action(
                    &MatCyc::from_k(field.d, g2),
                    &gamma_action(&MatCyc::from_k(field.d, g1), &v),
                );
                let rhs = gamma_action(&MatCyc::from_k(field.d, &g1.mul(g2)), &v);
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn pairing_transforms_are_inverse() {
        // sample c_{q,r} values at a cusp, build the dual, read them back
        let sh = BasisShape::from_disc(4);
        let a_el = ElemK::from_ints(1, 2, sh);
        let a = a_el.to_cyc(4);
        let abar = a_el.conj().to_cyc(4);
        let sample = |q: usize, r: usize| CycNum::from_int((3 * q + 7 * r + 1) as i64);
        let v = dual_from_cusp_values(2, 2, &a, &abar, &sample);
        for q in 0..=2 {
            for r in 0..=2 {
                assert_eq!(cusp_value_from_dual(&v, &a, &abar, q, r), sample(q, r));
            }
        }
    }

    #[test]
    fn k1_action_two_ways() {
        // weight (1, 0): matrix of the action computed by the generic code
        // against a hand expansion for gamma = (1 1; 0 1)
        let sh = BasisShape::from_disc(4);
        let field = FieldK::new(4).unwrap();
        let g = MatK::new(
            ElemK::from_ints(1, 0, sh),
            ElemK::from_ints(1, 0, sh),
            ElemK::from_ints(0, 0, sh),
            ElemK::from_ints(1, 0, sh),
        );
        let gm = MatCyc::from_k(field.d, &g);
        // g.X = dX + bY = X + Y, g.Y = cX + aY = Y
        // so v|g on X: v(X + Y) = v(X) + v(Y); on Y: v(Y)
        let mut v = DualPoly::zero(1, 0);
        v.c[0][0] = CycNum::from_int(5); // value on X^0 Y = Y
        v.c[1][0] = CycNum::from_int(11); // value on X
        let w = gamma_action(&gm, &v);
        assert_eq!(w.c[1][0], CycNum::from_int(16)); // v(X) + v(Y)
        assert_eq!(w.c[0][0], CycNum::from_int(5));
    }
}
