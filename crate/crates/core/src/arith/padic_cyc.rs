//! Elements of Q_p(zeta_{p^a}): the totally ramified cyclotomic layer.
//!
//! Character tables of p-power order have values that do not embed into an
//! unramified completion. They live here: polynomials in the formal root
//! zeta_{p^a} with [`PadicNum`] coefficients, reduced modulo the cyclotomic
//! polynomial Phi_{p^a}. Valuations take values in (1/phi(p^a)) Z and are
//! computed through the field norm. Degree a = 0 is the scalar case.

use std::fmt;

use super::padic::{PadicError, PadicNum};

/// Exact valuation bookkeeping for ramified values: a rational v = num/den.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RamVal {
    pub num: i64,
    pub den: i64,
}

impl RamVal {
    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

#[derive(Clone)]
pub struct PadicCyc {
    p: u64,
    /// zeta has order p^a; a = 0 means the scalar field Q_p.
    a: u32,
    /// length phi(p^a) (= 1 when a = 0)
    coeffs: Vec<PadicNum>,
}

impl PadicCyc {
    pub fn ram_degree(p: u64, a: u32) -> usize {
        if a == 0 {
            1
        } else {
            (p as usize - 1) * (p as usize).pow(a - 1)
        }
    }

    pub fn from_scalar(x: PadicNum, a: u32) -> Self {
        let p = x.prime();
        let e = Self::ram_degree(p, a);
        let mut coeffs = vec![PadicNum::zero_exact(p); e];
        coeffs[0] = x;
        PadicCyc { p, a, coeffs }
    }

    pub fn zero(p: u64, a: u32) -> Self {
        Self::from_scalar(PadicNum::zero_exact(p), a)
    }

    /// The formal root zeta_{p^a}^j.
    pub fn zeta_pow(p: u64, a: u32, j: i64, prec: u32) -> Self {
        assert!(a >= 1);
        let order = (p as i64).pow(a);
        let jj = j.rem_euclid(order) as usize;
        let mut raw = vec![PadicNum::zero_exact(p); jj + 1];
        raw[jj] = PadicNum::from_i64(p, 1, prec);
        (PadicCyc { p, a, coeffs: raw }).reduced()
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn ram_level(&self) -> u32 {
        self.a
    }

    pub fn coeffs(&self) -> &[PadicNum] {
        &self.coeffs
    }

    /// Lift to a larger ramification level (a | target levels in the tower).
    pub fn lift_to(&self, a_target: u32) -> Self {
        assert!(a_target >= self.a);
        if a_target == self.a {
            return self.clone();
        }
        // zeta_{p^a} = zeta_{p^at}^{p^(at - a)}
        let step = (self.p as usize).pow(a_target - self.a);
        let e = Self::ram_degree(self.p, a_target);
        let mut raw = vec![PadicNum::zero_exact(self.p); self.coeffs.len() * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                raw[i * step] = raw[i * step].add(c);
            }
        }
        let mut out = PadicCyc { p: self.p, a: a_target, coeffs: raw }.reduced();
        out.coeffs.resize(e, PadicNum::zero_exact(self.p));
        out
    }

    fn unify(&self, rhs: &PadicCyc) -> (PadicCyc, PadicCyc) {
        let a = self.a.max(rhs.a);
        (self.lift_to(a), rhs.lift_to(a))
    }

    /// Reduce mod Phi_{p^a}(x) = sum_{j<p} x^{j p^(a-1)}.
    fn reduced(mut self) -> Self {
        let e = Self::ram_degree(self.p, self.a);
        if self.a == 0 {
            self.coeffs.truncate(1);
            self.coeffs.resize(1, PadicNum::zero_exact(self.p));
            return self;
        }
        let step = (self.p as usize).pow(self.a - 1);
        while self.coeffs.len() > e {
            let top = self.coeffs.pop().unwrap();
            if top.is_zero() && top.abs_prec() == i64::MAX {
                continue;
            }
            let k = self.coeffs.len() - e;
            // x^e = -(1 + x^step + x^(2 step) + ... + x^((p-2) step))  [times x^k]
            for j in 0..(self.p as usize - 1) {
                let idx = k + j * step;
                self.coeffs[idx] = self.coeffs[idx].sub(&top);
            }
        }
        self.coeffs.resize(e, PadicNum::zero_exact(self.p));
        self
    }

    pub fn add(&self, rhs: &PadicCyc) -> Self {
        let (a, b) = self.unify(rhs);
        let coeffs = a
            .coeffs
            .iter()
            .zip(b.coeffs.iter())
            .map(|(x, y)| x.add(y))
            .collect();
        PadicCyc { p: a.p, a: a.a, coeffs }
    }

    pub fn sub(&self, rhs: &PadicCyc) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        PadicCyc { p: self.p, a: self.a, coeffs: self.coeffs.iter().map(|c| c.neg()).collect() }
    }

    pub fn mul(&self, rhs: &PadicCyc) -> Self {
        let (a, b) = self.unify(rhs);
        let mut raw = vec![PadicNum::zero_exact(a.p); a.coeffs.len() + b.coeffs.len()];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() && x.abs_prec() == i64::MAX {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                raw[i + j] = raw[i + j].add(&x.mul(y));
            }
        }
        PadicCyc { p: a.p, a: a.a, coeffs: raw }.reduced()
    }

    pub fn mul_scalar(&self, s: &PadicNum) -> Self {
        PadicCyc {
            p: self.p,
            a: self.a,
            coeffs: self.coeffs.iter().map(|c| c.mul(s)).collect(),
        }
    }

    pub fn is_zero_to_precision(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// If all nonconstant coordinates vanish (to their stored precision),
    /// return the unramified scalar part.
    pub fn as_scalar(&self) -> Option<PadicNum> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0])
        } else {
            None
        }
    }

    /// Valuation in (1/e)Z via the field norm (determinant of the
    /// multiplication matrix). None when zero to precision.
    pub fn valuation(&self) -> Option<RamVal> {
        if self.is_zero_to_precision() {
            return None;
        }
        let e = self.coeffs.len();
        if e == 1 {
            return self.coeffs[0].valuation().map(|v| RamVal { num: v, den: 1 });
        }
        // rows of the multiplication-by-self matrix: self * zeta^j reduced
        let mut cols: Vec<Vec<PadicNum>> = Vec::with_capacity(e);
        let mut cur = self.clone();
        let zeta = PadicCyc::zeta_pow(self.p, self.a, 1, self.max_prec());
        for _ in 0..e {
            cols.push(cur.coeffs.clone());
            cur = cur.mul(&zeta);
        }
        let det = det_padic(cols)?;
        det.valuation().map(|v| RamVal { num: v, den: e as i64 })
    }

    fn max_prec(&self) -> u32 {
        self.coeffs.iter().filter_map(|c| c.rel_prec()).max().unwrap_or(1)
    }

    /// Minimum absolute precision across coordinates (unramified exponent).
    pub fn abs_prec_floor(&self) -> i64 {
        self.coeffs.iter().map(|c| c.abs_prec()).min().unwrap_or(i64::MAX)
    }
}

/// Determinant by fraction-free-ish Gaussian elimination with valuation
/// pivoting. None if a whole column is zero to precision.
fn det_padic(mut mat: Vec<Vec<PadicNum>>) -> Option<PadicNum> {
    let n = mat.len();
    let p = mat[0][0].prime();
    let mut det = PadicNum::from_i64(p, 1, mat[0][0].rel_prec().unwrap_or(1).max(1));
    for c in 0..n {
        // pivot: entry of minimal valuation in column c at rows >= c
        let mut best: Option<(usize, i64)> = None;
        for (r, col) in mat.iter().enumerate().skip(c) {
            if let Some(v) = col[c].valuation() {
                if best.map(|(_, bv)| v < bv).unwrap_or(true) {
                    best = Some((r, v));
                }
            }
        }
        let (pr, _) = best?;
        mat.swap(c, pr);
        if pr != c {
            det = det.neg();
        }
        let piv = mat[c][c];
        det = det.mul(&piv);
        let inv = piv.inv().ok()?;
        for r in c + 1..n {
            let f = mat[r][c].mul(&inv);
            if f.is_zero() && f.abs_prec() == i64::MAX {
                continue;
            }
            for k in c..n {
                let sub = f.mul(&mat[c][k]);
                mat[r][k] = mat[r][k].sub(&sub);
            }
        }
    }
    Some(det)
}

impl fmt::Debug for PadicCyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PadicCyc(p={}, a={}; ", self.p, self.a)?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[{i}] {c}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RamError {
    #[error("value has a genuinely ramified component (valuation floor {floor})")]
    NotUnramified { floor: i64 },
    #[error(transparent)]
    Padic(#[from] PadicError),
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u64 = 5;
    const N: u32 = 6;

    #[test]
    fn zeta5_satisfies_cyclotomic() {
        let z = PadicCyc::zeta_pow(P, 1, 1, N);
        // 1 + z + z^2 + z^3 + z^4 = 0
        let mut s = PadicCyc::from_scalar(PadicNum::from_i64(P, 1, N), 1);
        let mut zp = z.clone();
        for _ in 0..4 {
            s = s.add(&zp);
            zp = zp.mul(&z);
        }
        assert!(s.is_zero_to_precision());
        // and z^5 = 1
        assert!(zp.sub(&PadicCyc::from_scalar(PadicNum::from_i64(P, 1, N), 1)).is_zero_to_precision());
    }

    #[test]
    fn valuation_of_uniformizer() {
        // v(zeta_5 - 1) = 1/4
        let z = PadicCyc::zeta_pow(P, 1, 1, N);
        let pi = z.sub(&PadicCyc::from_scalar(PadicNum::from_i64(P, 1, N), 1));
        let v = pi.valuation().unwrap();
        assert_eq!((v.num, v.den), (1, 4));
        // v(zeta_5) = 0
        let v0 = z.valuation().unwrap();
        assert_eq!(v0.num, 0);
        // v(5) = 1
        let five = PadicCyc::from_scalar(PadicNum::from_i64(P, 5, N), 1);
        let v5 = five.valuation().unwrap();
        assert_eq!((v5.num as f64 / v5.den as f64), 1.0);
    }

    #[test]
    fn scalar_detection() {
        let z = PadicCyc::zeta_pow(P, 1, 1, N);
        let w = z.mul(&z.mul(&z.mul(&z.mul(&z)))); // z^5 = 1
        let s = w.as_scalar().expect("z^5 is scalar");
        assert_eq!(s.residue_mod(4).unwrap(), 1);
    }
}
