//! The fixed embedding of algebraic values into p-adic numbers.
//!
//! Supports the split cyclotomic path: a conductor m factors as m' * p^a
//! with m' | p-1. The tame part lands in Z_p through a Hensel-lifted root
//! of unity, the p-power part stays formal in [`PadicCyc`]. The quadratic
//! generator sqrt(-D) is pinned by a configured seed residue, which selects
//! the prime of K over p that the embedding sees.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::cyclotomic::CycNum;
use super::hensel::{hensel_root, HenselError};
use super::padic::{PadicError, PadicNum};
use super::padic_cyc::PadicCyc;

#[derive(Debug, thiserror::Error)]
pub enum EmbedError {
    #[error("conductor {m} is not split-compatible: tame part {tame} does not divide p-1 = {pm1}")]
    NotSplit { m: u64, tame: u64, pm1: u64 },
    #[error("p = {p} does not split in Q(sqrt(-{d})): no seed root of x^2 + {d}")]
    NoQuadraticRoot { p: u64, d: u64 },
    #[error("p-power part p^{a} exceeds the supported ramified tower")]
    RamTooDeep { a: u32 },
    #[error(transparent)]
    Hensel(#[from] HenselError),
    #[error(transparent)]
    Padic(#[from] PadicError),
}

/// The p-adic embedding data: images of roots of unity and of sqrt(-D).
#[derive(Clone)]
pub struct PadicEmbedding {
    p: u64,
    prec: u32,
    /// seed residue mod p for the root of x^2 + D (the convention knob)
    seed: u64,
    d: u64,
    sqrt_minus_d: PadicNum,
}

impl PadicEmbedding {
    /// Build the embedding for K = Q(sqrt(-D)) at precision `prec`, with the
    /// configured seed residue picking the branch of sqrt(-D).
    pub fn new(p: u64, d: u64, seed: u64, prec: u32) -> Result<Self, EmbedError> {
        let poly = [BigInt::from(d), BigInt::from(0), BigInt::from(1)]; // x^2 + D
        let root = hensel_root(&poly, p, prec, seed % p).map_err(|e| match e {
            HenselError::NotARoot { .. } => EmbedError::NoQuadraticRoot { p, d },
            other => EmbedError::Hensel(other),
        })?;
        Ok(PadicEmbedding { p, prec, seed: seed % p, d, sqrt_minus_d: root })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn disc_d(&self) -> u64 {
        self.d
    }

    /// Image of sqrt(-D).
    pub fn sqrt_minus_d(&self) -> PadicNum {
        self.sqrt_minus_d
    }

    /// Image of a primitive m'-th root of unity for m' | p-1. Normalized so
    /// that for 4 | m' the (m'/4)-th power is the configured image of i
    /// (when D = 4); otherwise the smallest-residue primitive root is taken.
    pub fn tame_root(&self, m_tame: u64) -> Result<PadicNum, EmbedError> {
        if m_tame == 1 {
            return Ok(PadicNum::from_i64(self.p, 1, self.prec));
        }
        if (self.p - 1) % m_tame != 0 {
            return Err(EmbedError::NotSplit { m: m_tame, tame: m_tame, pm1: self.p - 1 });
        }
        // all m'-th roots mod p: g^(k (p-1)/m') for a generator g
        let g = primitive_root(self.p);
        let step = (self.p - 1) / m_tame;
        let mut candidates: Vec<u64> = Vec::new();
        for k in 0..m_tame {
            if crate::arith::cyclotomic::gcd_u64(k, m_tame) == 1 || m_tame == 1 {
                candidates.push(pow_mod_u64(g, k * step, self.p));
            }
        }
        candidates.sort_unstable();
        // compatibility with the quadratic seed: for D = 4 and 4 | m', the
        // (m'/4)-power must be the image of i = sqrt(-4)/2
        let chosen = if self.d == 4 && m_tame % 4 == 0 {
            let i_img = {
                let two_inv = PadicNum::from_i64(self.p, 2, self.prec).inv()?;
                self.sqrt_minus_d.mul(&two_inv)
            };
            let i_res = i_img.residue_mod(1)? as u64;
            candidates
                .into_iter()
                .find(|&c| pow_mod_u64(c, m_tame / 4, self.p) == i_res)
                .ok_or(EmbedError::NoQuadraticRoot { p: self.p, d: self.d })?
        } else {
            candidates[0]
        };
        // Hensel-lift x^m' - 1 from the chosen residue
        let mut poly = vec![BigInt::from(0); m_tame as usize + 1];
        poly[0] = BigInt::from(-1);
        poly[m_tame as usize] = BigInt::from(1);
        Ok(hensel_root(&poly, self.p, self.prec, chosen)?)
    }

    /// Embed an exact cyclotomic number. The result lives in
    /// Q_p(zeta_{p^a}) where p^a is the p-part of the conductor.
    pub fn embed_cyc(&self, x: &CycNum) -> Result<PadicCyc, EmbedError> {
        let m = x.conductor();
        let (tame, a) = split_conductor(m, self.p);
        if (self.p - 1) % tame != 0 {
            return Err(EmbedError::NotSplit { m, tame, pm1: self.p - 1 });
        }
        if PadicCyc::ram_degree(self.p, a) > 64 {
            return Err(EmbedError::RamTooDeep { a });
        }
        let pa = (self.p as u64).pow(a);
        // zeta_m = zeta_tame^u * zeta_{p^a}^v with u p^a + v tame = 1
        let (u, v) = if a == 0 {
            (1i64, 0i64)
        } else {
            let (uu, vv) = bezout(pa as i64, tame as i64);
            (uu, vv)
        };
        let zt = self.tame_root(tame)?;
        let mut acc = PadicCyc::zero(self.p, a);
        for (j, c) in x.coeffs().iter().enumerate() {
            if num_traits::Zero::is_zero(c) {
                continue;
            }
            let je = j as i64;
            // zeta_m^j -> zt^(j u mod tame) * zeta_{p^a}^(j v mod p^a)
            let te = (je * u).rem_euclid(tame as i64);
            let scalar = zt.pow(te)?.mul(&PadicNum::from_rational(self.p, c, self.prec));
            let term = if a == 0 {
                PadicCyc::from_scalar(scalar, 0)
            } else {
                let re = (je * v).rem_euclid(pa as i64);
                PadicCyc::zeta_pow(self.p, a, re, self.prec).mul_scalar(&scalar)
            };
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// Embed, requiring an unramified (scalar) result. Errors if a genuine
    /// zeta_{p^a} component survives.
    pub fn embed_cyc_scalar(&self, x: &CycNum) -> Result<PadicNum, EmbedError> {
        let v = self.embed_cyc(x)?;
        v.as_scalar().ok_or_else(|| EmbedError::NotSplit {
            m: x.conductor(),
            tame: 0,
            pm1: self.p - 1,
        })
    }

    /// Embed an exact rational.
    pub fn embed_rational(&self, q: &BigRational) -> PadicNum {
        PadicNum::from_rational(self.p, q, self.prec)
    }

    /// Image of the integral-basis generator omega of O_K.
    pub fn omega_image(&self) -> PadicNum {
        let two_inv = PadicNum::from_i64(self.p, 2, self.prec).inv().expect("p odd");
        if (-(self.d as i64)).rem_euclid(4) == 1 {
            // omega = (1 + sqrt(-D))/2
            PadicNum::from_i64(self.p, 1, self.prec)
                .add(&self.sqrt_minus_d)
                .mul(&two_inv)
        } else {
            // omega = sqrt(-D/4) = sqrt(-D)/2
            self.sqrt_minus_d.mul(&two_inv)
        }
    }

    /// First embedding of K into Q_p (the one defining the prime p of K).
    pub fn sigma1(&self, z: &crate::quadfield::ElemK) -> PadicNum {
        let x = PadicNum::from_rational(self.p, &z.x, self.prec);
        let y = PadicNum::from_rational(self.p, &z.y, self.prec);
        x.add(&y.mul(&self.omega_image()))
    }

    /// Second embedding (the conjugate one).
    pub fn sigma2(&self, z: &crate::quadfield::ElemK) -> PadicNum {
        self.sigma1(&z.conj())
    }
}

/// Split m = tame * p^a with p not dividing tame.
pub fn split_conductor(m: u64, p: u64) -> (u64, u32) {
    let mut tame = m;
    let mut a = 0u32;
    while tame % p == 0 {
        tame /= p;
        a += 1;
    }
    (tame, a)
}

fn bezout(a: i64, b: i64) -> (i64, i64) {
    // u a + v b = 1
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i64, 0i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    assert_eq!(r0.abs(), 1);
    if r0 < 0 {
        (-s0, -t0)
    } else {
        (s0, t0)
    }
}

pub fn pow_mod_u64(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u128;
    let mm = m as u128;
    let mut bb = b as u128 % mm;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * bb % mm;
        }
        bb = bb * bb % mm;
        e >>= 1;
    }
    b = acc as u64;
    b
}

/// Smallest primitive root modulo an odd prime p.
pub fn primitive_root(p: u64) -> u64 {
    let mut factors = Vec::new();
    let mut n = p - 1;
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            factors.push(q);
            while n % q == 0 {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        factors.push(n);
    }
    'outer: for g in 2..p {
        for f in &factors {
            if pow_mod_u64(g, (p - 1) / f, p) == 1 {
                continue 'outer;
            }
        }
        return g;
    }
    unreachable!("no primitive root found");
}

#[cfg(test)]
mod tests {
    use super::*;

    fn emb() -> PadicEmbedding {
        // i -> 57 mod 125 corresponds to sqrt(-4) = 2i -> 114
        PadicEmbedding::new(5, 4, 2 * 57 % 5, 4).unwrap()
    }

    #[test]
    fn embeds_one() {
        let e = emb();
        let one = e.embed_cyc_scalar(&CycNum::one()).unwrap();
        assert_eq!(one.residue_mod(4).unwrap(), 1);
        assert_eq!(one.valuation(), Some(0));
    }

    #[test]
    fn zeta4_image_squares_to_minus_one() {
        let e = emb();
        let i_img = e.embed_cyc_scalar(&CycNum::zeta(4)).unwrap();
        assert_eq!(i_img.residue_mod(3).unwrap(), 57);
        let sq = i_img.mul(&i_img);
        assert!(sq.agrees_with(&PadicNum::from_i64(5, -1, 4)));
    }

    #[test]
    fn gauss_integer_images() {
        // 2 + i -> 59 mod 125 (valuation 0), 2 - i -> -55 (valuation 1)
        let e = emb();
        let i = CycNum::zeta(4);
        let two = CycNum::from_int(2);
        let a = e.embed_cyc_scalar(&two.add(&i)).unwrap();
        assert_eq!(a.valuation(), Some(0));
        assert_eq!(a.residue_mod(3).unwrap(), 59);
        let b = e.embed_cyc_scalar(&two.sub(&i)).unwrap();
        assert_eq!(b.valuation(), Some(1));
        // -55 mod 125 = 70; the seed pins the value only to the seed's depth
        assert_eq!(b.residue_mod(3).unwrap(), 70);
    }

    #[test]
    fn cyclotomic_polynomial_to_full_precision() {
        // the image of zeta_4 satisfies x^4 - 1 and is primitive
        let e = emb();
        let z = e.embed_cyc_scalar(&CycNum::zeta(4)).unwrap();
        let z4 = z.pow(4).unwrap();
        assert!(z4.agrees_with(&PadicNum::from_i64(5, 1, 4)));
        let z2 = z.pow(2).unwrap();
        assert!(!z2.agrees_with(&PadicNum::from_i64(5, 1, 4)));
    }

    #[test]
    fn ramified_embedding_of_zeta20() {
        let e = emb();
        let z20 = e.embed_cyc(&CycNum::zeta(20)).unwrap();
        assert_eq!(z20.ram_level(), 1);
        // (zeta_20)^20 = 1
        let mut acc = z20.clone();
        for _ in 0..19 {
            acc = acc.mul(&z20);
        }
        let one = acc.as_scalar().expect("1 is scalar");
        assert!(one.agrees_with(&PadicNum::from_i64(5, 1, 4)));
        // inert-style conductor fails loudly
        let z3 = CycNum::zeta(3);
        assert!(e.embed_cyc(&z3).is_err());
    }
}
