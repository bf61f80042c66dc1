//! Algebraic recognition: find the cyclotomic number closest to a complex
//! value by integer-relation search (LLL) on the power-basis coordinates.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::cyclotomic::{euler_phi, CycNum};
use crate::numeric::complex::CxBall;
use crate::numeric::{Cx, Real};

#[derive(Debug, thiserror::Error)]
pub enum RecognizeError {
    #[error("error ball too large to attempt recognition (err {0:.3e})")]
    BallTooLarge(f64),
    #[error("no candidate within the height bound")]
    NoCandidate,
    #[error("ambiguous candidate: confidence margin {0:.3e} below 1e6")]
    Ambiguous(f64),
    #[error("candidate does not reproduce the value (residual {0:.3e})")]
    ResidualTooLarge(f64),
}

/// Recognize z as an element of Q(zeta_m) of bounded height.
///
/// The confidence margin (ratio of the second-best relation's residual to
/// the accepted one) must exceed 1e6.
pub fn rationalize(
    z: &CxBall,
    m: u64,
    height_bound: &BigInt,
) -> Result<(CycNum, f64), RecognizeError> {
    let prec = z.value.prec();
    let phi = euler_phi(m) as usize;
    // working digits: the error ball must leave at least 10 digits of head
    // room below the recognition scale
    let err = z.err.max(1e-300);
    let err_digits = -err.log10();
    if err_digits < 12.0 {
        return Err(RecognizeError::BallTooLarge(z.err));
    }
    let digits_eff = (err_digits - 6.0).min(50.0);
    let scale_f = 10f64.powf(digits_eff);
    let scale = Real::from_f64(scale_f, prec);

    // basis embeddings
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(phi + 1);
    let dim_id = phi + 1;
    for j in 0..phi {
        let zj = CycNum::zeta_pow(m, j as i64).embed_complex(prec);
        let mut r = vec![BigInt::zero(); dim_id + 2];
        r[j] = BigInt::one();
        r[dim_id] = zj.re.mul(&scale).round_bigint();
        r[dim_id + 1] = zj.im.mul(&scale).round_bigint();
        rows.push(r);
    }
    let mut rz = vec![BigInt::zero(); dim_id + 2];
    rz[phi] = BigInt::one();
    rz[dim_id] = z.value.re.mul(&scale).round_bigint();
    rz[dim_id + 1] = z.value.im.mul(&scale).round_bigint();
    rows.push(rz);

    lll_reduce(&mut rows);

    // candidates: reduced vectors with a nonzero z-coefficient
    let mut best: Option<(usize, f64)> = None;
    let mut second: f64 = f64::INFINITY;
    for (i, r) in rows.iter().enumerate() {
        let quality = residual_quality(r, dim_id, scale_f);
        if r[phi].is_zero() {
            // a relation among basis vectors alone: treat as competitor
            second = second.min(quality);
            continue;
        }
        match best {
            None => best = Some((i, quality)),
            Some((_, bq)) if quality < bq => {
                second = second.min(bq);
                best = Some((i, quality));
            }
            Some(_) => second = second.min(quality),
        }
    }
    let (bi, bq) = best.ok_or(RecognizeError::NoCandidate)?;
    let margin = second / bq.max(1e-300);
    if margin < 1e6 {
        return Err(RecognizeError::Ambiguous(margin));
    }
    let den = rows[bi][phi].clone();
    let mut coeffs = Vec::with_capacity(phi);
    for j in 0..phi {
        coeffs.push(BigRational::new(-rows[bi][j].clone(), den.clone()));
    }
    let cand = coeffs
        .iter()
        .enumerate()
        .fold(CycNum::zero(), |acc, (j, c)| {
            acc.add(&CycNum::zeta_pow(m, j as i64).scale(c))
        });
    if &cand.height() > height_bound {
        return Err(RecognizeError::NoCandidate);
    }
    // verify the candidate against the ball
    let resid = cand.embed_complex(prec).sub(&z.value).abs().to_f64();
    let tol = (z.err * 16.0).max(10f64.powf(-digits_eff - 4.0));
    if resid > tol {
        return Err(RecognizeError::ResidualTooLarge(resid));
    }
    Ok((cand, margin))
}

fn residual_quality(r: &[BigInt], dim_id: usize, scale: f64) -> f64 {
    let a = r[dim_id].to_f64().unwrap_or(f64::MAX);
    let b = r[dim_id + 1].to_f64().unwrap_or(f64::MAX);
    ((a * a + b * b).sqrt() + 0.5) / scale
}

/// LLL (delta = 0.99) over integer row vectors, with the Gram-Schmidt data
/// held in high-precision floats. The caller verifies candidates, so float
/// slack in the reduction itself is harmless.
pub fn lll_reduce(basis: &mut [Vec<BigInt>]) {
    let n = basis.len();
    if n < 2 {
        return;
    }
    let dim = basis[0].len();
    let max_bits = basis
        .iter()
        .flat_map(|r| r.iter())
        .map(|x| x.bits() as usize)
        .max()
        .unwrap_or(64);
    let prec = (2 * max_bits + 96).min(2048);

    let to_real = |x: &BigInt| Real::from_bigint(x, prec);
    let dot_ir = |a: &[BigInt], g: &[Real]| -> Real {
        let mut s = Real::zero(prec);
        for (x, y) in a.iter().zip(g.iter()) {
            s = s.add(&to_real(x).mul(y));
        }
        s
    };

    let mut gso: Vec<Vec<Real>> = Vec::new();
    let mut mu: Vec<Vec<Real>> = Vec::new();
    let mut norms: Vec<Real> = Vec::new();
    let recompute = |basis: &[Vec<BigInt>],
                     gso: &mut Vec<Vec<Real>>,
                     mu: &mut Vec<Vec<Real>>,
                     norms: &mut Vec<Real>| {
        gso.clear();
        mu.clear();
        norms.clear();
        for i in 0..basis.len() {
            let mut v: Vec<Real> = basis[i].iter().map(to_real).collect();
            let mut mrow = vec![Real::zero(prec); basis.len()];
            for j in 0..i {
                if norms[j].is_zero() {
                    continue;
                }
                let m_ij = dot_ir(&basis[i], &gso[j]).div(&norms[j]);
                for t in 0..dim {
                    v[t] = v[t].sub(&m_ij.mul(&gso[j][t]));
                }
                mrow[j] = m_ij;
            }
            let mut nn = Real::zero(prec);
            for t in 0..dim {
                nn = nn.add(&v[t].mul(&v[t]));
            }
            gso.push(v);
            norms.push(nn);
            mu.push(mrow);
        }
    };
    recompute(basis, &mut gso, &mut mu, &mut norms);

    let delta = Real::from_f64(0.99, prec);
    let half = Real::from_f64(0.5, prec);
    let mut k = 1usize;
    let mut guard = 0usize;
    while k < n {
        guard += 1;
        if guard > 200_000 {
            break;
        }
        // size-reduce b_k against b_j, patching mu in place
        for j in (0..k).rev() {
            if mu[k][j].abs().cmp(&half) == std::cmp::Ordering::Greater {
                let q = mu[k][j].round_bigint();
                let qr = to_real(&q);
                for t in 0..dim {
                    let sub = &q * &basis[j][t];
                    basis[k][t] -= sub;
                }
                for i in 0..j {
                    mu[k][i] = mu[k][i].sub(&qr.mul(&mu[j][i]));
                }
                mu[k][j] = mu[k][j].sub(&qr);
            }
        }
        // Lovasz condition
        let mukk = &mu[k][k - 1];
        let rhs = delta.sub(&mukk.mul(mukk)).mul(&norms[k - 1]);
        if norms[k].cmp(&rhs) != std::cmp::Ordering::Less || norms[k - 1].is_zero() {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            recompute(basis, &mut gso, &mut mu, &mut norms);
            k = if k > 1 { k - 1 } else { 1 };
        }
    }
}

/// Convenience: recognize a real value.
pub fn rationalize_real(x: &Real, err: f64, m: u64, height: &BigInt) -> Result<(CycNum, f64), RecognizeError> {
    rationalize(&CxBall::new(Cx::from_real(x.clone()), err), m, height)
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: usize = 260;

    #[test]
    fn recognizes_one_half() {
        let z = CxBall::new(
            Cx::from_real(Real::from_f64(0.5, P)),
            1e-30,
        );
        let (v, margin) = rationalize(&z, 1, &BigInt::from(1000)).unwrap();
        assert_eq!(v, CycNum::from_rational(BigRational::new(BigInt::one(), BigInt::from(2))));
        assert!(margin > 1e6);
    }

    #[test]
    fn recognizes_half_one_minus_i() {
        // (1 - zeta_4)/2
        let want = CycNum::one()
            .sub(&CycNum::zeta(4))
            .scale(&BigRational::new(BigInt::one(), BigInt::from(2)));
        let z = CxBall::new(want.embed_complex(P), 1e-35);
        let (v, _) = rationalize(&z, 4, &BigInt::from(1000)).unwrap();
        assert_eq!(v, want);
    }

    #[test]
    fn embed_recognize_roundtrip_random() {
        // 100 random bounded-height elements of Q(zeta_20)
        let mut seed = 42u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 33) % 41) as i64 - 20
        };
        for trial in 0..100 {
            let mut x = CycNum::zero();
            for j in 0..8 {
                let num = next() % 9;
                let den = 1 + (next().abs() % 4);
                x = x.add(&CycNum::zeta_pow(20, j).scale(&BigRational::new(
                    BigInt::from(num),
                    BigInt::from(den),
                )));
            }
            let z = CxBall::new(x.embed_complex(P), 1e-52);
            let (v, _) = rationalize(&z, 20, &BigInt::from(100_000_000i64)).unwrap();
            assert_eq!(v, x, "trial {trial}");
        }
    }

    #[test]
    fn ambiguity_detected_for_fat_ball() {
        let z = CxBall::new(Cx::from_real(Real::from_f64(0.123456, P)), 1e-3);
        assert!(matches!(
            rationalize(&z, 4, &BigInt::from(10)),
            Err(RecognizeError::BallTooLarge(_))
        ));
    }
}
