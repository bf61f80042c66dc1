//! Hensel/Newton lifting of simple polynomial roots.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::padic::{pow_u128, PadicError, PadicNum};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum HenselError {
    #[error("seed {seed} is not a root of the polynomial modulo {p}")]
    NotARoot { seed: u64, p: u64 },
    #[error("seed {seed} is not a simple root modulo {p} (derivative vanishes)")]
    NotSimple { seed: u64, p: u64 },
    #[error(transparent)]
    Padic(#[from] PadicError),
}

fn eval_mod(poly: &[BigInt], x: &BigInt, m: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in poly.iter().rev() {
        acc = (acc * x + c).mod_floor(m);
    }
    acc
}

fn derivative(poly: &[BigInt]) -> Vec<BigInt> {
    poly.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect()
}

fn inv_mod_big(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Lift a simple root of `poly` modulo p to a root modulo p^prec.
/// Newton iteration doubles the attained precision each step.
pub fn hensel_root(poly: &[BigInt], p: u64, prec: u32, seed: u64) -> Result<PadicNum, HenselError> {
    pow_u128(p, prec)?;
    let pb = BigInt::from(p);
    let seed_b = BigInt::from(seed);
    if !eval_mod(poly, &seed_b, &pb).is_zero() {
        return Err(HenselError::NotARoot { seed, p });
    }
    let deriv = derivative(poly);
    if eval_mod(&deriv, &seed_b, &pb).is_zero() {
        return Err(HenselError::NotSimple { seed, p });
    }

    let mut k: u32 = 1;
    let mut root = seed_b;
    while k < prec {
        k = (2 * k).min(prec);
        let m = pb.pow(k);
        let f = eval_mod(poly, &root, &m);
        let fp = eval_mod(&deriv, &root, &m);
        let fp_inv = inv_mod_big(&fp, &m).expect("derivative is a unit");
        root = (&root - f * fp_inv).mod_floor(&m);
    }
    Ok(PadicNum::from_bigint(p, &root, prec))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int_poly(cs: &[i64]) -> Vec<BigInt> {
        cs.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn sqrt_minus_one_mod_125() {
        // x^2 + 1, p = 5, seed 2: 2 -> 7 mod 25 -> 57 mod 125
        let r = hensel_root(&int_poly(&[1, 0, 1]), 5, 3, 2).unwrap();
        assert_eq!(r.residue_mod(3).unwrap(), 57);
        // and the full-precision root squares to -1
        let r4 = hensel_root(&int_poly(&[1, 0, 1]), 5, 4, 2).unwrap();
        let sq = r4.mul(&r4);
        let minus_one = PadicNum::from_i64(5, -1, 4);
        assert!(sq.agrees_with(&minus_one));
        // the other branch
        let r68 = hensel_root(&int_poly(&[1, 0, 1]), 5, 3, 3).unwrap();
        assert_eq!(r68.residue_mod(3).unwrap(), 68);
    }

    #[test]
    fn linear_is_immediate() {
        let r = hensel_root(&int_poly(&[-3, 1]), 7, 5, 3).unwrap();
        assert_eq!(r.residue_mod(5).unwrap(), 3);
    }

    #[test]
    fn no_root_mod_7() {
        // -1 is a quadratic non-residue mod 7
        for seed in 0..7 {
            let r = hensel_root(&int_poly(&[1, 0, 1]), 7, 3, seed);
            assert!(matches!(r, Err(HenselError::NotARoot { .. })));
        }
    }

    #[test]
    fn poly_residue_property() {
        // f(root) = 0 mod p^N for a cubic with a simple root
        let poly = int_poly(&[-2, 0, 0, 1]); // x^3 - 2
        let r = hensel_root(&poly, 5, 6, 3).unwrap(); // 3^3 = 27 = 2 mod 5
        let m = BigInt::from(5).pow(6);
        let x = BigInt::from(u64::try_from(r.residue_mod(6).unwrap()).unwrap());
        assert!(eval_mod(&poly, &x, &m).is_zero());
    }
}
