//! Dirichlet coefficients of Hecke L-series by ideal enumeration.

use num_rational::BigRational;

use crate::arith::cyclotomic::CycNum;
use crate::heckechar::{CharContext, HeckeCharacter};
use crate::numeric::{Cx, Real};
use crate::quadfield::{factor_prime, IdealK, Splitting};

/// All nonzero integral ideals of norm <= x, as (norm, ideal) pairs.
pub fn ideals_up_to(ctx: &CharContext, x: u64) -> Vec<(u64, IdealK)> {
    let mut primes: Vec<(u64, IdealK)> = Vec::new();
    let sieve = prime_sieve(x);
    for q in 2..=x {
        if sieve[q as usize] {
            match factor_prime(&ctx.field, q).expect("splitting") {
                Splitting::Split(a, b) => {
                    primes.push((q, a));
                    primes.push((q, b));
                }
                Splitting::Inert(p) => {
                    if q * q <= x {
                        primes.push((q * q, p));
                    }
                }
                Splitting::Ramified(p) => primes.push((q, p)),
            }
        }
    }
    let mut out: Vec<(u64, IdealK)> = vec![(1, IdealK::one(&ctx.field))];
    for (np, p) in &primes {
        let base_len = out.len();
        let mut power = p.clone();
        let mut npow = *np;
        while npow <= x {
            for idx in 0..base_len {
                let n = out[idx].0 * npow;
                if n <= x {
                    let prod = out[idx].1.mul(&ctx.field, &power);
                    out.push((n, prod));
                }
            }
            if npow > x / np {
                break;
            }
            npow *= np;
            power = power.mul(&ctx.field, p);
        }
    }
    out.sort_by_key(|(n, _)| *n);
    out
}

fn prime_sieve(x: u64) -> Vec<bool> {
    let n = (x + 1) as usize;
    let mut s = vec![true; n.max(2)];
    s[0] = false;
    s[1] = false;
    let mut p = 2usize;
    while p * p < n {
        if s[p] {
            let mut k = p * p;
            while k < n {
                s[k] = false;
                k += p;
            }
        }
        p += 1;
    }
    s
}

/// Complex Dirichlet coefficients c_n = sum_{N(a) = n} chi(a) for n <= x.
/// Index 0 is unused.
pub fn char_coeffs_complex(
    ctx: &CharContext,
    chi: &HeckeCharacter,
    x: u64,
    prec: usize,
) -> Vec<Cx> {
    let ideals = ideals_up_to(ctx, x);
    let mut out = vec![Cx::zero(prec); (x + 1) as usize];
    // root-of-unity table for the finite part
    let l = chi.group().exponent();
    let roots: Vec<Cx> = (0..l)
        .map(|t| {
            Cx::root_of_unity(
                &BigRational::new(num_bigint::BigInt::from(t), num_bigint::BigInt::from(l)),
                prec,
            )
        })
        .collect();
    for (n, ideal) in &ideals {
        if !ideal.coprime(&ctx.field, &chi.modulus) {
            continue;
        }
        let gen = ideal.generator();
        let idx = chi
            .group()
            .lookup_fraction(gen)
            .expect("coprime generator");
        let fin = &roots[chi.eps.exponent_on(chi.group(), idx) as usize];
        // alpha^-a alphabar^-b through the complex embedding of K
        let arch = elem_complex_power(ctx, gen, -chi.inf.a, -chi.inf.b, prec);
        out[*n as usize] = out[*n as usize].add(&fin.mul(&arch));
    }
    out
}

/// Exact Dirichlet coefficients as cyclotomic numbers, n <= x.
pub fn char_coeffs_exact(ctx: &CharContext, chi: &HeckeCharacter, x: u64) -> Vec<CycNum> {
    let ideals = ideals_up_to(ctx, x);
    let mut out = vec![CycNum::zero(); (x + 1) as usize];
    for (n, ideal) in &ideals {
        let v = chi.eval_ideal(ctx, ideal);
        if !v.is_zero() {
            out[*n as usize] = out[*n as usize].add(&v);
        }
    }
    out
}

/// alpha^a alphabar^b as a complex number (canonical embedding of K).
pub fn elem_complex_power(
    ctx: &CharContext,
    alpha: &crate::quadfield::ElemK,
    a: i64,
    b: i64,
    prec: usize,
) -> Cx {
    let (re, im0) = alpha.complex_parts();
    let sq = Real::from_i64(ctx.field.shape.d0, prec).sqrt();
    let z = Cx::new(
        Real::from_rational(&re, prec),
        Real::from_rational(&im0, prec).mul(&sq),
    );
    z.powi(a).mul(&z.conj().powi(b))
}

/// Dirichlet convolution of two coefficient streams (exact).
pub fn convolve_exact(a: &[CycNum], b: &[CycNum]) -> Vec<CycNum> {
    let x = a.len().min(b.len()) - 1;
    let mut out = vec![CycNum::zero(); x + 1];
    for i in 1..=x {
        if a[i].is_zero() {
            continue;
        }
        for j in 1..=(x / i) {
            if !b[j].is_zero() {
                out[i * j] = out[i * j].add(&a[i].mul(&b[j]));
            }
        }
    }
    out
}

/// Dirichlet convolution of complex streams.
pub fn convolve_complex(a: &[Cx], b: &[Cx], prec: usize) -> Vec<Cx> {
    let x = a.len().min(b.len()) - 1;
    let mut out = vec![Cx::zero(prec); x + 1];
    for i in 1..=x {
        for j in 1..=(x / i) {
            out[i * j] = out[i * j].add(&a[i].mul(&b[j]));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadfield::FieldK;

    fn ctx() -> CharContext {
        CharContext::new(FieldK::new(4).unwrap())
    }

    #[test]
    fn ideal_counts_match_r2() {
        // the number of ideals of Z[i] of norm n is r2(n)/4
        let c = ctx();
        let ideals = ideals_up_to(&c, 50);
        let count = |n: u64| ideals.iter().filter(|(m, _)| *m == n).count();
        assert_eq!(count(1), 1);
        assert_eq!(count(2), 1); // (1+i)
        assert_eq!(count(5), 2); // split
        assert_eq!(count(25), 3); // p^2, p pbar, pbar^2
        assert_eq!(count(3), 0); // inert
        assert_eq!(count(9), 1); // (3)
        assert_eq!(count(50), 3); // (1+i)^2 * {p^2, p pbar, pbar^2}? norms: 2*25
    }

    #[test]
    fn trivial_char_coeffs_count_ideals() {
        let c = ctx();
        let triv = HeckeCharacter::trivial(&c);
        let cs = char_coeffs_exact(&c, &triv, 30);
        assert_eq!(cs[1], CycNum::one());
        assert_eq!(cs[5], CycNum::from_int(2));
        assert_eq!(cs[25], CycNum::from_int(3));
        assert_eq!(cs[3], CycNum::zero());
    }

    #[test]
    fn phi_coeffs_multiplicative() {
        let c = ctx();
        let phi = HeckeCharacter::canonical_qi(&c, 0).unwrap();
        let cs = char_coeffs_exact(&c, &phi, 100);
        assert_eq!(cs[1], CycNum::one());
        // multiplicativity on coprime indices
        for (m, n) in [(5u64, 13u64), (2, 9), (5, 17)] {
            assert_eq!(cs[(m * n) as usize], cs[m as usize].mul(&cs[n as usize]));
        }
        // a_5 = -2
        assert_eq!(cs[5], CycNum::from_int(-2));
    }

    #[test]
    fn complex_and_exact_agree() {
        let c = ctx();
        let phi = HeckeCharacter::canonical_qi(&c, 0).unwrap();
        let prec = 192;
        let cs_c = char_coeffs_complex(&c, &phi, 40, prec);
        let cs_e = char_coeffs_exact(&c, &phi, 40);
        for n in 1..=40 {
            let want = cs_e[n].embed_complex(prec);
            let d = cs_c[n].sub(&want).abs();
            assert!(d.to_f64() < 1e-40, "n = {n}");
        }
    }
}
