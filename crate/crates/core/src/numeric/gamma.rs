//! Gamma-type special functions at half-integer parameters, and the AGM.
//!
//! The smoothed functional-equation evaluation of degree-2 L-series needs
//! the upper incomplete gamma Γ(a, x) for a ∈ (1/2)Z, a > 0, x > 0. Series
//! below the crossover, continued fraction above it (modified Lentz).

use super::real::Real;

/// Γ(m/2) for m >= 1.
pub fn gamma_half(m: i64, prec: usize) -> Real {
    assert!(m >= 1, "gamma_half needs a positive half-integer");
    if m == 1 {
        return Real::pi(prec).sqrt();
    }
    if m == 2 {
        return Real::one(prec);
    }
    // Γ(a) = (a-1) Γ(a-1) with a = m/2
    let am1 = Real::from_i64(m - 2, prec).div(&Real::from_i64(2, prec));
    am1.mul(&gamma_half(m - 2, prec))
}

/// x^(m/2) for x > 0.
pub fn pow_half(x: &Real, m: i64) -> Real {
    if m % 2 == 0 {
        x.powi(m / 2)
    } else {
        x.sqrt().powi(m)
    }
}

/// Upper incomplete gamma Γ(m/2, x) for any half-integer m/2 and x > 0
/// (x = 0 allowed when m >= 1). Non-positive parameters step up through
/// Γ(a, x) = (Γ(a+1, x) - x^a e^-x) / a.
pub fn upper_gamma_half_any(m: i64, x: &Real, prec: usize) -> Real {
    if m >= 1 {
        return upper_gamma_half(m, x, prec);
    }
    assert!(!x.is_zero(), "Γ(a, 0) diverges for a <= 0");
    let a = Real::from_i64(m, prec).div(&Real::from_i64(2, prec));
    let up = upper_gamma_half_any(m + 2, x, prec);
    up.sub(&pow_half(x, m).mul(&x.neg().exp())).div(&a)
}

/// Upper incomplete gamma Γ(m/2, x) for m >= 1, x >= 0.
pub fn upper_gamma_half(m: i64, x: &Real, prec: usize) -> Real {
    assert!(m >= 1);
    assert!(!x.is_negative());
    let a_num = m;
    let a = Real::from_i64(a_num, prec).div(&Real::from_i64(2, prec));
    if x.is_zero() {
        return gamma_half(m, prec);
    }
    let crossover = a.add(&Real::one(prec));
    if x.cmp(&crossover) == std::cmp::Ordering::Less {
        // Γ(a,x) = Γ(a) - x^a e^-x Σ_n x^n / (a (a+1) ... (a+n))
        let mut term = Real::one(prec).div(&a);
        let mut sum = term.clone();
        let mut denom = a.clone();
        let tiny = -(prec as i64) - 8;
        for _ in 1..10_000 {
            denom = denom.add(&Real::one(prec));
            term = term.mul(x).div(&denom);
            sum = sum.add(&term);
            if term.exponent() < sum.exponent() + tiny {
                break;
            }
        }
        let front = pow_half(x, a_num).mul(&x.neg().exp());
        gamma_half(m, prec).sub(&front.mul(&sum))
    } else {
        // modified Lentz on the standard continued fraction
        let tiny = Real::from_f64(1e-300, prec);
        let one = Real::one(prec);
        let mut b = x.add(&one).sub(&a);
        let mut c = Real::from_f64(1e300, prec);
        let mut d = if b.is_zero() { tiny.clone() } else { one.div(&b) };
        let mut h = d.clone();
        for i in 1..10_000i64 {
            let an = Real::from_i64(-i, prec).mul(&Real::from_i64(i, prec).sub(&a));
            b = b.add(&Real::from_i64(2, prec));
            d = an.mul(&d).add(&b);
            if d.is_zero() {
                d = tiny.clone();
            }
            c = b.add(&an.div(&c));
            if c.is_zero() {
                c = tiny.clone();
            }
            d = one.div(&d);
            let delta = d.mul(&c);
            h = h.mul(&delta);
            if delta.sub(&one).abs().exponent() < -(prec as i64) - 8 {
                break;
            }
        }
        pow_half(x, a_num).mul(&x.neg().exp()).mul(&h)
    }
}

/// Arithmetic-geometric mean of two positive reals.
pub fn agm(a0: &Real, b0: &Real, prec: usize) -> Real {
    let mut a = a0.with_prec(prec + 32);
    let mut b = b0.with_prec(prec + 32);
    let two = Real::from_i64(2, prec + 32);
    for _ in 0..10_000 {
        let am = a.add(&b).div(&two);
        let gm = a.mul(&b).sqrt();
        let done = am.sub(&gm).abs().exponent() < am.exponent() - (prec as i64) - 16;
        a = am;
        b = gm;
        if done {
            break;
        }
    }
    a.with_prec(prec)
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: usize = 192;

    fn close(a: &Real, b: &Real, digits: f64) {
        let d = a.sub(b).abs();
        let scale = b.abs().log10_abs().max(0.0);
        assert!(
            d.log10_abs() < scale - digits,
            "not close: {a} vs {b} (diff 1e{})",
            d.log10_abs()
        );
    }

    #[test]
    fn gamma_integers_and_halves() {
        close(&gamma_half(2, P), &Real::one(P), 50.0);
        close(&gamma_half(8, P), &Real::from_i64(6, P), 50.0); // Γ(4) = 6
        let sqrt_pi = Real::pi(P).sqrt();
        close(&gamma_half(1, P), &sqrt_pi, 50.0);
        // Γ(5/2) = 3/4 √π
        let want = sqrt_pi.mul(&Real::from_f64(0.75, P));
        close(&gamma_half(5, P), &want, 50.0);
    }

    #[test]
    fn upper_gamma_at_one_is_exp() {
        // Γ(1, x) = e^-x on both sides of the crossover
        for xf in [0.3, 1.0, 5.0, 40.0] {
            let x = Real::from_f64(xf, P);
            close(&upper_gamma_half(2, &x, P), &x.neg().exp(), 45.0);
        }
    }

    #[test]
    fn recurrence_oracle() {
        // Γ(a+1, x) = a Γ(a, x) + x^a e^-x, checked across the branch cut
        for m in [1i64, 2, 3, 5] {
            for xf in [0.4, 1.3, 2.6, 9.0, 77.0] {
                let x = Real::from_f64(xf, P);
                let lhs = upper_gamma_half(m + 2, &x, P);
                let a = Real::from_i64(m, P).div(&Real::from_i64(2, P));
                let rhs = a
                    .mul(&upper_gamma_half(m, &x, P))
                    .add(&pow_half(&x, m).mul(&x.neg().exp()));
                close(&lhs, &rhs, 45.0);
            }
        }
    }

    #[test]
    fn agm_known_value() {
        let a = Real::from_i64(24, P);
        let b = Real::from_i64(6, P);
        let m = agm(&a, &b, P);
        close(&m, &Real::from_f64(13.458171481725615, P), 14.0);
    }
}
