//! CM periods: the real period of the configured CM elliptic curve by the
//! arithmetic-geometric mean, and the derived period normalizations.

use crate::numeric::gamma::agm;
use crate::numeric::Real;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum PeriodError {
    #[error("curve must have three real 2-division points (disc > 0); got {0:?}")]
    NotTotallyReal([f64; 2]),
    #[error("AGM did not converge (malformed curve)")]
    AgmDiverged,
}

/// y^2 = x^3 + a4 x + a6 with complex multiplication by O_K.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CurveConfig {
    pub a4: i64,
    pub a6: i64,
}

impl CurveConfig {
    /// The standard curve for K = Q(i).
    pub fn qi_default() -> Self {
        CurveConfig { a4: -1, a6: 0 }
    }
}

/// The periods entering the interpolation constants.
#[derive(Clone, Debug)]
pub struct Periods {
    /// real period of dx/y
    pub omega_inf: Real,
    /// (omega_inf / pi)^(2k+2)
    pub omega_f: Real,
    /// (2/w) (sqrt(D) omega_inf / (2 pi i))^(2k+2) = (-1)^(k+1) (2/w)
    /// (sqrt(D) omega_inf / (2 pi))^(2k+2); real with sign
    pub omega_norm: Real,
    pub k: u32,
}

/// Real period of the curve by AGM over the ordered real roots.
pub fn real_period(curve: &CurveConfig, prec: usize) -> Result<Real, PeriodError> {
    let roots = cubic_real_roots(curve, prec)?;
    let [e3, e2, e1] = roots; // ascending
    let s13 = e1.sub(&e3).sqrt();
    let s12 = e1.sub(&e2).sqrt();
    let m = agm(&s13, &s12, prec);
    if m.is_zero() {
        return Err(PeriodError::AgmDiverged);
    }
    let two_pi = Real::pi(prec).mul(&Real::from_i64(2, prec));
    Ok(two_pi.div(&m))
}

/// All three real roots of x^3 + a4 x + a6, ascending, by Newton refinement
/// of f64 seeds.
fn cubic_real_roots(curve: &CurveConfig, prec: usize) -> Result<[Real; 3], PeriodError> {
    let a4 = curve.a4 as f64;
    let a6 = curve.a6 as f64;
    let disc = -4.0 * a4 * a4 * a4 - 27.0 * a6 * a6;
    if disc <= 0.0 {
        return Err(PeriodError::NotTotallyReal([a4, a6]));
    }
    // trigonometric method for three real roots of a depressed cubic
    let p = a4;
    let q = a6;
    let m = 2.0 * (-p / 3.0).sqrt();
    let theta = (3.0 * q / (p * m)).acos() / 3.0;
    let mut seeds = [
        m * theta.cos(),
        m * (theta - 2.0 * std::f64::consts::PI / 3.0).cos(),
        m * (theta + 2.0 * std::f64::consts::PI / 3.0).cos(),
    ];
    seeds.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut out = Vec::with_capacity(3);
    for s in seeds {
        let mut x = Real::from_f64(s, prec);
        let a4r = Real::from_i64(curve.a4, prec);
        let a6r = Real::from_i64(curve.a6, prec);
        let three = Real::from_i64(3, prec);
        for _ in 0..128 {
            let fx = x.mul(&x).mul(&x).add(&a4r.mul(&x)).add(&a6r);
            let dfx = three.mul(&x).mul(&x).add(&a4r);
            let step = fx.div(&dfx);
            x = x.sub(&step);
            if step.abs().exponent() < x.abs().exponent() - prec as i64 - 4 {
                break;
            }
        }
        out.push(x);
    }
    Ok([out[0].clone(), out[1].clone(), out[2].clone()])
}

/// Assemble all period data for weight parameter k and unit order w.
pub fn cm_periods(
    curve: &CurveConfig,
    d_disc: u64,
    w: u32,
    k: u32,
    prec: usize,
) -> Result<Periods, PeriodError> {
    let omega_inf = real_period(curve, prec)?;
    let pi = Real::pi(prec);
    let e = (2 * k + 2) as i64;
    let omega_f = omega_inf.div(&pi).powi(e);
    let base = Real::from_i64(d_disc as i64, prec)
        .sqrt()
        .mul(&omega_inf)
        .div(&pi.mul(&Real::from_i64(2, prec)));
    let sign = if k % 2 == 0 { -1 } else { 1 }; // (-1)^(k+1)
    let omega_norm = base
        .powi(e)
        .mul(&Real::from_i64(2 * sign, prec))
        .div(&Real::from_i64(w as i64, prec));
    Ok(Periods { omega_inf, omega_f, omega_norm, k })
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: usize = 192;

    #[test]
    fn real_period_of_32a() {
        // y^2 = x^3 - x: real period 5.24411510858423962092...
        let omega = real_period(&CurveConfig::qi_default(), P).unwrap();
        let want = Real::from_f64(5.244115108584239, P);
        assert!(omega.sub(&want).abs().to_f64() < 1e-14, "got {omega}");
    }

    #[test]
    fn period_against_quadrature_oracle() {
        // 2 * integral_1^infty dx/sqrt(x^3 - x) = 4 * integral_0^1 du/sqrt(1-u^4)
        // via x = u^-2; compare with the AGM value at moderate precision.
        let omega = real_period(&CurveConfig::qi_default(), P).unwrap();
        // tanh-sinh quadrature on (0, 1)
        let prec = P;
        let h = 1.0 / 32.0;
        let mut sum = Real::zero(prec);
        let one = Real::one(prec);
        let two = Real::from_i64(2, prec);
        for j in -900i32..=900 {
            let t = h * j as f64;
            // u = tanh(pi/2 sinh t) mapped to (0,1): u = (1 + tanh)/2... use
            // standard map for (0,1): u = 1/2 + tanh(pi/2 sinh t)/2
            let st = t.sinh() * std::f64::consts::FRAC_PI_2;
            if st.abs() > 700.0 {
                continue;
            }
            let u = 0.5 + 0.5 * st.tanh();
            let du = 0.5 * std::f64::consts::FRAC_PI_2 * t.cosh() / st.cosh().powi(2);
            if du < 1e-60 {
                continue;
            }
            let ur = Real::from_f64(u, prec);
            let f = one.sub(&ur.powi(4)).sqrt();
            if f.is_zero() {
                continue;
            }
            sum = sum.add(&Real::from_f64(du * h, prec).div(&f));
        }
        let integral = sum.mul(&two.mul(&two));
        // node weights are computed in f64, so expect ~8 digits
        assert!(
            integral.sub(&omega).abs().to_f64() < 5e-8,
            "quadrature {integral} vs AGM {omega}"
        );
    }

    #[test]
    fn omega_norm_ratio() {
        // Omega_norm / Omega_F = (2/w)(sqrt(D)/(2 i))^(2k+2) = -1/2 at k = 0
        let p = cm_periods(&CurveConfig::qi_default(), 4, 4, 0, P).unwrap();
        let ratio = p.omega_norm.div(&p.omega_f);
        assert!(ratio.add(&Real::from_f64(0.5, P)).abs().to_f64() < 1e-30);
    }

    #[test]
    fn bad_curve_rejected() {
        assert!(real_period(&CurveConfig { a4: 1, a6: 1 }, P).is_err());
    }
}
