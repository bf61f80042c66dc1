//! Hecke and U operators on the classical symbol, evaluated at divisors
//! {a} - {infinity} through the dual-polynomial action.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::heckechar::CharContext;
use crate::quadfield::{ElemK, MatK};

use super::dualpoly::{gamma_action, DualPoly, MatCyc};
use super::partial::ClassicalSymbol;

/// (phi | U_q)({a} - {infinity}) with coset representatives
/// (1, beta; 0, pi): sum over a residue lift beta of O_K/q of the translated
/// values acted on by the representative.
pub fn u_operator_value(
    ctx: &CharContext,
    sym: &ClassicalSymbol,
    at_p: bool,
    n: &ElemK,
    t: u32,
    s: u32,
) -> DualPoly {
    let sh = ctx.field.shape;
    let pi = if at_p { &sym.inst.pi_p } else { &sym.inst.pi_pbar };
    let gamma = sym.inst.pi_p.pow(t).mul(&sym.inst.pi_pbar.pow(s));
    let p = sym.inst.p as i64;
    let mut acc = DualPoly::zero(sym.inst.k as usize, sym.inst.k as usize);
    for bx in 0..p {
        let beta = ElemK::from_ints(bx, 0, sh);
        // child cusp ((a + beta)/pi): numerator n + beta gamma, one more
        // power of pi in the denominator
        let child_n = n.add(&beta.mul(&gamma));
        let (tc, sc) = if at_p { (t + 1, s) } else { (t, s + 1) };
        let v = sym.dual_value(&child_n, tc, sc);
        let rep = MatK::new(
            ElemK::from_ints(1, 0, sh),
            beta,
            ElemK::from_ints(0, 0, sh),
            pi.clone(),
        );
        acc = acc.add(&gamma_action(&MatCyc::from_k(ctx.field.d, &rep), &v));
    }
    acc
}

/// (phi | T_q)({0} - {infinity}) for a prime q = (pi_q) away from the
/// level: the U-type cosets plus the extra representative (pi_q, 0; 0, 1).
/// The needed twisted values at conductor q are supplied by the caller as a
/// closure on residue classes.
pub fn t_operator_at_zero(
    ctx: &CharContext,
    sym: &ClassicalSymbol,
    pi_q: &ElemK,
    q_norm: i64,
    value_at_q_cusp: &dyn Fn(&ElemK) -> DualPoly,
) -> DualPoly {
    let sh = ctx.field.shape;
    let mut acc = DualPoly::zero(sym.inst.k as usize, sym.inst.k as usize);
    for bx in 0..q_norm {
        let beta = ElemK::from_ints(bx, 0, sh);
        let v = value_at_q_cusp(&beta);
        let rep = MatK::new(
            ElemK::from_ints(1, 0, sh),
            beta,
            ElemK::from_ints(0, 0, sh),
            pi_q.clone(),
        );
        acc = acc.add(&gamma_action(&MatCyc::from_k(ctx.field.d, &rep), &v));
    }
    // the extra coset (pi_q, 0; 0, 1) maps {0} - {oo} to itself
    let v0 = sym.dual_value(&ElemK::zero(sh), 0, 0);
    let rep = MatK::new(
        pi_q.clone(),
        ElemK::from_ints(0, 0, sh),
        ElemK::from_ints(0, 0, sh),
        ElemK::from_ints(1, 0, sh),
    );
    acc.add(&gamma_action(&MatCyc::from_k(ctx.field.d, &rep), &v0))
}

/// Scale a rational.
pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::cyclotomic::CycNum;
    use crate::arith::embed::PadicEmbedding;
    use crate::lfun::lambda::BianchiInstance;
    use crate::lfun::periods::CurveConfig;
    use crate::quadfield::FieldK;

    fn setup<'a>() -> (CharContext, PadicEmbedding) {
        let ctx = CharContext::new(FieldK::new(4).unwrap());
        let emb = PadicEmbedding::new(5, 4, 4, 4).unwrap();
        (ctx, emb)
    }

    #[test]
    fn u_p_eigen_equation_at_zero() {
        // (phi' | U_p)({0}-{oo}) = phi(pbar) phi'({0}-{oo}), both primes
        let (ctx, emb) = setup();
        let inst = BianchiInstance::new(&ctx, &emb, 0, 40, &CurveConfig::qi_default()).unwrap();
        let sym = ClassicalSymbol::new(&ctx, &inst, (1, 1)).unwrap();
        let zero = ElemK::zero(ctx.field.shape);
        let base = sym.dual_value(&zero, 0, 0);
        for at_p in [true, false] {
            let lhs = u_operator_value(&ctx, &sym, at_p, &zero, 0, 0);
            let rhs = base.scale(&sym.eigenvalue);
            assert_eq!(lhs, rhs, "U eigen at p-side {at_p}");
        }
    }

    #[test]
    fn u_p_constant_toy_fixed_point() {
        // a constant weight-(0,0) symbol has (c|U_p)(D) = 5c on {0}-{oo}
        // when all five translated values are c and the action is trivial;
        // checked through the machinery by scaling the true symbol values.
        let (ctx, emb) = setup();
        let inst = BianchiInstance::new(&ctx, &emb, 0, 40, &CurveConfig::qi_default()).unwrap();
        let sym = ClassicalSymbol::new(&ctx, &inst, (1, 1)).unwrap();
        // direct count: five coset representatives
        let zero = ElemK::zero(ctx.field.shape);
        let u = u_operator_value(&ctx, &sym, true, &zero, 0, 0);
        // compare against the by-hand sum of the five translated values
        let gamma0 = ElemK::one(ctx.field.shape);
        let mut want = CycNum::zero();
        for bx in 0..5i64 {
            let beta = ElemK::from_ints(bx, 0, ctx.field.shape);
            let child = zero.add(&beta.mul(&gamma0));
            want = want.add(&sym.value(0, 0, &child, 1, 0));
        }
        assert_eq!(u.c[0][0], want);
    }
}
