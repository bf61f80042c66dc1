use bianchi_core::arith::embed::PadicEmbedding;
use bianchi_core::heckechar::{characters_dividing, CharContext, HeckeCharacter, InfinityType};
use bianchi_core::lfun::lambda::BianchiInstance;
use bianchi_core::lfun::periods::CurveConfig;
use bianchi_core::lfun::recognize::rationalize;
use bianchi_core::numeric::complex::CxBall;
use bianchi_core::numeric::Cx;
use bianchi_core::quadfield::FieldK;
use num_bigint::BigInt;

fn main() {
    let ctx = CharContext::new(FieldK::new(4).unwrap());
    let emb = PadicEmbedding::new(5, 4, 4, 4).unwrap();
    let inst = BianchiInstance::new(&ctx, &emb, 0, 40, &CurveConfig::qi_default()).unwrap();
    let f11 = inst.p_ideal.mul(&ctx.field, &inst.pbar_ideal);
    for psi in characters_dividing(&ctx, &f11, InfinityType::zero()) {
        let psi = psi.primitivize(&ctx).unwrap();
        if psi.modulus.is_one() { continue; }
        println!("== char eps={:?} order={}", psi.eps.exps, psi.eps_order());
        let lam = inst.lambda_value(&ctx, &psi).unwrap();
        println!("  Lambda = {} err {:.2e}", lam.value, lam.err);
        let ratio = CxBall::new(
            Cx::new(lam.value.re.div(&inst.periods.omega_norm), lam.value.im.div(&inst.periods.omega_norm)),
            lam.err / inst.periods.omega_norm.to_f64().abs(),
        );
        println!("  ratio = {}", ratio.value);
        for m in [8u64, 4, 20, 40] {
            match rationalize(&ratio, m, &BigInt::from(10u64).pow(14)) {
                Ok((v, mg)) => { println!("  m={m}: {v:?} margin {mg:.2e}"); }
                Err(e) => println!("  m={m}: {e}"),
            }
        }
        let _ = HeckeCharacter::trivial(&ctx);
    }
}
