//! p-adic avatars of Hecke characters.
//!
//! For psi of conductor dividing p^infinity (times the CM modulus handled
//! by the embedding) and infinity type (a, b), the avatar on local units is
//! psi_hat(x) = eps(x) sigma1(x)^a sigma2(x)^b. Unit compatibility makes it
//! trivial on global units, so it descends to the ray class group.

use crate::arith::embed::{EmbedError, PadicEmbedding};
use crate::arith::padic_cyc::PadicCyc;
use crate::quadfield::ElemK;

use super::{CharContext, HeckeCharacter};

/// A Hecke character viewed p-adically on (O_K tensor Z_p)^x.
pub struct AvatarCharacter<'a> {
    pub psi: &'a HeckeCharacter,
    pub emb: &'a PadicEmbedding,
}

impl<'a> AvatarCharacter<'a> {
    pub fn new(psi: &'a HeckeCharacter, emb: &'a PadicEmbedding) -> Self {
        AvatarCharacter { psi, emb }
    }

    /// Evaluate at an element coprime to the conductor (and to p for the
    /// archimedean-to-p shift to make sense on units).
    pub fn eval(&self, _ctx: &CharContext, x: &ElemK) -> Result<PadicCyc, EmbedError> {
        let fin = self.psi.eps_at(x).map_err(|_| EmbedError::NotSplit {
            m: 0,
            tame: 0,
            pm1: self.emb.prime() - 1,
        })?;
        let fin_p = self.emb.embed_cyc(&fin)?;
        if self.psi.inf.a == 0 && self.psi.inf.b == 0 {
            return Ok(fin_p);
        }
        let s1 = self.emb.sigma1(x);
        let s2 = self.emb.sigma2(x);
        let arch = s1
            .pow(self.psi.inf.a)
            .expect("sigma1(x) is a unit")
            .mul(&s2.pow(self.psi.inf.b).expect("sigma2(x) is a unit"));
        Ok(fin_p.mul_scalar(&arch))
    }

    /// Avatar values on the global units; all must be 1.
    pub fn trivial_on_units(&self, ctx: &CharContext) -> Result<bool, EmbedError> {
        for u in ctx.field.units() {
            let v = self.eval(ctx, u)?;
            let one = PadicCyc::from_scalar(
                crate::arith::padic::PadicNum::from_i64(self.emb.prime(), 1, self.emb.prec()),
                v.ram_level(),
            );
            if !v.sub(&one).is_zero_to_precision() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
