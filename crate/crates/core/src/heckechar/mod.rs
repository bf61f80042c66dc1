//! Hecke characters of K as ideal functions: finite-order table on a ray
//! residue group plus an infinity type, with products, conjugates, twists,
//! Gauss sums and p-adic avatars.
//!
//! Conventions (fixed here, validated by the round-trip and interpolation
//! tests):
//!   - infinity type (a, b) means psi_infty(z) = z^a zbar^b;
//!   - the ideal function is psi((alpha)) = eps(alpha) alpha^-a alphabar^-b
//!     for alpha coprime to the modulus, 0 on ideals sharing a factor with
//!     the modulus;
//!   - unit compatibility eps(u) u^a ubar^b = 1 is required, which makes the
//!     ideal value independent of the generator.

pub mod avatar;
pub mod gauss;

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::arith::cyclotomic::CycNum;
use crate::quadfield::{factor_ideal, ElemK, FieldK, GroupChar, IdealK, ResidueGroup};

pub use avatar::AvatarCharacter;

/// psi_infty(z) = z^a zbar^b.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct InfinityType {
    pub a: i64,
    pub b: i64,
}

impl InfinityType {
    pub fn new(a: i64, b: i64) -> Self {
        InfinityType { a, b }
    }

    pub fn zero() -> Self {
        InfinityType { a: 0, b: 0 }
    }

    pub fn add(&self, rhs: &InfinityType) -> Self {
        InfinityType { a: self.a + rhs.a, b: self.b + rhs.b }
    }

    pub fn swap(&self) -> Self {
        InfinityType { a: self.b, b: self.a }
    }
}

/// Shared field data plus a cache of residue groups by modulus.
pub struct CharContext {
    pub field: FieldK,
    groups: Mutex<HashMap<IdealK, Arc<ResidueGroup>>>,
}

impl CharContext {
    pub fn new(field: FieldK) -> Self {
        CharContext { field, groups: Mutex::new(HashMap::new()) }
    }

    pub fn group(&self, modulus: &IdealK) -> Arc<ResidueGroup> {
        let mut cache = self.groups.lock().unwrap();
        if let Some(g) = cache.get(modulus) {
            return g.clone();
        }
        let g = Arc::new(ResidueGroup::new(&self.field, modulus));
        cache.insert(modulus.clone(), g.clone());
        g
    }
}

/// A Hecke character of K in finite-table form.
#[derive(Clone)]
pub struct HeckeCharacter {
    pub modulus: IdealK,
    pub inf: InfinityType,
    /// finite-order table eps on (O_K/modulus)^x
    pub eps: GroupChar,
    group: Arc<ResidueGroup>,
}

#[derive(Debug, thiserror::Error)]
pub enum CharError {
    #[error("character table is not unit-compatible with the infinity type")]
    UnitIncompatible,
    #[error("character is imprimitive (conductor strictly divides the modulus)")]
    Imprimitive,
    #[error("ideal is not coprime to the modulus")]
    NotCoprime,
    #[error("restriction of the table to the conductor group failed")]
    RestrictFailed,
}

impl HeckeCharacter {
    /// Build and check unit compatibility.
    pub fn new(
        ctx: &CharContext,
        modulus: IdealK,
        inf: InfinityType,
        eps: GroupChar,
    ) -> Result<Self, CharError> {
        let group = ctx.group(&modulus);
        let chi = HeckeCharacter { modulus, inf, eps, group };
        if !chi.unit_compatible(ctx) {
            return Err(CharError::UnitIncompatible);
        }
        Ok(chi)
    }

    /// The trivial character (modulus (1), infinity type 0).
    pub fn trivial(ctx: &CharContext) -> Self {
        let one = IdealK::one(&ctx.field);
        let group = ctx.group(&one);
        HeckeCharacter {
            modulus: one,
            inf: InfinityType::zero(),
            eps: GroupChar::trivial(&group),
            group,
        }
    }

    /// The canonical CM character of Q(i) of conductor (1+i)^3 and infinity
    /// type (-k-1, 0). Its table sends a class to the inverse of the unique
    /// unit in that class, so that phi((alpha)) = alpha on generators
    /// congruent to 1 mod (1+i)^3.
    pub fn canonical_qi(ctx: &CharContext, k: u32) -> Result<Self, CharError> {
        assert_eq!(ctx.field.d, 4, "canonical character lives over Q(i)");
        let m = IdealK::from_gen(
            &ctx.field,
            &ElemK::from_ints(1, 1, ctx.field.shape).pow(3),
        )
        .unwrap();
        let group = ctx.group(&m);
        let mut exps = Vec::new();
        for (&g, &d) in group.gens.iter().zip(group.orders.iter()) {
            // find the unit with the same class as the basis element
            let u = ctx
                .field
                .units()
                .iter()
                .enumerate()
                .find(|(_, u)| group.lookup(u) == Some(g))
                .map(|(i, _)| i)
                .expect("every class mod (1+i)^3 contains a unit");
            // the unit as a root of unity: i^j; eps(g) = i^-j
            let uval = unit_as_root_exponent(&ctx.field, u);
            assert!(d == 4, "expected cyclic of order 4");
            exps.push((d - uval % d) % d);
        }
        let eps = GroupChar { exps, orders: group.orders.clone() };
        let base = HeckeCharacter {
            modulus: m,
            inf: InfinityType::new(-1, 0),
            eps,
            group,
        };
        if !base.unit_compatible(ctx) {
            return Err(CharError::UnitIncompatible);
        }
        base.power(ctx, k + 1)
    }

    /// psi^n as a character (multiplies infinity types and tables).
    pub fn power(&self, ctx: &CharContext, n: u32) -> Result<Self, CharError> {
        let mut acc = HeckeCharacter {
            modulus: self.modulus.clone(),
            inf: InfinityType::zero(),
            eps: GroupChar::trivial(&self.group),
            group: self.group.clone(),
        };
        for _ in 0..n {
            acc = HeckeCharacter {
                modulus: self.modulus.clone(),
                inf: acc.inf.add(&self.inf),
                eps: acc.eps.mul(&self.eps),
                group: self.group.clone(),
            };
        }
        acc.primitivize(ctx)
    }

    pub fn group(&self) -> &ResidueGroup {
        &self.group
    }

    /// eps evaluated at a residue class index.
    pub fn eps_value(&self, idx: usize) -> CycNum {
        self.eps.value(&self.group, idx)
    }

    /// Unit compatibility: eps(u) u^-a ubar^-b = 1 for all units. This is
    /// exactly what makes eps(alpha) alpha^-a alphabar^-b independent of
    /// the chosen generator.
    pub fn unit_compatible(&self, ctx: &CharContext) -> bool {
        for (i, u) in ctx.field.units().iter().enumerate() {
            let idx = self.group.unit_images[i];
            let lhs = self.eps_value(idx).mul(
                &elem_power_cyc(ctx, u, -self.inf.a, -self.inf.b),
            );
            if lhs != CycNum::one() {
                return false;
            }
        }
        true
    }

    /// The finite table at an element coprime to the modulus.
    pub fn eps_at(&self, z: &ElemK) -> Result<CycNum, CharError> {
        let idx = self
            .group
            .lookup_fraction(z)
            .ok_or(CharError::NotCoprime)?;
        Ok(self.eps_value(idx))
    }

    /// The ideal function on an integral ideal: 0 when not coprime.
    pub fn eval_ideal(&self, ctx: &CharContext, ideal: &IdealK) -> CycNum {
        if !ideal.coprime(&ctx.field, &self.modulus) {
            return CycNum::zero();
        }
        self.eval_generator(ctx, ideal.generator())
    }

    /// Value on the principal ideal generated by alpha (possibly fractional,
    /// coprime to the modulus): eps(alpha) alpha^-a alphabar^-b.
    pub fn eval_generator(&self, ctx: &CharContext, alpha: &ElemK) -> CycNum {
        let idx = self
            .group
            .lookup_fraction(alpha)
            .expect("generator coprime to modulus");
        let fin = self.eps_value(idx);
        fin.mul(&elem_power_cyc(ctx, alpha, -self.inf.a, -self.inf.b))
    }

    /// Conductor as exponents over the primes of the modulus.
    pub fn conductor_exponents(&self, ctx: &CharContext) -> Vec<(IdealK, u32)> {
        self.group.conductor_exponents(&ctx.field, &self.eps)
    }

    pub fn conductor(&self, ctx: &CharContext) -> IdealK {
        self.conductor_exponents(ctx)
            .into_iter()
            .fold(IdealK::one(&ctx.field), |acc, (q, e)| {
                acc.mul(&ctx.field, &q.pow(&ctx.field, e))
            })
    }

    pub fn is_primitive(&self, ctx: &CharContext) -> bool {
        self.conductor(ctx) == self.modulus
    }

    /// Restrict the table to the exact conductor.
    pub fn primitivize(&self, ctx: &CharContext) -> Result<Self, CharError> {
        let cond = self.conductor(ctx);
        if cond == self.modulus {
            return Ok(self.clone());
        }
        let small = ctx.group(&cond);
        let l_small = small.exponent();
        let mut exps = Vec::new();
        for (&g, &d) in small.gens.iter().zip(small.orders.iter()) {
            // lift the basis element to something coprime to the modulus
            let lift = lift_coprime(ctx, small.element(g), &cond, &self.modulus);
            let idx = self.group.lookup(&lift).expect("lift is coprime");
            let l_big = self.group.exponent();
            let t = self.eps.exponent_on(&self.group, idx);
            // value zeta_{l_big}^t must be a d-th root of unity
            let ord = if t == 0 { 1 } else { l_big / crate::arith::cyclotomic::gcd_u64(t, l_big) };
            if d % ord != 0 {
                return Err(CharError::RestrictFailed);
            }
            // e with zeta_d^e = zeta_{l_big}^t
            let e = if t == 0 { 0 } else { t * d / l_big };
            let _ = l_small;
            exps.push(e % d);
        }
        let eps = GroupChar { exps, orders: small.orders.clone() };
        Ok(HeckeCharacter { modulus: cond, inf: self.inf, eps, group: small })
    }

    /// Product of two characters on the lcm modulus (then primitivized).
    pub fn mul_char(&self, ctx: &CharContext, rhs: &HeckeCharacter) -> Result<Self, CharError> {
        let m = ideal_lcm(ctx, &self.modulus, &rhs.modulus);
        let a = self.extend_to(ctx, &m);
        let b = rhs.extend_to(ctx, &m);
        let chi = HeckeCharacter {
            modulus: m,
            inf: self.inf.add(&rhs.inf),
            eps: a.eps.mul(&b.eps),
            group: a.group.clone(),
        };
        chi.primitivize(ctx)
    }

    /// View the table on a larger modulus group.
    pub fn extend_to(&self, ctx: &CharContext, modulus: &IdealK) -> Self {
        assert!(self.modulus.divides(&ctx.field, modulus));
        if &self.modulus == modulus {
            return self.clone();
        }
        let big = ctx.group(modulus);
        let l_big = big.exponent();
        let l_small = self.group.exponent();
        assert!(l_big % l_small == 0 || l_small == 1);
        let mut exps = Vec::new();
        for (&g, &d) in big.gens.iter().zip(big.orders.iter()) {
            let idx = self
                .group
                .lookup(big.element(g))
                .expect("coprime to big modulus implies coprime to small");
            let t = self.eps.exponent_on(&self.group, idx); // zeta_{l_small}^t
            // need e with zeta_d^e = zeta_{l_small}^t; element order divides d
            let ord = if t == 0 { 1 } else { l_small / crate::arith::cyclotomic::gcd_u64(t, l_small) };
            assert!(d % ord == 0, "extension order mismatch");
            let e = if t == 0 { 0 } else { (t as u128 * d as u128 / l_small as u128) as u64 };
            exps.push(e % d);
        }
        HeckeCharacter {
            modulus: modulus.clone(),
            inf: self.inf,
            eps: GroupChar { exps, orders: big.orders.clone() },
            group: big,
        }
    }

    /// psi^c: psi^c(a) = psi(abar).
    pub fn conj_char(&self, ctx: &CharContext) -> Self {
        let m = self.modulus.conj(&ctx.field);
        let group = ctx.group(&m);
        let mut exps = Vec::new();
        for (&g, &d) in group.gens.iter().zip(group.orders.iter()) {
            let z = group.element(g).conj();
            let idx = self.group.lookup(&z).expect("conj of coprime is coprime");
            let t = self.eps.exponent_on(&self.group, idx);
            let l = self.group.exponent();
            let ord = if t == 0 { 1 } else { l / crate::arith::cyclotomic::gcd_u64(t, l) };
            assert!(d % ord == 0);
            let e = if t == 0 { 0 } else { (t as u128 * d as u128 / l as u128) as u64 };
            exps.push(e % d);
        }
        HeckeCharacter {
            modulus: m,
            inf: self.inf.swap(),
            eps: GroupChar { exps, orders: group.orders.clone() },
            group,
        }
    }

    /// Twist by the adelic norm |.|: the ideal function picks up N(a)^-1.
    pub fn norm_twist(&self, n: i64) -> Self {
        HeckeCharacter {
            modulus: self.modulus.clone(),
            inf: self.inf.add(&InfinityType::new(n, n)),
            eps: self.eps.clone(),
            group: self.group.clone(),
        }
    }

    /// Order of the finite table.
    pub fn eps_order(&self) -> u64 {
        self.eps.order()
    }

    /// Is the infinity type zero?
    pub fn is_finite_order(&self) -> bool {
        self.inf.a == 0 && self.inf.b == 0
    }

    /// A stable fingerprint for cache keys and report sorting.
    pub fn fingerprint(&self, ctx: &CharContext) -> String {
        let cond = self.conductor_exponents(ctx);
        let mut s = format!("inf({},{})", self.inf.a, self.inf.b);
        for (q, e) in cond {
            s.push_str(&format!(";{:?}^{}", q.generator(), e));
        }
        s.push_str(&format!(";eps{:?}@{:?}", self.eps.exps, self.eps.orders));
        s
    }
}

/// lambda_K = chi_K o N as a Hecke character with modulus the ramified
/// radical; it primitivizes to the trivial character.
pub fn lambda_k(ctx: &CharContext) -> HeckeCharacter {
    // radical of (delta)
    let delta = ctx.field.delta();
    let rad = factor_ideal(&ctx.field, &IdealK::from_gen(&ctx.field, &delta).unwrap())
        .into_iter()
        .fold(IdealK::one(&ctx.field), |acc, (q, _)| acc.mul(&ctx.field, &q));
    let group = ctx.group(&rad);
    let mut exps = Vec::new();
    for (&g, &d) in group.gens.iter().zip(group.orders.iter()) {
        let z = group.element(g);
        let n = z.norm().to_integer();
        let chi = crate::quadfield::kronecker(
            -(ctx.field.d as i64),
            num_traits::ToPrimitive::to_i64(&n).expect("norm fits"),
        );
        let e = match chi {
            1 => 0,
            -1 => d / 2,
            _ => panic!("norm of a coprime residue is coprime to D"),
        };
        exps.push(e);
    }
    HeckeCharacter {
        modulus: rad,
        inf: InfinityType::zero(),
        eps: GroupChar { exps, orders: group.orders.clone() },
        group,
    }
}

/// alpha^a alphabar^b as an exact cyclotomic number.
pub fn elem_power_cyc(ctx: &CharContext, alpha: &ElemK, a: i64, b: i64) -> CycNum {
    let c = alpha.to_cyc(ctx.field.d);
    let cb = alpha.conj().to_cyc(ctx.field.d);
    c.pow(a).expect("nonzero").mul(&cb.pow(b).expect("nonzero"))
}

/// Unit u as an exponent of zeta_w... for Q(i): i^j; for Q(zeta_3): power
/// of the 6th root; for w = 2: power of -1. Returns the exponent j with
/// u = zeta_w^j under the canonical complex embedding.
pub fn unit_as_root_exponent(field: &FieldK, unit_index: usize) -> u64 {
    // units are listed as successive powers for w = 6; for w = 4 the list
    // is 1, i, -1, -i; for w = 2 it is 1, -1.
    match field.w {
        2 | 6 => unit_index as u64,
        4 => unit_index as u64,
        _ => unreachable!(),
    }
}

/// Find an element congruent to z mod small and coprime to big.
pub fn lift_coprime(ctx: &CharContext, z: &ElemK, small: &IdealK, big: &IdealK) -> ElemK {
    let g = small.generator();
    let mut t = ElemK::zero(ctx.field.shape);
    loop {
        let cand = z.add(&t.mul(g));
        if IdealK::from_gen(&ctx.field, &cand)
            .map(|i| i.coprime(&ctx.field, big))
            .unwrap_or(false)
        {
            return cand;
        }
        // walk through small multipliers
        t = next_elem(&t, ctx.field.shape);
    }
}

fn next_elem(t: &ElemK, shape: crate::quadfield::BasisShape) -> ElemK {
    // simple spiral over integer coordinates
    use num_traits::ToPrimitive;
    let x = t.x.to_integer().to_i64().unwrap();
    let y = t.y.to_integer().to_i64().unwrap();
    let (nx, ny) = if x <= y && x > -y {
        (x, y + 1)
    } else if y > x {
        (x + 1, y)
    } else if x > -y {
        (x, y - 1)
    } else {
        (x - 1, y)
    };
    // fallback sweep if stuck at origin
    let (nx, ny) = if nx == 0 && ny == 0 { (1, 0) } else { (nx, ny) };
    ElemK::from_ints(nx, ny, shape)
}

/// lcm of two integral ideals through factorizations.
pub fn ideal_lcm(ctx: &CharContext, a: &IdealK, b: &IdealK) -> IdealK {
    let fa = factor_ideal(&ctx.field, a);
    let fb = factor_ideal(&ctx.field, b);
    let mut exps: Vec<(IdealK, u32)> = fa;
    for (q, e) in fb {
        if let Some(entry) = exps.iter_mut().find(|(p, _)| *p == q) {
            entry.1 = entry.1.max(e);
        } else {
            exps.push((q, e));
        }
    }
    exps.into_iter().fold(IdealK::one(&ctx.field), |acc, (q, e)| {
        acc.mul(&ctx.field, &q.pow(&ctx.field, e))
    })
}

/// All unit-compatible characters of infinity type `inf` with conductor
/// dividing `modulus`, returned on the modulus group (not primitivized).
pub fn characters_dividing(
    ctx: &CharContext,
    modulus: &IdealK,
    inf: InfinityType,
) -> Vec<HeckeCharacter> {
    let group = ctx.group(modulus);
    let mut out = Vec::new();
    for chi in group.characters() {
        let cand = HeckeCharacter {
            modulus: modulus.clone(),
            inf,
            eps: chi,
            group: group.clone(),
        };
        if cand.unit_compatible(ctx) {
            out.push(cand);
        }
    }
    out
}
