//! The multiplicative residue group (O_K/f)^x: full enumeration, abelian
//! basis, discrete logs, characters.
//!
//! Conductors at desk scale have norms well below 10^6, so groups are built
//! by complete enumeration. The abelian basis is computed per primary
//! component with the greedy maximal-order algorithm and verified by
//! checking the product map is bijective.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::elem::ElemK;
use super::field::FieldK;
use super::ideal::{factor_ideal, IdealK, ZBasis};
use crate::arith::cyclotomic::{gcd_u64, lcm_u64, CycNum};

/// (O_K/f)^x with generators, orders, and a full discrete-log table.
pub struct ResidueGroup {
    pub field_d: u64,
    pub modulus: IdealK,
    pub factorization: Vec<(IdealK, u32)>,
    zb: ZBasis,
    elements: Vec<ElemK>,
    index: HashMap<(BigInt, BigInt), usize>,
    /// indices of basis elements
    pub gens: Vec<usize>,
    /// cyclic orders of the basis elements
    pub orders: Vec<u64>,
    dlog: Vec<Vec<u64>>,
    /// image indices of the units of O_K, aligned with field.units()
    pub unit_images: Vec<usize>,
    identity: usize,
}

impl ResidueGroup {
    pub fn new(field: &FieldK, modulus: &IdealK) -> Self {
        let factorization = factor_ideal(field, modulus);
        let zb = modulus.zbasis();
        let mut elements = Vec::new();
        let mut index = HashMap::new();
        let a = zb.a.to_i64().expect("modulus box fits i64");
        let b = zb.b.to_i64().expect("modulus box fits i64");
        for y in 0..b.max(1) {
            for x in 0..a.max(1) {
                let e = ElemK::from_ints(x, y, field.shape);
                let coprime = factorization
                    .iter()
                    .all(|(q, _)| !q.contains(&e));
                if coprime || modulus.is_one() {
                    if modulus.is_one() && !(x == 0 && y == 0) {
                        continue;
                    }
                    let idx = elements.len();
                    index.insert((BigInt::from(x), BigInt::from(y)), idx);
                    elements.push(e);
                }
            }
        }
        // cross-check the ideal-theoretic Euler phi
        let phi: u64 = factorization
            .iter()
            .map(|(q, e)| {
                let nq = q.norm_u64();
                nq.pow(e - 1) * (nq - 1)
            })
            .product();
        assert_eq!(
            elements.len() as u64,
            if modulus.is_one() { 1 } else { phi },
            "enumerated order disagrees with the phi formula"
        );

        let mut g = ResidueGroup {
            field_d: field.d,
            modulus: modulus.clone(),
            factorization,
            zb,
            elements,
            index,
            gens: Vec::new(),
            orders: Vec::new(),
            dlog: Vec::new(),
            unit_images: Vec::new(),
            identity: 0,
        };
        g.identity = g
            .lookup(&ElemK::one(field.shape))
            .expect("1 is coprime to any modulus");
        g.build_structure();
        g.unit_images = field
            .units()
            .iter()
            .map(|u| g.lookup(u).expect("units are coprime to everything"))
            .collect();
        g
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn element(&self, idx: usize) -> &ElemK {
        &self.elements[idx]
    }

    pub fn elements(&self) -> &[ElemK] {
        &self.elements
    }

    /// Index of the residue class of z (None if not coprime / not reducible).
    pub fn lookup(&self, z: &ElemK) -> Option<usize> {
        let x = z.x.to_integer();
        let y = z.y.to_integer();
        if !z.x.is_integer() || !z.y.is_integer() {
            return None;
        }
        let (rx, ry) = self.zb.reduce(&x, &y);
        self.index.get(&(rx, ry)).copied()
    }

    /// Index of the class of a possibly non-integral z = u/v with v coprime
    /// to the modulus.
    pub fn lookup_fraction(&self, z: &ElemK) -> Option<usize> {
        if let Some(i) = self.lookup(z) {
            return Some(i);
        }
        // clear denominators: z = u / n with n integer
        let den_x = z.x.denom().clone();
        let den_y = z.y.denom().clone();
        let n = num_integer::lcm(den_x, den_y);
        let nq = num_rational::BigRational::from_integer(n.clone());
        let u = ElemK::new(&z.x * &nq, &z.y * &nq, z.shape);
        let iu = self.lookup(&u)?;
        let in_ = self.lookup(&ElemK::new(
            num_rational::BigRational::from_integer(n),
            num_rational::BigRational::from_integer(BigInt::from(0)),
            z.shape,
        ))?;
        Some(self.mul(iu, self.inv(in_)))
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        let z = self.elements[a].mul(&self.elements[b]);
        self.lookup(&z).expect("product of units is a unit")
    }

    pub fn pow(&self, a: usize, mut e: u64) -> usize {
        let mut acc = self.identity;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: usize) -> usize {
        let n = self.order() as u64;
        let o = self.elem_order(a);
        let _ = n;
        self.pow(a, o - 1)
    }

    pub fn elem_order(&self, a: usize) -> u64 {
        let mut o = 1u64;
        let mut cur = a;
        while cur != self.identity {
            cur = self.mul(cur, a);
            o += 1;
        }
        o
    }

    /// Exponent vector of an element with respect to the basis.
    pub fn dlog(&self, idx: usize) -> &[u64] {
        &self.dlog[idx]
    }

    fn build_structure(&mut self) {
        let n = self.order() as u64;
        if n == 1 {
            self.dlog = vec![vec![]];
            return;
        }
        let mut gens: Vec<usize> = Vec::new();
        let mut orders: Vec<u64> = Vec::new();
        for (q, _) in super::ideal::factor_u64(n) {
            let mut nq = 1u64;
            let mut m = n;
            while m % q == 0 {
                nq *= q;
                m /= q;
            }
            // q-primary component: images of x^(n/nq)
            let proj = n / nq;
            let mut comp: Vec<usize> = (0..self.order())
                .map(|i| self.pow(i, proj))
                .collect();
            comp.sort_unstable();
            comp.dedup();
            let (g2, o2) = self.primary_basis(&comp, q);
            gens.extend(g2);
            orders.extend(o2);
        }
        // full dlog table by direct-product enumeration; verifies bijectivity
        let total: u64 = orders.iter().product();
        assert_eq!(total, n, "basis orders do not multiply to the group order");
        let mut table: Vec<Option<Vec<u64>>> = vec![None; self.order()];
        let mut stack = vec![(self.identity, Vec::<u64>::new())];
        // iterative product enumeration
        fn rec(
            g: &ResidueGroup,
            gens: &[usize],
            orders: &[u64],
            pos: usize,
            cur: usize,
            exps: &mut Vec<u64>,
            table: &mut Vec<Option<Vec<u64>>>,
        ) {
            if pos == gens.len() {
                assert!(table[cur].is_none(), "product map not injective");
                table[cur] = Some(exps.clone());
                return;
            }
            let mut x = cur;
            for e in 0..orders[pos] {
                exps.push(e);
                rec(g, gens, orders, pos + 1, x, exps, table);
                exps.pop();
                x = g.mul(x, gens[pos]);
            }
        }
        stack.clear();
        let mut exps = Vec::new();
        rec(self, &gens, &orders, 0, self.identity, &mut exps, &mut table);
        self.dlog = table
            .into_iter()
            .map(|t| t.expect("product map not surjective"))
            .collect();
        self.gens = gens;
        self.orders = orders;
    }

    /// Greedy basis of a q-primary subgroup given as a sorted element set.
    fn primary_basis(&self, comp: &[usize], q: u64) -> (Vec<usize>, Vec<u64>) {
        let mut gens: Vec<usize> = Vec::new();
        let mut orders: Vec<u64> = Vec::new();
        // subgroup generated so far, with dlogs w.r.t. gens
        let mut sub: HashMap<usize, Vec<u64>> = HashMap::new();
        sub.insert(self.identity, vec![]);
        while sub.len() < comp.len() {
            // element with maximal order in the quotient
            let mut best: Option<(usize, u64)> = None;
            for &x in comp {
                if sub.contains_key(&x) {
                    continue;
                }
                let mut k = 1u64;
                let mut cur = x;
                while !sub.contains_key(&cur) {
                    cur = self.pow(cur, q);
                    k *= q;
                }
                if best.map(|(_, bk)| k > bk).unwrap_or(true) {
                    best = Some((x, k));
                }
            }
            let (x, m) = best.expect("proper subgroup has outsiders");
            // adjust x by generators so that ord(x') = m exactly
            let t = sub[&self.pow(x, m)].clone();
            let mut xp = x;
            for (i, (&g, &d)) in gens.iter().zip(orders.iter()).enumerate() {
                let ti = t[i];
                if ti == 0 {
                    continue;
                }
                let gg = gcd_u64(m, d);
                assert!(ti % gg == 0, "structure adjustment failed");
                // solve m*s = ti (mod d)
                let dq = d / gg;
                let s = mul_inv_mod(m / gg, dq) * ((ti / gg) % dq) % dq;
                let ginv_s = self.pow(self.inv(g), s);
                xp = self.mul(xp, ginv_s);
            }
            debug_assert_eq!(self.elem_order(xp), m);
            gens.push(xp);
            orders.push(m);
            // rebuild subgroup with dlogs
            let mut nsub: HashMap<usize, Vec<u64>> = HashMap::new();
            for (idx, exps) in sub.iter() {
                let mut cur = *idx;
                for e in 0..m {
                    let mut v = exps.clone();
                    v.push(e);
                    nsub.insert(cur, v);
                    cur = self.mul(cur, xp);
                }
            }
            assert_eq!(nsub.len(), sub.len() * m as usize, "not a direct factor");
            sub = nsub;
        }
        (gens, orders)
    }

    /// lcm of the basis orders (group exponent).
    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1u64, |a, &b| lcm_u64(a, b))
    }

    /// All characters of the group.
    pub fn characters(&self) -> Vec<GroupChar> {
        let mut out = Vec::new();
        let mut exps = vec![0u64; self.orders.len()];
        loop {
            out.push(GroupChar { exps: exps.clone(), orders: self.orders.clone() });
            // increment multi-index
            let mut i = 0;
            loop {
                if i == exps.len() {
                    return out;
                }
                exps[i] += 1;
                if exps[i] < self.orders[i] {
                    break;
                }
                exps[i] = 0;
                i += 1;
            }
        }
    }

    /// The subgroup {x = 1 mod q^e', x = 1 mod (f/q-part)} used for
    /// conductor computation: element indices.
    fn congruence_subgroup(&self, field: &FieldK, q: &IdealK, e_target: u32) -> Vec<usize> {
        let full_e = self
            .factorization
            .iter()
            .find(|(p, _)| p == q)
            .map(|(_, e)| *e)
            .expect("prime divides modulus");
        let qpart = q.pow(field, e_target);
        let rest: Option<IdealK> = self
            .factorization
            .iter()
            .filter(|(p, _)| p != q)
            .map(|(p, e)| p.pow(field, *e))
            .fold(None, |acc, i| {
                Some(match acc {
                    None => i,
                    Some(a) => a.mul(field, &i),
                })
            });
        let _ = full_e;
        (0..self.order())
            .filter(|&i| {
                let zm1 = self.elements[i].sub(&ElemK::one(field.shape));
                if zm1.is_zero() {
                    return true;
                }
                let ok_q = e_target == 0 || qpart.contains(&zm1);
                let ok_rest = rest.as_ref().map(|r| r.contains(&zm1)).unwrap_or(true);
                ok_q && ok_rest
            })
            .collect()
    }

    /// Exact conductor of a character: exponents per prime of the modulus.
    pub fn conductor_exponents(&self, field: &FieldK, chi: &GroupChar) -> Vec<(IdealK, u32)> {
        let mut out = Vec::new();
        for (q, e) in &self.factorization {
            let mut e_min = *e;
            while e_min > 0 {
                let sub = self.congruence_subgroup(field, q, e_min - 1);
                if sub.iter().all(|&i| chi.exponent_on(self, i) == 0) {
                    e_min -= 1;
                } else {
                    break;
                }
            }
            if e_min > 0 {
                out.push((q.clone(), e_min));
            }
        }
        out
    }
}

fn mul_inv_mod(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let s = r0 / r1;
        (r0, r1) = (r1, r0 - s * r1);
        (t0, t1) = (t1, t0 - s * t1);
    }
    assert!(r0 == 1);
    t0.rem_euclid(m as i128) as u64
}

/// A character of the residue group, stored by exponents on the basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupChar {
    pub exps: Vec<u64>,
    pub orders: Vec<u64>,
}

impl GroupChar {
    pub fn trivial(group: &ResidueGroup) -> Self {
        GroupChar { exps: vec![0; group.orders.len()], orders: group.orders.clone() }
    }

    pub fn is_trivial(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// Multiplicative order of the character.
    pub fn order(&self) -> u64 {
        self.exps
            .iter()
            .zip(self.orders.iter())
            .fold(1u64, |acc, (&e, &d)| lcm_u64(acc, d / gcd_u64(e, d)))
    }

    /// chi(element idx) as an exponent t: the value is zeta_L^t where
    /// L = group exponent lcm.
    pub fn exponent_on(&self, group: &ResidueGroup, idx: usize) -> u64 {
        let l = group.exponent();
        let v = group.dlog(idx);
        let mut t = 0u64;
        for ((&e, &d), &vi) in self.exps.iter().zip(self.orders.iter()).zip(v.iter()) {
            t = (t + (e % d) * (vi % d) % d * (l / d)) % l;
        }
        t
    }

    /// chi(element) as an exact root of unity.
    pub fn value(&self, group: &ResidueGroup, idx: usize) -> CycNum {
        let l = group.exponent();
        if l == 1 {
            return CycNum::one();
        }
        CycNum::zeta_pow(l, self.exponent_on(group, idx) as i64)
    }

    pub fn mul(&self, rhs: &GroupChar) -> Self {
        assert_eq!(self.orders, rhs.orders);
        GroupChar {
            exps: self
                .exps
                .iter()
                .zip(rhs.exps.iter())
                .zip(self.orders.iter())
                .map(|((&a, &b), &d)| (a + b) % d)
                .collect(),
            orders: self.orders.clone(),
        }
    }

    pub fn inv(&self) -> Self {
        GroupChar {
            exps: self
                .exps
                .iter()
                .zip(self.orders.iter())
                .map(|(&a, &d)| (d - a % d) % d)
                .collect(),
            orders: self.orders.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadfield::ideal::{factor_prime, Splitting};

    fn qi() -> FieldK {
        FieldK::new(4).unwrap()
    }

    fn split5(field: &FieldK) -> (IdealK, IdealK) {
        match factor_prime(field, 5).unwrap() {
            Splitting::Split(a, b) => (a, b),
            _ => panic!(),
        }
    }

    #[test]
    fn trivial_modulus() {
        let k = qi();
        let one = IdealK::one(&k);
        let g = ResidueGroup::new(&k, &one);
        assert_eq!(g.order(), 1);
        assert_eq!(g.characters().len(), 1);
    }

    #[test]
    fn mod_p_is_cyclic_4() {
        let k = qi();
        let (p, _) = split5(&k);
        let g = ResidueGroup::new(&k, &p);
        assert_eq!(g.order(), 4);
        assert_eq!(g.exponent(), 4);
        assert_eq!(g.orders, vec![4]);
    }

    #[test]
    fn mod_p_squared_order_20() {
        let k = qi();
        let (p, _) = split5(&k);
        let g = ResidueGroup::new(&k, &p.pow(&k, 2));
        assert_eq!(g.order(), 20);
        assert_eq!(g.exponent(), 20);
    }

    #[test]
    fn mod_five_structure() {
        let k = qi();
        let five = IdealK::from_gen(&k, &ElemK::from_ints(5, 0, k.shape)).unwrap();
        let g = ResidueGroup::new(&k, &five);
        assert_eq!(g.order(), 16);
        assert_eq!(g.exponent(), 4);
        let mut sorted = g.orders.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![4, 4]);
    }

    #[test]
    fn one_plus_i_cubed() {
        let k = qi();
        let m = IdealK::from_gen(&k, &ElemK::from_ints(1, 1, k.shape).pow(3)).unwrap();
        let g = ResidueGroup::new(&k, &m);
        assert_eq!(g.order(), 4);
        assert_eq!(g.exponent(), 4);
        // the unit group surjects onto it
        let mut imgs = g.unit_images.clone();
        imgs.sort_unstable();
        imgs.dedup();
        assert_eq!(imgs.len(), 4);
    }

    #[test]
    fn character_orthogonality() {
        let k = qi();
        let (p, _) = split5(&k);
        let g = ResidueGroup::new(&k, &p.pow(&k, 2));
        let chars = g.characters();
        assert_eq!(chars.len(), g.order());
        for idx in 0..g.order() {
            let mut s = CycNum::zero();
            for chi in &chars {
                s = s.add(&chi.value(&g, idx));
            }
            let want = if idx == g.identity() {
                CycNum::from_int(g.order() as i64)
            } else {
                CycNum::zero()
            };
            assert_eq!(s, want, "column orthogonality at {idx}");
        }
    }

    #[test]
    fn conductor_detection() {
        let k = qi();
        let (p, pb) = split5(&k);
        let f = p.mul(&k, &pb); // (5)
        let g = ResidueGroup::new(&k, &f);
        let mut seen_primitive = 0;
        for chi in g.characters() {
            let cond = g.conductor_exponents(&k, &chi);
            let total: u32 = cond.iter().map(|(_, e)| e).sum();
            if total == 2 {
                seen_primitive += 1;
            }
            if chi.is_trivial() {
                assert!(cond.is_empty());
            }
        }
        // (Z/4)^2: characters nontrivial on both factors: 3*3 = 9
        assert_eq!(seen_primitive, 9);
    }

    #[test]
    fn fraction_lookup() {
        let k = qi();
        let (p, _) = split5(&k);
        let g = ResidueGroup::new(&k, &p.pow(&k, 2));
        // (3 + i)/2 mod p^2: 2 is invertible
        let z = ElemK::new(
            num_rational::BigRational::new(BigInt::from(3), BigInt::from(2)),
            num_rational::BigRational::new(BigInt::from(1), BigInt::from(2)),
            k.shape,
        );
        let i1 = g.lookup_fraction(&z).unwrap();
        let two = g.lookup(&ElemK::from_ints(2, 0, k.shape)).unwrap();
        let three_plus_i = g.lookup(&ElemK::from_ints(3, 1, k.shape)).unwrap();
        assert_eq!(g.mul(i1, two), three_plus_i);
    }
}
