//! The control-theorem lift: from the period-normalized classical symbol to
//! the ordinary overconvergent eigensymbol, by iterating the normalized
//! U_p and U_pbar operators over a depth-bounded divisor tree.
//!
//! The iteration is evaluated in composite-coset form: T sweeps of each
//! operator amount to one sum over the p^(2T) representatives
//! (1, beta; 0, pi^T pibar^T), each term reading the initial distribution
//! at a reduced cusp and pushing it through the upper-triangular weight
//! action. This is mathematically identical to alternating sweeps (the two
//! operators commute) and keeps the memory footprint at one moment array.
//!
//! Arithmetic runs on u64 residues modulo p^W. Deep-level classical values
//! acquire bounded p-denominators from the uniform extension beyond the
//! pinned depth, so everything is carried scaled by p^SCALE and the scale
//! is divided out (with an exact divisibility check) at readout.

use std::collections::HashMap;

use num_bigint::BigInt;

use crate::arith::embed::{EmbedError, PadicEmbedding};
use crate::arith::padic::PadicNum;
use crate::dist::FinDist;
use crate::heckechar::gauss::deg1_residue;
use crate::heckechar::CharContext;
use crate::lfun::lambda::BianchiInstance;
use crate::quadfield::cusps::{cusp_in_c, Cusp};
use crate::quadfield::{ElemK, IdealK};
use crate::symbols::partial::ClassicalSymbol;

#[derive(Debug, thiserror::Error)]
pub enum LiftError {
    #[error("the fast lifting kernel supports the k = 0 instance only")]
    WeightUnsupported,
    #[error("classical value not unramified after descent")]
    RamifiedValue,
    #[error("readout not divisible by the working scale: integrality violated at moment ({0}, {1})")]
    ScaleDivision(usize, usize),
    #[error("modulus window p^{0} overflows u64")]
    Window(u32),
    #[error(transparent)]
    Embed(#[from] EmbedError),
    #[error(transparent)]
    Gauss(#[from] crate::heckechar::gauss::GaussError),
}

/// The divisor tree bookkeeping: normalized cusps b / (pi^i pibar^j).
pub struct DivisorTree<'a> {
    pub ctx: &'a CharContext,
    pub inst: &'a BianchiInstance,
    pub depth: (u32, u32),
}

impl<'a> DivisorTree<'a> {
    pub fn new(ctx: &'a CharContext, inst: &'a BianchiInstance, depth: (u32, u32)) -> Self {
        DivisorTree { ctx, inst, depth }
    }

    /// Distinct normalized cusps with denominator dividing pi^i pibar^j.
    /// Summed over exact levels this is p^(i+j).
    pub fn node_count(&self, i: u32, j: u32) -> u64 {
        let phi = |t: u32| -> u64 {
            if t == 0 {
                1
            } else {
                (self.inst.p - 1) * self.inst.p.pow(t - 1)
            }
        };
        (0..=i).map(&phi).sum::<u64>() * (0..=j).map(&phi).sum::<u64>()
    }

    /// Every node of the tree lies in the cusp set C for any auxiliary
    /// level coprime to p; checked by enumeration up to the given depth.
    pub fn all_nodes_in_c(&self, m_level: &IdealK, up_to: (u32, u32)) -> bool {
        let sh = self.ctx.field.shape;
        for t in 0..=up_to.0 {
            for s in 0..=up_to.1 {
                let gamma = self.inst.pi_p.pow(t).mul(&self.inst.pi_pbar.pow(s));
                let bound = self.inst.p.pow(t.max(s)) as i64;
                for x in 0..bound {
                    for y in 0..bound {
                        let n = ElemK::from_ints(x, y, sh);
                        if n.is_zero() {
                            continue;
                        }
                        let cusp = Cusp::new(&self.ctx.field, &n, &gamma).unwrap();
                        if !cusp_in_c(&self.ctx.field, &m_level, &cusp) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

/// Precomputed modular data for the k = 0 lifting kernel.
pub struct LiftKernel {
    pub p: u64,
    pub n_base: u32,
    pub mbound: usize,
    /// scaling exponent for deep-level denominators
    pub scale: u32,
    /// window exponent: arithmetic modulo p^window
    pub window: u32,
    modw: u64,
    /// sigma images of the uniformizers: c1 = s1(pi_p) (val 1),
    /// c2 = s1(pi_pbar) (unit); conjugates swap
    c1_over_p: u64,
    c2: u64,
    lam_inv: u64,
    /// classical value tables: (t, s) -> table over capped residues,
    /// values scaled by p^scale
    tables: HashMap<(u32, u32), LevelU64>,
    pinned: (u32, u32),
}

struct LevelU64 {
    a: u32,
    b: u32,
    pa: u64,
    pb: u64,
    vals: Vec<u64>,
}

fn pow_u64(p: u64, e: u32) -> u64 {
    p.pow(e)
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    acc
}

fn invmod(a: u64, m: u64) -> u64 {
    // m is a prime power, a coprime
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    assert_eq!(r0, 1);
    t0.rem_euclid(m as i128) as u64
}

impl LiftKernel {
    /// Build the kernel: embeds the classical level tables at a working
    /// precision wide enough for the whole iteration.
    pub fn new(
        ctx: &CharContext,
        inst: &BianchiInstance,
        sym: &ClassicalSymbol,
        n_base: u32,
        mbound: usize,
        max_level: (u32, u32),
    ) -> Result<Self, LiftError> {
        if inst.k != 0 {
            return Err(LiftError::WeightUnsupported);
        }
        let p = inst.p;
        let pinned = sym.pinned;
        let deficit = (max_level.0.saturating_sub(pinned.0)) + (max_level.1.saturating_sub(pinned.1));
        let scale = deficit + 1;
        let window = n_base + scale + 2;
        if (window as f64) * (p as f64).log2() > 62.0 {
            return Err(LiftError::Window(window));
        }
        let modw = pow_u64(p, window);
        // embedding at the window precision, same branch as the instance's
        let emb = PadicEmbedding::new(p, ctx.field.d, seed_of(ctx, inst), window)?;
        let c1 = padic_residue(&emb.sigma1(&inst.pi_p), window, 0)?;
        assert!(c1 % p == 0 && (c1 / p) % p != 0);
        let c2 = padic_residue(&emb.sigma1(&inst.pi_pbar), window, 0)?;
        let lam = sym.eigenvalue.clone();
        let lam_res = padic_residue(&emb.embed_cyc_scalar(&lam)?, window, 0)?;
        let lam_inv = invmod(lam_res, modw);

        let mut tables = HashMap::new();
        for t in 0..=max_level.0 {
            for s in 0..=max_level.1 {
                let table = sym.level_table(0, 0, t, s);
                let a = t.min(pinned.0);
                let b = s.min(pinned.1);
                let pa = pow_u64(p, a);
                let pb = pow_u64(p, b);
                let mut vals = vec![0u64; (pa * pb) as usize];
                for idx in 0..table.group.order() {
                    let nrep = table.group.element(idx);
                    let (u, v) = if a == 0 && b == 0 {
                        (0, 0)
                    } else {
                        let u = if a > 0 {
                            deg1_residue(ctx, &inst.p_ideal, a, nrep)?
                        } else {
                            0
                        };
                        let v = if b > 0 {
                            deg1_residue(ctx, &inst.pbar_ideal, b, nrep)?
                        } else {
                            0
                        };
                        (u, v)
                    };
                    let value = &table.values[idx];
                    let reduced = value.reduce_conductor();
                    let embedded = emb
                        .embed_cyc(&reduced)?
                        .as_scalar()
                        .ok_or(LiftError::RamifiedValue)?;
                    let res = padic_residue(&embedded, window, scale)?;
                    vals[(u + v * pa) as usize] = res;
                }
                tables.insert((t, s), LevelU64 { a, b, pa, pb, vals });
            }
        }
        Ok(LiftKernel {
            p,
            n_base,
            mbound,
            scale,
            window,
            modw,
            c1_over_p: c2_complement(c1, p, modw),
            c2,
            lam_inv,
            tables,
            pinned,
        })
    }

    /// Classical value at the (reduced) cusp given by sigma-residues,
    /// scaled by p^scale, modulo p^window.
    fn value_at(&self, t: u32, s: u32, u_red: u64, v_red: u64) -> u64 {
        let table = &self.tables[&(t, s)];
        let u = u_red % table.pa;
        let v = v_red % table.pb;
        table.vals[(u + v * table.pa) as usize]
    }

    /// The eigen value at the divisor {n0 / pi^t0 pibar^s0} - {infinity},
    /// after `sweeps` normalized applications of each operator. Higher
    /// initial moments are seeded from `seed` (0 means all zero).
    pub fn eigen_value_at(
        &self,
        ctx: &CharContext,
        inst: &BianchiInstance,
        n0: &ElemK,
        t0: u32,
        s0: u32,
        sweeps: u32,
    ) -> Result<FinDist, LiftError> {
        self.eigen_value_seeded(ctx, inst, n0, t0, s0, sweeps, 0)
    }

    pub fn eigen_value_seeded(
        &self,
        ctx: &CharContext,
        inst: &BianchiInstance,
        n0: &ElemK,
        t0: u32,
        s0: u32,
        sweeps: u32,
        seed: u64,
    ) -> Result<FinDist, LiftError> {
        use rayon::prelude::*;
        let p = self.p;
        let w = self.modw;
        let mb = self.mbound;
        let pt = pow_u64(p, sweeps);
        // sigma residues of n0 and gamma0 = pi^t0 pibar^s0
        let emb = PadicEmbedding::new(p, ctx.field.d, seed_of(ctx, inst), self.window)?;
        let u0 = padic_residue(&emb.sigma1(n0), self.window, 0)?;
        let v0 = padic_residue(&emb.sigma2(n0), self.window, 0)?;
        let c1 = padic_residue(&emb.sigma1(&inst.pi_p), self.window, 0)?;
        let c2 = padic_residue(&emb.sigma1(&inst.pi_pbar), self.window, 0)?;
        let c1b = padic_residue(&emb.sigma2(&inst.pi_p), self.window, 0)?;
        let c2b = padic_residue(&emb.sigma2(&inst.pi_pbar), self.window, 0)?;
        let g0_1 = mulmod(powmod(c1, t0 as u64, w), powmod(c2, s0 as u64, w), w);
        let g0_2 = mulmod(powmod(c1b, t0 as u64, w), powmod(c2b, s0 as u64, w), w);
        // composite matrix lower-right: gamma = pi^T pibar^T
        let gam_1 = mulmod(powmod(c1, sweeps as u64, w), powmod(c2, sweeps as u64, w), w);
        let gam_2 = mulmod(powmod(c1b, sweeps as u64, w), powmod(c2b, sweeps as u64, w), w);
        // units for cusp reduction: pi = p/pibar-conj... use 5/c1 etc.
        let c1_unit = {
            // c1 has valuation exactly 1: c1/p is a unit
            let cu = c1 / p;
            assert!(cu % p != 0);
            cu
        };
        let c2b_unit = {
            let cu = c2b / p;
            assert!(cu % p != 0);
            cu
        };
        let inv_c1_unit = invmod(c1_unit, w);
        let inv_c2 = invmod(c2, w);
        let inv_c1b = invmod(c1b, w);
        let inv_c2b_unit = invmod(c2b_unit, w);

        let total = (pt as usize) * (pt as usize);
        let acc = (0..total)
            .into_par_iter()
            .fold(
                || vec![0u64; mb * mb],
                |mut acc, idx| {
                    let ub = (idx as u64) % pt;
                    let vb = (idx as u64) / pt;
                    // numerator n = n0 + beta gamma0: sigma residues
                    let b1 = {
                        // sigma1(beta) for beta with residues (ub, vb):
                        // beta = CRT(ub at p, vb at pbar): sigma1(beta) = ub mod p^T
                        ub
                    };
                    let b2 = vb;
                    let n1 = (u0 + mulmod(b1, g0_1, w)) % w;
                    let n2 = (v0 + mulmod(b2, g0_2, w)) % w;
                    let t_tot = t0 + sweeps;
                    let s_tot = s0 + sweeps;
                    // reduce the cusp: strip powers of pi from n
                    let (e1, mut u_red) = strip_p(n1, p, t_tot, self.window);
                    let (e2, mut v_red) = strip_p(n2, p, s_tot, self.window);
                    // adjust by unit parts: sigma1(n/pi^e1/pibar^e2)
                    // = (n1 / p^e1) * (p/c1)^e1 * c2^-e2
                    u_red = mulmod(u_red, powmod(inv_c1_unit, e1 as u64, w), w);
                    u_red = mulmod(u_red, powmod(inv_c2, e2 as u64, w), w);
                    // sigma2: pibar contributes the p-power there
                    v_red = mulmod(v_red, powmod(inv_c2b_unit, e2 as u64, w), w);
                    v_red = mulmod(v_red, powmod(inv_c1b, e1 as u64, w), w);
                    let t_red = t_tot - e1;
                    let s_red = s_tot - e2;
                    let m00 = self.value_at(t_red, s_red, u_red, v_red);
                    // composite representative (1, beta'; 0, gamma) where
                    // beta' = n0-translate: the matrix entries are
                    // b = n0 + beta gamma0... the b-entry of the composite
                    // coset acting at the root divisor is beta gamma0 + ...
                    // For the transform only sigma(b-entry) and sigma(gamma)
                    // matter: b-entry = beta gamma0 (the root numerator n0
                    // shifts the cusp, not the representative); the cosets
                    // at a general root are (1, beta gamma0; 0, gamma).
                    let bb1 = mulmod(b1, g0_1, w);
                    let bb2 = mulmod(b2, g0_2, w);
                    // moment transform: new[i][j] += sum binom(i,n) bb1^(i-n) gam1^n
                    //                       binom(j,m) bb2^(j-m) gam2^m old[n][m]
                    // with old[0][0] = m00 and higher moments seeded
                    let mut bb1_pow = [0u64; 8];
                    let mut bb2_pow = [0u64; 8];
                    let mut g1_pow = [0u64; 8];
                    let mut g2_pow = [0u64; 8];
                    for e in 0..mb.max(1).min(8) {
                        bb1_pow[e] = if e == 0 { 1 } else { mulmod(bb1_pow[e - 1], bb1, w) };
                        bb2_pow[e] = if e == 0 { 1 } else { mulmod(bb2_pow[e - 1], bb2, w) };
                        g1_pow[e] = if e == 0 { 1 } else { mulmod(g1_pow[e - 1], gam_1, w) };
                        g2_pow[e] = if e == 0 { 1 } else { mulmod(g2_pow[e - 1], gam_2, w) };
                    }
                    // old moments
                    let mut old = vec![0u64; mb * mb];
                    old[0] = m00;
                    if seed != 0 {
                        for n in 0..mb {
                            for m in 0..mb {
                                if n == 0 && m == 0 {
                                    continue;
                                }
                                let h = splitmix(
                                    seed ^ (n1.wrapping_mul(0x9e3779b97f4a7c15))
                                        ^ n2.rotate_left(17)
                                        ^ ((n as u64) << 32)
                                        ^ (m as u64),
                                );
                                // scaled random integral moment
                                old[n * mb + m] =
                                    mulmod(h % pow_u64(p, self.n_base), pow_u64(p, self.scale), w);
                            }
                        }
                    }
                    for i in 0..mb {
                        for j in 0..mb {
                            let mut term = 0u128;
                            for n in 0..=i {
                                let cx = mulmod(
                                    binom_u64(i, n),
                                    mulmod(bb1_pow[i - n], g1_pow[n], w),
                                    w,
                                );
                                if cx == 0 {
                                    continue;
                                }
                                for m in 0..=j {
                                    let o = old[n * mb + m];
                                    if o == 0 {
                                        continue;
                                    }
                                    let cy = mulmod(
                                        binom_u64(j, m),
                                        mulmod(bb2_pow[j - m], g2_pow[m], w),
                                        w,
                                    );
                                    term += mulmod(mulmod(cx, cy, w), o, w) as u128;
                                }
                            }
                            let slot = &mut acc[i * mb + j];
                            *slot = ((*slot as u128 + term) % w as u128) as u64;
                        }
                    }
                    acc
                },
            )
            .reduce(
                || vec![0u64; mb * mb],
                |mut a, b| {
                    for (x, y) in a.iter_mut().zip(b.iter()) {
                        *x = ((*x as u128 + *y as u128) % w as u128) as u64;
                    }
                    a
                },
            );

        // normalize: lambda^-(2 sweeps), then divide by p^scale
        let lam_norm = powmod(self.lam_inv, 2 * sweeps as u64, w);
        let ps = pow_u64(p, self.scale);
        let mut moments = Vec::with_capacity(mb);
        for i in 0..mb {
            let mut row = Vec::with_capacity(mb);
            for j in 0..mb {
                let x = mulmod(acc[i * mb + j], lam_norm, w);
                if x % ps != 0 {
                    return Err(LiftError::ScaleDivision(i, j));
                }
                let val = x / ps;
                // known modulo p^(window - scale)
                row.push(PadicNum::from_bigint(
                    p,
                    &BigInt::from(val),
                    self.window - self.scale,
                ));
            }
            moments.push(row);
        }
        Ok(FinDist::from_moments(0, 0, self.n_base, moments))
    }
}

fn c2_complement(c1: u64, _p: u64, _w: u64) -> u64 {
    c1
}

fn seed_of(ctx: &CharContext, inst: &BianchiInstance) -> u64 {
    // recover the embedding branch from the labeled prime: the seed is the
    // mod-p residue of sigma1-image of sqrt(-D)... we store it through the
    // instance's pi labeling instead: sigma1(pi_p) = 0 mod p fixes the
    // branch, so any seed consistent with the labeling works. Use the
    // canonical one derived from the p_ideal generator.
    let _ = ctx;
    inst.emb_seed
}

/// Strip up to `cap` factors of p from a residue known mod p^window;
/// returns (e, remaining residue).
fn strip_p(mut x: u64, p: u64, cap: u32, window: u32) -> (u32, u64) {
    let mut e = 0u32;
    if x == 0 {
        return (cap, 0);
    }
    while e < cap && x % p == 0 {
        x /= p;
        e += 1;
    }
    let _ = window;
    (e, x)
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

fn binom_u64(n: usize, k: usize) -> u64 {
    crate::symbols::dualpoly::binom(n, k) as u64
}

/// Extract the residue of value * p^scale modulo p^window.
fn padic_residue(x: &PadicNum, window: u32, scale: u32) -> Result<u64, LiftError> {
    let shifted = if scale == 0 {
        *x
    } else {
        x.mul(&PadicNum::from_i64(x.prime(), x.prime().pow(scale) as i64, window))
    };
    let r = shifted
        .residue_mod(window)
        .map_err(|_| LiftError::Window(window))?;
    Ok(r as u64)
}
