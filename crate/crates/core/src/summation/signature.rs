//! Fast summation over assignments.
//!
//! After clearing ζ denominators every edge and vertex factor is a
//! polynomial in ζ₁ times powers of `F`, `F̂` (transmission) or `G`
//! (reflection), times a prefactor shared by all assignments with the same
//! number of edges. So an assignment is fully described by a small integer
//! signature: numbers of cross/ii/oo edges, total `q` and `p`, and the
//! untieable vertices by degree and kind. The sweep only counts signatures;
//! series arithmetic happens once per distinct signature afterwards.
//!
//! Assignments are walked in Gray-code order with free bit 0 pinned. The
//! global flip `i ↔ o` maps the other half onto this one with ii/oo and
//! `q`/`p` exchanged, which [`swap`] applies to the counts.

use std::collections::BTreeMap;

use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::algebra::{Poly, Rational, Series, Var};
use crate::basegen::{BaseStructure, Catalogue};
use crate::contrib::{edge_class, sector_counts, untie_class, EdgeClass, Untie};
use crate::trees::TreeFunctions;
use crate::{Quantity, Symmetry};

use super::{free_label, owners, SumError};

pub const MAX_DEGREE: usize = 8;
const MIN_DEGREE: usize = 3;
const BITS: u32 = 5;
const MASK: u128 = (1 << BITS) - 1;

const CROSS: usize = 0;
const II: usize = 1;
const OO: usize = 2;
const Q: usize = 3;
const P: usize = 4;
const UNTIE0: usize = 5;
const LANES: usize = UNTIE0 + 3 * (MAX_DEGREE - MIN_DEGREE + 1);

fn lane(i: usize) -> u128 {
    1u128 << (BITS as usize * i)
}

fn get(key: u128, i: usize) -> u32 {
    ((key >> (BITS as usize * i)) & MASK) as u32
}

fn untie_lane(k: usize, c: usize) -> usize {
    UNTIE0 + 3 * (k - MIN_DEGREE) + c
}

/// Image of a signature under the global `i ↔ o` flip.
pub fn swap(key: u128) -> u128 {
    let mut out = 0u128;
    for i in 0..LANES {
        let j = match i {
            II => OO,
            OO => II,
            Q => P,
            P => Q,
            i if i >= UNTIE0 => {
                let (k, c) = ((i - UNTIE0) / 3, (i - UNTIE0) % 3);
                UNTIE0 + 3 * k + [1, 0, 2][c]
            }
            i => i,
        };
        out |= (get(key, i) as u128) << (BITS as usize * j);
    }
    out
}

struct Layout {
    /// For each free bit: vertex index and position in its cycle.
    site: Vec<(usize, usize)>,
    /// Per vertex: key increment for each mask of its stub bits.
    vtab: Vec<Vec<u128>>,
    /// Per edge: key increment indexed by its two free bits.
    etab: Vec<[u128; 4]>,
}

fn layout(b: &BaseStructure) -> Result<Layout, SumError> {
    let own = owners(b);
    let nu = &b.nu;
    let nbits = 2 * b.m as usize;
    let mut site = vec![None; nbits];
    let mut vtab = Vec::with_capacity(b.vertices.len());
    for (v, rec) in b.vertices.iter().enumerate() {
        let k = rec.degree;
        if k > MAX_DEGREE {
            return Err(SumError::Degree(k));
        }
        let stubs: Vec<_> = rec.half_cycle.iter().map(|&l| own[nu.encode(l).expect("label") as usize]).collect();
        for (pos, o) in stubs.iter().enumerate() {
            assert!(site[o.bit].replace((v, pos)).is_none(), "free bit seen twice");
        }
        let mut tab = Vec::with_capacity(1 << k);
        for mask in 0..1usize << k {
            let labels: Vec<_> = stubs
                .iter()
                .enumerate()
                .map(|(pos, o)| {
                    let l = free_label(o.kind, mask >> pos & 1 == 1);
                    if o.hat { l.hat() } else { l }.tilde()
                })
                .collect();
            let (p, q) = sector_counts(&labels);
            let mut key = q as u128 * lane(Q) + p as u128 * lane(P);
            match untie_class(k, p, q) {
                Untie::None => {}
                Untie::AllII => key += lane(untie_lane(k, 0)),
                Untie::AllOO => key += lane(untie_lane(k, 1)),
                Untie::Mixed => key += lane(untie_lane(k, 2)),
            }
            tab.push(key);
        }
        vtab.push(tab);
    }
    let etab = b
        .edges
        .iter()
        .map(|e| {
            let mut t = [0u128; 4];
            for (idx, slot) in t.iter_mut().enumerate() {
                let c = edge_class(e.kind, free_label(e.kind, idx & 1 == 1), free_label(e.kind, idx & 2 == 2))
                    .expect("free labels fit their edge");
                *slot = match c {
                    EdgeClass::Same => 0,
                    EdgeClass::Cross => lane(CROSS),
                    EdgeClass::II => lane(II),
                    EdgeClass::OO => lane(OO),
                };
            }
            t
        })
        .collect();
    let site = site.into_iter().map(|s| s.expect("every free bit reaches a vertex")).collect();
    Ok(Layout { site, vtab, etab })
}

/// Adds the signatures of the assignments with free bit 0 clear.
fn sweep_half(b: &BaseStructure, counts: &mut FxHashMap<u128, u64>) -> Result<(), SumError> {
    let lay = layout(b)?;
    let nbits = 2 * b.m as usize;
    let mut masks = vec![0usize; lay.vtab.len()];
    let mut bits = 0u64;
    let mut key: u128 = lay.etab.iter().map(|t| t[0]).sum::<u128>() + lay.vtab.iter().map(|t| t[0]).sum::<u128>();
    *counts.entry(key).or_insert(0) += 1;
    for i in 1u64..1 << (nbits - 1) {
        let j = i.trailing_zeros() as usize + 1;
        let e = j / 2;
        let (v, pos) = lay.site[j];
        let old_e = (bits >> (2 * e) & 3) as usize;
        key -= lay.etab[e][old_e] + lay.vtab[v][masks[v]];
        bits ^= 1 << j;
        masks[v] ^= 1 << pos;
        key += lay.etab[e][old_e ^ (1 << (j & 1))] + lay.vtab[v][masks[v]];
        *counts.entry(key).or_insert(0) += 1;
    }
    Ok(())
}

fn expand(half: FxHashMap<u128, u64>) -> FxHashMap<u128, u64> {
    let mut full = FxHashMap::default();
    for (k, c) in half {
        *full.entry(k).or_insert(0) += c;
        *full.entry(swap(k)).or_insert(0) += c;
    }
    full
}

fn merge(mut a: FxHashMap<u128, u64>, b: FxHashMap<u128, u64>) -> FxHashMap<u128, u64> {
    if a.len() < b.len() {
        return merge(b, a);
    }
    for (k, c) in b {
        *a.entry(k).or_insert(0) += c;
    }
    a
}

/// Signature counts of all assignments, grouped by number of edges.
#[derive(Debug, Clone)]
pub struct SignatureTable {
    genus2: u32,
    symmetry: Symmetry,
    per_m: BTreeMap<u32, FxHashMap<u128, u64>>,
}

impl SignatureTable {
    pub fn new(genus2: u32) -> Self {
        Self::with_symmetry(genus2, Symmetry::Orthogonal)
    }

    pub fn with_symmetry(genus2: u32, symmetry: Symmetry) -> Self {
        SignatureTable { genus2, symmetry, per_m: BTreeMap::new() }
    }

    pub fn genus2(&self) -> u32 {
        self.genus2
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn distinct_signatures(&self) -> usize {
        self.per_m.values().map(|m| m.len()).sum()
    }

    /// Total number of assignments counted; `Σ 4^m`.
    pub fn total_assignments(&self) -> u128 {
        self.per_m.values().flat_map(|m| m.values()).map(|&c| c as u128).sum()
    }

    fn check(&self, b: &BaseStructure) -> Result<(), SumError> {
        if b.genus2 != self.genus2 {
            return Err(SumError::Unsupported(format!("structure of 2g={} in a 2g={} table", b.genus2, self.genus2)));
        }
        if self.symmetry == Symmetry::Unitary && !b.orientable {
            return Err(SumError::Unsupported("orthogonal edge in a unitary table".into()));
        }
        super::check_n_exponent(b)
    }

    pub fn add(&mut self, b: &BaseStructure) -> Result<(), SumError> {
        self.check(b)?;
        let mut half = FxHashMap::default();
        sweep_half(b, &mut half)?;
        let entry = self.per_m.remove(&b.m).unwrap_or_default();
        self.per_m.insert(b.m, merge(entry, expand(half)));
        Ok(())
    }

    /// Sweeps every structure of the catalogue, in parallel over structures.
    pub fn add_catalogue(&mut self, cat: &Catalogue) -> Result<(), SumError> {
        for (&m, list) in cat {
            for b in list {
                self.check(b)?;
            }
            let half = list
                .par_iter()
                .try_fold(FxHashMap::default, |mut acc, b| sweep_half(b, &mut acc).map(|_| acc))
                .try_reduce(FxHashMap::default, |a, b| Ok(merge(a, b)))?;
            let entry = self.per_m.remove(&m).unwrap_or_default();
            self.per_m.insert(m, merge(entry, expand(half)));
        }
        Ok(())
    }

    /// Sum of all structures with `m` edges, as a series in `r`.
    pub fn structure_series(&self, m: u32, tf: &TreeFunctions) -> Result<Series, SumError> {
        let Some(counts) = self.per_m.get(&m) else {
            return Ok(Series::zero(Var::R, tf.trunc));
        };
        let v = 1 + m as i64 - self.genus2 as i64;
        let mut coeff: BTreeMap<(usize, usize), Poly> = BTreeMap::new();
        let mut keys: Vec<_> = counts.iter().collect();
        keys.sort_unstable();
        for (&key, &count) in keys {
            let (a, b, poly) = evaluate_key(key, v, tf.quantity);
            if a + b > tf.trunc {
                continue;
            }
            let c = poly.scale_int(&count.into());
            let slot = coeff.entry((a, b)).or_insert_with(Poly::zero);
            *slot = &*slot + &c;
        }
        let one = Series::one(Var::R, tf.trunc);
        let pref = match tf.quantity {
            Quantity::Transmission => &one - &(&tf.h * &tf.h),
            Quantity::Reflection => &one - &(&tf.h_q * &tf.h).mul_poly(&Poly::zeta2().pow(2)),
        }
        .pow(-(m as i64))?;
        let mut fpow = vec![Series::one(Var::R, tf.trunc)];
        let mut gpow = vec![Series::one(Var::R, tf.trunc)];
        let mut sum = Series::zero(Var::R, tf.trunc);
        for ((a, b), c) in coeff {
            if c.is_zero() {
                continue;
            }
            if (a + b) % 2 == 1 {
                return Err(SumError::Parity(a + b));
            }
            while fpow.len() <= a {
                let next = fpow.last().unwrap() * &tf.f_q;
                fpow.push(next);
            }
            while gpow.len() <= b {
                let next = gpow.last().unwrap() * &tf.fhat_q;
                gpow.push(next);
            }
            sum = &sum + &(&fpow[a] * &gpow[b]).mul_poly(&c);
        }
        Ok(&sum * &pref)
    }

    /// `Σ_m (2m)^{-1}` times the sum over structures with `m` edges.
    pub fn integrated(&self, tf: &TreeFunctions) -> Result<Series, SumError> {
        let mut acc = Series::zero(Var::R, tf.trunc);
        for &m in self.per_m.keys() {
            let s = self.structure_series(m, tf)?;
            acc = &acc + &s.scale(&Rational::new(1.into(), (2 * m as i64).into()));
        }
        Ok(acc)
    }
}

/// `(a, b, c)`: the signature contributes `c · F^a F̂^b` (or `c · G^a`)
/// times the shared prefactor.
fn evaluate_key(key: u128, v: i64, quantity: Quantity) -> (usize, usize, Poly) {
    let (cross, ii, oo) = (get(key, CROSS), get(key, II), get(key, OO));
    let (q, p) = (get(key, Q), get(key, P));
    let z1 = Poly::zeta1();
    let z2 = Poly::zeta2();
    let untie_factor = |z: &Poly, k: usize| &z.pow(k as u32) - z;
    let mut poly = Poly::from_int(if v % 2 == 0 { 1 } else { -1 });
    match quantity {
        Quantity::Transmission => {
            if cross % 2 == 1 {
                poly = -&poly;
            }
            poly = &poly * &Poly::xi().pow(cross + ii + oo);
            let (mut eq, mut ep) = (q, p);
            for k in MIN_DEGREE..=MAX_DEGREE {
                let (ui, uo) = (get(key, untie_lane(k, 0)), get(key, untie_lane(k, 1)));
                eq -= ui * k as u32;
                ep -= uo * k as u32;
                if ui > 0 {
                    poly = &poly * &untie_factor(&z2, k).pow(ui);
                }
                if uo > 0 {
                    poly = &poly * &untie_factor(&z1, k).pow(uo);
                }
            }
            poly = &(&poly * &z2.pow(eq)) * &z1.pow(ep);
            let a = (cross + 2 * ii + q) as usize;
            let b = (cross + 2 * oo + p) as usize;
            (a, b, poly)
        }
        Quantity::Reflection => {
            let ns = cross + ii + oo;
            poly = &poly * &Poly::xi().pow(ns);
            let mut e = q + p;
            for k in MIN_DEGREE..=MAX_DEGREE {
                let u: u32 = (0..3).map(|c| get(key, untie_lane(k, c))).sum();
                e -= u * k as u32;
                if u > 0 {
                    poly = &poly * &untie_factor(&z1, k).pow(u);
                }
            }
            poly = &poly * &z1.pow(e);
            ((2 * ns + q + p) as usize, 0, poly)
        }
    }
}
