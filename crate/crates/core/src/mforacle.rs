//! Ground-truth stable Hom dimensions from L-graded matrix factorizations of
//! `f = sum X_i^{p_i}` over the polynomial ring `S`.
//!
//! A factorization is a list of free generators, each with a parity and an L-degree,
//! and an odd differential `d` with `d o d = f`. The matrix entry from generator `u` to
//! generator `v` is homogeneous of degree `deg u - deg v`, plus `c` when `u` is even.
//! The associated CM module is the cokernel of the odd-to-even part, so the rank-one
//! factorization `(X_i^a, X_i^{p_i - a})` realizes `k[X_i]/(X_i^a)` and tensor products
//! realize the cuboid modules `E^l`.
//!
//! Unfolded, generator `u` sits in homological positions `2k + parity(u)` with degree
//! `deg u + kc`; the differential lowers the position. Stable Homs are the degree-0
//! cohomology of the Hom complex between the unfolded complexes.

use crate::error::{Error, Result};
use crate::grading::{GradeElement, WeightSystem};
use crate::linalg::{Field, SparseMatrix};
use crate::stable::{hom_dim, HomAnswer, StableObject};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};

/// Monomial of `S` packed at 8 bits per variable.
pub type Mono = u64;

const BITS: u32 = 8;

pub fn pack(exps: &[u32]) -> Mono {
    assert!(exps.len() * BITS as usize <= 64, "at most 8 variables");
    exps.iter().enumerate().fold(0, |acc, (i, &e)| {
        assert!(e < 256, "exponent {e} too large to pack");
        acc | (e as u64) << (BITS * i as u32)
    })
}

pub fn unpack(m: Mono, n: usize) -> Vec<u32> {
    (0..n).map(|i| ((m >> (BITS * i as u32)) & 0xff) as u32).collect()
}

fn mono_mul(a: Mono, b: Mono, n: usize) -> Mono {
    let ea = unpack(a, n);
    let eb = unpack(b, n);
    pack(&ea.iter().zip(&eb).map(|(x, y)| x + y).collect::<Vec<_>>())
}

/// Sparse polynomial with integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly(pub BTreeMap<Mono, i64>);

impl Poly {
    pub fn monomial(m: Mono, c: i64) -> Self {
        let mut p = BTreeMap::new();
        if c != 0 {
            p.insert(m, c);
        }
        Poly(p)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add_assign(&mut self, other: &Poly) {
        for (&m, &c) in &other.0 {
            let e = self.0.entry(m).or_insert(0);
            *e += c;
            if *e == 0 {
                self.0.remove(&m);
            }
        }
    }

    pub fn mul(&self, other: &Poly, n: usize) -> Poly {
        let mut out = Poly::default();
        for (&a, &ca) in &self.0 {
            for (&b, &cb) in &other.0 {
                out.add_assign(&Poly::monomial(mono_mul(a, b, n), ca * cb));
            }
        }
        out
    }

    pub fn scale(&self, k: i64) -> Poly {
        Poly(self.0.iter().map(|(&m, &c)| (m, c * k)).filter(|(_, c)| *c != 0).collect())
    }
}

/// Free generator of a factorization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub odd: bool,
    pub degree: GradeElement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMF {
    pub weights: WeightSystem,
    pub gens: Vec<Generator>,
    /// `d[u]` lists `(v, poly)` with `d(e_u) = sum poly * e_v`.
    pub d: Vec<Vec<(usize, Poly)>>,
    /// The potential `g` with `d o d = g`.
    pub potential: Poly,
}

fn degree_of(w: &WeightSystem, m: Mono) -> GradeElement {
    let e: Vec<i64> = unpack(m, w.n()).into_iter().map(i64::from).collect();
    w.normalize(&e, 0)
}

impl GradedMF {
    /// Checks `d o d = potential` and entry homogeneity.
    pub fn check(&self) -> Result<()> {
        let n = self.weights.n();
        for (u, row) in self.d.iter().enumerate() {
            for (v, poly) in row {
                if self.gens[*v].odd == self.gens[u].odd {
                    return Err(Error::Relation(format!("differential preserves parity at {u}->{v}")));
                }
                let mut want = self.gens[u].degree.sub(&self.gens[*v].degree);
                if !self.gens[u].odd {
                    want = want.add_c(1);
                }
                for &m in poly.0.keys() {
                    if degree_of(&self.weights, m) != want {
                        return Err(Error::Relation(format!("inhomogeneous entry at {u}->{v}")));
                    }
                }
            }
        }
        for u in 0..self.gens.len() {
            let mut acc: BTreeMap<usize, Poly> = BTreeMap::new();
            for (v, p1) in &self.d[u] {
                for (w2, p2) in &self.d[*v] {
                    acc.entry(*w2).or_default().add_assign(&p1.mul(p2, n));
                }
            }
            acc.entry(u).or_default();
            for (w2, poly) in acc {
                let expect = if w2 == u { self.potential.clone() } else { Poly::default() };
                if poly != expect {
                    return Err(Error::Relation(format!("d o d differs from the potential at {u}->{w2}")));
                }
            }
        }
        Ok(())
    }

    /// Rank-one factorization `(X_i^a, X_i^{p_i - a})`.
    pub fn rank1(w: &WeightSystem, i: usize, a: i64) -> Result<Self> {
        let p = w.p()[i];
        if a < 1 || a > p - 1 {
            return Err(Error::OutOfRange(format!("rank-one exponent {a} outside [1, {}]", p - 1)));
        }
        let n = w.n();
        let mut ea = vec![0u32; n];
        ea[i] = a as u32;
        let mut eb = vec![0u32; n];
        eb[i] = (p - a) as u32;
        let mut ef = vec![0u32; n];
        ef[i] = p as u32;
        let mf = GradedMF {
            weights: w.clone(),
            gens: vec![
                Generator { odd: false, degree: w.zero() },
                Generator { odd: true, degree: w.x_mul(i, a) },
            ],
            d: vec![vec![(1, Poly::monomial(pack(&eb), 1))], vec![(0, Poly::monomial(pack(&ea), 1))]],
            potential: Poly::monomial(pack(&ef), 1),
        };
        mf.check()?;
        Ok(mf)
    }

    /// Graded tensor product with the Koszul sign on the right factor.
    pub fn tensor(&self, other: &GradedMF) -> Result<Self> {
        if self.weights != other.weights {
            return Err(Error::WeightMismatch(self.weights.to_string(), other.weights.to_string()));
        }
        let w = &self.weights;
        let m = other.gens.len();
        let mut gens = Vec::new();
        for a in &self.gens {
            for b in &other.gens {
                let mut deg = a.degree.add(&b.degree);
                if a.odd && b.odd {
                    deg = deg.add_c(-1);
                }
                gens.push(Generator { odd: a.odd ^ b.odd, degree: deg });
            }
        }
        let mut d = vec![Vec::new(); gens.len()];
        for (ia, a) in self.gens.iter().enumerate() {
            for ib in 0..m {
                let row = &mut d[ia * m + ib];
                for (va, pa) in &self.d[ia] {
                    row.push((va * m + ib, pa.clone()));
                }
                let sign = if a.odd { -1 } else { 1 };
                for (vb, pb) in &other.d[ib] {
                    row.push((ia * m + vb, pb.scale(sign)));
                }
            }
        }
        let mut potential = self.potential.clone();
        potential.add_assign(&other.potential);
        let mf = GradedMF { weights: w.clone(), gens, d, potential };
        mf.check()?;
        Ok(mf)
    }

    /// Twist `(y)`: every generator degree drops by `y`.
    pub fn twist(&self, y: &GradeElement) -> Self {
        let mut out = self.clone();
        for g in &mut out.gens {
            g.degree = g.degree.sub(y);
        }
        out
    }

    /// Suspension `[m]`. One step sends odd generators to even ones of degree `- c`,
    /// even generators to odd ones of the same degree, and negates `d`.
    pub fn shift(&self, m: i64) -> Self {
        let mut out = self.clone();
        let steps = m.rem_euclid(2);
        let folds = (m - steps) / 2;
        if steps == 1 {
            for g in &mut out.gens {
                if g.odd {
                    g.degree = g.degree.add_c(-1);
                }
                g.odd = !g.odd;
            }
            for row in &mut out.d {
                for (_, p) in row.iter_mut() {
                    *p = p.scale(-1);
                }
            }
        }
        // [2] is the twist by c
        out.twist(&self.weights.c().scale(folds))
    }
}

/// Factorization of `U^l(y)[k]`, realized as the tensor of the rank-one pieces for `l`.
pub fn mf_of(obj: &StableObject) -> Option<GradedMF> {
    let u = obj.as_u()?;
    let w = u.ell.weights();
    let mut mf = GradedMF::rank1(w, 0, u.ell.coeff(0)).expect("valid cuboid parameter");
    for i in 1..w.n() {
        mf = mf.tensor(&GradedMF::rank1(w, i, u.ell.coeff(i)).expect("valid")).expect("tensor");
    }
    let mf = mf.twist(&u.twist).shift(u.shift);
    mf.check().expect("twist and shift keep the factorization");
    Some(mf)
}

/// Basis of the degree-0 part of `Hom^t(F, G)`: entries `u -> v` with a monomial.
struct HomBasis {
    elems: Vec<(usize, usize, Mono)>,
    index: HashMap<(usize, usize, Mono), usize>,
}

fn hom_basis(f: &GradedMF, g: &GradedMF, t: i64, cache: &mut HashMap<GradeElement, Vec<Mono>>) -> HomBasis {
    let mut elems = Vec::new();
    for (iu, u) in f.gens.iter().enumerate() {
        for (iv, v) in g.gens.iter().enumerate() {
            let pu = i64::from(u.odd);
            let pv = i64::from(v.odd);
            if (pu + t - pv).rem_euclid(2) != 0 {
                continue;
            }
            let deg = u.degree.sub(&v.degree).add_c((pv - pu - t) / 2);
            let mons = cache.entry(deg.clone()).or_insert_with(|| {
                deg.monomials_s().iter().map(|e| pack(e)).collect()
            });
            for &m in mons.iter() {
                elems.push((iu, iv, m));
            }
        }
    }
    let index = elems.iter().enumerate().map(|(i, e)| (*e, i)).collect();
    HomBasis { elems, index }
}

/// Matrix of `D(h) = d_G h - (-1)^t h d_F` from `Hom^t` to `Hom^{t-1}`.
fn hom_differential(f: &GradedMF, g: &GradedMF, t: i64, src: &HomBasis, tgt: &HomBasis) -> SparseMatrix {
    let n = f.weights.n();
    // incoming arrows of d_F: for each u, the list of (u', poly) with d(e_u') containing e_u
    let mut into: Vec<Vec<(usize, &Poly)>> = vec![Vec::new(); f.gens.len()];
    for (u2, row) in f.d.iter().enumerate() {
        for (u, p) in row {
            into[*u].push((u2, p));
        }
    }
    let sign_t = if t.rem_euclid(2) == 0 { 1 } else { -1 };
    // assemble by columns, then transpose into rows
    let mut rows: Vec<Vec<(usize, i64)>> = vec![Vec::new(); tgt.elems.len()];
    for (col, &(u, v, m)) in src.elems.iter().enumerate() {
        for (w2, pg) in &g.d[v] {
            for (&mg, &cg) in &pg.0 {
                let key = (u, *w2, mono_mul(m, mg, n));
                let r = *tgt.index.get(&key).expect("image lands in the target basis");
                rows[r].push((col, cg));
            }
        }
        for (u2, pf) in &into[u] {
            for (&mf, &cf) in &pf.0 {
                let key = (*u2, v, mono_mul(m, mf, n));
                let r = *tgt.index.get(&key).expect("image lands in the target basis");
                rows[r].push((col, -sign_t * cf));
            }
        }
    }
    let mut s = SparseMatrix::new(src.elems.len());
    for r in rows {
        s.push_row(r);
    }
    s
}

/// `dim Hom(F, G[m])` in the stable category.
pub fn stable_hom_dim_oracle(f: &GradedMF, g: &GradedMF, m: i64, field: Field) -> Result<usize> {
    if f.weights != g.weights {
        return Err(Error::WeightMismatch(f.weights.to_string(), g.weights.to_string()));
    }
    let g = g.shift(m);
    let mut cache = HashMap::new();
    let b1 = hom_basis(f, &g, 1, &mut cache);
    let b0 = hom_basis(f, &g, 0, &mut cache);
    let bm1 = hom_basis(f, &g, -1, &mut cache);
    let d1 = hom_differential(f, &g, 1, &b1, &b0);
    let d0 = hom_differential(f, &g, 0, &b0, &bm1);
    Ok(b0.elems.len() - d0.rank(field) - d1.rank(field))
}

/// Checks that consecutive Hom-complex differentials compose to zero.
pub fn hom_complex_is_complex(f: &GradedMF, g: &GradedMF) -> bool {
    let mut cache = HashMap::new();
    let b1 = hom_basis(f, g, 1, &mut cache);
    let b0 = hom_basis(f, g, 0, &mut cache);
    let bm1 = hom_basis(f, g, -1, &mut cache);
    let d1 = hom_differential(f, g, 1, &b1, &b0);
    let d0 = hom_differential(f, g, 0, &b0, &bm1);
    // (d0 d1)[r][c] = sum_k d0[r][k] d1[k][c]
    let mut d1_rows: Vec<&Vec<(usize, i64)>> = Vec::new();
    for r in &d1.rows {
        d1_rows.push(r);
    }
    for r in &d0.rows {
        let mut acc: HashMap<usize, i64> = HashMap::new();
        for &(k, a) in r {
            for &(c, b) in d1_rows[k] {
                *acc.entry(c).or_insert(0) += a * b;
            }
        }
        if acc.values().any(|&v| v != 0) {
            return false;
        }
    }
    true
}

/// `dim Hom(A, B)` for stable objects through their factorizations.
pub fn oracle_hom(a: &StableObject, b: &StableObject, field: Field) -> Result<usize> {
    match (mf_of(a), mf_of(b)) {
        (Some(fa), Some(fb)) => stable_hom_dim_oracle(&fa, &fb, 0, field),
        _ => Ok(0),
    }
}

/// Probe set: cuboid objects twisted by `[-s, s]` at shifts 0 and 1.
pub fn probes(w: &WeightSystem) -> Vec<StableObject> {
    let n = w.n();
    let hi: Vec<i64> = w.p().iter().map(|p| p - 1).collect();
    let mut out = Vec::new();
    for ell in w.box_elements(&vec![1; n], &hi) {
        for y in w.symmetric_window() {
            for k in 0..2 {
                out.push(StableObject::u(ell.clone(), y.clone(), k).expect("valid"));
            }
        }
    }
    out
}

/// Hom dimensions in both directions against every probe, keyed by the probe text.
pub fn hom_profile(obj: &StableObject, field: Field) -> Result<BTreeMap<String, (usize, usize)>> {
    let mut out = BTreeMap::new();
    for pr in probes(obj.weights()) {
        let out_dim = oracle_hom(obj, &pr, field)?;
        let in_dim = oracle_hom(&pr, obj, field)?;
        out.insert(pr.to_string(), (out_dim, in_dim));
    }
    Ok(out)
}

/// Window of an audit: twists are `[-s, s]` shifted by `levels * c`, then every shift.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct AuditWindow {
    pub levels: (i64, i64),
    pub shifts: (i64, i64),
}

impl Default for AuditWindow {
    fn default() -> Self {
        AuditWindow { levels: (-2, 2), shifts: (-4, 4) }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditMismatch {
    pub source: String,
    pub target: String,
    pub calculus: usize,
    pub oracle: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditReport {
    pub weights: String,
    pub window: AuditWindow,
    pub pairs: usize,
    pub agreements: usize,
    pub unknown: usize,
    pub unknown_rate: f64,
    pub disagreements: Vec<AuditMismatch>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.disagreements.is_empty() && self.unknown_rate < 0.2
    }
}

/// Compares [`hom_dim`] with the oracle on cuboid sources against twisted and shifted
/// cuboid targets. Unknown calculus answers are counted, not compared.
pub fn audit(w: &WeightSystem, window: AuditWindow, field: Field) -> Result<AuditReport> {
    let n = w.n();
    let hi: Vec<i64> = w.p().iter().map(|p| p - 1).collect();
    let cuboid: Vec<StableObject> =
        w.box_elements(&vec![1; n], &hi).iter().map(|e| StableObject::cuboid(e).expect("valid")).collect();
    let mut twists = std::collections::BTreeSet::new();
    for y in w.symmetric_window() {
        for k in window.levels.0..=window.levels.1 {
            twists.insert(y.add_c(k));
        }
    }
    let twists: Vec<GradeElement> = twists.into_iter().collect();
    let (nc, nt) = (cuboid.len(), twists.len());
    let jobs: Vec<(usize, usize, usize)> =
        (0..nc).flat_map(|a| (0..nc).flat_map(move |b| (0..nt).map(move |t| (a, b, t)))).collect();
    let results: Vec<(usize, usize, Vec<AuditMismatch>)> = jobs
        .par_iter()
        .map(|&(a, b, t)| {
            let src = &cuboid[a];
            let fa = mf_of(src).expect("nonzero");
            let (mut agree, mut unknown, mut bad) = (0, 0, Vec::new());
            for m in window.shifts.0..=window.shifts.1 {
                let ell = cuboid[b].as_u().expect("nonzero").ell.clone();
                let tgt = StableObject::u(ell, twists[t].clone(), m)?;
                match hom_dim(src, &tgt)? {
                    HomAnswer::Unknown => unknown += 1,
                    HomAnswer::Dim(d) => {
                        let fb = mf_of(&tgt).expect("nonzero");
                        let o = stable_hom_dim_oracle(&fa, &fb, 0, field)?;
                        if o == d {
                            agree += 1;
                        } else {
                            bad.push(AuditMismatch {
                                source: src.to_string(),
                                target: tgt.to_string(),
                                calculus: d,
                                oracle: o,
                            });
                        }
                    }
                }
            }
            Ok((agree, unknown, bad))
        })
        .collect::<Result<_>>()?;
    let mut rep = AuditReport {
        weights: w.to_string(),
        window,
        pairs: 0,
        agreements: 0,
        unknown: 0,
        unknown_rate: 0.0,
        disagreements: Vec::new(),
    };
    for (agree, unknown, bad) in results {
        rep.agreements += agree;
        rep.unknown += unknown;
        rep.pairs += agree + unknown + bad.len();
        rep.disagreements.extend(bad);
    }
    rep.unknown_rate = if rep.pairs == 0 { 0.0 } else { rep.unknown as f64 / rep.pairs as f64 };
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::PARANOIA_PRIME;

    fn w(p: &[i64]) -> WeightSystem {
        WeightSystem::new(p.to_vec()).unwrap()
    }

    fn cub(ws: &WeightSystem, ell: &[i64]) -> StableObject {
        StableObject::cuboid(&ws.normalize(ell, 0)).unwrap()
    }

    #[test]
    fn rank_one_and_koszul() {
        let w2 = w(&[2]);
        let r = GradedMF::rank1(&w2, 0, 1).unwrap();
        assert_eq!(r.d[0][0].1, Poly::monomial(pack(&[1]), 1));
        assert_eq!(r.d[1][0].1, Poly::monomial(pack(&[1]), 1));
        assert_eq!(r.gens[1].degree, w2.x(0));
        let w22 = w(&[2, 2]);
        let t = GradedMF::rank1(&w22, 0, 1).unwrap().tensor(&GradedMF::rank1(&w22, 1, 1).unwrap()).unwrap();
        assert_eq!(t.gens.len(), 4);
        assert_eq!(t.gens.iter().filter(|g| g.odd).count(), 2);
        assert!(GradedMF::rank1(&w22, 0, 2).is_err());
    }

    #[test]
    fn oracle_small_values() {
        let f = Field::default();
        let w2 = w(&[2]);
        let rho = cub(&w2, &[1]);
        assert_eq!(oracle_hom(&rho, &rho, f).unwrap(), 1);
        let w34 = w(&[3, 4]);
        let us = cub(&w34, &[1, 1]);
        assert_eq!(oracle_hom(&us, &us.suspend(1), f).unwrap(), 0);
        assert_eq!(oracle_hom(&us, &us, f).unwrap(), 1);
        let w33 = w(&[3, 3]);
        let grid = w33.box_elements(&[1, 1], &[2, 2]);
        for a in &grid {
            for b in &grid {
                let expect = usize::from(b.leq(a) && a.coeffs().iter().zip(b.coeffs()).all(|(x, y)| x >= y));
                let got = oracle_hom(&StableObject::cuboid(a).unwrap(), &StableObject::cuboid(b).unwrap(), f).unwrap();
                assert_eq!(got, expect, "Hom(U^{a}, U^{b})");
            }
        }
    }

    #[test]
    fn suspension_convention_pins_eisenbud_periodicity() {
        let w34 = w(&[3, 4]);
        for ell in w34.box_elements(&[1, 1], &[2, 3]) {
            let o = StableObject::cuboid(&ell).unwrap();
            let a = mf_of(&StableObject::u(ell.clone(), w34.zero(), 2).unwrap()).unwrap();
            let b = mf_of(&StableObject::u(ell.clone(), w34.c(), 0).unwrap()).unwrap();
            assert_eq!(a, b);
            assert!(hom_complex_is_complex(&a, &mf_of(&o).unwrap()));
        }
    }

    #[test]
    fn profiles_respect_rewrites() {
        let f = Field::default();
        let w34 = w(&[3, 4]);
        let top = cub(&w34, &[2, 3]);
        let kosz = StableObject::u(w34.s(), w34.s(), -2).unwrap();
        assert_eq!(hom_profile(&top, f).unwrap(), hom_profile(&kosz, f).unwrap());
        let o = StableObject::u(w34.normalize(&[1, 2], 0), w34.x(0), 1).unwrap();
        assert_eq!(hom_profile(&o, f).unwrap(), hom_profile(&o.reflect(1).unwrap(), f).unwrap());
        let z = StableObject::Zero(w34.clone());
        assert!(hom_profile(&z, f).unwrap().values().all(|&(a, b)| a == 0 && b == 0));
    }

    #[test]
    fn second_prime_agrees_on_cuboid_pairs() {
        let w34 = w(&[3, 4]);
        let objs: Vec<_> = w34.box_elements(&[1, 1], &[2, 3]).into_iter().map(|e| StableObject::cuboid(&e).unwrap()).collect();
        for a in &objs {
            for b in &objs {
                for m in -2..=2 {
                    let fa = mf_of(a).unwrap();
                    let fb = mf_of(b).unwrap();
                    assert_eq!(
                        stable_hom_dim_oracle(&fa, &fb, m, Field::default()).unwrap(),
                        stable_hom_dim_oracle(&fa, &fb, m, Field::Prime(PARANOIA_PRIME)).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn calculus_matches_oracle_on_small_cuboids() {
        let f = Field::default();
        for p in [vec![2i64, 3], vec![3, 3], vec![3, 4]] {
            let ws = w(&p);
            let hi: Vec<i64> = p.iter().map(|x| x - 1).collect();
            let objs: Vec<_> = ws.box_elements(&vec![1; p.len()], &hi).into_iter().map(|e| StableObject::cuboid(&e).unwrap()).collect();
            for a in &objs {
                for b in &objs {
                    for y in ws.symmetric_window() {
                        for m in -2..=2 {
                            let a2 = StableObject::u(a.as_u().unwrap().ell.clone(), y.clone(), m).unwrap();
                            if let HomAnswer::Dim(d) = hom_dim(&a2, b).unwrap() {
                                assert_eq!(d, oracle_hom(&a2, b, f).unwrap(), "Hom({a2}, {b})");
                            }
                        }
                    }
                }
            }
        }
    }
}
