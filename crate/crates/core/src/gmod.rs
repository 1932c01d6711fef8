//! Finite-dimensional L-graded modules over `R = k[X]/(sum X_i^{p_i})`, given by fiber
//! dimensions and the matrices of the `X_i` actions, with the degreewise reduction and
//! insertion functors and Hom dimensions computed by linear algebra.
//!
//! Action matrices are stored as exact integer matrices; the working field only enters
//! when a rank is taken. Twists follow `(M(y))_x = M_{x+y}`.

use crate::error::{Error, Result};
use crate::grading::{GradeElement, GroupEmbedding, WeightSystem};
use crate::linalg::{Field, IntMatrix, SparseMatrix};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedModule {
    w: WeightSystem,
    fibers: BTreeMap<GradeElement, usize>,
    /// `actions[i][x]` is the matrix of `X_i : M_x -> M_{x + x_i}`; absent means zero.
    actions: Vec<BTreeMap<GradeElement, IntMatrix>>,
}

impl GradedModule {
    /// Builds a module and checks commutativity and the hypersurface relation.
    pub fn new(
        w: &WeightSystem,
        fibers: BTreeMap<GradeElement, usize>,
        actions: Vec<BTreeMap<GradeElement, IntMatrix>>,
    ) -> Result<Self> {
        let fibers: BTreeMap<_, _> = fibers.into_iter().filter(|(_, d)| *d > 0).collect();
        let mut actions = actions;
        actions.resize(w.n(), BTreeMap::new());
        for (i, act) in actions.iter_mut().enumerate() {
            act.retain(|_, m| !m.is_zero());
            for (x, m) in act.iter() {
                let src = fibers.get(x).copied().unwrap_or(0);
                let tgt = fibers.get(&x.add(&w.x(i))).copied().unwrap_or(0);
                if (m.rows, m.cols) != (tgt, src) {
                    return Err(Error::Relation(format!(
                        "X_{} at {x} has shape {}x{}, expected {tgt}x{src}",
                        i + 1,
                        m.rows,
                        m.cols
                    )));
                }
            }
        }
        let m = GradedModule { w: w.clone(), fibers, actions };
        m.check_relations()?;
        Ok(m)
    }

    pub fn zero(w: &WeightSystem) -> Self {
        GradedModule { w: w.clone(), fibers: BTreeMap::new(), actions: vec![BTreeMap::new(); w.n()] }
    }

    pub fn weights(&self) -> &WeightSystem {
        &self.w
    }

    pub fn fibers(&self) -> &BTreeMap<GradeElement, usize> {
        &self.fibers
    }

    pub fn dim_at(&self, x: &GradeElement) -> usize {
        self.fibers.get(x).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.fibers.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.fibers.is_empty()
    }

    /// Matrix of `X_i` leaving degree `x` (zero matrix of the right shape if absent).
    pub fn action(&self, i: usize, x: &GradeElement) -> IntMatrix {
        let src = self.dim_at(x);
        let tgt = self.dim_at(&x.add(&self.w.x(i)));
        self.actions[i].get(x).cloned().unwrap_or_else(|| IntMatrix::zeros(tgt, src))
    }

    /// Matrix of `X_i^k` leaving degree `x`.
    pub fn action_power(&self, i: usize, x: &GradeElement, k: i64) -> IntMatrix {
        let mut cur = x.clone();
        let mut m = IntMatrix::identity(self.dim_at(x));
        for _ in 0..k {
            m = self.action(i, &cur).mul(&m);
            cur = cur.add(&self.w.x(i));
        }
        m
    }

    /// Checks that the actions commute and that `sum X_i^{p_i}` acts by zero.
    pub fn check_relations(&self) -> Result<()> {
        let n = self.w.n();
        for x in self.fibers.keys() {
            for i in 0..n {
                for j in i + 1..n {
                    let a = self.action(j, &x.add(&self.w.x(i))).mul(&self.action(i, x));
                    let b = self.action(i, &x.add(&self.w.x(j))).mul(&self.action(j, x));
                    if a != b {
                        return Err(Error::Relation(format!(
                            "X_{} and X_{} do not commute at {x}",
                            i + 1,
                            j + 1
                        )));
                    }
                }
            }
            let c_target = self.dim_at(&x.add(&self.w.c()));
            let mut sum = IntMatrix::zeros(c_target, self.dim_at(x));
            for i in 0..n {
                sum = sum.add(&self.action_power(i, x, self.w.p()[i]));
            }
            if !sum.is_zero() {
                return Err(Error::Relation(format!("sum X_i^p_i is nonzero at {x}")));
            }
        }
        Ok(())
    }

    /// Simple module `k(y)`: one-dimensional in degree `-y`.
    pub fn simple(w: &WeightSystem, y: &GradeElement) -> Self {
        let mut fibers = BTreeMap::new();
        fibers.insert(y.neg(), 1);
        GradedModule { w: w.clone(), fibers, actions: vec![BTreeMap::new(); w.n()] }
    }

    /// `R/(X_i^{t_i})` twisted by `y`, for `1 <= t_i <= p_i`. Each `X_i^{p_i}` vanishes,
    /// so the hypersurface relation holds.
    pub fn truncation(w: &WeightSystem, t: &[i64], y: &GradeElement) -> Result<Self> {
        if t.len() != w.n() || t.iter().zip(w.p()).any(|(&a, &p)| a < 1 || a > p) {
            return Err(Error::OutOfRange(format!("truncation exponents {t:?} for weights {w}")));
        }
        let hi: Vec<i64> = t.iter().map(|a| a - 1).collect();
        let cube = w.box_elements(&vec![0; w.n()], &hi);
        let mut fibers = BTreeMap::new();
        let mut actions = vec![BTreeMap::new(); w.n()];
        for v in &cube {
            let z = v.sub(y);
            fibers.insert(z.clone(), 1);
            for (i, act) in actions.iter_mut().enumerate() {
                if v.coeff(i) + 1 < t[i] {
                    act.insert(z.clone(), IntMatrix::identity(1));
                }
            }
        }
        Self::new(w, fibers, actions)
    }

    /// Cuboid module `E^l(y)` with `1 <= l_i <= p_i - 1`.
    pub fn make_e(ell: &GradeElement, y: &GradeElement) -> Result<Self> {
        let w = ell.weights();
        if ell.level() != 0 || ell.coeffs().iter().zip(w.p()).any(|(&a, &p)| a < 1 || a > p - 1) {
            return Err(Error::OutOfRange(format!("E^l needs s <= l <= s + delta, got {ell}")));
        }
        Self::truncation(w, ell.coeffs(), y)
    }

    pub fn twist(&self, y: &GradeElement) -> Self {
        let shift = |x: &GradeElement| x.sub(y);
        GradedModule {
            w: self.w.clone(),
            fibers: self.fibers.iter().map(|(x, d)| (shift(x), *d)).collect(),
            actions: self
                .actions
                .iter()
                .map(|a| a.iter().map(|(x, m)| (shift(x), m.clone())).collect())
                .collect(),
        }
    }

    pub fn direct_sum(&self, other: &GradedModule) -> Self {
        assert_eq!(self.w, other.w, "direct sum over different weights");
        let mut fibers = self.fibers.clone();
        for (x, d) in &other.fibers {
            *fibers.entry(x.clone()).or_insert(0) += d;
        }
        let mut actions = vec![BTreeMap::new(); self.w.n()];
        for (i, act) in actions.iter_mut().enumerate() {
            for x in fibers.keys() {
                let m = self.action(i, x).direct_sum(&other.action(i, x));
                if !m.is_zero() {
                    act.insert(x.clone(), m);
                }
            }
        }
        GradedModule { w: self.w.clone(), fibers, actions }
    }

    /// Ranks of every `X_i` at every degree; together with the fibers this is the
    /// isomorphism fingerprint used in tests.
    pub fn action_ranks(&self, field: Field) -> BTreeMap<(usize, GradeElement), usize> {
        let mut out = BTreeMap::new();
        for i in 0..self.w.n() {
            for (x, m) in &self.actions[i] {
                out.insert((i, x.clone()), m.rank(field));
            }
        }
        out
    }

    pub fn same_fingerprint(&self, other: &GradedModule, field: Field) -> bool {
        self.w == other.w
            && self.fibers == other.fibers
            && self.action_ranks(field) == other.action_ranks(field)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let support: Vec<_> = self
            .fibers
            .iter()
            .map(|(x, d)| serde_json::json!({"degree": x.to_json(), "dim": d}))
            .collect();
        let actions: Vec<Vec<serde_json::Value>> = self
            .actions
            .iter()
            .map(|a| {
                a.iter()
                    .map(|(x, m)| {
                        let mut trip = Vec::new();
                        for r in 0..m.rows {
                            for c in 0..m.cols {
                                if m.get(r, c) != 0 {
                                    trip.push([r as i64, c as i64, m.get(r, c)]);
                                }
                            }
                        }
                        serde_json::json!({"from": x.to_json(), "entries": trip})
                    })
                    .collect()
            })
            .collect();
        serde_json::json!({"weights": self.w.to_json(), "support": support, "actions": actions})
    }
}

/// Dimension of the space of degree-0 module maps `M -> N`.
pub fn module_hom_dim(m: &GradedModule, n: &GradedModule, field: Field) -> Result<usize> {
    if m.w != n.w {
        return Err(Error::WeightMismatch(m.w.to_string(), n.w.to_string()));
    }
    // one unknown block f_x per degree in both supports
    let mut offset = BTreeMap::new();
    let mut cols = 0;
    for (x, &dm) in &m.fibers {
        let dn = n.dim_at(x);
        if dn > 0 {
            offset.insert(x.clone(), cols);
            cols += dm * dn;
        }
    }
    if cols == 0 {
        return Ok(0);
    }
    let mut sys = SparseMatrix::new(cols);
    for (x, &dm) in &m.fibers {
        for i in 0..m.w.n() {
            let y = x.add(&m.w.x(i));
            let dny = n.dim_at(&y);
            if dny == 0 {
                continue;
            }
            let am = m.action(i, x);
            let an = n.action(i, x);
            let dnx = n.dim_at(x);
            let dmy = m.dim_at(&y);
            // (N_i f_x - f_y M_i)[r][c] = 0 for r < dim N_y, c < dim M_x
            for r in 0..dny {
                for c in 0..dm {
                    let mut row = Vec::new();
                    if let Some(&ox) = offset.get(x) {
                        for k in 0..dnx {
                            let v = an.get(r, k);
                            if v != 0 {
                                row.push((ox + k * dm + c, v));
                            }
                        }
                    }
                    if let Some(&oy) = offset.get(&y) {
                        for k in 0..dmy {
                            let v = am.get(k, c);
                            if v != 0 {
                                row.push((oy + r * dmy + k, -v));
                            }
                        }
                    }
                    if !row.is_empty() {
                        sys.push_row(row);
                    }
                }
            }
        }
    }
    Ok(cols - sys.rank(field))
}

/// `phi_{j,0}(M)_x = M_{theta_j(x) + (p_n - p_jn) x_n}`.
pub fn phi0_module(emb: &GroupEmbedding, m: &GradedModule) -> GradedModule {
    assert_eq!(m.w, emb.full, "phi0 expects a module over the full weights");
    let n = emb.full.n();
    let gap = emb.full.p()[n - 1] - emb.pjn();
    let lift = |x: &GradeElement| emb.theta(x).add_x(n - 1, gap);
    let mut fibers = BTreeMap::new();
    for (z, &d) in &m.fibers {
        let t = z.add_x(n - 1, -gap);
        if emb.in_image(&t) {
            fibers.insert(emb.theta_inv(&t).expect("checked"), d);
        }
    }
    let mut actions = vec![BTreeMap::new(); n];
    for x in fibers.keys() {
        let z = lift(x);
        for (i, act) in actions.iter_mut().enumerate() {
            let y = x.add(&emb.reduced.x(i));
            let zy = lift(&y);
            let mat = if i + 1 < n {
                m.action(i, &z)
            } else {
                // exponent of X_n bridging the two lifted degrees
                let diff = zy.sub(&z);
                let e = diff.coeff(n - 1) + diff.level() * emb.full.p()[n - 1];
                debug_assert!(diff.coeffs()[..n - 1].iter().all(|&a| a == 0));
                m.action_power(n - 1, &z, e)
            };
            if !mat.is_zero() && fibers.contains_key(&y) {
                act.insert(x.clone(), mat);
            }
        }
    }
    GradedModule::new(&emb.reduced, fibers, actions).expect("phi0 preserves the module relations")
}

/// Source degree in `L_j` of `psi_{j,0}(N)_x`.
fn psi_source(emb: &GroupEmbedding, x: &GradeElement) -> GradeElement {
    let n = emb.full.n();
    let gap = emb.full.p()[n - 1] - emb.pjn();
    let lam = x.coeff(n - 1);
    let t = if lam < gap { x.add_x(n - 1, -lam) } else { x.add_x(n - 1, -gap) };
    emb.theta_inv(&t).expect("psi source lies in the image")
}

/// Insertion functor `psi_{j,0}` on modules.
pub fn psi0_module(emb: &GroupEmbedding, nmod: &GradedModule) -> GradedModule {
    assert_eq!(nmod.w, emb.reduced, "psi0 expects a module over the reduced weights");
    let n = emb.full.n();
    let gap = emb.full.p()[n - 1] - emb.pjn();
    let mut fibers = BTreeMap::new();
    for (y, &d) in &nmod.fibers {
        let base = emb.theta(y);
        if y.coeff(n - 1) == 0 {
            for lam in 0..=gap {
                fibers.insert(base.add_x(n - 1, lam), d);
            }
        } else {
            fibers.insert(base.add_x(n - 1, gap), d);
        }
    }
    let mut actions = vec![BTreeMap::new(); n];
    for x in fibers.keys() {
        let src = psi_source(emb, x);
        for (i, act) in actions.iter_mut().enumerate() {
            let y = x.add(&emb.full.x(i));
            if !fibers.contains_key(&y) {
                continue;
            }
            let tgt = psi_source(emb, &y);
            let mat = if tgt == src {
                IntMatrix::identity(nmod.dim_at(&src))
            } else {
                debug_assert_eq!(tgt, src.add(&emb.reduced.x(i)));
                nmod.action(i, &src)
            };
            if !mat.is_zero() {
                act.insert(x.clone(), mat);
            }
        }
    }
    GradedModule::new(&emb.full, fibers, actions).expect("psi0 preserves the module relations")
}

/// `phi_{j,k} = (-k x_jn) phi_{j,0} (k x_n)`.
pub fn phi_module(emb: &GroupEmbedding, k: i64, m: &GradedModule) -> GradedModule {
    let n = emb.full.n();
    phi0_module(emb, &m.twist(&emb.full.x_mul(n - 1, k))).twist(&emb.reduced.x_mul(n - 1, -k))
}

/// `psi_{j,k} = (-k x_n) psi_{j,0} (k x_jn)`.
pub fn psi_module(emb: &GroupEmbedding, k: i64, nmod: &GradedModule) -> GradedModule {
    let n = emb.full.n();
    psi0_module(emb, &nmod.twist(&emb.reduced.x_mul(n - 1, k))).twist(&emb.full.x_mul(n - 1, -k))
}

/// `dim Hom(phi_{j,0} M, N) = dim Hom(M, psi_{j,0} N)`.
pub fn adjunction_check(
    emb: &GroupEmbedding,
    m: &GradedModule,
    nmod: &GradedModule,
    field: Field,
) -> Result<bool> {
    let left = module_hom_dim(&phi0_module(emb, m), nmod, field)?;
    let right = module_hom_dim(m, &psi0_module(emb, nmod), field)?;
    Ok(left == right)
}

/// `dim Hom(psi_{j,0} N, M) = dim Hom(N, phi_{j,1} M)`, the right half of the adjoint triple.
pub fn right_adjunction_check(
    emb: &GroupEmbedding,
    m: &GradedModule,
    nmod: &GradedModule,
    field: Field,
) -> Result<bool> {
    let left = module_hom_dim(&psi0_module(emb, nmod), m, field)?;
    let right = module_hom_dim(nmod, &phi_module(emb, 1, m), field)?;
    Ok(left == right)
}

/// Module predicted by the case analysis of `phi_{j,0}(E^l(y))`: a truncation module over
/// the reduced weights, or zero.
pub fn predicted_phi0_of_e(
    emb: &GroupEmbedding,
    ell: &GradeElement,
    y: &GradeElement,
) -> Result<GradedModule> {
    let n = emb.full.n();
    let pn = emb.full.p()[n - 1];
    let q = emb.pjn();
    let gap = pn - q;
    let yn = y.coeff(n - 1);
    let ln = ell.coeff(n - 1);
    let red = &emb.reduced;
    let with_last = |t: i64| -> Vec<i64> {
        let mut v = ell.coeffs().to_vec();
        v[n - 1] = t;
        v
    };
    let ty = |v: &GradeElement| emb.theta_inv(v);
    if yn == 0 {
        if ln > gap {
            return GradedModule::truncation(red, &with_last(ln - gap), &ty(y)?);
        }
        return Ok(GradedModule::zero(red));
    }
    if yn < q {
        let t = if ln <= yn {
            ln
        } else if ln <= yn + gap {
            yn
        } else {
            ln - gap
        };
        return GradedModule::truncation(red, &with_last(t), &ty(y)?);
    }
    let base = y.add_x(n - 1, -yn).add_c(1);
    if ln <= yn - q {
        Ok(GradedModule::zero(red))
    } else if ln < yn {
        GradedModule::truncation(red, &with_last(ln - (yn - q)), &ty(&base)?)
    } else {
        GradedModule::truncation(red, &with_last(q), &ty(&base)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(p: &[i64]) -> WeightSystem {
        WeightSystem::new(p.to_vec()).unwrap()
    }

    fn f() -> Field {
        Field::default()
    }

    #[test]
    fn simples_and_e_modules() {
        let w34 = w(&[3, 4]);
        let k0 = GradedModule::simple(&w34, &w34.zero());
        assert_eq!(k0.dim_at(&w34.zero()), 1);
        let k1 = GradedModule::simple(&w34, &w34.x(0));
        assert_eq!(k1.dim_at(&w34.x(0).neg()), 1);
        assert_eq!(k1.total_dim(), 1);
        let sd = w34.s().add(&w34.delta());
        let e = GradedModule::make_e(&sd, &w34.zero()).unwrap();
        assert_eq!(e.total_dim(), 6);
        let es = GradedModule::make_e(&w34.s(), &w34.zero()).unwrap();
        assert_eq!(es, k0);
        for x in e.fibers().keys() {
            assert!(e.action_power(0, x, 2).is_zero());
            assert!(e.action_power(1, x, 3).is_zero());
        }
        assert!(GradedModule::make_e(&w34.c(), &w34.zero()).is_err());
    }

    #[test]
    fn twists_compose() {
        let w34 = w(&[3, 4]);
        let e = GradedModule::make_e(&w34.s().add(&w34.x(1)), &w34.zero()).unwrap();
        assert_eq!(e.twist(&w34.zero()), e);
        let a = w34.x(0);
        let b = w34.normalize(&[2, 3], -1);
        assert_eq!(e.twist(&a).twist(&b), e.twist(&a.add(&b)));
        let k = GradedModule::simple(&w34, &w34.zero());
        assert_eq!(k.twist(&b), GradedModule::simple(&w34, &b));
    }

    #[test]
    fn hom_examples() {
        let w34 = w(&[3, 4]);
        let k = GradedModule::simple(&w34, &w34.zero());
        assert_eq!(module_hom_dim(&k, &k, f()).unwrap(), 1);
        let k1 = GradedModule::simple(&w34, &w34.x(0));
        assert_eq!(module_hom_dim(&k, &k1, f()).unwrap(), 0);
        let e = GradedModule::make_e(&w34.s().add(&w34.x(0)), &w34.zero()).unwrap();
        assert_eq!(module_hom_dim(&e, &k, f()).unwrap(), 1);
        // the socle inclusion k(-x_1) -> E lives in degree x_1
        assert_eq!(module_hom_dim(&k, &e, f()).unwrap(), 0);
        assert_eq!(module_hom_dim(&k.twist(&w34.x(0).neg()), &e, f()).unwrap(), 1);
    }

    #[test]
    fn phi_and_psi_examples() {
        let w34 = w(&[3, 4]);
        let emb = GroupEmbedding::new(&w34, (3, 2), 2).unwrap();
        let sd = w34.s().add(&w34.delta());
        let e = GradedModule::make_e(&sd, &w34.zero()).unwrap();
        let img = phi0_module(&emb, &e);
        let expect = GradedModule::make_e(
            &emb.reduced.normalize(&[2, 1], 0),
            &emb.reduced.zero(),
        )
        .unwrap();
        assert_eq!(img.total_dim(), 2);
        assert!(img.same_fingerprint(&expect, f()));
        let es = GradedModule::make_e(&w34.s(), &w34.zero()).unwrap();
        assert!(phi0_module(&emb, &es).is_zero());
        let k2 = GradedModule::simple(&emb.reduced, &emb.reduced.zero());
        let p = psi0_module(&emb, &k2);
        assert_eq!(p.total_dim(), 3);
        let e13 = GradedModule::make_e(&w34.normalize(&[1, 3], 0), &w34.zero()).unwrap();
        assert_eq!(p, e13);
        assert!(psi0_module(&emb, &GradedModule::zero(&emb.reduced)).is_zero());
    }

    #[test]
    fn adjunction_examples() {
        let w34 = w(&[3, 4]);
        let e2 = GroupEmbedding::new(&w34, (3, 2), 2).unwrap();
        let sd = w34.s().add(&w34.delta());
        let e = GradedModule::make_e(&sd, &w34.zero()).unwrap();
        let k2 = GradedModule::simple(&e2.reduced, &e2.reduced.zero());
        assert!(adjunction_check(&e2, &e, &k2, f()).unwrap());
        assert!(adjunction_check(&e2, &GradedModule::zero(&w34), &k2, f()).unwrap());
        let e1 = GroupEmbedding::new(&w34, (3, 2), 1).unwrap();
        let m = GradedModule::make_e(&w34.s().add(&w34.x(1)), &w34.zero()).unwrap();
        let nmod = GradedModule::make_e(&e1.reduced.s(), &e1.reduced.zero()).unwrap();
        assert!(adjunction_check(&e1, &m, &nmod, f()).unwrap());
        assert!(right_adjunction_check(&e1, &m, &nmod, f()).unwrap());
    }

    #[test]
    fn phi0_matches_case_analysis() {
        for (p, splits) in [(vec![3i64, 4], vec![(3, 2), (2, 3)]), (vec![2, 5], vec![(2, 4), (3, 3), (4, 2)])] {
            let ws = w(&p);
            let n = ws.n();
            for split in splits {
                for j in 1..=2 {
                    let emb = GroupEmbedding::new(&ws, split, j).unwrap();
                    let ells = ws.box_elements(&vec![1; n], &p.iter().map(|x| x - 1).collect::<Vec<_>>());
                    for ell in &ells {
                        for yn in 0..p[n - 1] {
                            for lv in -1..=1 {
                                let y = ws.x_mul(0, 1).add_x(n - 1, yn).add_c(lv);
                                let actual = phi0_module(&emb, &GradedModule::make_e(ell, &y).unwrap());
                                let pred = predicted_phi0_of_e(&emb, ell, &y).unwrap();
                                assert!(
                                    actual.same_fingerprint(&pred, f()),
                                    "phi0(E^{ell}({y})) differs from prediction for split {split:?}, j={j}"
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn json_dump_shape() {
        let w34 = w(&[3, 4]);
        let e = GradedModule::make_e(&w34.s().add(&w34.x(0)), &w34.zero()).unwrap();
        let v = e.to_json();
        assert_eq!(v["support"].as_array().unwrap().len(), 2);
        assert_eq!(v["actions"][0].as_array().unwrap().len(), 1);
    }

    fn arb_module(ws: WeightSystem) -> impl Strategy<Value = GradedModule> {
        let n = ws.n();
        let p = ws.p().to_vec();
        (prop::collection::vec(0i64..8, n), prop::collection::vec(-6i64..6, n), -2i64..2, any::<bool>())
            .prop_map(move |(t, y, lv, simple)| {
                let y = ws.normalize(&y, lv);
                if simple {
                    GradedModule::simple(&ws, &y)
                } else {
                    let t: Vec<i64> = t.iter().zip(&p).map(|(a, pi)| 1 + a % pi).collect();
                    GradedModule::truncation(&ws, &t, &y).unwrap()
                }
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn functors_are_additive_and_adjoint(
            (m1, m2) in (arb_module(w(&[2, 3, 4])), arb_module(w(&[2, 3, 4]))),
            nsel in (prop::collection::vec(0i64..8, 3), prop::collection::vec(-6i64..6, 3), -2i64..2),
            j in 1usize..=2,
        ) {
            let ws = w(&[2, 3, 4]);
            let emb = GroupEmbedding::new(&ws, (3, 2), j).unwrap();
            let red = emb.reduced.clone();
            let t: Vec<i64> = nsel.0.iter().zip(red.p()).map(|(a, pi)| 1 + a % pi).collect();
            let nmod = GradedModule::truncation(&red, &t, &red.normalize(&nsel.1, nsel.2)).unwrap();
            let sum = m1.direct_sum(&m2);
            prop_assert_eq!(
                phi0_module(&emb, &sum).total_dim(),
                phi0_module(&emb, &m1).total_dim() + phi0_module(&emb, &m2).total_dim()
            );
            prop_assert!(adjunction_check(&emb, &m1, &nmod, f()).unwrap());
            prop_assert!(right_adjunction_check(&emb, &m1, &nmod, f()).unwrap());
            let a = psi0_module(&emb, &nmod);
            prop_assert_eq!(module_hom_dim(&a, &a, f()).unwrap(), module_hom_dim(&nmod, &nmod, f()).unwrap());
        }
    }
}
