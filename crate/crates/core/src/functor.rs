//! Reduction functors `phi_{j,k}` and insertion functors `psi_{j,k}` on the U-family of
//! stable objects, images of graded projectives, and verification of the ladder that
//! these functors form between weights `p` and the two reduced weight systems.
//!
//! Both families are conjugates of the `k = 0` functors:
//! `phi_{j,k} = (-k x_jn) phi_{j,0} (k x_n)` and `psi_{j,k} = (-k x_n) psi_{j,0} (k x_jn)`.

use crate::error::{Error, Result};
use crate::gmod::{self, GradedModule};
use crate::grading::{GradeElement, GroupEmbedding, WeightSystem};
use crate::linalg::Field;
use crate::stable::{hom_dim, HomAnswer, StableObject};
use serde::Serialize;

/// Direction for projective-image prediction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Reduce,
    Insert,
}

#[derive(Clone, Debug)]
pub struct Ladder {
    pub full: WeightSystem,
    pub split: (i64, i64),
    emb: [GroupEmbedding; 2],
}

fn median3(a: i64, b: i64, c: i64) -> i64 {
    a.max(b).min(a.min(b).max(c))
}

impl Ladder {
    /// Ladder for the split `p_1n + p_2n = p_n + 1` with `q = p_1n`.
    pub fn build(w: &WeightSystem, p1n: i64) -> Result<Self> {
        let pn = *w.p().last().expect("nonempty weights");
        if pn < 3 || p1n < 2 || p1n > pn - 1 {
            return Err(Error::InvalidSplit(format!("p_1n = {p1n} is not in [2, {}]", pn - 1)));
        }
        let split = (p1n, pn + 1 - p1n);
        Ok(Ladder {
            full: w.clone(),
            split,
            emb: [GroupEmbedding::new(w, split, 1)?, GroupEmbedding::new(w, split, 2)?],
        })
    }

    pub fn q(&self) -> i64 {
        self.split.0
    }

    pub fn emb(&self, j: usize) -> &GroupEmbedding {
        &self.emb[j - 1]
    }

    pub fn reduced(&self, j: usize) -> &WeightSystem {
        &self.emb(j).reduced
    }

    fn n(&self) -> usize {
        self.full.n()
    }

    fn check_j(j: usize) -> Result<()> {
        if j == 1 || j == 2 {
            Ok(())
        } else {
            Err(Error::OutOfRange(format!("functor index {j} is not 1 or 2")))
        }
    }

    /// `phi_{j,k}` on a U-object over the full weights.
    pub fn reduce(&self, j: usize, k: i64, obj: &StableObject) -> Result<StableObject> {
        Self::check_j(j)?;
        if obj.weights() != &self.full {
            return Err(Error::WeightMismatch(obj.weights().to_string(), self.full.to_string()));
        }
        let emb = self.emb(j);
        let red = &emb.reduced;
        let u = match obj {
            StableObject::Zero(_) => return Ok(StableObject::Zero(red.clone())),
            StableObject::U(u) => u,
        };
        let n = self.n();
        let pn = self.full.p()[n - 1];
        let q = emb.pjn();
        let gap = pn - q;
        let y = u.twist.add_x(n - 1, k);
        let yn = y.coeff(n - 1);
        let ln = u.ell.coeff(n - 1);
        let image = if yn == 0 && ln > gap {
            Some((ln - gap, y.clone()))
        } else if yn >= 1 && yn < q {
            Some((ln - median3(0, ln - yn, gap), y.clone()))
        } else if yn >= q && yn - q < ln && ln < yn {
            Some((ln - (yn - q), y.add_x(n - 1, -yn).add_c(1)))
        } else {
            None
        };
        let Some((t, ty)) = image else {
            return Ok(StableObject::Zero(red.clone()));
        };
        let mut ell = u.ell.coeffs().to_vec();
        ell[n - 1] = t;
        let out = StableObject::u(red.normalize(&ell, 0), emb.theta_inv(&ty)?, u.shift)?;
        Ok(out.twist_obj(&red.x_mul(n - 1, -k)))
    }

    /// `psi_{j,k}` on a U-object over the j-th reduced weights.
    pub fn insert(&self, j: usize, k: i64, obj: &StableObject) -> Result<StableObject> {
        Self::check_j(j)?;
        let emb = self.emb(j);
        if obj.weights() != &emb.reduced {
            return Err(Error::WeightMismatch(obj.weights().to_string(), emb.reduced.to_string()));
        }
        let u = match obj {
            StableObject::Zero(_) => return Ok(StableObject::Zero(self.full.clone())),
            StableObject::U(u) => u,
        };
        let n = self.n();
        let gap = self.full.p()[n - 1] - emb.pjn();
        let y = u.twist.add_x(n - 1, k);
        let mut ell = emb.theta(&u.ell);
        if y.coeff(n - 1) < u.ell.coeff(n - 1) {
            ell = ell.add_x(n - 1, gap);
        }
        let out = StableObject::u(ell, emb.theta(&y), u.shift)?;
        Ok(out.twist_obj(&self.full.x_mul(n - 1, -k)))
    }

    /// Twist argument of the graded projective `phi_{j,k}(R(y))` (over the reduced weights)
    /// or `psi_{j,k}(R^j(y))` (over the full weights).
    pub fn predict_projective_image(
        &self,
        dir: Direction,
        j: usize,
        k: i64,
        y: &GradeElement,
    ) -> Result<GradeElement> {
        Self::check_j(j)?;
        let emb = self.emb(j);
        let n = self.n();
        let pn = self.full.p()[n - 1];
        let q = emb.pjn();
        let yn = y.coeff(n - 1);
        match dir {
            Direction::Reduce => {
                let a = (yn + k).rem_euclid(pn);
                let b = (yn + k).div_euclid(pn);
                if a < q {
                    let base = emb.theta_inv(&y.add_x(n - 1, -(b * pn - k)))?;
                    Ok(base.add(&emb.reduced.x_mul(n - 1, b * q - k)))
                } else {
                    let base = emb.theta_inv(&y.add_x(n - 1, -yn))?;
                    Ok(base.add(&emb.reduced.x_mul(n - 1, (b + 1) * q - k)))
                }
            }
            Direction::Insert => {
                let a = (yn + k).rem_euclid(q);
                let b = (yn + k).div_euclid(q);
                debug_assert!(a < q);
                let base = emb.theta(&y.add_x(n - 1, -(b * q - k)));
                Ok(base.add_x(n - 1, b * pn - k))
            }
        }
    }

    /// Runs the ladder checks on a finite window.
    pub fn check_recollement(&self, window: &LadderWindow) -> Result<LadderReport> {
        let n = self.n();
        let q = self.q();
        let pn = self.full.p()[n - 1];
        let mut rep = LadderReport::default();

        // composite phi_{1,q} psi_{2,0} vanishes on rho(k)(z)
        let red2 = self.reduced(2).clone();
        let hi2: Vec<i64> = red2.p().iter().map(|p| p - 1).collect();
        for lv in -window.level_bound..=window.level_bound {
            for lam in red2.box_elements(&vec![0; n], &hi2) {
                let z = lam.add_c(lv);
                let img = self.reduce(1, q, &self.insert(2, 0, &StableObject::rho(&red2, &z))?)?;
                rep.composite_checked += 1;
                if !img.is_zero() {
                    rep.composite_failures.push(format!("z = {z} gives {img}"));
                }
            }
        }
        rep.composite_zero = rep.composite_failures.is_empty();

        // period p_n, up to the twist by -(p_n - p_jn) x_jn
        for o in cuboid_objects(&self.full) {
            for j in 1..=2 {
                let red = self.reduced(j);
                let conj = red.x_mul(n - 1, -(pn - self.emb(j).pjn()));
                for &k in &window.ks {
                    let a = self.reduce(j, k + pn, &o)?;
                    let b = self.reduce(j, k, &o)?.twist_obj(&conj);
                    rep.periodicity_checked += 1;
                    if !a.same_object(&b) {
                        rep.periodicity_failures.push(format!("j={j} k={k} on {o}: {a} vs {b}"));
                    }
                }
            }
        }
        rep.periodicity = rep.periodicity_failures.is_empty();

        // full faithfulness of psi on reduced cuboid pairs
        for j in 1..=2 {
            let red = self.reduced(j).clone();
            let objs = cuboid_objects(&red);
            let twists = red.symmetric_window();
            'outer: for a in &objs {
                for b in &objs {
                    for (ti, y) in twists.iter().enumerate() {
                        for &k in &window.ks {
                            if rep.fully_faithful_samples.len() >= window.ff_pairs {
                                break 'outer;
                            }
                            let m = (ti as i64 % 3) - 1;
                            let b2 = b.twist_obj(y).suspend(m);
                            let lhs = hom_dim(a, &b2)?;
                            let rhs = hom_dim(&self.insert(j, k, a)?, &self.insert(j, k, &b2)?)?;
                            rep.fully_faithful_samples.push(FfSample {
                                j,
                                k,
                                a: a.to_string(),
                                b: b2.to_string(),
                                reduced: lhs.to_string(),
                                inserted: rhs.to_string(),
                                ok: matches!((lhs, rhs), (HomAnswer::Dim(x), HomAnswer::Dim(y)) if x == y),
                            });
                        }
                    }
                }
            }
        }

        // module-level adjoint triples
        for j in 1..=2 {
            let emb = self.emb(j);
            let ms = module_samples(&self.full);
            let ns = module_samples(&emb.reduced);
            let mut count = 0;
            'adj: for (mi, m) in ms.iter().enumerate() {
                for (ni, nm) in ns.iter().enumerate() {
                    if (mi + ni) % window.adjunction_stride != 0 {
                        continue;
                    }
                    if count >= window.adjunction_pairs {
                        break 'adj;
                    }
                    count += 1;
                    let left = gmod::adjunction_check(emb, &m.1, &nm.1, window.field)?;
                    let right = gmod::right_adjunction_check(emb, &m.1, &nm.1, window.field)?;
                    rep.adjunction.push(AdjSample {
                        j,
                        m: m.0.clone(),
                        n: nm.0.clone(),
                        phi_psi: left,
                        psi_phi: right,
                    });
                }
            }
        }

        rep.partition = self.partition_holds()?;
        Ok(rep)
    }

    /// Cuboid objects `U^l` split by `l_n < q` (image of `psi_{1,q-1}`) and `l_n >= q`
    /// (image of `psi_{2,0}`); true when every object is hit exactly once.
    pub fn partition_holds(&self) -> Result<bool> {
        let n = self.n();
        let q = self.q();
        let mut images = Vec::new();
        for o in cuboid_objects(self.reduced(1)) {
            images.push(self.insert(1, q - 1, &o)?);
        }
        for o in cuboid_objects(self.reduced(2)) {
            images.push(self.insert(2, 0, &o)?);
        }
        let cub: Vec<StableObject> = cuboid_objects(&self.full).iter().map(|o| o.canonicalize()).collect();
        let imgs: Vec<StableObject> = images.iter().map(|o| o.canonicalize()).collect();
        let mut cub_sorted: Vec<String> = cub.iter().map(|o| o.to_string()).collect();
        let mut img_sorted: Vec<String> = imgs.iter().map(|o| o.to_string()).collect();
        cub_sorted.sort();
        img_sorted.sort();
        if cub_sorted != img_sorted {
            return Ok(false);
        }
        // each U^l comes from the predicted preimage
        for o in cuboid_objects(&self.full) {
            let ell = &o.as_u().expect("cuboid").ell;
            let pre = if ell.coeff(n - 1) < q {
                self.insert(1, q - 1, &StableObject::cuboid(&self.emb(1).theta_inv(ell)?)?)?
            } else {
                let shifted = ell.add_x(n - 1, -(q - 1));
                self.insert(2, 0, &StableObject::cuboid(&self.emb(2).theta_inv(&shifted)?)?)?
            };
            if !pre.same_object(&o) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Hom dimension that falls back to the ladder adjunctions when the calculus answers
/// `Unknown`. With `(phi_{j,k}, psi_{j,k}, phi_{j,k+1})` adjoint and `psi_{j,k}` fully
/// faithful, `Hom(A, psi Y) = Hom(phi_{j,k} A, Y)` and `Hom(psi X, B) = Hom(X, phi_{j,k+1} B)`.
/// Membership in the image of `psi_{j,k}` is tested by `psi_{j,k} phi_{j,k} B = B`. Every
/// step lands on a weight system with a smaller last weight, so the recursion terminates.
pub fn hom_dim_ladder(a: &StableObject, b: &StableObject) -> Result<HomAnswer> {
    let direct = hom_dim(a, b)?;
    if direct != HomAnswer::Unknown {
        return Ok(direct);
    }
    let ws = a.weights();
    let pn = ws.p()[ws.n() - 1];
    for q in 2..pn {
        let lad = Ladder::build(ws, q)?;
        for j in 1..=2 {
            for k in 0..pn {
                let y = lad.reduce(j, k, b)?;
                if lad.insert(j, k, &y)?.same_object(b) {
                    let ans = hom_dim_ladder(&lad.reduce(j, k, a)?, &y)?;
                    if ans != HomAnswer::Unknown {
                        return Ok(ans);
                    }
                }
                let x = lad.reduce(j, k, a)?;
                if lad.insert(j, k, &x)?.same_object(a) {
                    let ans = hom_dim_ladder(&x, &lad.reduce(j, k + 1, b)?)?;
                    if ans != HomAnswer::Unknown {
                        return Ok(ans);
                    }
                }
            }
        }
    }
    Ok(HomAnswer::Unknown)
}

/// All `U^l` with `s <= l <= s + delta`, in lexicographic order of `l`.
pub fn cuboid_objects(w: &WeightSystem) -> Vec<StableObject> {
    let hi: Vec<i64> = w.p().iter().map(|p| p - 1).collect();
    w.box_elements(&vec![1; w.n()], &hi)
        .into_iter()
        .map(|e| StableObject::cuboid(&e).expect("valid"))
        .collect()
}

/// Cuboid modules and simples with a few twists, labelled.
pub fn module_samples(w: &WeightSystem) -> Vec<(String, GradedModule)> {
    let n = w.n();
    let hi: Vec<i64> = w.p().iter().map(|p| p - 1).collect();
    let twists = [w.zero(), w.x(n - 1), w.x(0).neg(), w.x_mul(n - 1, 2).add_c(-1)];
    let mut out = Vec::new();
    for ell in w.box_elements(&vec![1; n], &hi) {
        for y in &twists {
            out.push((format!("E{ell}{y}"), GradedModule::make_e(&ell, y).expect("valid")));
        }
    }
    for y in &twists {
        out.push((format!("k{y}"), GradedModule::simple(w, y)));
    }
    out
}

/// Identifies a module of the form `R/(X_i^{t_i})(y)` and returns its stable image:
/// `U^t(y)` when every `t_i < p_i`, zero when some `t_i = p_i` (finite projective
/// dimension). Returns `None` for modules outside this family.
pub fn stable_image_of_truncation(m: &GradedModule, field: Field) -> Option<StableObject> {
    let w = m.weights();
    if m.is_zero() {
        return Some(StableObject::Zero(w.clone()));
    }
    let total = m.total_dim();
    let hi: Vec<i64> = w.p().to_vec();
    for z in m.fibers().keys() {
        let y = z.neg();
        for t in exponent_vectors(&hi) {
            if t.iter().product::<i64>() as usize != total {
                continue;
            }
            let cand = GradedModule::truncation(w, &t, &y).ok()?;
            if cand.same_fingerprint(m, field) {
                if t.iter().zip(w.p()).any(|(a, p)| a == p) {
                    return Some(StableObject::Zero(w.clone()));
                }
                return Some(StableObject::u(w.normalize(&t, 0), y, 0).expect("valid"));
            }
        }
    }
    None
}

fn exponent_vectors(hi: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for &h in hi {
        out = out
            .into_iter()
            .flat_map(|v| (1..=h).map(move |a| {
                let mut v2 = v.clone();
                v2.push(a);
                v2
            }))
            .collect();
    }
    out
}

/// Window of a ladder check.
#[derive(Clone, Debug)]
pub struct LadderWindow {
    pub level_bound: i64,
    pub ks: Vec<i64>,
    pub ff_pairs: usize,
    pub adjunction_pairs: usize,
    pub adjunction_stride: usize,
    pub field: Field,
}

impl LadderWindow {
    pub fn standard(w: &WeightSystem) -> Self {
        let pn = *w.p().last().expect("nonempty");
        LadderWindow {
            level_bound: 2,
            ks: (-1..=pn).collect(),
            ff_pairs: 400,
            adjunction_pairs: 40,
            adjunction_stride: 7,
            field: Field::default(),
        }
    }

    pub fn empty() -> Self {
        LadderWindow {
            level_bound: -1,
            ks: Vec::new(),
            ff_pairs: 0,
            adjunction_pairs: 0,
            adjunction_stride: 1,
            field: Field::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FfSample {
    pub j: usize,
    pub k: i64,
    pub a: String,
    pub b: String,
    pub reduced: String,
    pub inserted: String,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AdjSample {
    pub j: usize,
    pub m: String,
    pub n: String,
    pub phi_psi: bool,
    pub psi_phi: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct LadderReport {
    pub composite_zero: bool,
    pub composite_checked: usize,
    pub composite_failures: Vec<String>,
    pub fully_faithful_samples: Vec<FfSample>,
    pub periodicity: bool,
    pub periodicity_checked: usize,
    pub periodicity_failures: Vec<String>,
    pub adjunction: Vec<AdjSample>,
    pub partition: bool,
}

impl LadderReport {
    /// Fully faithful samples whose two sides are both known and disagree.
    pub fn ff_disagreements(&self) -> usize {
        self.fully_faithful_samples
            .iter()
            .filter(|s| !s.ok && s.reduced != "?" && s.inserted != "?")
            .count()
    }

    pub fn passed(&self) -> bool {
        self.composite_zero
            && self.periodicity
            && self.partition
            && self.ff_disagreements() == 0
            && self.adjunction.iter().all(|a| a.phi_psi && a.psi_phi)
    }
}
