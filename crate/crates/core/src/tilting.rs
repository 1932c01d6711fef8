//! Tilting families in the stable category: the cuboid, Koszul, extended-cuboid and
//! replicated families, their Hom matrices, rigidity checks, and gluing through a
//! recollement of the ladder.
//!
//! Index pairing: `H[a][b] = dim Hom(fam[a], fam[b])`, compared against the Cartan matrix
//! of the predicted endomorphism algebra in the path convention of [`crate::qalg`].

use crate::error::{Error, Result};
use crate::functor::{hom_dim_ladder, Ladder};
use crate::grading::{GradeElement, WeightSystem};
use crate::linalg::IntMatrix;
use crate::qalg::{self, AlgebraPresentation};
use crate::stable::{HomAnswer, StableObject};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt;

/// Which family to build; indices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    Cuboid,
    Koszul,
    Extended(BTreeSet<usize>),
    Replicated(usize),
}

impl FamilyKind {
    /// Parses `cuboid`, `koszul`, `extended:1,2` (1-based, may be empty) or `replicated:t`.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let bad = || Error::Parse(format!("unknown family kind {text:?}"));
        let idx = |s: &str| -> Result<usize> {
            let i: usize = s.trim().parse().map_err(|_| bad())?;
            if i == 0 || i > n {
                return Err(Error::OutOfRange(format!("index {i} is not in 1..={n}")));
            }
            Ok(i - 1)
        };
        match text.split_once(':') {
            None if text == "cuboid" => Ok(FamilyKind::Cuboid),
            None if text == "koszul" => Ok(FamilyKind::Koszul),
            Some(("extended", rest)) => {
                let set = rest.split(',').filter(|s| !s.trim().is_empty()).map(idx).collect::<Result<_>>()?;
                Ok(FamilyKind::Extended(set))
            }
            Some(("replicated", rest)) => Ok(FamilyKind::Replicated(idx(rest)?)),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyKind::Cuboid => write!(f, "cuboid"),
            FamilyKind::Koszul => write!(f, "koszul"),
            FamilyKind::Extended(set) => {
                let s: Vec<String> = set.iter().map(|i| (i + 1).to_string()).collect();
                write!(f, "extended:{}", s.join(","))
            }
            FamilyKind::Replicated(t) => write!(f, "replicated:{}", t + 1),
        }
    }
}

#[derive(Clone, Debug)]
pub struct TiltingFamily {
    pub weights: WeightSystem,
    pub kind: String,
    pub objects: Vec<StableObject>,
}

impl TiltingFamily {
    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn labels(&self) -> Vec<String> {
        self.objects.iter().map(|o| o.to_string()).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "weights": self.weights.p(),
            "kind": self.kind,
            "objects": self.labels(),
        })
    }

    /// True when both families list the same objects up to isomorphism and order.
    pub fn same_objects(&self, other: &TiltingFamily) -> bool {
        let key = |f: &TiltingFamily| {
            let mut v: Vec<String> = f.objects.iter().map(|o| o.canonicalize().to_string()).collect();
            v.sort();
            v
        };
        key(self) == key(other)
    }
}

fn descending(mut v: Vec<GradeElement>) -> Vec<GradeElement> {
    v.reverse();
    v
}

/// Builds a family; objects are canonicalized and listed in the order that matches the
/// vertex order of [`predicted_algebra`].
pub fn family(w: &WeightSystem, kind: &FamilyKind) -> Result<TiltingFamily> {
    let n = w.n();
    let p = w.p();
    let mut objects = Vec::new();
    match kind {
        FamilyKind::Cuboid => return family(w, &FamilyKind::Extended((0..n).collect())),
        FamilyKind::Koszul => return family(w, &FamilyKind::Extended(BTreeSet::new())),
        FamilyKind::Extended(set) => {
            if set.iter().any(|&i| i >= n) {
                return Err(Error::OutOfRange(format!("extended index set {set:?} for {w}")));
            }
            let mut l_hi = vec![1; n];
            let mut x_hi = vec![0; n];
            for i in 0..n {
                if set.contains(&i) {
                    l_hi[i] = p[i] - 1;
                } else {
                    x_hi[i] = p[i] - 2;
                }
            }
            let mut ells = descending(w.box_elements(&vec![1; n], &l_hi));
            let mut xs = descending(w.box_elements(&vec![0; n], &x_hi));
            // descending on the I-coordinates first, then on the complement
            ells.sort_by(|a, b| key_on(b, set, true).cmp(&key_on(a, set, true)));
            xs.sort_by(|a, b| key_on(b, set, false).cmp(&key_on(a, set, false)));
            for ell in &ells {
                for x in &xs {
                    objects.push(StableObject::u(ell.clone(), x.clone(), -x.sigma()?)?.canonicalize());
                }
            }
        }
        FamilyKind::Replicated(t) => {
            let t = *t;
            if t >= n {
                return Err(Error::OutOfRange(format!("replicated index {} for {w}", t + 1)));
            }
            let mut lo = vec![1; n];
            lo[t] = p[t] - 1;
            let hi: Vec<i64> = p.iter().map(|x| x - 1).collect();
            let ells = descending(w.box_elements(&lo, &hi));
            let s = w.s();
            for i in (0..=p[t] - 2).rev() {
                for ell in &ells {
                    let obj = StableObject::u(ell.clone(), s.scale(-i), i * n as i64)?;
                    objects.push(obj.canonicalize());
                }
            }
        }
    }
    Ok(TiltingFamily { weights: w.clone(), kind: kind.to_string(), objects })
}

/// Sort key on the coordinates inside (`inside = true`) or outside the set.
fn key_on(e: &GradeElement, set: &BTreeSet<usize>, inside: bool) -> Vec<i64> {
    let mut k: Vec<i64> = (0..e.coeffs().len()).filter(|i| set.contains(i) == inside).map(|i| e.coeff(i)).collect();
    k.extend((0..e.coeffs().len()).filter(|i| set.contains(i) != inside).map(|i| e.coeff(i)));
    k
}

/// The algebra whose Cartan matrix the Hom matrix of the family should equal.
pub fn predicted_algebra(w: &WeightSystem, kind: &FamilyKind) -> Result<AlgebraPresentation> {
    let n = w.n();
    let p = w.p();
    match kind {
        FamilyKind::Cuboid => predicted_algebra(w, &FamilyKind::Extended((0..n).collect())),
        FamilyKind::Koszul => {
            let q: Vec<i64> = p.iter().map(|&pi| (pi - 1).min(2)).collect();
            qalg::lambda_q(w, &q)
        }
        FamilyKind::Extended(set) => {
            let mut acc = qalg::nakayama(1, 1)?;
            for i in set.iter().copied().chain((0..n).filter(|i| !set.contains(i))) {
                let f = (p[i] - 1) as usize;
                let m = if set.contains(&i) { f } else { f.min(2) };
                acc = qalg::tensor(&acc, &qalg::nakayama(f, m)?);
            }
            Ok(acc)
        }
        FamilyKind::Replicated(t) => qalg::gamma_quiver(w, *t),
    }
}

/// `H[a][b] = dim Hom(fam[a], fam[b])` by the calculus with the ladder fallback; an
/// unresolved entry is an error naming the pair.
pub fn hom_matrix(fam: &TiltingFamily) -> Result<IntMatrix> {
    let m = fam.len();
    let rows: Vec<Vec<i64>> = fam
        .objects
        .par_iter()
        .map(|a| {
            fam.objects
                .iter()
                .map(|b| match hom_dim_ladder(a, b)? {
                    HomAnswer::Dim(d) => Ok(d as i64),
                    HomAnswer::Unknown => Err(Error::UnknownHom(a.to_string(), b.to_string())),
                })
                .collect::<Result<Vec<i64>>>()
        })
        .collect::<Result<_>>()?;
    if m == 0 {
        return Ok(IntMatrix::zeros(0, 0));
    }
    Ok(IntMatrix::from_rows(&rows))
}

/// Entries where the computed and predicted matrices differ, as CSV rows
/// `row,col,computed,predicted`.
pub fn diff_table(labels: &[String], computed: &IntMatrix, predicted: &IntMatrix) -> String {
    let mut out = String::from("row,col,computed,predicted\n");
    for i in 0..computed.rows {
        for j in 0..computed.cols {
            let (a, b) = (computed.get(i, j), predicted.get(i, j));
            if a != b {
                out.push_str(&format!("\"{}\",\"{}\",{a},{b}\n", labels[i], labels[j]));
            }
        }
    }
    out
}

/// Default rigidity window `[-2n-4, 2n+4]`.
pub fn default_window(w: &WeightSystem) -> (i64, i64) {
    let r = 2 * w.n() as i64 + 4;
    (-r, r)
}

#[derive(Clone, Debug, Serialize)]
pub struct TiltingReport {
    pub kind: String,
    pub summands: usize,
    pub window: (i64, i64),
    /// Pairs `(a, b, m)` with `Hom(a, b[m]) != 0` for `m != 0`.
    pub rigidity_failures: Vec<(usize, usize, i64, usize)>,
    pub unknown: Vec<(usize, usize, i64)>,
    /// Summands whose endomorphism space is not one-dimensional.
    pub non_exceptional: Vec<usize>,
    /// An order with vanishing backward Homs, when one exists.
    pub exceptional_order: Option<Vec<usize>>,
    pub passed: bool,
}

/// Checks rigidity on the shift window, `End = k` for every summand, and that the
/// nonzero-Hom relation admits a linear order.
pub fn verify_tilting(fam: &TiltingFamily, window: Option<(i64, i64)>) -> Result<TiltingReport> {
    let window = window.unwrap_or_else(|| default_window(&fam.weights));
    let m = fam.len();
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|a| (0..m).map(move |b| (a, b))).collect();
    let results: Vec<Vec<(usize, usize, i64, HomAnswer)>> = pairs
        .par_iter()
        .map(|&(a, b)| {
            (window.0..=window.1)
                .map(|sh| Ok((a, b, sh, hom_dim_ladder(&fam.objects[a], &fam.objects[b].suspend(sh))?)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut rigidity_failures = Vec::new();
    let mut unknown = Vec::new();
    let mut zero_shift = IntMatrix::zeros(m, m);
    for (a, b, sh, ans) in results.into_iter().flatten() {
        match ans {
            HomAnswer::Unknown => unknown.push((a, b, sh)),
            HomAnswer::Dim(d) if sh == 0 => zero_shift.set(a, b, d as i64),
            HomAnswer::Dim(d) if d > 0 => rigidity_failures.push((a, b, sh, d)),
            HomAnswer::Dim(_) => {}
        }
    }
    let non_exceptional: Vec<usize> = (0..m).filter(|&a| zero_shift.get(a, a) != 1).collect();
    let exceptional_order = topological_order(&zero_shift);
    let passed = rigidity_failures.is_empty()
        && unknown.is_empty()
        && non_exceptional.is_empty()
        && exceptional_order.is_some();
    Ok(TiltingReport {
        kind: fam.kind.clone(),
        summands: m,
        window,
        rigidity_failures,
        unknown,
        non_exceptional,
        exceptional_order,
        passed,
    })
}

/// Order in which every nonzero `Hom(a, b)` with `a != b` has `a` before `b`.
fn topological_order(h: &IntMatrix) -> Option<Vec<usize>> {
    let m = h.rows;
    let mut indeg: Vec<usize> = (0..m).map(|b| (0..m).filter(|&a| a != b && h.get(a, b) != 0).count()).collect();
    let mut ready: BTreeSet<usize> = (0..m).filter(|&b| indeg[b] == 0).collect();
    let mut order = Vec::new();
    while let Some(&a) = ready.iter().next() {
        ready.remove(&a);
        order.push(a);
        for b in 0..m {
            if b != a && h.get(a, b) != 0 {
                indeg[b] -= 1;
                if indeg[b] == 0 {
                    ready.insert(b);
                }
            }
        }
    }
    (order.len() == m).then_some(order)
}

/// One nonzero or unresolved entry of a gluing obstruction.
#[derive(Clone, Debug, Serialize)]
pub struct ObstructionEntry {
    pub source: String,
    pub target: String,
    pub shift: i64,
    pub dim: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct GlueReport {
    pub ks: (i64, i64),
    pub images1: Vec<String>,
    pub images2: Vec<String>,
    /// `phi_{1,k1} psi_{2,k2}(T_2)`, the left-adjoint reduction of the second image.
    pub reduced_second: Vec<String>,
    /// Nonzero `Hom(phi_{1,k1} psi_{2,k2}(T_2), T_1[m])`, `m != 0`.
    pub obstruction_left: Vec<ObstructionEntry>,
    /// Nonzero `Hom(T_2, phi_{2,k2+1} psi_{1,k1}(T_1)[m])`, `m != 0`.
    pub obstruction_right: Vec<ObstructionEntry>,
    pub window: (i64, i64),
    pub vanishes: bool,
}

/// Glues `psi_{1,k1}(T_1)` and `psi_{2,k2}(T_2)` and computes both obstructions for the
/// recollement with `i_* = psi_{1,k1}` and `j_* = psi_{2,k2}`.
pub fn glue(
    ladder: &Ladder,
    t1: &TiltingFamily,
    t2: &TiltingFamily,
    k1: i64,
    k2: i64,
    window: Option<(i64, i64)>,
) -> Result<(TiltingFamily, GlueReport)> {
    let window = window.unwrap_or_else(|| default_window(&ladder.full));
    let img1: Vec<StableObject> =
        t1.objects.iter().map(|o| Ok(ladder.insert(1, k1, o)?.canonicalize())).collect::<Result<_>>()?;
    let img2: Vec<StableObject> =
        t2.objects.iter().map(|o| Ok(ladder.insert(2, k2, o)?.canonicalize())).collect::<Result<_>>()?;
    let red2: Vec<StableObject> = img2.iter().map(|o| ladder.reduce(1, k1, o)).collect::<Result<_>>()?;
    let back1: Vec<StableObject> = img1.iter().map(|o| ladder.reduce(2, k2 + 1, o)).collect::<Result<_>>()?;
    let shifts: Vec<i64> = (window.0..=window.1).filter(|&m| m != 0).collect();
    let mut left = Vec::new();
    for a in red2.iter().filter(|o| !o.is_zero()) {
        for b in &t1.objects {
            for &m in &shifts {
                record(&mut left, a, &b.suspend(m), m)?;
            }
        }
    }
    let mut right = Vec::new();
    for a in &t2.objects {
        for b in back1.iter().filter(|o| !o.is_zero()) {
            for &m in &shifts {
                record(&mut right, a, &b.suspend(m), m)?;
            }
        }
    }
    let vanishes = left.is_empty() && right.is_empty();
    let mut objects = img1.clone();
    objects.extend(img2.iter().cloned());
    let fam = TiltingFamily {
        weights: ladder.full.clone(),
        kind: format!("glued({},{})", t1.kind, t2.kind),
        objects,
    };
    let labels = |v: &[StableObject]| v.iter().map(|o| o.to_string()).collect::<Vec<_>>();
    let rep = GlueReport {
        ks: (k1, k2),
        images1: labels(&img1),
        images2: labels(&img2),
        reduced_second: labels(&red2),
        obstruction_left: left,
        obstruction_right: right,
        window,
        vanishes,
    };
    Ok((fam, rep))
}

fn record(out: &mut Vec<ObstructionEntry>, a: &StableObject, b: &StableObject, m: i64) -> Result<()> {
    let ans = hom_dim_ladder(a, b)?;
    if ans != HomAnswer::Dim(0) {
        out.push(ObstructionEntry { source: a.to_string(), target: b.to_string(), shift: m, dim: ans.to_string() });
    }
    Ok(())
}
