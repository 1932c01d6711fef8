//! Quivers with relations and their derived invariants: Nakayama algebras, tensor
//! products, the algebras `Lambda(q)`, replicated algebras, `Gamma^t`, Dynkin path
//! algebras, Cartan matrices and Coxeter polynomials.
//!
//! Cartan convention: `C[i][j] = 1` (or the path count) when there is a nonzero path
//! class from vertex `i` to vertex `j`. Every quiver built here is commutative in the
//! sense that all paths between two vertices agree up to the listed commutativity
//! relations, so a single path class per pair suffices.
//!
//! Equal Coxeter polynomials are a necessary condition for derived equivalence, not a
//! proof of it.

use crate::error::{Error, Result};
use crate::grading::{GradeElement, WeightSystem};
use crate::linalg::{integral, IntMatrix, RatMatrix};
use serde::Serialize;
use std::collections::VecDeque;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Arrow {
    pub src: usize,
    pub dst: usize,
    pub label: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RelationKind {
    Commutativity,
    Nilpotency,
    Zero,
}

/// A relation given by arrow-index paths: two paths for a commutativity square, one
/// path for a zero relation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Relation {
    pub kind: RelationKind,
    pub paths: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Quiver {
    pub arrows: Vec<Arrow>,
    pub relations: Vec<Relation>,
}

impl Quiver {
    pub fn count(&self, kind: RelationKind) -> usize {
        self.relations.iter().filter(|r| r.kind == kind).count()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlgebraPresentation {
    pub name: String,
    pub vertices: Vec<String>,
    pub quiver: Option<Quiver>,
    pub cartan: IntMatrix,
}

impl AlgebraPresentation {
    pub fn size(&self) -> usize {
        self.vertices.len()
    }

    /// Reflexive reachability along arrows.
    fn reach(&self, q: &Quiver) -> Vec<Vec<bool>> {
        reach_matrix(self.size(), &q.arrows)
    }

    /// Cartan matrix recomputed from the quiver and its relations: a pair is nonzero when
    /// it is connected by a path and no zero or nilpotency relation fits between them.
    pub fn quiver_cartan(&self) -> Option<IntMatrix> {
        let q = self.quiver.as_ref()?;
        let n = self.size();
        let reach = self.reach(q);
        let zeros: Vec<(usize, usize)> = q
            .relations
            .iter()
            .filter(|r| r.kind != RelationKind::Commutativity)
            .map(|r| {
                let p = &r.paths[0];
                (q.arrows[p[0]].src, q.arrows[*p.last().expect("nonempty path")].dst)
            })
            .collect();
        let mut c = IntMatrix::zeros(n, n);
        for u in 0..n {
            for w in 0..n {
                if reach[u][w] && !zeros.iter().any(|&(a, b)| reach[u][a] && reach[b][w]) {
                    c.set(u, w, 1);
                }
            }
        }
        Some(c)
    }

    pub fn coxeter_polynomial(&self) -> Result<IntPolynomial> {
        coxeter_polynomial(&self.cartan)
    }

    /// Graphviz digraph; relations are dashed edges between their endpoints.
    pub fn to_dot(&self) -> String {
        let mut out = format!("digraph \"{}\" {{\n  rankdir=LR;\n", self.name);
        for (i, v) in self.vertices.iter().enumerate() {
            out.push_str(&format!("  v{i} [label=\"{v}\"];\n"));
        }
        if let Some(q) = &self.quiver {
            for a in &q.arrows {
                out.push_str(&format!("  v{} -> v{} [label=\"{}\"];\n", a.src, a.dst, a.label));
            }
            for r in &q.relations {
                let p = &r.paths[0];
                let (a, b) = (q.arrows[p[0]].src, q.arrows[*p.last().expect("nonempty")].dst);
                let tag = match r.kind {
                    RelationKind::Commutativity => "comm",
                    RelationKind::Nilpotency => "nil",
                    RelationKind::Zero => "zero",
                };
                out.push_str(&format!(
                    "  v{a} -> v{b} [style=dashed, color=gray, constraint=false, label=\"{tag}\"];\n"
                ));
            }
        }
        out.push_str("}\n");
        out
    }

    pub fn cartan_csv(&self) -> String {
        matrix_csv(&self.vertices, &self.cartan)
    }
}

/// CSV with a header row of labels and one labelled row per matrix row.
pub fn matrix_csv(labels: &[String], m: &IntMatrix) -> String {
    let quote = |s: &str| format!("\"{}\"", s.replace('"', "\"\""));
    let mut out = String::from("\"\"");
    for l in labels {
        out.push(',');
        out.push_str(&quote(l));
    }
    out.push('\n');
    for (i, l) in labels.iter().enumerate() {
        out.push_str(&quote(l));
        for j in 0..m.cols {
            out.push_str(&format!(",{}", m.get(i, j)));
        }
        out.push('\n');
    }
    out
}

fn reach_matrix(n: usize, arrows: &[Arrow]) -> Vec<Vec<bool>> {
    let mut adj = vec![Vec::new(); n];
    for a in arrows {
        adj[a.src].push(a.dst);
    }
    (0..n)
        .map(|u| {
            let mut seen = vec![false; n];
            seen[u] = true;
            let mut queue = VecDeque::from([u]);
            while let Some(v) = queue.pop_front() {
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            seen
        })
        .collect()
}

/// Some arrow path from `u` to `w`, by breadth-first search.
fn find_path(n: usize, arrows: &[Arrow], u: usize, w: usize) -> Option<Vec<usize>> {
    let mut prev: Vec<Option<usize>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[u] = true;
    let mut queue = VecDeque::from([u]);
    while let Some(v) = queue.pop_front() {
        if v == w {
            let mut path = Vec::new();
            let mut cur = w;
            while cur != u {
                let a = prev[cur].expect("visited");
                path.push(a);
                cur = arrows[a].src;
            }
            path.reverse();
            return Some(path);
        }
        for (ai, a) in arrows.iter().enumerate() {
            if a.src == v && !seen[a.dst] {
                seen[a.dst] = true;
                prev[a.dst] = Some(ai);
                queue.push_back(a.dst);
            }
        }
    }
    None
}

/// Minimal zero relations realizing `cartan` on the given arrows: pairs connected by a
/// path whose class vanishes while every shorter class inside it survives.
fn minimal_zero_relations(n: usize, arrows: &[Arrow], cartan: &IntMatrix) -> Vec<Relation> {
    let reach = reach_matrix(n, arrows);
    let mut out = Vec::new();
    for u in 0..n {
        for w in 0..n {
            if u == w || !reach[u][w] || cartan.get(u, w) != 0 {
                continue;
            }
            let left_ok = arrows.iter().filter(|a| a.src == u && reach[a.dst][w]).all(|a| cartan.get(a.dst, w) != 0);
            let right_ok = arrows.iter().filter(|a| a.dst == w && reach[u][a.src]).all(|a| cartan.get(u, a.src) != 0);
            if left_ok && right_ok {
                let path = find_path(n, arrows, u, w).expect("reachable");
                out.push(Relation { kind: RelationKind::Zero, paths: vec![path] });
            }
        }
    }
    out
}

/// Linear `A_n` modulo paths of length `m`.
pub fn nakayama(n: usize, m: usize) -> Result<AlgebraPresentation> {
    if n == 0 || m == 0 {
        return Err(Error::OutOfRange(format!("nakayama({n}, {m}) needs n, m >= 1")));
    }
    let arrows: Vec<Arrow> =
        (0..n - 1).map(|i| Arrow { src: i, dst: i + 1, label: format!("a{}", i + 1) }).collect();
    let relations = (0..n)
        .filter(|i| i + m < n)
        .map(|i| Relation { kind: RelationKind::Nilpotency, paths: vec![(i..i + m).collect()] })
        .collect();
    let mut c = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n.min(i + m) {
            c.set(i, j, 1);
        }
    }
    Ok(AlgebraPresentation {
        name: format!("A{n}({m})"),
        vertices: (1..=n).map(|i| i.to_string()).collect(),
        quiver: Some(Quiver { arrows, relations }),
        cartan: c,
    })
}

/// Tensor product: product quiver with commutativity squares and lifted relations;
/// vertex `(a, b)` has index `a * |B| + b`.
pub fn tensor(a: &AlgebraPresentation, b: &AlgebraPresentation) -> AlgebraPresentation {
    let nb = b.size();
    let idx = |i: usize, j: usize| i * nb + j;
    let mut vertices = Vec::new();
    for va in &a.vertices {
        for vb in &b.vertices {
            vertices.push(format!("{va}|{vb}"));
        }
    }
    let quiver = match (&a.quiver, &b.quiver) {
        (Some(qa), Some(qb)) => {
            let mut arrows = Vec::new();
            // arrow index of (arrow of A, vertex of B) and (vertex of A, arrow of B)
            let mut a_lift = vec![vec![0; nb]; qa.arrows.len()];
            let mut b_lift = vec![vec![0; qb.arrows.len()]; a.size()];
            for (k, ar) in qa.arrows.iter().enumerate() {
                for j in 0..nb {
                    a_lift[k][j] = arrows.len();
                    arrows.push(Arrow { src: idx(ar.src, j), dst: idx(ar.dst, j), label: ar.label.clone() });
                }
            }
            for i in 0..a.size() {
                for (k, br) in qb.arrows.iter().enumerate() {
                    b_lift[i][k] = arrows.len();
                    arrows.push(Arrow { src: idx(i, br.src), dst: idx(i, br.dst), label: br.label.clone() });
                }
            }
            let mut relations = Vec::new();
            for (ka, ar) in qa.arrows.iter().enumerate() {
                for (kb, br) in qb.arrows.iter().enumerate() {
                    let p1 = vec![a_lift[ka][br.src], b_lift[ar.dst][kb]];
                    let p2 = vec![b_lift[ar.src][kb], a_lift[ka][br.dst]];
                    relations.push(Relation { kind: RelationKind::Commutativity, paths: vec![p1, p2] });
                }
            }
            for r in &qa.relations {
                for j in 0..nb {
                    let paths = r.paths.iter().map(|p| p.iter().map(|&k| a_lift[k][j]).collect()).collect();
                    relations.push(Relation { kind: r.kind, paths });
                }
            }
            for i in 0..a.size() {
                for r in &qb.relations {
                    let paths = r.paths.iter().map(|p| p.iter().map(|&k| b_lift[i][k]).collect()).collect();
                    relations.push(Relation { kind: r.kind, paths });
                }
            }
            Some(Quiver { arrows, relations })
        }
        _ => None,
    };
    AlgebraPresentation {
        name: format!("{}x{}", a.name, b.name),
        vertices,
        quiver,
        cartan: a.cartan.kronecker(&b.cartan),
    }
}

/// The algebra `Lambda(q)` on the vertices `[0, delta]`, listed in descending
/// lexicographic order so that it coincides with the tensor product of the
/// `nakayama(p_i - 1, q_i)` factor by factor.
pub fn lambda_q(w: &WeightSystem, q: &[i64]) -> Result<AlgebraPresentation> {
    let n = w.n();
    if q.len() != n || q.iter().zip(w.p()).any(|(&qi, &p)| qi < 1 || qi > p - 1) {
        return Err(Error::OutOfRange(format!("q = {q:?} must satisfy 1 <= q_i <= p_i - 1 for {w}")));
    }
    let mut verts = w.box_elements(&vec![0; n], w.delta().coeffs());
    verts.reverse();
    let pos = |x: &GradeElement| verts.iter().position(|v| v == x);
    let mut arrows = Vec::new();
    // arrow index by (vertex, direction)
    let mut by_dir = vec![vec![None; n]; verts.len()];
    for (u, x) in verts.iter().enumerate() {
        for i in 0..n {
            if q[i] >= 2 && x.coeff(i) >= 1 {
                let v = pos(&x.add_x(i, -1)).expect("inside the box");
                by_dir[u][i] = Some(arrows.len());
                arrows.push(Arrow { src: u, dst: v, label: format!("x{}", i + 1) });
            }
        }
    }
    let mut relations = Vec::new();
    for (u, x) in verts.iter().enumerate() {
        for i in 0..n {
            for j in i + 1..n {
                if let (Some(ai), Some(aj)) = (by_dir[u][i], by_dir[u][j]) {
                    let vi = arrows[ai].dst;
                    let vj = arrows[aj].dst;
                    if let (Some(bj), Some(bi)) = (by_dir[vi][j], by_dir[vj][i]) {
                        relations.push(Relation { kind: RelationKind::Commutativity, paths: vec![vec![ai, bj], vec![aj, bi]] });
                    }
                }
            }
            if q[i] >= 2 && x.coeff(i) >= q[i] {
                let mut path = Vec::new();
                let mut cur = u;
                for _ in 0..q[i] {
                    let a = by_dir[cur][i].expect("inside the box");
                    path.push(a);
                    cur = arrows[a].dst;
                }
                relations.push(Relation { kind: RelationKind::Nilpotency, paths: vec![path] });
            }
        }
    }
    let m = verts.len();
    let mut c = IntMatrix::zeros(m, m);
    for (a, x) in verts.iter().enumerate() {
        for (b, y) in verts.iter().enumerate() {
            let d = x.sub(y);
            if d.level() == 0 && d.coeffs().iter().zip(q).all(|(&di, &qi)| di < qi) {
                c.set(a, b, 1);
            }
        }
    }
    Ok(AlgebraPresentation {
        name: format!("Lambda{q:?}"),
        vertices: verts.iter().map(|v| v.to_string()).collect(),
        quiver: Some(Quiver { arrows, relations }),
        cartan: c,
    })
}

fn sources_and_sinks(a: &AlgebraPresentation) -> Option<(usize, usize)> {
    let q = a.quiver.as_ref()?;
    let n = a.size();
    let sources: Vec<usize> = (0..n).filter(|&v| q.arrows.iter().all(|ar| ar.dst != v)).collect();
    let sinks: Vec<usize> = (0..n).filter(|&v| q.arrows.iter().all(|ar| ar.src != v)).collect();
    match (sources.as_slice(), sinks.as_slice()) {
        ([s], [t]) => Some((*s, *t)),
        _ => None,
    }
}

/// The `m`-replicated algebra: `m + 1` copies of `A` with Cartan blocks `C_A` on the
/// diagonal and `C_A^T` just below it. A quiver is attached when `A` has a unique source
/// and a unique sink; copy `r` then connects from its sink to the source of copy `r - 1`.
pub fn replicated(a: &AlgebraPresentation, m: usize) -> AlgebraPresentation {
    if m == 0 {
        return a.clone();
    }
    let na = a.size();
    let total = na * (m + 1);
    let mut c = IntMatrix::zeros(total, total);
    for r in 0..=m {
        for i in 0..na {
            for j in 0..na {
                c.set(r * na + i, r * na + j, a.cartan.get(i, j));
                if r > 0 {
                    c.set(r * na + i, (r - 1) * na + j, a.cartan.get(j, i));
                }
            }
        }
    }
    let mut vertices = Vec::new();
    for r in 0..=m {
        for v in &a.vertices {
            vertices.push(format!("{v}#{r}"));
        }
    }
    let quiver = sources_and_sinks(a).map(|(src, sink)| {
        let qa = a.quiver.as_ref().expect("checked");
        let mut arrows = Vec::new();
        let mut relations = Vec::new();
        for r in 0..=m {
            let off = arrows.len();
            for ar in &qa.arrows {
                arrows.push(Arrow { src: r * na + ar.src, dst: r * na + ar.dst, label: ar.label.clone() });
            }
            for rel in qa.relations.iter().filter(|rel| rel.kind == RelationKind::Commutativity) {
                let paths = rel.paths.iter().map(|p| p.iter().map(|k| k + off).collect()).collect();
                relations.push(Relation { kind: rel.kind, paths });
            }
        }
        for r in 1..=m {
            arrows.push(Arrow { src: r * na + sink, dst: (r - 1) * na + src, label: "b".into() });
        }
        relations.extend(minimal_zero_relations(total, &arrows, &c));
        Quiver { arrows, relations }
    });
    AlgebraPresentation { name: format!("{}^({m})", a.name), vertices, quiver, cartan: c }
}

/// The quiver `Gamma^t`: slabs `[s + (p_t - 2) x_t, s + delta]` (coordinate `t` frozen)
/// indexed by copies `0..=p_t-2`, arrows `x_k` inside each slab and one connecting arrow
/// from the top of copy `i` to the bottom of copy `i + 1`. Vertices are listed copy
/// descending, then slab element ascending, which matches the block order of
/// `replicated(tensor of nakayama(p_k - 1, p_k - 1) over k != t, p_t - 2)`.
pub fn gamma_quiver(w: &WeightSystem, t: usize) -> Result<AlgebraPresentation> {
    let n = w.n();
    if t >= n {
        return Err(Error::OutOfRange(format!("t = {} is not in 1..={n}", t + 1)));
    }
    let p = w.p();
    let copies = (p[t] - 1) as usize;
    let mut lo = vec![1; n];
    lo[t] = p[t] - 1;
    let hi: Vec<i64> = p.iter().map(|x| x - 1).collect();
    let slab = w.box_elements(&lo, &hi);
    let ns = slab.len();
    let idx = |copy: usize, e: usize| (copies - 1 - copy) * ns + e;
    let mut vertices = vec![String::new(); ns * copies];
    for copy in 0..copies {
        for (e, l) in slab.iter().enumerate() {
            vertices[idx(copy, e)] = format!("{l}#{copy}");
        }
    }
    let mut arrows = Vec::new();
    let mut relations = Vec::new();
    let others: Vec<usize> = (0..n).filter(|&k| k != t).collect();
    for copy in 0..copies {
        let mut by_dir = vec![vec![None; n]; ns];
        for (e, l) in slab.iter().enumerate() {
            for &k in &others {
                if l.coeff(k) < p[k] - 1 {
                    let f = slab.iter().position(|m| m == &l.add_x(k, 1)).expect("inside the slab");
                    by_dir[e][k] = Some(arrows.len());
                    arrows.push(Arrow { src: idx(copy, e), dst: idx(copy, f), label: format!("x{}", k + 1) });
                }
            }
        }
        for e in 0..ns {
            for (a, &k1) in others.iter().enumerate() {
                for &k2 in &others[a + 1..] {
                    if let (Some(a1), Some(a2)) = (by_dir[e][k1], by_dir[e][k2]) {
                        let e1 = arrows[a1].dst % ns;
                        let e2 = arrows[a2].dst % ns;
                        if let (Some(b2), Some(b1)) = (by_dir[e1][k2], by_dir[e2][k1]) {
                            relations.push(Relation {
                                kind: RelationKind::Commutativity,
                                paths: vec![vec![a1, b2], vec![a2, b1]],
                            });
                        }
                    }
                }
            }
        }
    }
    let label: String = others.iter().map(|k| format!("x{}", k + 1)).collect::<Vec<_>>().join("");
    for copy in 0..copies.saturating_sub(1) {
        arrows.push(Arrow { src: idx(copy, ns - 1), dst: idx(copy + 1, 0), label: label.clone() });
    }
    let mut base = nakayama(1, 1)?;
    for &k in &others {
        let f = (p[k] - 1) as usize;
        base = tensor(&base, &nakayama(f, f)?);
    }
    let cartan = replicated(&base, copies - 1).cartan;
    relations.extend(minimal_zero_relations(ns * copies, &arrows, &cartan));
    Ok(AlgebraPresentation {
        name: format!("Gamma{}{}", t + 1, w),
        vertices,
        quiver: Some(Quiver { arrows, relations }),
        cartan,
    })
}

/// Dynkin quivers with a fixed orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dynkin {
    /// Linear orientation `1 -> 2 -> ... -> k`.
    A(usize),
    /// Three arms pointing into the center.
    D4Subspace,
    /// Center pointing out to three arms.
    D4Source,
    /// Arms of lengths 1, 2, 2 pointing into the center.
    E6,
    /// Arms of lengths 1, 2, 4 pointing into the center.
    E8,
}

fn arms_into_center(name: &str, arms: &[usize]) -> (String, usize, Vec<(usize, usize)>) {
    let mut edges = Vec::new();
    let mut next = 1;
    for &len in arms {
        // arm vertices next..next+len, outermost first
        for k in 0..len {
            let v = next + k;
            let tgt = if k + 1 == len { 0 } else { v + 1 };
            edges.push((v, tgt));
        }
        next += len;
    }
    (name.to_string(), next, edges)
}

pub fn dynkin(kind: Dynkin) -> Result<AlgebraPresentation> {
    let (name, n, edges) = match kind {
        Dynkin::A(k) => {
            if k == 0 {
                return Err(Error::OutOfRange("A_0 is empty".into()));
            }
            (format!("A{k}"), k, (0..k - 1).map(|i| (i, i + 1)).collect())
        }
        Dynkin::D4Subspace => arms_into_center("D4", &[1, 1, 1]),
        Dynkin::D4Source => ("D4'".to_string(), 4, vec![(0, 1), (0, 2), (0, 3)]),
        Dynkin::E6 => arms_into_center("E6", &[1, 2, 2]),
        Dynkin::E8 => arms_into_center("E8", &[1, 2, 4]),
    };
    let arrows: Vec<Arrow> = edges
        .iter()
        .enumerate()
        .map(|(i, &(s, d))| Arrow { src: s, dst: d, label: format!("a{}", i + 1) })
        .collect();
    let reach = reach_matrix(n, &arrows);
    let mut c = IntMatrix::zeros(n, n);
    for u in 0..n {
        for w in 0..n {
            if reach[u][w] {
                c.set(u, w, 1);
            }
        }
    }
    Ok(AlgebraPresentation {
        name,
        vertices: (1..=n).map(|i| i.to_string()).collect(),
        quiver: Some(Quiver { arrows, relations: Vec::new() }),
        cartan: c,
    })
}

/// Integer polynomial, coefficients in increasing degree, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct IntPolynomial(pub Vec<i64>);

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        IntPolynomial(coeffs)
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (d, &c) in self.0.iter().enumerate().rev() {
            if c == 0 && !(self.0.len() == 1) {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match d {
                0 => write!(f, "{a}")?,
                _ => {
                    if a != 1 {
                        write!(f, "{a}")?;
                    }
                    if d == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{d}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Characteristic polynomial of the Coxeter matrix `-C^{-T} C`, computed exactly and
/// cross-checked against the convention `-C^{-1} C^T`.
pub fn coxeter_polynomial(cartan: &IntMatrix) -> Result<IntPolynomial> {
    let c = RatMatrix::from_int(cartan);
    let ct = c.transpose();
    let phi = ct.inverse()?.mul(&c).neg();
    let alt = c.inverse()?.mul(&ct).neg();
    let p = integral(&phi.charpoly())?;
    let q = integral(&alt.charpoly())?;
    if p != q {
        return Err(Error::NonIntegral(format!("Coxeter conventions disagree: {p:?} vs {q:?}")));
    }
    Ok(IntPolynomial::new(p))
}

/// One row of an invariant suite: algebras expected to share a Coxeter polynomial.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteRow {
    pub case: String,
    pub algebras: Vec<String>,
    pub polynomials: Vec<String>,
    pub determinants: Vec<String>,
    pub equal: bool,
}

fn suite_row(case: String, algs: &[AlgebraPresentation]) -> Result<SuiteRow> {
    let polys = algs.iter().map(|a| a.coxeter_polynomial()).collect::<Result<Vec<_>>>()?;
    let dets: Vec<_> = algs.iter().map(|a| a.cartan.determinant()).collect();
    let equal = polys.windows(2).all(|w| w[0] == w[1])
        && dets.windows(2).all(|w| num_traits::Signed::abs(&w[0]) == num_traits::Signed::abs(&w[1]));
    Ok(SuiteRow {
        case,
        algebras: algs.iter().map(|a| a.name.clone()).collect(),
        polynomials: polys.iter().map(|p| p.to_string()).collect(),
        determinants: dets.iter().map(|d| d.to_string()).collect(),
        equal,
    })
}

fn full_nakayama_tensor(p: &[i64]) -> Result<AlgebraPresentation> {
    let mut acc = nakayama(1, 1)?;
    for &pi in p {
        let f = (pi - 1) as usize;
        acc = tensor(&acc, &nakayama(f, f)?);
    }
    Ok(acc)
}

/// Nakayama algebras `A_m(a)`, `A_m(b)` and `A_{a-1} x A_{b-1}` with `m = (a-1)(b-1)`.
pub fn happel_seidel_suite() -> Result<Vec<SuiteRow>> {
    [(3usize, 3usize), (3, 4), (3, 5), (4, 4), (2, 7)]
        .iter()
        .map(|&(a, b)| {
            let m = (a - 1) * (b - 1);
            let algs = [
                nakayama(m, a)?,
                nakayama(m, b)?,
                tensor(&nakayama(a - 1, a - 1)?, &nakayama(b - 1, b - 1)?),
            ];
            suite_row(format!("({a},{b})"), &algs)
        })
        .collect()
}

/// `Gamma^t` against the full tensor of Nakayama algebras, every `t`.
pub fn replicated_suite() -> Result<Vec<SuiteRow>> {
    let mut rows = Vec::new();
    for p in [vec![3i64, 4], vec![3, 4, 5], vec![2, 3, 4]] {
        let w = WeightSystem::new(p.clone())?;
        let base = full_nakayama_tensor(&p)?;
        for t in 0..w.n() {
            rows.push(suite_row(format!("{w} t={}", t + 1), &[gamma_quiver(&w, t)?, base.clone()])?);
        }
    }
    Ok(rows)
}

/// Tensor products of linear quivers against Dynkin types, plus tensor products of
/// linear quivers against replicated linear quivers.
pub fn dynkin_suite() -> Result<Vec<SuiteRow>> {
    let a = |k| dynkin(Dynkin::A(k));
    let mut rows = vec![
        suite_row("A2xA2 ~ D4".into(), &[tensor(&a(2)?, &a(2)?), dynkin(Dynkin::D4Subspace)?, dynkin(Dynkin::D4Source)?])?,
        suite_row("A2xA3 ~ E6".into(), &[tensor(&a(2)?, &a(3)?), dynkin(Dynkin::E6)?])?,
        suite_row("A2xA4 ~ E8".into(), &[tensor(&a(2)?, &a(4)?), dynkin(Dynkin::E8)?])?,
    ];
    for (l, m) in [(2usize, 2usize), (2, 3), (3, 3)] {
        rows.push(suite_row(
            format!("A{l}xA{m} ~ A{m}^({})", l - 1),
            &[tensor(&a(l)?, &a(m)?), replicated(&nakayama(m, m)?, l - 1)],
        )?);
    }
    Ok(rows)
}

pub fn suite(name: &str) -> Result<Vec<SuiteRow>> {
    match name {
        "happel-seidel" => happel_seidel_suite(),
        "replicated" => replicated_suite(),
        "dynkin" => dynkin_suite(),
        other => Err(Error::Parse(format!("unknown suite {other:?}"))),
    }
}
