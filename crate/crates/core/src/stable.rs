//! Symbolic objects `U^l(x)[k]` of the stable category of graded CM modules, their
//! rewriting rules, a canonical form, and the Hom-dimension calculus.
//!
//! Rewriting rules:
//! - reflection at `i`: `U^l = U^{l'}((p_i - l_i) x_i)[-1]` with `l'_i = p_i - l_i`;
//! - folding: `(c) = [2]`;
//! - Serre functor `S = (-s)[n]`.
//!
//! The Hom calculus reduces a pair to a configuration inside one extended tilting cuboid
//! and reads off the answer there, or returns `Unknown`.

use crate::error::{Error, Result};
use crate::grading::{GradeElement, WeightSystem};
use std::collections::{HashSet, VecDeque};
use std::fmt;

/// Non-zero object `U^ell(twist)[shift]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct UObject {
    pub ell: GradeElement,
    pub twist: GradeElement,
    pub shift: i64,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum StableObject {
    Zero(WeightSystem),
    U(UObject),
}

/// Result of the Hom calculus.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum HomAnswer {
    Dim(usize),
    Unknown,
}

impl HomAnswer {
    pub fn dim(self) -> Option<usize> {
        match self {
            HomAnswer::Dim(d) => Some(d),
            HomAnswer::Unknown => None,
        }
    }
}

impl fmt::Display for HomAnswer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HomAnswer::Dim(d) => write!(f, "{d}"),
            HomAnswer::Unknown => write!(f, "?"),
        }
    }
}

fn check_ell(ell: &GradeElement) -> Result<()> {
    let w = ell.weights();
    if ell.level() != 0 || ell.coeffs().iter().zip(w.p()).any(|(&a, &p)| a < 1 || a > p - 1) {
        return Err(Error::OutOfRange(format!("U^l needs 1 <= l_i <= p_i - 1, got {ell}")));
    }
    Ok(())
}

impl StableObject {
    pub fn u(ell: GradeElement, twist: GradeElement, shift: i64) -> Result<Self> {
        check_ell(&ell)?;
        if ell.weights() != twist.weights() {
            return Err(Error::WeightMismatch(ell.weights().to_string(), twist.weights().to_string()));
        }
        Ok(StableObject::U(UObject { ell, twist, shift }))
    }

    /// `U^ell` with no twist or shift.
    pub fn cuboid(ell: &GradeElement) -> Result<Self> {
        Self::u(ell.clone(), ell.weights().zero(), 0)
    }

    /// `rho(k)(y) = U^s(y)`.
    pub fn rho(w: &WeightSystem, y: &GradeElement) -> Self {
        Self::u(w.s(), y.clone(), 0).expect("s is a valid cuboid parameter")
    }

    pub fn weights(&self) -> &WeightSystem {
        match self {
            StableObject::Zero(w) => w,
            StableObject::U(u) => u.ell.weights(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, StableObject::Zero(_))
    }

    pub fn as_u(&self) -> Option<&UObject> {
        match self {
            StableObject::Zero(_) => None,
            StableObject::U(u) => Some(u),
        }
    }

    /// Rewrites with coordinate `i` reflected; denotes the same object.
    pub fn reflect(&self, i: usize) -> Result<Self> {
        let u = self
            .as_u()
            .ok_or_else(|| Error::OutOfRange("reflect needs a non-zero object".into()))?;
        let w = u.ell.weights();
        if i >= w.n() {
            return Err(Error::OutOfRange(format!("coordinate {} out of range", i + 1)));
        }
        let gap = w.p()[i] - u.ell.coeff(i);
        let mut ell = u.ell.coeffs().to_vec();
        ell[i] = gap;
        Ok(StableObject::U(UObject {
            ell: w.normalize(&ell, 0),
            twist: u.twist.add_x(i, gap),
            shift: u.shift - 1,
        }))
    }

    /// Inverse of `reflect`.
    pub fn unreflect(&self, i: usize) -> Result<Self> {
        Ok(self.reflect(i)?.fold_by(-1))
    }

    /// Applies `(jc)[-2j]`, the identity functor up to isomorphism.
    fn fold_by(&self, j: i64) -> Self {
        match self {
            StableObject::Zero(_) => self.clone(),
            StableObject::U(u) => StableObject::U(UObject {
                ell: u.ell.clone(),
                twist: u.twist.add_c(j),
                shift: u.shift - 2 * j,
            }),
        }
    }

    /// Canonical form: among all `2^n` reflection patterns, fold each to shift 0 where
    /// parity allows, then take the least `(ell, twist coeffs, twist level)`.
    pub fn canonicalize(&self) -> Self {
        let u = match self {
            StableObject::Zero(_) => return self.clone(),
            StableObject::U(u) => u,
        };
        let n = u.ell.weights().n();
        let mut best: Option<(Vec<i64>, Vec<i64>, i64, UObject)> = None;
        for mask in 0u32..(1 << n) {
            let mut rep = self.clone();
            for i in 0..n {
                if mask >> i & 1 == 1 {
                    rep = rep.reflect(i).expect("non-zero");
                }
            }
            let r = rep.as_u().expect("non-zero").clone();
            let total = r.shift + 2 * r.twist.level();
            if total.rem_euclid(2) != 0 {
                continue;
            }
            let twist = r.twist.strip_level().add_c(total / 2);
            let key = (r.ell.coeffs().to_vec(), twist.coeffs().to_vec(), twist.level());
            if best.as_ref().map_or(true, |b| (&key.0, &key.1, key.2) < (&b.0, &b.1, b.2)) {
                let obj = UObject { ell: r.ell.clone(), twist, shift: 0 };
                best = Some((key.0, key.1, key.2, obj));
            }
        }
        StableObject::U(best.expect("some reflection pattern has even shift").3)
    }

    /// Equality as stable objects, decided on canonical forms.
    pub fn same_object(&self, other: &StableObject) -> bool {
        self.weights() == other.weights() && self.canonicalize() == other.canonicalize()
    }

    pub fn suspend(&self, m: i64) -> Self {
        match self {
            StableObject::Zero(_) => self.clone(),
            StableObject::U(u) => StableObject::U(UObject {
                ell: u.ell.clone(),
                twist: u.twist.clone(),
                shift: u.shift + m,
            })
            .canonicalize(),
        }
    }

    pub fn twist_obj(&self, y: &GradeElement) -> Self {
        match self {
            StableObject::Zero(_) => self.clone(),
            StableObject::U(u) => StableObject::U(UObject {
                ell: u.ell.clone(),
                twist: u.twist.add(y),
                shift: u.shift,
            })
            .canonicalize(),
        }
    }

    /// Serre functor `(omega)[n-2] = (-s)[n]`.
    pub fn serre(&self) -> Self {
        let w = self.weights();
        self.twist_obj(&w.s().neg()).suspend(w.n() as i64)
    }

    pub fn serre_inv(&self) -> Self {
        let w = self.weights();
        self.twist_obj(&w.s()).suspend(-(w.n() as i64))
    }

    /// Knorrer transport to weights `(2, p_1, .., p_n)`.
    pub fn knorrer_transport(&self) -> Self {
        let w = self.weights();
        let mut p = vec![2];
        p.extend_from_slice(w.p());
        let w2 = WeightSystem::new(p).expect("valid weights");
        match self {
            StableObject::Zero(_) => StableObject::Zero(w2),
            StableObject::U(u) => {
                let mut ell = vec![1];
                ell.extend_from_slice(u.ell.coeffs());
                let mut tw = vec![0];
                tw.extend_from_slice(u.twist.coeffs());
                StableObject::U(UObject {
                    ell: w2.normalize(&ell, 0),
                    twist: w2.normalize(&tw, u.twist.level()),
                    shift: u.shift,
                })
            }
        }
    }

    /// Parses `U[l_1,..,l_n](coeffs;level)[shift]` or `0`.
    pub fn parse(w: &WeightSystem, text: &str) -> Result<Self> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if t == "0" || t == "Zero" {
            return Ok(StableObject::Zero(w.clone()));
        }
        let bad = || Error::Parse(format!("expected `U[l..](coeffs;level)[shift]`, got `{text}`"));
        let rest = t.strip_prefix("U[").ok_or_else(bad)?;
        let (ells, rest) = rest.split_once(']').ok_or_else(bad)?;
        let (twist, rest) = if rest.starts_with('(') {
            let close = rest.find(')').ok_or_else(bad)?;
            (GradeElement::parse(w, &rest[..=close])?, &rest[close + 1..])
        } else {
            (w.zero(), rest)
        };
        let shift = if rest.is_empty() {
            0
        } else {
            let inner = rest.strip_prefix('[').and_then(|r| r.strip_suffix(']')).ok_or_else(bad)?;
            inner.parse::<i64>().map_err(|_| bad())?
        };
        let ell = ells
            .split(',')
            .map(|c| c.parse::<i64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| bad())?;
        if ell.len() != w.n() {
            return Err(bad());
        }
        Self::u(w.normalize(&ell, 0), twist, shift)
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            StableObject::Zero(_) => serde_json::json!({"zero": true, "text": "0"}),
            StableObject::U(u) => serde_json::json!({
                "ell": u.ell.coeffs(),
                "twist": u.twist.to_json(),
                "shift": u.shift,
                "text": self.to_string(),
            }),
        }
    }
}

impl fmt::Display for StableObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StableObject::Zero(_) => write!(f, "0"),
            StableObject::U(u) => {
                let ell: Vec<String> = u.ell.coeffs().iter().map(|a| a.to_string()).collect();
                write!(f, "U[{}]{}[{}]", ell.join(","), u.twist, u.shift)
            }
        }
    }
}

/// Search state: `Hom(U^a(w)[k], U^b)` with `w` at level 0.
#[derive(Clone, PartialEq, Eq, Hash)]
struct State {
    a: Vec<i64>,
    b: Vec<i64>,
    w: Vec<i64>,
    k: i64,
    serre_used: bool,
}

impl State {
    fn new(ws: &WeightSystem, a: Vec<i64>, b: Vec<i64>, w: GradeElement, k: i64, serre_used: bool) -> Self {
        debug_assert_eq!(w.weights(), ws);
        State { a, b, w: w.coeffs().to_vec(), k: k + 2 * w.level(), serre_used }
    }
}

/// Dimension of `Hom(A, B)` in the stable category, or `Unknown`.
pub fn hom_dim(a: &StableObject, b: &StableObject) -> Result<HomAnswer> {
    if a.weights() != b.weights() {
        return Err(Error::WeightMismatch(a.weights().to_string(), b.weights().to_string()));
    }
    let (ua, ub) = match (a, b) {
        (StableObject::U(ua), StableObject::U(ub)) => (ua, ub),
        _ => return Ok(HomAnswer::Dim(0)),
    };
    let ws = a.weights().clone();
    let n = ws.n();
    let p = ws.p().to_vec();
    let start = State::new(
        &ws,
        ua.ell.coeffs().to_vec(),
        ub.ell.coeffs().to_vec(),
        ua.twist.sub(&ub.twist),
        ua.shift - ub.shift,
        false,
    );
    let bound = 2 * p.iter().sum::<i64>() as usize;
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back((start, 0usize));
    while let Some((st, depth)) = queue.pop_front() {
        if let Some(ans) = match_rule(&ws, &st) {
            return Ok(ans);
        }
        if depth >= bound {
            continue;
        }
        let w = ws.normalize(&st.w, 0);
        let mut next = Vec::with_capacity(2 * n + 1);
        for i in 0..n {
            let ga = p[i] - st.a[i];
            let mut a2 = st.a.clone();
            a2[i] = ga;
            next.push(State::new(&ws, a2, st.b.clone(), w.add_x(i, ga), st.k - 1, st.serre_used));
            let gb = p[i] - st.b[i];
            let mut b2 = st.b.clone();
            b2[i] = gb;
            next.push(State::new(&ws, st.a.clone(), b2, w.add_x(i, -gb), st.k + 1, st.serre_used));
        }
        if !st.serre_used {
            next.push(State::new(
                &ws,
                st.b.clone(),
                st.a.clone(),
                ws.s().sub(&w),
                -(st.k + n as i64),
                true,
            ));
        }
        for s in next {
            if seen.insert(s.clone()) {
                queue.push_back((s, depth + 1));
            }
        }
    }
    Ok(HomAnswer::Unknown)
}

/// Reads the answer off a configuration inside the extended cuboid family `V_I`, where
/// `I` collects the coordinates with a non-minimal cuboid parameter.
fn match_rule(ws: &WeightSystem, st: &State) -> Option<HomAnswer> {
    let n = ws.n();
    let p = ws.p();
    let in_i: Vec<bool> = (0..n).map(|i| st.a[i] > 1 || st.b[i] > 1).collect();
    let hi: Vec<i64> = (0..n).map(|i| if in_i[i] { 0 } else { p[i] - 2 }).collect();
    let in_box = |v: &[i64]| (0..n).all(|i| v[i] >= 0 && v[i] <= hi[i]);
    let w = ws.normalize(&st.w, 0);
    let mut answer: Option<usize> = None;
    for y in ws.box_elements(&vec![0; n], &hi) {
        let t = w.add(&y);
        let x = t.coeffs();
        if !in_box(x) {
            continue;
        }
        let d = st.k + 2 * t.level() + x.iter().sum::<i64>();
        let d2: i64 = y.coeffs().iter().sum();
        let val = if d != d2 {
            0
        } else {
            let ell_ge = (0..n).all(|i| st.a[i] >= st.b[i]);
            let diff_ok = (0..n).all(|i| {
                let g = x[i] - y.coeff(i);
                g == 0 || g == 1
            });
            usize::from(ell_ge && diff_ok)
        };
        match answer {
            None => answer = Some(val),
            Some(prev) if prev != val => return None,
            _ => {}
        }
    }
    answer.map(HomAnswer::Dim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(p: &[i64]) -> WeightSystem {
        WeightSystem::new(p.to_vec()).unwrap()
    }

    fn cub(ws: &WeightSystem, ell: &[i64]) -> StableObject {
        StableObject::cuboid(&ws.normalize(ell, 0)).unwrap()
    }

    #[test]
    fn reflect_examples() {
        let w34 = w(&[3, 4]);
        let us = cub(&w34, &[1, 1]);
        let r = us.reflect(0).unwrap();
        let expect = StableObject::u(w34.normalize(&[2, 1], 0), w34.x_mul(0, 2), -1).unwrap();
        assert_eq!(r, expect);
        let rr = r.reflect(0).unwrap();
        let expect2 = StableObject::u(w34.s(), w34.c(), -2).unwrap();
        assert_eq!(rr, expect2);
        assert_eq!(r.unreflect(0).unwrap(), us);
        let w22 = w(&[2, 2]);
        let rho = StableObject::rho(&w22, &w22.zero());
        assert_eq!(
            rho.reflect(0).unwrap(),
            StableObject::u(w22.s(), w22.x(0), -1).unwrap()
        );
    }

    #[test]
    fn canonical_examples() {
        let w34 = w(&[3, 4]);
        let us = cub(&w34, &[1, 1]);
        let folded = StableObject::u(w34.s(), w34.c(), -2).unwrap();
        assert_eq!(folded.canonicalize(), us.canonicalize());
        let top = cub(&w34, &[2, 3]);
        let kosz = StableObject::u(w34.s(), w34.s(), -2).unwrap();
        assert_eq!(top.canonicalize(), kosz.canonicalize());
        assert_eq!(us.suspend(0), us.canonicalize());
        for ell in [[1, 1], [2, 3], [1, 2]] {
            let o = cub(&w34, &ell);
            assert_eq!(o.suspend(2), o.twist_obj(&w34.c()));
        }
        let two_c_minus_s = w34.c().scale(2).sub(&w34.s());
        let o = StableObject::u(two_c_minus_s.clone(), two_c_minus_s, 0).unwrap();
        assert_eq!(us.suspend(2), o.canonicalize());
        assert_eq!(us.serre().serre_inv(), us.canonicalize());
    }

    #[test]
    fn hom_examples() {
        let w34 = w(&[3, 4]);
        let us = cub(&w34, &[1, 1]);
        let top = cub(&w34, &[2, 3]);
        assert_eq!(hom_dim(&top, &us).unwrap(), HomAnswer::Dim(1));
        assert_eq!(hom_dim(&us, &cub(&w34, &[2, 1])).unwrap(), HomAnswer::Dim(0));
        assert_eq!(hom_dim(&us, &us).unwrap(), HomAnswer::Dim(1));
        assert_eq!(hom_dim(&us, &us.suspend(1)).unwrap(), HomAnswer::Dim(0));
        assert_eq!(hom_dim(&us, &us.serre()).unwrap(), HomAnswer::Dim(1));
        let z = StableObject::Zero(w34.clone());
        assert_eq!(hom_dim(&z, &us).unwrap(), HomAnswer::Dim(0));
        assert!(hom_dim(&us, &cub(&w(&[3, 3]), &[1, 1])).is_err());
    }

    #[test]
    fn koszul_family_follows_the_sigma_rule() {
        let w34 = w(&[3, 4]);
        let boxes = w34.box_elements(&[0, 0], &[1, 2]);
        for x in &boxes {
            for y in &boxes {
                let a = StableObject::u(w34.s(), x.clone(), -x.sigma().unwrap()).unwrap();
                let b = StableObject::u(w34.s(), y.clone(), -y.sigma().unwrap()).unwrap();
                let diff = x.sub(y);
                let expect = usize::from(diff.is_nonneg() && diff.leq(&w34.s()));
                assert_eq!(hom_dim(&a, &b).unwrap(), HomAnswer::Dim(expect), "x={x} y={y}");
            }
        }
    }

    #[test]
    fn text_round_trip() {
        let w34 = w(&[3, 4]);
        let o = StableObject::u(w34.normalize(&[2, 1], 0), w34.normalize(&[1, 3], -1), 3).unwrap();
        assert_eq!(StableObject::parse(&w34, &o.to_string()).unwrap(), o);
        assert_eq!(StableObject::parse(&w34, "U[1,1]").unwrap(), cub(&w34, &[1, 1]));
        assert!(StableObject::parse(&w34, "0").unwrap().is_zero());
        assert!(StableObject::parse(&w34, "U[3,1]").is_err());
    }

    #[test]
    fn knorrer_examples() {
        let w3 = w(&[3]);
        let t = cub(&w3, &[1]).knorrer_transport();
        assert_eq!(t, cub(&w(&[2, 3]), &[1, 1]));
        assert!(StableObject::Zero(w3).knorrer_transport().is_zero());
    }

    fn arb_obj() -> impl Strategy<Value = StableObject> {
        prop::sample::select(vec![vec![3i64, 4], vec![2, 2, 2], vec![3, 4, 5], vec![2, 3]]).prop_flat_map(|p| {
            let n = p.len();
            (Just(p), prop::collection::vec(0i64..100, n), prop::collection::vec(-9i64..9, n), -3i64..3, -6i64..6)
        })
        .prop_map(|(p, e, t, lv, k)| {
            let ws = WeightSystem::new(p.clone()).unwrap();
            let ell: Vec<i64> = e.iter().zip(&p).map(|(a, pi)| 1 + a % (pi - 1)).collect();
            StableObject::u(ws.normalize(&ell, 0), ws.normalize(&t, lv), k).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]

        #[test]
        fn canonical_form_laws(o in arb_obj(), i in 0usize..3) {
            let c = o.canonicalize();
            prop_assert_eq!(c.canonicalize(), c.clone());
            prop_assert_eq!(c.as_u().unwrap().shift, 0);
            let i = i % o.weights().n();
            prop_assert_eq!(o.reflect(i).unwrap().canonicalize(), c.clone());
            prop_assert_eq!(o.fold_by(3).canonicalize(), c.clone());
            prop_assert_eq!(o.serre().serre_inv(), c);
        }

        #[test]
        fn serre_duality_in_the_calculus(a in arb_obj(), m in -3i64..3) {
            let ws = a.weights().clone();
            let b = StableObject::u(ws.s(), ws.zero(), m).unwrap();
            let lhs = hom_dim(&a, &b).unwrap();
            let rhs = hom_dim(&b, &a.serre()).unwrap();
            if let (HomAnswer::Dim(x), HomAnswer::Dim(y)) = (lhs, rhs) {
                prop_assert_eq!(x, y);
            }
        }
    }
}
