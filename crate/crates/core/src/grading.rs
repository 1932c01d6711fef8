//! The grading group `L(p) = <x_1, .., x_n, c | p_i x_i = c>`.
//!
//! Every element has a unique normal form `sum lambda_i x_i + level * c` with
//! `0 <= lambda_i < p_i`, and that normal form is the only representation stored.
//! Indices of generators are 0-based throughout the library API.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

/// Weight vector `(p_1, .., p_n)`; identity is structural.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightSystem(Arc<[i64]>);

#[derive(Serialize, Deserialize)]
struct WeightsJson {
    p: Vec<i64>,
}

impl WeightSystem {
    pub fn new(p: Vec<i64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::InvalidWeights("at least one weight is required".into()));
        }
        if let Some(bad) = p.iter().find(|&&x| x < 2) {
            return Err(Error::InvalidWeights(format!("weight {bad} is below 2")));
        }
        if p.iter().any(|&x| x > 255) {
            return Err(Error::InvalidWeights("weights above 255 are not supported".into()));
        }
        Ok(WeightSystem(p.into()))
    }

    /// Parses a comma separated weight list such as `3,4`.
    pub fn parse(text: &str) -> Result<Self> {
        let p = text
            .split(',')
            .map(|t| t.trim().parse::<i64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Parse(format!("bad weight list `{text}`: {e}")))?;
        Self::new(p)
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn p(&self) -> &[i64] {
        &self.0
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(WeightsJson { p: self.p().to_vec() }).expect("plain json")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let w: WeightsJson =
            serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        Self::new(w.p)
    }

    /// Normal form of `sum raw_i x_i + level c`.
    pub fn normalize(&self, raw: &[i64], level: i64) -> GradeElement {
        assert_eq!(raw.len(), self.n(), "coefficient count must match the weight system");
        let mut coeffs = Vec::with_capacity(raw.len());
        let mut level = level;
        for (&r, &p) in raw.iter().zip(self.p()) {
            coeffs.push(r.rem_euclid(p));
            level += r.div_euclid(p);
        }
        GradeElement { w: self.clone(), coeffs, level }
    }

    /// Builds an element that must already be in normal form.
    pub fn element(&self, coeffs: Vec<i64>, level: i64) -> Result<GradeElement> {
        if coeffs.len() != self.n() {
            return Err(Error::Parse(format!(
                "expected {} coefficients, got {}",
                self.n(),
                coeffs.len()
            )));
        }
        if coeffs.iter().zip(self.p()).any(|(&a, &p)| a < 0 || a >= p) {
            return Err(Error::Parse(format!("coefficients {coeffs:?} are not in normal form")));
        }
        Ok(GradeElement { w: self.clone(), coeffs, level })
    }

    pub fn zero(&self) -> GradeElement {
        self.normalize(&vec![0; self.n()], 0)
    }

    /// Generator `x_i` (0-based).
    pub fn x(&self, i: usize) -> GradeElement {
        self.x_mul(i, 1)
    }

    /// `k x_i` in normal form.
    pub fn x_mul(&self, i: usize, k: i64) -> GradeElement {
        let mut raw = vec![0; self.n()];
        raw[i] = k;
        self.normalize(&raw, 0)
    }

    pub fn c(&self) -> GradeElement {
        self.normalize(&vec![0; self.n()], 1)
    }

    /// `s = sum x_i`.
    pub fn s(&self) -> GradeElement {
        self.normalize(&vec![1; self.n()], 0)
    }

    /// Dualizing element `omega = c - s`.
    pub fn omega(&self) -> GradeElement {
        self.normalize(&vec![-1; self.n()], 1)
    }

    /// Dominant element `delta = sum (p_i - 2) x_i`.
    pub fn delta(&self) -> GradeElement {
        self.delta_sub(&vec![true; self.n()])
    }

    /// `delta_I = sum_{i in I} (p_i - 2) x_i`.
    pub fn delta_sub(&self, members: &[bool]) -> GradeElement {
        let raw: Vec<i64> =
            self.p().iter().zip(members).map(|(&p, &m)| if m { p - 2 } else { 0 }).collect();
        self.normalize(&raw, 0)
    }

    /// Level-zero elements whose coefficients lie in the box `lo <= lambda <= hi`,
    /// listed in lexicographic order.
    pub fn box_elements(&self, lo: &[i64], hi: &[i64]) -> Vec<GradeElement> {
        let n = self.n();
        let mut out = Vec::new();
        if (0..n).any(|i| lo[i] > hi[i]) {
            return out;
        }
        let mut cur: Vec<i64> = lo.to_vec();
        loop {
            out.push(self.normalize(&cur, 0));
            let mut i = n;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if cur[i] < hi[i] {
                    cur[i] += 1;
                    for (j, v) in cur.iter_mut().enumerate().skip(i + 1) {
                        *v = lo[j];
                    }
                    break;
                }
            }
        }
    }

    /// All elements `x` with `a <= x <= b`.
    pub fn interval(&self, a: &GradeElement, b: &GradeElement) -> Vec<GradeElement> {
        let e = b.sub(a);
        if e.level < 0 {
            return Vec::new();
        }
        let hi: Vec<i64> = self.p().iter().map(|&p| p - 1).collect();
        let mut out = Vec::new();
        for j in 0..=e.level {
            for lam in self.box_elements(&vec![0; self.n()], &hi) {
                let d = lam.add(&self.normalize(&vec![0; self.n()], j));
                if e.sub(&d).level >= 0 {
                    out.push(a.add(&d));
                }
            }
        }
        out.sort();
        out
    }

    /// The interval `[-s, s]`, used as the standard window of small twists.
    pub fn symmetric_window(&self) -> Vec<GradeElement> {
        self.interval(&self.s().neg(), &self.s())
    }
}

impl fmt::Debug for WeightSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for WeightSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.p().iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Element of `L` in normal form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GradeElement {
    w: WeightSystem,
    coeffs: Vec<i64>,
    level: i64,
}

/// Outcome of the dichotomy `x >= 0` versus `x <= (n-2)c + omega`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dichotomy {
    NonNegative,
    BelowBound,
}

#[derive(Serialize, Deserialize)]
struct ElementJson {
    coeffs: Vec<i64>,
    level: i64,
}

impl GradeElement {
    pub fn weights(&self) -> &WeightSystem {
        &self.w
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> i64 {
        self.coeffs[i]
    }

    pub fn level(&self) -> i64 {
        self.level
    }

    pub fn is_zero(&self) -> bool {
        self.level == 0 && self.coeffs.iter().all(|&a| a == 0)
    }

    fn same_weights(&self, other: &GradeElement) -> Result<()> {
        if self.w != other.w {
            return Err(Error::WeightMismatch(self.w.to_string(), other.w.to_string()));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &GradeElement) -> Result<GradeElement> {
        self.same_weights(other)?;
        let raw: Vec<i64> = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(self.w.normalize(&raw, self.level + other.level))
    }

    /// Sum; panics on mismatched weight systems (use `try_add` at boundaries).
    pub fn add(&self, other: &GradeElement) -> GradeElement {
        self.try_add(other).expect("grade elements over the same weights")
    }

    pub fn neg(&self) -> GradeElement {
        let raw: Vec<i64> = self.coeffs.iter().map(|a| -a).collect();
        self.w.normalize(&raw, -self.level)
    }

    pub fn sub(&self, other: &GradeElement) -> GradeElement {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: i64) -> GradeElement {
        let raw: Vec<i64> = self.coeffs.iter().map(|a| a * k).collect();
        self.w.normalize(&raw, self.level * k)
    }

    /// Adds `k x_i`.
    pub fn add_x(&self, i: usize, k: i64) -> GradeElement {
        let mut raw = self.coeffs.clone();
        raw[i] += k;
        self.w.normalize(&raw, self.level)
    }

    /// Adds `k c`.
    pub fn add_c(&self, k: i64) -> GradeElement {
        GradeElement { w: self.w.clone(), coeffs: self.coeffs.clone(), level: self.level + k }
    }

    /// The same coefficients at level 0.
    pub fn strip_level(&self) -> GradeElement {
        self.add_c(-self.level)
    }

    pub fn is_nonneg(&self) -> bool {
        self.level >= 0
    }

    /// Partial order: `self <= other` iff `other - self` is in `L_+`.
    pub fn try_leq(&self, other: &GradeElement) -> Result<bool> {
        self.same_weights(other)?;
        Ok(other.sub(self).level >= 0)
    }

    pub fn leq(&self, other: &GradeElement) -> bool {
        self.try_leq(other).expect("grade elements over the same weights")
    }

    pub fn dichotomy(&self) -> Dichotomy {
        let n = self.w.n() as i64;
        let bound = self.w.c().scale(n - 2).add(&self.w.omega());
        let nonneg = self.level >= 0;
        let below = self.leq(&bound);
        assert!(nonneg != below, "dichotomy exclusivity violated at {self}");
        if nonneg {
            Dichotomy::NonNegative
        } else {
            Dichotomy::BelowBound
        }
    }

    /// `sigma(x) = sum lambda_i` for `0 <= x <= delta`.
    pub fn sigma(&self) -> Result<i64> {
        let w = &self.w;
        if self.level != 0 || self.coeffs.iter().zip(w.p()).any(|(&a, &p)| a > p - 2) {
            return Err(Error::OutOfRange(format!("sigma needs 0 <= x <= delta, got {self}")));
        }
        Ok(self.coeffs.iter().sum())
    }

    /// Dimension of `R_x` for `R = k[X]/(sum X_i^{p_i})`.
    pub fn dim_r(&self) -> u64 {
        let n = self.w.n() as u64;
        if self.level < 0 {
            return 0;
        }
        if n == 1 {
            return u64::from(self.level == 0);
        }
        binomial(self.level as u64 + n - 2, n - 2)
    }

    /// Dimension of `S_x` for the polynomial ring `S = k[X_1..X_n]`.
    pub fn dim_s(&self) -> u64 {
        let n = self.w.n() as u64;
        if self.level < 0 {
            return 0;
        }
        binomial(self.level as u64 + n - 1, n - 1)
    }

    /// Monomials of `S` in this degree, as exponent vectors.
    pub fn monomials_s(&self) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        if self.level < 0 {
            return out;
        }
        let n = self.w.n();
        let mut d = vec![0i64; n];
        compositions(self.level, 0, &mut d, &mut |d| {
            out.push(
                (0..n)
                    .map(|i| (self.coeffs[i] + d[i] * self.w.p()[i]) as u32)
                    .collect::<Vec<u32>>(),
            );
        });
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(ElementJson { coeffs: self.coeffs.clone(), level: self.level })
            .expect("plain json")
    }

    pub fn from_json(w: &WeightSystem, v: &serde_json::Value) -> Result<Self> {
        let e: ElementJson =
            serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        w.element(e.coeffs, e.level)
    }

    /// Compact text form `(l_1,..,l_n;level)`.
    pub fn parse(w: &WeightSystem, text: &str) -> Result<Self> {
        let t = text.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("expected `(coeffs;level)`, got `{t}`")))?;
        let (cs, lv) = inner
            .split_once(';')
            .ok_or_else(|| Error::Parse(format!("missing `;` in `{t}`")))?;
        let coeffs = cs
            .split(',')
            .map(|c| c.trim().parse::<i64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Parse(format!("bad coefficient in `{t}`: {e}")))?;
        let level = lv.trim().parse::<i64>().map_err(|e| Error::Parse(format!("bad level: {e}")))?;
        if coeffs.len() != w.n() {
            return Err(Error::Parse(format!("expected {} coefficients in `{t}`", w.n())));
        }
        Ok(w.normalize(&coeffs, level))
    }
}

fn compositions(total: i64, i: usize, d: &mut Vec<i64>, f: &mut dyn FnMut(&[i64])) {
    if i + 1 == d.len() {
        d[i] = total;
        f(d);
        return;
    }
    for v in 0..=total {
        d[i] = v;
        compositions(total - v, i + 1, d, f);
    }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u64 = 1;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Total order used for deterministic listings: level, then coefficients.
impl Ord for GradeElement {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.w, self.level, &self.coeffs).cmp(&(&other.w, other.level, &other.coeffs))
    }
}

impl PartialOrd for GradeElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for GradeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|a| a.to_string()).collect();
        write!(f, "({};{})", parts.join(","), self.level)
    }
}

impl fmt::Debug for GradeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Weight-change embedding `theta_j : L_j -> L`, where `L_j` replaces `p_n` by `p_{j,n}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupEmbedding {
    pub full: WeightSystem,
    pub reduced: WeightSystem,
    /// 1 or 2.
    pub j: usize,
    pub split: (i64, i64),
}

impl GroupEmbedding {
    pub fn new(full: &WeightSystem, split: (i64, i64), j: usize) -> Result<Self> {
        let pn = *full.p().last().expect("nonempty weights");
        if split.0 + split.1 != pn + 1 || split.0 < 2 || split.1 < 2 {
            return Err(Error::InvalidSplit(format!(
                "split {split:?} does not satisfy p_1n + p_2n = {} with both >= 2",
                pn + 1
            )));
        }
        if j != 1 && j != 2 {
            return Err(Error::InvalidSplit(format!("embedding index {j} is not 1 or 2")));
        }
        let pjn = if j == 1 { split.0 } else { split.1 };
        let mut p = full.p().to_vec();
        *p.last_mut().expect("nonempty") = pjn;
        Ok(GroupEmbedding { full: full.clone(), reduced: WeightSystem::new(p)?, j, split })
    }

    pub fn pjn(&self) -> i64 {
        if self.j == 1 {
            self.split.0
        } else {
            self.split.1
        }
    }

    pub fn theta(&self, a: &GradeElement) -> GradeElement {
        assert_eq!(a.weights(), &self.reduced, "theta expects an element of the reduced group");
        self.full.normalize(a.coeffs(), a.level())
    }

    pub fn theta_inv(&self, b: &GradeElement) -> Result<GradeElement> {
        assert_eq!(b.weights(), &self.full, "theta_inv expects an element of the full group");
        let n = self.full.n();
        if b.coeff(n - 1) >= self.pjn() {
            return Err(Error::NotInImage(format!("{b} has last coefficient >= {}", self.pjn())));
        }
        Ok(self.reduced.normalize(b.coeffs(), b.level()))
    }

    pub fn in_image(&self, b: &GradeElement) -> bool {
        b.coeff(self.full.n() - 1) < self.pjn()
    }
}
