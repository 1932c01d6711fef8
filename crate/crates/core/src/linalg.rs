//! Exact linear algebra: integer matrices, ranks over a prime field or the rationals,
//! and rational inverses and characteristic polynomials.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BinaryHeap;
use std::cmp::Reverse;

pub const DEFAULT_PRIME: u64 = 32003;
pub const PARANOIA_PRIME: u64 = 65537;

/// Field over which ranks are computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Field {
    Prime(u64),
    Rational,
}

impl Default for Field {
    fn default() -> Self {
        Field::Prime(DEFAULT_PRIME)
    }
}

impl Field {
    pub fn prime(q: u64) -> Result<Field> {
        if !is_prime(q) || q > u32::MAX as u64 {
            return Err(Error::OutOfRange(format!("field modulus {q} is not a prime below 2^32")));
        }
        Ok(Field::Prime(q))
    }
}

pub fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= q {
        if q % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Dense integer matrix in row-major order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix");
            m.data[i * c..(i + 1) * c].copy_from_slice(row);
        }
        m
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec()).collect()
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn kronecker(&self, other: &IntMatrix) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.set(i * other.rows + k, j * other.cols + l, a * other.get(k, l));
                    }
                }
            }
        }
        out
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &IntMatrix) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j));
            }
        }
        out
    }

    /// Permutes rows and columns: `out[a][b] = self[perm[a]][perm[b]]`.
    pub fn permuted(&self, perm: &[usize]) -> IntMatrix {
        let n = perm.len();
        let mut out = IntMatrix::zeros(n, n);
        for a in 0..n {
            for b in 0..n {
                out.set(a, b, self.get(perm[a], perm[b]));
            }
        }
        out
    }

    pub fn rank(&self, field: Field) -> usize {
        let mut s = SparseMatrix::new(self.cols);
        for i in 0..self.rows {
            s.push_row(
                (0..self.cols)
                    .filter_map(|j| {
                        let v = self.get(i, j);
                        (v != 0).then_some((j, v))
                    })
                    .collect(),
            );
        }
        s.rank(field)
    }

    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let m = RatMatrix::from_int(self);
        m.determinant().to_integer()
    }
}

/// Sparse integer matrix stored by rows; used for large, very sparse systems.
#[derive(Clone, Debug, Default)]
pub struct SparseMatrix {
    pub cols: usize,
    pub rows: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn new(cols: usize) -> Self {
        SparseMatrix { cols, rows: Vec::new() }
    }

    pub fn push_row(&mut self, row: Vec<(usize, i64)>) {
        debug_assert!(row.iter().all(|&(j, _)| j < self.cols));
        self.rows.push(row);
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn rank(&self, field: Field) -> usize {
        match field {
            Field::Prime(q) => self.rank_mod(q),
            Field::Rational => self.rank_rational(),
        }
    }

    /// Row-by-row elimination against a growing pivot table, with a dense accumulator
    /// and a heap of live columns so that sparse rows stay cheap.
    fn rank_mod(&self, q: u64) -> usize {
        let mut pivots: Vec<Option<Vec<(usize, u64)>>> = vec![None; self.cols];
        let mut acc = vec![0u64; self.cols];
        let mut queued = vec![false; self.cols];
        let mut rank = 0;
        for row in &self.rows {
            let mut heap = BinaryHeap::new();
            for &(j, v) in row {
                let r = v.rem_euclid(q as i64) as u64;
                acc[j] = (acc[j] + r) % q;
                if !queued[j] {
                    queued[j] = true;
                    heap.push(Reverse(j));
                }
            }
            let mut new_pivot: Option<(usize, Vec<(usize, u64)>)> = None;
            while let Some(Reverse(j)) = heap.pop() {
                queued[j] = false;
                let v = acc[j];
                if v == 0 {
                    continue;
                }
                if let Some(prow) = &pivots[j] {
                    // pivot rows are normalized to leading coefficient 1
                    let factor = q - v;
                    for &(k, pv) in prow {
                        acc[k] = (acc[k] + factor * pv) % q;
                        if !queued[k] && acc[k] != 0 {
                            queued[k] = true;
                            heap.push(Reverse(k));
                        }
                    }
                    debug_assert_eq!(acc[j], 0);
                } else {
                    // j is the leading live column: the rest of the heap forms the new pivot row
                    let inv = mod_inv(v, q);
                    let mut cols: Vec<usize> = vec![j];
                    while let Some(Reverse(k)) = heap.pop() {
                        queued[k] = false;
                        cols.push(k);
                    }
                    let mut prow = Vec::new();
                    for k in cols {
                        if acc[k] != 0 {
                            prow.push((k, acc[k] * inv % q));
                            acc[k] = 0;
                        }
                    }
                    new_pivot = Some((j, prow));
                    break;
                }
            }
            if let Some((j, prow)) = new_pivot {
                pivots[j] = Some(prow);
                rank += 1;
            }
        }
        rank
    }

    fn rank_rational(&self) -> usize {
        let mut m: Vec<Vec<BigInt>> = self
            .rows
            .iter()
            .map(|r| {
                let mut d = vec![BigInt::zero(); self.cols];
                for &(j, v) in r {
                    d[j] += BigInt::from(v);
                }
                d
            })
            .collect();
        bareiss_rank(&mut m, self.cols)
    }
}

/// Fraction-free elimination; exact rank over the rationals.
fn bareiss_rank(m: &mut [Vec<BigInt>], cols: usize) -> usize {
    let rows = m.len();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for r in rank + 1..rows {
            for k in c + 1..cols {
                let v = (&m[rank][c] * &m[r][k] - &m[r][c] * &m[rank][k]) / &prev;
                m[r][k] = v;
            }
            m[r][c] = BigInt::zero();
        }
        prev = m[rank][c].clone();
        rank += 1;
    }
    rank
}

fn mod_inv(a: u64, q: u64) -> u64 {
    mod_pow(a, q - 2, q)
}

fn mod_pow(mut a: u64, mut e: u64, q: u64) -> u64 {
    let mut r = 1;
    a %= q;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % q;
        }
        a = a * a % q;
        e >>= 1;
    }
    r
}

/// Dense matrix over the rationals.
#[derive(Clone, Debug, PartialEq)]
pub struct RatMatrix {
    pub n: usize,
    pub data: Vec<Vec<BigRational>>,
}

impl RatMatrix {
    pub fn from_int(m: &IntMatrix) -> Self {
        assert_eq!(m.rows, m.cols, "square matrix expected");
        RatMatrix {
            n: m.rows,
            data: m
                .to_rows()
                .into_iter()
                .map(|r| r.into_iter().map(|v| BigRational::from_integer(v.into())).collect())
                .collect(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![vec![BigRational::zero(); n]; n];
        for (i, row) in data.iter_mut().enumerate() {
            row[i] = BigRational::one();
        }
        RatMatrix { n, data }
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        let n = self.n;
        let mut data = vec![vec![BigRational::zero(); n]; n];
        for i in 0..n {
            for k in 0..n {
                if self.data[i][k].is_zero() {
                    continue;
                }
                for j in 0..n {
                    if !other.data[k][j].is_zero() {
                        data[i][j] += &self.data[i][k] * &other.data[k][j];
                    }
                }
            }
        }
        RatMatrix { n, data }
    }

    pub fn transpose(&self) -> RatMatrix {
        let n = self.n;
        let data = (0..n).map(|i| (0..n).map(|j| self.data[j][i].clone()).collect()).collect();
        RatMatrix { n, data }
    }

    pub fn neg(&self) -> RatMatrix {
        RatMatrix { n: self.n, data: self.data.iter().map(|r| r.iter().map(|v| -v).collect()).collect() }
    }

    pub fn trace(&self) -> BigRational {
        (0..self.n).fold(BigRational::zero(), |acc, i| acc + &self.data[i][i])
    }

    pub fn inverse(&self) -> Result<RatMatrix> {
        let n = self.n;
        let mut a = self.data.clone();
        let mut inv = RatMatrix::identity(n).data;
        for c in 0..n {
            let p = (c..n).find(|&r| !a[r][c].is_zero()).ok_or(Error::Singular)?;
            a.swap(c, p);
            inv.swap(c, p);
            let piv = a[c][c].clone();
            for k in 0..n {
                a[c][k] = &a[c][k] / &piv;
                inv[c][k] = &inv[c][k] / &piv;
            }
            for r in 0..n {
                if r == c || a[r][c].is_zero() {
                    continue;
                }
                let f = a[r][c].clone();
                for k in 0..n {
                    let t = &f * &a[c][k];
                    a[r][k] -= t;
                    let t = &f * &inv[c][k];
                    inv[r][k] -= t;
                }
            }
        }
        Ok(RatMatrix { n, data: inv })
    }

    pub fn determinant(&self) -> BigRational {
        let n = self.n;
        let mut a = self.data.clone();
        let mut det = BigRational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
                return BigRational::zero();
            };
            if p != c {
                a.swap(c, p);
                det = -det;
            }
            det *= &a[c][c];
            for r in c + 1..n {
                if a[r][c].is_zero() {
                    continue;
                }
                let f = &a[r][c] / &a[c][c];
                for k in c..n {
                    let t = &f * &a[c][k];
                    a[r][k] -= t;
                }
            }
        }
        det
    }

    /// Characteristic polynomial `det(xI - A)` by Faddeev-LeVerrier, coefficients
    /// in increasing degree.
    pub fn charpoly(&self) -> Vec<BigRational> {
        let n = self.n;
        let mut coeffs = vec![BigRational::zero(); n + 1];
        coeffs[n] = BigRational::one();
        let mut m = RatMatrix { n, data: vec![vec![BigRational::zero(); n]; n] };
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} I
            let mut next = self.mul(&m);
            for i in 0..n {
                next.data[i][i] += &coeffs[n - k + 1];
            }
            m = next;
            let am = self.mul(&m);
            coeffs[n - k] = -am.trace() / BigRational::from_integer(BigInt::from(k as i64));
        }
        coeffs
    }
}

/// Converts exact rationals to integers, failing on any proper fraction.
pub fn integral(values: &[BigRational]) -> Result<Vec<i64>> {
    values
        .iter()
        .map(|v| {
            if !v.is_integer() {
                return Err(Error::NonIntegral(v.to_string()));
            }
            let i = v.to_integer();
            if i.abs() > BigInt::from(i64::MAX) {
                return Err(Error::NonIntegral(format!("{i} overflows")));
            }
            Ok(i.to_i64().expect("bounded"))
        })
        .collect()
}
