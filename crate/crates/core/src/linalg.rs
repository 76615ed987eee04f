//! Exact integer and rational linear algebra.
//!
//! Everything here works over [`BigInt`] or [`BigRational`]; there is no
//! floating point and no tolerance anywhere in the crate.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::LinalgError;

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type IntegerMatrix = Matrix<BigInt>;
pub type RationalMatrix = Matrix<BigRational>;

impl<T> Matrix<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch {
                expected: format!("{} entries for {rows}x{cols}", rows * cols),
                found: format!("{} entries", data.len()),
            });
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, LinalgError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != ncols) {
            return Err(LinalgError::DimensionMismatch {
                expected: format!("rows of length {ncols}"),
                found: format!("row of length {}", bad.len()),
            });
        }
        let data = rows.into_iter().flatten().collect();
        Ok(Matrix {
            rows: nrows,
            cols: ncols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[T]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }
}

impl<T: Clone> Matrix<T> {
    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self[(i, j)].clone());
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }
}

impl<T: Clone + Zero + One + PartialEq> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = &self[(i, j)];
                    if i == j {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero + One + for<'a> std::ops::Sub<&'a T, Output = T> + for<'a> std::ops::Add<&'a T, Output = T>,
{
    pub fn checked_add(&self, other: &Self) -> Result<Self, LinalgError> {
        self.same_shape(other)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b).collect(),
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, LinalgError> {
        self.same_shape(other)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() - b).collect(),
        })
    }

    fn same_shape(&self, other: &Self) -> Result<(), LinalgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: format!("{}x{}", self.rows, self.cols),
                found: format!("{}x{}", other.rows, other.cols),
            });
        }
        Ok(())
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero + for<'a> std::ops::Mul<&'a T, Output = T> + for<'a> std::ops::Add<&'a T, Output = T>,
{
    pub fn checked_mul(&self, rhs: &Self) -> Result<Self, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: format!("{} rows on the right", self.cols),
                found: format!("{} rows", rhs.rows),
            });
        }
        let mut data = vec![T::zero(); self.rows * rhs.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let cell = &mut data[i * rhs.cols + j];
                    *cell = std::mem::replace(cell, T::zero()) + &(a.clone() * &rhs[(k, j)]);
                }
            }
        }
        Ok(Matrix {
            rows: self.rows,
            cols: rhs.cols,
            data,
        })
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: format!("vector of length {}", self.cols),
                found: format!("length {}", v.len()),
            });
        }
        Ok(self
            .row_iter()
            .map(|row| row.iter().zip(v).fold(T::zero(), |acc, (a, b)| acc + &(a.clone() * b)))
            .collect())
    }
}

impl<'a, T> Mul<&'a Matrix<T>> for &'a Matrix<T>
where
    T: Clone + Zero + for<'b> std::ops::Mul<&'b T, Output = T> + for<'b> std::ops::Add<&'b T, Output = T>,
{
    type Output = Matrix<T>;

    /// Panics on a shape mismatch; use [`Matrix::checked_mul`] otherwise.
    fn mul(self, rhs: &'a Matrix<T>) -> Matrix<T> {
        self.checked_mul(rhs).expect("matrix shapes must agree")
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Display> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl IntegerMatrix {
    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self, LinalgError> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn to_rational(&self) -> RationalMatrix {
        self.map(|x| BigRational::from_integer(x.clone()))
    }
}

/// Result of [`smith_normal_form`]: `u * m * v == d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub d: IntegerMatrix,
    pub u: IntegerMatrix,
    pub v: IntegerMatrix,
}

impl SmithForm {
    /// Diagonal entries `d_1 | d_2 | ...`, including trailing zeros.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }

    /// Elementary divisors greater than one: the torsion of the cokernel.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diagonal()
            .into_iter()
            .filter(|x| !x.is_zero() && !x.is_one())
            .collect()
    }
}

/// Smith normal form with unimodular transforms. Pivots are combined with
/// the entries they clear through 2x2 Bezout transforms, which keeps entry
/// growth modest compared to repeated remainder steps.
pub fn smith_normal_form(m: &IntegerMatrix) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = IntegerMatrix::identity(rows);
    let mut v = IntegerMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = smallest_nonzero(&a, t) else {
            break;
        };
        a.swap_rows(t, pi);
        u.swap_rows(t, pi);
        a.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            for i in t + 1..rows {
                if !a[(i, t)].is_zero() {
                    let (p, q) = (a[(t, t)].clone(), a[(i, t)].clone());
                    let c = Bezout::new(&p, &q);
                    c.rows(&mut a, t, i);
                    c.rows(&mut u, t, i);
                }
            }
            for j in t + 1..cols {
                if !a[(t, j)].is_zero() {
                    let (p, q) = (a[(t, t)].clone(), a[(t, j)].clone());
                    let c = Bezout::new(&p, &q);
                    c.cols(&mut a, t, j);
                    c.cols(&mut v, t, j);
                }
            }
            // clearing the row can refill the column
            if (t + 1..rows).any(|i| !a[(i, t)].is_zero()) {
                continue;
            }
            // Divisibility: fold a non-divisible row into row t and retry.
            let pivot = a[(t, t)].clone();
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[(i, j)].is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    add_row_multiple(&mut a, t, i, &BigInt::one());
                    add_row_multiple(&mut u, t, i, &BigInt::one());
                }
                None => break,
            }
        }

        if a[(t, t)].is_negative() {
            negate_row(&mut a, t);
            negate_row(&mut u, t);
        }
    }

    SmithForm { d: a, u, v }
}

/// The unimodular map `(x, y) -> (s x + r y, -q' x + p' y)` with
/// `s p + r q = g`, `p = g p'`, `q = g q'`; it sends `(p, q)` to `(g, 0)`.
struct Bezout {
    s: BigInt,
    r: BigInt,
    p: BigInt,
    q: BigInt,
}

impl Bezout {
    fn new(p: &BigInt, q: &BigInt) -> Self {
        // plain subtraction when p | q, so the pivot and row t stay put
        if q.is_multiple_of(p) {
            return Bezout {
                s: BigInt::one(),
                r: BigInt::zero(),
                p: BigInt::one(),
                q: q / p,
            };
        }
        let e = p.extended_gcd(q);
        Bezout {
            s: e.x,
            r: e.y,
            p: p / &e.gcd,
            q: q / &e.gcd,
        }
    }

    fn combine(&self, x: &BigInt, y: &BigInt) -> (BigInt, BigInt) {
        (&self.s * x + &self.r * y, &self.p * y - &self.q * x)
    }

    fn rows(&self, m: &mut IntegerMatrix, top: usize, other: usize) {
        for j in 0..m.cols() {
            let (x, y) = self.combine(&m[(top, j)], &m[(other, j)]);
            m[(top, j)] = x;
            m[(other, j)] = y;
        }
    }

    fn cols(&self, m: &mut IntegerMatrix, left: usize, other: usize) {
        for i in 0..m.rows() {
            let (x, y) = self.combine(&m[(i, left)], &m[(i, other)]);
            m[(i, left)] = x;
            m[(i, other)] = y;
        }
    }
}

fn smallest_nonzero(a: &IntegerMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), BigInt)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let x = a[(i, j)].abs();
            if x.is_zero() {
                continue;
            }
            if best.as_ref().is_none_or(|(_, b)| x < *b) {
                best = Some(((i, j), x));
            }
        }
    }
    best.map(|(idx, _)| idx)
}

/// row[target] += k * row[source]
fn add_row_multiple(m: &mut IntegerMatrix, target: usize, source: usize, k: &BigInt) {
    for j in 0..m.cols() {
        let delta = k * &m[(source, j)];
        m[(target, j)] += delta;
    }
}

fn negate_row(m: &mut IntegerMatrix, i: usize) {
    for j in 0..m.cols() {
        let x = std::mem::take(&mut m[(i, j)]);
        m[(i, j)] = -x;
    }
}

/// Rank over the rationals, read off the Smith form.
pub fn rank(m: &IntegerMatrix) -> usize {
    smith_normal_form(m).rank()
}

/// Reduced row echelon form; returns the pivot column of each nonzero row.
fn rref(m: &mut RationalMatrix) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols() {
        if r == m.rows() {
            break;
        }
        let Some(p) = (r..m.rows()).find(|&i| !m[(i, c)].is_zero()) else {
            continue;
        };
        m.swap_rows(r, p);
        let inv = m[(r, c)].recip();
        for j in c..m.cols() {
            let x = &m[(r, j)] * &inv;
            m[(r, j)] = x;
        }
        for i in 0..m.rows() {
            if i == r || m[(i, c)].is_zero() {
                continue;
            }
            let f = m[(i, c)].clone();
            for j in c..m.cols() {
                let delta = &f * &m[(r, j)];
                m[(i, j)] -= delta;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of `{x : m x = 0}`, one vector per free column.
pub fn rational_nullspace(m: &RationalMatrix) -> Vec<Vec<BigRational>> {
    let mut reduced = m.clone();
    let pivots = rref(&mut reduced);
    let free: Vec<usize> = (0..m.cols()).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); m.cols()];
            v[f] = BigRational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -reduced[(row, f)].clone();
            }
            v
        })
        .collect()
}

/// Inertia of a symmetric form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
pub struct FormSignature {
    pub positive: usize,
    pub negative: usize,
    pub null: usize,
}

impl FormSignature {
    pub fn dimension(&self) -> usize {
        self.positive + self.negative + self.null
    }

    /// `positive - negative`.
    pub fn signature(&self) -> i64 {
        self.positive as i64 - self.negative as i64
    }
}

/// Signature of a symmetric rational matrix. Fails on asymmetric input.
pub fn symmetric_signature(q: &RationalMatrix) -> Result<FormSignature, LinalgError> {
    if !q.is_square() {
        return Err(LinalgError::NonSquare {
            rows: q.rows(),
            cols: q.cols(),
        });
    }
    if *q != q.transpose() {
        return Err(LinalgError::NotSymmetric);
    }
    Ok(congruence_inertia(q.clone()))
}

/// Signature of `(q + qᵀ)/2`; the flag is true when symmetrizing changed `q`.
pub fn symmetrized_signature(q: &RationalMatrix) -> Result<(FormSignature, bool), LinalgError> {
    if !q.is_square() {
        return Err(LinalgError::NonSquare {
            rows: q.rows(),
            cols: q.cols(),
        });
    }
    let qt = q.transpose();
    if *q == qt {
        return Ok((congruence_inertia(q.clone()), false));
    }
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let sym = q.checked_add(&qt)?.map(|x| x * &half);
    Ok((congruence_inertia(sym), true))
}

/// Diagonalize by simultaneous row/column operations and count signs.
fn congruence_inertia(mut a: RationalMatrix) -> FormSignature {
    let n = a.rows();
    let mut sig = FormSignature::default();
    for k in 0..n {
        if a[(k, k)].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !a[(j, j)].is_zero()) {
                a.swap_rows(k, j);
                a.swap_cols(k, j);
            } else if let Some(j) = (k + 1..n).find(|&j| !a[(k, j)].is_zero()) {
                // all remaining diagonal entries vanish, so the new a_kk is 2 a_kj
                for c in 0..n {
                    let x = a[(j, c)].clone();
                    a[(k, c)] += x;
                }
                for r in 0..n {
                    let x = a[(r, j)].clone();
                    a[(r, k)] += x;
                }
            }
        }
        let pivot = a[(k, k)].clone();
        if pivot.is_zero() {
            // row k is zero past the diagonal; nothing to eliminate
            sig.null += 1;
            continue;
        }
        if pivot.is_positive() {
            sig.positive += 1;
        } else {
            sig.negative += 1;
        }
        for i in k + 1..n {
            if a[(i, k)].is_zero() {
                continue;
            }
            let f = &a[(i, k)] / &pivot;
            for c in k..n {
                let delta = &f * &a[(k, c)];
                a[(i, c)] -= delta;
            }
            for r in k..n {
                let delta = &f * &a[(r, k)];
                a[(r, i)] -= delta;
            }
        }
    }
    sig
}

/// True iff `mᵀ J m = J` for the standard form on `ℤ^{2g}`.
pub fn is_symplectic(m: &IntegerMatrix, genus: usize) -> Result<bool, LinalgError> {
    let n = 2 * genus;
    if m.rows() != n || m.cols() != n {
        return Err(LinalgError::DimensionMismatch {
            expected: format!("{n}x{n}"),
            found: format!("{}x{}", m.rows(), m.cols()),
        });
    }
    let j = crate::surface::standard_form(genus);
    Ok(&(&m.transpose() * &j) * m == j)
}
