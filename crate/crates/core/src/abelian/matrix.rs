//! Dense integer matrices with exact Hermite and Smith normal forms.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::serde_int;

/// A dense, row-major matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows; all rows must have length `cols`.
    pub fn from_rows<T: Into<BigInt> + Clone>(cols: usize, rows: &[Vec<T>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix row");
            data.extend(row.iter().cloned().map(Into::into));
        }
        IntMatrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let owned: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        Self::from_rows(cols, &owned)
    }

    pub fn diagonal<T: Into<BigInt> + Clone>(entries: &[T]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m.data[i * n + i] = e.clone().into();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(
            self.cols, other.rows,
            "dimension mismatch in matrix product"
        );
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        out.data[r * other.cols + c] += a * b;
                    }
                }
            }
        }
        out
    }

    /// True when the matrix is diagonal (off-diagonal entries vanish).
    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|r| (0..self.cols).all(|c| r == c || self.get(r, c).is_zero()))
    }

    pub fn diagonal_entries(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols))
            .map(|i| self.get(i, i).clone())
            .collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination. Panics on non-square input.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        sign * a.get(n - 1, n - 1)
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    pub(crate) fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let s = &self.data[src * self.cols + c];
            if !s.is_zero() {
                let v = s * k;
                self.data[dst * self.cols + c] += v;
            }
        }
    }

    /// col[dst] += k * col[src]
    pub(crate) fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let s = &self.data[r * self.cols + src];
            if !s.is_zero() {
                let v = s * k;
                self.data[r * self.cols + dst] += v;
            }
        }
    }

    pub(crate) fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = &mut self.data[r * self.cols + c];
            *v = -std::mem::take(v);
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<serde_int::Row<'_>> = (0..self.rows)
            .map(|r| serde_int::Row(self.row(r)))
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows: Vec<serde_int::OwnedRow> = Vec::deserialize(d)?;
        let cols = rows.first().map_or(0, |r| r.0.len());
        if rows.iter().any(|r| r.0.len() != cols) {
            return Err(serde::de::Error::custom("ragged matrix"));
        }
        let rows: Vec<Vec<BigInt>> = rows.into_iter().map(|r| r.0).collect();
        Ok(IntMatrix::from_rows(cols, &rows))
    }
}

/// Row Hermite normal form `h = u * m` with `u` unimodular.
#[derive(Clone, Debug)]
pub struct Hnf {
    pub h: IntMatrix,
    pub u: IntMatrix,
    pub rank: usize,
}

/// Row-style Hermite normal form: echelon shape, positive pivots, and the
/// entries above each pivot reduced into `[0, pivot)`.
pub fn hnf(m: &IntMatrix) -> Hnf {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut pr = 0;
    for col in 0..m.cols {
        if pr == m.rows {
            break;
        }
        loop {
            let best = (pr..m.rows)
                .filter(|&i| !h.get(i, col).is_zero())
                .min_by(|&a, &b| h.get(a, col).abs().cmp(&h.get(b, col).abs()));
            let Some(best) = best else { break };
            h.swap_rows(pr, best);
            u.swap_rows(pr, best);
            let mut cleared = true;
            for i in pr + 1..m.rows {
                if h.get(i, col).is_zero() {
                    continue;
                }
                let q = -h.get(i, col).div_floor(h.get(pr, col));
                h.add_row_multiple(i, pr, &q);
                u.add_row_multiple(i, pr, &q);
                if !h.get(i, col).is_zero() {
                    cleared = false;
                }
            }
            if cleared {
                break;
            }
        }
        if h.get(pr, col).is_zero() {
            continue;
        }
        if h.get(pr, col).is_negative() {
            h.negate_row(pr);
            u.negate_row(pr);
        }
        for i in 0..pr {
            let q = -h.get(i, col).div_floor(h.get(pr, col));
            h.add_row_multiple(i, pr, &q);
            u.add_row_multiple(i, pr, &q);
        }
        pr += 1;
    }
    Hnf { h, u, rank: pr }
}

/// Smith normal form `d = u * m * v` with `u`, `v` unimodular and
/// `v_inv * v = 1`. Diagonal entries are non-negative and form a
/// divisibility chain.
#[derive(Clone, Debug)]
pub struct Snf {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl Snf {
    pub fn rank(&self) -> usize {
        self.d
            .diagonal_entries()
            .iter()
            .filter(|x| !x.is_zero())
            .count()
    }

    /// Nonzero diagonal entries, units included.
    pub fn nonzero_diagonal(&self) -> Vec<BigInt> {
        self.d
            .diagonal_entries()
            .into_iter()
            .filter(|x| !x.is_zero())
            .collect()
    }
}

struct SnfWork {
    a: IntMatrix,
    u: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl SnfWork {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.v_inv.swap_rows(i, j);
    }

    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.a.add_row_multiple(dst, src, k);
        self.u.add_row_multiple(dst, src, k);
    }

    // col[dst] += k col[src]; the inverse operation on v_inv is row[src] -= k row[dst]
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.a.add_col_multiple(dst, src, k);
        self.v.add_col_multiple(dst, src, k);
        self.v_inv.add_row_multiple(src, dst, &-k);
    }
}

/// Smith normal form with minimal-absolute-value pivoting.
pub fn snf(m: &IntMatrix) -> Snf {
    let (rows, cols) = (m.rows, m.cols);
    let mut w = SnfWork {
        a: m.clone(),
        u: IntMatrix::identity(rows),
        v: IntMatrix::identity(cols),
        v_inv: IntMatrix::identity(cols),
    };
    for t in 0..rows.min(cols) {
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let x = w.a.get(i, j);
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < w.a.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        w.swap_rows(t, bi);
        w.swap_cols(t, bj);
        loop {
            let mut residue = false;
            for i in t + 1..rows {
                if !w.a.get(i, t).is_zero() {
                    let q = -w.a.get(i, t).div_floor(w.a.get(t, t));
                    w.add_row(i, t, &q);
                    residue |= !w.a.get(i, t).is_zero();
                }
            }
            for j in t + 1..cols {
                if !w.a.get(t, j).is_zero() {
                    let q = -w.a.get(t, j).div_floor(w.a.get(t, t));
                    w.add_col(j, t, &q);
                    residue |= !w.a.get(t, j).is_zero();
                }
            }
            if residue {
                // a smaller remainder now sits in row or column t; make it the pivot
                let mut best = (t, t);
                for i in t + 1..rows {
                    let x = w.a.get(i, t);
                    if !x.is_zero() && x.abs() < w.a.get(best.0, best.1).abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..cols {
                    let x = w.a.get(t, j);
                    if !x.is_zero() && x.abs() < w.a.get(best.0, best.1).abs() {
                        best = (t, j);
                    }
                }
                w.swap_rows(t, best.0);
                w.swap_cols(t, best.1);
                continue;
            }
            let pivot = w.a.get(t, t).clone();
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !w.a.get(i, j).is_multiple_of(&pivot)));
            match offender {
                Some(i) => w.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if w.a.get(t, t).is_negative() {
            w.a.negate_row(t);
            w.u.negate_row(t);
        }
    }
    Snf {
        d: w.a,
        u: w.u,
        v: w.v,
        v_inv: w.v_inv,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unimodular(m: &IntMatrix) -> bool {
        m.determinant().abs().is_one()
    }

    #[test]
    fn hnf_of_small_matrix() {
        let m = IntMatrix::from_i64_rows(&[&[2, 0], &[1, 1]]);
        let r = hnf(&m);
        assert_eq!(r.h, IntMatrix::from_i64_rows(&[&[1, 1], &[0, 2]]));
        assert_eq!(r.u.mul(&m), r.h);
        assert!(unimodular(&r.u));
    }

    #[test]
    fn hnf_fixed_points() {
        let id = IntMatrix::identity(3);
        let r = hnf(&id);
        assert_eq!(r.h, id);
        assert_eq!(r.u, id);
        let z = IntMatrix::zeros(2, 2);
        assert_eq!(hnf(&z).h, z);
        assert_eq!(hnf(&z).rank, 0);
    }

    #[test]
    fn snf_examples() {
        let m = IntMatrix::from_i64_rows(&[&[2, 4], &[6, 8]]);
        let s = snf(&m);
        assert_eq!(s.d, IntMatrix::diagonal(&[2, 4]));
        assert_eq!(s.u.mul(&m).mul(&s.v), s.d);
        assert_eq!(s.v.mul(&s.v_inv), IntMatrix::identity(2));

        let m = IntMatrix::diagonal(&[6, 4]);
        assert_eq!(snf(&m).d, IntMatrix::diagonal(&[2, 12]));

        let z = IntMatrix::zeros(2, 3);
        assert_eq!(snf(&z).d, z);
    }

    #[test]
    fn snf_rectangular() {
        let m = IntMatrix::from_i64_rows(&[&[4, 6, 2], &[2, 2, 8], &[0, 0, 0], &[6, 10, 4]]);
        let s = snf(&m);
        assert!(s.d.is_diagonal());
        assert_eq!(s.u.mul(&m).mul(&s.v), s.d);
        assert!(unimodular(&s.u) && unimodular(&s.v));
        assert_eq!(s.v.mul(&s.v_inv), IntMatrix::identity(3));
    }

    #[test]
    fn determinant_bareiss() {
        let m = IntMatrix::from_i64_rows(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]]);
        assert_eq!(m.determinant(), BigInt::from(4));
        let m = IntMatrix::from_i64_rows(&[&[0, 1], &[1, 0]]);
        assert_eq!(m.determinant(), BigInt::from(-1));
    }

    #[test]
    fn json_roundtrip() {
        let m = IntMatrix::from_i64_rows(&[&[1, -2], &[3, 4]]);
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, "[[1,-2],[3,4]]");
        let back: IntMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
    }
}
