//! Sparse integer matrices and invariant factors by unit-pivot elimination.
//!
//! Unit pivots are taken greedily (column with fewest entries first, then the
//! shortest row holding a unit there). Each such pivot contributes an invariant
//! factor 1 and is removed with its row and column. Whatever is left is small
//! and goes through the dense Smith form.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::matrix::{snf, IntMatrix};

type SparseRow = Vec<(usize, BigInt)>;

/// Row-major sparse integer matrix; each row is sorted by column with no zero entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseIntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<SparseRow>,
}

impl SparseIntMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseIntMatrix {
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    /// Builds from (row, col, value) triplets; duplicate positions are summed.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, BigInt)>,
    ) -> Self {
        let mut m = Self::new(rows, cols);
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "triplet out of range");
            m.data[r].push((c, v));
        }
        for row in &mut m.data {
            *row = normalize_row(std::mem::take(row));
        }
        m
    }

    /// Replaces row `r`; the entries may be unsorted and contain repeats.
    pub fn set_row(&mut self, r: usize, entries: Vec<(usize, BigInt)>) {
        debug_assert!(entries.iter().all(|(c, _)| *c < self.cols));
        self.data[r] = normalize_row(entries);
    }

    pub fn from_dense(m: &IntMatrix) -> Self {
        let data = (0..m.rows())
            .map(|r| {
                m.row(r)
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(c, v)| (c, v.clone()))
                    .collect()
            })
            .collect();
        SparseIntMatrix {
            rows: m.rows(),
            cols: m.cols(),
            data,
        }
    }

    pub fn to_dense(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rows, self.cols);
        for (r, row) in self.data.iter().enumerate() {
            for (c, v) in row {
                m.set(r, *c, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[(usize, BigInt)] {
        &self.data[r]
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn mul(&self, other: &SparseIntMatrix) -> SparseIntMatrix {
        assert_eq!(
            self.cols, other.rows,
            "dimension mismatch in sparse product"
        );
        let mut out = SparseIntMatrix::new(self.rows, other.cols);
        for (r, row) in self.data.iter().enumerate() {
            let mut acc: Vec<(usize, BigInt)> = Vec::new();
            for (k, a) in row {
                for (c, b) in &other.data[*k] {
                    acc.push((*c, a * b));
                }
            }
            out.data[r] = normalize_row(acc);
        }
        out
    }
}

fn normalize_row(mut row: SparseRow) -> SparseRow {
    row.sort_by_key(|(c, _)| *c);
    let mut out: SparseRow = Vec::with_capacity(row.len());
    for (c, v) in row {
        match out.last_mut() {
            Some((lc, lv)) if *lc == c => *lv += v,
            _ => out.push((c, v)),
        }
    }
    out.retain(|(_, v)| !v.is_zero());
    out
}

/// `dst - k * src` for sorted sparse rows.
fn axpy(dst: &[(usize, BigInt)], src: &[(usize, BigInt)], k: &BigInt) -> SparseRow {
    let mut out = Vec::with_capacity(dst.len() + src.len());
    let (mut i, mut j) = (0, 0);
    while i < dst.len() || j < src.len() {
        let ci = dst.get(i).map_or(usize::MAX, |e| e.0);
        let cj = src.get(j).map_or(usize::MAX, |e| e.0);
        if ci < cj {
            out.push(dst[i].clone());
            i += 1;
        } else if cj < ci {
            out.push((cj, -(k * &src[j].1)));
            j += 1;
        } else {
            let v = &dst[i].1 - k * &src[j].1;
            if !v.is_zero() {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Rank and nonunit invariant factors of a matrix read as a relation matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Elimination {
    pub rank: usize,
    /// Invariant factors greater than 1, in divisibility order.
    pub torsion: Vec<BigInt>,
}

/// Rank and nonunit invariant factors through the dense Smith form.
pub fn dense_elimination(m: &IntMatrix) -> Elimination {
    let s = snf(m);
    let diag = s.nonzero_diagonal();
    Elimination {
        rank: diag.len(),
        torsion: diag.into_iter().filter(|d| !d.is_one()).collect(),
    }
}

/// Rank and nonunit invariant factors through sparse unit-pivot elimination
/// followed by a dense Smith form on the remainder.
pub fn sparse_elimination(m: &SparseIntMatrix) -> Elimination {
    let mut rows = m.data.clone();
    let mut row_alive = vec![true; m.rows];
    let mut col_alive = vec![true; m.cols];
    let mut col_rows: Vec<Vec<usize>> = vec![Vec::new(); m.cols];
    let mut col_count = vec![0usize; m.cols];
    for (r, row) in rows.iter().enumerate() {
        for (c, _) in row {
            col_rows[*c].push(r);
            col_count[*c] += 1;
        }
    }
    let mut heap: BinaryHeap<Reverse<(usize, usize)>> = (0..m.cols)
        .filter(|&c| col_count[c] > 0)
        .map(|c| Reverse((col_count[c], c)))
        .collect();
    let mut pivots = 0usize;
    let mut deferred: Vec<usize> = Vec::new();

    let try_pivot = |c: usize,
                     rows: &mut Vec<SparseRow>,
                     row_alive: &mut Vec<bool>,
                     col_alive: &mut Vec<bool>,
                     col_rows: &mut Vec<Vec<usize>>,
                     col_count: &mut Vec<usize>,
                     heap: &mut BinaryHeap<Reverse<(usize, usize)>>|
     -> bool {
        // refresh the occupancy list, dropping stale entries
        let mut occ: Vec<usize> = std::mem::take(&mut col_rows[c]);
        occ.sort_unstable();
        occ.dedup();
        occ.retain(|&r| row_alive[r] && rows[r].binary_search_by_key(&c, |e| e.0).is_ok());
        let pivot_row = occ
            .iter()
            .copied()
            .filter(|&r| {
                let k = rows[r].binary_search_by_key(&c, |e| e.0).unwrap();
                rows[r][k].1.abs().is_one()
            })
            .min_by_key(|&r| (rows[r].len(), r));
        let Some(p) = pivot_row else {
            col_rows[c] = occ;
            return false;
        };
        let prow = std::mem::take(&mut rows[p]);
        let pk = prow.binary_search_by_key(&c, |e| e.0).unwrap();
        let pval = prow[pk].1.clone();
        for &r in occ.iter().filter(|&&r| r != p) {
            let k = rows[r].binary_search_by_key(&c, |e| e.0).unwrap();
            // pivot is a unit so the multiplier is exact
            let factor = &rows[r][k].1 * &pval;
            let old = std::mem::take(&mut rows[r]);
            let new = axpy(&old, &prow, &factor);
            let (mut i, mut j) = (0, 0);
            while i < old.len() || j < new.len() {
                let ci = old.get(i).map_or(usize::MAX, |e| e.0);
                let cj = new.get(j).map_or(usize::MAX, |e| e.0);
                if ci < cj {
                    col_count[ci] -= 1;
                    if col_alive[ci] {
                        heap.push(Reverse((col_count[ci], ci)));
                    }
                    i += 1;
                } else if cj < ci {
                    col_count[cj] += 1;
                    col_rows[cj].push(r);
                    if col_alive[cj] {
                        heap.push(Reverse((col_count[cj], cj)));
                    }
                    j += 1;
                } else {
                    i += 1;
                    j += 1;
                }
            }
            rows[r] = new;
        }
        row_alive[p] = false;
        col_alive[c] = false;
        for (cc, _) in &prow {
            col_count[*cc] -= 1;
            if col_alive[*cc] {
                heap.push(Reverse((col_count[*cc], *cc)));
            }
        }
        true
    };

    while let Some(Reverse((count, c))) = heap.pop() {
        if !col_alive[c] || count != col_count[c] || count == 0 {
            continue;
        }
        if try_pivot(
            c,
            &mut rows,
            &mut row_alive,
            &mut col_alive,
            &mut col_rows,
            &mut col_count,
            &mut heap,
        ) {
            pivots += 1;
        } else {
            deferred.push(c);
        }
    }
    // fill-in may have produced units in columns that were passed over
    let mut progress = true;
    while progress {
        progress = false;
        deferred.retain(|&c| col_alive[c] && col_count[c] > 0);
        for c in deferred.clone() {
            if !col_alive[c] {
                continue;
            }
            if try_pivot(
                c,
                &mut rows,
                &mut row_alive,
                &mut col_alive,
                &mut col_rows,
                &mut col_count,
                &mut heap,
            ) {
                pivots += 1;
                progress = true;
            }
        }
    }

    let live_cols: Vec<usize> = (0..m.cols)
        .filter(|&c| col_alive[c] && col_count[c] > 0)
        .collect();
    let live_rows: Vec<usize> = (0..m.rows)
        .filter(|&r| row_alive[r] && !rows[r].is_empty())
        .collect();
    if live_cols.is_empty() || live_rows.is_empty() {
        return Elimination {
            rank: pivots,
            torsion: Vec::new(),
        };
    }
    let mut col_pos = vec![usize::MAX; m.cols];
    for (i, &c) in live_cols.iter().enumerate() {
        col_pos[c] = i;
    }
    let mut rest = IntMatrix::zeros(live_rows.len(), live_cols.len());
    for (i, &r) in live_rows.iter().enumerate() {
        for (c, v) in &rows[r] {
            rest.set(i, col_pos[*c], v.clone());
        }
    }
    let tail = dense_elimination(&rest);
    Elimination {
        rank: pivots + tail.rank,
        torsion: tail.torsion,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn triplets_sum_and_drop_zeros() {
        let m = SparseIntMatrix::from_triplets(
            2,
            2,
            [
                (0, 0, big(1)),
                (0, 0, big(-1)),
                (1, 1, big(3)),
                (1, 0, big(2)),
            ],
        );
        assert_eq!(m.row(0), &[]);
        assert_eq!(m.row(1), &[(0, big(2)), (1, big(3))]);
        assert_eq!(m.to_dense(), IntMatrix::from_i64_rows(&[&[0, 0], &[2, 3]]));
    }

    #[test]
    fn agrees_with_dense_on_examples() {
        let cases: Vec<IntMatrix> = vec![
            IntMatrix::from_i64_rows(&[&[2, 4], &[6, 8]]),
            IntMatrix::diagonal(&[6, 4]),
            IntMatrix::from_i64_rows(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]),
            IntMatrix::from_i64_rows(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]),
            IntMatrix::zeros(3, 2),
        ];
        for m in cases {
            assert_eq!(
                sparse_elimination(&SparseIntMatrix::from_dense(&m)),
                dense_elimination(&m),
                "{m:?}"
            );
        }
    }

    #[test]
    fn sparse_product() {
        let a = IntMatrix::from_i64_rows(&[&[1, 2], &[0, -1]]);
        let b = IntMatrix::from_i64_rows(&[&[3, 0, 1], &[1, 1, 0]]);
        let p = SparseIntMatrix::from_dense(&a).mul(&SparseIntMatrix::from_dense(&b));
        assert_eq!(p.to_dense(), a.mul(&b));
    }
}
