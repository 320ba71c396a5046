//! Integral homology of finite groups from the normalized bar complex.
//!
//! `C_n` has basis the n-tuples `[g1|...|gn]` of non-identity elements, in
//! lexicographic order; `C_0 = Z`. Boundary matrices are stored with one row
//! per basis element of the domain, so the homology in degree n is read off
//! from the Smith forms of `d_n` and `d_{n+1}` as relation matrices.

use num_bigint::BigInt;

use crate::abelian::{
    dense_elimination, sparse_elimination, Elimination, FgAbelianGroup, SparseIntMatrix,
};
use crate::config::Limits;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;

/// Basis of the normalized chain group in one degree.
#[derive(Clone, Debug)]
pub struct BarChainBasis {
    order: usize,
    degree: usize,
}

impl BarChainBasis {
    pub fn new(g: &FiniteGroup, degree: usize) -> Self {
        BarChainBasis {
            order: g.order(),
            degree,
        }
    }

    pub fn len(&self) -> usize {
        (self.order - 1).pow(self.degree as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Index of a tuple of non-identity elements.
    pub fn index(&self, tuple: &[usize]) -> usize {
        debug_assert_eq!(tuple.len(), self.degree);
        tuple
            .iter()
            .fold(0, |acc, &g| acc * (self.order - 1) + (g - 1))
    }

    pub fn tuple(&self, mut index: usize) -> Vec<usize> {
        let mut t = vec![0; self.degree];
        for slot in t.iter_mut().rev() {
            *slot = index % (self.order - 1) + 1;
            index /= self.order - 1;
        }
        t
    }
}

fn checked_size(base: usize, degree: usize) -> Result<usize> {
    let limit = Limits::current().max_bar_basis;
    let size = (base as u128).pow(degree as u32);
    if size > limit as u128 {
        return Err(Error::SizeLimit {
            what: "bar complex basis",
            size: size.min(usize::MAX as u128) as usize,
            limit,
        });
    }
    Ok(size as usize)
}

/// The faces of `[g1|...|gn]` with their signs, identity-containing faces kept.
fn faces(g: &FiniteGroup, t: &[usize], mut emit: impl FnMut(i64, &[usize])) {
    let n = t.len();
    emit(1, &t[1..]);
    let mut buf = Vec::with_capacity(n.saturating_sub(1));
    for i in 1..n {
        buf.clear();
        buf.extend_from_slice(&t[..i - 1]);
        buf.push(g.mul(t[i - 1], t[i]));
        buf.extend_from_slice(&t[i + 1..]);
        emit(if i % 2 == 0 { 1 } else { -1 }, &buf);
    }
    emit(if n.is_multiple_of(2) { 1 } else { -1 }, &t[..n - 1]);
}

/// Matrix of `d_n: C_n -> C_{n-1}` in the normalized complex.
pub fn bar_boundary(g: &FiniteGroup, n: usize) -> Result<SparseIntMatrix> {
    assert!(n >= 1, "bar boundary needs degree >= 1");
    let rows = checked_size(g.order() - 1, n)?;
    let dom = BarChainBasis::new(g, n);
    let cod = BarChainBasis::new(g, n - 1);
    let mut m = SparseIntMatrix::new(rows, cod.len());
    for r in 0..rows {
        let t = dom.tuple(r);
        let mut entries: Vec<(usize, BigInt)> = Vec::new();
        faces(g, &t, |sign, face| {
            if face.iter().all(|&x| x != 0) {
                entries.push((cod.index(face), BigInt::from(sign)));
            }
        });
        m.set_row(r, entries);
    }
    Ok(m)
}

/// Matrix of `d_n` in the unnormalized complex (all n-tuples, identity included).
pub fn unnormalized_boundary(g: &FiniteGroup, n: usize) -> Result<SparseIntMatrix> {
    assert!(n >= 1);
    let order = g.order();
    let rows = checked_size(order, n)?;
    let cols = order.pow(n as u32 - 1);
    let index = |t: &[usize]| t.iter().fold(0, |acc, &x| acc * order + x);
    let mut m = SparseIntMatrix::new(rows, cols);
    let mut t = vec![0usize; n];
    for r in 0..rows {
        let mut x = r;
        for slot in t.iter_mut().rev() {
            *slot = x % order;
            x /= order;
        }
        let mut entries: Vec<(usize, BigInt)> = Vec::new();
        faces(g, &t, |sign, face| {
            entries.push((index(face), BigInt::from(sign)))
        });
        m.set_row(r, entries);
    }
    Ok(m)
}

fn eliminate(m: &SparseIntMatrix) -> Elimination {
    if m.rows() * m.cols() < 4096 {
        dense_elimination(&m.to_dense())
    } else {
        sparse_elimination(m)
    }
}

fn homology_from(dn: &SparseIntMatrix, dn1: &SparseIntMatrix) -> FgAbelianGroup {
    let en = eliminate(dn);
    let en1 = eliminate(dn1);
    FgAbelianGroup::new(en1.torsion, dn.rows() - en.rank - en1.rank)
}

/// `H_n(G, Z)` for `n >= 1`.
pub fn homology(g: &FiniteGroup, n: usize) -> Result<FgAbelianGroup> {
    if n == 0 {
        return Ok(FgAbelianGroup::free(1));
    }
    if g.order() == 1 {
        return Ok(FgAbelianGroup::trivial());
    }
    let dn1 = bar_boundary(g, n + 1)?;
    let dn = bar_boundary(g, n)?;
    Ok(homology_from(&dn, &dn1))
}

/// `H_n(G, Z)` from the unnormalized complex; only for cross-checking on tiny groups.
pub fn homology_unnormalized(g: &FiniteGroup, n: usize) -> Result<FgAbelianGroup> {
    assert!(n >= 1);
    let dn1 = unnormalized_boundary(g, n + 1)?;
    let dn = unnormalized_boundary(g, n)?;
    Ok(homology_from(&dn, &dn1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::IntMatrix;
    use crate::group::named_group;

    #[test]
    fn basis_indexing_roundtrip() {
        let g = FiniteGroup::cyclic(4);
        let b = BarChainBasis::new(&g, 3);
        assert_eq!(b.len(), 27);
        for i in 0..b.len() {
            assert_eq!(b.index(&b.tuple(i)), i);
        }
        assert_eq!(b.tuple(0), vec![1, 1, 1]);
    }

    #[test]
    fn small_boundaries() {
        let c2 = FiniteGroup::cyclic(2);
        assert_eq!(
            bar_boundary(&c2, 1).unwrap().to_dense(),
            IntMatrix::zeros(1, 1)
        );
        // d[g|g] = [g] - [e] + [g] with [e] dropped
        assert_eq!(
            bar_boundary(&c2, 2).unwrap().to_dense(),
            IntMatrix::from_i64_rows(&[&[2]])
        );
        let d = bar_boundary(&FiniteGroup::cyclic(3), 2).unwrap();
        assert_eq!((d.rows(), d.cols()), (4, 2));
    }

    #[test]
    fn known_homology() {
        assert_eq!(
            homology(&named_group("S3").unwrap(), 1).unwrap(),
            FgAbelianGroup::cyclic(2)
        );
        assert_eq!(
            homology(&named_group("V4").unwrap(), 2).unwrap(),
            FgAbelianGroup::cyclic(2)
        );
        assert_eq!(
            homology(&FiniteGroup::cyclic(2), 3).unwrap(),
            FgAbelianGroup::cyclic(2)
        );
        assert_eq!(
            homology(&FiniteGroup::cyclic(6), 2).unwrap(),
            FgAbelianGroup::trivial()
        );
        assert_eq!(
            homology(&FiniteGroup::trivial(), 2).unwrap(),
            FgAbelianGroup::trivial()
        );
    }

    #[test]
    fn normalized_matches_unnormalized() {
        for g in [
            FiniteGroup::cyclic(2),
            FiniteGroup::cyclic(3),
            FiniteGroup::cyclic(4),
            named_group("V4").unwrap(),
        ] {
            for n in 1..=2 {
                assert_eq!(
                    homology(&g, n).unwrap(),
                    homology_unnormalized(&g, n).unwrap()
                );
            }
        }
    }

    #[test]
    fn boundary_squares_to_zero() {
        let g = named_group("S3").unwrap();
        for n in 2..=3 {
            let p = bar_boundary(&g, n + 1)
                .unwrap()
                .mul(&bar_boundary(&g, n).unwrap());
            assert!(p.is_zero());
        }
    }
}
