//! Free nilpotent groups of finite rank and class, and subgroups of them (and
//! of their direct products) given by induced polycyclic sequences.

pub mod collect;
mod free;
mod lyndon;
mod product;
mod series;
mod subgroup;

use num_bigint::BigInt;
use num_traits::Zero;

pub use collect::Collector;
pub use free::{basis_size, hall_basis, BasicCommutator, FreeNilGroup, LetterProjection, NilWord};
pub use lyndon::{is_lyndon, lyndon_words, standard_factorization, witt_number};
pub use product::ProductGroup;
pub use subgroup::{abelian_quotient, AbelianQuotient, PcSubgroup};

/// A torsion-free nilpotent group with a Mal'cev basis refining its lower
/// central series: coordinates are ordered by weight within each block, the
/// subgroups `G_i` of elements whose first `i` coordinates vanish are normal,
/// and `G_i / G_{i+1}` is infinite cyclic and central in `G / G_{i+1}`.
pub trait PcGroup: Clone {
    fn num_coords(&self) -> usize;
    /// Lower central weight of coordinate `i`.
    fn weight(&self, i: usize) -> usize;
    fn class(&self) -> usize;
    fn mul(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt>;
    fn inv(&self, a: &[BigInt]) -> Vec<BigInt>;
    fn pow(&self, a: &[BigInt], n: &BigInt) -> Vec<BigInt>;
    /// `a^{-1} b^{-1} a b`
    fn comm(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt>;
    /// Generators of the whole group.
    fn generators(&self) -> Vec<Vec<BigInt>>;

    /// `a · s^n`
    fn mul_pow(&self, a: &[BigInt], s: &[BigInt], n: &BigInt) -> Vec<BigInt> {
        self.mul(a, &self.pow(s, n))
    }

    fn identity(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.num_coords()]
    }

    /// Smallest weight of a nonzero coordinate, `None` for the identity.
    fn depth(&self, a: &[BigInt]) -> Option<usize> {
        a.iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, _)| self.weight(i))
            .min()
    }
}

impl PcGroup for FreeNilGroup {
    fn num_coords(&self) -> usize {
        self.len()
    }
    fn weight(&self, i: usize) -> usize {
        FreeNilGroup::weight(self, i)
    }
    fn class(&self) -> usize {
        FreeNilGroup::class(self)
    }
    fn mul(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        self.mul_coords(a, b)
    }
    fn inv(&self, a: &[BigInt]) -> Vec<BigInt> {
        self.inv_coords(a)
    }
    fn pow(&self, a: &[BigInt], n: &BigInt) -> Vec<BigInt> {
        self.pow_coords(a, n)
    }
    fn comm(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        self.comm_coords(a, b)
    }
    fn generators(&self) -> Vec<Vec<BigInt>> {
        (0..self.rank())
            .map(|i| self.generator(i).into_coords())
            .collect()
    }
    fn mul_pow(&self, a: &[BigInt], s: &[BigInt], n: &BigInt) -> Vec<BigInt> {
        self.mul_pow_coords(a, s, n)
    }
    fn depth(&self, a: &[BigInt]) -> Option<usize> {
        a.iter()
            .position(|x| !x.is_zero())
            .map(|i| FreeNilGroup::weight(self, i))
    }
}

#[cfg(test)]
mod tests;
