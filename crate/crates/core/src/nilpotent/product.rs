use num_bigint::BigInt;

use super::PcGroup;

/// Direct product `A × B` with the coordinates of `A` first.
#[derive(Clone, Debug)]
pub struct ProductGroup<A, B> {
    pub left: A,
    pub right: B,
}

impl<A: PcGroup, B: PcGroup> ProductGroup<A, B> {
    pub fn new(left: A, right: B) -> Self {
        ProductGroup { left, right }
    }

    fn split<'a>(&self, a: &'a [BigInt]) -> (&'a [BigInt], &'a [BigInt]) {
        a.split_at(self.left.num_coords())
    }

    pub fn pair(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let mut v = a.to_vec();
        v.extend_from_slice(b);
        v
    }

    pub fn left_part<'a>(&self, a: &'a [BigInt]) -> &'a [BigInt] {
        self.split(a).0
    }

    pub fn right_part<'a>(&self, a: &'a [BigInt]) -> &'a [BigInt] {
        self.split(a).1
    }
}

impl<A: PcGroup, B: PcGroup> PcGroup for ProductGroup<A, B> {
    fn num_coords(&self) -> usize {
        self.left.num_coords() + self.right.num_coords()
    }
    fn weight(&self, i: usize) -> usize {
        let n = self.left.num_coords();
        if i < n {
            self.left.weight(i)
        } else {
            self.right.weight(i - n)
        }
    }
    fn class(&self) -> usize {
        self.left.class().max(self.right.class())
    }
    fn mul(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let ((a0, a1), (b0, b1)) = (self.split(a), self.split(b));
        self.pair(&self.left.mul(a0, b0), &self.right.mul(a1, b1))
    }
    fn inv(&self, a: &[BigInt]) -> Vec<BigInt> {
        let (a0, a1) = self.split(a);
        self.pair(&self.left.inv(a0), &self.right.inv(a1))
    }
    fn pow(&self, a: &[BigInt], n: &BigInt) -> Vec<BigInt> {
        let (a0, a1) = self.split(a);
        self.pair(&self.left.pow(a0, n), &self.right.pow(a1, n))
    }
    fn comm(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let ((a0, a1), (b0, b1)) = (self.split(a), self.split(b));
        self.pair(&self.left.comm(a0, b0), &self.right.comm(a1, b1))
    }
    fn mul_pow(&self, a: &[BigInt], s: &[BigInt], n: &BigInt) -> Vec<BigInt> {
        let ((a0, a1), (s0, s1)) = (self.split(a), self.split(s));
        self.pair(
            &self.left.mul_pow(a0, s0, n),
            &self.right.mul_pow(a1, s1, n),
        )
    }
    fn generators(&self) -> Vec<Vec<BigInt>> {
        let (e0, e1) = (self.left.identity(), self.right.identity());
        let mut out: Vec<Vec<BigInt>> = self
            .left
            .generators()
            .iter()
            .map(|g| self.pair(g, &e1))
            .collect();
        out.extend(self.right.generators().iter().map(|g| self.pair(&e0, g)));
        out
    }
}
