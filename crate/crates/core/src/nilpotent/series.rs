//! Truncated power series in non-commuting variables `X_0, ..., X_{d-1}`,
//! the target of the Magnus embedding.
//!
//! A dense series stores one coefficient per word of length `0..=c`; words of
//! length `t` sit at `off[t] + (base-d value of the word)`. Arithmetic is
//! generic over [`Ring`] so that hot loops run on checked `i64` and fall back
//! to big integers only when a coefficient overflows.

use std::collections::BTreeMap;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub(crate) trait Ring: Clone + PartialEq + Debug + Zero + One + Signed {
    fn from_i64(v: i64) -> Self;
    fn from_big(v: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn sub_c(&self, o: &Self) -> Option<Self>;
    fn mul_c(&self, o: &Self) -> Option<Self>;
    fn neg_c(&self) -> Option<Self>;
    /// `self += a * b`
    fn add_mul(&mut self, a: &Self, b: &Self) -> Option<()>;
    /// `e choose r` for any integer `e`.
    fn binom(e: &Self, r: usize) -> Option<Self>;
}

impl Ring for i64 {
    fn from_i64(v: i64) -> Self {
        v
    }
    fn from_big(v: &BigInt) -> Option<Self> {
        v.to_i64()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn sub_c(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn mul_c(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn neg_c(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn add_mul(&mut self, a: &Self, b: &Self) -> Option<()> {
        *self = self.checked_add(a.checked_mul(*b)?)?;
        Some(())
    }
    fn binom(e: &Self, r: usize) -> Option<Self> {
        let mut b: i128 = 1;
        for k in 0..r as i128 {
            b = b.checked_mul(*e as i128 - k)? / (k + 1);
        }
        b.try_into().ok()
    }
}

impl Ring for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn from_big(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn sub_c(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul_c(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn neg_c(&self) -> Option<Self> {
        Some(-self)
    }
    fn add_mul(&mut self, a: &Self, b: &Self) -> Option<()> {
        *self += a * b;
        Some(())
    }
    fn binom(e: &Self, r: usize) -> Option<Self> {
        let mut b = BigInt::one();
        for k in 0..r {
            b = b * (e - BigInt::from(k)) / BigInt::from(k + 1);
        }
        Some(b)
    }
}

/// Index arithmetic for words of length at most `c` over `d` letters.
#[derive(Clone, Debug)]
pub(crate) struct Layout {
    pub d: usize,
    pub c: usize,
    pub pow: Vec<usize>,
    pub off: Vec<usize>,
}

impl Layout {
    pub fn new(d: usize, c: usize) -> Self {
        let pow: Vec<usize> = (0..=c).map(|t| d.pow(t as u32)).collect();
        let mut off = vec![0; c + 2];
        for t in 0..=c {
            off[t + 1] = off[t] + pow[t];
        }
        Layout { d, c, pow, off }
    }

    pub fn len(&self) -> usize {
        self.off[self.c + 1]
    }

    pub fn word_index(&self, w: &[usize]) -> usize {
        w.iter().fold(0, |acc, &x| acc * self.d + x)
    }

    pub fn unit<R: Ring>(&self) -> Vec<R> {
        let mut s = vec![R::zero(); self.len()];
        s[0] = R::one();
        s
    }

    /// `out += f · a · X_t` where `X_t` is the monomial of the term.
    pub fn add_right_product<R: Ring>(
        &self,
        out: &mut [R],
        a: &[R],
        t: &Term,
        f: &R,
    ) -> Option<()> {
        let fac = f.mul_c(&R::from_i64(t.coef))?;
        let p = self.pow[t.deg];
        for s in 0..=self.c - t.deg {
            let base = self.off[s + t.deg] + t.idx;
            let src = &a[self.off[s]..self.off[s + 1]];
            for (sigma, v) in src.iter().enumerate() {
                if !v.is_zero() {
                    out[base + sigma * p].add_mul(v, &fac)?;
                }
            }
        }
        Some(())
    }

    /// `out += f · X_t · a`.
    pub fn add_left_product<R: Ring>(&self, out: &mut [R], a: &[R], t: &Term, f: &R) -> Option<()> {
        let fac = f.mul_c(&R::from_i64(t.coef))?;
        for s in 0..=self.c - t.deg {
            let base = self.off[s + t.deg] + t.idx * self.pow[s];
            let src = &a[self.off[s]..self.off[s + 1]];
            for (sigma, v) in src.iter().enumerate() {
                if !v.is_zero() {
                    out[base + sigma].add_mul(v, &fac)?;
                }
            }
        }
        Some(())
    }

    pub fn mul<R: Ring>(&self, a: &[R], b: &[R]) -> Option<Vec<R>> {
        let mut out = vec![R::zero(); self.len()];
        for s in 0..=self.c {
            for sigma in 0..self.pow[s] {
                let x = &a[self.off[s] + sigma];
                if x.is_zero() {
                    continue;
                }
                for t in 0..=self.c - s {
                    let base = self.off[s + t] + sigma * self.pow[t];
                    for (tau, y) in b[self.off[t]..self.off[t + 1]].iter().enumerate() {
                        if !y.is_zero() {
                            out[base + tau].add_mul(x, y)?;
                        }
                    }
                }
            }
        }
        Some(out)
    }

    /// `s^n` for a series with constant term one, by the binomial series.
    pub fn pow<R: Ring>(&self, s: &[R], n: &R) -> Option<Vec<R>> {
        let mut a = s.to_vec();
        a[0] = R::zero();
        let mut out: Vec<R> = self.unit();
        let mut ar = self.unit::<R>();
        for r in 1..=self.c {
            ar = self.mul(&ar, &a)?;
            let b = R::binom(n, r)?;
            if b.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(&ar) {
                if !x.is_zero() {
                    o.add_mul(x, &b)?;
                }
            }
        }
        Some(out)
    }
}

/// One monomial of a sparse series: the word with index `idx` among words of
/// length `deg`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Term {
    pub deg: usize,
    pub idx: usize,
    pub coef: i64,
}

/// A series `1 + A` with `A` stored sparsely; used to build the Magnus images
/// of basis elements once per group.
#[derive(Clone, Debug, Default)]
pub(crate) struct SparseUnit(pub BTreeMap<(usize, usize), i64>);

impl SparseUnit {
    pub fn letter(x: usize) -> Self {
        SparseUnit(BTreeMap::from([((1, x), 1)]))
    }

    fn mul_parts(
        l: &Layout,
        a: &BTreeMap<(usize, usize), i64>,
        b: &BTreeMap<(usize, usize), i64>,
    ) -> BTreeMap<(usize, usize), i64> {
        let mut out = BTreeMap::new();
        for (&(s, i), &x) in a {
            for (&(t, j), &y) in b {
                if s + t > l.c {
                    continue;
                }
                let v: &mut i64 = out.entry((s + t, i * l.pow[t] + j)).or_insert(0);
                *v = v
                    .checked_add(x.checked_mul(y).expect("Magnus coefficient overflow"))
                    .expect("Magnus coefficient overflow");
            }
        }
        out.retain(|_, v| *v != 0);
        out
    }

    fn add_into(
        a: &mut BTreeMap<(usize, usize), i64>,
        b: &BTreeMap<(usize, usize), i64>,
        sign: i64,
    ) {
        for (&k, &v) in b {
            *a.entry(k).or_insert(0) += sign * v;
        }
        a.retain(|_, v| *v != 0);
    }

    pub fn mul(&self, o: &Self, l: &Layout) -> Self {
        let mut r = self.0.clone();
        Self::add_into(&mut r, &o.0, 1);
        Self::add_into(&mut r, &Self::mul_parts(l, &self.0, &o.0), 1);
        SparseUnit(r)
    }

    pub fn inverse(&self, l: &Layout) -> Self {
        let mut out = BTreeMap::new();
        let mut power = self.0.clone();
        let mut sign = -1;
        while !power.is_empty() {
            Self::add_into(&mut out, &power, sign);
            power = Self::mul_parts(l, &power, &self.0);
            sign = -sign;
        }
        SparseUnit(out)
    }

    /// `x^{-1} y^{-1} x y`
    pub fn commutator(x: &Self, y: &Self, l: &Layout) -> Self {
        x.inverse(l).mul(&y.inverse(l), l).mul(x, l).mul(y, l)
    }

    /// The powers `A, A^2, ...` of the non-constant part, as term lists.
    pub fn powers(&self, l: &Layout) -> Vec<Vec<Term>> {
        let mut out = Vec::new();
        let mut power = self.0.clone();
        while !power.is_empty() {
            out.push(
                power
                    .iter()
                    .map(|(&(deg, idx), &coef)| Term { deg, idx, coef })
                    .collect(),
            );
            power = Self::mul_parts(l, &power, &self.0);
        }
        out
    }
}
