use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::lyndon::{lyndon_words, standard_factorization};
use super::series::{Layout, Ring, SparseUnit, Term};
use crate::config::Limits;
use crate::error::{Error, Result};

/// One element of the basis: a Lyndon word `w = uv` (standard factorization)
/// stands for the left-normed group commutator `[b_v, b_u]`, letters for the
/// generators themselves.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasicCommutator {
    pub word: Vec<usize>,
    pub weight: usize,
    /// `Some((i, j))` when the element is `[b_i, b_j]`.
    pub factors: Option<(usize, usize)>,
}

struct NilData {
    rank: usize,
    class: usize,
    basis: Vec<BasicCommutator>,
    /// `layers[w]..layers[w + 1]` are the basis elements of weight `w`.
    layers: Vec<usize>,
    layout: Layout,
    /// `powers[i][r - 1]` is `(M(b_i) - 1)^r` for the Magnus image `M`.
    powers: Vec<Vec<Vec<Term>>>,
    word_idx: Vec<usize>,
    /// Coefficient (always ±1) of the element's own word in its leading term.
    sign: Vec<i64>,
    /// Coefficients of later same-weight Lyndon words in the leading term.
    lead: Vec<Vec<(usize, i64)>>,
}

/// The free nilpotent group `F(d, c)` of rank `d` and class `c`, with elements
/// written in Mal'cev coordinates `b_1^{e_1} ... b_m^{e_m}` over the basis of
/// left-normed commutators attached to Lyndon words (ordered by weight, then
/// lexicographically).
///
/// Products are computed in the Magnus embedding `x_i -> 1 + X_i` into
/// power series truncated above degree `c`, which is faithful on `F(d, c)`.
#[derive(Clone)]
pub struct FreeNilGroup(Arc<NilData>);

impl fmt::Debug for FreeNilGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F({}, {})", self.rank(), self.class())
    }
}

impl PartialEq for FreeNilGroup {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.rank() == other.rank() && self.class() == other.class())
    }
}

impl Eq for FreeNilGroup {}

/// Total basis size of `F(d, c)` without building it.
pub fn basis_size(d: usize, c: usize) -> usize {
    (1..=c).map(|w| super::lyndon::witt_number(d, w)).sum()
}

/// Builds `F(d, c)` and its basis.
pub fn hall_basis(d: usize, c: usize) -> Result<FreeNilGroup> {
    FreeNilGroup::new(d, c)
}

impl FreeNilGroup {
    pub fn new(d: usize, c: usize) -> Result<Self> {
        if d == 0 || c == 0 {
            return Err(Error::Invalid(
                "free nilpotent group needs rank and class at least 1".into(),
            ));
        }
        let limit = Limits::current().max_hall_basis;
        let size = basis_size(d, c);
        if size > limit {
            return Err(Error::SizeLimit {
                what: "Hall basis",
                size,
                limit,
            });
        }
        let layout = Layout::new(d, c);
        let words = lyndon_words(d, c);
        let index: HashMap<&[usize], usize> = words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.as_slice(), i))
            .collect();
        let mut basis = Vec::with_capacity(words.len());
        let mut magnus: Vec<SparseUnit> = Vec::with_capacity(words.len());
        for w in &words {
            if w.len() == 1 {
                basis.push(BasicCommutator {
                    word: w.clone(),
                    weight: 1,
                    factors: None,
                });
                magnus.push(SparseUnit::letter(w[0]));
            } else {
                let (split, _) = standard_factorization(w);
                let u = index[&w[..split]];
                let v = index[&w[split..]];
                basis.push(BasicCommutator {
                    word: w.clone(),
                    weight: w.len(),
                    factors: Some((v, u)),
                });
                magnus.push(SparseUnit::commutator(&magnus[v], &magnus[u], &layout));
            }
        }
        let mut layers = vec![0; c + 2];
        for w in 1..=c + 1 {
            layers[w] = basis.iter().take_while(|b| b.weight < w).count();
        }
        let word_idx: Vec<usize> = words.iter().map(|w| layout.word_index(w)).collect();
        let position: HashMap<(usize, usize), usize> = words
            .iter()
            .enumerate()
            .map(|(i, w)| ((w.len(), word_idx[i]), i))
            .collect();
        let mut sign = vec![0; words.len()];
        let mut lead = vec![Vec::new(); words.len()];
        for (i, m) in magnus.iter().enumerate() {
            let w = basis[i].weight;
            for (&(deg, idx), &coef) in m.0.range((w, 0)..(w + 1, 0)) {
                let Some(&j) = position.get(&(deg, idx)) else {
                    continue;
                };
                // the leading Lie term of a Lyndon commutator is triangular
                // with respect to the lexicographic order of Lyndon words
                assert!(
                    j >= i,
                    "leading term of basis element {i} involves earlier word {j}"
                );
                if j == i {
                    assert!(
                        coef.abs() == 1,
                        "leading coefficient {coef} of basis element {i}"
                    );
                    sign[i] = coef;
                } else {
                    lead[i].push((j, coef));
                }
            }
            assert!(sign[i] != 0, "basis element {i} misses its own word");
        }
        let powers = magnus.iter().map(|m| m.powers(&layout)).collect();
        Ok(FreeNilGroup(Arc::new(NilData {
            rank: d,
            class: c,
            basis,
            layers,
            layout,
            powers,
            word_idx,
            sign,
            lead,
        })))
    }

    pub fn rank(&self) -> usize {
        self.0.rank
    }

    pub fn class(&self) -> usize {
        self.0.class
    }

    pub fn basis(&self) -> &[BasicCommutator] {
        &self.0.basis
    }

    /// Number of Mal'cev coordinates.
    pub fn len(&self) -> usize {
        self.0.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.basis.is_empty()
    }

    pub fn weight(&self, i: usize) -> usize {
        self.0.basis[i].weight
    }

    /// Indices of basis elements of weight `w`.
    pub fn layer(&self, w: usize) -> std::ops::Range<usize> {
        if w == 0 || w > self.class() {
            return 0..0;
        }
        self.0.layers[w]..self.0.layers[w + 1]
    }

    /// Human-readable name of a basis element, e.g. `[x2,x1]`.
    pub fn basis_name(&self, i: usize) -> String {
        match self.0.basis[i].factors {
            None => format!("x{}", self.0.basis[i].word[0] + 1),
            Some((a, b)) => format!("[{},{}]", self.basis_name(a), self.basis_name(b)),
        }
    }

    pub fn same_as(&self, other: &FreeNilGroup) -> bool {
        self == other
    }

    pub fn identity(&self) -> NilWord {
        NilWord {
            group: self.clone(),
            coords: vec![BigInt::zero(); self.len()],
        }
    }

    /// The `i`-th generator `x_{i+1}` (0-based).
    pub fn generator(&self, i: usize) -> NilWord {
        assert!(i < self.rank(), "generator index out of range");
        self.basis_element(i)
    }

    pub fn basis_element(&self, i: usize) -> NilWord {
        let mut w = self.identity();
        w.coords[i] = BigInt::one();
        w
    }

    pub fn word(&self, coords: Vec<BigInt>) -> Result<NilWord> {
        if coords.len() != self.len() {
            return Err(Error::IndexOutOfRange {
                index: coords.len(),
                dim: self.len(),
            });
        }
        Ok(NilWord {
            group: self.clone(),
            coords,
        })
    }

    pub fn word_i64(&self, coords: &[i64]) -> Result<NilWord> {
        self.word(coords.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub(crate) fn mul_coords(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        if is_identity(b) {
            return a.to_vec();
        }
        if is_identity(a) {
            return b.to_vec();
        }
        two_tier(
            || mul_g::<i64>(&self.0, a, b),
            || mul_g::<BigInt>(&self.0, a, b),
        )
    }

    pub(crate) fn inv_coords(&self, a: &[BigInt]) -> Vec<BigInt> {
        if is_identity(a) {
            return a.to_vec();
        }
        two_tier(|| inv_g::<i64>(&self.0, a), || inv_g::<BigInt>(&self.0, a))
    }

    pub(crate) fn pow_coords(&self, a: &[BigInt], n: &BigInt) -> Vec<BigInt> {
        if n.is_zero() || is_identity(a) {
            return vec![BigInt::zero(); self.len()];
        }
        if n.is_one() {
            return a.to_vec();
        }
        two_tier(
            || pow_g::<i64>(&self.0, a, n),
            || pow_g::<BigInt>(&self.0, a, n),
        )
    }

    /// `a · s^n`
    pub(crate) fn mul_pow_coords(&self, a: &[BigInt], s: &[BigInt], n: &BigInt) -> Vec<BigInt> {
        if n.is_zero() || is_identity(s) {
            return a.to_vec();
        }
        two_tier(
            || mul_pow_g::<i64>(&self.0, a, s, n),
            || mul_pow_g::<BigInt>(&self.0, a, s, n),
        )
    }

    /// `a^{-1} b^{-1} a b`
    pub(crate) fn comm_coords(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        if is_identity(a) || is_identity(b) {
            return vec![BigInt::zero(); self.len()];
        }
        two_tier(
            || comm_g::<i64>(&self.0, a, b),
            || comm_g::<BigInt>(&self.0, a, b),
        )
    }

    /// Magnus image of an element, as exact coefficients indexed like the
    /// dense series (words of length `0..=c`).
    pub fn magnus_series(&self, w: &NilWord) -> Vec<BigInt> {
        let e: Vec<BigInt> = w.coords.clone();
        self.0
            .series_of::<BigInt>(&e)
            .expect("big integer arithmetic cannot overflow")
    }

    /// Coordinate map of the homomorphism `F(D, k) -> target` that sends the
    /// letters `kept[0] < kept[1] < ...` to the target's generators in order and
    /// every other letter to the identity. Basis elements built only from kept
    /// letters go to the corresponding basis elements (or vanish above the
    /// target's class); all others go to the identity.
    pub fn letter_projection(
        &self,
        target: &FreeNilGroup,
        kept: &[usize],
    ) -> Result<LetterProjection> {
        if kept.len() != target.rank()
            || kept.windows(2).any(|w| w[0] >= w[1])
            || kept.iter().any(|&k| k >= self.rank())
        {
            return Err(Error::Invalid(
                "projection letters must be increasing and match the target rank".into(),
            ));
        }
        let target_index: HashMap<&[usize], usize> = target
            .basis()
            .iter()
            .enumerate()
            .map(|(i, b)| (b.word.as_slice(), i))
            .collect();
        let map = self
            .basis()
            .iter()
            .map(|b| {
                let w: Option<Vec<usize>> = b
                    .word
                    .iter()
                    .map(|x| kept.iter().position(|k| k == x))
                    .collect();
                w.and_then(|w| target_index.get(w.as_slice()).copied())
            })
            .collect();
        Ok(LetterProjection {
            source: self.clone(),
            target: target.clone(),
            map,
        })
    }

    /// The quotient map to `F(d, c')` for `c' <= c`: the basis of the smaller
    /// class is a prefix of this one.
    pub fn truncate(&self, w: &NilWord, target: &FreeNilGroup) -> Result<NilWord> {
        if target.rank() != self.rank() || target.class() > self.class() || w.group != *self {
            return Err(Error::AmbientMismatch);
        }
        target.word(w.coords[..target.len()].to_vec())
    }
}

/// A homomorphism between free nilpotent groups acting on coordinates by
/// selection; see [`FreeNilGroup::letter_projection`].
#[derive(Clone, Debug)]
pub struct LetterProjection {
    source: FreeNilGroup,
    target: FreeNilGroup,
    map: Vec<Option<usize>>,
}

impl LetterProjection {
    pub fn source(&self) -> &FreeNilGroup {
        &self.source
    }

    pub fn target(&self) -> &FreeNilGroup {
        &self.target
    }

    pub(crate) fn apply_coords(&self, a: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.target.len()];
        for (x, m) in a.iter().zip(&self.map) {
            if let Some(j) = m {
                out[*j] = x.clone();
            }
        }
        out
    }

    pub fn apply(&self, w: &NilWord) -> NilWord {
        assert!(w.group == self.source, "word from a different group");
        NilWord {
            group: self.target.clone(),
            coords: self.apply_coords(&w.coords),
        }
    }
}

fn is_identity(a: &[BigInt]) -> bool {
    a.iter().all(Zero::is_zero)
}

fn two_tier<T>(small: impl FnOnce() -> Option<T>, big: impl FnOnce() -> Option<T>) -> T {
    small()
        .or_else(big)
        .expect("big integer arithmetic cannot overflow")
}

fn to_ring<R: Ring>(v: &[BigInt]) -> Option<Vec<R>> {
    v.iter().map(R::from_big).collect()
}

fn from_ring<R: Ring>(v: &[R]) -> Vec<BigInt> {
    v.iter().map(R::to_big).collect()
}

fn mul_g<R: Ring>(d: &NilData, a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let (a, b) = (to_ring::<R>(a)?, to_ring::<R>(b)?);
    let mut s = d.series_of(&a)?;
    d.append(&mut s, &b, false)?;
    Some(from_ring(&d.coords_of(s)?))
}

fn inv_g<R: Ring>(d: &NilData, a: &[BigInt]) -> Option<Vec<BigInt>> {
    let a = to_ring::<R>(a)?;
    let mut s = d.layout.unit();
    d.append(&mut s, &a, true)?;
    Some(from_ring(&d.coords_of(s)?))
}

fn pow_g<R: Ring>(d: &NilData, a: &[BigInt], n: &BigInt) -> Option<Vec<BigInt>> {
    let (a, n) = (to_ring::<R>(a)?, R::from_big(n)?);
    let s = d.layout.pow(&d.series_of(&a)?, &n)?;
    Some(from_ring(&d.coords_of(s)?))
}

fn mul_pow_g<R: Ring>(d: &NilData, a: &[BigInt], s: &[BigInt], n: &BigInt) -> Option<Vec<BigInt>> {
    let (a, s, n) = (to_ring::<R>(a)?, to_ring::<R>(s)?, R::from_big(n)?);
    let p = d.layout.pow(&d.series_of(&s)?, &n)?;
    let prod = d.layout.mul(&d.series_of(&a)?, &p)?;
    Some(from_ring(&d.coords_of(prod)?))
}

fn comm_g<R: Ring>(d: &NilData, a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let (a, b) = (to_ring::<R>(a)?, to_ring::<R>(b)?);
    let mut s = d.layout.unit();
    d.append(&mut s, &a, true)?;
    d.append(&mut s, &b, true)?;
    d.append(&mut s, &a, false)?;
    d.append(&mut s, &b, false)?;
    Some(from_ring(&d.coords_of(s)?))
}

impl NilData {
    /// `s <- s · b_i^e`
    fn apply_right<R: Ring>(&self, s: &mut [R], i: usize, e: &R) -> Option<()> {
        let l = &self.layout;
        let w = self.basis[i].weight;
        let tmp = s[..l.off[l.c - w + 1]].to_vec();
        for (r, terms) in self.powers[i].iter().enumerate() {
            let b = R::binom(e, r + 1)?;
            if b.is_zero() {
                if !e.is_negative() {
                    break;
                }
                continue;
            }
            for t in terms {
                l.add_right_product(s, &tmp, t, &b)?;
            }
        }
        Some(())
    }

    /// `s <- b_i^e · s`
    fn apply_left<R: Ring>(&self, s: &mut [R], i: usize, e: &R) -> Option<()> {
        let l = &self.layout;
        let w = self.basis[i].weight;
        let tmp = s[..l.off[l.c - w + 1]].to_vec();
        for (r, terms) in self.powers[i].iter().enumerate() {
            let b = R::binom(e, r + 1)?;
            if b.is_zero() {
                if !e.is_negative() {
                    break;
                }
                continue;
            }
            for t in terms {
                l.add_left_product(s, &tmp, t, &b)?;
            }
        }
        Some(())
    }

    /// `s <- s · u` or `s <- s · u^{-1}` for `u` given by coordinates.
    fn append<R: Ring>(&self, s: &mut [R], u: &[R], inverse: bool) -> Option<()> {
        if inverse {
            for i in (0..u.len()).rev() {
                if !u[i].is_zero() {
                    self.apply_right(s, i, &u[i].neg_c()?)?;
                }
            }
        } else {
            for (i, e) in u.iter().enumerate() {
                if !e.is_zero() {
                    self.apply_right(s, i, e)?;
                }
            }
        }
        Some(())
    }

    fn series_of<R: Ring>(&self, u: &[R]) -> Option<Vec<R>> {
        let mut s = self.layout.unit();
        self.append(&mut s, u, false)?;
        Some(s)
    }

    /// Mal'cev coordinates of a group-like series, peeled off weight by weight
    /// from the left.
    fn coords_of<R: Ring>(&self, mut s: Vec<R>) -> Option<Vec<R>> {
        let l = &self.layout;
        let c = self.class;
        let mut e = vec![R::zero(); self.basis.len()];
        for w in 1..=c {
            let (lo, hi) = (self.layers[w], self.layers[w + 1]);
            let mut a: Vec<R> = (lo..hi)
                .map(|i| s[l.off[w] + self.word_idx[i]].clone())
                .collect();
            for i in lo..hi {
                let ei = if self.sign[i] == 1 {
                    a[i - lo].clone()
                } else {
                    a[i - lo].neg_c()?
                };
                if !ei.is_zero() {
                    for &(j, coef) in &self.lead[i] {
                        a[j - lo] = a[j - lo].sub_c(&ei.mul_c(&R::from_i64(coef))?)?;
                    }
                }
                e[i] = ei;
            }
            if w == c {
                break;
            }
            if 2 * w > c {
                // b^{-e} = 1 - e(M(b) - 1) here, and its product with the
                // remaining part only differs from a sum above degree c
                for i in lo..hi {
                    if e[i].is_zero() {
                        continue;
                    }
                    let ne = e[i].neg_c()?;
                    for t in &self.powers[i][0] {
                        s[l.off[t.deg] + t.idx].add_mul(&ne, &R::from_i64(t.coef))?;
                    }
                }
            } else {
                for i in lo..hi {
                    if !e[i].is_zero() {
                        self.apply_left(&mut s, i, &e[i].neg_c()?)?;
                    }
                }
            }
        }
        Some(e)
    }
}

/// An element of a free nilpotent group in Mal'cev coordinates. Equality is
/// equality of coordinate vectors, since normal forms are unique.
#[derive(Clone, PartialEq, Eq)]
pub struct NilWord {
    group: FreeNilGroup,
    coords: Vec<BigInt>,
}

impl NilWord {
    pub fn group(&self) -> &FreeNilGroup {
        &self.group
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.coords
    }

    pub fn is_identity(&self) -> bool {
        is_identity(&self.coords)
    }

    fn check(&self, other: &NilWord) {
        assert!(
            self.group == other.group,
            "words from different groups: {:?} and {:?}",
            self.group,
            other.group
        );
    }

    pub fn mul(&self, other: &NilWord) -> NilWord {
        self.check(other);
        NilWord {
            group: self.group.clone(),
            coords: self.group.mul_coords(&self.coords, &other.coords),
        }
    }

    pub fn inv(&self) -> NilWord {
        NilWord {
            group: self.group.clone(),
            coords: self.group.inv_coords(&self.coords),
        }
    }

    pub fn pow(&self, n: impl Into<BigInt>) -> NilWord {
        NilWord {
            group: self.group.clone(),
            coords: self.group.pow_coords(&self.coords, &n.into()),
        }
    }

    /// `[self, other] = self^{-1} other^{-1} self other`
    pub fn comm(&self, other: &NilWord) -> NilWord {
        self.check(other);
        NilWord {
            group: self.group.clone(),
            coords: self.group.comm_coords(&self.coords, &other.coords),
        }
    }

    /// `other^{-1} self other`
    pub fn conj(&self, other: &NilWord) -> NilWord {
        other.inv().mul(self).mul(other)
    }

    /// Index of the first nonzero coordinate.
    pub fn lead(&self) -> Option<usize> {
        self.coords.iter().position(|x| !x.is_zero())
    }

    /// Smallest weight of a nonzero coordinate: the element lies in that term
    /// of the lower central series.
    pub fn depth(&self) -> Option<usize> {
        self.lead().map(|i| self.group.weight(i))
    }

    /// The weight-one coordinates (image in the abelianization).
    pub fn abelian_image(&self) -> &[BigInt] {
        &self.coords[..self.group.rank()]
    }
}

impl fmt::Display for NilWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, e) in self.coords.iter().enumerate() {
            if e.is_zero() {
                continue;
            }
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "{}", self.group.basis_name(i))?;
            if !e.is_one() {
                write!(f, "^{e}")?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

impl fmt::Debug for NilWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}[{}]", self.group, self)
    }
}

#[derive(Serialize, Deserialize)]
struct WordRepr {
    rank: usize,
    class: usize,
    #[serde(with = "crate::serde_int::vec")]
    exponents: Vec<BigInt>,
}

impl Serialize for NilWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WordRepr {
            rank: self.group.rank(),
            class: self.group.class(),
            exponents: self.coords.clone(),
        }
        .serialize(s)
    }
}

impl NilWord {
    /// Reads the serialized form `{"rank", "class", "exponents"}`.
    pub fn from_json(v: &serde_json::Value) -> Result<NilWord> {
        let r: WordRepr =
            serde_json::from_value(v.clone()).map_err(|e| Error::Invalid(e.to_string()))?;
        FreeNilGroup::new(r.rank, r.class)?.word(r.exponents)
    }
}
