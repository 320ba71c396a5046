use std::collections::{BTreeMap, HashSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{FreeNilGroup, LetterProjection, NilWord, PcGroup, ProductGroup};
use crate::abelian::{hnf, snf, FgAbelianGroup, IntMatrix, PrimeSet, Snf};
use crate::error::{Error, Result};

fn lead(x: &[BigInt]) -> Option<usize> {
    x.iter().position(|v| !v.is_zero())
}

/// A subgroup given by an induced polycyclic sequence `s_1, ..., s_t`:
/// leading indices strictly increase, leading exponents are positive, and every
/// element of the subgroup is uniquely `s_1^{k_1} ... s_t^{k_t}`.
#[derive(Clone, Debug)]
pub struct PcSubgroup<G: PcGroup = FreeNilGroup> {
    group: G,
    seq: Vec<Vec<BigInt>>,
    leads: Vec<usize>,
}

struct Slot {
    elem: Vec<BigInt>,
    version: u64,
    depth: usize,
}

/// Closure of a set of elements into an induced sequence, optionally under
/// commutation with a list of conjugators as well.
struct Builder<'a, G: PcGroup> {
    g: &'a G,
    slots: BTreeMap<usize, Slot>,
    next_version: u64,
    queue: VecDeque<usize>,
    done: HashSet<(u64, u64)>,
    conjugators: Vec<(Vec<BigInt>, usize)>,
}

impl<'a, G: PcGroup> Builder<'a, G> {
    fn new(g: &'a G, conjugators: Vec<Vec<BigInt>>) -> Self {
        let conjugators = conjugators
            .into_iter()
            .filter_map(|x| g.depth(&x).map(|d| (x, d)))
            .collect();
        Builder {
            g,
            slots: BTreeMap::new(),
            next_version: 0,
            queue: VecDeque::new(),
            done: HashSet::new(),
            conjugators,
        }
    }

    /// Seeds with a sequence already closed under commutators of its members
    /// (and, if `normal`, under the conjugators).
    fn seed(&mut self, s: &PcSubgroup<G>, normal: bool) {
        let mut versions = Vec::new();
        for (x, &i) in s.seq.iter().zip(&s.leads) {
            let v = self.put(i, x.clone(), false);
            versions.push(v);
        }
        for (a, &va) in versions.iter().enumerate() {
            for &vb in &versions[a + 1..] {
                self.done.insert((va, vb));
            }
            if normal {
                for c in 0..self.conjugators.len() {
                    self.done.insert((va, u64::MAX - c as u64));
                }
            }
        }
    }

    fn put(&mut self, i: usize, elem: Vec<BigInt>, enqueue: bool) -> u64 {
        let version = self.next_version;
        self.next_version += 1;
        let depth = self
            .g
            .depth(&elem)
            .expect("slots hold non-identity elements");
        self.slots.insert(
            i,
            Slot {
                elem,
                version,
                depth,
            },
        );
        if enqueue {
            self.queue.push_back(i);
        }
        version
    }

    fn insert(&mut self, mut x: Vec<BigInt>) {
        let g = self.g;
        loop {
            let Some(i) = lead(&x) else { return };
            let Some(slot) = self.slots.get(&i) else {
                if x[i].is_negative() {
                    x = g.inv(&x);
                }
                self.put(i, x, true);
                return;
            };
            let (xi, si) = (&x[i], &slot.elem[i]);
            if xi.is_multiple_of(si) {
                let q = -(xi / si);
                x = g.mul_pow(&x, &slot.elem, &q);
                continue;
            }
            // extended Euclid on the leading exponents
            let mut u = slot.elem.clone();
            let mut v = x;
            while !v[i].is_zero() {
                let q = -u[i].div_floor(&v[i]);
                let w = g.mul_pow(&u, &v, &q);
                u = v;
                v = w;
            }
            if u[i].is_negative() {
                u = g.inv(&u);
            }
            self.put(i, u, true);
            x = v;
        }
    }

    fn close(&mut self) {
        let class = self.g.class();
        while let Some(i) = self.queue.pop_front() {
            let Some(slot) = self.slots.get(&i) else {
                continue;
            };
            let (s, vs, ds) = (slot.elem.clone(), slot.version, slot.depth);
            for c in 0..self.conjugators.len() {
                if ds + self.conjugators[c].1 > class
                    || !self.done.insert((vs, u64::MAX - c as u64))
                {
                    continue;
                }
                let x = self.g.comm(&s, &self.conjugators[c].0);
                self.insert(x);
            }
            let others: Vec<(usize, u64)> = self
                .slots
                .iter()
                .filter(|(&j, t)| j != i && ds + t.depth <= class)
                .map(|(&j, t)| (j, t.version))
                .collect();
            for (j, vt) in others {
                if self.slots.get(&i).map(|t| t.version) != Some(vs) {
                    break;
                }
                let Some(t) = self.slots.get(&j).filter(|t| t.version == vt) else {
                    continue;
                };
                if !self.done.insert((vs.min(vt), vs.max(vt))) {
                    continue;
                }
                let c = if j > i {
                    self.g.comm(&t.elem, &s)
                } else {
                    self.g.comm(&s, &t.elem)
                };
                self.insert(c);
            }
        }
    }

    fn finish(mut self) -> PcSubgroup<G> {
        self.close();
        let (leads, seq) = self.slots.into_iter().map(|(i, s)| (i, s.elem)).unzip();
        PcSubgroup {
            group: self.g.clone(),
            seq,
            leads,
        }
    }
}

impl<G: PcGroup> PcSubgroup<G> {
    pub fn trivial(g: &G) -> Self {
        PcSubgroup {
            group: g.clone(),
            seq: Vec::new(),
            leads: Vec::new(),
        }
    }

    /// The subgroup generated by `gens`.
    pub fn generated(g: &G, gens: &[Vec<BigInt>]) -> Self {
        let mut b = Builder::new(g, Vec::new());
        for x in gens {
            b.insert(x.clone());
        }
        b.finish()
    }

    /// The smallest normal subgroup of the ambient group containing `gens`.
    pub fn normal_closure(g: &G, gens: &[Vec<BigInt>]) -> Self {
        let mut b = Builder::new(g, g.generators());
        for x in gens {
            b.insert(x.clone());
        }
        b.finish()
    }

    /// The smallest subgroup containing `gens` and normalized by `within`.
    pub fn normal_closure_in(within: &PcSubgroup<G>, gens: &[Vec<BigInt>]) -> Self {
        let mut b = Builder::new(&within.group, within.seq.clone());
        for x in gens {
            b.insert(x.clone());
        }
        b.finish()
    }

    pub fn whole(g: &G) -> Self {
        Self::unit_vectors(g, |_| true)
    }

    /// `[G, G]`: all coordinates of weight at least two.
    pub fn derived(g: &G) -> Self {
        Self::unit_vectors(g, |w| w >= 2)
    }

    /// `γ_w(G)` for `w >= 1`.
    pub fn lower_central(g: &G, w: usize) -> Self {
        Self::unit_vectors(g, |x| x >= w)
    }

    fn unit_vectors(g: &G, keep: impl Fn(usize) -> bool) -> Self {
        let leads: Vec<usize> = (0..g.num_coords()).filter(|&i| keep(g.weight(i))).collect();
        let seq = leads
            .iter()
            .map(|&i| {
                let mut e = g.identity();
                e[i] = BigInt::one();
                e
            })
            .collect();
        PcSubgroup {
            group: g.clone(),
            seq,
            leads,
        }
    }

    pub fn group(&self) -> &G {
        &self.group
    }

    pub fn sequence(&self) -> &[Vec<BigInt>] {
        &self.seq
    }

    pub fn leads(&self) -> &[usize] {
        &self.leads
    }

    pub fn leading_exponents(&self) -> Vec<BigInt> {
        self.seq
            .iter()
            .zip(&self.leads)
            .map(|(s, &i)| s[i].clone())
            .collect()
    }

    /// Length of the sequence (the Hirsch length of the subgroup).
    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    pub fn is_whole(&self) -> bool {
        self.seq.len() == self.group.num_coords()
            && self
                .seq
                .iter()
                .zip(&self.leads)
                .all(|(s, &i)| s[i].is_one())
    }

    pub fn is_trivial(&self) -> bool {
        self.seq.is_empty()
    }

    /// Reduces `x` against the sequence; the remainder is the identity exactly
    /// when `x` is a member.
    pub fn sift(&self, x: &[BigInt]) -> Vec<BigInt> {
        let mut x = x.to_vec();
        while let Some(i) = lead(&x) {
            let Ok(p) = self.leads.binary_search(&i) else {
                break;
            };
            let s = &self.seq[p];
            if !x[i].is_multiple_of(&s[i]) {
                break;
            }
            let q = -(&x[i] / &s[i]);
            x = self.group.mul_pow(&x, s, &q);
        }
        x
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        lead(&self.sift(x)).is_none()
    }

    /// Exponents `k` with `x = s_1^{k_1} ... s_t^{k_t}`, if `x` is a member.
    pub fn coordinates(&self, x: &[BigInt]) -> Option<Vec<BigInt>> {
        let g = &self.group;
        let mut x = x.to_vec();
        let mut k = vec![BigInt::zero(); self.seq.len()];
        for (p, (s, &i)) in self.seq.iter().zip(&self.leads).enumerate() {
            match lead(&x) {
                None => return Some(k),
                Some(l) if l < i => return None,
                Some(l) if l > i => continue,
                Some(_) => {}
            }
            if !x[i].is_multiple_of(&s[i]) {
                return None;
            }
            let q = &x[i] / &s[i];
            x = g.mul(&g.pow(s, &-&q), &x);
            k[p] = q;
        }
        lead(&x).is_none().then_some(k)
    }

    /// `s_1^{k_1} ... s_t^{k_t}`
    pub fn element(&self, k: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(k.len(), self.seq.len());
        let mut x = self.group.identity();
        for (s, e) in self.seq.iter().zip(k) {
            if !e.is_zero() {
                x = self.group.mul_pow(&x, s, e);
            }
        }
        x
    }

    pub fn is_subgroup_of(&self, other: &PcSubgroup<G>) -> bool {
        self.seq.iter().all(|s| other.contains(s))
    }

    pub fn same_as(&self, other: &PcSubgroup<G>) -> bool {
        self.leads == other.leads && self.is_subgroup_of(other) && other.is_subgroup_of(self)
    }

    /// Normal in the ambient group.
    pub fn is_normal(&self) -> bool {
        let class = self.group.class();
        let gens = self.group.generators();
        self.seq.iter().all(|s| {
            let ds = self.group.depth(s).unwrap_or(usize::MAX);
            gens.iter()
                .all(|x| ds + 1 > class || self.contains(&self.group.comm(s, x)))
        })
    }

    /// Normalized by every element of `other`.
    pub fn is_normalized_by(&self, other: &PcSubgroup<G>) -> bool {
        let class = self.group.class();
        self.seq.iter().all(|s| {
            let ds = self.group.depth(s).unwrap_or(usize::MAX);
            other.seq.iter().all(|x| {
                ds + self.group.depth(x).unwrap_or(usize::MAX) > class
                    || self.contains(&self.group.comm(s, x))
            })
        })
    }

    /// The subgroup generated by both.
    pub fn join(&self, other: &PcSubgroup<G>) -> Self {
        self.join_elements(&other.seq)
    }

    /// The subgroup generated by `self` and `extra`.
    pub fn join_elements(&self, extra: &[Vec<BigInt>]) -> Self {
        let mut b = Builder::new(&self.group, Vec::new());
        b.seed(self, false);
        for x in extra {
            b.insert(x.clone());
        }
        b.finish()
    }

    /// Normal closure in the ambient group of both; `self` must be normal.
    pub fn normal_join(&self, other: &PcSubgroup<G>) -> Self {
        let mut b = Builder::new(&self.group, self.group.generators());
        b.seed(self, true);
        for x in &other.seq {
            b.insert(x.clone());
        }
        b.finish()
    }

    /// Normal closure of `{[s, t]}` over the two sequences; this is `[S, T]`
    /// when both are normal in the ambient group.
    pub fn commutator(&self, other: &PcSubgroup<G>) -> Self {
        if self.is_whole() && !other.is_whole() {
            return other.commutator(self);
        }
        let class = self.group.class();
        // any generating sets will do; the whole group has a short one
        let others = if other.is_whole() {
            self.group.generators()
        } else {
            other.seq.clone()
        };
        let mut gens = Vec::new();
        for s in &self.seq {
            let ds = self.group.depth(s).unwrap_or(usize::MAX);
            for t in &others {
                if ds + self.group.depth(t).unwrap_or(usize::MAX) <= class {
                    gens.push(self.group.comm(s, t));
                }
            }
        }
        Self::normal_closure(&self.group, &gens)
    }

    /// Canonical form: each member's coordinates at later leading indices are
    /// reduced into `[0, leading exponent)`. Equal subgroups have equal
    /// reduced sequences.
    pub fn reduced(&self) -> Self {
        let mut seq = self.seq.clone();
        for a in 0..seq.len() {
            for b in a + 1..seq.len() {
                let i = self.leads[b];
                let q = -seq[a][i].div_floor(&seq[b][i]);
                if !q.is_zero() {
                    seq[a] = self.group.mul_pow(&seq[a], &seq[b], &q);
                }
            }
        }
        PcSubgroup {
            group: self.group.clone(),
            seq,
            leads: self.leads.clone(),
        }
    }

    /// `self ∩ other` for `other` normal in the ambient group, through the
    /// subgroup `{(ab, a)}` of `G × G`.
    pub fn intersection(&self, other: &PcSubgroup<G>) -> Result<Self> {
        if !other.is_normal() {
            return Err(Error::Precondition(
                "intersection needs the second subgroup normal".into(),
            ));
        }
        let g = &self.group;
        let p = ProductGroup::new(g.clone(), g.clone());
        let e = g.identity();
        let mut gens: Vec<Vec<BigInt>> = self.seq.iter().map(|a| p.pair(a, a)).collect();
        gens.extend(other.seq.iter().map(|b| p.pair(b, &e)));
        let h = PcSubgroup::generated(&p, &gens);
        Ok(Self::right_tail(g, &p, &h))
    }

    /// Members of an induced sequence in `T × G` with leading index in the `G`
    /// block: an induced sequence of the intersection with `1 × G`.
    fn right_tail<T: PcGroup>(
        g: &G,
        p: &ProductGroup<T, G>,
        h: &PcSubgroup<ProductGroup<T, G>>,
    ) -> Self {
        let n = p.left.num_coords();
        let (leads, seq) = h
            .seq
            .iter()
            .zip(&h.leads)
            .filter(|(_, &i)| i >= n)
            .map(|(x, &i)| (i - n, p.right_part(x).to_vec()))
            .unzip();
        PcSubgroup {
            group: g.clone(),
            seq,
            leads,
        }
    }

    /// Kernel of a homomorphism restricted to this subgroup, computed from the
    /// graph `{(f(s), s)}` inside `target × G`.
    pub fn kernel_of<T: PcGroup>(&self, target: &T, f: impl Fn(&[BigInt]) -> Vec<BigInt>) -> Self {
        let p = ProductGroup::new(target.clone(), self.group.clone());
        let gens: Vec<Vec<BigInt>> = self.seq.iter().map(|s| p.pair(&f(s), s)).collect();
        let h = PcSubgroup::generated(&p, &gens);
        Self::right_tail(&self.group, &p, &h)
    }
}

impl PcSubgroup<FreeNilGroup> {
    pub fn from_words(g: &FreeNilGroup, gens: &[NilWord]) -> Self {
        Self::generated(
            g,
            &gens.iter().map(|w| w.coords().to_vec()).collect::<Vec<_>>(),
        )
    }

    pub fn normal_closure_of_words(g: &FreeNilGroup, gens: &[NilWord]) -> Self {
        Self::normal_closure(
            g,
            &gens.iter().map(|w| w.coords().to_vec()).collect::<Vec<_>>(),
        )
    }

    pub fn words(&self) -> Vec<NilWord> {
        self.seq
            .iter()
            .map(|s| self.group.word(s.clone()).expect("sequence member"))
            .collect()
    }

    pub fn contains_word(&self, w: &NilWord) -> bool {
        self.contains(w.coords())
    }

    /// `{s ∈ S | φ(s) = 0}` for `φ` linear on the weight-one coordinates,
    /// given as a matrix with one row per generator of the ambient group.
    pub fn intersect_with_kernel(&self, phi: &IntMatrix) -> Result<Self> {
        let g = &self.group;
        let d = g.rank();
        if phi.rows() != d {
            return Err(Error::Invalid(format!(
                "linear map needs {d} rows, got {}",
                phi.rows()
            )));
        }
        // members with weight-one leads have independent abelian images; the
        // rest span S ∩ [F, F], which lies in every such kernel
        let r = self.leads.iter().take_while(|&&i| i < d).count();
        if r == 0 {
            return Ok(self.clone());
        }
        let images: Vec<Vec<BigInt>> = self.seq[..r].iter().map(|s| s[..d].to_vec()).collect();
        let v = IntMatrix::from_rows(d, &images).mul(phi);
        let h = hnf(&v);
        let mut gens: Vec<Vec<BigInt>> = (h.rank..r)
            .map(|row| {
                let k: Vec<BigInt> = h.u.row(row).to_vec();
                let mut x = g.identity().into_coords();
                for (s, e) in self.seq[..r].iter().zip(&k) {
                    if !e.is_zero() {
                        x = g.mul_pow_coords(&x, s, e);
                    }
                }
                x
            })
            .collect();
        gens.extend(self.seq[r..].iter().cloned());
        Ok(Self::generated(g, &gens))
    }

    /// Kernel of a letter projection restricted to this subgroup.
    pub fn kernel_of_projection(&self, f: &LetterProjection) -> Result<Self> {
        if f.source() != &self.group {
            return Err(Error::AmbientMismatch);
        }
        Ok(self.kernel_of(f.target(), |x| f.apply_coords(x)))
    }
}

/// `N / D` for subgroups `D ⊆ N` with `N / D` abelian, together with what is
/// needed to lift its cyclic factors back to `N`.
#[derive(Clone, Debug)]
pub struct AbelianQuotient<G: PcGroup = FreeNilGroup> {
    pub group: FgAbelianGroup,
    numerator: PcSubgroup<G>,
    /// Orders of the cyclic factors in Smith order (zero for infinite) and
    /// their generators as exponent vectors over the numerator's sequence.
    factors: Vec<(BigInt, Vec<BigInt>)>,
}

impl<G: PcGroup> AbelianQuotient<G> {
    /// Cyclic factors of order other than one: `(order, representative in N)`,
    /// order zero meaning infinite.
    pub fn cyclic_factors(&self) -> Vec<(BigInt, Vec<BigInt>)> {
        self.factors
            .iter()
            .filter(|(d, _)| !d.is_one())
            .map(|(d, k)| (d.clone(), self.numerator.element(k)))
            .collect()
    }

    /// Elements of `N` whose images generate the `P`-torsion of `N / D`.
    pub fn torsion_lifts(&self, primes: &PrimeSet) -> Vec<Vec<BigInt>> {
        self.factors
            .iter()
            .filter(|(d, _)| !d.is_zero() && !d.is_one())
            .filter_map(|(d, k)| {
                let pp = primes.p_part(d);
                if pp.is_one() {
                    return None;
                }
                let m = d / pp;
                let k: Vec<BigInt> = k.iter().map(|x| x * &m).collect();
                Some(self.numerator.element(&k))
            })
            .collect()
    }
}

/// `N / D`, checking `D ⊆ N`, `D` normal in `N` and `N / D` abelian.
///
/// `N` is presented by its sequence: abelianizing the polycyclic relations
/// `[n_j, n_i^{±1}] = (normal form)` gives `N^ab`, and `D`'s sequence is then
/// imposed. Commutators of members whose depths add up beyond the class are
/// trivial and skipped.
pub fn abelian_quotient<G: PcGroup>(
    n: &PcSubgroup<G>,
    d: &PcSubgroup<G>,
) -> Result<AbelianQuotient<G>> {
    let g = &n.group;
    let class = g.class();
    let depth = |x: &[BigInt]| g.depth(x).unwrap_or(usize::MAX / 2);
    let t = n.len();
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for x in &d.seq {
        rows.push(n.coordinates(x).ok_or(Error::NotSubset)?);
    }
    for x in &d.seq {
        for y in &n.seq {
            if depth(x) + depth(y) <= class && !d.contains(&g.comm(x, y)) {
                return Err(Error::NotNormalIn);
            }
        }
    }
    for j in 0..t {
        for i in 0..j {
            let (ni, nj) = (&n.seq[i], &n.seq[j]);
            if depth(ni) + depth(nj) > class {
                continue;
            }
            let c = g.comm(nj, ni);
            if !d.contains(&c) {
                return Err(Error::NotAbelianQuotient);
            }
            rows.push(n.coordinates(&c).expect("commutator of members"));
            rows.push(
                n.coordinates(&g.comm(nj, &g.inv(ni)))
                    .expect("commutator of members"),
            );
        }
    }
    rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    let factors: Vec<(BigInt, Vec<BigInt>)> = if rows.is_empty() {
        (0..t)
            .map(|i| {
                let mut e = vec![BigInt::zero(); t];
                e[i] = BigInt::one();
                (BigInt::zero(), e)
            })
            .collect()
    } else {
        let Snf { d: diag, v_inv, .. } = snf(&IntMatrix::from_rows(t, &rows));
        (0..t)
            .map(|i| {
                let order = if i < diag.rows() {
                    diag.get(i, i).abs()
                } else {
                    BigInt::zero()
                };
                (order, v_inv.row(i).to_vec())
            })
            .collect()
    };
    let finite: Vec<BigInt> = factors
        .iter()
        .map(|(o, _)| o.clone())
        .filter(|o| !o.is_zero())
        .collect();
    let free = factors.iter().filter(|(o, _)| o.is_zero()).count();
    Ok(AbelianQuotient {
        group: FgAbelianGroup::new(finite, free),
        numerator: n.clone(),
        factors,
    })
}
