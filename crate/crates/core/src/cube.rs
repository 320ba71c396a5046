//! n-fold extensions of finite groups: functors on the subset poset of
//! `{0, ..., n-1}`, stored by bitmask, with the re-indexings `delta_i` and
//! `rho_i` and the functors `Ker^n`, `Dom^n`, `Cod^n`, `iota^n`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::config::Limits;
use crate::error::{Error, Result};
use crate::group::{pullback, quotient, FiniteGroup, GroupHom, GroupSpec, Subgroup};

/// `S^i`: shift every element `>= i` up by one.
pub fn shift(i: usize, s: usize) -> usize {
    let low = s & ((1 << i) - 1);
    low | ((s >> i) << (i + 1))
}

/// Inverse of [`shift`] on subsets, discarding `i` if present.
pub fn unshift(i: usize, t: usize) -> usize {
    let low = t & ((1 << i) - 1);
    low | ((t >> (i + 1)) << i)
}

fn shift_index(i: usize, k: usize) -> usize {
    if k < i {
        k
    } else {
        k + 1
    }
}

fn unshift_index(i: usize, k: usize) -> usize {
    debug_assert_ne!(i, k);
    if k < i {
        k
    } else {
        k - 1
    }
}

fn bits(s: usize) -> impl Iterator<Item = usize> {
    (0..usize::BITS as usize).filter(move |&k| s >> k & 1 == 1)
}

/// A functor `P(n)^op -> Grp`. Faces `a_{T - i}^T` are stored for covering
/// pairs; longer composites are derived on demand and cached.
#[derive(Clone)]
pub struct CubeExtension {
    n: usize,
    objects: Vec<FiniteGroup>,
    faces: Vec<Vec<Option<GroupHom>>>,
    composites: Vec<OnceLock<GroupHom>>,
}

impl PartialEq for CubeExtension {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.objects == other.objects && self.faces == other.faces
    }
}

impl Eq for CubeExtension {}

impl fmt::Debug for CubeExtension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let orders: Vec<usize> = self.objects.iter().map(|g| g.order()).collect();
        write!(f, "CubeExtension(n = {}, orders {:?})", self.n, orders)
    }
}

/// `lim_{J < I} A_J` as a group of compatible tuples indexed by the
/// maximal proper subsets `I - {i}`, `i` in `I` ascending.
#[derive(Clone, Debug)]
pub struct PuncturedLimit {
    pub group: FiniteGroup,
    pub comparison: GroupHom,
    /// Projection to `A_{I - {i}}`, for each `i` in `I` ascending.
    pub projections: Vec<GroupHom>,
}

impl CubeExtension {
    /// Validates shape, functoriality and the extension property.
    pub fn new(
        n: usize,
        objects: Vec<FiniteGroup>,
        faces: Vec<(usize, usize, GroupHom)>,
    ) -> Result<Self> {
        let cube = Self::new_diagram(n, objects, faces)?;
        if let Some(subset) = cube.first_failure()? {
            return Err(Error::NotExtension { subset });
        }
        Ok(cube)
    }

    /// Like [`CubeExtension::new`] without the extension property, for
    /// arbitrary commuting diagrams. Faces are `(T, i, a_{T - i}^T)`.
    pub fn new_diagram(
        n: usize,
        objects: Vec<FiniteGroup>,
        faces: Vec<(usize, usize, GroupHom)>,
    ) -> Result<Self> {
        let limit = Limits::current().max_cube_dim;
        if n > limit {
            return Err(Error::SizeLimit {
                what: "cube dimension",
                size: n,
                limit,
            });
        }
        if objects.len() != 1 << n {
            return Err(Error::Invalid(format!(
                "a {n}-cube needs {} objects, got {}",
                1 << n,
                objects.len()
            )));
        }
        let mut table: Vec<Vec<Option<GroupHom>>> = vec![vec![None; n]; 1 << n];
        for (t, i, f) in faces {
            if t >= 1 << n || i >= n || t >> i & 1 == 0 {
                return Err(Error::Invalid(format!(
                    "no face ({t:#b}, {i}) in a {n}-cube"
                )));
            }
            if f.domain() != &objects[t] || f.codomain() != &objects[t & !(1 << i)] {
                return Err(Error::Invalid(format!(
                    "face ({t:#b}, {i}) has the wrong domain or codomain"
                )));
            }
            if table[t][i].replace(f).is_some() {
                return Err(Error::Invalid(format!("face ({t:#b}, {i}) given twice")));
            }
        }
        for (t, row) in table.iter().enumerate() {
            if let Some(i) = bits(t).find(|&i| row[i].is_none()) {
                return Err(Error::Invalid(format!("face ({t:#b}, {i}) missing")));
            }
        }
        let cube = Self::raw(n, objects, table);
        cube.check_functorial()?;
        Ok(cube)
    }

    fn raw(n: usize, objects: Vec<FiniteGroup>, faces: Vec<Vec<Option<GroupHom>>>) -> Self {
        let composites = (0..1usize << (2 * n)).map(|_| OnceLock::new()).collect();
        CubeExtension {
            n,
            objects,
            faces,
            composites,
        }
    }

    /// Covering squares commute: `a^{T-i}_{T-ij} a^T_{T-i} = a^{T-j}_{T-ij} a^T_{T-j}`.
    fn check_functorial(&self) -> Result<()> {
        for t in 0..1usize << self.n {
            for i in bits(t) {
                for j in bits(t).filter(|&j| j > i) {
                    let via_i = self.face(t, i).then(self.face(t & !(1 << i), j))?;
                    let via_j = self.face(t, j).then(self.face(t & !(1 << j), i))?;
                    if via_i != via_j {
                        return Err(Error::NotCommuting);
                    }
                }
            }
        }
        Ok(())
    }

    /// The `n`-cube `A_S = G / prod_{i not in S} K_i` with quotient maps.
    pub fn of_quotients(g: &FiniteGroup, kernels: &[Subgroup]) -> Result<Self> {
        let n = kernels.len();
        let full = (1usize << n) - 1;
        let mut quotients = Vec::with_capacity(1 << n);
        for s in 0..1usize << n {
            let mut k = Subgroup::trivial(g);
            for i in bits(full & !s) {
                k = k.join(&kernels[i])?;
            }
            quotients.push(quotient(g, &k)?);
        }
        let mut faces = Vec::new();
        for t in 0..1usize << n {
            for i in bits(t) {
                let (src, dst) = (&quotients[t], &quotients[t & !(1 << i)]);
                let image = src.reps.iter().map(|&r| dst.projection.apply(r)).collect();
                faces.push((
                    t,
                    i,
                    GroupHom::new(src.group.clone(), dst.group.clone(), image)?,
                ));
            }
        }
        Self::new_diagram(n, quotients.into_iter().map(|q| q.group).collect(), faces)
    }

    /// `iota^n(A)`: `A` at the top, trivial groups elsewhere.
    pub fn iota_n(a: &FiniteGroup, n: usize) -> Result<Self> {
        let one = FiniteGroup::trivial();
        let full = (1usize << n) - 1;
        let objects: Vec<FiniteGroup> = (0..1usize << n)
            .map(|s| if s == full { a.clone() } else { one.clone() })
            .collect();
        let mut faces = Vec::new();
        for t in 0..1usize << n {
            for i in bits(t) {
                faces.push((t, i, GroupHom::zero(&objects[t], &one)));
            }
        }
        Self::new(n, objects, faces)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn full(&self) -> usize {
        (1 << self.n) - 1
    }

    /// `A_S`.
    pub fn object(&self, s: usize) -> &FiniteGroup {
        &self.objects[s]
    }

    /// `a_{T - i}^T`.
    pub fn face(&self, t: usize, i: usize) -> &GroupHom {
        self.faces[t][i].as_ref().expect("face of a covering pair")
    }

    /// `a_i = a_{n - i}^n`.
    pub fn top_face(&self, i: usize) -> &GroupHom {
        self.face(self.full(), i)
    }

    /// `a_S^T` for `S <= T`.
    pub fn map(&self, s: usize, t: usize) -> Result<GroupHom> {
        if t > self.full() || s & !t != 0 {
            return Err(Error::Invalid(format!("{s:#b} is not a subset of {t:#b}")));
        }
        if s == t {
            return Ok(GroupHom::identity(&self.objects[t]));
        }
        let slot = &self.composites[s << self.n | t];
        if let Some(f) = slot.get() {
            return Ok(f.clone());
        }
        let i = bits(t & !s).next().unwrap();
        let f = self.face(t, i).then(&self.map(s, t & !(1 << i))?)?;
        Ok(slot.get_or_init(|| f).clone())
    }

    /// `Dom^n(A) = A_n`.
    pub fn dom_n(&self) -> &FiniteGroup {
        &self.objects[self.full()]
    }

    /// `Cod^n(A) = A_0`.
    pub fn cod_n(&self) -> &FiniteGroup {
        &self.objects[0]
    }

    /// `Ker^n(A)`, the intersection of the kernels of the top faces. For
    /// `n = 0` this is the whole (only) object.
    pub fn ker_n(&self) -> Result<Subgroup> {
        let mut k = Subgroup::whole(self.dom_n());
        for i in 0..self.n {
            k = k.intersection(&self.top_face(i).kernel())?;
        }
        Ok(k)
    }

    pub fn punctured_limit(&self, subset: usize) -> Result<PuncturedLimit> {
        if subset == 0 || subset > self.full() {
            return Err(Error::Invalid(format!(
                "{subset:#b} is not a non-empty subset of {}",
                self.n
            )));
        }
        let members: Vec<usize> = bits(subset).collect();
        let maximal: Vec<usize> = members.iter().map(|&i| subset & !(1 << i)).collect();
        let factors: Vec<FiniteGroup> = maximal.iter().map(|&j| self.objects[j].clone()).collect();
        // compatibility of slots p < q: both agree in A_{I - {i_p, i_q}}
        let mut checks: Vec<(usize, usize, GroupHom, GroupHom)> = Vec::new();
        for q in 0..members.len() {
            for p in 0..q {
                let meet = maximal[p] & maximal[q];
                checks.push((
                    p,
                    q,
                    self.map(meet, maximal[p])?,
                    self.map(meet, maximal[q])?,
                ));
            }
        }
        let mut tuples = Vec::new();
        let mut current = Vec::with_capacity(members.len());
        compatible_tuples(&factors, &checks, &mut current, &mut tuples);
        let (group, index) = tuple_group(&factors, &tuples)?;
        let image = self.objects[subset]
            .elements()
            .map(|x| {
                let t: Vec<usize> = members
                    .iter()
                    .map(|&i| self.face(subset, i).apply(x))
                    .collect();
                index[&t]
            })
            .collect();
        let comparison =
            GroupHom::new_unchecked(self.objects[subset].clone(), group.clone(), image);
        let projections = (0..members.len())
            .map(|p| {
                GroupHom::new_unchecked(
                    group.clone(),
                    factors[p].clone(),
                    tuples.iter().map(|t| t[p]).collect(),
                )
            })
            .collect();
        Ok(PuncturedLimit {
            group,
            comparison,
            projections,
        })
    }

    /// The first non-empty subset whose comparison map fails to be onto.
    pub fn first_failure(&self) -> Result<Option<usize>> {
        for s in 1..=self.full() {
            if !self.punctured_limit(s)?.comparison.is_surjective() {
                return Ok(Some(s));
            }
        }
        Ok(None)
    }

    pub fn is_n_extension(&self) -> bool {
        matches!(self.first_failure(), Ok(None))
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.n {
            return Err(Error::IndexOutOfRange {
                index: i,
                dim: self.n,
            });
        }
        Ok(())
    }

    /// `delta_i(A)`: the arrow `(A_{S^i + i})_S -> (A_{S^i})_S` of `(n-1)`-cubes.
    pub fn delta(&self, i: usize) -> Result<CubeMorphism> {
        self.check_index(i)?;
        let m = self.n - 1;
        let side = |with_i: bool| {
            let lift = |s: usize| shift(i, s) | if with_i { 1 << i } else { 0 };
            let objects = (0..1usize << m)
                .map(|s| self.objects[lift(s)].clone())
                .collect();
            let faces = (0..1usize << m)
                .map(|s| {
                    (0..m)
                        .map(|k| {
                            (s >> k & 1 == 1).then(|| self.face(lift(s), shift_index(i, k)).clone())
                        })
                        .collect()
                })
                .collect();
            CubeExtension::raw(m, objects, faces)
        };
        let components = (0..1usize << m)
            .map(|s| self.face(shift(i, s) | 1 << i, i).clone())
            .collect();
        Ok(CubeMorphism {
            dom: side(true),
            cod: side(false),
            components,
        })
    }

    /// `rho_i(A)`: the `(n-1)`-cube of arrows `A_{S^i + i} -> A_{S^i}`.
    pub fn rho(&self, i: usize) -> Result<ArrowCube> {
        self.check_index(i)?;
        let m = self.n - 1;
        let arrows = (0..1usize << m)
            .map(|s| self.face(shift(i, s) | 1 << i, i).clone())
            .collect();
        let faces = (0..1usize << m)
            .map(|s| {
                (0..m)
                    .map(|k| {
                        (s >> k & 1 == 1).then(|| Square {
                            top: self.face(shift(i, s) | 1 << i, shift_index(i, k)).clone(),
                            bottom: self.face(shift(i, s), shift_index(i, k)).clone(),
                        })
                    })
                    .collect()
            })
            .collect();
        Ok(ArrowCube {
            dim: m,
            arrows,
            faces,
        })
    }
}

fn compatible_tuples(
    factors: &[FiniteGroup],
    checks: &[(usize, usize, GroupHom, GroupHom)],
    current: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    let q = current.len();
    if q == factors.len() {
        out.push(current.clone());
        return;
    }
    for x in factors[q].elements() {
        if checks
            .iter()
            .filter(|c| c.1 == q)
            .all(|(p, _, fp, fq)| fp.apply(current[*p]) == fq.apply(x))
        {
            current.push(x);
            compatible_tuples(factors, checks, current, out);
            current.pop();
        }
    }
}

/// The group of tuples under componentwise multiplication; the tuple set
/// must be a subgroup of the product and start with the identity.
fn tuple_group(
    factors: &[FiniteGroup],
    tuples: &[Vec<usize>],
) -> Result<(FiniteGroup, HashMap<Vec<usize>, usize>)> {
    let limit = Limits::current().max_group_order;
    if tuples.len() > limit {
        return Err(Error::SizeLimit {
            what: "limit group order",
            size: tuples.len(),
            limit,
        });
    }
    let index: HashMap<Vec<usize>, usize> = tuples
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, t)| (t, i))
        .collect();
    let m = tuples.len();
    let mut table = vec![vec![0usize; m]; m];
    for (i, a) in tuples.iter().enumerate() {
        for (j, b) in tuples.iter().enumerate() {
            let prod: Vec<usize> = factors
                .iter()
                .enumerate()
                .map(|(p, g)| g.mul(a[p], b[p]))
                .collect();
            table[i][j] = *index
                .get(&prod)
                .ok_or_else(|| Error::Consistency("tuple set not closed".into()))?;
        }
    }
    let labels = tuples
        .iter()
        .map(|t| {
            let parts: Vec<String> = t.iter().zip(factors).map(|(&x, g)| g.label(x)).collect();
            format!("({})", parts.join(","))
        })
        .collect();
    Ok((FiniteGroup::from_table(table, Some(labels))?, index))
}

/// Checks the double-extension condition for the commuting square
/// `b f1 = f0 a` with `a: A1 -> A0`, `b: B1 -> B0`, `f1: A1 -> B1`,
/// `f0: A0 -> B0`: every map, the comparison `<a, f1>` into
/// `A0 x_{B0} B1`, and both pullback projections are onto.
pub fn is_double_extension(
    f1: &GroupHom,
    f0: &GroupHom,
    a: &GroupHom,
    b: &GroupHom,
) -> Result<bool> {
    if a.domain() != f1.domain()
        || a.codomain() != f0.domain()
        || f1.codomain() != b.domain()
        || f0.codomain() != b.codomain()
    {
        return Err(Error::Invalid("maps do not form a square".into()));
    }
    if a.then(f0)? != f1.then(b)? {
        return Err(Error::NotCommuting);
    }
    if ![f1, f0, a, b].iter().all(|f| f.is_surjective()) {
        return Ok(false);
    }
    let p = pullback(f0, b)?;
    Ok(p.pair_map(a, f1)?.is_surjective() && p.p1.is_surjective() && p.p2.is_surjective())
}

/// A natural transformation between cubes of the same dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubeMorphism {
    pub dom: CubeExtension,
    pub cod: CubeExtension,
    /// Indexed by subset bitmask.
    pub components: Vec<GroupHom>,
}

/// The morphism `f -> g` of arrows `f: X -> Y`, `g: X' -> Y'` given by
/// `top: X -> X'` and `bottom: Y -> Y'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Square {
    pub top: GroupHom,
    pub bottom: GroupHom,
}

/// An `m`-cube in the category of arrows of groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowCube {
    dim: usize,
    arrows: Vec<GroupHom>,
    faces: Vec<Vec<Option<Square>>>,
}

/// A morphism of arrow cubes; each component is a square.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowMorphism {
    pub dom: ArrowCube,
    pub cod: ArrowCube,
    pub components: Vec<Square>,
}

/// A kernel of a cube morphism, with the inclusions of its objects.
#[derive(Clone, Debug)]
pub struct KernelCube {
    pub cube: CubeExtension,
    pub inclusions: Vec<GroupHom>,
}

/// `Ker^m` of an arrow cube: the arrow `dom -> cod` between intersections
/// of top-face kernels, as a map between subgroups.
#[derive(Clone, Debug)]
pub struct KernelArrow {
    pub dom: Subgroup,
    pub cod: Subgroup,
    pub map: GroupHom,
}

impl KernelArrow {
    /// `Ker` of the arrow, as a subgroup of the ambient group of `dom`.
    pub fn kernel(&self) -> Result<Subgroup> {
        let (_, inc) = self.dom.to_group();
        inc.image_of(&self.map.kernel())
    }
}

impl CubeMorphism {
    /// Checks naturality on every covering face.
    pub fn new(dom: CubeExtension, cod: CubeExtension, components: Vec<GroupHom>) -> Result<Self> {
        if dom.n != cod.n || components.len() != 1 << dom.n {
            return Err(Error::Invalid("cube morphism of the wrong shape".into()));
        }
        for (s, f) in components.iter().enumerate() {
            if f.domain() != dom.object(s) || f.codomain() != cod.object(s) {
                return Err(Error::Invalid(format!(
                    "component {s:#b} has the wrong domain or codomain"
                )));
            }
        }
        for t in 0..=dom.full() {
            for i in bits(t) {
                if components[t].then(cod.face(t, i))?
                    != dom.face(t, i).then(&components[t & !(1 << i)])?
                {
                    return Err(Error::NotCommuting);
                }
            }
        }
        Ok(CubeMorphism {
            dom,
            cod,
            components,
        })
    }

    /// `other` after `self`.
    pub fn then(&self, other: &CubeMorphism) -> Result<CubeMorphism> {
        if self.cod != other.dom {
            return Err(Error::Invalid(
                "composition of non-composable cube morphisms".into(),
            ));
        }
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(f, g)| f.then(g))
            .collect::<Result<_>>()?;
        Ok(CubeMorphism {
            dom: self.dom.clone(),
            cod: other.cod.clone(),
            components,
        })
    }

    /// The inverse of `delta_i`: reinsert direction `i`.
    pub fn to_cube(&self, i: usize) -> Result<CubeExtension> {
        let m = self.dom.n;
        if i > m {
            return Err(Error::IndexOutOfRange {
                index: i,
                dim: m + 1,
            });
        }
        let n = m + 1;
        let objects = (0..1usize << n)
            .map(|t| {
                if t >> i & 1 == 1 {
                    self.dom.object(unshift(i, t)).clone()
                } else {
                    self.cod.object(unshift(i, t)).clone()
                }
            })
            .collect();
        let faces = (0..1usize << n)
            .map(|t| {
                (0..n)
                    .map(|k| {
                        (t >> k & 1 == 1).then(|| {
                            if k == i {
                                self.components[unshift(i, t)].clone()
                            } else if t >> i & 1 == 1 {
                                self.dom.face(unshift(i, t), unshift_index(i, k)).clone()
                            } else {
                                self.cod.face(unshift(i, t), unshift_index(i, k)).clone()
                            }
                        })
                    })
                    .collect()
            })
            .collect();
        Ok(CubeExtension::raw(n, objects, faces))
    }

    /// `(rho_i, rho_i)`: apply `rho_i` to both ends and to the components.
    pub fn rho(&self, i: usize) -> Result<ArrowMorphism> {
        let dom = self.dom.rho(i)?;
        let cod = self.cod.rho(i)?;
        let components = (0..1usize << dom.dim)
            .map(|s| Square {
                top: self.components[shift(i, s) | 1 << i].clone(),
                bottom: self.components[shift(i, s)].clone(),
            })
            .collect();
        Ok(ArrowMorphism {
            dom,
            cod,
            components,
        })
    }

    /// The cube of kernels of the components, with restricted faces.
    pub fn kernel(&self) -> Result<KernelCube> {
        let kernels: Vec<Subgroup> = self.components.iter().map(|f| f.kernel()).collect();
        let (objects, inclusions): (Vec<FiniteGroup>, Vec<GroupHom>) =
            kernels.iter().map(|k| k.to_group()).unzip();
        let n = self.dom.n;
        let mut faces = Vec::new();
        for t in 0..1usize << n {
            for i in bits(t) {
                faces.push((
                    t,
                    i,
                    self.dom
                        .face(t, i)
                        .restrict_between(&kernels[t], &kernels[t & !(1 << i)])?,
                ));
            }
        }
        Ok(KernelCube {
            cube: CubeExtension::new_diagram(n, objects, faces)?,
            inclusions,
        })
    }
}

impl ArrowCube {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn arrow(&self, s: usize) -> &GroupHom {
        &self.arrows[s]
    }

    pub fn face(&self, t: usize, k: usize) -> &Square {
        self.faces[t][k].as_ref().expect("face of a covering pair")
    }

    /// The domain of the arrow at the top vertex.
    pub fn dom_top(&self) -> &FiniteGroup {
        self.arrows[(1 << self.dim) - 1].domain()
    }

    /// `delta_j` in the arrow category.
    pub fn delta(&self, j: usize) -> Result<ArrowMorphism> {
        if j >= self.dim {
            return Err(Error::IndexOutOfRange {
                index: j,
                dim: self.dim,
            });
        }
        let m = self.dim - 1;
        let side = |with_j: bool| {
            let lift = |s: usize| shift(j, s) | if with_j { 1 << j } else { 0 };
            let arrows = (0..1usize << m)
                .map(|s| self.arrows[lift(s)].clone())
                .collect();
            let faces = (0..1usize << m)
                .map(|s| {
                    (0..m)
                        .map(|k| {
                            (s >> k & 1 == 1).then(|| self.face(lift(s), shift_index(j, k)).clone())
                        })
                        .collect()
                })
                .collect();
            ArrowCube {
                dim: m,
                arrows,
                faces,
            }
        };
        let components = (0..1usize << m)
            .map(|s| self.face(shift(j, s) | 1 << j, j).clone())
            .collect();
        Ok(ArrowMorphism {
            dom: side(true),
            cod: side(false),
            components,
        })
    }

    /// The inverse of `rho_i`.
    pub fn to_cube(&self, i: usize) -> Result<CubeExtension> {
        let m = self.dim;
        if i > m {
            return Err(Error::IndexOutOfRange {
                index: i,
                dim: m + 1,
            });
        }
        let n = m + 1;
        let objects = (0..1usize << n)
            .map(|t| {
                let a = &self.arrows[unshift(i, t)];
                if t >> i & 1 == 1 {
                    a.domain().clone()
                } else {
                    a.codomain().clone()
                }
            })
            .collect();
        let faces = (0..1usize << n)
            .map(|t| {
                (0..n)
                    .map(|k| {
                        (t >> k & 1 == 1).then(|| {
                            if k == i {
                                self.arrows[unshift(i, t)].clone()
                            } else {
                                let sq = self.face(unshift(i, t), unshift_index(i, k));
                                if t >> i & 1 == 1 {
                                    sq.top.clone()
                                } else {
                                    sq.bottom.clone()
                                }
                            }
                        })
                    })
                    .collect()
            })
            .collect();
        Ok(CubeExtension::raw(n, objects, faces))
    }

    /// `Ker^m` computed in the arrow category.
    pub fn ker_n(&self) -> Result<KernelArrow> {
        let top = (1usize << self.dim) - 1;
        let arrow = &self.arrows[top];
        let mut dom = Subgroup::whole(arrow.domain());
        let mut cod = Subgroup::whole(arrow.codomain());
        for k in 0..self.dim {
            let sq = self.face(top, k);
            dom = dom.intersection(&sq.top.kernel())?;
            cod = cod.intersection(&sq.bottom.kernel())?;
        }
        let map = arrow.restrict_between(&dom, &cod)?;
        Ok(KernelArrow { dom, cod, map })
    }
}

/// JSON form of a cube: objects keyed by subset bitmask (as a decimal
/// string) and faces as image arrays.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CubeSpec {
    pub n: usize,
    pub objects: BTreeMap<String, GroupSpec>,
    pub faces: Vec<FaceSpec>,
    /// Skip the extension-property check.
    #[serde(default)]
    pub diagram: bool,
}

/// The face `a_{from - drop}^{from}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FaceSpec {
    pub from: usize,
    pub drop: usize,
    pub images: Vec<usize>,
}

impl CubeSpec {
    pub fn build(&self) -> Result<CubeExtension> {
        let objects = (0..1usize << self.n.min(usize::BITS as usize - 1))
            .map(|s| {
                self.objects
                    .get(&s.to_string())
                    .ok_or_else(|| Error::Invalid(format!("object {s} missing")))?
                    .build()
            })
            .collect::<Result<Vec<_>>>()?;
        let faces = self
            .faces
            .iter()
            .map(|f| {
                let (t, i) = (f.from, f.drop);
                if t >= objects.len() || i >= self.n || t >> i & 1 == 0 {
                    return Err(Error::Invalid(format!(
                        "no face ({t}, {i}) in a {}-cube",
                        self.n
                    )));
                }
                Ok((
                    t,
                    i,
                    GroupHom::new(
                        objects[t].clone(),
                        objects[t & !(1 << i)].clone(),
                        f.images.clone(),
                    )?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        if self.diagram {
            CubeExtension::new_diagram(self.n, objects, faces)
        } else {
            CubeExtension::new(self.n, objects, faces)
        }
    }

    /// Objects are written as explicit multiplication tables.
    pub fn from_cube(cube: &CubeExtension) -> Self {
        let objects = cube
            .objects
            .iter()
            .enumerate()
            .map(|(s, g)| {
                (
                    s.to_string(),
                    GroupSpec::Table {
                        table: g.table(),
                        labels: None,
                    },
                )
            })
            .collect();
        let mut faces = Vec::new();
        for t in 0..=cube.full() {
            for i in bits(t) {
                faces.push(FaceSpec {
                    from: t,
                    drop: i,
                    images: cube.face(t, i).images().to_vec(),
                });
            }
        }
        CubeSpec {
            n: cube.n,
            objects,
            faces,
            diagram: !cube.is_n_extension(),
        }
    }
}
