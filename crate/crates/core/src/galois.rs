//! Extensions of finite groups relative to abelianization (BASE) or to
//! abelianization followed by the quotient by P-torsion (COMPOSITE).
//! Reflected objects are ordinary finite groups; units are quotient maps.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::abelian::{FgAbelianGroup, PrimeSet};
use crate::error::{Error, Result};
use crate::group::{
    abelian_invariants, center, closure_p, commutator_subgroup, homomorphisms, pullback, quotient,
    FiniteGroup, GroupHom, Pullback, Quotient, Subgroup,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Mode {
    Base,
    Composite,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisContext {
    mode: Mode,
    primes: PrimeSet,
}

/// The universal normal quotient `A/[Ker f, A] -> B` of `f: A -> B`.
#[derive(Clone, Debug)]
pub struct Centralization {
    pub extension: GroupHom,
    pub unit: GroupHom,
}

/// `T_1(f): B x_{I(B)} I(A) -> B` and the comparison `<f, eta_A>` into it.
#[derive(Clone, Debug)]
pub struct Trivialization {
    pub extension: GroupHom,
    pub comparison: GroupHom,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisGroup {
    pub value: FgAbelianGroup,
    /// `[A] cap Ker p` inside the domain.
    pub subgroup: Subgroup,
}

/// The image under the reflector of the kernel-pair groupoid of `p: E -> B`.
#[derive(Clone, Debug)]
pub struct GaloisGroupoid {
    /// `I(E)`.
    pub objects: FiniteGroup,
    /// `I(Eq p)`.
    pub morphisms: FiniteGroup,
    /// `I(Eq p x_E Eq p)`.
    pub composable: FiniteGroup,
    pub source: GroupHom,
    pub target: GroupHom,
    pub identity: GroupHom,
    pub inverse: GroupHom,
    pub compose: GroupHom,
    pub first: GroupHom,
    pub second: GroupHom,
    /// `I(<identity . source, id>)` and `I(<id, inverse>)`, for the unit and
    /// inverse laws.
    pub unit_pair: GroupHom,
    pub inverse_pair: GroupHom,
}

/// `Gal(f_1)` restricted to Galois groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GalMap {
    pub source: FgAbelianGroup,
    pub target: FgAbelianGroup,
    pub map: GroupHom,
}

#[derive(Clone, Debug)]
pub struct RadicalCheck {
    /// Kernel of the centralization unit, found by search over the
    /// subgroups of `Ker f`.
    pub centralization_kernel: Subgroup,
    /// `t_P(Ker f)`.
    pub torsion: Subgroup,
    pub agree: bool,
}

fn check_surjective(f: &GroupHom) -> Result<()> {
    if f.is_surjective() {
        Ok(())
    } else {
        Err(Error::NotSurjective)
    }
}

/// Elements of `s` whose order is a P-number.
pub fn p_torsion(s: &Subgroup, primes: &PrimeSet) -> Result<Subgroup> {
    let g = s.ambient();
    let members: Vec<usize> = s
        .members()
        .iter()
        .copied()
        .filter(|&x| primes.is_p_number(&BigInt::from(g.element_order(x))))
        .collect();
    Subgroup::from_members(g, &members)
}

fn has_p_torsion(g: &FiniteGroup, members: &[usize], primes: &PrimeSet) -> bool {
    members
        .iter()
        .any(|&x| primes.iter().any(|p| g.element_order(x).is_multiple_of(p as usize)))
}

/// All subgroups of an abelian subgroup, by joining cyclic subgroups.
fn subgroups_of_abelian(s: &Subgroup) -> Result<Vec<Subgroup>> {
    let g = s.ambient();
    let mut found = vec![Subgroup::trivial(g)];
    let mut next = 0;
    while next < found.len() {
        let cur = found[next].clone();
        next += 1;
        for &x in s.members() {
            if cur.contains(x) {
                continue;
            }
            let t = cur.join(&Subgroup::generated(g, &[x]))?;
            if !found.contains(&t) {
                found.push(t);
            }
        }
    }
    Ok(found)
}

/// The map `A/N -> B` induced by `f` when `N <= Ker f`.
fn factor_through(f: &GroupHom, q: &Quotient) -> Result<GroupHom> {
    GroupHom::new(
        q.group.clone(),
        f.codomain().clone(),
        q.reps.iter().map(|&r| f.apply(r)).collect(),
    )
}

impl GaloisContext {
    pub fn base() -> Self {
        GaloisContext {
            mode: Mode::Base,
            primes: PrimeSet::empty(),
        }
    }

    pub fn composite(primes: PrimeSet) -> Self {
        GaloisContext {
            mode: Mode::Composite,
            primes,
        }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn primes(&self) -> &PrimeSet {
        &self.primes
    }

    /// `[G]_0`, the kernel of the unit at `G`.
    pub fn radical(&self, g: &FiniteGroup) -> Result<Subgroup> {
        let w = Subgroup::whole(g);
        let d = commutator_subgroup(&w, &w)?;
        match self.mode {
            Mode::Base => Ok(d),
            Mode::Composite => closure_p(g, &d, &self.primes),
        }
    }

    /// `eta_G: G -> I(G)`.
    pub fn reflect(&self, g: &FiniteGroup) -> Result<Quotient> {
        let q = quotient(g, &self.radical(g)?)?;
        if !q.group.is_abelian() {
            return Err(Error::Consistency("reflection is not abelian".into()));
        }
        if self.mode == Mode::Composite
            && has_p_torsion(
                &q.group,
                &q.group.elements().collect::<Vec<_>>(),
                &self.primes,
            )
        {
            return Err(Error::Consistency("reflection has P-torsion".into()));
        }
        Ok(q)
    }

    /// `I(f): I(A) -> I(B)` for reflections `qa`, `qb` of the ends of `f`.
    pub fn reflect_map(&self, f: &GroupHom, qa: &Quotient, qb: &Quotient) -> Result<GroupHom> {
        if qa.projection.domain() != f.domain() || qb.projection.domain() != f.codomain() {
            return Err(Error::AmbientMismatch);
        }
        let image = qa
            .reps
            .iter()
            .map(|&r| qb.projection.apply(f.apply(r)))
            .collect();
        GroupHom::new(qa.group.clone(), qb.group.clone(), image)
    }

    /// Whether the naturality square of the unit at `f` is a pullback.
    pub fn is_trivial_ext(&self, f: &GroupHom) -> Result<bool> {
        check_surjective(f)?;
        let qa = self.reflect(f.domain())?;
        let qb = self.reflect(f.codomain())?;
        let i_f = self.reflect_map(f, &qa, &qb)?;
        let pb = pullback(&qb.projection, &i_f)?;
        Ok(pb.pair_map(f, &qa.projection)?.is_isomorphism())
    }

    pub fn kernel_pair(&self, f: &GroupHom) -> Result<Pullback> {
        pullback(f, f)
    }

    /// Normality as triviality of the pullback of `f` along itself, cross-checked
    /// against centrality (BASE) or the characterisation (COMPOSITE).
    pub fn is_normal_ext(&self, f: &GroupHom) -> Result<bool> {
        check_surjective(f)?;
        let kp = self.kernel_pair(f)?;
        let normal = self.is_trivial_ext(&kp.p1)?;
        let expected = match self.mode {
            Mode::Base => is_central(f),
            Mode::Composite => self.characterisation_normal(f)?,
        };
        if normal != expected {
            return Err(Error::Consistency(format!(
                "kernel-pair normality ({normal}) disagrees with the closed-form criterion ({expected})"
            )));
        }
        Ok(normal)
    }

    /// `Ker f` is central and has no P-torsion.
    pub fn characterisation_normal(&self, f: &GroupHom) -> Result<bool> {
        if self.mode != Mode::Composite {
            return Err(Error::ModeMismatch("composite"));
        }
        check_surjective(f)?;
        let k = f.kernel();
        Ok(
            is_central(f)
                && k.is_abelian()
                && !has_p_torsion(f.domain(), k.members(), &self.primes),
        )
    }

    pub fn centralize(&self, f: &GroupHom) -> Result<Centralization> {
        if self.mode != Mode::Base {
            return Err(Error::ModeMismatch("base"));
        }
        check_surjective(f)?;
        let c = commutator_subgroup(&f.kernel(), &Subgroup::whole(f.domain()))?;
        let q = quotient(f.domain(), &c)?;
        Ok(Centralization {
            extension: factor_through(f, &q)?,
            unit: q.projection,
        })
    }

    /// A section of `f`, if one exists, by exhaustive search.
    pub fn find_section(f: &GroupHom) -> Option<GroupHom> {
        let id = GroupHom::identity(f.codomain());
        homomorphisms(f.codomain(), f.domain())
            .into_iter()
            .find(|s| s.then(f).ok().as_ref() == Some(&id))
    }

    pub fn trivialize_split(&self, f: &GroupHom, section: &GroupHom) -> Result<Trivialization> {
        check_surjective(f)?;
        if section.domain() != f.codomain() || section.then(f)? != GroupHom::identity(f.codomain())
        {
            return Err(Error::NotASection);
        }
        let qa = self.reflect(f.domain())?;
        let qb = self.reflect(f.codomain())?;
        let i_f = self.reflect_map(f, &qa, &qb)?;
        let pb = pullback(&qb.projection, &i_f)?;
        let comparison = pb.pair_map(f, &qa.projection)?;
        if !comparison.is_surjective() {
            return Err(Error::Consistency(
                "trivialization comparison is not surjective".into(),
            ));
        }
        Ok(Trivialization {
            extension: pb.p1,
            comparison,
        })
    }

    /// `[f]_1 = [A]_0 cap Ker f` for a split `f`. Without a given section
    /// one is searched for.
    pub fn radical_split(&self, f: &GroupHom, section: Option<&GroupHom>) -> Result<Subgroup> {
        check_surjective(f)?;
        match section {
            Some(s) => {
                if s.domain() != f.codomain() || s.then(f)? != GroupHom::identity(f.codomain()) {
                    return Err(Error::NotASection);
                }
            }
            None => {
                if Self::find_section(f).is_none() {
                    return Err(Error::Precondition("extension does not split".into()));
                }
            }
        }
        self.radical(f.domain())?.intersection(&f.kernel())
    }

    fn require_normal(&self, p: &GroupHom) -> Result<()> {
        if self.is_normal_ext(p)? {
            Ok(())
        } else {
            Err(Error::NotNormalExtension)
        }
    }

    /// `[E] cap Ker p`, cross-checked against the kernel of
    /// `<I(pi_1), I(pi_2)>` on `I(Eq p)`.
    pub fn galois_group(&self, p: &GroupHom) -> Result<GaloisGroup> {
        self.require_normal(p)?;
        let subgroup = self.radical(p.domain())?.intersection(&p.kernel())?;
        let value = abelian_invariants(&subgroup.to_group().0)?;
        let kp = self.kernel_pair(p)?;
        let qe = self.reflect(&kp.group)?;
        let qa = self.reflect(p.domain())?;
        let s = self.reflect_map(&kp.p1, &qe, &qa)?;
        let t = self.reflect_map(&kp.p2, &qe, &qa)?;
        let vertex = s.kernel().intersection(&t.kernel())?;
        let other = abelian_invariants(&vertex.to_group().0)?;
        if other != value {
            return Err(Error::Consistency(format!(
                "Galois group {value} disagrees with the pullback route {other}"
            )));
        }
        Ok(GaloisGroup { value, subgroup })
    }

    pub fn galois_groupoid(&self, p: &GroupHom) -> Result<GaloisGroupoid> {
        self.require_normal(p)?;
        let e = p.domain();
        let kp = self.kernel_pair(p)?;
        let eq = &kp.group;
        let at = |a: usize, b: usize| kp.index_of(a, b).expect("pair in the kernel pair");
        let pairs = kp.pairs();
        let inverse = GroupHom::new(
            eq.clone(),
            eq.clone(),
            pairs.iter().map(|&(a, b)| at(b, a)).collect(),
        )?;
        let identity = GroupHom::new(
            e.clone(),
            eq.clone(),
            e.elements().map(|a| at(a, a)).collect(),
        )?;
        let cp = pullback(&kp.p2, &kp.p1)?;
        let compose = GroupHom::new(
            cp.group.clone(),
            eq.clone(),
            cp.pairs()
                .iter()
                .map(|&(x, y)| at(pairs[x].0, pairs[y].1))
                .collect(),
        )?;
        let unit_pair = cp.pair_map(&kp.p1.then(&identity)?, &GroupHom::identity(eq))?;
        let inverse_pair = cp.pair_map(&GroupHom::identity(eq), &inverse)?;

        let qe = self.reflect(e)?;
        let qq = self.reflect(eq)?;
        let qc = self.reflect(&cp.group)?;
        Ok(GaloisGroupoid {
            source: self.reflect_map(&kp.p1, &qq, &qe)?,
            target: self.reflect_map(&kp.p2, &qq, &qe)?,
            identity: self.reflect_map(&identity, &qe, &qq)?,
            inverse: self.reflect_map(&inverse, &qq, &qq)?,
            compose: self.reflect_map(&compose, &qc, &qq)?,
            first: self.reflect_map(&cp.p1, &qc, &qq)?,
            second: self.reflect_map(&cp.p2, &qc, &qq)?,
            unit_pair: self.reflect_map(&unit_pair, &qq, &qc)?,
            inverse_pair: self.reflect_map(&inverse_pair, &qq, &qc)?,
            objects: qe.group,
            morphisms: qq.group,
            composable: qc.group,
        })
    }

    /// The map of Galois groups induced by the square `q f1 = f0 p`.
    pub fn induced_gal_map(
        &self,
        p: &GroupHom,
        q: &GroupHom,
        f1: &GroupHom,
        f0: &GroupHom,
    ) -> Result<GalMap> {
        if f1.domain() != p.domain()
            || f1.codomain() != q.domain()
            || f0.domain() != p.codomain()
            || f0.codomain() != q.codomain()
        {
            return Err(Error::Invalid("maps do not form a square".into()));
        }
        if f1.then(q)? != p.then(f0)? {
            return Err(Error::NotCommuting);
        }
        let gp = self.galois_group(p)?;
        let gq = self.galois_group(q)?;
        let map = f1.restrict_between(&gp.subgroup, &gq.subgroup)?;
        Ok(GalMap {
            source: gp.value,
            target: gq.value,
            map,
        })
    }

    /// Compares the kernel of the centralization unit of a BASE-normal `f`
    /// with `t_P(Ker f)`.
    pub fn normal_radical_check(&self, f: &GroupHom) -> Result<RadicalCheck> {
        if self.mode != Mode::Composite {
            return Err(Error::ModeMismatch("composite"));
        }
        if !GaloisContext::base().is_normal_ext(f)? {
            return Err(Error::NotNormalExtension);
        }
        let k = f.kernel();
        let a = f.domain();
        // every subgroup of the central kernel is normal in A
        let mut kernel = k.clone();
        for n in subgroups_of_abelian(&k)? {
            let q = quotient(a, &n)?;
            if self.is_normal_ext(&factor_through(f, &q)?)? {
                kernel = kernel.intersection(&n)?;
            }
        }
        let q = quotient(a, &kernel)?;
        if !self.is_normal_ext(&factor_through(f, &q)?)? {
            return Err(Error::Consistency("no smallest normal quotient".into()));
        }
        let torsion = p_torsion(&k, &self.primes)?;
        let agree = torsion == kernel;
        Ok(RadicalCheck {
            centralization_kernel: kernel,
            torsion,
            agree,
        })
    }
}

/// `Ker f <= Z(A)`.
pub fn is_central(f: &GroupHom) -> bool {
    f.kernel().is_subgroup_of(&center(f.domain()))
}

impl GaloisGroupoid {
    /// Source, target, identity, inverse and composition laws.
    pub fn check_laws(&self) -> bool {
        let eq =
            |a: Result<GroupHom>, b: Result<GroupHom>| matches!((a, b), (Ok(x), Ok(y)) if x == y);
        let id_obj = GroupHom::identity(&self.objects);
        let id_mor = GroupHom::identity(&self.morphisms);
        eq(self.identity.then(&self.source), Ok(id_obj.clone()))
            && eq(self.identity.then(&self.target), Ok(id_obj))
            && eq(self.inverse.then(&self.source), Ok(self.target.clone()))
            && eq(self.inverse.then(&self.target), Ok(self.source.clone()))
            && eq(
                self.first.then(&self.target),
                self.second.then(&self.source),
            )
            && eq(
                self.compose.then(&self.source),
                self.first.then(&self.source),
            )
            && eq(
                self.compose.then(&self.target),
                self.second.then(&self.target),
            )
            && eq(self.unit_pair.then(&self.compose), Ok(id_mor))
            && eq(
                self.inverse_pair.then(&self.compose),
                self.source.then(&self.identity),
            )
    }

    /// Loops at the unit object: `Ker(source) cap Ker(target)`.
    pub fn vertex_group(&self) -> Result<FgAbelianGroup> {
        let v = self.source.kernel().intersection(&self.target.kernel())?;
        abelian_invariants(&v.to_group().0)
    }
}
