use std::fmt;

use super::{FiniteGroup, Subgroup};
use crate::error::{Error, Result};

/// A homomorphism between finite groups, stored as its full image array.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupHom {
    domain: FiniteGroup,
    codomain: FiniteGroup,
    image: Vec<usize>,
}

impl fmt::Debug for GroupHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GroupHom({} -> {}: {:?})",
            self.domain.order(),
            self.codomain.order(),
            self.image
        )
    }
}

impl GroupHom {
    /// Checks `image(xy) = image(x) image(y)` on all pairs.
    pub fn new(domain: FiniteGroup, codomain: FiniteGroup, image: Vec<usize>) -> Result<Self> {
        if image.len() != domain.order() || image.iter().any(|&y| y >= codomain.order()) {
            return Err(Error::NotHomomorphism(
                "image array has the wrong shape".into(),
            ));
        }
        for a in domain.elements() {
            for b in domain.elements() {
                if image[domain.mul(a, b)] != codomain.mul(image[a], image[b]) {
                    return Err(Error::NotHomomorphism(format!(
                        "fails on the pair ({a},{b})"
                    )));
                }
            }
        }
        Ok(GroupHom {
            domain,
            codomain,
            image,
        })
    }

    pub(crate) fn new_unchecked(
        domain: FiniteGroup,
        codomain: FiniteGroup,
        image: Vec<usize>,
    ) -> Self {
        debug_assert_eq!(image.len(), domain.order());
        GroupHom {
            domain,
            codomain,
            image,
        }
    }

    /// Extends an assignment on generators, failing if the assignment does
    /// not define a homomorphism or the sources do not generate the domain.
    pub fn from_generators(
        domain: &FiniteGroup,
        codomain: &FiniteGroup,
        sources: &[usize],
        targets: &[usize],
    ) -> Result<Self> {
        if sources.len() != targets.len() {
            return Err(Error::Invalid(
                "generator and image lists differ in length".into(),
            ));
        }
        let image = extend_on_generators(domain, codomain, sources, targets)
            .ok_or_else(|| Error::NotHomomorphism("generator assignment does not extend".into()))?;
        Ok(GroupHom {
            domain: domain.clone(),
            codomain: codomain.clone(),
            image,
        })
    }

    pub fn identity(g: &FiniteGroup) -> Self {
        GroupHom {
            domain: g.clone(),
            codomain: g.clone(),
            image: g.elements().collect(),
        }
    }

    /// The map sending everything to the identity.
    pub fn zero(domain: &FiniteGroup, codomain: &FiniteGroup) -> Self {
        GroupHom {
            domain: domain.clone(),
            codomain: codomain.clone(),
            image: vec![0; domain.order()],
        }
    }

    pub fn domain(&self) -> &FiniteGroup {
        &self.domain
    }

    pub fn codomain(&self) -> &FiniteGroup {
        &self.codomain
    }

    pub fn images(&self) -> &[usize] {
        &self.image
    }

    #[inline]
    pub fn apply(&self, a: usize) -> usize {
        self.image[a]
    }

    /// `other` after `self`.
    pub fn then(&self, other: &GroupHom) -> Result<GroupHom> {
        if self.codomain != other.domain {
            return Err(Error::Invalid("composition of non-composable maps".into()));
        }
        Ok(GroupHom {
            domain: self.domain.clone(),
            codomain: other.codomain.clone(),
            image: self.image.iter().map(|&x| other.image[x]).collect(),
        })
    }

    pub fn kernel(&self) -> Subgroup {
        let members: Vec<usize> = self
            .domain
            .elements()
            .filter(|&a| self.image[a] == 0)
            .collect();
        Subgroup::from_members(&self.domain, &members).expect("kernel is a subgroup")
    }

    pub fn image_subgroup(&self) -> Subgroup {
        let mut members: Vec<usize> = self.image.clone();
        members.sort_unstable();
        members.dedup();
        Subgroup::from_members(&self.codomain, &members).expect("image is a subgroup")
    }

    pub fn image_of(&self, s: &Subgroup) -> Result<Subgroup> {
        if s.ambient() != &self.domain {
            return Err(Error::AmbientMismatch);
        }
        let gens: Vec<usize> = s.generators().iter().map(|&a| self.image[a]).collect();
        Ok(Subgroup::generated(&self.codomain, &gens))
    }

    pub fn preimage(&self, s: &Subgroup) -> Result<Subgroup> {
        if s.ambient() != &self.codomain {
            return Err(Error::AmbientMismatch);
        }
        let members: Vec<usize> = self
            .domain
            .elements()
            .filter(|&a| s.contains(self.image[a]))
            .collect();
        Ok(Subgroup::from_members(&self.domain, &members).expect("preimage is a subgroup"))
    }

    pub fn restrict(&self, s: &Subgroup) -> Result<GroupHom> {
        if s.ambient() != &self.domain {
            return Err(Error::AmbientMismatch);
        }
        let (g, inc) = s.to_group();
        Ok(GroupHom {
            domain: g,
            codomain: self.codomain.clone(),
            image: inc.image.iter().map(|&x| self.image[x]).collect(),
        })
    }

    /// The restriction `src -> dst`, as a map between the subgroups viewed
    /// as groups (see [`Subgroup::to_group`]).
    pub fn restrict_between(&self, src: &Subgroup, dst: &Subgroup) -> Result<GroupHom> {
        if src.ambient() != &self.domain || dst.ambient() != &self.codomain {
            return Err(Error::AmbientMismatch);
        }
        let mut pos = vec![usize::MAX; self.codomain.order()];
        for (i, &m) in dst.members().iter().enumerate() {
            pos[m] = i;
        }
        let image = src
            .members()
            .iter()
            .map(|&x| match pos[self.image[x]] {
                usize::MAX => Err(Error::Invalid(
                    "map does not land in the target subgroup".into(),
                )),
                i => Ok(i),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GroupHom {
            domain: src.to_group().0,
            codomain: dst.to_group().0,
            image,
        })
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.codomain.order()];
        for &y in &self.image {
            hit[y] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn is_injective(&self) -> bool {
        self.image.iter().filter(|&&y| y == 0).count() == 1
    }

    pub fn is_isomorphism(&self) -> bool {
        self.domain.order() == self.codomain.order() && self.is_injective()
    }

    /// Inverse of a bijective homomorphism.
    pub fn inverse(&self) -> Result<GroupHom> {
        if !self.is_isomorphism() {
            return Err(Error::Invalid("map is not an isomorphism".into()));
        }
        let mut inv = vec![0; self.codomain.order()];
        for (a, &b) in self.image.iter().enumerate() {
            inv[b] = a;
        }
        Ok(GroupHom {
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
            image: inv,
        })
    }
}

/// Breadth-first extension of a generator assignment; `None` if inconsistent
/// or if the sources do not generate.
pub(crate) fn extend_on_generators(
    domain: &FiniteGroup,
    codomain: &FiniteGroup,
    sources: &[usize],
    targets: &[usize],
) -> Option<Vec<usize>> {
    let n = domain.order();
    let mut image = vec![usize::MAX; n];
    image[0] = 0;
    let mut list = vec![0];
    let mut head = 0;
    while head < list.len() {
        let x = list[head];
        for (&s, &t) in sources.iter().zip(targets) {
            let y = domain.mul(x, s);
            let fy = codomain.mul(image[x], t);
            if image[y] == usize::MAX {
                image[y] = fy;
                list.push(y);
            } else if image[y] != fy {
                return None;
            }
        }
        head += 1;
    }
    // every pair (x, s) was checked, which forces f(xw) = f(x)f(w) for all words w
    if list.len() != n {
        return None;
    }
    Some(image)
}
