use std::fmt;

use super::{FiniteGroup, GroupHom};
use crate::error::{Error, Result};

/// A subgroup of a finite group, stored as its sorted member set.
#[derive(Clone)]
pub struct Subgroup {
    ambient: FiniteGroup,
    members: Vec<usize>,
    mask: Vec<bool>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.members == other.members
    }
}

impl Eq for Subgroup {}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Subgroup{:?} of order {}",
            self.members,
            self.ambient.order()
        )
    }
}

impl Subgroup {
    fn from_mask(ambient: &FiniteGroup, mask: Vec<bool>) -> Self {
        let members = (0..mask.len()).filter(|&i| mask[i]).collect();
        Subgroup {
            ambient: ambient.clone(),
            members,
            mask,
        }
    }

    /// Subgroup generated by `gens`.
    pub fn generated(ambient: &FiniteGroup, gens: &[usize]) -> Self {
        let mut mask = vec![false; ambient.order()];
        mask[0] = true;
        let mut list = vec![0];
        let mut useful: Vec<usize> = Vec::new();
        for &g in gens {
            if g != 0 && !useful.contains(&g) {
                useful.push(g);
            }
        }
        let mut head = 0;
        while head < list.len() {
            let x = list[head];
            for &g in &useful {
                let y = ambient.mul(x, g);
                if !mask[y] {
                    mask[y] = true;
                    list.push(y);
                }
            }
            head += 1;
        }
        Self::from_mask(ambient, mask)
    }

    pub fn whole(ambient: &FiniteGroup) -> Self {
        Self::from_mask(ambient, vec![true; ambient.order()])
    }

    pub fn trivial(ambient: &FiniteGroup) -> Self {
        let mut mask = vec![false; ambient.order()];
        mask[0] = true;
        Self::from_mask(ambient, mask)
    }

    /// Checks closure under multiplication and inverses.
    pub fn from_members(ambient: &FiniteGroup, members: &[usize]) -> Result<Self> {
        let mut mask = vec![false; ambient.order()];
        for &m in members {
            if m >= ambient.order() {
                return Err(Error::Invalid(format!("element {m} is outside the group")));
            }
            mask[m] = true;
        }
        if !mask[0] {
            return Err(Error::Invalid(
                "subset does not contain the identity".into(),
            ));
        }
        let s = Self::from_mask(ambient, mask);
        for &a in &s.members {
            if !s.mask[ambient.inv(a)] || s.members.iter().any(|&b| !s.mask[ambient.mul(a, b)]) {
                return Err(Error::Invalid("subset is not closed".into()));
            }
        }
        Ok(s)
    }

    /// Smallest normal subgroup containing `gens`.
    pub fn normal_closure(ambient: &FiniteGroup, gens: &[usize]) -> Self {
        let mut current = Self::generated(ambient, gens);
        loop {
            let mut extra = Vec::new();
            for &h in current.generators().iter() {
                for g in ambient.elements() {
                    let c = ambient.conjugate(h, g);
                    if !current.contains(c) && !extra.contains(&c) {
                        extra.push(c);
                    }
                }
            }
            if extra.is_empty() {
                return current;
            }
            extra.extend(current.generators());
            current = Self::generated(ambient, &extra);
        }
    }

    pub fn ambient(&self) -> &FiniteGroup {
        &self.ambient
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    #[inline]
    pub fn contains(&self, a: usize) -> bool {
        self.mask[a]
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn index(&self) -> usize {
        self.ambient.order() / self.order()
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    pub fn is_whole(&self) -> bool {
        self.members.len() == self.ambient.order()
    }

    fn check_ambient(&self, other: &Subgroup) -> Result<()> {
        if self.ambient == other.ambient {
            Ok(())
        } else {
            Err(Error::AmbientMismatch)
        }
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.ambient == other.ambient && self.members.iter().all(|&a| other.contains(a))
    }

    pub fn is_normal(&self) -> bool {
        let g = &self.ambient;
        self.generators()
            .iter()
            .all(|&h| g.elements().all(|x| self.contains(g.conjugate(h, x))))
    }

    /// True if every member of `over` normalizes `self`.
    pub fn is_normal_in(&self, over: &Subgroup) -> bool {
        let g = &self.ambient;
        self.ambient == over.ambient
            && self.is_subgroup_of(over)
            && self.generators().iter().all(|&h| {
                over.generators()
                    .iter()
                    .all(|&x| self.contains(g.conjugate(h, x)))
            })
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.ambient;
        let gens = self.generators();
        gens.iter()
            .all(|&a| gens.iter().all(|&b| g.mul(a, b) == g.mul(b, a)))
    }

    pub fn intersection(&self, other: &Subgroup) -> Result<Subgroup> {
        self.check_ambient(other)?;
        let mask = (0..self.mask.len())
            .map(|i| self.mask[i] && other.mask[i])
            .collect();
        Ok(Self::from_mask(&self.ambient, mask))
    }

    /// The subgroup generated by both.
    pub fn join(&self, other: &Subgroup) -> Result<Subgroup> {
        self.check_ambient(other)?;
        let mut gens = self.generators();
        gens.extend(other.generators());
        Ok(Self::generated(&self.ambient, &gens))
    }

    /// A generating set found greedily in index order.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = Self::trivial(&self.ambient);
        for &a in &self.members {
            if !span.contains(a) {
                gens.push(a);
                span = Self::generated(&self.ambient, &gens);
            }
        }
        gens
    }

    /// The subgroup as a group in its own right (elements in ambient index
    /// order) together with the inclusion.
    pub fn to_group(&self) -> (FiniteGroup, GroupHom) {
        let n = self.order();
        let mut pos = vec![usize::MAX; self.ambient.order()];
        for (i, &m) in self.members.iter().enumerate() {
            pos[m] = i;
        }
        let mut table = vec![0u32; n * n];
        for (i, &a) in self.members.iter().enumerate() {
            for (j, &b) in self.members.iter().enumerate() {
                table[i * n + j] = pos[self.ambient.mul(a, b)] as u32;
            }
        }
        let labels = self
            .ambient
            .labels()
            .map(|l| self.members.iter().map(|&m| l[m].clone()).collect());
        let g = FiniteGroup::from_flat(n, table, labels, false).expect("subgroup table");
        let inc = GroupHom::new_unchecked(g.clone(), self.ambient.clone(), self.members.clone());
        (g, inc)
    }
}

/// `[H,K]`, generated by all `h^-1 k^-1 h k` and closed under conjugation by `<H,K>`.
pub fn commutator_subgroup(h: &Subgroup, k: &Subgroup) -> Result<Subgroup> {
    h.check_ambient(k)?;
    let g = &h.ambient;
    let mut gens = Vec::new();
    let mut seen = vec![false; g.order()];
    for &a in h.members() {
        for &b in k.members() {
            let c = g.commutator(a, b);
            if !seen[c] {
                seen[c] = true;
                gens.push(c);
            }
        }
    }
    let mut current = Subgroup::generated(g, &gens);
    let mut conj = h.generators();
    conj.extend(k.generators());
    loop {
        let mut extra: Vec<usize> = Vec::new();
        for &x in &current.generators() {
            for &c in &conj {
                let y = g.conjugate(x, c);
                if !current.contains(y) {
                    extra.push(y);
                }
            }
        }
        if extra.is_empty() {
            return Ok(current);
        }
        extra.extend(current.generators());
        current = Subgroup::generated(g, &extra);
    }
}

pub fn center(g: &FiniteGroup) -> Subgroup {
    let mask = g
        .elements()
        .map(|z| g.elements().all(|x| g.mul(z, x) == g.mul(x, z)))
        .collect();
    Subgroup::from_mask(g, mask)
}
