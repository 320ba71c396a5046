//! Finite groups given by multiplication tables, with subgroups,
//! homomorphisms, and the quotient/pullback/closure constructions.

mod constructions;
mod enumerate;
mod hom;
mod named;
mod perm;
mod spec;
mod subgroup;

pub use constructions::{
    abelian_invariants, abelianization, closure_p, closure_p_by_powers, direct_product, pullback,
    quotient, DirectProduct, Pullback, Quotient,
};
pub use enumerate::{
    generating_set, homomorphisms, normal_subgroups, surjections, surjections_up_to_inner,
};
pub use hom::GroupHom;
pub use named::{corpus_names, named_group};
pub use perm::{parse_cycles, Permutation};
pub use spec::{GroupSpec, HomSpec};
pub use subgroup::{center, commutator_subgroup, Subgroup};

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::config::Limits;
use crate::error::{Error, Result};

struct GroupData {
    order: usize,
    table: Vec<u32>,
    inv: Vec<u32>,
    labels: Option<Vec<String>>,
}

/// A finite group on elements `0..order` with identity `0`. Cloning is cheap.
#[derive(Clone)]
pub struct FiniteGroup(Arc<GroupData>);

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.table == other.0.table
    }
}

impl Eq for FiniteGroup {}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup(order {})", self.order())
    }
}

impl FiniteGroup {
    /// Validates a multiplication table: identity at index 0, inverses,
    /// and associativity.
    pub fn from_table(table: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::Invalid("empty multiplication table".into()));
        }
        if table
            .iter()
            .any(|r| r.len() != n || r.iter().any(|&x| x >= n))
        {
            return Err(Error::Invalid(
                "table is not a square array of element indices".into(),
            ));
        }
        if let Some(l) = &labels {
            if l.len() != n {
                return Err(Error::Invalid(
                    "label count differs from the group order".into(),
                ));
            }
        }
        let flat: Vec<u32> = table.iter().flatten().map(|&x| x as u32).collect();
        Self::from_flat(n, flat, labels, true)
    }

    /// Internal constructor for tables produced by trusted constructions;
    /// `check` runs the full validation anyway.
    pub(crate) fn from_flat(
        n: usize,
        table: Vec<u32>,
        labels: Option<Vec<String>>,
        check: bool,
    ) -> Result<Self> {
        for a in 0..n {
            if table[a] as usize != a || table[a * n] as usize != a {
                return Err(Error::Invalid("index 0 is not the identity".into()));
            }
        }
        let mut inv = vec![u32::MAX; n];
        for a in 0..n {
            match (0..n).find(|&b| table[a * n + b] == 0) {
                Some(b) if table[b * n + a] == 0 => inv[a] = b as u32,
                _ => {
                    return Err(Error::Invalid(format!(
                        "element {a} has no two-sided inverse"
                    )))
                }
            }
        }
        if check {
            for a in 0..n {
                for b in 0..n {
                    let ab = table[a * n + b] as usize;
                    for c in 0..n {
                        let bc = table[b * n + c] as usize;
                        if table[ab * n + c] != table[a * n + bc] {
                            return Err(Error::Invalid(format!(
                                "table is not associative at ({a},{b},{c})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(FiniteGroup(Arc::new(GroupData {
            order: n,
            table,
            inv,
            labels,
        })))
    }

    pub fn trivial() -> Self {
        Self::from_flat(1, vec![0], None, false).expect("trivial table")
    }

    /// `Z/n` with element `k` standing for `k mod n`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let table = (0..n)
            .flat_map(|a| (0..n).map(move |b| ((a + b) % n) as u32))
            .collect();
        let labels = (0..n).map(|k| k.to_string()).collect();
        Self::from_flat(n, table, Some(labels), false).expect("cyclic table")
    }

    /// Dihedral group of order `2n`: element `j*n + i` is `r^i s^j`.
    pub fn dihedral(n: usize) -> Self {
        assert!(n >= 1);
        let m = 2 * n;
        let mut table = vec![0u32; m * m];
        for a in 0..m {
            let (i, j) = (a % n, a / n);
            for b in 0..m {
                let (k, l) = (b % n, b / n);
                let e = if j == 0 { (i + k) % n } else { (i + n - k) % n };
                table[a * m + b] = (((j + l) % 2) * n + e) as u32;
            }
        }
        let labels = (0..m)
            .map(|a| match (a % n, a / n) {
                (0, 0) => "e".to_string(),
                (i, 0) => format!("r^{i}"),
                (0, _) => "s".to_string(),
                (i, _) => format!("r^{i}s"),
            })
            .collect();
        Self::from_flat(m, table, Some(labels), false).expect("dihedral table")
    }

    /// Quaternion group with elements `1,-1,i,-i,j,-j,k,-k` in that order.
    pub fn quaternion() -> Self {
        // unit products: (unit index 0..4 for 1,i,j,k) -> (sign, unit)
        let unit_mul = |a: usize, b: usize| -> (bool, usize) {
            match (a, b) {
                (0, x) | (x, 0) => (false, x),
                (x, y) if x == y => (true, 0),
                (1, 2) => (false, 3),
                (2, 3) => (false, 1),
                (3, 1) => (false, 2),
                (2, 1) => (true, 3),
                (3, 2) => (true, 1),
                (1, 3) => (true, 2),
                _ => unreachable!(),
            }
        };
        let mut table = vec![0u32; 64];
        for a in 0..8 {
            for b in 0..8 {
                let (neg, u) = unit_mul(a / 2, b / 2);
                let sign = (a % 2 == 1) ^ (b % 2 == 1) ^ neg;
                table[a * 8 + b] = (2 * u + sign as usize) as u32;
            }
        }
        let labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        Self::from_flat(8, table, Some(labels), false).expect("quaternion table")
    }

    /// Closure of permutations of `{0..degree}` under composition, enumerated
    /// breadth-first from the identity by right multiplication with each
    /// generator in the given order.
    pub fn from_permutations(degree: usize, generators: &[Permutation]) -> Result<Self> {
        Self::from_permutations_bounded(degree, generators, Limits::current().max_group_order)
    }

    pub fn from_permutations_bounded(
        degree: usize,
        generators: &[Permutation],
        limit: usize,
    ) -> Result<Self> {
        for g in generators {
            if g.degree() != degree {
                return Err(Error::Invalid(format!(
                    "permutation of degree {} in a degree-{degree} group",
                    g.degree()
                )));
            }
        }
        let id = Permutation::identity(degree);
        let mut elems = vec![id.clone()];
        let mut index: HashMap<Permutation, usize> = HashMap::from([(id, 0)]);
        let mut head = 0;
        while head < elems.len() {
            for g in generators {
                let p = elems[head].then(g);
                if !index.contains_key(&p) {
                    if elems.len() >= limit {
                        return Err(Error::SizeLimit {
                            what: "permutation group order",
                            size: elems.len() + 1,
                            limit,
                        });
                    }
                    index.insert(p.clone(), elems.len());
                    elems.push(p);
                }
            }
            head += 1;
        }
        let n = elems.len();
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = index[&elems[a].then(&elems[b])] as u32;
            }
        }
        let labels = elems.iter().map(|p| p.to_string()).collect();
        Self::from_flat(n, table, Some(labels), false)
    }

    pub fn order(&self) -> usize {
        self.0.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.0.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.0.table[a * self.0.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.0.inv[a] as usize
    }

    pub fn pow(&self, a: usize, e: i64) -> usize {
        let mut base = if e < 0 { self.inv(a) } else { a };
        let mut e = e.unsigned_abs();
        let mut acc = 0;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `a^-1 b^-1 a b`
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        let ab = self.mul(a, b);
        let ba = self.mul(b, a);
        self.mul(self.inv(ba), ab)
    }

    /// `g^-1 a g`
    pub fn conjugate(&self, a: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(g), a), g)
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (a + 1..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn label(&self, a: usize) -> String {
        match &self.0.labels {
            Some(l) => l[a].clone(),
            None => a.to_string(),
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.0.labels.as_deref()
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        (0..n)
            .map(|a| (0..n).map(|b| self.mul(a, b)).collect())
            .collect()
    }

    /// The same group with elements renumbered: new element `i` is old
    /// element `perm[i]`. `perm[0]` must be `0`.
    pub fn relabel(&self, perm: &[usize]) -> Result<(FiniteGroup, GroupHom)> {
        let n = self.order();
        if perm.len() != n || perm.first() != Some(&0) {
            return Err(Error::Invalid("relabeling must fix the identity".into()));
        }
        let mut pos = vec![usize::MAX; n];
        for (i, &p) in perm.iter().enumerate() {
            if p >= n || pos[p] != usize::MAX {
                return Err(Error::Invalid("relabeling is not a bijection".into()));
            }
            pos[p] = i;
        }
        let mut table = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                table[i * n + j] = pos[self.mul(perm[i], perm[j])] as u32;
            }
        }
        let labels = self
            .0
            .labels
            .as_ref()
            .map(|l| perm.iter().map(|&p| l[p].clone()).collect());
        let g = Self::from_flat(n, table, labels, false)?;
        // iso from the relabeled group back to self
        let back = GroupHom::new_unchecked(g.clone(), self.clone(), perm.to_vec());
        Ok((g, back))
    }

    pub fn same_as(&self, other: &FiniteGroup) -> bool {
        self == other
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_tables_are_groups() {
        for g in [
            FiniteGroup::cyclic(6),
            FiniteGroup::dihedral(4),
            FiniteGroup::quaternion(),
            FiniteGroup::dihedral(3),
        ] {
            let t = g.table();
            assert!(FiniteGroup::from_table(t, None).is_ok());
        }
        assert_eq!(FiniteGroup::dihedral(4).order(), 8);
        assert!(!FiniteGroup::quaternion().is_abelian());
        assert!(FiniteGroup::cyclic(5).is_abelian());
    }

    #[test]
    fn quaternion_relations() {
        let q = FiniteGroup::quaternion();
        let (i, j, k, m1) = (2, 4, 6, 1);
        assert_eq!(q.mul(i, j), k);
        assert_eq!(q.mul(j, i), 7);
        assert_eq!(q.mul(i, i), m1);
        assert_eq!(q.element_order(i), 4);
        assert_eq!(q.element_order(m1), 2);
    }

    #[test]
    fn permutation_closure() {
        let p = |s: &str| parse_cycles(3, s).unwrap();
        let s3 = FiniteGroup::from_permutations(3, &[p("(1,2)"), p("(1,2,3)")]).unwrap();
        assert_eq!(s3.order(), 6);
        let t = FiniteGroup::from_permutations(4, &[]).unwrap();
        assert_eq!(t.order(), 1);
        let c4 =
            FiniteGroup::from_permutations(4, &[parse_cycles(4, "(1,2,3,4)").unwrap()]).unwrap();
        assert_eq!(c4.order(), 4);
        assert!(c4.is_abelian());
        assert_eq!(c4.element_order(1), 4);
    }

    #[test]
    fn permutation_bound() {
        let gens = [
            parse_cycles(5, "(1,2)").unwrap(),
            parse_cycles(5, "(1,2,3,4,5)").unwrap(),
        ];
        let err = FiniteGroup::from_permutations_bounded(5, &gens, 100).unwrap_err();
        assert!(matches!(err, Error::SizeLimit { limit: 100, .. }));
    }

    #[test]
    fn bad_tables_rejected() {
        assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![1, 1]], None).is_err());
        assert!(FiniteGroup::from_table(vec![vec![1, 0], vec![0, 1]], None).is_err());
        // a Latin square with identity 0 that is not associative
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(FiniteGroup::from_table(t, None).is_err());
    }

    #[test]
    fn powers_and_commutators() {
        let d = FiniteGroup::dihedral(4);
        let (r, s) = (1, 4);
        assert_eq!(d.pow(r, 4), 0);
        assert_eq!(d.pow(r, -1), 3);
        assert_eq!(d.commutator(r, s), d.pow(r, 2));
        assert_eq!(d.conjugate(r, s), 3);
    }
}
