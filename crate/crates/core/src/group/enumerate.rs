use std::collections::BTreeSet;

use super::hom::extend_on_generators;
use super::{FiniteGroup, GroupHom, Subgroup};

/// A generating set of minimal size when the group has order at most 64 (searched
/// up to three generators), otherwise a greedy one.
pub fn generating_set(g: &FiniteGroup) -> Vec<usize> {
    let n = g.order();
    if n == 1 {
        return Vec::new();
    }
    let generates = |gens: &[usize]| Subgroup::generated(g, gens).is_whole();
    if let Some(a) = (1..n).find(|&a| g.element_order(a) == n) {
        return vec![a];
    }
    for a in 1..n {
        for b in a + 1..n {
            if generates(&[a, b]) {
                return vec![a, b];
            }
        }
    }
    if n <= 64 {
        for a in 1..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    if generates(&[a, b, c]) {
                        return vec![a, b, c];
                    }
                }
            }
        }
    }
    Subgroup::whole(g).generators()
}

/// All homomorphisms `G -> H`, enumerated by images of a generating set.
pub fn homomorphisms(g: &FiniteGroup, h: &FiniteGroup) -> Vec<GroupHom> {
    let gens = generating_set(g);
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&x| {
            let o = g.element_order(x);
            h.elements()
                .filter(|&y| o.is_multiple_of(h.element_order(y)))
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; gens.len()];
    loop {
        let targets: Vec<usize> = choice.iter().zip(&candidates).map(|(&i, c)| c[i]).collect();
        if let Some(image) = extend_on_generators(g, h, &gens, &targets) {
            out.push(GroupHom::new_unchecked(g.clone(), h.clone(), image));
        }
        // odometer increment
        let mut k = 0;
        loop {
            if k == choice.len() {
                return out;
            }
            choice[k] += 1;
            if choice[k] < candidates[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

pub fn surjections(g: &FiniteGroup, h: &FiniteGroup) -> Vec<GroupHom> {
    if !g.order().is_multiple_of(h.order()) {
        return Vec::new();
    }
    homomorphisms(g, h)
        .into_iter()
        .filter(GroupHom::is_surjective)
        .collect()
}

/// Surjections `G -> H`, one per orbit under precomposition with inner
/// automorphisms of `G` (the representative with the smallest image array).
pub fn surjections_up_to_inner(g: &FiniteGroup, h: &FiniteGroup) -> Vec<GroupHom> {
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut out = Vec::new();
    for f in surjections(g, h) {
        let canonical = g
            .elements()
            .map(|c| {
                g.elements()
                    .map(|x| f.apply(g.conjugate(x, c)))
                    .collect::<Vec<_>>()
            })
            .min()
            .unwrap();
        if seen.insert(canonical.clone()) {
            out.push(GroupHom::new_unchecked(g.clone(), h.clone(), canonical));
        }
    }
    out
}

/// All normal subgroups, found as joins of normal closures of single
/// elements, in order of discovery (trivial first).
pub fn normal_subgroups(g: &FiniteGroup) -> Vec<Subgroup> {
    let mut closures: Vec<Subgroup> = Vec::new();
    for x in g.elements() {
        let c = Subgroup::normal_closure(g, &[x]);
        if !closures.contains(&c) {
            closures.push(c);
        }
    }
    let mut found = vec![Subgroup::trivial(g)];
    let mut next = 0;
    while next < found.len() {
        let cur = found[next].clone();
        next += 1;
        for c in &closures {
            let j = cur.join(c).expect("same ambient group");
            if !found.contains(&j) {
                found.push(j);
            }
        }
    }
    found
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::named_group;

    #[test]
    fn normal_subgroup_counts() {
        let count = |n: &str| normal_subgroups(&named_group(n).unwrap()).len();
        assert_eq!(count("trivial"), 1);
        assert_eq!(count("C12"), 6);
        assert_eq!(count("V4"), 5);
        assert_eq!(count("S3"), 3);
        assert_eq!(count("D4"), 6);
        assert_eq!(count("Q8"), 6);
        assert_eq!(count("S4"), 4);
    }

    #[test]
    fn generating_sets() {
        assert!(generating_set(&FiniteGroup::trivial()).is_empty());
        assert_eq!(generating_set(&FiniteGroup::cyclic(12)).len(), 1);
        assert_eq!(generating_set(&named_group("V4").unwrap()).len(), 2);
        assert_eq!(generating_set(&named_group("C2xC2xC2").unwrap()).len(), 3);
        assert_eq!(generating_set(&named_group("S4").unwrap()).len(), 2);
    }

    #[test]
    fn hom_counts() {
        // Hom(Z/m, Z/n) has gcd(m, n) elements
        assert_eq!(
            homomorphisms(&FiniteGroup::cyclic(4), &FiniteGroup::cyclic(6)).len(),
            2
        );
        assert_eq!(
            homomorphisms(&FiniteGroup::cyclic(6), &FiniteGroup::cyclic(6)).len(),
            6
        );
        // Hom(S3, Z/2): trivial and sign
        assert_eq!(
            homomorphisms(&named_group("S3").unwrap(), &FiniteGroup::cyclic(2)).len(),
            2
        );
        // Aut(V4) = S3 has order 6
        let v4 = named_group("V4").unwrap();
        assert_eq!(surjections(&v4, &v4).len(), 6);
        // surjections Q8 -> V4: Aut(V4) many, all differing modulo inner automorphisms
        let q8 = named_group("Q8").unwrap();
        assert_eq!(surjections(&q8, &v4).len(), 6);
        assert_eq!(surjections_up_to_inner(&q8, &v4).len(), 6);
        // S3 -> S3: six automorphisms, all inner
        let s3 = named_group("S3").unwrap();
        assert_eq!(surjections(&s3, &s3).len(), 6);
        assert_eq!(surjections_up_to_inner(&s3, &s3).len(), 1);
    }
}
