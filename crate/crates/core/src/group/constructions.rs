use num_bigint::BigInt;

use super::{commutator_subgroup, FiniteGroup, GroupHom, Subgroup};
use crate::abelian::{FgAbelianGroup, PrimeSet};
use crate::config::Limits;
use crate::error::{Error, Result};

/// `G/N` with cosets numbered by their minimal representatives.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: FiniteGroup,
    pub projection: GroupHom,
    /// `reps[i]` is the smallest element of coset `i`.
    pub reps: Vec<usize>,
}

pub fn quotient(g: &FiniteGroup, n: &Subgroup) -> Result<Quotient> {
    if n.ambient() != g {
        return Err(Error::AmbientMismatch);
    }
    if !n.is_normal() {
        return Err(Error::NotNormal);
    }
    let mut coset = vec![usize::MAX; g.order()];
    let mut reps = Vec::new();
    for a in g.elements() {
        if coset[a] == usize::MAX {
            for &k in n.members() {
                coset[g.mul(a, k)] = reps.len();
            }
            reps.push(a);
        }
    }
    let m = reps.len();
    let mut table = vec![0u32; m * m];
    for i in 0..m {
        for j in 0..m {
            table[i * m + j] = coset[g.mul(reps[i], reps[j])] as u32;
        }
    }
    let labels = g
        .labels()
        .map(|l| reps.iter().map(|&r| format!("{}N", l[r])).collect());
    let group = FiniteGroup::from_flat(m, table, labels, false)?;
    let projection = GroupHom::new_unchecked(g.clone(), group.clone(), coset);
    Ok(Quotient {
        group,
        projection,
        reps,
    })
}

fn pair_group(a: &FiniteGroup, b: &FiniteGroup, pairs: &[(usize, usize)]) -> Result<FiniteGroup> {
    let limit = Limits::current().max_group_order;
    if pairs.len() > limit {
        return Err(Error::SizeLimit {
            what: "product group order",
            size: pairs.len(),
            limit,
        });
    }
    let nb = b.order();
    let mut index = vec![u32::MAX; a.order() * nb];
    for (i, &(x, y)) in pairs.iter().enumerate() {
        index[x * nb + y] = i as u32;
    }
    let m = pairs.len();
    let mut table = vec![0u32; m * m];
    for (i, &(x1, y1)) in pairs.iter().enumerate() {
        for (j, &(x2, y2)) in pairs.iter().enumerate() {
            let k = index[a.mul(x1, x2) * nb + b.mul(y1, y2)];
            debug_assert_ne!(k, u32::MAX, "pair set not closed");
            table[i * m + j] = k;
        }
    }
    let labels = pairs
        .iter()
        .map(|&(x, y)| format!("({},{})", a.label(x), b.label(y)))
        .collect();
    FiniteGroup::from_flat(m, table, Some(labels), false)
}

#[derive(Clone, Debug)]
pub struct DirectProduct {
    pub group: FiniteGroup,
    pub p1: GroupHom,
    pub p2: GroupHom,
    pub i1: GroupHom,
    pub i2: GroupHom,
}

/// `A x B` with element `(a, b)` at index `a * |B| + b`.
pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Result<DirectProduct> {
    let nb = b.order();
    let pairs: Vec<(usize, usize)> = a
        .elements()
        .flat_map(|x| b.elements().map(move |y| (x, y)))
        .collect();
    let group = pair_group(a, b, &pairs)?;
    let p1 = GroupHom::new_unchecked(
        group.clone(),
        a.clone(),
        pairs.iter().map(|p| p.0).collect(),
    );
    let p2 = GroupHom::new_unchecked(
        group.clone(),
        b.clone(),
        pairs.iter().map(|p| p.1).collect(),
    );
    let i1 = GroupHom::new_unchecked(
        a.clone(),
        group.clone(),
        a.elements().map(|x| x * nb).collect(),
    );
    let i2 = GroupHom::new_unchecked(b.clone(), group.clone(), b.elements().collect());
    Ok(DirectProduct {
        group,
        p1,
        p2,
        i1,
        i2,
    })
}

/// `{(a, b) | f(a) = g(b)}`, pairs in lexicographic order.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub group: FiniteGroup,
    pub p1: GroupHom,
    pub p2: GroupHom,
    pairs: Vec<(usize, usize)>,
    index: Vec<u32>,
    right_order: usize,
}

impl Pullback {
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn index_of(&self, a: usize, b: usize) -> Option<usize> {
        let i = self.index[a * self.right_order + b];
        (i != u32::MAX).then_some(i as usize)
    }

    /// The induced map `<u, v>: X -> A x_C B` from a compatible pair.
    pub fn pair_map(&self, u: &GroupHom, v: &GroupHom) -> Result<GroupHom> {
        if u.domain() != v.domain()
            || u.codomain() != self.p1.codomain()
            || v.codomain() != self.p2.codomain()
        {
            return Err(Error::Invalid(
                "maps do not form a cone over the pullback".into(),
            ));
        }
        let image = u
            .domain()
            .elements()
            .map(|x| {
                self.index_of(u.apply(x), v.apply(x))
                    .ok_or(Error::NotCommuting)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GroupHom::new_unchecked(
            u.domain().clone(),
            self.group.clone(),
            image,
        ))
    }
}

pub fn pullback(f: &GroupHom, g: &GroupHom) -> Result<Pullback> {
    if f.codomain() != g.codomain() {
        return Err(Error::CodomainMismatch);
    }
    let (a, b) = (f.domain(), g.domain());
    let pairs: Vec<(usize, usize)> = a
        .elements()
        .flat_map(|x| {
            b.elements()
                .filter(move |&y| f.apply(x) == g.apply(y))
                .map(move |y| (x, y))
        })
        .collect();
    let group = pair_group(a, b, &pairs)?;
    let nb = b.order();
    let mut index = vec![u32::MAX; a.order() * nb];
    for (i, &(x, y)) in pairs.iter().enumerate() {
        index[x * nb + y] = i as u32;
    }
    let p1 = GroupHom::new_unchecked(
        group.clone(),
        a.clone(),
        pairs.iter().map(|p| p.0).collect(),
    );
    let p2 = GroupHom::new_unchecked(
        group.clone(),
        b.clone(),
        pairs.iter().map(|p| p.1).collect(),
    );
    Ok(Pullback {
        group,
        p1,
        p2,
        pairs,
        index,
        right_order: nb,
    })
}

/// `q^-1(t_P(A/K))` for `K` normal with `[A,A] <= K`.
pub fn closure_p(a: &FiniteGroup, k: &Subgroup, primes: &PrimeSet) -> Result<Subgroup> {
    check_closure_hypotheses(a, k)?;
    let q = quotient(a, k)?;
    let qg = &q.group;
    let torsion: Vec<usize> = qg
        .elements()
        .filter(|&x| primes.is_p_number(&BigInt::from(qg.element_order(x))))
        .collect();
    let t = Subgroup::from_members(qg, &torsion)?;
    q.projection.preimage(&t)
}

/// `{a | a^m in K for some P-number m}`, by direct search over P-numbers up to `|A|`.
pub fn closure_p_by_powers(a: &FiniteGroup, k: &Subgroup, primes: &PrimeSet) -> Result<Subgroup> {
    check_closure_hypotheses(a, k)?;
    let n = a.order();
    let p_numbers: Vec<i64> = (1..=n as i64)
        .filter(|&m| primes.is_p_number(&BigInt::from(m)))
        .collect();
    let members: Vec<usize> = a
        .elements()
        .filter(|&x| p_numbers.iter().any(|&m| k.contains(a.pow(x, m))))
        .collect();
    Subgroup::from_members(a, &members)
}

fn check_closure_hypotheses(a: &FiniteGroup, k: &Subgroup) -> Result<()> {
    if k.ambient() != a {
        return Err(Error::AmbientMismatch);
    }
    if !k.is_normal() {
        return Err(Error::NotNormal);
    }
    let whole = Subgroup::whole(a);
    if !commutator_subgroup(&whole, &whole)?.is_subgroup_of(k) {
        return Err(Error::Precondition(
            "closure requires K to contain the commutator subgroup".into(),
        ));
    }
    Ok(())
}

/// Invariant factors of an abelian group, read off from the number of
/// elements of each prime-power order.
pub fn abelian_invariants(g: &FiniteGroup) -> Result<FgAbelianGroup> {
    if !g.is_abelian() {
        return Err(Error::Precondition(
            "abelian invariants of a non-abelian group".into(),
        ));
    }
    let n = g.order();
    let orders: Vec<usize> = g.elements().map(|x| g.element_order(x)).collect();
    let mut cyclic_orders: Vec<u64> = Vec::new();
    let mut rest = n;
    let mut p = 2;
    while rest > 1 {
        if !rest.is_multiple_of(p) {
            p += 1;
            continue;
        }
        while rest.is_multiple_of(p) {
            rest /= p;
        }
        // counts[k] = #{x : x^(p^k) = 1} = p^(sum over factors of min(k, e))
        let mut logs = vec![0u32];
        let mut pk = 1usize;
        loop {
            pk *= p;
            let count = orders.iter().filter(|&&o| pk.is_multiple_of(o)).count();
            let log = count.ilog(p);
            if log == *logs.last().unwrap() {
                break;
            }
            logs.push(log);
        }
        // factors of exponent >= k number logs[k] - logs[k-1]
        for k in 1..logs.len() {
            let at_least_k = logs[k] - logs[k - 1];
            let at_least_next = if k + 1 < logs.len() {
                logs[k + 1] - logs[k]
            } else {
                0
            };
            for _ in 0..at_least_k - at_least_next {
                cyclic_orders.push((p as u64).pow(k as u32));
            }
        }
    }
    Ok(FgAbelianGroup::new(cyclic_orders, 0))
}

/// `G -> G/[G,G]` together with the invariants of the abelianization.
pub fn abelianization(g: &FiniteGroup) -> Result<(Quotient, FgAbelianGroup)> {
    let w = Subgroup::whole(g);
    let d = commutator_subgroup(&w, &w)?;
    let q = quotient(g, &d)?;
    let inv = abelian_invariants(&q.group)?;
    Ok((q, inv))
}
