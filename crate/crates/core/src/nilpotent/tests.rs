use num_bigint::BigInt;

use super::*;
use crate::abelian::{FgAbelianGroup, IntMatrix};
use crate::error::Error;

fn f(d: usize, c: usize) -> FreeNilGroup {
    FreeNilGroup::new(d, c).unwrap()
}

fn w(g: &FreeNilGroup, e: &[i64]) -> NilWord {
    g.word_i64(e).unwrap()
}

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

#[test]
fn basis_sizes() {
    assert_eq!(f(2, 2).len(), 3);
    assert_eq!(f(1, 5).len(), 1);
    assert_eq!(f(2, 3).len(), 5);
    assert_eq!(f(5, 4).len(), 205);
    assert_eq!(basis_size(5, 5), 829);
    let g = f(2, 2);
    assert_eq!(g.basis_name(2), "[x2,x1]");
    assert_eq!(g.layer(2), 2..3);
}

#[test]
fn size_bound_is_enforced() {
    assert!(matches!(
        FreeNilGroup::new(8, 8),
        Err(Error::SizeLimit { .. })
    ));
    assert!(FreeNilGroup::new(0, 2).is_err());
}

#[test]
fn class_two_products() {
    let g = f(2, 2);
    let (x1, x2) = (g.generator(0), g.generator(1));
    // x2 x1 = x1 x2 [x2, x1]
    assert_eq!(x2.mul(&x1), w(&g, &[1, 1, 1]));
    assert_eq!(x2.comm(&x1), w(&g, &[0, 0, 1]));
    assert_eq!(x1.comm(&x2), w(&g, &[0, 0, -1]));
    let u = x1.mul(&x2);
    assert!(u.mul(&u.inv()).is_identity());
    // (x1 x2)^2 = x1^2 x2^2 c
    assert_eq!(u.pow(2), w(&g, &[2, 2, 1]));
    assert_eq!(u.mul(&u), u.pow(2));
    assert_eq!(u.pow(-3).mul(&u.pow(3)), g.identity());
    assert_eq!(format!("{}", w(&g, &[2, 0, -1])), "x1^2 [x2,x1]^-1");
}

#[test]
fn class_three_commutator_identities() {
    let g = f(2, 3);
    let (x, y) = (g.generator(0), g.generator(1));
    // basis: x1, x2, [x2,x1], [[x2,x1],x1], [x2,[x2,x1]]
    let c = y.comm(&x);
    assert_eq!(c, g.basis_element(2));
    assert_eq!(c.comm(&x), g.basis_element(3));
    assert_eq!(c.comm(&y), g.basis_element(4).inv());
    assert_eq!(g.basis_name(4), "[x2,[x2,x1]]");
    // Hall-Witt style sanity: [x^2, y] = [x,y]^x [x,y]
    let lhs = x.pow(2).comm(&y);
    let xy = x.comm(&y);
    assert_eq!(lhs, xy.conj(&x).mul(&xy));
}

#[test]
fn magnus_coefficients_grow_into_big_integers() {
    let g = f(2, 4);
    let x = g.generator(0).mul(&g.generator(1));
    let n = BigInt::from(10).pow(12);
    let p = x.pow(n.clone());
    let q = x.pow(-n.clone());
    assert!(p.mul(&q).is_identity());
    assert_eq!(p.coords()[0], n);
    assert_eq!(x.pow(n.clone() * 2), p.mul(&p));
}

#[test]
fn collector_agrees_on_examples() {
    let g = f(2, 2);
    let col = Collector::new(&g).unwrap();
    let (x1, x2) = (g.generator(0), g.generator(1));
    assert_eq!(col.multiply(&x2, &x1).unwrap(), w(&g, &[1, 1, 1]));
    let u = x1.mul(&x2);
    assert_eq!(col.multiply(&u, &u).unwrap(), w(&g, &[2, 2, 1]));
}

#[test]
fn truncation_and_projection() {
    let big_g = f(3, 3);
    let small = f(3, 2);
    let u = big_g
        .generator(0)
        .mul(&big_g.generator(2).pow(2))
        .mul(&big_g.generator(1));
    let v = big_g
        .generator(1)
        .comm(&big_g.generator(2))
        .mul(&big_g.generator(0).inv());
    let tu = big_g.truncate(&u, &small).unwrap();
    let tv = big_g.truncate(&v, &small).unwrap();
    assert_eq!(big_g.truncate(&u.mul(&v), &small).unwrap(), tu.mul(&tv));
    // drop the middle letter
    let target = f(2, 3);
    let p = big_g.letter_projection(&target, &[0, 2]).unwrap();
    assert_eq!(p.apply(&u.mul(&v)), p.apply(&u).mul(&p.apply(&v)));
    assert_eq!(p.apply(&big_g.generator(1)), target.identity());
    assert_eq!(p.apply(&big_g.generator(2)), target.generator(1));
    assert!(big_g.letter_projection(&target, &[2, 0]).is_err());
}

#[test]
fn induced_sequences() {
    let z = f(1, 1);
    let s = PcSubgroup::generated(&z, &[big(&[2])]);
    assert_eq!(s.sequence(), &[big(&[2])]);
    assert!(s.contains(&big(&[-6])));
    assert!(!s.contains(&big(&[3])));
    // gcd of leading exponents
    let s = PcSubgroup::generated(&z, &[big(&[6]), big(&[-4])]);
    assert_eq!(s.sequence(), &[big(&[2])]);

    let g = f(2, 2);
    let s = PcSubgroup::generated(&g, &[big(&[1, 0, 0]), big(&[0, 1, 0])]);
    assert_eq!(s.leads(), &[0, 1, 2]);
    assert_eq!(s.leading_exponents(), big(&[1, 1, 1]));

    let s = PcSubgroup::generated(&g, &[big(&[2, 0, 0]), big(&[0, 2, 0]), big(&[0, 0, 1])]);
    assert_eq!(s.leading_exponents(), big(&[2, 2, 1]));
    assert!(PcSubgroup::generated(&g, &[]).is_trivial());
}

#[test]
fn normal_closures() {
    let g = f(2, 2);
    let n = PcSubgroup::normal_closure(&g, &[big(&[1, 0, 0])]);
    assert!(n.contains(&big(&[1, 0, 0])));
    assert!(n.contains(&big(&[0, 0, 1])));
    assert!(!n.contains(&big(&[0, 1, 0])));
    assert!(PcSubgroup::normal_closure(&g, &[]).is_trivial());
    // relators of Z/2 x Z/2: index 4
    let r = PcSubgroup::normal_closure(&g, &[big(&[2, 0, 0]), big(&[0, 2, 0]), big(&[0, 0, 1])]);
    assert_eq!(r.leads(), &[0, 1, 2]);
    let index: BigInt = r.leading_exponents().iter().product();
    assert_eq!(index, BigInt::from(4));
    assert!(r.is_normal());
}

#[test]
fn commutator_and_derived_subgroups() {
    let g = f(2, 2);
    let whole = PcSubgroup::whole(&g);
    let ff = whole.commutator(&whole);
    assert_eq!(ff.sequence(), &[big(&[0, 0, 1])]);
    assert!(ff.same_as(&PcSubgroup::derived(&g)));
    assert!(PcSubgroup::trivial(&g).commutator(&whole).is_trivial());
    let r = PcSubgroup::normal_closure(&g, &[big(&[2, 0, 0]), big(&[0, 2, 0]), big(&[0, 0, 1])]);
    let rf = r.commutator(&whole);
    assert!(rf.contains(&big(&[0, 0, 2])));
    assert!(!rf.contains(&big(&[0, 0, 1])));

    assert!(PcSubgroup::derived(&f(3, 1)).is_trivial());
    assert_eq!(PcSubgroup::derived(&f(2, 3)).len(), 3);
}

#[test]
fn kernels_and_quotients() {
    let g = f(2, 2);
    let whole = PcSubgroup::whole(&g);
    let ab = IntMatrix::identity(2);
    assert!(whole
        .intersect_with_kernel(&ab)
        .unwrap()
        .same_as(&PcSubgroup::derived(&g)));
    let r = PcSubgroup::normal_closure(&g, &[big(&[2, 0, 0]), big(&[0, 2, 0]), big(&[0, 0, 1])]);
    let n = r.intersect_with_kernel(&ab).unwrap();
    assert_eq!(n.sequence(), &[big(&[0, 0, 1])]);
    assert!(PcSubgroup::trivial(&g)
        .intersect_with_kernel(&ab)
        .unwrap()
        .is_trivial());

    let d = r.commutator(&whole);
    assert_eq!(
        abelian_quotient(&n, &d).unwrap().group,
        FgAbelianGroup::cyclic(2)
    );
    assert!(abelian_quotient(&n, &n).unwrap().group.is_trivial());
    assert_eq!(
        abelian_quotient(&n, &PcSubgroup::trivial(&g))
            .unwrap()
            .group,
        FgAbelianGroup::free(1)
    );

    assert_eq!(abelian_quotient(&d, &n).unwrap_err(), Error::NotSubset);
    let x1 = PcSubgroup::generated(&g, &[big(&[1, 0, 0])]);
    // <x1> is not normal in F
    assert_eq!(
        abelian_quotient(&whole, &x1).unwrap_err(),
        Error::NotNormalIn
    );
    assert_eq!(
        abelian_quotient(&whole, &PcSubgroup::trivial(&g)).unwrap_err(),
        Error::NotAbelianQuotient
    );
}

#[test]
fn intersections() {
    let g = f(2, 3);
    let a = PcSubgroup::normal_closure(&g, &[big(&[2, 0, 0, 0, 0])]);
    let b = PcSubgroup::normal_closure(&g, &[big(&[0, 3, 0, 0, 0])]);
    let i = a.intersection(&b).unwrap();
    assert!(i.is_subgroup_of(&a) && i.is_subgroup_of(&b));
    // [x1^2, x2^3] lies in both
    let c = g.comm_coords(&big(&[2, 0, 0, 0, 0]), &big(&[0, 3, 0, 0, 0]));
    assert!(i.contains(&c));
    // kernel of the projection killing x2, restricted to the normal closure of x1 x2
    let p = g.letter_projection(&f(1, 3), &[0]).unwrap();
    let k = PcSubgroup::normal_closure(&g, &[big(&[1, 1, 0, 0, 0])])
        .kernel_of_projection(&p)
        .unwrap();
    let direct = PcSubgroup::normal_closure(&g, &[big(&[1, 1, 0, 0, 0])])
        .intersection(&PcSubgroup::normal_closure(&g, &[big(&[0, 1, 0, 0, 0])]))
        .unwrap();
    assert!(k.same_as(&direct));
}

#[test]
fn reduced_sequences_are_canonical() {
    let g = f(2, 2);
    let s1 = PcSubgroup::generated(&g, &[big(&[1, 1, 0]), big(&[0, 1, 0])]);
    let s2 = PcSubgroup::generated(&g, &[big(&[1, 0, 5]), big(&[0, 1, 0])]);
    assert_eq!(s1.reduced().sequence(), s2.reduced().sequence());
}

#[test]
fn torsion_lifts() {
    let g = f(2, 2);
    let r = PcSubgroup::normal_closure(&g, &[big(&[2, 0, 0]), big(&[0, 2, 0]), big(&[0, 0, 1])]);
    let whole = PcSubgroup::whole(&g);
    let d = r.commutator(&whole);
    let q = abelian_quotient(&r, &d).unwrap();
    // R / [R, F] for Z/2 x Z/2 is Z/2 + Z^2
    assert_eq!(q.group, FgAbelianGroup::new([2u64], 2));
    let lifts = q.torsion_lifts(&crate::abelian::PrimeSet::new([2]).unwrap());
    assert_eq!(lifts.len(), 1);
    let closed = d.join_elements(&lifts);
    assert_eq!(
        abelian_quotient(&r, &closed).unwrap().group,
        FgAbelianGroup::free(2)
    );
    assert!(q
        .torsion_lifts(&crate::abelian::PrimeSet::new([3]).unwrap())
        .is_empty());
}
