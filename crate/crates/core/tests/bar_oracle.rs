use hopfcalc_core::abelian::FgAbelianGroup;
use hopfcalc_core::bar::{bar_boundary, homology};
use hopfcalc_core::corpus::corpus;
use hopfcalc_core::group::{abelianization, FiniteGroup, GroupSpec};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn ab(f: &[u64]) -> FgAbelianGroup {
    FgAbelianGroup::new(f.iter().copied(), 0)
}

#[test]
fn first_homology_is_abelianization() {
    for e in corpus() {
        let g = e.group.build().unwrap();
        let (_, inv) = abelianization(&g).unwrap();
        assert_eq!(homology(&g, 1).unwrap(), inv, "{}", e.name);
    }
}

#[test]
fn boundaries_compose_to_zero_on_corpus() {
    for e in corpus()
        .iter()
        .filter(|e| e.group.build().unwrap().order() <= 8)
    {
        let g = e.group.build().unwrap();
        for n in 1..=3 {
            let p = bar_boundary(&g, n + 1)
                .unwrap()
                .mul(&bar_boundary(&g, n).unwrap());
            assert!(p.is_zero(), "{} degree {n}", e.name);
        }
    }
}

#[test]
fn schur_multipliers_of_small_groups() {
    let cases: &[(&str, &[u64])] = &[
        ("C12", &[]),
        ("C2xC4", &[2]),
        ("C3xC3", &[3]),
        ("D4", &[2]),
        ("Q8", &[]),
        ("S3", &[]),
        ("A4", &[2]),
        ("C2xC2xC2", &[2, 2, 2]),
    ];
    for (name, expected) in cases {
        let g = GroupSpec::Named(name.to_string()).build().unwrap();
        assert_eq!(homology(&g, 2).unwrap(), ab(expected), "{name}");
    }
}

#[test]
fn third_homology_of_small_groups() {
    // cyclic groups: H_3(Z/n) = Z/n
    for n in 2..=6 {
        assert_eq!(
            homology(&FiniteGroup::cyclic(n), 3).unwrap(),
            FgAbelianGroup::cyclic(n as u64)
        );
    }
    let v4 = GroupSpec::Named("V4".into()).build().unwrap();
    assert_eq!(homology(&v4, 3).unwrap(), ab(&[2, 2, 2]));
    let q8 = GroupSpec::Named("Q8".into()).build().unwrap();
    assert_eq!(homology(&q8, 3).unwrap(), ab(&[8]));
}

#[test]
fn homology_ignores_element_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for name in ["S3", "D4", "Q8", "C2xC4"] {
        let g = GroupSpec::Named(name.into()).build().unwrap();
        let mut perm: Vec<usize> = (1..g.order()).collect();
        perm.shuffle(&mut rng);
        perm.insert(0, 0);
        let (h, _) = g.relabel(&perm).unwrap();
        for n in 1..=3 {
            assert_eq!(
                homology(&g, n).unwrap(),
                homology(&h, n).unwrap(),
                "{name} degree {n}"
            );
        }
    }
}

#[test]
fn trivial_group_is_acyclic() {
    for n in 1..=4 {
        assert!(homology(&FiniteGroup::trivial(), n).unwrap().is_trivial());
    }
}
