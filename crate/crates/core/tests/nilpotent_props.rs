use hopfcalc_core::nilpotent::{
    lyndon_words, witt_number, Collector, FreeNilGroup, NilWord, PcGroup, PcSubgroup,
};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_word(g: &FreeNilGroup, rng: &mut ChaCha8Rng) -> NilWord {
    let e: Vec<i64> = (0..g.len()).map(|_| rng.gen_range(-4..=4)).collect();
    g.word_i64(&e).unwrap()
}

/// A word built as a product of generator powers, so that higher coordinates
/// are genuinely produced by the arithmetic rather than sampled.
fn random_product(g: &FreeNilGroup, rng: &mut ChaCha8Rng, len: usize) -> NilWord {
    let mut acc = g.identity();
    for _ in 0..len {
        let x = g.generator(rng.gen_range(0..g.rank()));
        acc = acc.mul(&x.pow(rng.gen_range(-3i64..=3)));
    }
    acc
}

#[test]
fn associativity_on_random_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut count = 0;
    for d in 1..=3 {
        for c in 1..=5 {
            let g = FreeNilGroup::new(d, c).unwrap();
            for _ in 0..70 {
                let (u, v, w) = (
                    random_word(&g, &mut rng),
                    random_word(&g, &mut rng),
                    random_word(&g, &mut rng),
                );
                assert_eq!(u.mul(&v).mul(&w), u.mul(&v.mul(&w)), "F({d},{c})");
                count += 1;
            }
        }
    }
    assert!(count >= 1000);
}

#[test]
fn inverses_and_powers() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for (d, c) in [(2, 4), (3, 5), (4, 3)] {
        let g = FreeNilGroup::new(d, c).unwrap();
        for _ in 0..40 {
            let u = random_word(&g, &mut rng);
            assert!(u.mul(&u.inv()).is_identity());
            assert!(u.inv().mul(&u).is_identity());
            let n: i64 = rng.gen_range(-5..=5);
            let mut acc = g.identity();
            let step = if n >= 0 { u.clone() } else { u.inv() };
            for _ in 0..n.abs() {
                acc = acc.mul(&step);
            }
            assert_eq!(u.pow(n), acc);
        }
    }
}

#[test]
fn collection_matches_magnus_products() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for (d, c) in [(2, 3), (2, 5), (3, 4)] {
        let g = FreeNilGroup::new(d, c).unwrap();
        let col = Collector::new(&g).unwrap();
        for _ in 0..25 {
            let u = random_product(&g, &mut rng, 3);
            let v = random_product(&g, &mut rng, 3);
            assert_eq!(col.multiply(&u, &v).unwrap(), u.mul(&v), "F({d},{c})");
        }
    }
}

#[test]
fn truncation_is_a_homomorphism() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for (d, c) in [(2, 2), (2, 4), (3, 3)] {
        let hi = FreeNilGroup::new(d, c + 1).unwrap();
        let lo = FreeNilGroup::new(d, c).unwrap();
        for _ in 0..40 {
            let u = random_word(&hi, &mut rng);
            let v = random_word(&hi, &mut rng);
            let lhs = hi.truncate(&u.mul(&v), &lo).unwrap();
            let rhs = hi
                .truncate(&u, &lo)
                .unwrap()
                .mul(&hi.truncate(&v, &lo).unwrap());
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn basis_sizes_match_witt_numbers_and_lyndon_counts() {
    for d in 1..=3 {
        for c in 1..=5 {
            let g = FreeNilGroup::new(d, c).unwrap();
            for w in 1..=c {
                let words = lyndon_words(d, w)
                    .into_iter()
                    .filter(|x| x.len() == w)
                    .count();
                assert_eq!(g.layer(w).len(), witt_number(d, w));
                assert_eq!(g.layer(w).len(), words);
            }
        }
    }
}

#[test]
fn membership_is_sound_for_random_products() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (d, c) in [(2, 3), (3, 3), (2, 4)] {
        let g = FreeNilGroup::new(d, c).unwrap();
        for _ in 0..6 {
            let gens: Vec<Vec<BigInt>> = (0..rng.gen_range(1..=3))
                .map(|_| random_product(&g, &mut rng, 2).into_coords())
                .collect();
            for s in [
                PcSubgroup::generated(&g, &gens),
                PcSubgroup::normal_closure(&g, &gens),
            ] {
                for x in s.sequence() {
                    assert!(s.sift(x).iter().all(|e| e == &BigInt::from(0)));
                }
                for _ in 0..10 {
                    let mut acc = g.identity().into_coords();
                    for _ in 0..4 {
                        let i = rng.gen_range(0..gens.len());
                        acc = g.mul_pow(&acc, &gens[i], &BigInt::from(rng.gen_range(-2i64..=2)));
                    }
                    assert!(s.contains(&acc));
                    let k = s.coordinates(&acc).unwrap();
                    assert_eq!(s.element(&k), acc);
                }
                if s.is_normal() {
                    for x in s.sequence() {
                        for y in g.generators() {
                            assert!(s.contains(&g.mul(&g.mul(&g.inv(&y), x), &y)));
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn normal_closure_contains_conjugates_of_generators() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let g = FreeNilGroup::new(3, 3).unwrap();
    for _ in 0..5 {
        let r = random_product(&g, &mut rng, 3);
        let n = PcSubgroup::normal_closure(&g, &[r.clone().into_coords()]);
        assert!(n.is_normal());
        for _ in 0..10 {
            let h = random_product(&g, &mut rng, 4);
            assert!(n.contains_word(&r.conj(&h)));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn induced_sequences_are_generation_invariant(seed in any::<u64>(), ngens in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = FreeNilGroup::new(2, 3).unwrap();
        let gens: Vec<Vec<BigInt>> = (0..ngens).map(|_| random_product(&g, &mut rng, 2).into_coords()).collect();
        let s = PcSubgroup::generated(&g, &gens);
        // a second generating set for the same subgroup, by elementary
        // transformations g_i <- g_i g_j^e (i != j), inversions and a shuffle
        let mut other = gens.clone();
        for _ in 0..6 {
            let i = rng.gen_range(0..other.len());
            let j = rng.gen_range(0..other.len());
            if i == j {
                other[i] = g.inv(&other[i]);
            } else {
                let e = BigInt::from(rng.gen_range(-2i64..=2));
                other[i] = g.mul_pow(&other[i], &other[j], &e);
            }
        }
        other.reverse();
        let t = PcSubgroup::generated(&g, &other);
        prop_assert!(t.is_subgroup_of(&s) && s.is_subgroup_of(&t));
        let (rs, rt) = (s.reduced(), t.reduced());
        prop_assert_eq!(rs.sequence(), rt.sequence());
        // identical members inside a fixed exponent box
        for a in -2i64..=2 {
            for b in -2i64..=2 {
                for c in -2i64..=2 {
                    let x: Vec<BigInt> = [a, b, c, 1, 0].iter().map(|&v| BigInt::from(v)).collect();
                    prop_assert_eq!(s.contains(&x), t.contains(&x));
                }
            }
        }
    }

    #[test]
    fn magnus_roundtrip(coords in proptest::collection::vec(-20i64..20, 14)) {
        let g = FreeNilGroup::new(3, 3).unwrap();
        let w = g.word_i64(&coords).unwrap();
        let back = g.word(w.coords().to_vec()).unwrap();
        prop_assert_eq!(&w, &back);
        let s = g.magnus_series(&w);
        prop_assert_eq!(s[0].clone(), BigInt::from(1));
        // the linear part of the Magnus series is the abelian image
        prop_assert_eq!(&s[1..4], w.abelian_image());
    }
}
