use std::sync::Arc;

use num_bigint::BigUint;
use ornlat::count::{count_popk_images, gf_coefficients};
use ornlat::image::{
    find_hugs, in_pop_image, in_pop_image_by_containing_ornaments, in_popk_image_tamari, pop_preimage,
    popk_necessary, popk_preimage_chain, tamari_popk_preimage,
};
use ornlat::io::{from_json, to_json};
use ornlat::lattice::{enumerate_lattice_with, relabel, LatticeGraph, DEFAULT_LATTICE_CAP};
use ornlat::rank::{forward_orbit, max_orbit_size};
use ornlat::tree::enumerate_plane_trees;
use ornlat::{Execution, GSequence, Ornamentation, RootedPlaneTree};
use proptest::prelude::*;
use proptest::sample::Index;

fn lattice(tree: &Arc<RootedPlaneTree>) -> LatticeGraph {
    enumerate_lattice_with(tree, DEFAULT_LATTICE_CAP, Execution::Sequential).unwrap()
}

/// A random tree with 1..=max nodes and its lattice.
fn tree_and_lattice(max: usize) -> impl Strategy<Value = (Arc<RootedPlaneTree>, Arc<LatticeGraph>)> {
    (1..=max, any::<Index>()).prop_map(|(n, idx)| {
        let trees = enumerate_plane_trees(n).unwrap();
        let t = Arc::new(idx.get(&trees).clone());
        let l = Arc::new(lattice(&t));
        (t, l)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pop_formula_is_meet_of_covers((_, l) in tree_and_lattice(6), i in any::<Index>()) {
        let d = i.get(l.elements());
        let p = d.pop();
        prop_assert_eq!(&p, &d.pop_by_meet_of_covers());
        prop_assert!(p.leq(d));
        prop_assert!(l.index_of(&p).is_some());
    }

    #[test]
    fn meet_and_join_match_search((_, l) in tree_and_lattice(5), i in any::<Index>(), j in any::<Index>()) {
        let (a, b) = (i.get(l.elements()), j.get(l.elements()));
        let m = a.meet(b).unwrap();
        prop_assert_eq!(&m, &l.meet_by_search(a, b).unwrap());
        let s = l.join(a, b).unwrap();
        prop_assert!(a.leq(&s) && b.leq(&s));
        prop_assert_eq!(l.join(b, a).unwrap(), s);
    }

    #[test]
    fn hug_criteria_agree((_, l) in tree_and_lattice(6), i in any::<Index>()) {
        let d = i.get(l.elements());
        let member = in_pop_image(d);
        prop_assert_eq!(member, in_pop_image_by_containing_ornaments(d));
        prop_assert_eq!(member, find_hugs(d).is_empty());
        prop_assert_eq!(member, l.brute_popk_image(1).contains(d));
        if member {
            prop_assert_eq!(&pop_preimage(d).unwrap().pop(), d);
        } else {
            prop_assert!(pop_preimage(d).is_err());
        }
    }

    #[test]
    fn image_members_pass_necessary_conditions((_, l) in tree_and_lattice(5), k in 0usize..4, i in any::<Index>()) {
        let image = l.brute_popk_image(k);
        let d = i.get(&image);
        prop_assert!(popk_necessary(d, k).unwrap().passed());
    }

    #[test]
    fn orbits_never_exceed_the_maximum((t, l) in tree_and_lattice(6), i in any::<Index>()) {
        let d = i.get(l.elements());
        let orbit = forward_orbit(d).unwrap();
        prop_assert!(orbit.len() <= max_orbit_size(&t).unwrap());
        prop_assert!(orbit.windows(2).all(|w| w[1].weight() < w[0].weight()));
    }

    #[test]
    fn json_round_trip((_, l) in tree_and_lattice(6), i in any::<Index>()) {
        let d = i.get(l.elements());
        prop_assert_eq!(&from_json(&to_json(d)).unwrap(), d);
    }

    #[test]
    fn chain_preimages_map_back(n in 1usize..8, k in 1usize..5, i in any::<Index>()) {
        let t = Arc::new(RootedPlaneTree::chain(n).unwrap());
        let l = lattice(&t);
        let image = l.brute_popk_image(k);
        let d = i.get(&image);
        let g = GSequence::from_ornamentation(d).unwrap();
        prop_assert!(in_popk_image_tamari(&g, k));
        prop_assert_eq!(&popk_preimage_chain(&g, k).unwrap().pop_times(k), d);
        let step = tamari_popk_preimage(&g, k).unwrap();
        prop_assert_eq!(step.to_chain_ornamentation().pop_times(k - 1), d.clone());
    }
}

#[test]
fn sibling_order_does_not_matter() {
    for n in 1..=6 {
        for t in enumerate_plane_trees(n).unwrap() {
            let t = Arc::new(t);
            let (m, map) = t.mirrored();
            let m = Arc::new(m);
            let (lt, lm) = (lattice(&t), lattice(&m));
            assert_eq!(lt.len(), lm.len(), "{t}");
            assert_eq!(lt.hasse().len(), lm.hasse().len(), "{t}");
            assert_eq!(max_orbit_size(&t).unwrap(), max_orbit_size(&m).unwrap(), "{t}");
            for d in lt.elements() {
                let md = relabel(d, &map, &m).unwrap();
                assert_eq!(relabel(&d.pop(), &map, &m).unwrap(), md.pop(), "{t} {d}");
                assert_eq!(in_pop_image(d), in_pop_image(&md), "{t} {d}");
                assert_eq!(forward_orbit(d).unwrap().len(), forward_orbit(&md).unwrap().len());
            }
        }
    }
}

#[test]
fn hasse_edges_are_covers() {
    for n in 1..=5 {
        for t in enumerate_plane_trees(n).unwrap() {
            let l = lattice(&Arc::new(t));
            let els = l.elements();
            let mut expected = Vec::new();
            for (i, a) in els.iter().enumerate() {
                for (j, b) in els.iter().enumerate() {
                    if i != j && a.leq(b) && !els.iter().any(|z| z != a && z != b && a.leq(z) && z.leq(b)) {
                        expected.push((i, j));
                    }
                }
            }
            assert_eq!(l.hasse(), &expected[..]);
        }
    }
}

#[test]
fn parallel_and_sequential_enumeration_agree() {
    for text in ["(((((())))))", "((()())(()))", "(()()()()())"] {
        let t = Arc::new(RootedPlaneTree::parse(text).unwrap());
        let a = enumerate_lattice_with(&t, DEFAULT_LATTICE_CAP, Execution::Sequential).unwrap();
        let b = enumerate_lattice_with(&t, DEFAULT_LATTICE_CAP, Execution::Parallel).unwrap();
        assert_eq!(a.elements(), b.elements());
        assert_eq!(a.hasse(), b.hasse());
    }
}

/// Power series solution of `F = 1 + x(1−x)F² / (1−x^{k+1})` by fixed-point
/// iteration, independent of the recurrence.
fn gf_by_iteration(k: usize, len: usize) -> Vec<BigUint> {
    use num_bigint::BigInt;
    let mut f = vec![BigInt::from(0); len];
    for _ in 0..=len {
        let mut sq = vec![BigInt::from(0); len];
        for i in 0..len {
            for j in 0..len - i {
                sq[i + j] += &f[i] * &f[j];
            }
        }
        // x(1−x)F²
        let mut num = vec![BigInt::from(0); len];
        for d in 1..len {
            num[d] += &sq[d - 1];
            if d >= 2 {
                num[d] -= &sq[d - 2];
            }
        }
        // divide by 1 − x^{k+1}
        let mut next = vec![BigInt::from(0); len];
        for d in 0..len {
            let mut c = num[d].clone();
            if d > k {
                c += &next[d - k - 1];
            }
            next[d] = c;
        }
        next[0] += 1;
        f = next;
    }
    f.into_iter().map(|c| c.try_into().unwrap()).collect()
}

#[test]
fn generating_function_fixed_point() {
    for k in 0..=5 {
        let expected = gf_by_iteration(k, 25);
        assert_eq!(gf_coefficients(k, 24).unwrap(), expected, "k={k}");
        assert_eq!(count_popk_images(24, k), expected[24]);
    }
}

#[test]
fn chain_counts_match_brute_force() {
    for n in 1..=8 {
        let l = lattice(&Arc::new(RootedPlaneTree::chain(n).unwrap()));
        for k in 0..=5 {
            assert_eq!(BigUint::from(l.brute_popk_image(k).len()), count_popk_images(n, k), "n={n} k={k}");
        }
    }
}

#[test]
fn worked_chain_image() {
    // the only hug-free elements of the 3-chain lattice
    let l = lattice(&Arc::new(RootedPlaneTree::chain(3).unwrap()));
    let members: Vec<String> = l.elements().iter().filter(|d| in_pop_image(d)).map(Ornamentation::label).collect();
    assert_eq!(members, ["[1,2,3]", "[2,2,3]"]);
}
