//! The finite universe against the brute-force set oracle.

mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use common::brute;
use proptest::prelude::*;
use tdlc::engine::{self, Config, Universe};
use tdlc::finite::{endo_from_map, FiniteGroup, FiniteSubgroup, FiniteUniverse, ENDO_CAP};
use tdlc::index::Index;
use tdlc::properties::corpus;

/// Checks every engine quantity of `(u, e)` on every subgroup in `subs`;
/// returns the number of subgroups examined.
fn check_case(u: &FiniteUniverse, e: &tdlc::finite::FiniteEndo, subs: &[FiniteSubgroup], key: &str) -> usize {
    let cfg = Config::default();
    for s in subs {
        let set = brute::set(s);
        let d = engine::displacement_index(u, e, s).unwrap();
        assert_eq!(d, Index::from_u64(brute::displacement(e, &set) as u64), "{key}: displacement of {set:?}");
        let (plus, _) = engine::u_plus(u, e, s, &cfg).unwrap();
        assert_eq!(brute::set(&plus), brute::u_plus(e, &set), "{key}: U+ of {set:?}");
        let (minus, _) = engine::u_minus(u, e, s, &cfg).unwrap();
        assert_eq!(brute::set(&minus), brute::u_minus(e, &set), "{key}: U- of {set:?}");
        let (img, _) = u.image(e, s, &cfg).unwrap();
        assert_eq!(brute::set(&img), brute::image(e, &set), "{key}: image of {set:?}");
        let r = engine::check_tidy(u, e, s, &cfg).unwrap();
        assert_eq!(r.tidy(), brute::is_invariant(e, &set), "{key}: tidiness of {set:?}");
    }
    subs.len()
}

#[test]
fn subgroup_lattices_match_brute_force() {
    let c = corpus(16, 1, 0).unwrap();
    let mut seen = BTreeSet::new();
    for case in &c.cases {
        if !seen.insert(Arc::as_ptr(&case.universe) as usize) {
            continue;
        }
        let g = case.universe.group();
        let ours: BTreeSet<brute::Set> = case.subgroups.iter().map(brute::set).collect();
        assert_eq!(ours, brute::subgroups(g), "{}", case.key);
    }
    assert!(seen.len() >= 20, "only {} groups", seen.len());
}

#[test]
fn engine_matches_brute_force_on_catalog() {
    let c = corpus(12, ENDO_CAP, 0).unwrap();
    assert!(c.exhaustive);
    let n: usize = c.cases.iter().map(|k| check_case(&k.universe, &k.endo, &k.subgroups, &k.key)).sum();
    eprintln!("{} cases, {n} subgroup checks", c.cases.len());
}

#[test]
fn scale_is_one_on_finite_groups() {
    let cfg = Config::default();
    for k in corpus(8, ENDO_CAP, 0).unwrap().cases.iter().step_by(7) {
        let whole = k.universe.whole_group();
        let r = engine::scale(&*k.universe, &k.endo, &whole, &cfg).unwrap();
        assert!(r.scale.is_one(), "{}", k.key);
    }
}

/// A linear endomorphism of `C_p^3` from a 3×3 matrix (columns are images).
fn linear(p: u32, m: &[u32]) -> (FiniteUniverse, tdlc::finite::FiniteEndo) {
    let g = FiniteGroup::cyclic_product(&[p, p, p]).unwrap();
    let basis: Vec<u32> =
        (0..3).map(|i| g.from_coords(&(0..3).map(|j| u32::from(i == j)).collect::<Vec<_>>()).unwrap()).collect();
    let images: Vec<u32> = (0..3).map(|i| g.from_coords(&m[3 * i..3 * i + 3]).unwrap()).collect();
    let e = endo_from_map(&g, &basis, &images).unwrap();
    (FiniteUniverse::new(g), e)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn linear_maps_of_cube_match_brute_force(
        p in prop::sample::select(vec![2u32, 3]),
        raw in prop::collection::vec(0u32..3, 9),
    ) {
        let m: Vec<u32> = raw.iter().map(|x| x % p).collect();
        let (u, e) = linear(p, &m);
        let subs = u.subgroups().unwrap();
        check_case(&u, &e, &subs, &format!("p={p} m={m:?}"));
    }

    #[test]
    fn powers_preserve_invariance(
        raw in prop::collection::vec(0u32..2, 9),
        k in 1usize..5,
    ) {
        // An α-invariant subgroup is αᵏ-invariant, so tidiness passes to powers.
        let (u, e) = linear(2, &raw);
        let ek = e.power(u.group(), k);
        let cfg = Config::default();
        for s in u.subgroups().unwrap() {
            if engine::check_tidy(&u, &e, &s, &cfg).unwrap().tidy() {
                prop_assert!(engine::check_tidy(&u, &ek, &s, &cfg).unwrap().tidy());
            }
        }
    }
}
