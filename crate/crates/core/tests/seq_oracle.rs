//! Sequence-universe operations against the dense GF(p) window oracle.

mod common;

use std::collections::BTreeMap;

use common::dense;
use proptest::prelude::*;
use tdlc::engine::{Config, Universe};
use tdlc::error::Error;
use tdlc::gf::Field;
use tdlc::index::IndexResult;
use tdlc::seq::endo::{BandedEndo, Tail};
use tdlc::seq::epc::{window_from, EpcSubgroup, Periodic};
use tdlc::seq::recognize::normalize;
use tdlc::seq::universe::SeqUniverse;
use tdlc::seq::vector::Sparse;

const LO: i64 = -8;
const HI: i64 = 32;

#[test]
fn fixture_operations_match_dense_windows() {
    let c = dense::compare_fixtures(LO, HI);
    assert!(c.failures.is_empty(), "{} of {} checks failed:\n{}", c.failures.len(), c.checks, c.failures.join("\n"));
    assert!(c.checks > 500, "only {} checks ran", c.checks);
}

#[test]
fn oracle_agrees_on_hand_examples() {
    let f = Field::new(2).unwrap();
    // Even coordinates vanish from 0 on.
    let s = EpcSubgroup {
        p: 2,
        base: 0,
        constraints: vec![],
        periodic: Some(Periodic { anchor: 0, period: 2, templates: vec![Sparse::unit(0)] }),
    };
    let w = dense::window(&s, 0, 6);
    assert_eq!(w.dim(), 3);
    assert!(w.contains(&Sparse::from_pairs(f, [(1, 1), (5, 1)]).to_dense(0, 6)));
    assert!(!w.contains(&Sparse::unit(2).to_dense(0, 6)));
    assert_eq!(dense::window(&EpcSubgroup::trivial(2), -3, 5).dim(), 0);
    assert_eq!(dense::window(&EpcSubgroup::power_series(2, 2), 0, 5).dim(), 3);
}

fn sparse(p: u32, lo: i64, coeffs: &[u32]) -> Sparse {
    Sparse::from_dense(lo, &coeffs.iter().map(|c| c % p).collect::<Vec<_>>())
}

prop_compose! {
    fn functional(p: u32, lo: i64, width: usize)(coeffs in prop::collection::vec(0..p, 1..=width)) -> Sparse {
        sparse(p, lo, &coeffs)
    }
}

fn subgroup(p: u32) -> impl Strategy<Value = EpcSubgroup> {
    (-3i64..=3).prop_flat_map(move |base| {
        let cons = prop::collection::vec((0i64..6, prop::collection::vec(0..p, 1..=3)), 0..3);
        let per =
            prop::option::of((1usize..=3, 0i64..4, prop::collection::vec(prop::collection::vec(0..p, 1..=3), 1..=2)));
        (cons, per).prop_map(move |(cons, per)| EpcSubgroup {
            p,
            base,
            constraints: cons.into_iter().map(|(o, c)| sparse(p, base + o, &c)).collect(),
            periodic: per.map(|(period, off, ts)| Periodic {
                anchor: base + off,
                period,
                templates: ts.iter().map(|c| sparse(p, base + off, c)).collect(),
            }),
        })
    })
}

/// Uniform banded endomorphisms with a nonzero up-tail and optionally a
/// down-tail, both of shift 1 or 2.
fn endo(p: u32) -> impl Strategy<Value = BandedEndo> {
    let tmpl = prop::collection::vec(0..p, 1..=3);
    (1i64..=2, -1i64..=1, tmpl.clone(), prop::option::of((1i64..=2, tmpl))).prop_filter_map(
        "zero up-tail",
        move |(s, off, up, down)| {
            let up = sparse(p, off, &up);
            if up.is_zero() {
                return None;
            }
            let down = down.map(|(s, d)| Tail::uniform(s, vec![sparse(p, -1 - s, &d)]));
            BandedEndo::new(p, 0, 0, BTreeMap::new(), Tail::uniform(s, vec![up]), down).ok()
        },
    )
}

fn cfg() -> Config {
    Config::default()
}

fn conclusive<T>(r: Result<T, Error>) -> Option<T> {
    match r {
        Ok(v) => Some(v),
        Err(Error::Capability(_) | Error::Inconclusive { .. }) => None,
        Err(e) => panic!("unexpected error: {e}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 96, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn windows_match_oracle(s in prop_oneof![subgroup(2), subgroup(3)]) {
        prop_assert_eq!(window_from(&s, LO, HI), dense::window(&s, LO, HI));
    }

    #[test]
    fn intersect_and_join_match_oracle(a in subgroup(2), b in subgroup(2)) {
        let u = SeqUniverse::new(2).unwrap();
        let i = u.intersect(&a, &b).unwrap();
        prop_assert_eq!(window_from(&i, LO, HI), dense::intersect(&a, &b, LO, HI));
        if let Some((j, _)) = conclusive(u.join(&a, &b, &cfg())) {
            prop_assert_eq!(window_from(&j, LO, HI), dense::join(&a, &b, LO, HI));
        }
    }

    #[test]
    fn image_and_preimage_match_oracle(e in endo(3), s in subgroup(3), amb in -3i64..=1) {
        let u = SeqUniverse::new(3).unwrap();
        let ambient = EpcSubgroup::power_series(3, amb);
        if let Some((img, _)) = conclusive(u.image(&e, &s, &cfg())) {
            prop_assert_eq!(window_from(&img, LO, HI), dense::image(&e, &s, LO, HI));
        }
        if let Some(pre) = conclusive(u.preimage(&e, &s, &ambient)) {
            prop_assert_eq!(window_from(&pre, LO, HI), dense::preimage(&e, &s, &ambient, LO, HI));
        }
    }

    #[test]
    fn image_preimage_round_trips(e in endo(2), s in subgroup(2)) {
        let u = SeqUniverse::new(2).unwrap();
        let ambient = EpcSubgroup::power_series(2, s.base);
        let Some((img, _)) = conclusive(u.image(&e, &s, &cfg())) else { return Ok(()) };
        // S ≤ α⁻¹(α(S)) within its own base, and α(α⁻¹(S) ∩ A) ≤ S.
        if let Some(back) = conclusive(u.preimage(&e, &img, &ambient)) {
            prop_assert!(u.contains(&back, &s).unwrap());
        }
        if let Some(pre) = conclusive(u.preimage(&e, &s, &ambient)) {
            if let Some((fwd, _)) = conclusive(u.image(&e, &pre, &cfg())) {
                prop_assert!(u.contains(&s, &fwd).unwrap());
            }
        }
    }

    #[test]
    fn index_is_multiplicative(a in subgroup(3), b in subgroup(3), c in subgroup(3)) {
        let u = SeqUniverse::new(3).unwrap();
        // A ≥ A∩B ≥ A∩B∩C.
        let ab = u.intersect(&a, &b).unwrap();
        let abc = u.intersect(&ab, &c).unwrap();
        let (IndexResult::Finite(x), IndexResult::Finite(y), IndexResult::Finite(z)) =
            (u.index(&a, &ab).unwrap(), u.index(&ab, &abc).unwrap(), u.index(&a, &abc).unwrap())
        else {
            return Ok(());
        };
        prop_assert_eq!(x.mul(&y), z.clone());
        // The window dimensions drop by at most the index exponent.
        let (wa, wab) = (dense::window(&a, LO, HI), dense::window(&ab, LO, HI));
        prop_assert!(wab.is_subspace_of(&wa));
        let (_, k) = x.exponent().expect("a power of p");
        prop_assert!((wa.dim() - wab.dim()) as u64 <= k);
    }

    #[test]
    fn normalize_is_idempotent_and_faithful(s in subgroup(2)) {
        let n = normalize(&s, 1024);
        prop_assert_eq!(&normalize(&n, 1024), &n);
        prop_assert_eq!(window_from(&n, LO, HI), dense::window(&s, LO, HI));
    }
}
