mod common;

use std::collections::BTreeSet;

use common::*;
use subkit_core::corpus::{load_corpus, load_corpus_with};
use subkit_core::group::*;
use subkit_core::{Permutation, Subgroup, SubkitError};

#[test]
fn generation_examples() {
    let g = group_from_generators(4, vec![]).unwrap();
    assert_eq!(g.order(), 1);
    assert_eq!(s4().order(), 24);
    assert_eq!(a4xa4().order(), 144);
    let bad = Permutation::new(vec![0, 0, 1]);
    assert!(matches!(bad, Err(SubkitError::MalformedPermutation(_))));
}

#[test]
fn enumeration_matches_raw_closure() {
    for e in corpus() {
        let raw: Vec<Vec<u32>> = e
            .group
            .generators()
            .iter()
            .map(|p| p.images().to_vec())
            .collect();
        let oracle = raw_closure(&raw, e.group.degree());
        let ours: BTreeSet<Vec<u32>> = e
            .group
            .elements()
            .iter()
            .map(|p| p.images().to_vec())
            .collect();
        assert_eq!(ours, oracle, "{}", e.name);
        // Canonical order is lexicographic on image arrays.
        let listed: Vec<Vec<u32>> = e
            .group
            .elements()
            .iter()
            .map(|p| p.images().to_vec())
            .collect();
        assert!(listed.windows(2).all(|w| w[0] < w[1]));
        assert!(e.group.element(e.group.identity()).is_identity());
    }
}

#[test]
fn corpus_orders() {
    let expected = [
        ("S4", 24),
        ("A4", 12),
        ("D8", 8),
        ("Q8", 8),
        ("SL(2,3)", 24),
        ("S3xS3", 36),
        ("A4xA4", 144),
        ("S5", 120),
        ("C3:C4", 12),
        ("C5:C4", 20),
        ("S3xC3", 18),
    ];
    let c = corpus();
    assert_eq!(c.len(), expected.len());
    for (name, order) in expected {
        let e = c.iter().find(|e| e.name == name).unwrap();
        assert_eq!(e.group.order(), order, "{name}");
    }
}

#[test]
fn quaternion_and_sl23_structure() {
    // Q8: one involution; SL(2,3): one involution and Sylow 2-subgroup Q8.
    for name in ["Q8", "SL(2,3)"] {
        let g = entry(name).group;
        let involutions = (0..g.order()).filter(|&x| g.element_order(x) == 2).count();
        assert_eq!(involutions, 1, "{name}");
    }
    let g = entry("SL(2,3)").whole();
    let s = sylow_subgroup(&g, 2);
    assert_eq!(s.order(), 8);
    assert!(!s.is_abelian());
    // C3:C4 has a unique involution and a cyclic Sylow 2-subgroup.
    let g = entry("C3:C4").group;
    assert_eq!((0..12).filter(|&x| g.element_order(x) == 2).count(), 1);
    assert!((0..12).any(|x| g.element_order(x) == 4));
}

#[test]
fn join_examples() {
    let g = s4();
    assert!(subgroup_join(&g, &[]).unwrap().is_trivial());
    let h1 = sub(&g, &[&[&[0, 1], &[2, 3]]]);
    let h2 = sub(&g, &[&[&[0, 2], &[1, 3]]]);
    let v = subgroup_join(&g, &[h1.clone(), h2.clone()]).unwrap();
    assert_eq!(v.order(), 4);
    assert_eq!(v, subgroup_join(&g, &[h2, h1]).unwrap());
    let other = a4xa4();
    assert!(matches!(
        subgroup_join(&g, &[Subgroup::whole(&other)]),
        Err(SubkitError::AmbientMismatch(_))
    ));
    let g = a4xa4();
    let g1 = sub(&g, &[&[&[0, 1, 2]], &[&[1, 2, 3]]]);
    let g2 = sub(&g, &[&[&[4, 5, 6]], &[&[5, 6, 7]]]);
    assert_eq!(subgroup_join(&g, &[g1, g2]).unwrap().order(), 144);
}

#[test]
fn sylow_examples() {
    let g = s4().as_subgroup();
    assert_eq!(sylow_subgroup(&g, 2).order(), 8);
    assert!(sylow_subgroup(&g, 5).is_trivial());
    let g = a4xa4();
    let s = sylow_subgroup(&g.as_subgroup(), 2);
    let t = sub(
        &g,
        &[
            &[&[0, 1], &[2, 3]],
            &[&[0, 2], &[1, 3]],
            &[&[4, 5], &[6, 7]],
            &[&[4, 6], &[5, 7]],
        ],
    );
    assert_eq!(s, t);
}

#[test]
fn sylow_order_and_conjugacy_over_corpus() {
    for e in corpus() {
        let g = e.whole();
        for &p in &e.primes {
            let s = sylow_subgroup(&g, p);
            assert_eq!(s.order(), p_part(g.order(), p));
            // Every p-subgroup of a conjugate Sylow lands in S after conjugation.
            let x = (0..g.order())
                .find(|&x| !s.is_normalized_by(x))
                .unwrap_or(0);
            let other = s.conjugate(x);
            for q in enumerate_subgroups(&other, &Budget::default()).unwrap() {
                assert!((0..g.order()).any(|y| q.conjugate(y).is_subgroup_of(&s)));
            }
        }
    }
}

#[test]
fn normalizer_centralizer_examples() {
    let g = s4();
    let gs = g.as_subgroup();
    let c3 = sub(&g, &[&[&[0, 1, 2]]]);
    let (n, c) = normalizer_centralizer(&gs, &c3).unwrap();
    assert_eq!((n.order(), c.order()), (6, 3));
    let (n, _) = normalizer_centralizer(&gs, &gs).unwrap();
    assert_eq!(n, gs);
    let (_, c) = normalizer_centralizer(&gs, &Subgroup::trivial(&g)).unwrap();
    assert_eq!(c, gs);
    let g = a4xa4();
    let g1 = sub(&g, &[&[&[0, 1, 2]], &[&[1, 2, 3]]]);
    let g2 = sub(&g, &[&[&[4, 5, 6]], &[&[5, 6, 7]]]);
    assert_eq!(centralizer(&g.as_subgroup(), &g1), g2);
}

#[test]
fn normalizer_matches_raw_scan() {
    let g = s4();
    for x in 0..24 {
        let h = Subgroup::generated(&g, &[x]);
        let hm = members(&h);
        let (n, c) = normalizer_centralizer(&g.as_subgroup(), &h).unwrap();
        assert!(c.is_subgroup_of(&n) && h.is_normal_in(&n));
        let raw_n: BTreeSet<Vec<u32>> = g
            .elements()
            .iter()
            .map(|p| p.images().to_vec())
            .filter(|y| hm.iter().all(|z| hm.contains(&raw_conj(z, y))))
            .collect();
        assert_eq!(members(&n), raw_n);
    }
}

/// Number of subspaces of F_2^n, by Gaussian binomials.
fn subspace_count(n: u32) -> u64 {
    let q: u64 = 2;
    (0..=n)
        .map(|k| {
            let num: u64 = (0..k).map(|i| q.pow(n - i) - 1).product();
            let den: u64 = (0..k).map(|i| q.pow(k - i) - 1).product();
            num / den
        })
        .sum()
}

#[test]
fn subgroup_enumeration_counts() {
    let g = common::group(2, &[&[&[0, 1]]]);
    assert_eq!(
        enumerate_subgroups(&g.as_subgroup(), &Budget::default())
            .unwrap()
            .len(),
        2
    );
    let g = s4();
    let v4 = sub(&g, &[&[&[0, 1], &[2, 3]], &[&[0, 2], &[1, 3]]]);
    assert_eq!(
        enumerate_subgroups(&v4, &Budget::default()).unwrap().len(),
        5
    );
    let g = a4xa4();
    let s = sylow_subgroup(&g.as_subgroup(), 2);
    let subs = enumerate_subgroups(&s, &Budget::default()).unwrap();
    assert_eq!(subs.len() as u64, subspace_count(4));
    assert_eq!(subs.len(), 67);
    let distinct: BTreeSet<_> = subs.iter().map(members).collect();
    assert_eq!(distinct.len(), 67);
}

#[test]
fn budget_overrides() {
    let tight = Budget {
        max_elements: 100,
        ..Budget::default()
    };
    let e = load_corpus_with(
        &[subkit_core::corpus::shipped_corpus_dir().join("a4xa4.json")],
        &tight,
    );
    assert!(matches!(e, Err(SubkitError::BudgetExceeded { .. })));
}

#[test]
fn corpus_loading() {
    let empty: Vec<std::path::PathBuf> = Vec::new();
    assert!(load_corpus(&empty).unwrap().is_empty());
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{"name":"X","degree":3,"generators":[[0,1,2],[0,0,1]]}"#,
    )
    .unwrap();
    match load_corpus(&[&path]) {
        Err(SubkitError::Parse { field, .. }) => assert_eq!(field, "generators[1]"),
        other => panic!("{other:?}"),
    }
    let s4 = load_corpus(&[subkit_core::corpus::shipped_corpus_dir().join("s4.json")]).unwrap();
    assert_eq!(s4.len(), 1);
    assert_eq!(s4[0].group.order(), 24);
    assert_eq!(s4[0].subgroup("D8").unwrap().order(), 8);
}
