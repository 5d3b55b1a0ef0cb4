use std::sync::Arc;

use subkit_core::corpus::{load_corpus, shipped_corpus_paths};
use subkit_core::group::{enumerate_subgroups, sylow_subgroup, Budget};
use subkit_core::locality::*;
use subkit_core::{Group, Permutation, Subgroup};

fn s4() -> (Arc<Group>, Subgroup) {
    let g = Group::generate(
        4,
        vec![
            Permutation::from_cycles(4, &[&[0, 1, 2, 3]]).unwrap(),
            Permutation::from_cycles(4, &[&[0, 1]]).unwrap(),
        ],
        &Budget::default(),
    )
    .unwrap();
    let g = Arc::new(g);
    let s = sylow_subgroup(&g.as_subgroup(), 2);
    (g, s)
}

#[test]
fn corpus_localities_pass_axioms() {
    let corpus = load_corpus(&shipped_corpus_paths()).unwrap();
    for entry in &corpus {
        let g = entry.whole();
        for &p in &entry.primes {
            let s = sylow_subgroup(&g, p);
            for (name, delta) in corpus_object_sets(&g, &s, p).unwrap() {
                let l = locality_from_group(&g, &s, &delta, DEFAULT_WORD_BOUND).unwrap();
                let v = l.check_axioms();
                assert!(v.passed(), "{} p={p} {name}: {v:?}", entry.name);
            }
        }
    }
}

#[test]
fn brute_force_agrees_on_s4() {
    let (g, s) = s4();
    let all = enumerate_subgroups(&s, &Budget::default()).unwrap();
    let l = locality_from_group(&g.as_subgroup(), &s, &all, 3).unwrap();
    assert!(check_partial_group(&l).passed());
    assert!(l.check_axioms().passed());
}

fn elem(g: &Group, cycles: &[&[u32]]) -> usize {
    g.index_of(&Permutation::from_cycles(g.degree(), cycles).unwrap())
        .unwrap()
}

fn gen(g: &Arc<Group>, gens: &[&[&[u32]]]) -> Subgroup {
    let ids: Vec<usize> = gens.iter().map(|c| elem(g, c)).collect();
    Subgroup::generated(g, &ids)
}

fn s4_all() -> (Arc<Group>, Locality) {
    let (g, s) = s4();
    let all = enumerate_subgroups(&s, &Budget::default()).unwrap();
    let l = locality_from_group(&g.as_subgroup(), &s, &all, DEFAULT_WORD_BOUND).unwrap();
    (g, l)
}

#[test]
fn full_object_set_gives_the_group() {
    let (g, l) = s4_all();
    assert_eq!(l.elements().len(), 24);
    let w = [elem(&g, &[&[0, 1]]), elem(&g, &[&[1, 2, 3]])];
    let d = word_domain(&l, &w).unwrap();
    assert!(d.in_domain);
    assert_eq!(d.product, Some(g.mul(w[0], w[1])));
}

#[test]
fn single_object_gives_the_normalizer() {
    let (g, s) = s4();
    let l = locality_from_group(&g.as_subgroup(), &s, std::slice::from_ref(&s), 4).unwrap();
    // L = N_G(S) = S when Δ = {S}.
    assert_eq!(l.elements().len(), 8);
    assert!(l.check_axioms().passed());
    let outside = (0..24).find(|&x| !s.contains(x)).unwrap();
    assert!(word_domain(&l, &[outside]).is_err());
}

#[test]
fn object_sets_are_validated() {
    let (g, s) = s4();
    let gs = g.as_subgroup();
    assert!(locality_from_group(&gs, &s, &[], 4).is_err());
    // Missing overgroups.
    let v = gen(&g, &[&[&[0, 1], &[2, 3]], &[&[0, 2], &[1, 3]]]);
    assert!(matches!(
        locality_from_group(&gs, &s, &[v], 4),
        Err(subkit_core::SubkitError::InvalidDelta(_))
    ));
    // Not closed under conjugation: ⟨(0 2)⟩ and its overgroups inside S,
    // but ⟨(1 3)⟩ is conjugate to it inside S.
    let all = enumerate_subgroups(&s, &Budget::default()).unwrap();
    let t02 = gen(&g, &[&[&[0, 2]]]);
    let above: Vec<Subgroup> = all.into_iter().filter(|q| t02.is_subgroup_of(q)).collect();
    assert!(matches!(
        locality_from_group(&gs, &s, &above, 4),
        Err(subkit_core::SubkitError::InvalidDelta(_))
    ));
}

#[test]
fn normality_classes() {
    let (g, l) = s4_all();
    let a4 = gen(&g, &[&[&[0, 1, 2]], &[&[1, 2, 3]]]);
    let v4 = gen(&g, &[&[&[0, 1], &[2, 3]], &[&[0, 2], &[1, 3]]]);
    let c2 = gen(&g, &[&[&[0, 1], &[2, 3]]]);
    let t = gen(&g, &[&[&[0, 1]]]);
    assert_eq!(
        partial_normality(&l, &a4.element_vec()).unwrap(),
        PartialNormality::Normal
    );
    assert_eq!(
        partial_normality(&l, &v4.element_vec()).unwrap(),
        PartialNormality::Normal
    );
    match partial_normality(&l, &c2.element_vec()).unwrap() {
        PartialNormality::Subnormal(chain) => {
            assert_eq!(chain.first().unwrap(), &c2.element_vec());
            assert_eq!(chain.last().unwrap().len(), 24);
        }
        other => panic!("{other:?}"),
    }
    assert_eq!(
        partial_normality(&l, &t.element_vec()).unwrap(),
        PartialNormality::Subgroup
    );
    let not_closed = vec![0, elem(&g, &[&[0, 1]]), elem(&g, &[&[1, 2]])];
    assert_eq!(
        partial_normality(&l, &not_closed).unwrap(),
        PartialNormality::NotSubgroup
    );
}

#[test]
fn split_matches_frattini() {
    let (g, l) = s4_all();
    let a4 = gen(&g, &[&[&[0, 1, 2]], &[&[1, 2, 3]]]);
    let (f, report) = locality_fusion_and_split(&l, &a4.element_vec()).unwrap();
    assert!(report.holds(), "{report:?}");
    assert_eq!(report.t.order(), 4);
    assert_eq!(f, l.fusion_system().unwrap());
    let gs = g.as_subgroup();
    for &(x, a, h) in &report.splits {
        let w = subkit_core::subnormal::frattini_split(&gs, l.sylow(), &a4, x).unwrap();
        assert!(w.holds(l.sylow()));
        let ours = word_domain(&l, &[a, h]).unwrap();
        assert_eq!(ours.s_w, w.restriction);
    }
}

#[test]
fn set_operations() {
    let (g, l) = s4_all();
    let v4 = gen(&g, &[&[&[0, 1], &[2, 3]], &[&[0, 2], &[1, 3]]]);
    let c3 = gen(&g, &[&[&[0, 1, 2]]]);
    let ops = partial_set_ops(&l, &v4.element_vec(), &c3.element_vec()).unwrap();
    assert_eq!(ops.product.len(), 12);
    assert_eq!(ops.normalizer.len(), 24);
    assert_eq!(ops.centralizer.len(), 4);
}

#[test]
fn linking_localities() {
    let (_, l) = s4_all();
    assert!(is_linking_locality(&l).unwrap().is_linking());
    let corpus = load_corpus(&shipped_corpus_paths()).unwrap();
    let e = corpus.iter().find(|e| e.name == "S3xC3").unwrap();
    let g = e.whole();
    let s = sylow_subgroup(&g, 3);
    let core = subkit_core::subnormal::p_core(&g, 3);
    let all = enumerate_subgroups(&s, &Budget::default()).unwrap();
    let delta: Vec<Subgroup> = all.into_iter().filter(|q| core.is_subgroup_of(q)).collect();
    let l = locality_from_group(&g, &s, &delta, 4).unwrap();
    assert!(is_linking_locality(&l).unwrap().is_linking());
}

#[test]
fn tables_detect_broken_axioms() {
    let (g, _) = s4();
    let c2 = gen(&g, &[&[&[0, 1]]]);
    let t = PartialGroupTable::from_group(&c2, 3).unwrap();
    assert!(check_partial_group(&t).passed());
    // Drop a suffix of a stored word.
    let broken = t.clone().without_word(&[1, 1]);
    assert!(!check_partial_group(&broken).passed());
    // Wrong product for a length-two word breaks contraction.
    let broken = t.clone().with_product(vec![1, 1], 1);
    let PartialGroupVerdict::Fail(v) = check_partial_group(&broken) else {
        panic!()
    };
    assert!(v.axiom == "contraction" || v.axiom == "inversion", "{v:?}");
    // Non-involutory inverse.
    let bad = PartialGroupTable::new(0, vec![0, 0], vec![(vec![], 0), (vec![0], 0), (vec![1], 1)])
        .unwrap();
    assert!(!check_partial_group(&bad).passed());
}

#[test]
fn small_object_sets() {
    let g = Arc::new(
        Group::generate(
            3,
            vec![
                Permutation::from_cycles(3, &[&[0, 1, 2]]).unwrap(),
                Permutation::from_cycles(3, &[&[0, 1]]).unwrap(),
            ],
            &Budget::default(),
        )
        .unwrap(),
    );
    let s = gen(&g, &[&[&[0, 1]]]);
    let l = locality_from_group(&g.as_subgroup(), &s, std::slice::from_ref(&s), 4).unwrap();
    assert_eq!(l.elements().len(), 2);
    assert!(l.check_axioms().passed());

    let t = Arc::new(Group::generate(3, vec![], &Budget::default()).unwrap());
    let one = t.as_subgroup();
    let l = locality_from_group(&one, &one, std::slice::from_ref(&one), 4).unwrap();
    assert_eq!(l.elements(), &[0]);
    assert!(l.check_axioms().passed());
}

#[test]
fn word_domains_match_group_restrictions() {
    let (g, l) = s4_all();
    let gs = g.as_subgroup();
    let d = word_domain(&l, &[]).unwrap();
    assert!(d.in_domain);
    assert_eq!(&d.s_w, l.sylow());
    for x in 0..24 {
        let d = word_domain(&l, &[x]).unwrap();
        let sx = subkit_core::subnormal::s_restriction(&gs, l.sylow(), &[x]).unwrap();
        assert_eq!(d.s_w, sx);
        assert_eq!(d.product, Some(x));
    }
    // Δ = {S}: a word leaving S is outside the domain.
    let (g, s) = s4();
    let l = locality_from_group(&g.as_subgroup(), &s, std::slice::from_ref(&s), 4).unwrap();
    let x = s.elements().find(|&x| x != 0).unwrap();
    assert!(word_domain(&l, &[x, x]).unwrap().in_domain);
}

#[test]
fn partial_normality_matches_group_normality() {
    let (g, l) = s4_all();
    let gs = g.as_subgroup();
    let mut subgroups = vec![Subgroup::trivial(&g)];
    for x in 0..24 {
        for y in 0..24 {
            let h = Subgroup::generated(&g, &[x, y]);
            if !subgroups.contains(&h) {
                subgroups.push(h);
            }
        }
    }
    assert_eq!(subgroups.len(), 30);
    for h in &subgroups {
        let class = partial_normality(&l, &h.element_vec()).unwrap();
        let normal = h.is_normal_in(&gs);
        let subnormal = subkit_core::subnormal::is_subnormal(&gs, h);
        match class {
            PartialNormality::Normal => assert!(normal),
            PartialNormality::Subnormal(_) => assert!(subnormal && !normal),
            PartialNormality::Subgroup => assert!(!subnormal),
            PartialNormality::NotSubgroup => panic!("{h:?}"),
        }
    }
    assert_eq!(
        partial_normality(&l, &[0]).unwrap(),
        PartialNormality::Normal
    );
    assert_eq!(
        partial_normality(&l, &gs.element_vec()).unwrap(),
        PartialNormality::Normal
    );
}

#[test]
fn locality_fusion_matches_group_fusion() {
    let corpus = load_corpus(&shipped_corpus_paths()).unwrap();
    for e in corpus.iter().filter(|e| e.group.order() <= 36) {
        let g = e.whole();
        for &p in &e.primes {
            let s = sylow_subgroup(&g, p);
            let all = enumerate_subgroups(&s, &Budget::default()).unwrap();
            let l = locality_from_group(&g, &s, &all, DEFAULT_WORD_BOUND).unwrap();
            let ours = l.fusion_system().unwrap();
            let theirs = subkit_core::fusion::fusion_from_group(&g, &s, p).unwrap();
            assert_eq!(ours.morphism_count(), theirs.morphism_count(), "{}", e.name);
            // Separate bases over the same S index it identically.
            assert_eq!(ours.base().lattice(), theirs.base().lattice());
            for q in ours.subgroups() {
                let a: Vec<_> = ours.homs_from(q).collect();
                let b: Vec<_> = theirs.homs_from(q).collect();
                assert_eq!(a, b);
            }
        }
    }
}

#[test]
fn split_on_s5() {
    let corpus = load_corpus(&shipped_corpus_paths()).unwrap();
    let e = corpus.iter().find(|e| e.name == "S5").unwrap();
    let g = e.whole();
    let s = sylow_subgroup(&g, 2);
    let all = enumerate_subgroups(&s, &Budget::default()).unwrap();
    let l = locality_from_group(&g, &s, &all, DEFAULT_WORD_BOUND).unwrap();
    let a5 = gen(&e.group, &[&[&[0, 1, 2]], &[&[1, 2, 3]], &[&[2, 3, 4]]]);
    let (_, rep) = locality_fusion_and_split(&l, &a5.element_vec()).unwrap();
    assert_eq!(rep.t.order(), 4);
    assert_eq!(rep.splits.len(), 120);
    assert!(rep.holds());
    // Trivial N: every g splits as (1, g).
    let (_, rep) = locality_fusion_and_split(&l, &[0]).unwrap();
    assert!(rep.holds());
    assert!(rep.splits.iter().all(|&(x, a, b)| a == 0 && b == x));
}

#[test]
fn centralizer_in_a4xa4() {
    let corpus = load_corpus(&shipped_corpus_paths()).unwrap();
    let e = corpus.iter().find(|e| e.name == "A4xA4").unwrap();
    let g = e.whole();
    let s = sylow_subgroup(&g, 2);
    let all = enumerate_subgroups(&s, &Budget::default()).unwrap();
    let l = locality_from_group(&g, &s, &all, DEFAULT_WORD_BOUND).unwrap();
    let g1 = e.subgroup("G1").unwrap();
    let g2 = e.subgroup("G2").unwrap();
    let ops = partial_set_ops(&l, &g1.element_vec(), &[0]).unwrap();
    assert_eq!(ops.centralizer, g2.element_vec());
    assert_eq!(ops.normalizer.len(), 144);
    assert_eq!(ops.product, g1.element_vec());
    let ops = partial_set_ops(&l, &[0], &g1.element_vec()).unwrap();
    assert_eq!(ops.centralizer.len(), 144);
}

#[test]
fn p_group_localities_are_linking() {
    let corpus = load_corpus(&shipped_corpus_paths()).unwrap();
    for e in corpus.iter().filter(|e| e.primes.len() == 1) {
        let g = e.whole();
        let p = e.primes[0];
        let all = enumerate_subgroups(&g, &Budget::default()).unwrap();
        let l = locality_from_group(&g, &g, &all, DEFAULT_WORD_BOUND).unwrap();
        assert!(
            is_linking_locality(&l).unwrap().is_linking(),
            "{} p={p}",
            e.name
        );
    }
}
