#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};
use std::sync::Arc;

use subkit_core::corpus::{load_corpus, shipped_corpus_paths, CorpusEntry};
use subkit_core::group::Budget;
use subkit_core::{Group, Permutation, Subgroup};

pub fn perm(degree: usize, cycles: &[&[u32]]) -> Permutation {
    Permutation::from_cycles(degree, cycles).unwrap()
}

pub fn group(degree: usize, gens: &[&[&[u32]]]) -> Arc<Group> {
    let gens = gens.iter().map(|c| perm(degree, c)).collect();
    Arc::new(Group::generate(degree, gens, &Budget::default()).unwrap())
}

pub fn s4() -> Arc<Group> {
    group(4, &[&[&[0, 1, 2, 3]], &[&[0, 1]]])
}

pub fn a4xa4() -> Arc<Group> {
    group(
        8,
        &[&[&[0, 1, 2]], &[&[1, 2, 3]], &[&[4, 5, 6]], &[&[5, 6, 7]]],
    )
}

pub fn elem(g: &Group, cycles: &[&[u32]]) -> usize {
    g.index_of(&perm(g.degree(), cycles)).unwrap()
}

pub fn sub(g: &Arc<Group>, gens: &[&[&[u32]]]) -> Subgroup {
    let perms: Vec<Permutation> = gens.iter().map(|c| perm(g.degree(), c)).collect();
    Subgroup::from_perms(g, &perms).unwrap()
}

pub fn corpus() -> Vec<CorpusEntry> {
    load_corpus(&shipped_corpus_paths()).unwrap()
}

pub fn entry(name: &str) -> CorpusEntry {
    corpus().into_iter().find(|e| e.name == name).unwrap()
}

/// Independent closure on raw image vectors: composes `a` then `b`.
pub fn raw_closure(gens: &[Vec<u32>], degree: usize) -> BTreeSet<Vec<u32>> {
    let id: Vec<u32> = (0..degree as u32).collect();
    let mut seen: HashSet<Vec<u32>> = HashSet::from([id.clone()]);
    let mut frontier = vec![id];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y: Vec<u32> = (0..degree).map(|i| g[x[i] as usize]).collect();
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    seen.into_iter().collect()
}

/// Images of `x^g = g⁻¹xg` on raw vectors, with composition left to right.
pub fn raw_conj(x: &[u32], g: &[u32]) -> Vec<u32> {
    let mut ginv = vec![0u32; g.len()];
    for (i, &gi) in g.iter().enumerate() {
        ginv[gi as usize] = i as u32;
    }
    (0..x.len())
        .map(|i| g[x[ginv[i] as usize] as usize])
        .collect()
}

pub fn members(h: &Subgroup) -> BTreeSet<Vec<u32>> {
    h.elements()
        .map(|e| h.ambient().element(e).images().to_vec())
        .collect()
}

/// `S_w` on raw image vectors: members of `s` whose staged conjugates stay in `s`.
pub fn raw_restriction(s: &BTreeSet<Vec<u32>>, word: &[Vec<u32>]) -> BTreeSet<Vec<u32>> {
    s.iter()
        .filter(|x| {
            let mut y = (*x).clone();
            word.iter().all(|f| {
                y = raw_conj(&y, f);
                s.contains(&y)
            })
        })
        .cloned()
        .collect()
}

pub fn raw(g: &Group, e: usize) -> Vec<u32> {
    g.element(e).images().to_vec()
}

/// Every subgroup of `g`, as joins of cyclic subgroups closed to a fixed point.
pub fn all_subgroups(g: &Arc<Group>) -> Vec<Subgroup> {
    let cyclic: Vec<Subgroup> = (0..g.order())
        .map(|x| Subgroup::generated(g, &[x]))
        .collect();
    let mut found: Vec<Subgroup> = vec![Subgroup::trivial(g)];
    let mut seen: HashSet<Vec<usize>> = HashSet::from([vec![0]]);
    let mut i = 0;
    while i < found.len() {
        let h = found[i].clone();
        for c in &cyclic {
            let j = h.join(c);
            if seen.insert(j.element_vec()) {
                found.push(j);
            }
        }
        i += 1;
    }
    found
}

/// Subnormal subgroups by closing `{G}` under "normal subgroup of a member",
/// with normality tested on raw permutations.
pub fn raw_subnormal(g: &Arc<Group>) -> BTreeSet<Vec<usize>> {
    let all = all_subgroups(g);
    let raw_normal = |h: &Subgroup, k: &Subgroup| {
        let hm = members(h);
        h.is_subgroup_of(k)
            && k.elements()
                .all(|y| hm.iter().all(|z| hm.contains(&raw_conj(z, &raw(g, y)))))
    };
    let mut out: BTreeSet<Vec<usize>> = BTreeSet::from([Subgroup::whole(g).element_vec()]);
    let mut frontier = vec![Subgroup::whole(g)];
    while let Some(k) = frontier.pop() {
        for h in &all {
            if !out.contains(&h.element_vec()) && raw_normal(h, &k) {
                out.insert(h.element_vec());
                frontier.push(h.clone());
            }
        }
    }
    out
}
