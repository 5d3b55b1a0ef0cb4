mod common;

use std::sync::Arc;

use common::*;
use proptest::prelude::*;
use subkit_core::fusion::{is_saturated, FusionBase, FusionSystem};
use subkit_core::group::{normalizer, p_part, prime_divisors, sylow_subgroup, Budget, Group};
use subkit_core::subnormal::{is_subnormal, normal_closure, s_restriction, subnormal_series};
use subkit_core::{Permutation, Subgroup};

fn arb_perm(n: usize) -> impl Strategy<Value = Vec<u32>> {
    Just((0..n as u32).collect::<Vec<u32>>()).prop_shuffle()
}

fn arb_group() -> impl Strategy<Value = Arc<Group>> {
    (3usize..=6)
        .prop_flat_map(|n| (Just(n), prop::collection::vec(arb_perm(n), 1..=3)))
        .prop_map(|(n, gens)| {
            let gens = gens
                .into_iter()
                .map(|v| Permutation::new(v).unwrap())
                .collect();
            Arc::new(Group::generate(n, gens, &Budget::default()).unwrap())
        })
}

fn arb_group_with_elems() -> impl Strategy<Value = (Arc<Group>, Vec<usize>)> {
    arb_group().prop_flat_map(|g| {
        let n = g.order();
        (Just(g), prop::collection::vec(0..n, 4))
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn group_axioms((g, xs) in arb_group_with_elems()) {
        let (a, b, c) = (xs[0], xs[1], xs[2]);
        prop_assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
        prop_assert_eq!(g.mul(a, g.inv(a)), g.identity());
        prop_assert_eq!(g.mul(g.identity(), a), a);
        prop_assert_eq!(g.order() % g.element_order(a), 0);
        let raw_gens: Vec<Vec<u32>> = g.generators().iter().map(|p| p.images().to_vec()).collect();
        prop_assert_eq!(raw_closure(&raw_gens, g.degree()).len(), g.order());
    }

    #[test]
    fn joins_and_meets((g, xs) in arb_group_with_elems()) {
        let a = Subgroup::generated(&g, &[xs[0]]);
        let b = Subgroup::generated(&g, &[xs[1], xs[2]]);
        let c = Subgroup::generated(&g, &[xs[3]]);
        prop_assert_eq!(a.join(&b), b.join(&a));
        prop_assert_eq!(a.join(&b).join(&c), a.join(&b.join(&c)));
        let m = a.intersection(&b);
        prop_assert!(m.is_subgroup_of(&a) && m.is_subgroup_of(&b));
        prop_assert_eq!(a.order() % m.order(), 0);
    }

    #[test]
    fn sylow_subgroups(g in arb_group()) {
        let whole = g.as_subgroup();
        for p in prime_divisors(g.order()) {
            let s = sylow_subgroup(&whole, p);
            prop_assert_eq!(s.order(), p_part(g.order(), p));
            prop_assert!(s.is_p_group(p));
            prop_assert_eq!(g.order() / normalizer(&whole, &s).order() % p, 1);
        }
    }

    #[test]
    fn closures_and_series((g, xs) in arb_group_with_elems()) {
        let whole = g.as_subgroup();
        let h = Subgroup::generated(&g, &[xs[0], xs[1]]);
        let c = normal_closure(&whole, &h).unwrap();
        prop_assert!(h.is_subgroup_of(&c) && c.is_normal_in(&whole));
        let v = subnormal_series(&whole, &h).unwrap();
        prop_assert_eq!(v.is_subnormal(), is_subnormal(&whole, &h));
        if let Some(series) = v.series() {
            prop_assert!(series.verify(&whole, &h));
        }
    }

    #[test]
    fn restriction_shrinks_along_words((g, xs) in arb_group_with_elems(), p_idx in 0usize..3) {
        let whole = g.as_subgroup();
        prop_assume!(g.order() > 1);
        let primes = prime_divisors(g.order());
        let p = primes[p_idx % primes.len()];
        let s = sylow_subgroup(&whole, p);
        let sm = members(&s);
        let word = &xs[..3];
        let sw = s_restriction(&whole, &s, word).unwrap();
        let raw_word: Vec<Vec<u32>> = word.iter().map(|&x| raw(&g, x)).collect();
        prop_assert_eq!(members(&sw), raw_restriction(&sm, &raw_word));
        let prod = g.product(word);
        prop_assert!(sw.is_subgroup_of(&s_restriction(&whole, &s, &[prod]).unwrap()));
        prop_assert!(sw.is_subgroup_of(&s_restriction(&whole, &s, &word[..2]).unwrap()));
    }

    #[test]
    fn realized_fusion_is_closed_and_saturated(g in arb_group()) {
        let whole = g.as_subgroup();
        prop_assume!(g.order() > 1);
        let p = prime_divisors(g.order())[0];
        let s = sylow_subgroup(&whole, p);
        prop_assume!(s.order() <= 16);
        let base = FusionBase::new(&s, p, &Budget::default()).unwrap();
        let f = base.realized(&whole, base.full()).unwrap();
        let again = FusionSystem::generate(&base, base.full(), &[&f]).unwrap();
        prop_assert_eq!(&again, &f.without_realizer());
        prop_assert!(is_saturated(&f).is_saturated());
        for q in f.subgroups() {
            for m in f.homs_from(q) {
                prop_assert!(f.contains(&m.inverse()) || m.image() != q);
                for r in base.subgroups_of(q) {
                    prop_assert!(f.contains(&m.restrict(r)));
                }
            }
        }
    }
}
