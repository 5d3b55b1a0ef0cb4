//! `A4 × A4` at `p = 2`: two normal subsystems whose join is not saturated
//! and which have no smallest saturated overlying subsystem, while their
//! bracket is the whole system.

use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::Result;
use crate::fusion::{
    bracket_by_reduction, bracket_subnormal, is_saturated, FusionBase, FusionSystem,
    SaturationVerdict, SubsystemHandle,
};
use crate::group::{Budget, Group, Subgroup};
use crate::perm::Permutation;
use crate::report::{CheckReport, Status};

pub const GROUP_NAME: &str = "A4xA4";

/// The groups of the example, all inside `A4 × A4` on `{0..3} ⊔ {4..7}`.
#[derive(Clone, Debug)]
pub struct ExampleE1 {
    pub g: Subgroup,
    pub g1: Subgroup,
    pub g2: Subgroup,
    pub t1: Subgroup,
    pub t2: Subgroup,
    pub s: Subgroup,
    pub n1: Subgroup,
    pub n2: Subgroup,
    pub d1: usize,
    pub d2: usize,
}

fn cyc(cycles: &[&[u32]]) -> Permutation {
    Permutation::from_cycles(8, cycles).expect("valid cycles on 8 points")
}

impl ExampleE1 {
    pub fn build() -> Result<ExampleE1> {
        let gens = vec![
            cyc(&[&[0, 1, 2]]),
            cyc(&[&[1, 2, 3]]),
            cyc(&[&[4, 5, 6]]),
            cyc(&[&[5, 6, 7]]),
        ];
        let amb = Arc::new(Group::generate(8, gens, &Budget::from_env())?.with_name(GROUP_NAME));
        let sub = |perms: &[Permutation]| Subgroup::from_perms(&amb, perms);
        let g = amb.as_subgroup();
        let g1 = sub(&[cyc(&[&[0, 1, 2]]), cyc(&[&[1, 2, 3]])])?;
        let g2 = sub(&[cyc(&[&[4, 5, 6]]), cyc(&[&[5, 6, 7]])])?;
        let t1 = sub(&[cyc(&[&[0, 1], &[2, 3]]), cyc(&[&[0, 2], &[1, 3]])])?;
        let t2 = sub(&[cyc(&[&[4, 5], &[6, 7]]), cyc(&[&[4, 6], &[5, 7]])])?;
        let s = t1.join(&t2);
        let d1 = amb.index_of(&cyc(&[&[0, 1, 2]])).expect("d1 in G");
        let d2 = amb.index_of(&cyc(&[&[4, 5, 6]])).expect("d2 in G");
        let x1 = amb.mul(d1, d2);
        let x2 = amb.mul(d1, amb.mul(d2, d2));
        let n1 = s.join(&Subgroup::generated(&amb, &[x1]));
        let n2 = s.join(&Subgroup::generated(&amb, &[x2]));
        Ok(ExampleE1 {
            g,
            g1,
            g2,
            t1,
            t2,
            s,
            n1,
            n2,
            d1,
            d2,
        })
    }
}

fn report(claim: usize, ok: bool, mut facts: Value) -> CheckReport {
    facts["instance"] = json!({ "claim": claim });
    let status = if ok { Status::Pass } else { Status::Fail };
    CheckReport::new(GROUP_NAME, "example_e1", Some(2), status, facts)
}

/// Evaluates the five claims; each report passes exactly when its claim holds.
pub fn scenario_example_e1() -> Result<Vec<CheckReport>> {
    let ex = ExampleE1::build()?;
    let base = FusionBase::new(&ex.s, 2, &Budget::from_env())?;
    let full = base.full();
    let t1 = base.mask_of(&ex.t1);
    let t2 = base.mask_of(&ex.t2);
    let f = base.realized(&ex.g, full)?;
    let e1 = base.realized(&ex.g1, t1)?;
    let e2 = base.realized(&ex.g2, t2)?;
    let mut out = Vec::new();

    // (1)
    let normal = ex.g1.is_normal_in(&ex.g) && ex.g2.is_normal_in(&ex.g);
    let meets = ex.g1.intersection(&ex.s) == ex.t1 && ex.g2.intersection(&ex.s) == ex.t2;
    out.push(report(
        1,
        normal && meets && ex.s.order() == 16,
        json!({
            "sylow_order": ex.s.order(),
            "g1_normal": ex.g1.is_normal_in(&ex.g),
            "g2_normal": ex.g2.is_normal_in(&ex.g),
            "t_i_is_g_i_meet_s": meets,
        }),
    ));

    // (2)
    let join = FusionSystem::generate(&base, full, &[&e1, &e2])?;
    let verdict = is_saturated(&join);
    let aut_s = join.aut(full).len();
    let (sat_ok, failure) = match &verdict {
        SaturationVerdict::NotSaturated(fail) => (
            true,
            json!({
                "axiom": fail.axiom.name(),
                "subgroup_order": fail.subgroup.count_ones(),
                "extension_target_order": fail.extension_target.map(|m| m.count_ones()),
                "extension_target_is_s": fail.extension_target == Some(full),
            }),
        ),
        SaturationVerdict::Saturated => (false, Value::Null),
    };
    out.push(report(
        2,
        sat_ok && aut_s == 1,
        json!({
            "saturated": verdict.is_saturated(),
            "failure": failure,
            "aut_s_order": aut_s,
        }),
    ));

    // (3)
    let dd1 = base.realized(&ex.n1, full)?;
    let dd2 = base.realized(&ex.n2, full)?;
    let meet = dd1.intersection(&dd2)?;
    let contained = e1.is_subsystem_of(&meet) && e2.is_subsystem_of(&meet);
    let n_normal = ex.n1.is_normal_in(&ex.g) && ex.n2.is_normal_in(&ex.g);
    out.push(report(
        3,
        contained && n_normal && ex.n1.order() == 48 && ex.n2.order() == 48 && ex.n1 != ex.n2,
        json!({
            "n1_order": ex.n1.order(),
            "n2_order": ex.n2.order(),
            "n_i_normal": n_normal,
            "e_i_in_meet": contained,
        }),
    ));

    // (4) Aut_{E1}(T1) has order 3 and none of its nontrivial members
    // extends to N_φ = S inside D1 ∩ D2, whose only automorphism of S is 1.
    let aut_meet_s = meet.aut(full).len();
    let aut_e1 = e1.aut(t1);
    let mut certificate = Vec::new();
    for phi in aut_e1.iter().filter(|m| !m.is_identity()) {
        let n_phi = base.normalizer_in(full, t1);
        let extends = meet.homs_from(n_phi).any(|psi| psi.agrees_with(phi, t1));
        certificate.push(json!({
            "n_phi_is_s": n_phi == full,
            "extends": extends,
        }));
    }
    let cert_ok = certificate
        .iter()
        .all(|c| c["n_phi_is_s"] == json!(true) && c["extends"] == json!(false));
    out.push(report(
        4,
        aut_meet_s == 1 && aut_e1.len() == 3 && cert_ok && certificate.len() == 2,
        json!({
            "aut_meet_s_order": aut_meet_s,
            "aut_e1_t1_order": aut_e1.len(),
            "non_extendable": certificate,
        }),
    ));

    // (5)
    let h1 = SubsystemHandle::realized(&f, &ex.g1)?;
    let h2 = SubsystemHandle::realized(&f, &ex.g2)?;
    let bracket = bracket_subnormal(&f, &[h1, h2])?;
    let by_join = bracket.handle.system() == &f;
    let by_reduction = bracket_by_reduction(&f, &ex.g1, &ex.g2)? == f;
    out.push(report(
        5,
        by_join && by_reduction,
        json!({
            "join_route_equals_f": by_join,
            "reduction_route_equals_f": by_reduction,
            "f_morphisms": f.morphism_count(),
        }),
    ));
    Ok(out)
}
