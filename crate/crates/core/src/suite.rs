//! Corpus sweeps: one [`CheckReport`] per checked instance.
//!
//! Instances are JSON objects naming subgroups by generator image arrays,
//! so a report's `witness.instance` can be evaluated again with [`replay`].

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};
use std::time::Instant;

use fixedbitset::FixedBitSet;
use serde_json::{json, Value};

use crate::corpus::CorpusEntry;
use crate::error::{Result, SubkitError};
use crate::fusion::{
    bracket_by_reduction, bracket_subnormal, hyperfocal_sides, is_saturated, product_subsystem,
    subsystem_stabilizer, FusionBase, FusionSystem, SaturationVerdict, SubsystemHandle,
    MAX_BASE_ORDER,
};
use crate::group::{normalizer, sylow_subgroup, Budget, Elem, Group, Subgroup};
use crate::locality::{
    corpus_object_sets, locality_from_group, Locality, PartialNormality, DEFAULT_WORD_BOUND,
};
use crate::perm::Permutation;
use crate::report::{CheckReport, Status};
use crate::subnormal::{
    frattini_split, normal_product_split, normal_subgroups, normal_subnormal_split,
    subnormal_series, subnormal_subgroups, SplitWitness, SubnormalVerdict,
};

pub const CHECKS: [&str; 10] = [
    "meierfrankenfeld",
    "wielandt",
    "tgroups",
    "bracket_prop",
    "splittings",
    "series",
    "locality",
    "hyperfocal",
    "saturation",
    "assoc",
];

/// Identities accepted by [`verify_identity`].
pub const IDENTITY_KINDS: [&str; 5] = [
    "tgroups",
    "bracket_prop",
    "hyperfocal_eq",
    "remark_product",
    "assoc",
];

#[derive(Clone, Debug, Default)]
pub struct SuiteOptions {
    pub prime: Option<usize>,
    /// Record wall-clock milliseconds; off by default so output is reproducible.
    pub timing: bool,
}

/// Per `(group, prime)` data shared by all checks.
pub struct Ctx<'a> {
    pub entry: &'a CorpusEntry,
    pub g: Subgroup,
    pub p: usize,
    pub s: Subgroup,
    pub subnormal: Vec<Subgroup>,
    pub normal: Vec<Subgroup>,
    fusion: Option<(Arc<FusionBase>, FusionSystem)>,
    full_locality: OnceLock<Option<Locality>>,
    subnormal_cache: std::sync::Mutex<HashMap<FixedBitSet, bool>>,
}

impl<'a> Ctx<'a> {
    pub fn new(entry: &'a CorpusEntry, p: usize) -> Result<Ctx<'a>> {
        let budget = Budget::from_env();
        let g = entry.whole();
        if !g.order().is_multiple_of(p) {
            return Err(SubkitError::PreconditionViolation(format!(
                "{p} does not divide |G| = {}",
                g.order()
            )));
        }
        let s = sylow_subgroup(&g, p);
        let subnormal = subnormal_subgroups(&g, &budget)?;
        let normal = {
            let mut n = normal_subgroups(&g);
            crate::group::sort_canonical(&mut n);
            n
        };
        let fusion = if s.order() <= MAX_BASE_ORDER {
            let base = FusionBase::new(&s, p, &budget)?;
            let f = base.realized(&g, base.full())?;
            Some((base, f))
        } else {
            None
        };
        Ok(Ctx {
            entry,
            g,
            p,
            s,
            subnormal,
            normal,
            fusion,
            full_locality: OnceLock::new(),
            subnormal_cache: Default::default(),
        })
    }

    fn amb(&self) -> &Arc<Group> {
        self.g.ambient()
    }

    fn fusion(&self) -> Result<&(Arc<FusionBase>, FusionSystem)> {
        self.fusion.as_ref().ok_or(SubkitError::BudgetExceeded {
            what: "Sylow order for fusion checks",
            limit: MAX_BASE_ORDER,
        })
    }

    fn is_subnormal(&self, h: &Subgroup) -> bool {
        let mut cache = self.subnormal_cache.lock().unwrap();
        *cache.entry(h.members().clone()).or_insert_with(|| {
            subnormal_series(&self.g, h).is_ok_and(|v| match v {
                SubnormalVerdict::Subnormal(series) => series.verify(&self.g, h),
                SubnormalVerdict::NotSubnormal { .. } => false,
            })
        })
    }

    fn full_locality(&self) -> Result<&Locality> {
        self.full_locality
            .get_or_init(|| {
                let (name, delta) = corpus_object_sets(&self.g, &self.s, self.p)
                    .ok()?
                    .into_iter()
                    .next()?;
                debug_assert_eq!(name, "all");
                locality_from_group(&self.g, &self.s, &delta, DEFAULT_WORD_BOUND).ok()
            })
            .as_ref()
            .ok_or_else(|| {
                SubkitError::PreconditionViolation("locality construction failed".into())
            })
    }
}

pub fn sub_json(h: &Subgroup) -> Value {
    Value::Array(h.gen_perms().iter().map(|p| json!(p.images())).collect())
}

fn elem_json(amb: &Group, e: Elem) -> Value {
    json!(amb.element(e).images())
}

fn perm_from(v: &Value, what: &str) -> Result<Permutation> {
    let images: Vec<u32> = serde_json::from_value(v.clone()).map_err(|e| SubkitError::Parse {
        file: "witness".into(),
        field: what.into(),
        reason: e.to_string(),
    })?;
    Permutation::new(images)
}

pub fn sub_from(amb: &Arc<Group>, v: &Value, what: &str) -> Result<Subgroup> {
    let gens = v.as_array().ok_or_else(|| SubkitError::Parse {
        file: "witness".into(),
        field: what.into(),
        reason: "expected an array of generators".into(),
    })?;
    let perms = gens
        .iter()
        .map(|p| perm_from(p, what))
        .collect::<Result<Vec<_>>>()?;
    Subgroup::from_perms(amb, &perms)
}

fn elem_from(amb: &Group, v: &Value, what: &str) -> Result<Elem> {
    let p = perm_from(v, what)?;
    amb.index_of(&p).ok_or_else(|| SubkitError::Parse {
        file: "witness".into(),
        field: what.into(),
        reason: "not an element of the group".into(),
    })
}

fn field<'v>(inst: &'v Value, key: &str) -> Result<&'v Value> {
    inst.get(key).ok_or_else(|| SubkitError::Parse {
        file: "witness".into(),
        field: format!("instance.{key}"),
        reason: "missing".into(),
    })
}

/// `{x ∈ S : x^{f₁}, x^{f₁f₂}, … ∈ S}`, evaluated on permutations.
fn staged_members(s: &Subgroup, word: &[Elem]) -> FixedBitSet {
    let amb = s.ambient();
    let mut out = FixedBitSet::with_capacity(amb.order());
    for x in s.elements() {
        let mut y = amb.element(x).clone();
        let ok = word.iter().all(|&f| {
            let fp = amb.element(f);
            y = fp.inverse().then(&y).then(fp);
            amb.index_of(&y).is_some_and(|e| s.contains(e))
        });
        if ok {
            out.insert(x);
        }
    }
    out
}

type Outcome = Result<(bool, Value)>;

fn evaluate(ctx: &Ctx, check: &str, inst: &Value, timing: bool) -> CheckReport {
    let start = Instant::now();
    let outcome: Outcome = match check {
        "meierfrankenfeld" => meierfrankenfeld(ctx, inst),
        "wielandt" => wielandt(ctx, inst),
        "tgroups" => tgroups(ctx, inst),
        "bracket_prop" => bracket_prop(ctx, inst),
        "splittings" => splittings(ctx, inst),
        "series" => series(ctx, inst),
        "locality" => locality(ctx, inst),
        "hyperfocal" => hyperfocal(ctx, inst),
        "saturation" => saturation(ctx, inst),
        "assoc" => assoc(ctx, inst),
        other => Err(SubkitError::PreconditionViolation(format!(
            "unknown check {other}"
        ))),
    };
    let mut witness = json!({ "instance": inst });
    let status = match outcome {
        Ok((true, _)) => Status::Pass,
        Ok((false, detail)) => {
            witness["detail"] = detail;
            Status::Fail
        }
        Err(SubkitError::BudgetExceeded { what, limit }) => {
            witness["detail"] = json!({ "budget": what, "limit": limit });
            Status::Skipped
        }
        Err(e) => {
            witness["detail"] = json!({ "error": e.to_string() });
            Status::Fail
        }
    };
    let mut r = CheckReport::new(&ctx.entry.name, check, Some(ctx.p), status, witness);
    if timing {
        r.ms = start.elapsed().as_millis() as u64;
    }
    r
}

fn pair(ctx: &Ctx, inst: &Value) -> Result<(Subgroup, Subgroup)> {
    Ok((
        sub_from(ctx.amb(), field(inst, "h1")?, "h1")?,
        sub_from(ctx.amb(), field(inst, "h2")?, "h2")?,
    ))
}

fn meierfrankenfeld(ctx: &Ctx, inst: &Value) -> Outcome {
    let (h1, h2) = pair(ctx, inst)?;
    let lhs = h1.join(&h2).intersection(&ctx.s);
    let rhs = h1.intersection(&ctx.s).join(&h2.intersection(&ctx.s));
    Ok((
        lhs == rhs,
        json!({
            "join_meet_s": sub_json(&lhs),
            "meets_joined": sub_json(&rhs),
            "h1_subnormal": ctx.is_subnormal(&h1),
            "h2_subnormal": ctx.is_subnormal(&h2),
        }),
    ))
}

fn wielandt(ctx: &Ctx, inst: &Value) -> Outcome {
    let (h1, h2) = pair(ctx, inst)?;
    let join = h1.join(&h2);
    if !ctx.is_subnormal(&join) {
        return Ok((false, json!({ "join_not_subnormal": sub_json(&join) })));
    }
    for (i, h) in [&h1, &h2].into_iter().enumerate() {
        let ok = subnormal_series(&join, h)?
            .series()
            .is_some_and(|s| s.verify(&join, h));
        if !ok {
            return Ok((false, json!({ "part_not_subnormal_in_join": i + 1 })));
        }
    }
    let from = field(inst, "thirds_from")?.as_u64().unwrap_or(0) as usize;
    let meets = h1.intersection(&ctx.s).join(&h2.intersection(&ctx.s));
    for h3 in ctx.subnormal.iter().skip(from) {
        let j3 = join.join(h3);
        let lhs = j3.intersection(&ctx.s);
        let rhs = meets.join(&h3.intersection(&ctx.s));
        if lhs != rhs || !ctx.is_subnormal(&j3) {
            return Ok((
                false,
                json!({ "h3": sub_json(h3), "join_meet_s": sub_json(&lhs), "meets_joined": sub_json(&rhs) }),
            ));
        }
    }
    Ok((true, Value::Null))
}

fn tgroups(ctx: &Ctx, inst: &Value) -> Outcome {
    let (base, _) = ctx.fusion()?;
    let (h1, h2) = pair(ctx, inst)?;
    let join = h1.join(&h2);
    let t = base.mask_of(&join.intersection(&ctx.s));
    let ts = base.subgroup(t);
    let lhs = base.realized(&join, t)?;
    let f1 = base.realized(&h1.join(&ts), t)?;
    let f2 = base.realized(&h2.join(&ts), t)?;
    let rhs = FusionSystem::generate(base, t, &[&f1, &f2])?;
    Ok((
        lhs == rhs,
        json!({ "lhs_morphisms": lhs.morphism_count(), "rhs_morphisms": rhs.morphism_count() }),
    ))
}

fn bracket_prop(ctx: &Ctx, inst: &Value) -> Outcome {
    let (base, f) = ctx.fusion()?;
    let (h1, h2) = pair(ctx, inst)?;
    let join = h1.join(&h2);
    let t = base.mask_of(&join.intersection(&ctx.s));
    let lhs = base.realized(&join, t)?;
    let parts = [
        SubsystemHandle::realized(f, &h1)?,
        SubsystemHandle::realized(f, &h2)?,
    ];
    let via_join = bracket_subnormal(f, &parts)?;
    let via_reduction = bracket_by_reduction(f, &h1, &h2)?;
    let ok = via_join.handle.system() == &lhs && via_reduction == lhs;
    Ok((
        ok,
        json!({
            "lhs_morphisms": lhs.morphism_count(),
            "join_route_morphisms": via_join.handle.system().morphism_count(),
            "reduction_route_morphisms": via_reduction.morphism_count(),
        }),
    ))
}

fn split_ok(
    s: &Subgroup,
    w: &SplitWitness,
    x: Elem,
    left: &Subgroup,
    right: &dyn Fn(Elem) -> bool,
) -> bool {
    let amb = s.ambient();
    let s_x = staged_members(s, &[x]);
    amb.mul(w.a, w.b) == x
        && left.contains(w.a)
        && right(w.b)
        && staged_members(s, &[w.a, w.b]) == s_x
        && w.restriction.members() == &s_x
}

fn splittings(ctx: &Ctx, inst: &Value) -> Outcome {
    let amb = ctx.amb();
    let lemma = field(inst, "lemma")?.as_str().unwrap_or_default();
    let n = sub_from(amb, field(inst, "n")?, "n")?;
    let only: Option<Elem> = inst.get("g").map(|v| elem_from(amb, v, "g")).transpose()?;
    let fail = |x: Elem, why: &str| Ok((false, json!({ "g": elem_json(amb, x), "reason": why })));
    match lemma {
        "frattini" => {
            let t = ctx.s.intersection(&n);
            let ngt = normalizer(&ctx.g, &t);
            for x in only.map_or_else(|| ctx.g.element_vec(), |x| vec![x]) {
                let w = frattini_split(&ctx.g, &ctx.s, &n, x)?;
                if !split_ok(&ctx.s, &w, x, &n, &|b| ngt.contains(b)) {
                    return fail(x, "invalid frattini witness");
                }
            }
        }
        "product" => {
            let m = sub_from(amb, field(inst, "m")?, "m")?;
            let mn = m.join(&n);
            for x in only.map_or_else(|| mn.element_vec(), |x| vec![x]) {
                let w = normal_product_split(&ctx.g, &ctx.s, &m, &n, x)?;
                if !split_ok(&ctx.s, &w, x, &m, &|b| n.contains(b)) {
                    return fail(x, "invalid product witness");
                }
            }
        }
        "normal_subnormal" => {
            let h = sub_from(amb, field(inst, "h")?, "h")?;
            let nh = n.join(&h);
            for x in only.map_or_else(|| nh.element_vec(), |x| vec![x]) {
                let w = normal_subnormal_split(&ctx.g, &ctx.s, &n, &h, x)?;
                if !split_ok(&ctx.s, &w, x, &n, &|b| h.contains(b)) {
                    return fail(x, "invalid normal-subnormal witness");
                }
            }
        }
        "locality" => {
            let l = ctx.full_locality()?;
            let (_, report) = l.fusion_and_split(&n.element_vec())?;
            if !report.holds() {
                return Ok((
                    false,
                    json!({
                        "unsplit": report.failures.iter().map(|&x| elem_json(amb, x)).collect::<Vec<_>>(),
                        "generation_holds": report.generation_holds,
                    }),
                ));
            }
        }
        other => {
            return Err(SubkitError::PreconditionViolation(format!(
                "unknown lemma {other}"
            )));
        }
    }
    Ok((true, Value::Null))
}

fn series(ctx: &Ctx, inst: &Value) -> Outcome {
    let h = sub_from(ctx.amb(), field(inst, "h")?, "h")?;
    match subnormal_series(&ctx.g, &h)? {
        SubnormalVerdict::Subnormal(series) => {
            let verified = series.verify(&ctx.g, &h);
            let invariant = series.is_invariant_under(&normalizer(&ctx.g, &h));
            Ok((
                verified && invariant,
                json!({ "verified": verified, "invariant": invariant, "length": series.length() }),
            ))
        }
        SubnormalVerdict::NotSubnormal { fixed_point } => {
            Ok((false, json!({ "fixed_point": sub_json(&fixed_point) })))
        }
    }
}

fn locality(ctx: &Ctx, inst: &Value) -> Outcome {
    let name = field(inst, "objects")?.as_str().unwrap_or_default();
    let sets = corpus_object_sets(&ctx.g, &ctx.s, ctx.p)?;
    let delta = sets
        .into_iter()
        .find(|(n, _)| n == name)
        .map(|(_, d)| d)
        .ok_or_else(|| SubkitError::PreconditionViolation(format!("no object set {name}")))?;
    let l = locality_from_group(&ctx.g, &ctx.s, &delta, DEFAULT_WORD_BOUND)?;
    if let crate::locality::PartialGroupVerdict::Fail(v) = l.check_axioms() {
        return Ok((
            false,
            json!({ "axiom": v.axiom, "word": v.word, "detail": v.detail }),
        ));
    }
    if name != "all" {
        return Ok((true, Value::Null));
    }
    // With every subgroup of S an object, L is G and partial normality is normality.
    let mut candidates = ctx.subnormal.clone();
    for x in ctx.g.elements() {
        candidates.push(Subgroup::generated(ctx.amb(), &[x]));
    }
    candidates.push(ctx.s.clone());
    crate::group::sort_canonical(&mut candidates);
    candidates.dedup();
    for h in &candidates {
        let verdict = l.partial_normality(&h.element_vec())?;
        let agrees = match &verdict {
            PartialNormality::Normal => h.is_normal_in(&ctx.g),
            PartialNormality::Subnormal(chain) => {
                !h.is_normal_in(&ctx.g)
                    && ctx.is_subnormal(h)
                    && chain.windows(2).all(|w| {
                        let lo = Subgroup::from_members(ctx.amb(), to_bits(ctx.amb(), &w[0]));
                        let hi = Subgroup::from_members(ctx.amb(), to_bits(ctx.amb(), &w[1]));
                        matches!((lo, hi), (Ok(lo), Ok(hi)) if lo.is_normal_in(&hi))
                    })
            }
            PartialNormality::Subgroup => !ctx.is_subnormal(h),
            PartialNormality::NotSubgroup => false,
        };
        if !agrees {
            return Ok((
                false,
                json!({ "subgroup": sub_json(h), "verdict": format!("{verdict:?}") }),
            ));
        }
    }
    Ok((true, Value::Null))
}

fn to_bits(amb: &Group, elems: &[Elem]) -> FixedBitSet {
    let mut b = FixedBitSet::with_capacity(amb.order());
    b.extend(elems.iter().copied());
    b
}

fn hyperfocal(ctx: &Ctx, inst: &Value) -> Outcome {
    let (base, f) = ctx.fusion()?;
    match field(inst, "kind")?.as_str().unwrap_or_default() {
        "hyperfocal_eq" => {
            let r = hyperfocal_sides(f)?;
            let over_ok = r.residual_system.over() == base.mask_of(&r.fusion_side);
            Ok((
                r.sides_agree() && over_ok,
                json!({ "group_side": sub_json(&r.group_side), "fusion_side": sub_json(&r.fusion_side) }),
            ))
        }
        "remark_product" => {
            let h = sub_from(ctx.amb(), field(inst, "h")?, "h")?;
            let k = sub_from(ctx.amb(), field(inst, "k")?, "k")?;
            let mid = base.realized(&k, base.mask_of(&k.intersection(&ctx.s)))?;
            let e_mid = SubsystemHandle::realized(&mid, &h)?;
            let e_top = SubsystemHandle::realized(f, &h)?;
            let p_sub = subsystem_stabilizer(&mid, &e_mid);
            let in_mid = product_subsystem(&mid, &e_mid, &p_sub)?;
            let in_top = product_subsystem(f, &e_top, &p_sub)?;
            Ok((
                in_mid.system() == in_top.system(),
                json!({ "p": sub_json(&p_sub) }),
            ))
        }
        other => Err(SubkitError::PreconditionViolation(format!(
            "unknown kind {other}"
        ))),
    }
}

fn saturation(ctx: &Ctx, _inst: &Value) -> Outcome {
    let (base, f) = ctx.fusion()?;
    match is_saturated(f) {
        SaturationVerdict::Saturated => Ok((true, Value::Null)),
        SaturationVerdict::NotSaturated(fail) => Ok((
            false,
            json!({
                "axiom": fail.axiom.name(),
                "subgroup": sub_json(&base.subgroup(fail.subgroup)),
            }),
        )),
    }
}

fn assoc(ctx: &Ctx, inst: &Value) -> Outcome {
    let hs: Vec<Subgroup> = field(inst, "parts")?
        .as_array()
        .map(|a| a.iter().map(|v| sub_from(ctx.amb(), v, "parts")).collect())
        .unwrap_or_else(|| Ok(Vec::new()))?;
    if hs.is_empty() {
        return Err(SubkitError::PreconditionViolation("no parts".into()));
    }
    match inst.get("thirds_from").and_then(Value::as_u64) {
        None => assoc_one(ctx, &hs),
        Some(from) => {
            for h3 in ctx.subnormal.iter().skip(from as usize) {
                let mut parts = hs.clone();
                parts.push(h3.clone());
                let (ok, detail) = assoc_one(ctx, &parts)?;
                if !ok {
                    return Ok((
                        false,
                        json!({ "h3": sub_json(h3), "mismatched": detail["mismatched"] }),
                    ));
                }
            }
            Ok((true, Value::Null))
        }
    }
}

/// Every two-block cut of `hs` against the flat bracket. The inner
/// brackets are realized by joins; the outer one uses the reduction route.
fn assoc_one(ctx: &Ctx, hs: &[Subgroup]) -> Outcome {
    let (base, f) = ctx.fusion()?;
    let join_of = |parts: &[Subgroup]| {
        parts
            .iter()
            .skip(1)
            .fold(parts[0].clone(), |acc, h| acc.join(h))
    };
    let join = join_of(hs);
    let whole = base.realized(&join, base.mask_of(&join.intersection(&ctx.s)))?;
    let handles = hs
        .iter()
        .map(|h| SubsystemHandle::realized(f, h))
        .collect::<Result<Vec<_>>>()?;
    let mut mismatched: Vec<String> = Vec::new();
    if bracket_subnormal(f, &handles)?.handle.system() != &whole {
        mismatched.push("flat".into());
    }
    for cut in 1..hs.len() {
        if bracket_by_reduction(f, &join_of(&hs[..cut]), &join_of(&hs[cut..]))? != whole {
            mismatched.push(format!("cut {cut}"));
        }
    }
    Ok((mismatched.is_empty(), json!({ "mismatched": mismatched })))
}

/// Evaluates one identity on one instance.
pub fn verify_identity(
    entry: &CorpusEntry,
    p: usize,
    kind: &str,
    instance: &Value,
) -> Result<CheckReport> {
    let ctx = Ctx::new(entry, p)?;
    let (check, inst) = match kind {
        "tgroups" | "bracket_prop" | "assoc" => (kind, instance.clone()),
        "hyperfocal_eq" | "remark_product" => {
            let mut inst = instance.clone();
            if !inst.is_object() {
                inst = json!({});
            }
            inst["kind"] = json!(kind);
            ("hyperfocal", inst)
        }
        other => {
            return Err(SubkitError::PreconditionViolation(format!(
                "unknown identity {other}"
            )));
        }
    };
    Ok(evaluate(&ctx, check, &inst, false))
}

fn instances(ctx: &Ctx, check: &str) -> Vec<Value> {
    let sn = &ctx.subnormal;
    let pairs = || {
        let mut out = Vec::new();
        for i in 0..sn.len() {
            for j in i + 1..sn.len() {
                out.push((i, j));
            }
        }
        out
    };
    match check {
        "meierfrankenfeld" | "tgroups" | "bracket_prop" => pairs()
            .into_iter()
            .map(|(i, j)| json!({ "h1": sub_json(&sn[i]), "h2": sub_json(&sn[j]) }))
            .collect(),
        "wielandt" => pairs()
            .into_iter()
            .map(|(i, j)| json!({ "h1": sub_json(&sn[i]), "h2": sub_json(&sn[j]), "thirds_from": j + 1 }))
            .collect(),
        "series" => sn.iter().map(|h| json!({ "h": sub_json(h) })).collect(),
        "splittings" => {
            let mut out = Vec::new();
            for n in &ctx.normal {
                out.push(json!({ "lemma": "frattini", "n": sub_json(n) }));
            }
            for (i, m) in ctx.normal.iter().enumerate() {
                for n in &ctx.normal[i..] {
                    out.push(json!({ "lemma": "product", "m": sub_json(m), "n": sub_json(n) }));
                }
            }
            for n in &ctx.normal {
                for h in sn.iter().filter(|h| h.is_normalized_by_subgroup(&ctx.s)) {
                    out.push(json!({ "lemma": "normal_subnormal", "n": sub_json(n), "h": sub_json(h) }));
                }
            }
            if ctx.fusion.is_some() {
                for n in &ctx.normal {
                    out.push(json!({ "lemma": "locality", "n": sub_json(n) }));
                }
            }
            out
        }
        "locality" => corpus_object_sets(&ctx.g, &ctx.s, ctx.p)
            .map(|sets| sets.into_iter().map(|(name, _)| json!({ "objects": name })).collect())
            .unwrap_or_else(|_| vec![json!({ "objects": "all" })]),
        "hyperfocal" => {
            let mut out = vec![json!({ "kind": "hyperfocal_eq" })];
            for k in &ctx.normal {
                for h in sn.iter().filter(|h| h.is_subgroup_of(k)) {
                    out.push(json!({ "kind": "remark_product", "h": sub_json(h), "k": sub_json(k) }));
                }
            }
            out
        }
        "saturation" => vec![json!({})],
        "assoc" => {
            let mut out: Vec<Value> = sn.iter().map(|h| json!({ "parts": [sub_json(h)] })).collect();
            out.extend(pairs().into_iter().map(|(i, j)| {
                json!({ "parts": [sub_json(&sn[i]), sub_json(&sn[j])], "thirds_from": j + 1 })
            }));
            out
        }
        _ => Vec::new(),
    }
}

pub fn run_suite(corpus: &[CorpusEntry], checks: &[&str]) -> Result<Vec<CheckReport>> {
    run_suite_with(corpus, checks, &SuiteOptions::default())
}

/// Runs `checks` on every entry and prime; reports are ordered by group,
/// check, prime, then instance enumeration order.
pub fn run_suite_with(
    corpus: &[CorpusEntry],
    checks: &[&str],
    opts: &SuiteOptions,
) -> Result<Vec<CheckReport>> {
    if let Some(bad) = checks.iter().find(|c| !CHECKS.contains(c)) {
        return Err(SubkitError::PreconditionViolation(format!(
            "unknown check {bad}"
        )));
    }
    let mut out = Vec::new();
    if checks.is_empty() {
        return Ok(out);
    }
    for entry in corpus {
        for &p in &entry.primes {
            if opts.prime.is_some_and(|q| q != p) {
                continue;
            }
            let ctx = match Ctx::new(entry, p) {
                Ok(ctx) => ctx,
                Err(e) => {
                    for check in checks {
                        let status = if matches!(e, SubkitError::BudgetExceeded { .. }) {
                            Status::Skipped
                        } else {
                            Status::Fail
                        };
                        out.push(CheckReport::new(
                            &entry.name,
                            check,
                            Some(p),
                            status,
                            json!({ "instance": {}, "detail": { "error": e.to_string() } }),
                        ));
                    }
                    continue;
                }
            };
            for check in checks {
                for inst in instances(&ctx, check) {
                    out.push(evaluate(&ctx, check, &inst, opts.timing));
                }
            }
        }
    }
    out.sort_by(|a, b| {
        (a.group.as_str(), a.check.as_str(), a.prime).cmp(&(
            b.group.as_str(),
            b.check.as_str(),
            b.prime,
        ))
    });
    Ok(out)
}

/// Evaluates a report's instance again and returns the fresh report.
pub fn replay(corpus: &[CorpusEntry], report: &CheckReport) -> Result<CheckReport> {
    let inst = report
        .witness
        .get("instance")
        .ok_or_else(|| SubkitError::PreconditionViolation("witness has no instance".into()))?;
    if report.check == "example_e1" {
        let claim = inst.get("claim").and_then(Value::as_u64).unwrap_or(0) as usize;
        return crate::scenario::scenario_example_e1()?
            .into_iter()
            .nth(claim.saturating_sub(1))
            .ok_or_else(|| SubkitError::PreconditionViolation(format!("no claim {claim}")));
    }
    let entry = corpus
        .iter()
        .find(|e| e.name == report.group)
        .ok_or_else(|| SubkitError::PreconditionViolation(format!("no group {}", report.group)))?;
    let p = report
        .prime
        .ok_or_else(|| SubkitError::PreconditionViolation("report has no prime".into()))?;
    let ctx = Ctx::new(entry, p)?;
    Ok(evaluate(&ctx, &report.check, inst, false))
}

/// Evaluates a single check on a hand-written instance.
pub fn evaluate_instance(
    entry: &CorpusEntry,
    p: usize,
    check: &str,
    instance: &Value,
) -> Result<CheckReport> {
    let ctx = Ctx::new(entry, p)?;
    Ok(evaluate(&ctx, check, instance, false))
}
