//! Subsystems realized by subnormal subgroups: transport `E^a`, the
//! stabilizer `N_S(E)`, products `(EP)_F`, and the bracket of several
//! subsystems.

use std::sync::Arc;

use super::{bits, subset, FusionSystem, Mask};
use crate::error::{Result, SubkitError};
use crate::group::{Elem, Subgroup};
use crate::subnormal::{p_residual, subnormal_series, SubnormalSeries, SubnormalVerdict};

/// A subsystem of `parent`, optionally with a subnormal subgroup realizing it.
#[derive(Clone, Debug)]
pub struct SubsystemHandle {
    parent: FusionSystem,
    system: FusionSystem,
    realizer: Option<Subgroup>,
    /// Present when the realizer is subnormal in the parent's group.
    series: Option<SubnormalSeries>,
}

fn parent_group(parent: &FusionSystem) -> Result<&Subgroup> {
    parent.realizer().ok_or_else(|| {
        SubkitError::PreconditionViolation("parent system has no realizing group".into())
    })
}

fn series_in(g: &Subgroup, h: &Subgroup, what: &str) -> Result<SubnormalSeries> {
    match subnormal_series(g, h)? {
        SubnormalVerdict::Subnormal(s) => Ok(s),
        SubnormalVerdict::NotSubnormal { fixed_point } => Err(SubkitError::NotSubnormal(format!(
            "{what}: normal closures stop at order {}",
            fixed_point.order()
        ))),
    }
}

impl SubsystemHandle {
    /// `F_{H∩S}(H)` for a subnormal subgroup `H` of the group realizing `parent`.
    pub fn realized(parent: &FusionSystem, h: &Subgroup) -> Result<SubsystemHandle> {
        let g = parent_group(parent)?;
        let series = series_in(g, h, "realizing subgroup")?;
        let base = parent.base();
        let t = base.mask_of(h) & parent.over();
        let system = base.realized(h, t)?;
        Ok(SubsystemHandle {
            parent: parent.clone(),
            system,
            realizer: Some(h.clone()),
            series: Some(series),
        })
    }

    /// Wraps an arbitrary subsystem; fails unless its hom-sets lie in `parent`'s.
    pub fn unrealized(parent: &FusionSystem, system: FusionSystem) -> Result<SubsystemHandle> {
        if !system.is_subsystem_of(parent) {
            return Err(SubkitError::PreconditionViolation(
                "system is not contained in the parent".into(),
            ));
        }
        Ok(SubsystemHandle {
            parent: parent.clone(),
            system,
            realizer: None,
            series: None,
        })
    }

    pub fn parent(&self) -> &FusionSystem {
        &self.parent
    }

    pub fn system(&self) -> &FusionSystem {
        &self.system
    }

    pub fn realizer(&self) -> Option<&Subgroup> {
        self.realizer.as_ref()
    }

    pub fn series(&self) -> Option<&SubnormalSeries> {
        self.series.as_ref()
    }

    pub fn over(&self) -> Mask {
        self.system.over()
    }

    fn require_realizer(&self) -> Result<&Subgroup> {
        self.realizer().ok_or_else(|| {
            SubkitError::PreconditionViolation("subsystem has no realizing subgroup".into())
        })
    }
}

/// `E^a` for `a ∈ S`, and `N_S(E) = {b ∈ N_S(T) : E^b = E}`.
pub fn subsystem_transport(
    parent: &FusionSystem,
    e: &SubsystemHandle,
    a: Elem,
) -> Result<(SubsystemHandle, Subgroup)> {
    let base = parent.base();
    let la = base
        .local_of(a)
        .filter(|&x| parent.over() >> x & 1 == 1)
        .ok_or_else(|| SubkitError::PreconditionViolation("element is not in S".into()))?;
    let conj = e.system.conjugate(la);
    let (realizer, series) = match &e.realizer {
        Some(h) => {
            let ha = h.conjugate(a);
            let g = parent_group(parent)?;
            let series = match subnormal_series(g, &ha)? {
                SubnormalVerdict::Subnormal(s) => Some(s),
                SubnormalVerdict::NotSubnormal { .. } => None,
            };
            (Some(ha), series)
        }
        None => (None, None),
    };
    let stabilizer = stabilizer_mask(parent, &e.system);
    Ok((
        SubsystemHandle {
            parent: parent.clone(),
            system: conj,
            realizer,
            series,
        },
        base.subgroup(stabilizer),
    ))
}

fn stabilizer_mask(parent: &FusionSystem, e: &FusionSystem) -> Mask {
    let base = parent.base();
    bits(base.normalizer_in(parent.over(), e.over()))
        .filter(|&b| e.conjugate(b) == *e)
        .fold(0, |acc, b| acc | 1 << b)
}

/// `N_S(E)`.
pub fn subsystem_stabilizer(parent: &FusionSystem, e: &SubsystemHandle) -> Subgroup {
    parent.base().subgroup(stabilizer_mask(parent, &e.system))
}

/// `(EP)_F`, realized by `⟨H, P⟩` over `TP`, for `P ≤ N_S(E)`.
///
/// When `P` normalizes `H` the realizing group is `HP`. The result must
/// satisfy `O^p((EP)_F) = O^p(E)`; both sides are compared as the systems
/// `F_{R∩S}(R)` with `R` the `p`-residual of the realizer, and a mismatch
/// is reported as `SidesDisagree`.
pub fn product_subsystem(
    parent: &FusionSystem,
    e: &SubsystemHandle,
    p_sub: &Subgroup,
) -> Result<SubsystemHandle> {
    let base = parent.base();
    let g = parent_group(parent)?;
    let h = e.require_realizer()?;
    let pm = base.mask_of(p_sub);
    if pm.count_ones() as usize != p_sub.order() || !subset(pm, parent.over()) {
        return Err(SubkitError::PreconditionViolation(
            "P is not a subgroup of S".into(),
        ));
    }
    let stab = stabilizer_mask(parent, &e.system);
    if !subset(pm, stab) {
        return Err(SubkitError::NotNormalizing(format!(
            "P of order {} is not contained in N_S(E) of order {}",
            p_sub.order(),
            stab.count_ones()
        )));
    }
    let hp = h.join(p_sub);
    let tp = base.closure(e.over() | pm);
    let s = base.subgroup(parent.over());
    if base.mask_of(&hp.intersection(&s)) != tp
        || crate::group::p_part(hp.order(), parent.prime()) != tp.count_ones() as usize
    {
        return Err(SubkitError::PreconditionViolation(
            "TP is not a Sylow subgroup of ⟨H, P⟩".into(),
        ));
    }
    let system = base.realized(&hp, tp)?;
    let p = parent.prime();
    let residual_of = |k: &Subgroup| -> Result<FusionSystem> {
        let r = p_residual(k, p);
        base.realized(&r, base.mask_of(&r.intersection(&s)))
    };
    if residual_of(&hp)? != residual_of(h)? {
        return Err(SubkitError::SidesDisagree(
            "O^p((EP)_F) differs from O^p(E)".into(),
        ));
    }
    let series = match subnormal_series(g, &hp)? {
        SubnormalVerdict::Subnormal(s) => Some(s),
        SubnormalVerdict::NotSubnormal { .. } => None,
    };
    Ok(SubsystemHandle {
        parent: parent.clone(),
        system,
        realizer: Some(hp),
        series,
    })
}

/// The bracket `F_T(⟨H₁,…,H_n⟩)` with its certificates.
#[derive(Clone, Debug)]
pub struct Bracket {
    pub handle: SubsystemHandle,
    /// Series of the join in the parent group.
    pub join_series: SubnormalSeries,
    /// For each part, its series inside the join.
    pub part_series: Vec<SubnormalSeries>,
}

/// Brackets realized subsystems via the join of their realizing subgroups.
pub fn bracket_subnormal(parent: &FusionSystem, parts: &[SubsystemHandle]) -> Result<Bracket> {
    let g = parent_group(parent)?;
    let base = parent.base();
    let mut join = Subgroup::trivial(g.ambient());
    let mut t_gens: Mask = 0;
    for part in parts {
        let h = part.require_realizer()?;
        series_in(g, h, "bracket part")?;
        join = join.join(h);
        t_gens |= part.over();
    }
    let join_series = series_in(g, &join, "join")?;
    let handle = SubsystemHandle::realized(parent, &join)?;
    if handle.over() != base.closure(t_gens) {
        return Err(SubkitError::SidesDisagree(
            "join ∩ S differs from the join of the parts' p-groups".into(),
        ));
    }
    let mut part_series = Vec::with_capacity(parts.len());
    for part in parts {
        part_series.push(series_in(&join, part.require_realizer()?, "part in join")?);
    }
    Ok(Bracket {
        handle,
        join_series,
        part_series,
    })
}

/// An independent route to the bracket of two realized subsystems: while
/// some `H_i` is not normalized by `T = ⟨S₁,S₂⟩`, replace it by
/// `⟨H_i, H_i^x⟩` for the least `x ∈ N_T(N_T(H_i)) \ N_T(H_i)`; once both
/// are, return `⟨F_T(H₁T), F_T(H₂T)⟩`.
pub fn bracket_by_reduction(
    parent: &FusionSystem,
    h1: &Subgroup,
    h2: &Subgroup,
) -> Result<FusionSystem> {
    let g = parent_group(parent)?;
    series_in(g, h1, "first subgroup")?;
    series_in(g, h2, "second subgroup")?;
    let base = Arc::clone(parent.base());
    let s = parent.over();
    let t = base.closure((base.mask_of(h1) | base.mask_of(h2)) & s);
    let t_sub = base.subgroup(t);
    let mut h = [h1.clone(), h2.clone()];
    loop {
        let unnormalized = (0..2).find(|&i| !h[i].is_normalized_by_subgroup(&t_sub));
        let Some(i) = unnormalized else { break };
        let t0 = bits(t)
            .filter(|&x| h[i].is_normalized_by(base.elem_of(x)))
            .fold(0u64, |acc, x| acc | 1 << x);
        let x = bits(base.normalizer_in(t, t0) & !t0)
            .next()
            .expect("a proper subgroup of a p-group grows in its normalizer");
        h[i] = h[i].join(&h[i].conjugate(base.elem_of(x)));
    }
    let f1 = base.realized(&h[0].join(&t_sub), t)?;
    let f2 = base.realized(&h[1].join(&t_sub), t)?;
    FusionSystem::generate(&base, t, &[&f1, &f2])
}
