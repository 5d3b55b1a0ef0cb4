//! Saturation axioms, centric radical subgroups and the hyperfocal subgroup.

use std::collections::HashSet;
use std::sync::Arc;

use super::{bits, subset, FusionSystem, Mask, Morphism};
use crate::error::{Result, SubkitError};
use crate::group::{Budget, Group, Subgroup};
use crate::perm::Permutation;
use crate::subnormal::{p_core, p_residual};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axiom {
    /// `Aut_T(P)` is not a Sylow subgroup of `Aut_F(P)`.
    Sylow,
    /// Some isomorphism onto `P` does not extend to its `N_φ`.
    Extension,
}

impl Axiom {
    pub fn name(self) -> &'static str {
        match self {
            Axiom::Sylow => "sylow",
            Axiom::Extension => "extension",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaturationFailure {
    /// The fully normalized subgroup at which the axiom fails.
    pub subgroup: Mask,
    pub axiom: Axiom,
    /// The isomorphism `Q → P` without an extension.
    pub morphism: Option<Morphism>,
    /// `N_φ`, the subgroup the morphism should extend to.
    pub extension_target: Option<Mask>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SaturationVerdict {
    Saturated,
    NotSaturated(SaturationFailure),
}

impl SaturationVerdict {
    pub fn is_saturated(&self) -> bool {
        matches!(self, SaturationVerdict::Saturated)
    }
}

/// `Aut_T(P)` as value vectors on the elements of `P`.
fn aut_t(f: &FusionSystem, p: Mask) -> HashSet<Vec<u8>> {
    let base = f.base();
    bits(base.normalizer_in(f.over(), p))
        .map(|t| bits(p).map(|x| base.conj(x, t) as u8).collect())
        .collect()
}

/// Checks every F-class, largest subgroups first, at its fully normalized
/// member: `Aut_T(P)` must be Sylow in `Aut_F(P)`, and every isomorphism
/// `φ: Q → P` must extend to `N_φ`.
pub fn is_saturated(f: &FusionSystem) -> SaturationVerdict {
    let base = f.base();
    let p = f.prime();
    let mut classes = f.classes();
    classes.reverse();
    for class in &classes {
        let rep = f.fully_normalized(class);
        let auts = f.aut(rep).len();
        let inner = aut_t(f, rep);
        let index = auts / inner.len();
        if !auts.is_multiple_of(inner.len()) || index.is_multiple_of(p) {
            return SaturationVerdict::NotSaturated(SaturationFailure {
                subgroup: rep,
                axiom: Axiom::Sylow,
                morphism: None,
                extension_target: None,
            });
        }
        for &q in class {
            let nq = base.normalizer_in(f.over(), q);
            for phi in f.homs_from(q).filter(|m| m.image() == rep) {
                let inv = phi.inverse();
                let n_phi = bits(nq)
                    .filter(|&g| {
                        let v: Vec<u8> = bits(rep)
                            .map(|y| phi.apply(base.conj(inv.apply(y), g)) as u8)
                            .collect();
                        inner.contains(&v)
                    })
                    .fold(0, |acc, g| acc | 1 << g);
                let extends = f.homs_from(n_phi).any(|psi| psi.agrees_with(phi, q));
                if !extends {
                    return SaturationVerdict::NotSaturated(SaturationFailure {
                        subgroup: rep,
                        axiom: Axiom::Extension,
                        morphism: Some(phi.clone()),
                        extension_target: Some(n_phi),
                    });
                }
            }
        }
    }
    SaturationVerdict::Saturated
}

/// `Aut_F(P)` as a permutation group on the elements of `P`, together with
/// a converter from morphisms to its permutations.
pub(crate) struct AutGroup {
    pub group: Arc<Group>,
    points: Vec<usize>,
}

impl AutGroup {
    pub fn new(f: &FusionSystem, p: Mask) -> AutGroup {
        let points: Vec<usize> = bits(p).collect();
        let degree = points.len();
        let to_perm = |m: &Morphism| -> Permutation {
            let images = points
                .iter()
                .map(|&x| points.iter().position(|&y| y == m.apply(x)).unwrap() as u32)
                .collect();
            Permutation::new(images).expect("automorphism permutes P")
        };
        let gens: Vec<Permutation> = f.aut(p).into_iter().map(to_perm).collect();
        let group = Group::generate(degree, gens, &Budget::default())
            .expect("automorphism groups of small p-groups are small");
        AutGroup {
            group: Arc::new(group),
            points,
        }
    }

    pub fn perm_of(&self, x_conj: impl Fn(usize) -> usize) -> Permutation {
        let images = self
            .points
            .iter()
            .map(|&x| self.points.iter().position(|&y| y == x_conj(x)).unwrap() as u32)
            .collect();
        Permutation::new(images).expect("conjugation permutes P")
    }

    /// Local element images of the automorphism with group index `a`.
    pub fn apply(&self, a: usize, x: usize) -> usize {
        let i = self.points.iter().position(|&y| y == x).unwrap();
        self.points[self.group.element(a).apply(i as u32) as usize]
    }
}

fn is_centric_everywhere(f: &FusionSystem, class: &[Mask]) -> bool {
    let base = f.base();
    class
        .iter()
        .all(|&q| subset(base.centralizer_in(f.over(), q), q))
}

/// `O_p(Aut_F(P)) = Inn(P)`.
fn is_radical(f: &FusionSystem, p_mask: Mask) -> bool {
    let base = f.base();
    let aut = AutGroup::new(f, p_mask);
    let inner: Vec<Permutation> = bits(p_mask)
        .map(|t| aut.perm_of(|x| base.conj(x, t)))
        .collect();
    let inn =
        Subgroup::from_perms(&aut.group, &inner).expect("inner automorphisms lie in Aut_F(P)");
    p_core(&aut.group.as_subgroup(), f.prime()) == inn
}

/// Subgroups `P ≤ T` that are F-centric and F-radical, in canonical order.
pub fn centric_radicals(f: &FusionSystem) -> Vec<Subgroup> {
    let base = f.base();
    let mut out: Vec<Mask> = Vec::new();
    for class in f.classes() {
        if !is_centric_everywhere(f, &class) {
            continue;
        }
        // Radicality is invariant along the class; test one member.
        if is_radical(f, class[0]) {
            out.extend(class);
        }
    }
    out.sort_by(|&a, &b| super::canonical_mask_cmp(a, b));
    out.into_iter().map(|m| base.subgroup(m)).collect()
}

/// Both sides of `S ∩ O^p(G) = hyp(F_S(G))` plus `F_{S∩O^p(G)}(O^p(G))`.
#[derive(Clone, Debug)]
pub struct HyperfocalResult {
    pub group_side: Subgroup,
    pub fusion_side: Subgroup,
    pub residual_system: FusionSystem,
}

impl HyperfocalResult {
    pub fn sides_agree(&self) -> bool {
        self.group_side == self.fusion_side
    }
}

/// `hyp(F) = ⟨[P, O^p(Aut_F(P))] : P ≤ T⟩`, as a mask.
pub(crate) fn hyperfocal_mask(f: &FusionSystem) -> Mask {
    let base = f.base();
    let mut gens: Mask = 0;
    for p_mask in f.subgroups() {
        let aut = AutGroup::new(f, p_mask);
        let residual = p_residual(&aut.group.as_subgroup(), f.prime());
        for a in residual.elements() {
            for x in bits(p_mask) {
                gens |= 1 << base.mul(base.inv(x), aut.apply(a, x));
            }
        }
    }
    base.closure(gens)
}

/// Computes both sides for a group-realized system; use
/// [`HyperfocalResult::sides_agree`] to compare them.
pub fn hyperfocal_sides(f: &FusionSystem) -> Result<HyperfocalResult> {
    let g = f.realizer().ok_or_else(|| {
        SubkitError::PreconditionViolation("hyperfocal needs a realized system".into())
    })?;
    let base = f.base();
    let t = f.over_subgroup();
    let residual = p_residual(g, f.prime());
    let group_side = t.intersection(&residual);
    let fusion_side = base.subgroup(hyperfocal_mask(f));
    let residual_system = base.realized(&residual, base.mask_of(&group_side))?;
    Ok(HyperfocalResult {
        group_side,
        fusion_side,
        residual_system,
    })
}

/// Like [`hyperfocal_sides`], but a disagreement is an error.
pub fn hyperfocal(f: &FusionSystem) -> Result<HyperfocalResult> {
    let r = hyperfocal_sides(f)?;
    if !r.sides_agree() {
        return Err(SubkitError::SidesDisagree(format!(
            "S ∩ O^p(G) has order {} but hyp(F) has order {}",
            r.group_side.order(),
            r.fusion_side.order()
        )));
    }
    Ok(r)
}
