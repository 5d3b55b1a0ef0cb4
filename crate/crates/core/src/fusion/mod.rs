//! Fusion systems over a small `p`-group `S`.
//!
//! A [`FusionBase`] fixes `S` inside an ambient group and numbers its
//! elements `0..|S|` (in ambient order), so subgroups of `S` are `u64`
//! masks and a morphism is a full element map on its source. A
//! [`FusionSystem`] over `T ≤ S` stores `Hom_F(P, T)` for every `P ≤ T`;
//! `Hom_F(P, Q)` is the part whose image lies in `Q`.

mod saturation;
mod subsystem;

pub use saturation::{
    centric_radicals, hyperfocal, hyperfocal_sides, is_saturated, Axiom, HyperfocalResult,
    SaturationFailure, SaturationVerdict,
};
pub use subsystem::{
    bracket_by_reduction, bracket_subnormal, product_subsystem, subsystem_stabilizer,
    subsystem_transport, Bracket, SubsystemHandle,
};

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::{Arc, Mutex};

use fixedbitset::FixedBitSet;

use crate::error::{Result, SubkitError};
use crate::group::{enumerate_subgroups, is_prime_power_of, p_part, Budget, Elem, Group, Subgroup};
use crate::perm::Permutation;

/// Largest `|S|` a fusion base accepts; subgroups are stored as `u64` masks.
pub const MAX_BASE_ORDER: usize = 64;

const NONE: u8 = u8::MAX;

pub(crate) type Mask = u64;

#[inline]
fn bits(mask: Mask) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

#[inline]
fn subset(a: Mask, b: Mask) -> bool {
    a & !b == 0
}

/// Canonical order on masks: by size, then lexicographically by element list.
fn canonical_mask_cmp(a: Mask, b: Mask) -> std::cmp::Ordering {
    a.count_ones()
        .cmp(&b.count_ones())
        .then_with(|| bits(a).cmp(bits(b)))
}

/// An injective map from a subgroup of `S` into `S`, stored on every element
/// of its source.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Morphism {
    src: Mask,
    map: Box<[u8]>,
}

impl Morphism {
    pub fn source(&self) -> Mask {
        self.src
    }

    pub fn image(&self) -> Mask {
        bits(self.src).fold(0, |acc, x| acc | 1 << self.map[x])
    }

    /// Image of the local element `x`, which must lie in the source.
    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        debug_assert!(self.src >> x & 1 == 1);
        self.map[x] as usize
    }

    /// `self` followed by `next`, defined when the image of `self` lies in
    /// the source of `next`.
    pub fn then(&self, next: &Morphism) -> Option<Morphism> {
        if !subset(self.image(), next.src) {
            return None;
        }
        let mut map = vec![NONE; self.map.len()].into_boxed_slice();
        for x in bits(self.src) {
            map[x] = next.map[self.map[x] as usize];
        }
        Some(Morphism { src: self.src, map })
    }

    pub fn restrict(&self, to: Mask) -> Morphism {
        debug_assert!(subset(to, self.src));
        let mut map = vec![NONE; self.map.len()].into_boxed_slice();
        for x in bits(to) {
            map[x] = self.map[x];
        }
        Morphism { src: to, map }
    }

    pub fn inverse(&self) -> Morphism {
        let mut map = vec![NONE; self.map.len()].into_boxed_slice();
        for x in bits(self.src) {
            map[self.map[x] as usize] = x as u8;
        }
        Morphism {
            src: self.image(),
            map,
        }
    }

    pub fn is_identity(&self) -> bool {
        bits(self.src).all(|x| self.map[x] as usize == x)
    }

    pub fn agrees_with(&self, other: &Morphism, on: Mask) -> bool {
        bits(on).all(|x| self.map[x] == other.map[x])
    }
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = bits(self.src)
            .map(|x| format!("{x}->{}", self.map[x]))
            .collect();
        write!(f, "Morphism[{}]", pairs.join(" "))
    }
}

/// Hom-sets indexed by source subgroup.
pub type HomSets = BTreeMap<Mask, BTreeSet<Morphism>>;

type RealizedKey = (FixedBitSet, Mask);
type GeneratedKey = (Mask, Vec<Morphism>);

/// The `p`-group `S` with local element numbering, multiplication table and
/// subgroup lattice.
pub struct FusionBase {
    s: Subgroup,
    p: usize,
    elems: Vec<Elem>,
    local: HashMap<Elem, u8>,
    mul: Vec<u8>,
    inv: Vec<u8>,
    lattice: Vec<Mask>,
    lattice_pos: HashMap<Mask, usize>,
    /// For each lattice entry, the entries of index `p` in it.
    maximal_below: Vec<Vec<usize>>,
    realized_cache: Mutex<HashMap<RealizedKey, Arc<HomSets>>>,
    generated_cache: Mutex<HashMap<GeneratedKey, Arc<HomSets>>>,
}

impl fmt::Debug for FusionBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FusionBase")
            .field("p", &self.p)
            .field("order", &self.elems.len())
            .field("subgroups", &self.lattice.len())
            .finish()
    }
}

impl FusionBase {
    /// Prepares `S`. Fails when `S` is not a `p`-group or exceeds
    /// [`MAX_BASE_ORDER`] elements.
    pub fn new(s: &Subgroup, p: usize, budget: &Budget) -> Result<Arc<FusionBase>> {
        if !is_prime_power_of(s.order(), p) {
            return Err(SubkitError::PreconditionViolation(format!(
                "fusion base of order {} is not a {p}-group",
                s.order()
            )));
        }
        if s.order() > MAX_BASE_ORDER {
            return Err(SubkitError::BudgetExceeded {
                what: "fusion base order",
                limit: MAX_BASE_ORDER,
            });
        }
        let amb = s.ambient();
        let elems = s.element_vec();
        let local: HashMap<Elem, u8> = elems
            .iter()
            .enumerate()
            .map(|(i, &e)| (e, i as u8))
            .collect();
        let n = elems.len();
        let mut mul = Vec::with_capacity(n * n);
        for &a in &elems {
            for &b in &elems {
                mul.push(local[&amb.mul(a, b)]);
            }
        }
        let inv = elems.iter().map(|&a| local[&amb.inv(a)]).collect();
        let to_mask =
            |sub: &Subgroup| -> Mask { sub.elements().fold(0, |acc, e| acc | 1 << local[&e]) };
        let mut lattice: Vec<Mask> = enumerate_subgroups(s, budget)?
            .iter()
            .map(to_mask)
            .collect();
        lattice.sort_by(|&a, &b| canonical_mask_cmp(a, b));
        let lattice_pos = lattice.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let maximal_below = lattice
            .iter()
            .map(|&q| {
                lattice
                    .iter()
                    .enumerate()
                    .filter(|&(_, &r)| {
                        subset(r, q) && r.count_ones() as usize * p == q.count_ones() as usize
                    })
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        Ok(Arc::new(FusionBase {
            s: s.clone(),
            p,
            elems,
            local,
            mul,
            inv,
            lattice,
            lattice_pos,
            maximal_below,
            realized_cache: Mutex::new(HashMap::new()),
            generated_cache: Mutex::new(HashMap::new()),
        }))
    }

    pub fn prime(&self) -> usize {
        self.p
    }

    pub fn sylow(&self) -> &Subgroup {
        &self.s
    }

    pub fn ambient(&self) -> &Arc<Group> {
        self.s.ambient()
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    /// Mask of all of `S`.
    pub fn full(&self) -> Mask {
        if self.elems.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.elems.len()) - 1
        }
    }

    /// Subgroups of `S` in canonical order.
    pub fn lattice(&self) -> &[Mask] {
        &self.lattice
    }

    pub fn is_subgroup_mask(&self, m: Mask) -> bool {
        self.lattice_pos.contains_key(&m)
    }

    /// Subgroups of `over`, in canonical order.
    pub fn subgroups_of(&self, over: Mask) -> impl Iterator<Item = Mask> + '_ {
        self.lattice
            .iter()
            .copied()
            .filter(move |&m| subset(m, over))
    }

    pub fn local_of(&self, e: Elem) -> Option<usize> {
        self.local.get(&e).map(|&i| i as usize)
    }

    pub fn elem_of(&self, x: usize) -> Elem {
        self.elems[x]
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.elems.len() + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    /// `x^t = t⁻¹ x t` in local indices.
    #[inline]
    pub fn conj(&self, x: usize, t: usize) -> usize {
        self.mul(self.mul(self.inv(t), x), t)
    }

    /// Mask of the members of `h ∩ S`.
    pub fn mask_of(&self, h: &Subgroup) -> Mask {
        self.elems
            .iter()
            .enumerate()
            .filter(|&(_, &e)| h.contains(e))
            .fold(0, |acc, (i, _)| acc | 1 << i)
    }

    /// Mask as a subgroup of the ambient group. The mask must be a subgroup.
    pub fn subgroup(&self, m: Mask) -> Subgroup {
        let amb = self.ambient();
        let mut members = FixedBitSet::with_capacity(amb.order());
        for x in bits(m) {
            members.insert(self.elems[x]);
        }
        Subgroup::from_members(amb, members).expect("mask is a subgroup of S")
    }

    /// Subgroup generated by the elements of `m`.
    pub fn closure(&self, m: Mask) -> Mask {
        let mut out: Mask = 1;
        let mut frontier = vec![0usize];
        let gens: Vec<usize> = bits(m).collect();
        while let Some(x) = frontier.pop() {
            for &g in &gens {
                let y = self.mul(x, g);
                if out >> y & 1 == 0 {
                    out |= 1 << y;
                    frontier.push(y);
                }
            }
        }
        out
    }

    pub fn conjugate_mask(&self, m: Mask, t: usize) -> Mask {
        bits(m).fold(0, |acc, x| acc | 1 << self.conj(x, t))
    }

    /// `N_T(P)`.
    pub fn normalizer_in(&self, over: Mask, p: Mask) -> Mask {
        bits(over)
            .filter(|&t| self.conjugate_mask(p, t) == p)
            .fold(0, |acc, t| acc | 1 << t)
    }

    /// `C_T(P)`.
    pub fn centralizer_in(&self, over: Mask, p: Mask) -> Mask {
        bits(over)
            .filter(|&t| bits(p).all(|x| self.mul(x, t) == self.mul(t, x)))
            .fold(0, |acc, t| acc | 1 << t)
    }

    /// Conjugation `c_t` restricted to `src`, which `t` must map into `S`.
    pub fn conjugation(&self, src: Mask, t: usize) -> Morphism {
        let mut map = vec![NONE; self.elems.len()].into_boxed_slice();
        for x in bits(src) {
            map[x] = self.conj(x, t) as u8;
        }
        Morphism { src, map }
    }

    pub fn inclusion(&self, src: Mask) -> Morphism {
        let mut map = vec![NONE; self.elems.len()].into_boxed_slice();
        for x in bits(src) {
            map[x] = x as u8;
        }
        Morphism { src, map }
    }

    /// Builds a morphism from its values on every element of `src`.
    pub fn morphism(&self, src: Mask, values: &[(usize, usize)]) -> Result<Morphism> {
        let mut map = vec![NONE; self.elems.len()].into_boxed_slice();
        for &(x, y) in values {
            if x >= self.elems.len() || y >= self.elems.len() {
                return Err(SubkitError::PreconditionViolation(
                    "morphism value outside S".into(),
                ));
            }
            map[x] = y as u8;
        }
        let m = Morphism { src, map };
        self.check_morphism(&m)?;
        Ok(m)
    }

    /// Injective homomorphism between subgroups of `S`.
    pub fn check_morphism(&self, m: &Morphism) -> Result<()> {
        if m.map.len() != self.elems.len() || !self.is_subgroup_mask(m.src) {
            return Err(SubkitError::PreconditionViolation(
                "morphism source is not a subgroup of S".into(),
            ));
        }
        for x in 0..self.elems.len() {
            let defined = m.map[x] != NONE;
            if defined != (m.src >> x & 1 == 1)
                || (defined && m.map[x] as usize >= self.elems.len())
            {
                return Err(SubkitError::PreconditionViolation(
                    "morphism is not defined exactly on its source".into(),
                ));
            }
        }
        for a in bits(m.src) {
            for b in bits(m.src) {
                if m.map[self.mul(a, b)] as usize != self.mul(m.map[a] as usize, m.map[b] as usize)
                {
                    return Err(SubkitError::PreconditionViolation(
                        "map is not a homomorphism".into(),
                    ));
                }
            }
        }
        if m.image().count_ones() != m.src.count_ones() {
            return Err(SubkitError::PreconditionViolation(
                "homomorphism is not injective".into(),
            ));
        }
        Ok(())
    }

    /// Ambient permutations of a mask's elements.
    pub fn perms_of(&self, m: Mask) -> Vec<Permutation> {
        bits(m)
            .map(|x| self.ambient().element(self.elems[x]).clone())
            .collect()
    }

    /// Generators of the source with their images, as ambient permutations.
    pub fn describe(&self, m: &Morphism) -> Vec<(Permutation, Permutation)> {
        let sub = self.subgroup(m.src);
        sub.gens()
            .iter()
            .map(|&e| {
                let x = self.local[&e] as usize;
                (
                    self.ambient().element(e).clone(),
                    self.ambient()
                        .element(self.elems[m.map[x] as usize])
                        .clone(),
                )
            })
            .collect()
    }

    /// `F_T(H)` for `T ≤ S` a Sylow `p`-subgroup of `H`.
    pub fn realized(self: &Arc<Self>, h: &Subgroup, over: Mask) -> Result<FusionSystem> {
        if !Arc::ptr_eq(h.ambient(), self.ambient()) {
            return Err(SubkitError::AmbientMismatch(
                "realizing group lives in a different ambient group".into(),
            ));
        }
        if !self.is_subgroup_mask(over) {
            return Err(SubkitError::PreconditionViolation(
                "T is not a subgroup of S".into(),
            ));
        }
        if bits(over).any(|x| !h.contains(self.elems[x]))
            || p_part(h.order(), self.p) != over.count_ones() as usize
        {
            return Err(SubkitError::PreconditionViolation(format!(
                "T of order {} is not a Sylow {}-subgroup of a group of order {}",
                over.count_ones(),
                self.p,
                h.order()
            )));
        }
        let key = (h.members().clone(), over);
        let cached = self.realized_cache.lock().unwrap().get(&key).cloned();
        let homs = match cached {
            Some(h) => h,
            None => {
                let homs = Arc::new(self.realized_homs(h, over));
                self.realized_cache
                    .lock()
                    .unwrap()
                    .insert(key, Arc::clone(&homs));
                homs
            }
        };
        Ok(FusionSystem {
            base: Arc::clone(self),
            over,
            homs,
            realizer: Some(h.clone()),
        })
    }

    fn realized_homs(&self, h: &Subgroup, over: Mask) -> HomSets {
        let amb = self.ambient();
        let n = self.elems.len();
        let mut maximal: HashSet<(Mask, Box<[u8]>)> = HashSet::new();
        for k in h.elements() {
            let mut map = vec![NONE; n].into_boxed_slice();
            let mut dom: Mask = 0;
            for x in bits(over) {
                let y = amb.conj(self.elems[x], k);
                if let Some(&ly) = self.local.get(&y) {
                    if over >> ly & 1 == 1 {
                        map[x] = ly;
                        dom |= 1 << x;
                    }
                }
            }
            // `dom` is `T ∩ T^{k⁻¹}`, a subgroup; drop values outside it.
            maximal.insert((dom, map));
        }
        let mut homs: HomSets = self
            .subgroups_of(over)
            .map(|m| (m, BTreeSet::new()))
            .collect();
        for (dom, map) in &maximal {
            let full = Morphism {
                src: *dom,
                map: map.clone(),
            };
            for p in self.subgroups_of(*dom) {
                homs.get_mut(&p).unwrap().insert(full.restrict(p));
            }
        }
        homs
    }

    /// The smallest fusion system over `T` containing `seeds` and `F_T(T)`.
    pub fn generate<'a>(
        self: &Arc<Self>,
        over: Mask,
        seeds: impl IntoIterator<Item = &'a Morphism>,
    ) -> Result<FusionSystem> {
        if !self.is_subgroup_mask(over) {
            return Err(SubkitError::PreconditionViolation(
                "T is not a subgroup of S".into(),
            ));
        }
        let mut gens: BTreeSet<Morphism> = BTreeSet::new();
        for m in seeds {
            self.check_morphism(m)?;
            if !subset(m.src, over) || !subset(m.image(), over) {
                return Err(SubkitError::PreconditionViolation(
                    "seed morphism does not live inside T".into(),
                ));
            }
            gens.insert(m.clone());
        }
        let gens: Vec<Morphism> = gens.into_iter().collect();
        let key = (over, gens.clone());
        let cached = self.generated_cache.lock().unwrap().get(&key).cloned();
        let homs = match cached {
            Some(h) => h,
            None => {
                let homs = Arc::new(self.generated_homs(over, &gens));
                self.generated_cache
                    .lock()
                    .unwrap()
                    .insert(key, Arc::clone(&homs));
                homs
            }
        };
        Ok(FusionSystem {
            base: Arc::clone(self),
            over,
            homs,
            realizer: None,
        })
    }

    fn generated_homs(&self, over: Mask, seeds: &[Morphism]) -> HomSets {
        let mut gens: BTreeSet<Morphism> = BTreeSet::new();
        for m in seeds {
            gens.insert(m.inverse());
            gens.insert(m.clone());
        }
        for t in bits(over) {
            gens.insert(self.conjugation(over, t));
        }
        let gens = prune_to_maximal(gens);
        let mut homs = HomSets::new();
        for p in self.subgroups_of(over) {
            let start = self.inclusion(p);
            let mut seen: BTreeSet<Morphism> = BTreeSet::new();
            seen.insert(start.clone());
            let mut queue = VecDeque::from([start]);
            while let Some(phi) = queue.pop_front() {
                let img = phi.image();
                for g in gens.iter().filter(|g| subset(img, g.src)) {
                    let next = phi.then(g).expect("image lies in the source");
                    if !seen.contains(&next) {
                        seen.insert(next.clone());
                        queue.push_back(next);
                    }
                }
            }
            homs.insert(p, seen);
        }
        homs
    }
}

/// Drops every morphism that is the restriction of another one in the set.
fn prune_to_maximal(gens: BTreeSet<Morphism>) -> Vec<Morphism> {
    let list: Vec<Morphism> = gens.into_iter().collect();
    let mut keep = vec![true; list.len()];
    for (i, a) in list.iter().enumerate() {
        for (j, b) in list.iter().enumerate() {
            if i != j && a.src != b.src && subset(a.src, b.src) && b.agrees_with(a, a.src) {
                keep[i] = false;
                break;
            }
        }
    }
    list.into_iter()
        .zip(keep)
        .filter_map(|(m, k)| k.then_some(m))
        .collect()
}

/// A fusion system over `T ≤ S`.
#[derive(Clone)]
pub struct FusionSystem {
    base: Arc<FusionBase>,
    over: Mask,
    homs: Arc<HomSets>,
    realizer: Option<Subgroup>,
}

impl PartialEq for FusionSystem {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.base, &other.base)
            && self.over == other.over
            && (Arc::ptr_eq(&self.homs, &other.homs) || self.homs == other.homs)
    }
}

impl Eq for FusionSystem {}

impl fmt::Debug for FusionSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FusionSystem")
            .field("over_order", &self.over.count_ones())
            .field("morphisms", &self.morphism_count())
            .field("realized", &self.realizer.is_some())
            .finish()
    }
}

impl FusionSystem {
    pub fn base(&self) -> &Arc<FusionBase> {
        &self.base
    }

    pub fn prime(&self) -> usize {
        self.base.p
    }

    /// The `p`-group this system lives over, as a mask.
    pub fn over(&self) -> Mask {
        self.over
    }

    pub fn over_subgroup(&self) -> Subgroup {
        self.base.subgroup(self.over)
    }

    pub fn realizer(&self) -> Option<&Subgroup> {
        self.realizer.as_ref()
    }

    pub fn hom_sets(&self) -> &HomSets {
        &self.homs
    }

    /// `Hom_F(P, T)`; empty when `P` is not a subgroup of `T`.
    pub fn homs_from(&self, p: Mask) -> impl Iterator<Item = &Morphism> + '_ {
        self.homs.get(&p).into_iter().flatten()
    }

    /// `Hom_F(P, Q)`.
    pub fn hom(&self, p: Mask, q: Mask) -> impl Iterator<Item = &Morphism> + '_ {
        self.homs_from(p).filter(move |m| subset(m.image(), q))
    }

    /// `Aut_F(P)`.
    pub fn aut(&self, p: Mask) -> Vec<&Morphism> {
        self.homs_from(p).filter(|m| m.image() == p).collect()
    }

    pub fn contains(&self, m: &Morphism) -> bool {
        self.homs.get(&m.src).is_some_and(|s| s.contains(m))
    }

    pub fn morphism_count(&self) -> usize {
        self.homs.values().map(BTreeSet::len).sum()
    }

    /// Subgroups of `T` in canonical order.
    pub fn subgroups(&self) -> Vec<Mask> {
        self.base.subgroups_of(self.over).collect()
    }

    /// Whether every hom-set of `self` lies in the matching hom-set of `other`.
    pub fn is_subsystem_of(&self, other: &FusionSystem) -> bool {
        Arc::ptr_eq(&self.base, &other.base)
            && subset(self.over, other.over)
            && self
                .homs
                .iter()
                .all(|(p, set)| other.homs.get(p).is_some_and(|o| set.is_subset(o)))
    }

    /// Hom-set-wise intersection, over the intersection of the two `p`-groups.
    pub fn intersection(&self, other: &FusionSystem) -> Result<FusionSystem> {
        if !Arc::ptr_eq(&self.base, &other.base) {
            return Err(SubkitError::AmbientMismatch(
                "fusion systems over different bases".into(),
            ));
        }
        let over = self.over & other.over;
        let mut homs = HomSets::new();
        for p in self.base.subgroups_of(over) {
            let set = match (self.homs.get(&p), other.homs.get(&p)) {
                (Some(a), Some(b)) => a
                    .intersection(b)
                    .filter(|m| subset(m.image(), over))
                    .cloned()
                    .collect(),
                _ => BTreeSet::new(),
            };
            homs.insert(p, set);
        }
        Ok(FusionSystem {
            base: Arc::clone(&self.base),
            over,
            homs: Arc::new(homs),
            realizer: None,
        })
    }

    /// Morphisms not obtainable by restricting another morphism of the system.
    pub fn maximal_morphisms(&self) -> Vec<Morphism> {
        let base = &self.base;
        let mut restricted: HashSet<Morphism> = HashSet::new();
        for (&q, set) in self.homs.iter() {
            let qi = base.lattice_pos[&q];
            for &ri in &base.maximal_below[qi] {
                let r = base.lattice[ri];
                for m in set {
                    restricted.insert(m.restrict(r));
                }
            }
        }
        self.homs
            .values()
            .flatten()
            .filter(|m| !restricted.contains(*m))
            .cloned()
            .collect()
    }

    /// `⟨systems⟩` over `over`.
    pub fn generate(
        base: &Arc<FusionBase>,
        over: Mask,
        systems: &[&FusionSystem],
    ) -> Result<FusionSystem> {
        let mut seeds = Vec::new();
        for f in systems {
            if !Arc::ptr_eq(&f.base, base) {
                return Err(SubkitError::AmbientMismatch(
                    "seed system over a different base".into(),
                ));
            }
            seeds.extend(f.maximal_morphisms());
        }
        base.generate(over, seeds.iter())
    }

    /// F-conjugacy classes of subgroups of `T`, each in canonical order.
    pub fn classes(&self) -> Vec<Vec<Mask>> {
        let mut seen: HashSet<Mask> = HashSet::new();
        let mut out = Vec::new();
        for p in self.base.subgroups_of(self.over) {
            if seen.contains(&p) {
                continue;
            }
            let mut class: Vec<Mask> = self
                .homs_from(p)
                .map(Morphism::image)
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            class.sort_by(|&a, &b| canonical_mask_cmp(a, b));
            seen.extend(class.iter().copied());
            out.push(class);
        }
        out
    }

    /// Fully normalized member of `class`: largest `|N_T(P)|`, first in
    /// canonical order on ties.
    pub fn fully_normalized(&self, class: &[Mask]) -> Mask {
        let mut best = class[0];
        let mut best_n = self.base.normalizer_in(self.over, best).count_ones();
        for &q in &class[1..] {
            let n = self.base.normalizer_in(self.over, q).count_ones();
            if n > best_n {
                best = q;
                best_n = n;
            }
        }
        best
    }

    /// `E^a`, the system over `T^a` obtained by conjugating with `a ∈ S`.
    pub fn conjugate(&self, a: usize) -> FusionSystem {
        let base = &self.base;
        let ai = base.inv(a);
        let mut homs = HomSets::new();
        for (&p, set) in self.homs.iter() {
            let pa = base.conjugate_mask(p, a);
            let conj: BTreeSet<Morphism> = set
                .iter()
                .map(|m| {
                    let mut map = vec![NONE; base.order()].into_boxed_slice();
                    for y in bits(pa) {
                        map[y] = base.conj(m.apply(base.conj(y, ai)), a) as u8;
                    }
                    Morphism { src: pa, map }
                })
                .collect();
            homs.insert(pa, conj);
        }
        FusionSystem {
            base: Arc::clone(base),
            over: base.conjugate_mask(self.over, a),
            homs: Arc::new(homs),
            realizer: self.realizer.as_ref().map(|h| h.conjugate(base.elem_of(a))),
        }
    }

    /// Forgets the realizing group, keeping the hom-sets.
    pub fn without_realizer(&self) -> FusionSystem {
        FusionSystem {
            realizer: None,
            ..self.clone()
        }
    }

    /// JSON-friendly summary: hom-set sizes per source subgroup.
    pub fn summary(&self) -> Vec<(usize, usize, usize)> {
        self.homs
            .iter()
            .map(|(&p, set)| {
                let auts = set.iter().filter(|m| m.image() == p).count();
                (p.count_ones() as usize, set.len(), auts)
            })
            .collect()
    }
}

/// `F_S(G)` for `S` a Sylow `p`-subgroup of `g`.
pub fn fusion_from_group(g: &Subgroup, s: &Subgroup, p: usize) -> Result<FusionSystem> {
    fusion_from_group_with(g, s, p, &Budget::from_env())
}

pub fn fusion_from_group_with(
    g: &Subgroup,
    s: &Subgroup,
    p: usize,
    budget: &Budget,
) -> Result<FusionSystem> {
    g.check_same_ambient(s)?;
    if !s.is_subgroup_of(g) || p_part(g.order(), p) != s.order() {
        return Err(SubkitError::PreconditionViolation(format!(
            "subgroup of order {} is not a Sylow {p}-subgroup",
            s.order()
        )));
    }
    let base = FusionBase::new(s, p, budget)?;
    let full = base.full();
    base.realized(g, full)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{group_from_generators, sylow_subgroup};

    fn a4() -> Arc<Group> {
        Arc::new(
            group_from_generators(
                4,
                vec![
                    Permutation::new(vec![1, 2, 0, 3]).unwrap(),
                    Permutation::new(vec![1, 0, 3, 2]).unwrap(),
                ],
            )
            .unwrap(),
        )
    }

    #[test]
    fn a4_fusion_on_klein_group() {
        let g = a4();
        let whole = g.as_subgroup();
        let s = sylow_subgroup(&whole, 2);
        let f = fusion_from_group(&whole, &s, 2).unwrap();
        let base = f.base().clone();
        assert_eq!(f.aut(base.full()).len(), 3);
        let order_two: Vec<Mask> = base
            .lattice()
            .iter()
            .copied()
            .filter(|m| m.count_ones() == 2)
            .collect();
        assert_eq!(order_two.len(), 3);
        for &a in &order_two {
            for &b in &order_two {
                assert!(f.hom(a, b).next().is_some());
            }
        }
    }

    #[test]
    fn generation_is_idempotent() {
        let g = a4();
        let whole = g.as_subgroup();
        let s = sylow_subgroup(&whole, 2);
        let f = fusion_from_group(&whole, &s, 2).unwrap();
        let again = FusionSystem::generate(f.base(), f.over(), &[&f]).unwrap();
        assert_eq!(again, f);
        let trivial = f.base().generate(f.over(), []).unwrap();
        assert_eq!(trivial.aut(f.over()).len(), 1);
        let joined = FusionSystem::generate(f.base(), f.over(), &[&trivial, &f]).unwrap();
        assert_eq!(joined, f);
    }

    #[test]
    fn morphism_algebra() {
        let g = a4();
        let whole = g.as_subgroup();
        let s = sylow_subgroup(&whole, 2);
        let f = fusion_from_group(&whole, &s, 2).unwrap();
        let base = f.base();
        for m in f.aut(base.full()) {
            assert!(m.then(&m.inverse()).unwrap().is_identity());
            base.check_morphism(m).unwrap();
        }
    }
}
