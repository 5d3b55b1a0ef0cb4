//! Fully enumerated finite permutation groups and their subgroups.
//!
//! A [`Group`] stores every element, sorted lexicographically by image array,
//! so the identity is always element `0`. Subgroups are bitsets over the
//! element indices of a shared ambient group; two subgroups are equal when
//! they have the same ambient group and the same elements.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::error::{Result, SubkitError};
use crate::perm::Permutation;

/// Index of an element in its ambient [`Group`].
pub type Elem = usize;

/// Groups up to this order keep a full multiplication table.
const TABLE_LIMIT: usize = 2048;

pub const DEFAULT_MAX_ELEMENTS: usize = 100_000;
pub const DEFAULT_MAX_SUBGROUPS: usize = 20_000;
pub const MAX_ELEMENTS_ENV: &str = "SUBKIT_MAX_ELEMENTS";

/// Size limits for exhaustive enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_elements: usize,
    pub max_subgroups: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_elements: DEFAULT_MAX_ELEMENTS,
            max_subgroups: DEFAULT_MAX_SUBGROUPS,
        }
    }
}

impl Budget {
    /// Default budget, with the element cap overridden by `SUBKIT_MAX_ELEMENTS`.
    pub fn from_env() -> Self {
        let mut b = Budget::default();
        if let Some(n) = std::env::var(MAX_ELEMENTS_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
        {
            b.max_elements = n;
        }
        b
    }
}

pub struct Group {
    name: Option<String>,
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
    index: HashMap<Permutation, u32>,
    inverses: Vec<u32>,
    table: Option<Vec<u32>>,
    generator_ids: Vec<Elem>,
}

impl Group {
    /// Enumerates the group generated by `gens` on `degree` points.
    pub fn generate(degree: usize, gens: Vec<Permutation>, budget: &Budget) -> Result<Group> {
        if degree == 0 {
            return Err(SubkitError::MalformedPermutation(
                "degree must be positive".into(),
            ));
        }
        for g in &gens {
            if g.degree() != degree {
                return Err(SubkitError::MalformedPermutation(format!(
                    "generator {g} has degree {} but the group has degree {degree}",
                    g.degree()
                )));
            }
        }
        let id = Permutation::identity(degree);
        let mut seen: HashSet<Permutation> = HashSet::new();
        seen.insert(id.clone());
        let mut queue = vec![id];
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head].clone();
            head += 1;
            for g in &gens {
                let y = x.then(g);
                if !seen.contains(&y) {
                    if seen.len() >= budget.max_elements {
                        return Err(SubkitError::BudgetExceeded {
                            what: "group order",
                            limit: budget.max_elements,
                        });
                    }
                    seen.insert(y.clone());
                    queue.push(y);
                }
            }
        }
        let mut elements = queue;
        elements.sort();
        Ok(Group::from_sorted(None, degree, gens, elements))
    }

    fn from_sorted(
        name: Option<String>,
        degree: usize,
        generators: Vec<Permutation>,
        elements: Vec<Permutation>,
    ) -> Group {
        let index: HashMap<Permutation, u32> = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i as u32))
            .collect();
        let inverses = elements.iter().map(|p| index[&p.inverse()]).collect();
        let n = elements.len();
        let table = (n <= TABLE_LIMIT).then(|| {
            let mut t = Vec::with_capacity(n * n);
            for a in &elements {
                for b in &elements {
                    t.push(index[&a.then(b)]);
                }
            }
            t
        });
        let generator_ids = generators.iter().map(|g| index[g] as Elem).collect();
        Group {
            name,
            degree,
            generators,
            elements,
            index,
            inverses,
            table,
            generator_ids,
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn label(&self) -> String {
        self.name
            .clone()
            .unwrap_or_else(|| format!("group of order {}", self.order()))
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn generator_ids(&self) -> &[Elem] {
        &self.generator_ids
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn element(&self, e: Elem) -> &Permutation {
        &self.elements[e]
    }

    pub fn index_of(&self, p: &Permutation) -> Option<Elem> {
        self.index.get(p).map(|&i| i as Elem)
    }

    #[inline]
    pub fn identity(&self) -> Elem {
        0
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.table {
            Some(t) => t[a * self.elements.len() + b] as Elem,
            None => self.index[&self.elements[a].then(&self.elements[b])] as Elem,
        }
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inverses[a] as Elem
    }

    /// `x^g = g⁻¹ x g`.
    #[inline]
    pub fn conj(&self, x: Elem, g: Elem) -> Elem {
        self.mul(self.mul(self.inv(g), x), g)
    }

    pub fn pow(&self, x: Elem, k: usize) -> Elem {
        let mut acc = self.identity();
        for _ in 0..k {
            acc = self.mul(acc, x);
        }
        acc
    }

    pub fn element_order(&self, x: Elem) -> usize {
        let mut k = 1;
        let mut y = x;
        while y != self.identity() {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    /// Product of a word, left to right.
    pub fn product(&self, word: &[Elem]) -> Elem {
        word.iter()
            .fold(self.identity(), |acc, &x| self.mul(acc, x))
    }

    /// Element set of the subgroup generated by `gens`.
    pub fn closure(&self, gens: &[Elem]) -> FixedBitSet {
        let mut bits = FixedBitSet::with_capacity(self.order());
        bits.insert(self.identity());
        let mut queue = vec![self.identity()];
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for &g in gens {
                let y = self.mul(x, g);
                if !bits.put(y) {
                    queue.push(y);
                }
            }
        }
        bits
    }

    pub fn as_subgroup(self: &Arc<Self>) -> Subgroup {
        Subgroup::whole(self)
    }
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Group")
            .field("name", &self.name)
            .field("degree", &self.degree)
            .field("order", &self.order())
            .field("generators", &self.generators)
            .finish()
    }
}

/// Enumerates the group generated by `gens`, honouring `SUBKIT_MAX_ELEMENTS`.
pub fn group_from_generators(degree: usize, gens: Vec<Permutation>) -> Result<Group> {
    Group::generate(degree, gens, &Budget::from_env())
}

#[derive(Clone)]
pub struct Subgroup {
    ambient: Arc<Group>,
    members: FixedBitSet,
    gens: Vec<Elem>,
    order: usize,
}

impl Subgroup {
    pub fn whole(ambient: &Arc<Group>) -> Subgroup {
        let mut members = FixedBitSet::with_capacity(ambient.order());
        members.insert_range(..);
        Subgroup {
            ambient: Arc::clone(ambient),
            order: ambient.order(),
            gens: ambient.generator_ids().to_vec(),
            members,
        }
    }

    pub fn trivial(ambient: &Arc<Group>) -> Subgroup {
        let mut members = FixedBitSet::with_capacity(ambient.order());
        members.insert(ambient.identity());
        Subgroup {
            ambient: Arc::clone(ambient),
            members,
            gens: Vec::new(),
            order: 1,
        }
    }

    /// Subgroup generated by the given elements; redundant generators are dropped.
    pub fn generated(ambient: &Arc<Group>, gens: &[Elem]) -> Subgroup {
        let mut kept: Vec<Elem> = Vec::new();
        let mut members = ambient.closure(&[]);
        for &g in gens {
            if members.contains(g) {
                continue;
            }
            kept.push(g);
            members = ambient.closure(&kept);
        }
        let order = members.count_ones(..);
        Subgroup {
            ambient: Arc::clone(ambient),
            members,
            gens: kept,
            order,
        }
    }

    /// Wraps an element set that must already be a subgroup.
    pub fn from_members(ambient: &Arc<Group>, members: FixedBitSet) -> Result<Subgroup> {
        let candidates: Vec<Elem> = members.ones().collect();
        let sub = Subgroup::generated(ambient, &candidates);
        if sub.members != members {
            return Err(SubkitError::PreconditionViolation(
                "element set is not closed under multiplication".into(),
            ));
        }
        Ok(sub)
    }

    /// Subgroup generated by permutations, each of which must lie in `ambient`.
    pub fn from_perms(ambient: &Arc<Group>, perms: &[Permutation]) -> Result<Subgroup> {
        let mut ids = Vec::with_capacity(perms.len());
        for p in perms {
            match ambient.index_of(p) {
                Some(i) => ids.push(i),
                None => {
                    return Err(SubkitError::AmbientMismatch(format!(
                        "{p} is not an element of {}",
                        ambient.label()
                    )))
                }
            }
        }
        Ok(Subgroup::generated(ambient, &ids))
    }

    pub fn ambient(&self) -> &Arc<Group> {
        &self.ambient
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn gens(&self) -> &[Elem] {
        &self.gens
    }

    pub fn members(&self) -> &FixedBitSet {
        &self.members
    }

    #[inline]
    pub fn contains(&self, e: Elem) -> bool {
        self.members.contains(e)
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        self.members.ones()
    }

    pub fn element_vec(&self) -> Vec<Elem> {
        self.members.ones().collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn same_ambient(&self, other: &Subgroup) -> bool {
        Arc::ptr_eq(&self.ambient, &other.ambient)
    }

    pub fn check_same_ambient(&self, other: &Subgroup) -> Result<()> {
        if self.same_ambient(other) {
            Ok(())
        } else {
            Err(SubkitError::AmbientMismatch(format!(
                "subgroups live in {} and {}",
                self.ambient.label(),
                other.ambient.label()
            )))
        }
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.same_ambient(other) && self.members.is_subset(&other.members)
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        let mut bits = self.members.clone();
        bits.intersect_with(&other.members);
        Subgroup::from_members(&self.ambient, bits).expect("intersection of subgroups")
    }

    pub fn join(&self, other: &Subgroup) -> Subgroup {
        if other.is_subgroup_of(self) {
            return self.clone();
        }
        if self.is_subgroup_of(other) {
            return other.clone();
        }
        let mut gens = self.gens.clone();
        gens.extend_from_slice(&other.gens);
        Subgroup::generated(&self.ambient, &gens)
    }

    /// `H^g = g⁻¹ H g`.
    pub fn conjugate(&self, g: Elem) -> Subgroup {
        let amb = &self.ambient;
        let mut bits = FixedBitSet::with_capacity(amb.order());
        for x in self.members.ones() {
            bits.insert(amb.conj(x, g));
        }
        let gens = self.gens.iter().map(|&x| amb.conj(x, g)).collect();
        Subgroup {
            ambient: Arc::clone(amb),
            members: bits,
            gens,
            order: self.order,
        }
    }

    /// Whether `g` normalizes this subgroup.
    pub fn is_normalized_by(&self, g: Elem) -> bool {
        self.gens
            .iter()
            .all(|&h| self.members.contains(self.ambient.conj(h, g)))
    }

    /// Whether this subgroup is normal in `k` (and contained in it).
    pub fn is_normal_in(&self, k: &Subgroup) -> bool {
        self.is_subgroup_of(k) && k.gens.iter().all(|&g| self.is_normalized_by(g))
    }

    /// Whether every element of `other` normalizes this subgroup.
    pub fn is_normalized_by_subgroup(&self, other: &Subgroup) -> bool {
        other.gens.iter().all(|&g| self.is_normalized_by(g))
    }

    pub fn is_p_group(&self, p: usize) -> bool {
        is_prime_power_of(self.order, p)
    }

    pub fn is_abelian(&self) -> bool {
        let amb = &self.ambient;
        self.gens
            .iter()
            .all(|&a| self.gens.iter().all(|&b| amb.mul(a, b) == amb.mul(b, a)))
    }

    /// Standalone copy of this subgroup as a permutation group.
    pub fn to_group(&self) -> Group {
        let gens: Vec<Permutation> = self
            .gens
            .iter()
            .map(|&g| self.ambient.element(g).clone())
            .collect();
        let mut elements: Vec<Permutation> = self
            .members
            .ones()
            .map(|e| self.ambient.element(e).clone())
            .collect();
        elements.sort();
        Group::from_sorted(None, self.ambient.degree(), gens, elements)
    }

    /// Generators as permutations.
    pub fn gen_perms(&self) -> Vec<Permutation> {
        self.gens
            .iter()
            .map(|&g| self.ambient.element(g).clone())
            .collect()
    }

    pub fn canonical_cmp(&self, other: &Subgroup) -> Ordering {
        self.order
            .cmp(&other.order)
            .then_with(|| self.members.ones().cmp(other.members.ones()))
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.same_ambient(other) && self.members == other.members
    }
}

impl Eq for Subgroup {}

impl Hash for Subgroup {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.members.hash(state);
    }
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self
            .gens
            .iter()
            .map(|&g| self.ambient.element(g).to_string())
            .collect();
        write!(f, "Subgroup(order {}, <{}>)", self.order, gens.join(", "))
    }
}

pub fn sort_canonical(subgroups: &mut [Subgroup]) {
    subgroups.sort_by(|a, b| a.canonical_cmp(b));
}

/// `⟨∪ parts⟩` inside `ambient`.
pub fn subgroup_join(ambient: &Arc<Group>, parts: &[Subgroup]) -> Result<Subgroup> {
    let mut gens = Vec::new();
    for p in parts {
        if !Arc::ptr_eq(p.ambient(), ambient) {
            return Err(SubkitError::AmbientMismatch(format!(
                "join part does not live in {}",
                ambient.label()
            )));
        }
        gens.extend_from_slice(p.gens());
    }
    Ok(Subgroup::generated(ambient, &gens))
}

/// A Sylow `p`-subgroup of `g`, grown one factor of `p` at a time inside
/// normalizers. At each step the lexicographically least extension is kept.
pub fn sylow_subgroup(g: &Subgroup, p: usize) -> Subgroup {
    let amb = g.ambient();
    let target = p_part(g.order(), p);
    let mut current = Subgroup::trivial(amb);
    while current.order() < target {
        let normalizer = normalizer_in(g, &current);
        let mut best: Option<Subgroup> = None;
        let mut covered = current.members().clone();
        for x in normalizer.elements() {
            if covered.contains(x) {
                continue;
            }
            if !current.contains(amb.pow(x, p)) {
                continue;
            }
            let mut gens = current.gens().to_vec();
            gens.push(x);
            let cand = Subgroup::generated(amb, &gens);
            covered.union_with(cand.members());
            let better = match &best {
                None => true,
                Some(b) => cand.canonical_cmp(b) == Ordering::Less,
            };
            if better {
                best = Some(cand);
            }
        }
        current = best.expect("a p-subgroup below the Sylow order has a proper p-extension");
    }
    current
}

fn normalizer_in(g: &Subgroup, h: &Subgroup) -> Subgroup {
    let amb = g.ambient();
    let gens: Vec<Elem> = g.elements().filter(|&x| h.is_normalized_by(x)).collect();
    Subgroup::generated(amb, &gens)
}

fn centralizer_in(g: &Subgroup, h: &Subgroup) -> Subgroup {
    let amb = g.ambient();
    let gens: Vec<Elem> = g
        .elements()
        .filter(|&x| h.gens().iter().all(|&y| amb.mul(x, y) == amb.mul(y, x)))
        .collect();
    Subgroup::generated(amb, &gens)
}

/// `(N_G(H), C_G(H))` by exhaustive scan of `g`.
pub fn normalizer_centralizer(g: &Subgroup, h: &Subgroup) -> Result<(Subgroup, Subgroup)> {
    g.check_same_ambient(h)?;
    if !h.is_subgroup_of(g) {
        return Err(SubkitError::AmbientMismatch(
            "subgroup is not contained in the group".into(),
        ));
    }
    Ok((normalizer_in(g, h), centralizer_in(g, h)))
}

pub fn normalizer(g: &Subgroup, h: &Subgroup) -> Subgroup {
    normalizer_in(g, h)
}

pub fn centralizer(g: &Subgroup, h: &Subgroup) -> Subgroup {
    centralizer_in(g, h)
}

/// All subgroups of the `p`-group `s`, in canonical order (by order, then
/// lexicographically by element list).
pub fn enumerate_subgroups(s: &Subgroup, budget: &Budget) -> Result<Vec<Subgroup>> {
    let p = match prime_of_prime_power(s.order()) {
        Some(p) => p,
        None if s.order() == 1 => 2,
        None => {
            return Err(SubkitError::PreconditionViolation(format!(
                "subgroup enumeration needs a p-group, got order {}",
                s.order()
            )))
        }
    };
    let amb = s.ambient();
    let mut seen: HashSet<FixedBitSet> = HashSet::new();
    let trivial = Subgroup::trivial(amb);
    seen.insert(trivial.members().clone());
    let mut all = vec![trivial.clone()];
    let mut layer = vec![trivial];
    while !layer.is_empty() {
        let mut next = Vec::new();
        for q in &layer {
            let norm = normalizer_in(s, q);
            let mut covered = q.members().clone();
            for x in norm.elements() {
                if covered.contains(x) || !q.contains(amb.pow(x, p)) {
                    continue;
                }
                let mut gens = q.gens().to_vec();
                gens.push(x);
                let r = Subgroup::generated(amb, &gens);
                covered.union_with(r.members());
                if seen.insert(r.members().clone()) {
                    if seen.len() > budget.max_subgroups {
                        return Err(SubkitError::BudgetExceeded {
                            what: "subgroup lattice",
                            limit: budget.max_subgroups,
                        });
                    }
                    next.push(r);
                }
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    sort_canonical(&mut all);
    Ok(all)
}

pub fn is_prime(n: usize) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

pub fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Largest power of `p` dividing `n`.
pub fn p_part(mut n: usize, p: usize) -> usize {
    let mut part = 1;
    while n.is_multiple_of(p) {
        n /= p;
        part *= p;
    }
    part
}

pub fn is_prime_power_of(n: usize, p: usize) -> bool {
    p_part(n, p) == n
}

pub fn prime_of_prime_power(n: usize) -> Option<usize> {
    match prime_divisors(n).as_slice() {
        [p] => Some(*p),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(degree: usize, cycles: &[&[u32]]) -> Permutation {
        Permutation::from_cycles(degree, cycles).unwrap()
    }

    fn s4() -> Arc<Group> {
        Arc::new(
            group_from_generators(4, vec![perm(4, &[&[0, 1, 2, 3]]), perm(4, &[&[0, 1]])]).unwrap(),
        )
    }

    #[test]
    fn identity_is_element_zero() {
        let g = s4();
        assert!(g.element(0).is_identity());
        assert_eq!(g.order(), 24);
    }

    #[test]
    fn trivial_group_from_no_generators() {
        let g = group_from_generators(4, vec![]).unwrap();
        assert_eq!(g.order(), 1);
    }

    #[test]
    fn budget_is_enforced() {
        let budget = Budget {
            max_elements: 10,
            ..Budget::default()
        };
        let err = Group::generate(
            4,
            vec![perm(4, &[&[0, 1, 2, 3]]), perm(4, &[&[0, 1]])],
            &budget,
        )
        .unwrap_err();
        assert!(matches!(err, SubkitError::BudgetExceeded { .. }));
    }

    #[test]
    fn degree_mismatch_is_malformed() {
        let err = group_from_generators(4, vec![perm(3, &[&[0, 1]])]).unwrap_err();
        assert!(matches!(err, SubkitError::MalformedPermutation(_)));
    }

    #[test]
    fn sylow_orders_in_s4() {
        let g = s4();
        let whole = g.as_subgroup();
        assert_eq!(sylow_subgroup(&whole, 2).order(), 8);
        assert_eq!(sylow_subgroup(&whole, 3).order(), 3);
        assert!(sylow_subgroup(&whole, 5).is_trivial());
    }

    #[test]
    fn prime_helpers() {
        assert_eq!(prime_divisors(144), vec![2, 3]);
        assert_eq!(p_part(144, 2), 16);
        assert_eq!(prime_of_prime_power(27), Some(3));
        assert_eq!(prime_of_prime_power(12), None);
        assert!(is_prime(5) && !is_prime(1) && !is_prime(9));
    }

    #[test]
    fn non_p_group_enumeration_is_refused() {
        let g = s4();
        assert!(enumerate_subgroups(&g.as_subgroup(), &Budget::default()).is_err());
    }
}
