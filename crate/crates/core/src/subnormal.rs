//! Normal closures, subnormal series, Wielandt joins, the restriction
//! subgroups `S_w`, the three splitting constructions and the standard
//! characteristic subgroups.
//!
//! Every operation takes the group it works in as a [`Subgroup`] of some
//! ambient [`Group`](crate::group::Group), so the same routines apply to `G`
//! itself and to the intermediate subgroups (`MS`, `⟨H^G⟩`, …) that the
//! constructive proofs descend into.

use fixedbitset::FixedBitSet;
use std::collections::{HashMap, HashSet};

use crate::error::{Result, SubkitError};
use crate::group::{
    centralizer, is_prime_power_of, normalizer, p_part, prime_divisors, prime_of_prime_power,
    sort_canonical, sylow_subgroup, Budget, Elem, Group, Subgroup,
};

fn check_inside(g: &Subgroup, h: &Subgroup, what: &str) -> Result<()> {
    g.check_same_ambient(h)?;
    if !h.is_subgroup_of(g) {
        return Err(SubkitError::AmbientMismatch(format!(
            "{what} is not contained in the group"
        )));
    }
    Ok(())
}

/// `⟨H^G⟩`, the smallest normal subgroup of `g` containing `h`.
pub fn normal_closure(g: &Subgroup, h: &Subgroup) -> Result<Subgroup> {
    check_inside(g, h, "subgroup")?;
    Ok(normal_closure_unchecked(g, h))
}

pub(crate) fn normal_closure_unchecked(g: &Subgroup, h: &Subgroup) -> Subgroup {
    let amb = g.ambient();
    let mut gens = h.gens().to_vec();
    let mut members = h.members().clone();
    let mut pending = gens.clone();
    while let Some(y) = pending.pop() {
        for &x in g.gens() {
            let c = amb.conj(y, x);
            if !members.contains(c) {
                gens.push(c);
                pending.push(c);
                members = amb.closure(&gens);
            }
        }
    }
    Subgroup::generated(amb, &gens)
}

/// A canonical subnormal series `H = links[0] ⊴ links[1] ⊴ … ⊴ links[k] = G`
/// in which every link is the normal closure of `H` in its successor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubnormalSeries {
    links: Vec<Subgroup>,
}

impl SubnormalSeries {
    pub fn links(&self) -> &[Subgroup] {
        &self.links
    }

    /// Number of normal steps.
    pub fn length(&self) -> usize {
        self.links.len() - 1
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.links[0]
    }

    pub fn top(&self) -> &Subgroup {
        self.links.last().expect("series is never empty")
    }

    /// Re-checks containment, normality and the canonical property of every link.
    pub fn verify(&self, g: &Subgroup, h: &Subgroup) -> bool {
        if self.subgroup() != h || self.top() != g {
            return false;
        }
        self.links
            .windows(2)
            .all(|w| w[0].is_normal_in(&w[1]) && normal_closure_unchecked(&w[1], h) == w[0])
    }

    /// Whether conjugation by every element of `x` maps each link onto itself.
    pub fn is_invariant_under(&self, x: &Subgroup) -> bool {
        self.links.iter().all(|l| l.is_normalized_by_subgroup(x))
    }
}

#[derive(Clone, Debug)]
pub enum SubnormalVerdict {
    Subnormal(SubnormalSeries),
    /// The descending normal-closure chain stopped at `fixed_point ≠ H`.
    NotSubnormal {
        fixed_point: Subgroup,
    },
}

impl SubnormalVerdict {
    pub fn series(&self) -> Option<&SubnormalSeries> {
        match self {
            SubnormalVerdict::Subnormal(s) => Some(s),
            SubnormalVerdict::NotSubnormal { .. } => None,
        }
    }

    pub fn is_subnormal(&self) -> bool {
        matches!(self, SubnormalVerdict::Subnormal(_))
    }
}

/// Iterates `K₀ = G, K_{i+1} = ⟨H^{K_i}⟩` to its fixed point.
pub fn subnormal_series(g: &Subgroup, h: &Subgroup) -> Result<SubnormalVerdict> {
    check_inside(g, h, "subgroup")?;
    let mut chain = vec![g.clone()];
    loop {
        let current = chain.last().unwrap();
        let next = normal_closure_unchecked(current, h);
        if &next == current {
            break;
        }
        chain.push(next);
    }
    let bottom = chain.last().unwrap().clone();
    if &bottom == h {
        chain.reverse();
        Ok(SubnormalVerdict::Subnormal(SubnormalSeries {
            links: chain,
        }))
    } else {
        Ok(SubnormalVerdict::NotSubnormal {
            fixed_point: bottom,
        })
    }
}

pub fn is_subnormal(g: &Subgroup, h: &Subgroup) -> bool {
    subnormal_series(g, h)
        .map(|v| v.is_subnormal())
        .unwrap_or(false)
}

fn require_subnormal(g: &Subgroup, h: &Subgroup, what: &str) -> Result<SubnormalSeries> {
    match subnormal_series(g, h)? {
        SubnormalVerdict::Subnormal(s) => Ok(s),
        SubnormalVerdict::NotSubnormal { fixed_point } => Err(SubkitError::NotSubnormal(format!(
            "{what} stops at a subgroup of order {}",
            fixed_point.order()
        ))),
    }
}

fn require_sylow(g: &Subgroup, s: &Subgroup) -> Result<usize> {
    check_inside(g, s, "Sylow subgroup")?;
    if s.order() == 1 {
        // Any prime not dividing |G| works; only the order matters below.
        return Ok(0);
    }
    let p = prime_of_prime_power(s.order()).ok_or_else(|| {
        SubkitError::PreconditionViolation("Sylow subgroup is not a p-group".into())
    })?;
    if p_part(g.order(), p) != s.order() {
        return Err(SubkitError::PreconditionViolation(format!(
            "subgroup of order {} is not a Sylow {p}-subgroup of a group of order {}",
            s.order(),
            g.order()
        )));
    }
    Ok(p)
}

/// Result of joining subnormal subgroups.
#[derive(Clone, Debug)]
pub struct WielandtJoin {
    pub join: Subgroup,
    pub series: SubnormalSeries,
    /// `⟨H₁,…,H_n⟩ ∩ S`.
    pub join_meet_sylow: Subgroup,
    /// `⟨H₁ ∩ S, …, H_n ∩ S⟩`.
    pub meets_joined: Subgroup,
}

impl WielandtJoin {
    pub fn identity_holds(&self) -> bool {
        self.join_meet_sylow == self.meets_joined
    }
}

/// Joins two subnormal subgroups, certifies the join is subnormal and
/// evaluates both sides of `⟨H₁,H₂⟩ ∩ S = ⟨H₁∩S, H₂∩S⟩`.
pub fn wielandt_join(
    g: &Subgroup,
    s: &Subgroup,
    h1: &Subgroup,
    h2: &Subgroup,
) -> Result<WielandtJoin> {
    wielandt_join_many(g, s, &[h1.clone(), h2.clone()])
}

pub fn wielandt_join_many(g: &Subgroup, s: &Subgroup, parts: &[Subgroup]) -> Result<WielandtJoin> {
    require_sylow(g, s)?;
    for (i, h) in parts.iter().enumerate() {
        require_subnormal(g, h, &format!("input {}", i + 1))?;
    }
    let mut join = Subgroup::trivial(g.ambient());
    let mut meets = Subgroup::trivial(g.ambient());
    for h in parts {
        join = join.join(h);
        meets = meets.join(&h.intersection(s));
    }
    let series = require_subnormal(g, &join, "join")?;
    Ok(WielandtJoin {
        join_meet_sylow: join.intersection(s),
        join,
        series,
        meets_joined: meets,
    })
}

/// Members of `S_w = {x ∈ S : x^{f₁⋯f_i} ∈ S for every i}`.
pub fn restriction_members(amb: &Group, s: &Subgroup, word: &[Elem]) -> FixedBitSet {
    let mut bits = FixedBitSet::with_capacity(amb.order());
    'outer: for x in s.elements() {
        let mut y = x;
        for &f in word {
            y = amb.conj(y, f);
            if !s.contains(y) {
                continue 'outer;
            }
        }
        bits.insert(x);
    }
    bits
}

/// `S_w` as a subgroup; `S` itself for the empty word.
pub fn s_restriction(g: &Subgroup, s: &Subgroup, word: &[Elem]) -> Result<Subgroup> {
    check_inside(g, s, "S")?;
    if let Some(&bad) = word
        .iter()
        .find(|&&f| f >= g.ambient().order() || !g.contains(f))
    {
        return Err(SubkitError::AmbientMismatch(format!(
            "word letter {bad} is not an element of the group"
        )));
    }
    let bits = restriction_members(g.ambient(), s, word);
    Subgroup::from_members(g.ambient(), bits)
}

/// A factorization `g = a·b` with `S_g = S_{(a,b)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitWitness {
    pub a: Elem,
    pub b: Elem,
    pub product: Elem,
    pub restriction: Subgroup,
}

impl SplitWitness {
    fn build(g: &Subgroup, s: &Subgroup, a: Elem, b: Elem, x: Elem) -> Result<SplitWitness> {
        let restriction = s_restriction(g, s, &[a, b])?;
        Ok(SplitWitness {
            a,
            b,
            product: x,
            restriction,
        })
    }

    /// Independently recomputes `a·b`, `S_g` and `S_{(a,b)}`.
    pub fn holds(&self, s: &Subgroup) -> bool {
        let amb = s.ambient();
        amb.mul(self.a, self.b) == self.product
            && restriction_members(amb, s, &[self.product])
                == restriction_members(amb, s, &[self.a, self.b])
            && &restriction_members(amb, s, &[self.a, self.b]) == self.restriction.members()
    }
}

fn split_is_valid(amb: &Group, s: &Subgroup, a: Elem, b: Elem, x: Elem) -> bool {
    amb.mul(a, b) == x && restriction_members(amb, s, &[x]) == restriction_members(amb, s, &[a, b])
}

/// Least `(a, b)` with `a ∈ left`, `b` accepted by `right`, `a·b = x` and
/// `S_x = S_{(a,b)}`.
fn exhaustive_split(
    amb: &Group,
    s: &Subgroup,
    left: &Subgroup,
    right: impl Fn(Elem) -> bool,
    x: Elem,
) -> Option<(Elem, Elem)> {
    let target = restriction_members(amb, s, &[x]);
    left.elements().find_map(|a| {
        let b = amb.mul(amb.inv(a), x);
        (right(b) && restriction_members(amb, s, &[a, b]) == target).then_some((a, b))
    })
}

fn require_normal(g: &Subgroup, n: &Subgroup, what: &str) -> Result<()> {
    check_inside(g, n, what)?;
    if !n.is_normal_in(g) {
        return Err(SubkitError::PreconditionViolation(format!(
            "{what} is not normal in the group"
        )));
    }
    Ok(())
}

fn require_element(g: &Subgroup, x: Elem) -> Result<()> {
    if x >= g.ambient().order() || !g.contains(x) {
        return Err(SubkitError::PreconditionViolation(format!(
            "element {x} is not in the group"
        )));
    }
    Ok(())
}

/// Splits `x = n·f` with `n ∈ N`, `f ∈ N_G(S∩N)` and `S_x = S_{(n,f)}`:
/// a Frattini factorization followed by a Sylow correction inside
/// `S·N_N(S∩N)`.
pub fn frattini_split(g: &Subgroup, s: &Subgroup, n: &Subgroup, x: Elem) -> Result<SplitWitness> {
    require_sylow(g, s)?;
    require_normal(g, n, "N")?;
    require_element(g, x)?;
    let amb = g.ambient();
    let t = s.intersection(n);
    let ngt = normalizer(g, &t);
    if x == amb.identity() {
        return SplitWitness::build(g, s, x, x, x);
    }
    let m = n
        .elements()
        .find(|&m| ngt.contains(amb.mul(amb.inv(m), x)))
        .ok_or_else(|| SubkitError::NoWitness("Frattini factorization failed".into()))?;
    let h = amb.mul(amb.inv(m), x);
    let p_m = restriction_members(amb, s, &[x])
        .ones()
        .map(|y| amb.conj(y, m))
        .collect::<Vec<_>>();
    let nnt = normalizer(n, &t);
    let corrected = nnt
        .elements()
        .find(|&y| p_m.iter().all(|&z| s.contains(amb.conj(z, y))));
    if let Some(y) = corrected {
        let a = amb.mul(m, y);
        let b = amb.mul(amb.inv(y), h);
        if split_is_valid(amb, s, a, b, x) {
            return SplitWitness::build(g, s, a, b, x);
        }
    }
    let (a, b) = exhaustive_split(amb, s, n, |b| ngt.contains(b), x)
        .ok_or_else(|| SubkitError::NoWitness("no Frattini split exists".into()))?;
    SplitWitness::build(g, s, a, b, x)
}

/// Splits `x ∈ MN` as `x = a·b`, `a ∈ M`, `b ∈ N`, with `S_x = S_{(a,b)}`.
pub fn normal_product_split(
    g: &Subgroup,
    s: &Subgroup,
    m: &Subgroup,
    n: &Subgroup,
    x: Elem,
) -> Result<SplitWitness> {
    require_sylow(g, s)?;
    require_normal(g, m, "M")?;
    require_normal(g, n, "N")?;
    require_element(g, x)?;
    let (a, b) = product_split_pair(g, s, m, n, x)?;
    SplitWitness::build(g, s, a, b, x)
}

fn product_split_pair(
    g: &Subgroup,
    s: &Subgroup,
    m: &Subgroup,
    n: &Subgroup,
    x: Elem,
) -> Result<(Elem, Elem)> {
    let amb = g.ambient();
    if m.contains(x) {
        return Ok((x, amb.identity()));
    }
    if n.contains(x) {
        return Ok((amb.identity(), x));
    }
    let m0 = m
        .elements()
        .find(|&a| n.contains(amb.mul(amb.inv(a), x)))
        .ok_or_else(|| SubkitError::NotInProduct("MN".into()))?;
    let n0 = amb.mul(amb.inv(m0), x);
    let q: Vec<Elem> = restriction_members(amb, s, &[x])
        .ones()
        .map(|y| amb.conj(y, m0))
        .collect();
    let mut mn = m.members().clone();
    mn.intersect_with(n.members());
    let corrected = mn
        .ones()
        .find(|&y| q.iter().all(|&z| s.contains(amb.conj(z, y))));
    if let Some(y) = corrected {
        let a = amb.mul(m0, y);
        let b = amb.mul(amb.inv(y), n0);
        if split_is_valid(amb, s, a, b, x) {
            return Ok((a, b));
        }
    }
    exhaustive_split(amb, s, m, |b| n.contains(b), x)
        .ok_or_else(|| SubkitError::NoWitness("no product split exists".into()))
}

/// Splits `x ∈ NH` as `x = a·b`, `a ∈ N`, `b ∈ H`, with `S_x = S_{(a,b)}`,
/// where `N ⊴ G`, `H` is subnormal in `G` and `S` normalizes `H`.
///
/// Follows the inductive construction: split along `N·⟨H^G⟩` first, then
/// descend either to `⟨H^G⟩ ∩ N` or to the proper subgroup `⟨H^G⟩S`.
pub fn normal_subnormal_split(
    g: &Subgroup,
    s: &Subgroup,
    n: &Subgroup,
    h: &Subgroup,
    x: Elem,
) -> Result<SplitWitness> {
    require_sylow(g, s)?;
    require_normal(g, n, "N")?;
    require_subnormal(g, h, "H")?;
    if !h.is_normalized_by_subgroup(s) {
        return Err(SubkitError::PreconditionViolation(
            "S does not normalize H".into(),
        ));
    }
    require_element(g, x)?;
    let amb = g.ambient();
    if !n.elements().any(|a| h.contains(amb.mul(amb.inv(a), x))) {
        return Err(SubkitError::NotInProduct("NH".into()));
    }
    let mut cache = HashMap::new();
    let (a, b) = match subnormal_split_rec(g, s, n, h, x, &mut cache) {
        Some((a, b)) if split_is_valid(amb, s, a, b, x) => (a, b),
        _ => exhaustive_split(amb, s, n, |b| h.contains(b), x)
            .ok_or_else(|| SubkitError::NoWitness("no split along N·H exists".into()))?,
    };
    SplitWitness::build(g, s, a, b, x)
}

type ClosureCache = HashMap<(FixedBitSet, FixedBitSet), Subgroup>;

fn subnormal_split_rec(
    g: &Subgroup,
    s: &Subgroup,
    n: &Subgroup,
    h: &Subgroup,
    x: Elem,
    cache: &mut ClosureCache,
) -> Option<(Elem, Elem)> {
    let amb = g.ambient();
    if h.contains(x) {
        return Some((amb.identity(), x));
    }
    let m = cache
        .entry((g.members().clone(), h.members().clone()))
        .or_insert_with(|| normal_closure_unchecked(g, h))
        .clone();
    let (n1, m1) = product_split_pair(g, s, n, &m, x).ok()?;
    if &m == h {
        return Some((n1, m1));
    }
    if !n.is_subgroup_of(&m) {
        let mn = m.intersection(n);
        let (y, hh) = subnormal_split_rec(g, s, &mn, h, m1, cache)?;
        return Some((amb.mul(n1, y), hh));
    }
    let ms = m.join(s);
    if &ms == g {
        return None;
    }
    subnormal_split_rec(&ms, s, n, h, x, cache)
}

/// Whether `G = ⟨H^G⟩ · N_G(H)`, the hypothesis under which a subnormal `H`
/// must already be normal.
pub fn closure_normalizer_covers(g: &Subgroup, h: &Subgroup) -> bool {
    let m = normal_closure_unchecked(g, h);
    let nh = normalizer(g, h);
    product_order(&m, &nh) == g.order()
}

/// `|AB| = |A||B| / |A ∩ B|`.
pub fn product_order(a: &Subgroup, b: &Subgroup) -> usize {
    a.order() * b.order() / a.intersection(b).order()
}

/// All normal subgroups of `g` in canonical order.
pub fn normal_subgroups(g: &Subgroup) -> Vec<Subgroup> {
    let amb = g.ambient();
    let mut done = FixedBitSet::with_capacity(amb.order());
    let mut found: HashSet<FixedBitSet> = HashSet::new();
    let mut list: Vec<Subgroup> = Vec::new();
    for x in g.elements() {
        if done.contains(x) {
            continue;
        }
        for y in g.elements() {
            done.insert(amb.conj(x, y));
        }
        let nc = normal_closure_unchecked(g, &Subgroup::generated(amb, &[x]));
        if found.insert(nc.members().clone()) {
            list.push(nc);
        }
    }
    let mut head = 0;
    while head < list.len() {
        let a = list[head].clone();
        head += 1;
        let mut i = 0;
        while i < list.len() {
            let j = a.join(&list[i]);
            if found.insert(j.members().clone()) {
                list.push(j);
            }
            i += 1;
        }
    }
    sort_canonical(&mut list);
    list
}

/// All subnormal subgroups of `g`, found by closing `{G}` under taking
/// normal subgroups.
pub fn subnormal_subgroups(g: &Subgroup, budget: &Budget) -> Result<Vec<Subgroup>> {
    let mut found: HashSet<FixedBitSet> = HashSet::new();
    found.insert(g.members().clone());
    let mut list = vec![g.clone()];
    let mut head = 0;
    while head < list.len() {
        let k = list[head].clone();
        head += 1;
        for n in normal_subgroups(&k) {
            if found.insert(n.members().clone()) {
                if list.len() >= budget.max_subgroups {
                    return Err(SubkitError::BudgetExceeded {
                        what: "subnormal subgroup list",
                        limit: budget.max_subgroups,
                    });
                }
                list.push(n);
            }
        }
    }
    sort_canonical(&mut list);
    Ok(list)
}

/// `O_p(G)`: the intersection of the conjugates of a Sylow `p`-subgroup.
pub fn p_core(g: &Subgroup, p: usize) -> Subgroup {
    let amb = g.ambient();
    let mut core = sylow_subgroup(g, p).members().clone();
    loop {
        let mut next = core.clone();
        for &y in g.gens() {
            let mut conj = FixedBitSet::with_capacity(amb.order());
            for x in core.ones() {
                conj.insert(amb.conj(x, y));
            }
            next.intersect_with(&conj);
        }
        if next == core {
            break;
        }
        core = next;
    }
    Subgroup::from_members(amb, core).expect("core of a subgroup is a subgroup")
}

/// `O^p(G)`: generated by all elements of order prime to `p`.
pub fn p_residual(g: &Subgroup, p: usize) -> Subgroup {
    let amb = g.ambient();
    let gens: Vec<Elem> = g
        .elements()
        .filter(|&x| !amb.element_order(x).is_multiple_of(p))
        .collect();
    Subgroup::generated(amb, &gens)
}

/// `F(G)`, the product of all `O_q(G)`.
pub fn fitting_subgroup(g: &Subgroup) -> Subgroup {
    prime_divisors(g.order())
        .into_iter()
        .fold(Subgroup::trivial(g.ambient()), |acc, q| {
            acc.join(&p_core(g, q))
        })
}

pub fn derived_subgroup(g: &Subgroup) -> Subgroup {
    let amb = g.ambient();
    let mut comms = Vec::new();
    for &a in g.gens() {
        for &b in g.gens() {
            // [a, b] = a⁻¹ b⁻¹ a b
            comms.push(amb.product(&[amb.inv(a), amb.inv(b), a, b]));
        }
    }
    normal_closure_unchecked(g, &Subgroup::generated(amb, &comms))
}

pub fn center(g: &Subgroup) -> Subgroup {
    centralizer(g, g)
}

/// Perfect, and simple modulo its centre.
pub fn is_quasisimple(k: &Subgroup) -> bool {
    if k.is_trivial() || derived_subgroup(k) != *k {
        return false;
    }
    let z = center(k);
    let amb = k.ambient();
    let mut done = z.members().clone();
    for x in k.elements() {
        if done.contains(x) {
            continue;
        }
        let nc = normal_closure_unchecked(k, &Subgroup::generated(amb, &[x]));
        if &nc != k {
            return false;
        }
        for y in k.elements() {
            done.insert(amb.conj(x, y));
        }
    }
    true
}

#[derive(Clone, Debug)]
pub struct CharacteristicSubgroups {
    pub o_p: Subgroup,
    /// `O^p(G)`.
    pub o_p_residual: Subgroup,
    pub fitting: Subgroup,
    pub components: Vec<Subgroup>,
    pub f_star: Subgroup,
    pub is_char_p: bool,
}

pub fn characteristic_subgroups(
    g: &Subgroup,
    p: usize,
    budget: &Budget,
) -> Result<CharacteristicSubgroups> {
    let o_p = p_core(g, p);
    let fitting = fitting_subgroup(g);
    let components: Vec<Subgroup> = subnormal_subgroups(g, budget)?
        .into_iter()
        .filter(is_quasisimple)
        .collect();
    let f_star = components
        .iter()
        .fold(fitting.clone(), |acc, c| acc.join(c));
    let is_char_p = is_characteristic_p(g, p);
    Ok(CharacteristicSubgroups {
        o_p_residual: p_residual(g, p),
        o_p,
        fitting,
        components,
        f_star,
        is_char_p,
    })
}

/// `C_G(O_p(G)) ≤ O_p(G)`.
pub fn is_characteristic_p(g: &Subgroup, p: usize) -> bool {
    let o_p = p_core(g, p);
    centralizer(g, &o_p).is_subgroup_of(&o_p)
}

/// Whether `|G / O^p(G)|` is a power of `p`.
pub fn residual_quotient_is_p_power(g: &Subgroup, p: usize) -> bool {
    is_prime_power_of(g.order() / p_residual(g, p).order(), p)
}
