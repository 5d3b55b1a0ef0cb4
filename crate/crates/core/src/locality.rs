//! Partial groups and localities induced by finite groups.
//!
//! A [`Locality`] built from `(G, Δ, S)` has element set `{g : S_g ∈ Δ}` and
//! word domain `{w : S_w ∈ Δ}` up to a length bound; the product is the
//! group product. The domain is evaluated on demand rather than stored,
//! since `|L|^4` words are far too many to keep. Hand-built
//! [`PartialGroupTable`]s store their domain explicitly.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::error::{Result, SubkitError};
use crate::fusion::{centric_radicals, is_saturated, FusionBase, FusionSystem, Morphism};
use crate::group::{
    is_prime, p_part, prime_divisors, prime_of_prime_power, Budget, Elem, Subgroup,
};
use crate::subnormal::is_characteristic_p;

pub const DEFAULT_WORD_BOUND: usize = 4;

const NONE: u8 = u8::MAX;

type Mask = u64;
/// `(S_w, Π(w))`.
type Signature = (Mask, Elem);

fn bits(mask: Mask) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            i
        })
    })
}

/// A set with inversion and a product defined on some words.
pub trait PartialGroup {
    fn size(&self) -> usize;
    fn identity(&self) -> usize;
    fn inverse(&self, x: usize) -> usize;
    /// `Π(w)`, or `None` when `w` is outside the domain.
    fn product(&self, w: &[usize]) -> Option<usize>;
    /// Longest word length the domain is known for.
    fn word_bound(&self) -> usize;
    /// Visits every in-domain word up to the bound; stops when `f` returns false.
    fn for_each_domain_word(&self, f: &mut dyn FnMut(&[usize]) -> bool);
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomViolation {
    pub axiom: &'static str,
    pub word: Vec<usize>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PartialGroupVerdict {
    Pass,
    Fail(AxiomViolation),
}

impl PartialGroupVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, PartialGroupVerdict::Pass)
    }
}

fn violation(
    axiom: &'static str,
    word: &[usize],
    detail: impl Into<String>,
) -> PartialGroupVerdict {
    PartialGroupVerdict::Fail(AxiomViolation {
        axiom,
        word: word.to_vec(),
        detail: detail.into(),
    })
}

/// Checks the partial-group axioms on every stored domain word: single
/// letters and the empty word are in the domain, the domain is closed under
/// subwords, contracting a block `v` to `Π(v)` keeps the word in the domain
/// with the same product, and `w⁻¹∘w` multiplies to the identity.
pub fn check_partial_group(t: &dyn PartialGroup) -> PartialGroupVerdict {
    let n = t.size();
    let id = t.identity();
    let bound = t.word_bound();
    for x in 0..n {
        if t.inverse(t.inverse(x)) != x {
            return violation("inversion-involution", &[x], "inverse is not involutory");
        }
    }
    match t.product(&[]) {
        Some(e) if e == id => {}
        _ => {
            return violation(
                "empty-word",
                &[],
                "empty word must multiply to the identity",
            )
        }
    }
    for x in 0..n {
        if t.product(&[x]) != Some(x) {
            return violation(
                "single-letter",
                &[x],
                "length-one word must multiply to its letter",
            );
        }
    }
    let mut verdict = PartialGroupVerdict::Pass;
    t.for_each_domain_word(&mut |w| {
        let pw = t.product(w).expect("visited words are in the domain");
        for k in 1..w.len() {
            if t.product(&w[..k]).is_none() || t.product(&w[k..]).is_none() {
                verdict = violation(
                    "subword",
                    w,
                    format!("split after position {k} leaves the domain"),
                );
                return false;
            }
        }
        for i in 0..=w.len() {
            for j in i..=w.len() {
                if j - i == 1 || (i == j && w.len() + 1 > bound) {
                    continue;
                }
                let Some(pv) = t.product(&w[i..j]) else {
                    verdict = violation("subword", w, format!("block {i}..{j} leaves the domain"));
                    return false;
                };
                let mut contracted = w[..i].to_vec();
                contracted.push(pv);
                contracted.extend_from_slice(&w[j..]);
                if t.product(&contracted) != Some(pw) {
                    verdict = violation(
                        "contraction",
                        w,
                        format!("contracting block {i}..{j} changes the domain or product"),
                    );
                    return false;
                }
            }
        }
        if 2 * w.len() <= bound {
            let mut ww: Vec<usize> = w.iter().rev().map(|&x| t.inverse(x)).collect();
            ww.extend_from_slice(w);
            if t.product(&ww) != Some(id) {
                verdict = violation("inversion", w, "w⁻¹∘w does not multiply to the identity");
                return false;
            }
        }
        true
    });
    verdict
}

/// A partial group with an explicitly stored domain.
#[derive(Clone, Debug)]
pub struct PartialGroupTable {
    size: usize,
    identity: usize,
    inverse: Vec<usize>,
    domain: BTreeMap<Vec<usize>, usize>,
    bound: usize,
}

impl PartialGroupTable {
    pub fn new(
        identity: usize,
        inverse: Vec<usize>,
        domain: impl IntoIterator<Item = (Vec<usize>, usize)>,
    ) -> Result<PartialGroupTable> {
        let size = inverse.len();
        if identity >= size || inverse.iter().any(|&x| x >= size) {
            return Err(SubkitError::PreconditionViolation(
                "table entries out of range".into(),
            ));
        }
        let domain: BTreeMap<Vec<usize>, usize> = domain.into_iter().collect();
        if domain
            .iter()
            .any(|(w, &v)| v >= size || w.iter().any(|&x| x >= size))
        {
            return Err(SubkitError::PreconditionViolation(
                "domain word or product out of range".into(),
            ));
        }
        let bound = domain.keys().map(Vec::len).max().unwrap_or(0);
        Ok(PartialGroupTable {
            size,
            identity,
            inverse,
            domain,
            bound,
        })
    }

    /// A group as a partial group whose domain is every word up to `bound`.
    pub fn from_group(g: &Subgroup, bound: usize) -> Result<PartialGroupTable> {
        let amb = g.ambient();
        let elems = g.element_vec();
        let pos: HashMap<Elem, usize> = elems.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let inverse = elems.iter().map(|&e| pos[&amb.inv(e)]).collect();
        let words = (elems.len() as f64).powi(bound as i32);
        if words > 2e6 {
            return Err(SubkitError::BudgetExceeded {
                what: "explicit partial-group domain",
                limit: 2_000_000,
            });
        }
        let mut domain = Vec::new();
        let mut stack: Vec<(Vec<usize>, Elem)> = vec![(Vec::new(), amb.identity())];
        while let Some((w, prod)) = stack.pop() {
            domain.push((w.clone(), pos[&prod]));
            if w.len() < bound {
                for (i, &e) in elems.iter().enumerate() {
                    let mut w2 = w.clone();
                    w2.push(i);
                    stack.push((w2, amb.mul(prod, e)));
                }
            }
        }
        PartialGroupTable::new(pos[&amb.identity()], inverse, domain)
    }

    /// Overwrites (or inserts) one product; used to build broken tables.
    pub fn with_product(mut self, word: Vec<usize>, value: usize) -> Self {
        self.bound = self.bound.max(word.len());
        self.domain.insert(word, value);
        self
    }

    pub fn without_word(mut self, word: &[usize]) -> Self {
        self.domain.remove(word);
        self
    }

    pub fn domain_len(&self) -> usize {
        self.domain.len()
    }
}

impl PartialGroup for PartialGroupTable {
    fn size(&self) -> usize {
        self.size
    }

    fn identity(&self) -> usize {
        self.identity
    }

    fn inverse(&self, x: usize) -> usize {
        self.inverse[x]
    }

    fn product(&self, w: &[usize]) -> Option<usize> {
        self.domain.get(w).copied()
    }

    fn word_bound(&self) -> usize {
        self.bound
    }

    fn for_each_domain_word(&self, f: &mut dyn FnMut(&[usize]) -> bool) {
        for w in self.domain.keys() {
            if !f(w) {
                return;
            }
        }
    }
}

/// `(L, Δ, S)` induced by a finite group.
pub struct Locality {
    g: Subgroup,
    base: Arc<FusionBase>,
    delta: Vec<Mask>,
    delta_pos: HashMap<Mask, usize>,
    elements: Vec<Elem>,
    pos: HashMap<Elem, usize>,
    bound: usize,
    /// `x^π` in local indices of `S`, for every element `π` of `G`, or `NONE`.
    cj: HashMap<Elem, Box<[u8]>>,
}

impl std::fmt::Debug for Locality {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Locality")
            .field("elements", &self.elements.len())
            .field("objects", &self.delta.len())
            .field("sylow_order", &self.base.order())
            .field("word_bound", &self.bound)
            .finish()
    }
}

/// Builds the locality of `g` with objects `delta` (subgroups of the Sylow
/// subgroup `s`), checking that `Δ` is nonempty, overgroup-closed in `S` and
/// closed under `F_S(G)`-conjugacy.
pub fn locality_from_group(
    g: &Subgroup,
    s: &Subgroup,
    delta: &[Subgroup],
    word_bound: usize,
) -> Result<Locality> {
    g.check_same_ambient(s)?;
    let p = match prime_of_prime_power(s.order()) {
        Some(p) => p,
        None if s.order() == 1 => (2..)
            .find(|&q| is_prime(q) && !g.order().is_multiple_of(q))
            .unwrap(),
        None => {
            return Err(SubkitError::PreconditionViolation(
                "S is not a p-group".into(),
            ))
        }
    };
    if !s.is_subgroup_of(g) || p_part(g.order(), p) != s.order() {
        return Err(SubkitError::PreconditionViolation(
            "S is not a Sylow subgroup of G".into(),
        ));
    }
    let base = FusionBase::new(s, p, &Budget::from_env())?;
    if delta.is_empty() {
        return Err(SubkitError::InvalidDelta("Δ is empty".into()));
    }
    let mut masks = Vec::new();
    for d in delta {
        if !d.is_subgroup_of(s) {
            return Err(SubkitError::InvalidDelta(format!(
                "object of order {} is not a subgroup of S",
                d.order()
            )));
        }
        masks.push(base.mask_of(d));
    }
    masks.sort_by(|&a, &b| {
        a.count_ones()
            .cmp(&b.count_ones())
            .then_with(|| bits(a).cmp(bits(b)))
    });
    masks.dedup();
    let delta_pos: HashMap<Mask, usize> = masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    for &m in &masks {
        for &q in base.lattice() {
            if m & !q == 0 && !delta_pos.contains_key(&q) {
                return Err(SubkitError::InvalidDelta(format!(
                    "Δ is not closed under overgroups: an overgroup of order {} is missing",
                    q.count_ones()
                )));
            }
        }
    }
    let amb = g.ambient();
    let ns = base.order();
    let mut cj = HashMap::with_capacity(g.order());
    for pi in g.elements() {
        let row: Box<[u8]> = (0..ns)
            .map(|x| {
                base.local_of(amb.conj(base.elem_of(x), pi))
                    .map_or(NONE, |y| y as u8)
            })
            .collect();
        cj.insert(pi, row);
    }
    let mut loc = Locality {
        g: g.clone(),
        base,
        delta: masks,
        delta_pos,
        elements: Vec::new(),
        pos: HashMap::new(),
        bound: word_bound,
        cj,
    };
    for pi in g.elements() {
        let sg = loc.s_of(pi);
        for &m in &loc.delta {
            if m & !sg == 0 {
                let img = loc.conj_mask(m, pi);
                if !loc.delta_pos.contains_key(&img) {
                    return Err(SubkitError::InvalidDelta(format!(
                        "Δ is not closed under conjugation by {}",
                        amb.element(pi)
                    )));
                }
            }
        }
    }
    loc.elements = g
        .elements()
        .filter(|&pi| loc.in_delta(loc.s_of(pi)))
        .collect();
    loc.pos = loc
        .elements
        .iter()
        .enumerate()
        .map(|(i, &e)| (e, i))
        .collect();
    Ok(loc)
}

/// `S_w` and domain membership of a word, with the checks of both routes.
#[derive(Clone, Debug)]
pub struct WordDomain {
    pub s_w: Subgroup,
    pub in_domain: bool,
    pub product: Option<Elem>,
}

impl Locality {
    pub fn group(&self) -> &Subgroup {
        &self.g
    }

    pub fn sylow(&self) -> &Subgroup {
        self.base.sylow()
    }

    pub fn prime(&self) -> usize {
        self.base.prime()
    }

    pub fn base(&self) -> &Arc<FusionBase> {
        &self.base
    }

    /// Elements of `L` as ambient element indices, ascending.
    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    pub fn contains(&self, e: Elem) -> bool {
        self.pos.contains_key(&e)
    }

    pub fn objects(&self) -> Vec<Subgroup> {
        self.delta.iter().map(|&m| self.base.subgroup(m)).collect()
    }

    pub fn word_bound(&self) -> usize {
        self.bound
    }

    fn in_delta(&self, m: Mask) -> bool {
        self.delta_pos.contains_key(&m)
    }

    #[inline]
    fn cj_row(&self, pi: Elem) -> &[u8] {
        &self.cj[&pi]
    }

    /// `S_π` for any element of `G`.
    fn s_of(&self, pi: Elem) -> Mask {
        self.cj_row(pi)
            .iter()
            .enumerate()
            .filter(|&(_, &y)| y != NONE)
            .fold(0, |acc, (x, _)| acc | 1 << x)
    }

    fn conj_mask(&self, m: Mask, pi: Elem) -> Mask {
        let row = self.cj_row(pi);
        bits(m).fold(0, |acc, x| acc | 1 << row[x])
    }

    /// `{x ∈ m : x^π ∈ target}`.
    fn pullback(&self, m: Mask, pi: Elem, target: Mask) -> Mask {
        let row = self.cj_row(pi);
        bits(m)
            .filter(|&x| row[x] != NONE && target >> row[x] & 1 == 1)
            .fold(0, |acc, x| acc | 1 << x)
    }

    /// `S_w` by staged conjugation, for a word of ambient elements of `G`.
    fn staged(&self, w: &[Elem]) -> Mask {
        let mut out = 0;
        'x: for x in 0..self.base.order() {
            let mut y = x as u8;
            for &f in w {
                y = self.cj_row(f)[y as usize];
                if y == NONE {
                    continue 'x;
                }
            }
            out |= 1 << x;
        }
        out
    }

    /// Whether some chain `P₀ → P₁ → … ` of objects follows the word.
    fn chain_exists(&self, w: &[Elem]) -> bool {
        let mut current: Vec<Mask> = self.delta.clone();
        for &f in w {
            let row = self.cj_row(f);
            let mut next: Vec<Mask> = current
                .iter()
                .filter(|&&m| bits(m).all(|x| row[x] != NONE))
                .map(|&m| self.conj_mask(m, f))
                .filter(|m| self.in_delta(*m))
                .collect();
            next.sort_unstable();
            next.dedup();
            current = next;
        }
        !current.is_empty()
    }

    fn product_of(&self, w: &[Elem]) -> Elem {
        self.g.ambient().product(w)
    }

    /// `S_w` and membership of `w` in the domain. Checks that the staged
    /// `S_w ∈ Δ` agrees with the existence of an object chain along `w`, and
    /// for domain words that `S_w ≤ S_{Π(w)}` and that staged conjugation
    /// of `S_w` ends at `S_w^{Π(w)}`.
    pub fn word_domain(&self, w: &[Elem]) -> Result<WordDomain> {
        if let Some(&bad) = w.iter().find(|&&f| !self.contains(f)) {
            return Err(SubkitError::PreconditionViolation(format!(
                "letter {bad} is not an element of the locality"
            )));
        }
        let sw = self.staged(w);
        let in_domain = self.in_delta(sw);
        if in_domain != self.chain_exists(w) {
            return Err(SubkitError::SidesDisagree(
                "S_w ∈ Δ disagrees with the object-chain domain".into(),
            ));
        }
        let product = in_domain.then(|| self.product_of(w));
        if let Some(pi) = product {
            let mut staged_img = sw;
            for &f in w {
                staged_img = self.conj_mask(staged_img, f);
            }
            if sw & !self.s_of(pi) != 0 || staged_img != self.conj_mask(sw, pi) {
                return Err(SubkitError::SidesDisagree(
                    "staged conjugation disagrees with conjugation by the product".into(),
                ));
            }
        }
        Ok(WordDomain {
            s_w: self.base.subgroup(sw),
            in_domain,
            product,
        })
    }

    /// Exhaustive axiom check over all words up to the word bound.
    ///
    /// A prefix pass visits every word by its state (staged map, product,
    /// surviving object chains), checking `S_w ∈ Δ` against the chain
    /// criterion, prefix closure, `S_w ≤ S_{Π(w)}`, the staged-conjugation
    /// identity and `Π(w) ∈ L`. Domain membership of a concatenation then
    /// depends only on the pair `(S_u, Π(u))` of the left factor and `S_v`
    /// of the right one, so suffix closure, block contraction (blocks of
    /// length two and inserted identities, which generate all
    /// contractions) and inversion are checked over those signatures.
    pub fn check_axioms(&self) -> PartialGroupVerdict {
        let amb = self.g.ambient();
        let ns = self.base.order();
        let nd = self.delta.len();
        let bound = self.bound;
        for (i, &f) in self.elements.iter().enumerate() {
            if !self.in_delta(self.s_of(f)) {
                return violation("single-letter", &[i], "S_f is not an object");
            }
        }
        if !self.in_delta(self.base.full()) {
            return violation("empty-word", &[], "S is not an object");
        }
        // delta_step[f][i]: index of P_i^f when P_i ≤ S_f and P_i^f ∈ Δ.
        let delta_step: Vec<Vec<Option<usize>>> = self
            .elements
            .iter()
            .map(|&f| {
                let row = self.cj_row(f);
                self.delta
                    .iter()
                    .map(|&m| {
                        bits(m)
                            .all(|x| row[x] != NONE)
                            .then(|| self.conj_mask(m, f))
                            .and_then(|img| self.delta_pos.get(&img).copied())
                    })
                    .collect()
            })
            .collect();

        type State = (Box<[u8]>, Elem, FixedBitSet);
        let mut level: HashMap<State, Vec<usize>> = HashMap::new();
        let identity_map: Box<[u8]> = (0..ns as u8).collect();
        let mut all_chains = FixedBitSet::with_capacity(nd);
        all_chains.insert_range(..);
        level.insert((identity_map, amb.identity(), all_chains), Vec::new());
        // Signatures (S_w, Π(w)) of all words, by length.
        let mut sigs: Vec<BTreeMap<(Mask, Elem), Vec<usize>>> = vec![BTreeMap::new(); bound + 1];
        sigs[0].insert((self.base.full(), amb.identity()), Vec::new());
        for sig in sigs.iter_mut().skip(1) {
            let mut next: HashMap<State, Vec<usize>> = HashMap::new();
            let mut ordered: Vec<(&State, &Vec<usize>)> = level.iter().collect();
            ordered.sort_by(|a, b| a.1.cmp(b.1));
            for ((map, pi, chains), word) in ordered {
                let src_in = self.in_delta(map_src(map));
                for (fi, &f) in self.elements.iter().enumerate() {
                    let row = self.cj_row(f);
                    let new_map: Box<[u8]> = map
                        .iter()
                        .map(|&y| if y == NONE { NONE } else { row[y as usize] })
                        .collect();
                    let new_pi = amb.mul(*pi, f);
                    let mut new_chains = FixedBitSet::with_capacity(nd);
                    for i in chains.ones() {
                        if let Some(j) = delta_step[fi][i] {
                            new_chains.insert(j);
                        }
                    }
                    let key = (new_map, new_pi, new_chains);
                    if next.contains_key(&key) {
                        continue;
                    }
                    let mut w = word.clone();
                    w.push(fi);
                    let src = map_src(&key.0);
                    let in_d = self.in_delta(src);
                    if in_d != !key.2.is_clear() {
                        return violation(
                            "object-chain",
                            &w,
                            "S_w ∈ Δ disagrees with the object chains",
                        );
                    }
                    if in_d && !src_in {
                        return violation(
                            "subword",
                            &w,
                            "prefix of a domain word leaves the domain",
                        );
                    }
                    if in_d {
                        if src & !self.s_of(new_pi) != 0 {
                            return violation(
                                "staged-product",
                                &w,
                                "S_w is not contained in S_Π(w)",
                            );
                        }
                        let crow = self.cj_row(new_pi);
                        if bits(src).any(|x| key.0[x] != crow[x]) {
                            return violation(
                                "staged-product",
                                &w,
                                "staged conjugation differs from conjugation by Π(w)",
                            );
                        }
                        if !self.contains(new_pi) {
                            return violation("product-in-locality", &w, "Π(w) is not in L");
                        }
                    }
                    sig.entry((src, new_pi)).or_insert_with(|| w.clone());
                    next.insert(key, w);
                }
            }
            level = next;
        }

        let concat = |u: (Mask, Elem), v_src: Mask| -> Mask { self.pullback(u.0, u.1, v_src) };
        let masks_of = |k: usize| -> Vec<(Mask, &Vec<usize>)> {
            let mut seen: BTreeMap<Mask, &Vec<usize>> = BTreeMap::new();
            for ((m, _), w) in &sigs[k] {
                seen.entry(*m).or_insert(w);
            }
            seen.into_iter().collect()
        };
        // Suffix closure: f∘v ∈ D ⇒ v ∈ D.
        for b in 1..bound {
            for (vm, vw) in masks_of(b) {
                if self.in_delta(vm) {
                    continue;
                }
                for (fi, &f) in self.elements.iter().enumerate() {
                    if self.in_delta(concat((self.s_of(f), f), vm)) {
                        let mut w = vec![fi];
                        w.extend_from_slice(vw);
                        return violation(
                            "subword",
                            &w,
                            "suffix of a domain word leaves the domain",
                        );
                    }
                }
            }
        }
        // Contraction of a length-two block, and insertion of the identity.
        let id_sig = (self.base.full(), amb.identity());
        for a in 0..bound {
            for c in 0..bound {
                let right = masks_of(c);
                let mut cases: Vec<(Signature, Signature, Vec<usize>)> = Vec::new();
                if a + 2 + c <= bound {
                    for (&(um, upi), uw) in &sigs[a] {
                        for (&(vm, vpi), vw) in &sigs[2] {
                            let long = (concat((um, upi), vm), amb.mul(upi, vpi));
                            let short = (concat((um, upi), self.s_of(vpi)), amb.mul(upi, vpi));
                            let mut w = uw.clone();
                            w.extend_from_slice(vw);
                            cases.push((long, short, w));
                        }
                    }
                }
                if a + 1 + c <= bound && a + c < bound {
                    for (&(um, upi), uw) in &sigs[a] {
                        let long = (um, upi);
                        let short = (concat((um, upi), id_sig.0), upi);
                        cases.push((long, short, uw.clone()));
                    }
                }
                let mut seen: HashSet<((Mask, Elem), (Mask, Elem))> = HashSet::new();
                for (long, short, w) in cases {
                    if !seen.insert((long, short)) {
                        continue;
                    }
                    for &(wm, ww) in &right {
                        let d_long = self.in_delta(concat(long, wm));
                        let d_short = self.in_delta(concat(short, wm));
                        if d_long && !d_short {
                            let mut word = w.clone();
                            word.extend_from_slice(ww);
                            return violation(
                                "contraction",
                                &word,
                                "contracting a block leaves the domain",
                            );
                        }
                    }
                }
            }
        }
        // Inversion on explicit words.
        let n = self.elements.len();
        let mut stack: Vec<Vec<usize>> = vec![Vec::new()];
        while let Some(w) = stack.pop() {
            if 2 * w.len() > bound {
                continue;
            }
            let letters: Vec<Elem> = w.iter().map(|&i| self.elements[i]).collect();
            if !w.is_empty() && self.in_delta(self.staged(&letters)) {
                let mut full: Vec<Elem> = letters.iter().rev().map(|&x| amb.inv(x)).collect();
                full.extend_from_slice(&letters);
                if !self.in_delta(self.staged(&full)) || self.product_of(&full) != amb.identity() {
                    return violation(
                        "inversion",
                        &w,
                        "w⁻¹∘w is not a domain word multiplying to 1",
                    );
                }
            }
            if 2 * (w.len() + 1) <= bound {
                for i in 0..n {
                    let mut w2 = w.clone();
                    w2.push(i);
                    stack.push(w2);
                }
            }
        }
        PartialGroupVerdict::Pass
    }

    /// Conjugation maps `c_f : S_f → S` for `f` in `elems`.
    fn conjugation_maps(&self, elems: impl Iterator<Item = Elem>) -> Vec<Morphism> {
        let mut out: Vec<Morphism> = elems
            .map(|f| {
                let src = self.s_of(f);
                let row = self.cj_row(f);
                let values: Vec<(usize, usize)> = bits(src).map(|x| (x, row[x] as usize)).collect();
                self.base
                    .morphism(src, &values)
                    .expect("conjugation is an injective homomorphism")
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// `F_S(X)`: generated by the conjugation maps of the elements of `x`.
    pub fn fusion_of(&self, x: &[Elem]) -> Result<FusionSystem> {
        let maps = self.conjugation_maps(x.iter().copied());
        self.base.generate(self.base.full(), maps.iter())
    }

    /// `F_S(L)`.
    pub fn fusion_system(&self) -> Result<FusionSystem> {
        self.fusion_of(&self.elements.clone())
    }

    /// Whether `(f⁻¹, x, f)` is a domain word.
    fn conj_defined(&self, x: Elem, f: Elem) -> bool {
        let amb = self.g.ambient();
        self.in_delta(self.staged(&[amb.inv(f), x, f]))
    }

    fn is_inverse_closed(&self, set: &FixedBitSet) -> bool {
        let amb = self.g.ambient();
        set.ones().all(|x| set.contains(amb.inv(x)))
    }

    /// Products of all domain words over `set` up to the bound stay in `set`.
    fn is_partial_subgroup(&self, set: &FixedBitSet) -> bool {
        if !self.is_inverse_closed(set) || !set.contains(self.g.ambient().identity()) {
            return false;
        }
        let amb = self.g.ambient();
        let members: Vec<Elem> = set.ones().collect();
        let mut level: HashSet<(Mask, Elem)> = HashSet::from([(self.base.full(), amb.identity())]);
        for _ in 0..self.bound {
            let mut next = HashSet::new();
            for &(m, pi) in &level {
                for &f in &members {
                    let sw = self.pullback(m, pi, self.s_of(f));
                    if !self.in_delta(sw) {
                        continue;
                    }
                    let prod = amb.mul(pi, f);
                    if !set.contains(prod) {
                        return false;
                    }
                    next.insert((sw, prod));
                }
            }
            level = next;
        }
        true
    }

    /// `x^f ∈ set` whenever `f ∈ over` and `(f⁻¹, x, f)` is a domain word.
    fn is_normalized_within(&self, set: &FixedBitSet, over: &FixedBitSet) -> bool {
        let amb = self.g.ambient();
        over.ones().all(|f| {
            set.ones()
                .all(|x| !self.conj_defined(x, f) || set.contains(amb.conj(x, f)))
        })
    }

    fn to_bits(&self, set: &[Elem]) -> Result<FixedBitSet> {
        let mut b = FixedBitSet::with_capacity(self.g.ambient().order());
        for &e in set {
            if !self.contains(e) {
                return Err(SubkitError::PreconditionViolation(format!(
                    "element {e} is not in the locality"
                )));
            }
            b.insert(e);
        }
        Ok(b)
    }

    fn all_bits(&self) -> FixedBitSet {
        let mut b = FixedBitSet::with_capacity(self.g.ambient().order());
        b.extend(self.elements.iter().copied());
        b
    }

    /// Smallest set containing `start`, closed under inverses, domain products
    /// of length two, and conjugation by elements of `over`.
    fn normal_closure_in(&self, start: &FixedBitSet, over: &FixedBitSet) -> FixedBitSet {
        let amb = self.g.ambient();
        let mut set = start.clone();
        set.insert(amb.identity());
        loop {
            let before = set.count_ones(..);
            let members: Vec<Elem> = set.ones().collect();
            for &x in &members {
                set.insert(amb.inv(x));
                for &y in &members {
                    if self.in_delta(self.staged(&[x, y])) {
                        set.insert(amb.mul(x, y));
                    }
                }
                for f in over.ones() {
                    if self.conj_defined(x, f) {
                        set.insert(amb.conj(x, f));
                    }
                }
            }
            if set.count_ones(..) == before {
                return set;
            }
        }
    }

    /// Classifies a subset of `L` as not a partial subgroup, a partial
    /// subgroup, partial normal, or partial subnormal with a chain up to `L`.
    pub fn partial_normality(&self, n: &[Elem]) -> Result<PartialNormality> {
        let set = self.to_bits(n)?;
        if !self.is_partial_subgroup(&set) {
            return Ok(PartialNormality::NotSubgroup);
        }
        let all = self.all_bits();
        if self.is_normalized_within(&set, &all) {
            return Ok(PartialNormality::Normal);
        }
        let mut chain = vec![all];
        loop {
            let top = chain.last().unwrap();
            let next = self.normal_closure_in(&set, top);
            if &next == top {
                break;
            }
            if !self.is_partial_subgroup(&next) || !self.is_normalized_within(&next, top) {
                break;
            }
            chain.push(next);
        }
        if chain.last() == Some(&set) {
            chain.reverse();
            Ok(PartialNormality::Subnormal(
                chain.into_iter().map(|b| b.ones().collect()).collect(),
            ))
        } else {
            Ok(PartialNormality::Subgroup)
        }
    }

    /// `XY`, `N_L(X)` and `C_L(X)`.
    pub fn set_ops(&self, x: &[Elem], y: &[Elem]) -> Result<SetOps> {
        let amb = self.g.ambient();
        let xb = self.to_bits(x)?;
        let yb = self.to_bits(y)?;
        let mut product = FixedBitSet::with_capacity(amb.order());
        for a in xb.ones() {
            for b in yb.ones() {
                if self.in_delta(self.staged(&[a, b])) {
                    product.insert(amb.mul(a, b));
                }
            }
        }
        let defined = |f: Elem| xb.ones().all(|a| self.conj_defined(a, f));
        let normalizer: Vec<Elem> = self
            .elements
            .iter()
            .copied()
            .filter(|&f| {
                defined(f) && {
                    let mut img = FixedBitSet::with_capacity(amb.order());
                    img.extend(xb.ones().map(|a| amb.conj(a, f)));
                    img == xb
                }
            })
            .collect();
        let centralizer: Vec<Elem> = self
            .elements
            .iter()
            .copied()
            .filter(|&f| defined(f) && xb.ones().all(|a| amb.conj(a, f) == a))
            .collect();
        Ok(SetOps {
            product: product.ones().collect(),
            normalizer,
            centralizer,
        })
    }

    /// Checks both parts of the splitting lemma for a partial normal subgroup
    /// `n`: every `g ∈ L` is `n·h` with `n ∈ N`, `h ∈ N_L(T)`, `(n, h)` a
    /// domain word and `S_g = S_{(n,h)}`; and
    /// `F_S(L) = ⟨F_S(NS), F_S(N_L(T))⟩`.
    pub fn fusion_and_split(&self, n: &[Elem]) -> Result<(FusionSystem, SplitReport)> {
        if !matches!(self.partial_normality(n)?, PartialNormality::Normal) {
            return Err(SubkitError::PreconditionViolation(
                "N is not a partial normal subgroup".into(),
            ));
        }
        let amb = self.g.ambient();
        let nb = self.to_bits(n)?;
        let t_mask: Mask = nb
            .ones()
            .filter_map(|e| self.base.local_of(e))
            .fold(0, |acc, x| acc | 1 << x);
        let t_elems: Vec<Elem> = bits(t_mask).map(|x| self.base.elem_of(x)).collect();
        let nlt = self.set_ops(&t_elems, &[])?.normalizer;
        let nlt_bits = self.to_bits(&nlt)?;
        let mut splits = Vec::with_capacity(self.elements.len());
        let mut failures = Vec::new();
        for &g in &self.elements {
            let sg = self.s_of(g);
            let found = nb.ones().find(|&a| {
                let h = amb.mul(amb.inv(a), g);
                nlt_bits.contains(h) && self.staged(&[a, h]) == sg
            });
            match found {
                Some(a) => splits.push((g, a, amb.mul(amb.inv(a), g))),
                None => failures.push(g),
            }
        }
        let f_l = self.fusion_system()?;
        let s_elems: Vec<Elem> = self.sylow().element_vec();
        let ns = self.set_ops(n, &s_elems)?.product;
        let f_ns = self.fusion_of(&ns)?;
        let f_nlt = self.fusion_of(&nlt)?;
        let generated = FusionSystem::generate(self.base(), self.base.full(), &[&f_ns, &f_nlt])?;
        Ok((
            f_l.clone(),
            SplitReport {
                t: self.base.subgroup(t_mask),
                normalizer_of_t: nlt,
                splits,
                failures,
                generation_holds: generated == f_l,
            },
        ))
    }

    /// `F_S(L)` saturated, `F_S(L)^{cr} ⊆ Δ`, and every `N_L(P)`, `P ∈ Δ`,
    /// a group of characteristic `p`.
    pub fn is_linking(&self) -> Result<LinkingVerdict> {
        let f = self.fusion_system()?;
        let saturated = is_saturated(&f).is_saturated();
        let missing_cr: Vec<Subgroup> = centric_radicals(&f)
            .into_iter()
            .filter(|c| !self.in_delta(self.base.mask_of(c)))
            .collect();
        let mut not_char_p = Vec::new();
        for &m in &self.delta {
            let p_elems: Vec<Elem> = bits(m).map(|x| self.base.elem_of(x)).collect();
            let norm = self.set_ops(&p_elems, &[])?.normalizer;
            let mut b = FixedBitSet::with_capacity(self.g.ambient().order());
            b.extend(norm.iter().copied());
            let is_char = Subgroup::from_members(self.g.ambient(), b)
                .map(|h| is_characteristic_p(&h, self.prime()))
                .unwrap_or(false);
            if !is_char {
                not_char_p.push(self.base.subgroup(m));
            }
        }
        Ok(LinkingVerdict {
            saturated,
            missing_centric_radicals: missing_cr,
            objects_not_char_p: not_char_p,
        })
    }
}

fn map_src(map: &[u8]) -> Mask {
    map.iter()
        .enumerate()
        .filter(|&(_, &y)| y != NONE)
        .fold(0, |acc, (x, _)| acc | 1 << x)
}

impl PartialGroup for Locality {
    fn size(&self) -> usize {
        self.elements.len()
    }

    fn identity(&self) -> usize {
        0
    }

    fn inverse(&self, x: usize) -> usize {
        self.pos[&self.g.ambient().inv(self.elements[x])]
    }

    fn product(&self, w: &[usize]) -> Option<usize> {
        if w.len() > self.bound {
            return None;
        }
        let letters: Vec<Elem> = w.iter().map(|&i| self.elements[i]).collect();
        if !self.in_delta(self.staged(&letters)) {
            return None;
        }
        self.pos.get(&self.product_of(&letters)).copied()
    }

    fn word_bound(&self) -> usize {
        self.bound
    }

    fn for_each_domain_word(&self, f: &mut dyn FnMut(&[usize]) -> bool) {
        // Every word is visited, so domain words with a non-domain prefix are found too.
        let n = self.elements.len();
        let mut w: Vec<usize> = Vec::with_capacity(self.bound);
        fn rec(
            l: &Locality,
            n: usize,
            w: &mut Vec<usize>,
            f: &mut dyn FnMut(&[usize]) -> bool,
        ) -> bool {
            if !w.is_empty() && l.product(w).is_some() && !f(w) {
                return false;
            }
            if w.len() == l.bound {
                return true;
            }
            for i in 0..n {
                w.push(i);
                let go = rec(l, n, w, f);
                w.pop();
                if !go {
                    return false;
                }
            }
            true
        }
        rec(self, n, &mut w, f);
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PartialNormality {
    NotSubgroup,
    Subgroup,
    Normal,
    /// Chain from the subset up to `L`, each partial normal in the next.
    Subnormal(Vec<Vec<Elem>>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetOps {
    pub product: Vec<Elem>,
    pub normalizer: Vec<Elem>,
    pub centralizer: Vec<Elem>,
}

#[derive(Clone, Debug)]
pub struct SplitReport {
    pub t: Subgroup,
    pub normalizer_of_t: Vec<Elem>,
    /// `(g, n, h)` with `g = n·h`.
    pub splits: Vec<(Elem, Elem, Elem)>,
    pub failures: Vec<Elem>,
    pub generation_holds: bool,
}

impl SplitReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty() && self.generation_holds
    }
}

#[derive(Clone, Debug)]
pub struct LinkingVerdict {
    pub saturated: bool,
    pub missing_centric_radicals: Vec<Subgroup>,
    pub objects_not_char_p: Vec<Subgroup>,
}

impl LinkingVerdict {
    pub fn is_linking(&self) -> bool {
        self.saturated
            && self.missing_centric_radicals.is_empty()
            && self.objects_not_char_p.is_empty()
    }
}

pub fn word_domain(l: &Locality, w: &[Elem]) -> Result<WordDomain> {
    l.word_domain(w)
}

pub fn partial_normality(l: &Locality, n: &[Elem]) -> Result<PartialNormality> {
    l.partial_normality(n)
}

pub fn locality_fusion_and_split(l: &Locality, n: &[Elem]) -> Result<(FusionSystem, SplitReport)> {
    l.fusion_and_split(n)
}

pub fn partial_set_ops(l: &Locality, x: &[Elem], y: &[Elem]) -> Result<SetOps> {
    l.set_ops(x, y)
}

pub fn is_linking_locality(l: &Locality) -> Result<LinkingVerdict> {
    l.is_linking()
}

/// Object sets used for the corpus: all subgroups of `S`, the overgroups of
/// `O_p(G)`, and the `F_S(G)`-centric subgroups; duplicates removed.
pub fn corpus_object_sets(
    g: &Subgroup,
    s: &Subgroup,
    p: usize,
) -> Result<Vec<(String, Vec<Subgroup>)>> {
    let base = FusionBase::new(s, p, &Budget::from_env())?;
    let f = base.realized(g, base.full())?;
    let op = crate::subnormal::p_core(g, p);
    let op_mask = base.mask_of(&op);
    let all: Vec<Mask> = base.lattice().to_vec();
    let above: Vec<Mask> = all.iter().copied().filter(|&m| op_mask & !m == 0).collect();
    let centric: Vec<Mask> = f
        .classes()
        .into_iter()
        .filter(|class| {
            class
                .iter()
                .all(|&q| base.centralizer_in(base.full(), q) & !q == 0)
        })
        .flatten()
        .collect();
    let mut out: Vec<(String, Vec<Mask>)> = Vec::new();
    for (name, mut set) in [("all", all), ("over-core", above), ("centric", centric)] {
        set.sort_unstable();
        if !out.iter().any(|(_, s)| *s == set) {
            out.push((name.to_string(), set));
        }
    }
    Ok(out
        .into_iter()
        .map(|(name, set)| (name, set.into_iter().map(|m| base.subgroup(m)).collect()))
        .collect())
}

/// Primes worth building localities for: divisors of `|G|`.
pub fn locality_primes(g: &Subgroup) -> Vec<usize> {
    prime_divisors(g.order())
}
