use std::cmp::Ordering;
use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use fixedbitset::FixedBitSet;

use super::perm::Permutation;
use crate::error::{Error, Result};

/// Groups up to this order get a precomputed multiplication table.
const TABLE_LIMIT: usize = 2048;

static NEXT_GROUP_ID: AtomicU64 = AtomicU64::new(0);

/// A finite permutation group with its elements in canonical order.
///
/// Element 0 is always the identity. Elements are numbered in the order a
/// breadth-first closure from the identity discovers them, multiplying on
/// the right by the generators in the given order.
pub struct FinGroup {
    id: u64,
    degree: usize,
    generators: Vec<Permutation>,
    gen_indices: Vec<usize>,
    elements: Vec<Permutation>,
    index: HashMap<Permutation, usize>,
    inverses: Vec<usize>,
    table: Option<Vec<u32>>,
}

impl FinGroup {
    pub fn generate(degree: usize, generators: Vec<Permutation>, limit: usize) -> Result<Self> {
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::InvalidPermutation(format!(
                    "generator {g} has degree {} but the group has degree {degree}",
                    g.degree()
                )));
            }
        }
        let identity = Permutation::identity(degree);
        let mut elements = vec![identity.clone()];
        let mut index = HashMap::from([(identity, 0usize)]);
        let mut head = 0;
        while head < elements.len() {
            for g in &generators {
                let y = elements[head].then(g);
                if !index.contains_key(&y) {
                    if elements.len() == limit {
                        return Err(Error::SizeLimitExceeded { limit });
                    }
                    index.insert(y.clone(), elements.len());
                    elements.push(y);
                }
            }
            head += 1;
        }
        let gen_indices = generators.iter().map(|g| index[g]).collect();
        let inverses = elements.iter().map(|x| index[&x.inverse()]).collect();
        let n = elements.len();
        let table = (n <= TABLE_LIMIT).then(|| {
            let mut t = Vec::with_capacity(n * n);
            for a in &elements {
                for b in &elements {
                    t.push(index[&a.then(b)] as u32);
                }
            }
            t
        });
        Ok(FinGroup {
            id: NEXT_GROUP_ID.fetch_add(1, AtomicOrdering::Relaxed),
            degree,
            generators,
            gen_indices,
            elements,
            index,
            inverses,
            table,
        })
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn generator_indices(&self) -> &[usize] {
        &self.gen_indices
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Permutation {
        &self.elements[i]
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Product `a·b` (apply `a`, then `b`).
    /// A shortest word for `x` in the generators, as generator positions
    /// read left to right.
    pub fn word(&self, x: usize) -> Vec<usize> {
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; self.order()];
        let mut queue = VecDeque::from([0usize]);
        let mut seen = FixedBitSet::with_capacity(self.order());
        seen.insert(0);
        while let Some(y) = queue.pop_front() {
            if y == x {
                break;
            }
            for (i, &s) in self.gen_indices.iter().enumerate() {
                let z = self.mul(y, s);
                if !seen.put(z) {
                    parent[z] = Some((y, i));
                    queue.push_back(z);
                }
            }
        }
        let mut word = Vec::new();
        let mut cur = x;
        while let Some((p, i)) = parent[cur] {
            word.push(i);
            cur = p;
        }
        word.reverse();
        word
    }

    /// [`Self::word`] rendered as `g0*g1*…`, or `e` for the identity.
    pub fn word_string(&self, x: usize) -> String {
        let w = self.word(x);
        if w.is_empty() {
            return "e".into();
        }
        w.iter()
            .map(|i| format!("g{i}"))
            .collect::<Vec<_>>()
            .join("*")
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.table {
            Some(t) => t[a * self.order() + b] as usize,
            None => self.index[&self.elements[a].then(&self.elements[b])],
        }
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    /// `h⁻¹·x·h`.
    pub fn conj(&self, x: usize, h: usize) -> usize {
        self.mul(self.mul(self.inv(h), x), h)
    }

    /// `a⁻¹·b⁻¹·a·b`.
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    pub fn commute(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> usize {
        (0..self.order())
            .map(|a| self.element_order(a))
            .fold(1, lcm)
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.gen_indices;
        g.iter().all(|&a| g.iter().all(|&b| self.commute(a, b)))
    }

    pub fn whole(&self) -> Subgroup {
        let mut members = FixedBitSet::with_capacity(self.order());
        members.insert_range(..);
        Subgroup {
            parent: self.id,
            members,
            order: self.order(),
            gens: self.gen_indices.clone(),
        }
    }

    pub fn trivial(&self) -> Subgroup {
        let mut members = FixedBitSet::with_capacity(self.order());
        members.insert(0);
        Subgroup {
            parent: self.id,
            members,
            order: 1,
            gens: Vec::new(),
        }
    }

    /// Checks that a bit-vector is a subgroup of this group: contains the
    /// identity and is closed under products and inverses. Quadratic; meant
    /// for validation.
    pub fn is_subgroup_set(&self, members: &FixedBitSet) -> bool {
        if members.len() != self.order() || !members.contains(0) {
            return false;
        }
        let xs: Vec<usize> = members.ones().collect();
        xs.iter().all(|&a| members.contains(self.inv(a)))
            && xs
                .iter()
                .all(|&a| xs.iter().all(|&b| members.contains(self.mul(a, b))))
    }

    /// Wraps a bit-vector that is already known to be a subgroup.
    pub fn subgroup_from_members(&self, members: FixedBitSet) -> Subgroup {
        debug_assert!(members.contains(0));
        let elems: Vec<usize> = members.ones().collect();
        let mut sub = self.trivial();
        for x in elems {
            if !sub.contains(x) {
                sub = self.extend(&sub, &[x]);
            }
        }
        debug_assert_eq!(sub.members, members);
        sub
    }

    /// Smallest subgroup containing `seed`.
    pub fn closure(&self, seed: &[usize]) -> Subgroup {
        self.extend(&self.trivial(), seed)
    }

    /// `⟨base ∪ extra⟩`.
    pub fn extend(&self, base: &Subgroup, extra: &[usize]) -> Subgroup {
        let mut sub = base.clone();
        for &x in extra {
            if !sub.contains(x) {
                sub = self.extend_one(&sub, x);
            }
        }
        sub
    }

    fn extend_one(&self, base: &Subgroup, g: usize) -> Subgroup {
        let mut gens = base.gens.clone();
        gens.push(g);
        let mut members = base.members.clone();
        let mut queue: VecDeque<usize> = base.members.ones().collect();
        let mut order = base.order;
        while let Some(x) = queue.pop_front() {
            for &s in &gens {
                let y = self.mul(x, s);
                if !members.put(y) {
                    order += 1;
                    queue.push_back(y);
                }
            }
        }
        Subgroup {
            parent: self.id,
            members,
            order,
            gens,
        }
    }

    /// `{g ∈ within : g·a = a·g for all a ∈ set}`.
    pub fn centralizer_in(&self, within: &Subgroup, set: &[usize]) -> Subgroup {
        let mut members = FixedBitSet::with_capacity(self.order());
        for g in within.members.ones() {
            if set.iter().all(|&a| self.commute(g, a)) {
                members.insert(g);
            }
        }
        if members.count_ones(..) == within.order {
            return within.clone();
        }
        self.subgroup_from_members(members)
    }

    pub fn centralizer(&self, set: &[usize]) -> Subgroup {
        self.centralizer_in(&self.whole(), set)
    }

    pub fn center_of(&self, h: &Subgroup) -> Subgroup {
        self.centralizer_in(h, &h.gens)
    }

    pub fn center(&self) -> Subgroup {
        self.center_of(&self.whole())
    }

    /// Smallest normal subgroup of `within` containing `base ∪ extra`.
    pub fn normal_extend_in(
        &self,
        within: &Subgroup,
        base: &Subgroup,
        extra: &[usize],
    ) -> Subgroup {
        let mut n = base.clone();
        let mut pending: Vec<usize> = extra.to_vec();
        loop {
            while let Some(x) = pending.pop() {
                if !n.contains(x) {
                    n = self.extend_one(&n, x);
                }
            }
            for &g in &n.gens {
                for &h in &within.gens {
                    let y = self.conj(g, h);
                    if !n.contains(y) {
                        pending.push(y);
                    }
                }
            }
            if pending.is_empty() {
                return n;
            }
        }
    }

    pub fn normal_closure_in(&self, within: &Subgroup, set: &[usize]) -> Subgroup {
        self.normal_extend_in(within, &self.trivial(), set)
    }

    pub fn normal_closure(&self, set: &[usize]) -> Subgroup {
        self.normal_closure_in(&self.whole(), set)
    }

    /// `[H, H]`, the normal closure in `H` of commutators of its generators.
    pub fn commutator_subgroup(&self, h: &Subgroup) -> Subgroup {
        let mut comms = Vec::new();
        for (i, &a) in h.gens.iter().enumerate() {
            for &b in &h.gens[i + 1..] {
                let c = self.commutator(a, b);
                if c != 0 {
                    comms.push(c);
                }
            }
        }
        self.normal_closure_in(h, &comms)
    }

    pub fn is_normal_in(&self, n: &Subgroup, within: &Subgroup) -> bool {
        n.is_subset(within)
            && n.gens
                .iter()
                .all(|&x| within.gens.iter().all(|&h| n.contains(self.conj(x, h))))
    }

    pub fn intersect(&self, a: &Subgroup, b: &Subgroup) -> Result<Subgroup> {
        if a.parent != self.id || b.parent != self.id {
            return Err(Error::ParentMismatch);
        }
        if a.is_subset(b) {
            return Ok(a.clone());
        }
        if b.is_subset(a) {
            return Ok(b.clone());
        }
        let mut m = a.members.clone();
        m.intersect_with(&b.members);
        Ok(self.subgroup_from_members(m))
    }

    /// Conjugacy class of `x` inside `within`.
    pub fn conjugacy_class_in(&self, within: &Subgroup, x: usize) -> Vec<usize> {
        let mut seen = FixedBitSet::with_capacity(self.order());
        seen.insert(x);
        let mut out = vec![x];
        let mut head = 0;
        while head < out.len() {
            let y = out[head];
            for &h in &within.gens {
                let z = self.conj(y, h);
                if !seen.put(z) {
                    out.push(z);
                }
            }
            head += 1;
        }
        out
    }
}

impl fmt::Debug for FinGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinGroup")
            .field("degree", &self.degree)
            .field("order", &self.order())
            .field("generators", &self.generators)
            .finish()
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// A subgroup of a [`FinGroup`], stored as a membership bit-vector over the
/// parent's element indices, together with a generating set.
///
/// Equality, hashing and ordering use the parent and the members only. The
/// order is by size, then lexicographically by member indices.
#[derive(Clone)]
pub struct Subgroup {
    parent: u64,
    members: FixedBitSet,
    order: usize,
    gens: Vec<usize>,
}

impl Subgroup {
    pub fn parent_id(&self) -> u64 {
        self.parent
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn members(&self) -> &FixedBitSet {
        &self.members
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.ones()
    }

    pub fn generators(&self) -> &[usize] {
        &self.gens
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.contains(x)
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn is_subset(&self, other: &Subgroup) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn is_proper_subset(&self, other: &Subgroup) -> bool {
        self.order < other.order && self.is_subset(other)
    }

    /// Compact textual key: hex digits of the membership bit-vector.
    pub fn key_string(&self) -> String {
        let mut s = String::new();
        for block in self.members.as_slice() {
            s.push_str(&format!("{block:016x}"));
        }
        s
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.parent == other.parent && self.members == other.members
    }
}

impl Eq for Subgroup {}

impl Hash for Subgroup {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.parent.hash(state);
        self.members.hash(state);
    }
}

impl Ord for Subgroup {
    fn cmp(&self, other: &Self) -> Ordering {
        self.parent
            .cmp(&other.parent)
            .then(self.order.cmp(&other.order))
            .then_with(|| self.members.ones().cmp(other.members.ones()))
    }
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let xs: Vec<usize> = self.members.ones().collect();
        write!(f, "Subgroup(order {}, {:?})", self.order, xs)
    }
}
