//! Exhaustive subgroup and normal-subgroup enumeration.

use std::collections::HashSet;

use fixedbitset::FixedBitSet;

use super::{FinGroup, Subgroup};
use crate::error::{Error, Result};

impl FinGroup {
    /// Every normal subgroup of `within`, each once, sorted by order and
    /// then by member indices.
    ///
    /// Each normal subgroup is the join of the normal closures of the
    /// conjugacy classes it contains, so closing the class closures under
    /// pairwise joins finds them all.
    pub fn normal_subgroups_in(&self, within: &Subgroup) -> Vec<Subgroup> {
        let mut seen = FixedBitSet::with_capacity(self.order());
        let mut found: HashSet<Subgroup> = HashSet::new();
        let mut list = vec![self.trivial()];
        found.insert(self.trivial());
        for x in within.elements() {
            if seen.contains(x) {
                continue;
            }
            for y in self.conjugacy_class_in(within, x) {
                seen.insert(y);
            }
            let n = self.normal_closure_in(within, &[x]);
            if found.insert(n.clone()) {
                list.push(n);
            }
        }
        let atoms = list.len();
        let mut i = 0;
        while i < list.len() {
            for j in 1..atoms {
                if list[j].is_subset(&list[i]) {
                    continue;
                }
                let join = self.extend(&list[i], list[j].generators());
                if found.insert(join.clone()) {
                    list.push(join);
                }
            }
            i += 1;
        }
        list.sort();
        list
    }

    pub fn normal_subgroups(&self) -> Vec<Subgroup> {
        self.normal_subgroups_in(&self.whole())
    }

    /// Normal subgroups of `h` of index at most `k + 1`.
    pub fn low_index_normal_subgroups(&self, h: &Subgroup, k: usize) -> Vec<Subgroup> {
        self.normal_subgroups_in(h)
            .into_iter()
            .filter(|n| h.order() / n.order() <= k + 1)
            .collect()
    }

    /// Every subgroup of the group, each once, sorted by order and then by
    /// member indices. Fails when the group order exceeds `limit`.
    pub fn all_subgroups(&self, limit: usize) -> Result<Vec<Subgroup>> {
        if self.order() > limit {
            return Err(Error::SizeLimitExceeded { limit });
        }
        let mut found: HashSet<Subgroup> = HashSet::from([self.trivial()]);
        let mut list = vec![self.trivial()];
        let mut i = 0;
        while i < list.len() {
            let h = list[i].clone();
            // ⟨H, x⟩ = ⟨H, hx⟩, so one element per right coset of H suffices.
            let mut covered = h.members().clone();
            for x in 0..self.order() {
                if covered.contains(x) {
                    continue;
                }
                for y in h.elements() {
                    covered.insert(self.mul(y, x));
                }
                let k = self.extend(&h, &[x]);
                if found.insert(k.clone()) {
                    list.push(k);
                }
            }
            i += 1;
        }
        list.sort();
        Ok(list)
    }
}
