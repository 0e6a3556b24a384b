//! Longest chains in subgroup lattices, computed by brute force.
//!
//! These never look at a marking or a tree; they enumerate the relevant
//! lattice outright and take a longest path through its inclusion order.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{FinGroup, MarkedGroup, Subgroup};
use crate::invariants::{self, TreeKind};
use crate::wftree::RankResult;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainResult {
    /// Number of strict steps.
    pub length: usize,
    pub witness: Vec<Subgroup>,
}

/// Longest chain from `bottom` to `top` through `lattice` under strict
/// inclusion. `lattice` must contain both endpoints and every member must
/// lie between them. Among longest chains the one that is least under the
/// canonical subgroup order, read from the top down, is returned.
fn longest_chain(mut lattice: Vec<Subgroup>, top: &Subgroup) -> ChainResult {
    lattice.sort();
    lattice.dedup();
    // best[i]: longest chain ending at lattice[i], with its predecessor.
    let mut best: Vec<(usize, Option<usize>)> = Vec::with_capacity(lattice.len());
    for i in 0..lattice.len() {
        let mut here = (0, None);
        for j in 0..i {
            if lattice[j].is_proper_subset(&lattice[i]) && best[j].0 + 1 > here.0 {
                here = (best[j].0 + 1, Some(j));
            }
        }
        best.push(here);
    }
    let top_index = lattice
        .iter()
        .position(|s| s == top)
        .expect("top in lattice");
    let mut witness = vec![lattice[top_index].clone()];
    let mut cur = top_index;
    while let Some(p) = best[cur].1 {
        witness.push(lattice[p].clone());
        cur = p;
    }
    witness.reverse();
    ChainResult {
        length: best[top_index].0,
        witness,
    }
}

fn check_limit(g: &FinGroup, limit: usize) -> Result<()> {
    if g.order() > limit {
        return Err(Error::SizeLimitExceeded { limit });
    }
    Ok(())
}

/// Every centralizer `C_G(A)`, from the single-element centralizers closed
/// under intersection.
pub fn centralizer_lattice(g: &FinGroup, limit: usize) -> Result<Vec<Subgroup>> {
    check_limit(g, limit)?;
    let mut found: std::collections::HashSet<Subgroup> = std::collections::HashSet::new();
    let mut list = vec![g.whole()];
    found.insert(g.whole());
    for x in 0..g.order() {
        let c = g.centralizer(&[x]);
        if found.insert(c.clone()) {
            list.push(c);
        }
    }
    let mut i = 0;
    while i < list.len() {
        for j in 0..i {
            let meet = g.intersect(&list[i], &list[j]).expect("same parent");
            if found.insert(meet.clone()) {
                list.push(meet);
            }
        }
        i += 1;
    }
    list.sort();
    Ok(list)
}

/// Longest chain `G = C₀ > C₁ > … > C_m = Z(G)` of centralizers; the
/// witness runs from `G` down.
pub fn longest_centralizer_chain(g: &FinGroup, limit: usize) -> Result<ChainResult> {
    let lattice = centralizer_lattice(g, limit)?;
    let mut r = longest_chain(lattice, &g.whole());
    debug_assert_eq!(r.witness[0], g.center());
    r.witness.reverse();
    Ok(r)
}

/// Longest chain `{e} = H₀ < … < H_m = G` of subgroups.
pub fn longest_subgroup_chain(g: &FinGroup, limit: usize) -> Result<ChainResult> {
    Ok(longest_chain(g.all_subgroups(limit)?, &g.whole()))
}

/// Longest chain `{e} = N₀ < … < N_m = G` of normal subgroups of `G`.
pub fn longest_normal_chain(g: &FinGroup, limit: usize) -> Result<ChainResult> {
    check_limit(g, limit)?;
    Ok(longest_chain(g.normal_subgroups(), &g.whole()))
}

/// Whether the deduplicated rank of a tree agrees with the rank of its
/// literal index tree.
pub fn explicit_rank_crosscheck(m: &MarkedGroup, kind: TreeKind, budget: usize) -> Result<bool> {
    let lazy = invariants::tree_rank(m, kind, budget)?;
    let explicit = invariants::tree_explicit(m, kind, m.len(), budget)?;
    Ok(match lazy.outcome {
        RankResult::WellFounded(o) => o == explicit.rank(),
        RankResult::IllFounded(_) => false,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessStep {
    pub order: usize,
    pub generators: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainReport {
    pub check: String,
    pub length: usize,
    pub witness: Vec<WitnessStep>,
}

impl ChainResult {
    /// Serializable form: subgroup orders with generators written as words
    /// in the group's generators.
    pub fn report(&self, g: &FinGroup, check: &str) -> ChainReport {
        let witness = self
            .witness
            .iter()
            .map(|h| WitnessStep {
                order: h.order(),
                generators: h.generators().iter().map(|&x| g.word_string(x)).collect(),
            })
            .collect();
        ChainReport {
            check: check.to_string(),
            length: self.length,
            witness,
        }
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::group::construct::*;

    const L: usize = 5040;

    fn strictly_increasing(w: &[Subgroup]) -> bool {
        w.windows(2).all(|p| p[0].is_proper_subset(&p[1]))
    }

    #[test]
    fn centralizer_chain_examples() {
        let c = cyclic(6, L).unwrap();
        let r = longest_centralizer_chain(&c, 512).unwrap();
        assert_eq!((r.length, r.witness.clone()), (0, vec![c.whole()]));
        let s3 = symmetric(3, L).unwrap();
        let r = longest_centralizer_chain(&s3, 512).unwrap();
        assert_eq!(r.length, 2);
        assert_eq!(
            r.witness.iter().map(Subgroup::order).collect::<Vec<_>>(),
            vec![6, 2, 1]
        );
        assert_eq!(
            longest_centralizer_chain(&quaternion(L).unwrap(), 512)
                .unwrap()
                .length,
            2
        );
        assert!(longest_centralizer_chain(&symmetric(6, L).unwrap(), 512).is_err());
    }

    #[test]
    fn subgroup_chain_examples() {
        assert_eq!(
            longest_subgroup_chain(&cyclic(7, L).unwrap(), 96)
                .unwrap()
                .length,
            1
        );
        assert_eq!(
            longest_subgroup_chain(&symmetric(3, L).unwrap(), 96)
                .unwrap()
                .length,
            2
        );
        let s4 = symmetric(4, L).unwrap();
        let r = longest_subgroup_chain(&s4, 96).unwrap();
        assert_eq!(r.length, 4);
        assert_eq!(
            r.witness.iter().map(Subgroup::order).collect::<Vec<_>>(),
            vec![1, 2, 4, 8, 24]
        );
    }

    #[test]
    fn normal_chain_examples() {
        assert_eq!(
            longest_normal_chain(&cyclic(5, L).unwrap(), 512)
                .unwrap()
                .length,
            1
        );
        assert_eq!(
            longest_normal_chain(&alternating(5, L).unwrap(), 512)
                .unwrap()
                .length,
            1
        );
        assert_eq!(
            longest_normal_chain(&elementary_abelian(2, 2, L).unwrap(), 512)
                .unwrap()
                .length,
            2
        );
        let d4 = dihedral(4, L).unwrap();
        let r = longest_normal_chain(&d4, 512).unwrap();
        assert_eq!(r.length, 3);
        assert_eq!(r.witness[1], d4.center());
    }

    #[test]
    fn witnesses_validate() {
        for g in [
            symmetric(4, L).unwrap(),
            dihedral(6, L).unwrap(),
            quaternion(L).unwrap(),
        ] {
            let sub = longest_subgroup_chain(&g, 96).unwrap();
            let normal = longest_normal_chain(&g, 512).unwrap();
            let cent = longest_centralizer_chain(&g, 512).unwrap();
            for r in [&sub, &normal] {
                assert!(r.witness[0].is_trivial() && r.witness.last() == Some(&g.whole()));
                assert!(strictly_increasing(&r.witness));
                assert_eq!(r.witness.len(), r.length + 1);
            }
            let mut down = cent.witness.clone();
            down.reverse();
            assert!(strictly_increasing(&down));
            assert_eq!(
                (cent.witness[0].clone(), down[0].clone()),
                (g.whole(), g.center())
            );
            // Each step is one adjoined element.
            for p in sub.witness.windows(2) {
                assert!(p[1].elements().any(|x| g.extend(&p[0], &[x]) == p[1]));
            }
            for p in normal.witness.windows(2) {
                assert!(p[1]
                    .elements()
                    .any(|x| g.normal_extend_in(&g.whole(), &p[0], &[x]) == p[1]));
            }
        }
    }

    #[test]
    fn crosscheck_small_groups() {
        for g in [cyclic(1, L).unwrap(), symmetric(3, L).unwrap()] {
            let m = MarkedGroup::default_marking(Arc::new(g));
            for kind in [
                TreeKind::Centralizer,
                TreeKind::Subgroup,
                TreeKind::MaxN,
                TreeKind::Decomposition(1),
            ] {
                assert!(
                    explicit_rank_crosscheck(&m, kind, 1_000_000).unwrap(),
                    "{kind:?}"
                );
            }
        }
        let d4 = MarkedGroup::default_marking(Arc::new(dihedral(4, L).unwrap()));
        assert!(explicit_rank_crosscheck(&d4, TreeKind::MaxN, 1_000_000).unwrap());
    }

    #[test]
    fn witness_report_uses_words() {
        let g = symmetric(3, L).unwrap();
        let r = longest_subgroup_chain(&g, 96).unwrap().report(&g, "max");
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["length"], 2);
        assert_eq!(
            json["witness"][0]["generators"].as_array().unwrap().len(),
            0
        );
        for step in r.witness.iter().skip(1) {
            assert!(step.generators.iter().all(|w| w.starts_with('g')));
        }
    }
}
