use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{FinGroup, QuotientGroup, Subgroup};
use crate::error::{Error, Result};

/// A carrier subgroup of a finite group together with a finite surjective
/// enumeration of it, given as element indices of the parent group.
///
/// The enumeration stands in for the sequence `g₀, g₁, …` that every tree
/// construction walks. Entries outside the carrier are replaced by the
/// identity on construction.
#[derive(Clone, Debug)]
pub struct MarkedGroup {
    group: Arc<FinGroup>,
    carrier: Subgroup,
    enumeration: Vec<usize>,
    seed: Option<u64>,
}

impl MarkedGroup {
    pub fn new(group: Arc<FinGroup>, carrier: Subgroup, enumeration: Vec<usize>) -> Result<Self> {
        if carrier.parent_id() != group.id() {
            return Err(Error::ParentMismatch);
        }
        if let Some(&bad) = enumeration.iter().find(|&&x| x >= group.order()) {
            return Err(Error::InvalidMarking(format!(
                "element index {bad} out of range"
            )));
        }
        let enumeration: Vec<usize> = enumeration
            .into_iter()
            .map(|x| {
                if carrier.contains(x) {
                    x
                } else {
                    group.identity()
                }
            })
            .collect();
        let mut hit = fixedbitset::FixedBitSet::with_capacity(group.order());
        hit.extend(enumeration.iter().copied());
        if !carrier.members().is_subset(&hit) {
            return Err(Error::InvalidMarking(
                "enumeration does not cover the carrier".into(),
            ));
        }
        Ok(MarkedGroup {
            group,
            carrier,
            enumeration,
            seed: None,
        })
    }

    /// The canonical marking: every element once, in canonical order.
    pub fn default_marking(group: Arc<FinGroup>) -> Self {
        let carrier = group.whole();
        let enumeration = (0..group.order()).collect();
        MarkedGroup {
            group,
            carrier,
            enumeration,
            seed: None,
        }
    }

    pub fn group(&self) -> &Arc<FinGroup> {
        &self.group
    }

    pub fn carrier(&self) -> &Subgroup {
        &self.carrier
    }

    pub fn enumeration(&self) -> &[usize] {
        &self.enumeration
    }

    pub fn len(&self) -> usize {
        self.enumeration.len()
    }

    pub fn is_empty(&self) -> bool {
        self.enumeration.is_empty()
    }

    /// Seed of the last [`Self::remark`], if any.
    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// A fresh enumeration of the same carrier: the carrier's members
    /// shuffled by a seeded generator, with some seeded duplicates inserted.
    pub fn remark(&self, seed: u64) -> MarkedGroup {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut enumeration: Vec<usize> = self.carrier.elements().collect();
        enumeration.shuffle(&mut rng);
        let extra = rng.gen_range(0..=enumeration.len());
        for _ in 0..extra {
            let x = enumeration[rng.gen_range(0..enumeration.len())];
            let at = rng.gen_range(0..=enumeration.len());
            enumeration.insert(at, x);
        }
        MarkedGroup {
            group: self.group.clone(),
            carrier: self.carrier.clone(),
            enumeration,
            seed: Some(seed),
        }
    }

    /// Restricts the marking to `h ≤ carrier`: entries outside `h` become
    /// the identity.
    pub fn induced_subgroup_marking(&self, h: &Subgroup) -> Result<MarkedGroup> {
        if h.parent_id() != self.group.id() {
            return Err(Error::ParentMismatch);
        }
        if !h.is_subset(&self.carrier) {
            return Err(Error::NotContained);
        }
        let e = self.group.identity();
        let enumeration = self
            .enumeration
            .iter()
            .map(|&x| if h.contains(x) { x } else { e })
            .collect();
        Ok(MarkedGroup {
            group: self.group.clone(),
            carrier: h.clone(),
            enumeration,
            seed: self.seed,
        })
    }

    /// Pushes the marking forward to `carrier/n`, returned together with the
    /// quotient. The new marking lives on the quotient's standalone group.
    pub fn induced_quotient_marking(&self, n: &Subgroup) -> Result<(MarkedGroup, QuotientGroup)> {
        let q = QuotientGroup::new(self.group.clone(), self.carrier.clone(), n.clone())?;
        let group = q.group().clone();
        let enumeration = self
            .enumeration
            .iter()
            .map(|&x| q.project(x).expect("enumeration lies in the carrier"))
            .collect();
        let marking = MarkedGroup {
            carrier: group.whole(),
            group,
            enumeration,
            seed: self.seed,
        };
        Ok((marking, q))
    }

    /// The carrier as a standalone permutation group generated by the
    /// carrier's generators, with the enumeration transported.
    pub fn standalone(&self, limit: usize) -> Result<MarkedGroup> {
        if self.carrier.order() == self.group.order() {
            return Ok(self.clone());
        }
        let g = &self.group;
        let gens = self
            .carrier
            .generators()
            .iter()
            .map(|&x| g.element(x).clone())
            .collect();
        let sub = Arc::new(FinGroup::generate(g.degree(), gens, limit)?);
        let enumeration = self
            .enumeration
            .iter()
            .map(|&x| sub.index_of(g.element(x)).expect("carrier element"))
            .collect();
        Ok(MarkedGroup {
            carrier: sub.whole(),
            group: sub,
            enumeration,
            seed: self.seed,
        })
    }
}
