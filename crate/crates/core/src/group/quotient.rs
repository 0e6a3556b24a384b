use std::sync::Arc;

use super::{FinGroup, Permutation, Subgroup};
use crate::error::{Error, Result};

/// `H/N` for a subgroup `H` of a base group and `N ⊴ H`, realised as the
/// regular permutation action of `H/N` on its right cosets.
#[derive(Debug)]
pub struct QuotientGroup {
    base: Arc<FinGroup>,
    ambient: Subgroup,
    kernel: Subgroup,
    coset_reps: Vec<usize>,
    projection: Vec<Option<usize>>,
    group: Arc<FinGroup>,
    coset_element: Vec<usize>,
}

impl QuotientGroup {
    pub fn new(base: Arc<FinGroup>, ambient: Subgroup, kernel: Subgroup) -> Result<Self> {
        if !base.is_normal_in(&kernel, &ambient) {
            return Err(Error::NotNormal);
        }
        let mut projection = vec![None; base.order()];
        let mut coset_reps = Vec::new();
        for x in ambient.elements() {
            if projection[x].is_some() {
                continue;
            }
            let c = coset_reps.len();
            coset_reps.push(x);
            for n in kernel.elements() {
                projection[base.mul(n, x)] = Some(c);
            }
        }
        let cosets = coset_reps.len();
        let action = |x: usize| -> Permutation {
            let images = coset_reps
                .iter()
                .map(|&r| projection[base.mul(r, x)].unwrap() as u32)
                .collect();
            Permutation::from_images(images).expect("right multiplication permutes cosets")
        };
        let gens: Vec<Permutation> = ambient.generators().iter().map(|&g| action(g)).collect();
        let group = FinGroup::generate(cosets, gens, cosets.max(1))?;
        let coset_element = coset_reps
            .iter()
            .map(|&r| {
                group
                    .index_of(&action(r))
                    .expect("coset action lies in the quotient")
            })
            .collect();
        Ok(QuotientGroup {
            base,
            ambient,
            kernel,
            coset_reps,
            projection,
            group: Arc::new(group),
            coset_element,
        })
    }

    pub fn base(&self) -> &Arc<FinGroup> {
        &self.base
    }

    pub fn ambient(&self) -> &Subgroup {
        &self.ambient
    }

    pub fn kernel(&self) -> &Subgroup {
        &self.kernel
    }

    pub fn order(&self) -> usize {
        self.coset_reps.len()
    }

    pub fn coset_reps(&self) -> &[usize] {
        &self.coset_reps
    }

    /// Coset index of a base element, `None` outside the ambient subgroup.
    pub fn coset_of(&self, x: usize) -> Option<usize> {
        self.projection[x]
    }

    /// The quotient as a standalone group.
    pub fn group(&self) -> &Arc<FinGroup> {
        &self.group
    }

    /// Image of a base element in [`Self::group`].
    pub fn project(&self, x: usize) -> Option<usize> {
        self.projection[x].map(|c| self.coset_element[c])
    }
}

impl FinGroup {
    /// `G/N`.
    pub fn quotient(self: &Arc<Self>, n: &Subgroup) -> Result<QuotientGroup> {
        QuotientGroup::new(self.clone(), self.whole(), n.clone())
    }
}
