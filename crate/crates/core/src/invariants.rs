//! The four tree constructions over a marked group and their ranks.
//!
//! Every tree walks the enumeration of a [`MarkedGroup`]. States are
//! subgroups of the marking's parent group, so state keys are plain
//! [`Subgroup`] values and identical subtrees are shared.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{FinGroup, MarkedGroup, Subgroup};
use crate::ordinal::Ordinal;
use crate::wftree::{self, Dag, FiniteTree, LazyRank, RankResult, TreeSpec};

/// `order n <gens>` with generators in cycle notation.
pub fn describe_subgroup(g: &FinGroup, h: &Subgroup) -> String {
    let gens: Vec<String> = h
        .generators()
        .iter()
        .map(|&x| g.element(x).to_string())
        .collect();
    format!("order {} <{}>", h.order(), gens.join(", "))
}

fn first_appearances(m: &MarkedGroup) -> Vec<usize> {
    let mut seen = fixedbitset::FixedBitSet::with_capacity(m.group().order());
    m.enumeration()
        .iter()
        .copied()
        .filter(|&x| !seen.put(x))
        .collect()
}

/// Root `G`; the child of `C` at index `i` is `C ∩ C_G(g_i)` when that is a
/// proper subgroup of `C`. Terminal states are exactly `Z(G)`.
pub struct CentralizerTree {
    marking: MarkedGroup,
    centralizers: HashMap<usize, Subgroup>,
    center: Subgroup,
}

impl CentralizerTree {
    pub fn new(m: &MarkedGroup) -> Self {
        let g = m.group();
        let centralizers = first_appearances(m)
            .into_iter()
            .map(|x| (x, g.centralizer_in(m.carrier(), &[x])))
            .collect();
        CentralizerTree {
            marking: m.clone(),
            centralizers,
            center: g.center_of(m.carrier()),
        }
    }
}

impl TreeSpec for CentralizerTree {
    type State = Subgroup;
    type Key = Subgroup;

    fn root(&self) -> Subgroup {
        self.marking.carrier().clone()
    }

    fn key(&self, s: &Subgroup) -> Subgroup {
        s.clone()
    }

    fn indexed_children(&self, c: &Subgroup) -> Vec<Option<Subgroup>> {
        let g = self.marking.group();
        let kids: Vec<Option<Subgroup>> = self
            .marking
            .enumeration()
            .iter()
            .map(|x| {
                let meet = g.intersect(c, &self.centralizers[x]).expect("same parent");
                (meet.order() < c.order()).then_some(meet)
            })
            .collect();
        assert_eq!(
            kids.iter().all(Option::is_none),
            *c == self.center,
            "terminal exactly at the center"
        );
        kids
    }

    fn describe(&self, key: &Subgroup) -> String {
        describe_subgroup(self.marking.group(), key)
    }
}

/// Root `{e}`; the child of `H` at index `i` is `⟨H, g_i⟩` when `g_i ∉ H`.
/// The only terminal state is the carrier.
pub struct SubgroupTree {
    marking: MarkedGroup,
}

impl SubgroupTree {
    pub fn new(m: &MarkedGroup) -> Self {
        SubgroupTree { marking: m.clone() }
    }
}

impl TreeSpec for SubgroupTree {
    type State = Subgroup;
    type Key = Subgroup;

    fn root(&self) -> Subgroup {
        self.marking.group().trivial()
    }

    fn key(&self, s: &Subgroup) -> Subgroup {
        s.clone()
    }

    fn indexed_children(&self, h: &Subgroup) -> Vec<Option<Subgroup>> {
        let g = self.marking.group();
        let mut made: HashMap<usize, Subgroup> = HashMap::new();
        let kids: Vec<Option<Subgroup>> = self
            .marking
            .enumeration()
            .iter()
            .map(|&x| {
                (!h.contains(x)).then(|| made.entry(x).or_insert_with(|| g.extend(h, &[x])).clone())
            })
            .collect();
        assert_eq!(
            kids.iter().all(Option::is_none),
            h == self.marking.carrier(),
            "terminal exactly at the carrier"
        );
        kids
    }

    fn describe(&self, key: &Subgroup) -> String {
        describe_subgroup(self.marking.group(), key)
    }
}

/// States are kernels `N`, standing for the quotient `G/N`. Root `{e}`; the
/// child of `N` at index `i` is `⟨⟨N ∪ {g_i}⟩⟩` when `g_i ∉ N`. The only
/// terminal kernel is the carrier itself.
pub struct MaxNTree {
    marking: MarkedGroup,
}

impl MaxNTree {
    pub fn new(m: &MarkedGroup) -> Self {
        MaxNTree { marking: m.clone() }
    }
}

impl TreeSpec for MaxNTree {
    type State = Subgroup;
    type Key = Subgroup;

    fn root(&self) -> Subgroup {
        self.marking.group().trivial()
    }

    fn key(&self, s: &Subgroup) -> Subgroup {
        s.clone()
    }

    fn indexed_children(&self, n: &Subgroup) -> Vec<Option<Subgroup>> {
        let g = self.marking.group();
        let carrier = self.marking.carrier();
        let mut made: HashMap<usize, Subgroup> = HashMap::new();
        let kids: Vec<Option<Subgroup>> = self
            .marking
            .enumeration()
            .iter()
            .map(|&x| {
                (!n.contains(x)).then(|| {
                    made.entry(x)
                        .or_insert_with(|| g.normal_extend_in(carrier, n, &[x]))
                        .clone()
                })
            })
            .collect();
        assert_eq!(
            kids.iter().all(Option::is_none),
            n == carrier,
            "terminal exactly at the carrier"
        );
        kids
    }

    fn describe(&self, key: &Subgroup) -> String {
        format!("kernel {}", describe_subgroup(self.marking.group(), key))
    }
}

/// Shared caches for the decomposition trees of one marked group, reused
/// across offsets.
pub struct Decomposer {
    marking: MarkedGroup,
    prefixes: RefCell<HashMap<Subgroup, Rc<Vec<Subgroup>>>>,
    normals: RefCell<HashMap<Subgroup, Rc<Vec<Subgroup>>>>,
    reduced: RefCell<HashMap<(Subgroup, usize), Subgroup>>,
}

impl Decomposer {
    pub fn new(m: &MarkedGroup) -> Self {
        Decomposer {
            marking: m.clone(),
            prefixes: RefCell::default(),
            normals: RefCell::default(),
            reduced: RefCell::default(),
        }
    }

    pub fn marking(&self) -> &MarkedGroup {
        &self.marking
    }

    /// `R_n(H)` for every prefix `n`: the subgroup generated by those of the
    /// first `n + 1` enumeration entries that lie in `H`. This is the prefix
    /// subgroup of the marking induced on `H`, whichever path led to `H`.
    pub fn prefix_subgroups(&self, h: &Subgroup) -> Rc<Vec<Subgroup>> {
        if let Some(p) = self.prefixes.borrow().get(h) {
            return p.clone();
        }
        let g = self.marking.group();
        let mut current = g.trivial();
        let list: Vec<Subgroup> = self
            .marking
            .enumeration()
            .iter()
            .map(|&x| {
                if h.contains(x) && !current.contains(x) {
                    current = g.extend(&current, &[x]);
                }
                current.clone()
            })
            .collect();
        let list = Rc::new(list);
        self.prefixes.borrow_mut().insert(h.clone(), list.clone());
        list
    }

    /// `R_n(H)`, clamped to the last prefix when `n` runs past the end.
    pub fn r_n(&self, h: &Subgroup, n: usize) -> Subgroup {
        let p = self.prefix_subgroups(h);
        p[n.min(p.len() - 1)].clone()
    }

    fn normal_subgroups(&self, k: &Subgroup) -> Rc<Vec<Subgroup>> {
        if let Some(n) = self.normals.borrow().get(k) {
            return n.clone();
        }
        let list = Rc::new(self.marking.group().normal_subgroups_in(k));
        self.normals.borrow_mut().insert(k.clone(), list.clone());
        list
    }

    /// `S_k(K) = [K,K] ∩ ⋂{N ⊴ K : |K:N| ≤ k+1}`.
    pub fn s_k(&self, h: &Subgroup, k: usize) -> Subgroup {
        assert!(k >= 1, "S_k needs k ≥ 1");
        let k = k.min(h.order());
        let key = (h.clone(), k);
        if let Some(s) = self.reduced.borrow().get(&key) {
            return s.clone();
        }
        let g = self.marking.group();
        let mut s = g.commutator_subgroup(h);
        for n in self.normal_subgroups(h).iter() {
            if h.order() / n.order() <= k + 1 {
                s = g.intersect(&s, n).expect("same parent");
            }
        }
        self.reduced.borrow_mut().insert(key, s.clone());
        s
    }

    pub fn tree(&self, l: usize) -> DecompositionTree<'_> {
        assert!(l >= 1, "offset must be at least 1");
        let cap = self.marking.carrier().order().saturating_sub(l);
        DecompositionTree { dec: self, l, cap }
    }
}

/// `T^l(G)`: states `(H, d)` with `H = G_s` and `d = |s|`. While `H ≠ {e}`,
/// the child at prefix `n` is `(S_{d+l}(R_n(H)), d+1)`.
///
/// Depths are capped at `max(0, |G| − l)`: from there on every `S_{d+l}`
/// is trivial because `{e}` has index at most `|G| ≤ d+l+1`.
pub struct DecompositionTree<'a> {
    dec: &'a Decomposer,
    l: usize,
    cap: usize,
}

impl TreeSpec for DecompositionTree<'_> {
    type State = (Subgroup, usize);
    type Key = (Subgroup, usize);

    fn root(&self) -> (Subgroup, usize) {
        (self.dec.marking.carrier().clone(), 0)
    }

    fn key(&self, s: &(Subgroup, usize)) -> (Subgroup, usize) {
        (s.0.clone(), s.1.min(self.cap))
    }

    fn indexed_children(&self, (h, d): &(Subgroup, usize)) -> Vec<Option<(Subgroup, usize)>> {
        if h.is_trivial() {
            return Vec::new();
        }
        let d = (*d).min(self.cap);
        self.dec
            .prefix_subgroups(h)
            .iter()
            .map(|r| Some((self.dec.s_k(r, d + self.l), d + 1)))
            .collect()
    }

    fn describe(&self, (h, d): &(Subgroup, usize)) -> String {
        format!("{} @{d}", describe_subgroup(self.dec.marking.group(), h))
    }
}

fn well_founded<K>(r: LazyRank<K>) -> Result<(Ordinal, usize)> {
    match r.outcome {
        RankResult::WellFounded(o) => Ok((o, r.states)),
        RankResult::IllFounded(_) => Err(Error::InvalidArgument(
            "tree of a finite group is ill-founded".into(),
        )),
    }
}

pub fn centralizer_rank(m: &MarkedGroup, budget: usize) -> Result<Ordinal> {
    Ok(well_founded(wftree::rank_lazy(&CentralizerTree::new(m), budget)?)?.0)
}

pub fn subgroup_rank(m: &MarkedGroup, budget: usize) -> Result<Ordinal> {
    Ok(well_founded(wftree::rank_lazy(&SubgroupTree::new(m), budget)?)?.0)
}

pub fn maxn_length(m: &MarkedGroup, budget: usize) -> Result<Ordinal> {
    Ok(well_founded(wftree::rank_lazy(&MaxNTree::new(m), budget)?)?.0)
}

pub fn decomposition_tree_rank(m: &MarkedGroup, l: usize, budget: usize) -> Result<Ordinal> {
    let dec = Decomposer::new(m);
    Ok(well_founded(wftree::rank_lazy(&dec.tree(l), budget)?)?.0)
}

/// `ρ(T^l)` for `l = 1..=upto`.
pub fn decomposition_profile(m: &MarkedGroup, upto: usize, budget: usize) -> Result<Vec<Ordinal>> {
    let dec = Decomposer::new(m);
    (1..=upto)
        .map(|l| Ok(well_founded(wftree::rank_lazy(&dec.tree(l), budget)?)?.0))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub xi: Ordinal,
    pub deg: usize,
    /// States visited by the tree at offset `deg`.
    pub states: usize,
}

/// `ξ = min_l ρ(T^l)` and the least offset attaining it.
///
/// `ρ(T^l)` does not increase with `l`, and at `l = |G|` every child of the
/// root is already trivial, so `ξ = ρ(T^{|G|})` and one ascending scan
/// finds `deg`.
pub fn decomposition(m: &MarkedGroup, budget: usize) -> Result<Decomposition> {
    let dec = Decomposer::new(m);
    let last = m.carrier().order().max(1);
    let (xi, _) = well_founded(wftree::rank_lazy(&dec.tree(last), budget)?)?;
    for l in 1..=last {
        let (r, states) = well_founded(wftree::rank_lazy(&dec.tree(l), budget)?)?;
        if r == xi {
            return Ok(Decomposition { xi, deg: l, states });
        }
    }
    unreachable!("the scan reaches the offset that defined ξ")
}

pub fn decomposition_rank(m: &MarkedGroup, budget: usize) -> Result<Ordinal> {
    Ok(decomposition(m, budget)?.xi)
}

pub fn decomposition_degree(m: &MarkedGroup, budget: usize) -> Result<usize> {
    Ok(decomposition(m, budget)?.deg)
}

/// Searches for an infinite descending chain of iterated reductions, which
/// is exactly an infinite branch of `T^1`.
pub fn ea_chain_check(m: &MarkedGroup, budget: usize) -> Result<RankResult<(Subgroup, usize)>> {
    let dec = Decomposer::new(m);
    Ok(wftree::rank_lazy(&dec.tree(1), budget)?.outcome)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymbolicGroup {
    Integers,
    Cyclic(u64),
}

/// Subgroup ranks known in closed form: `ℤ` has rank `ω+1` and the cyclic
/// group of order `n` has rank `Ω(n)+1`.
pub fn subgroup_rank_symbolic(kind: SymbolicGroup) -> Result<Ordinal> {
    match kind {
        SymbolicGroup::Integers => Ok(Ordinal::omega().succ()),
        SymbolicGroup::Cyclic(0) => Err(Error::InvalidArgument(
            "cyclic order must be at least 1".into(),
        )),
        SymbolicGroup::Cyclic(n) => Ok(Ordinal::nat(prime_factor_count(n) + 1)),
    }
}

/// Prime factors counted with multiplicity.
pub fn prime_factor_count(mut n: u64) -> u64 {
    let mut count = 0;
    let mut p = 2;
    while p * p <= n {
        while n.is_multiple_of(p) {
            n /= p;
            count += 1;
        }
        p += 1;
    }
    count + u64::from(n > 1)
}

/// Which tree to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TreeKind {
    Centralizer,
    Subgroup,
    MaxN,
    Decomposition(usize),
}

macro_rules! with_spec {
    ($m:expr, $kind:expr, |$spec:ident| $body:expr) => {
        match $kind {
            TreeKind::Centralizer => {
                let $spec = CentralizerTree::new($m);
                $body
            }
            TreeKind::Subgroup => {
                let $spec = SubgroupTree::new($m);
                $body
            }
            TreeKind::MaxN => {
                let $spec = MaxNTree::new($m);
                $body
            }
            TreeKind::Decomposition(l) => {
                if l == 0 {
                    return Err(Error::InvalidArgument("offset must be at least 1".into()));
                }
                let dec = Decomposer::new($m);
                let $spec = dec.tree(l);
                $body
            }
        }
    };
}

/// Rank and visited-state count of one tree; ill-founded outcomes carry the
/// described keys of the repeating path.
pub fn tree_rank(m: &MarkedGroup, kind: TreeKind, budget: usize) -> Result<LazyRank<String>> {
    with_spec!(m, kind, |spec| {
        let r = wftree::rank_lazy(&spec, budget)?;
        let outcome = match r.outcome {
            RankResult::WellFounded(o) => RankResult::WellFounded(o),
            RankResult::IllFounded(path) => {
                RankResult::IllFounded(path.iter().map(|k| spec.describe(k)).collect())
            }
        };
        Ok(LazyRank {
            outcome,
            states: r.states,
        })
    })
}

pub fn tree_dag(m: &MarkedGroup, kind: TreeKind, budget: usize) -> Result<Dag> {
    with_spec!(m, kind, |spec| wftree::tree_to_dag(&spec, budget))
}

pub fn tree_explicit(
    m: &MarkedGroup,
    kind: TreeKind,
    index_bound: usize,
    budget: usize,
) -> Result<FiniteTree> {
    with_spec!(m, kind, |spec| wftree::expand_explicit(
        &spec,
        index_bound,
        budget
    ))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Selection {
    pub centralizer: bool,
    pub subgroup: bool,
    pub maxn: bool,
    pub xi: bool,
    pub deg: bool,
}

impl Selection {
    pub fn all() -> Self {
        Selection {
            centralizer: true,
            subgroup: true,
            maxn: true,
            xi: true,
            deg: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupInfo {
    pub order: usize,
    pub degree: usize,
    pub generators: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkingInfo {
    pub length: usize,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantValues {
    pub centralizer_rank: Option<Ordinal>,
    pub subgroup_rank: Option<Ordinal>,
    pub maxn_length: Option<Ordinal>,
    pub xi: Option<Ordinal>,
    pub deg: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateCounts {
    pub centralizer: Option<usize>,
    pub subgroup: Option<usize>,
    pub maxn: Option<usize>,
    pub decomposition: Option<usize>,
}

/// Every requested invariant of one marked group. Unrequested fields are
/// `null`; `elapsed_ms` is filled in by callers that time the run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankReport {
    pub expression: Option<String>,
    pub group: GroupInfo,
    pub marking: MarkingInfo,
    pub invariants: InvariantValues,
    pub state_counts: StateCounts,
    pub elapsed_ms: Option<u64>,
}

pub fn rank_report(m: &MarkedGroup, selection: Selection, budget: usize) -> Result<RankReport> {
    let g = m.group();
    let carrier_gens = m.carrier().generators();
    let generators = if m.carrier().order() == g.order() {
        g.generators().iter().map(ToString::to_string).collect()
    } else {
        carrier_gens
            .iter()
            .map(|&x| g.element(x).to_string())
            .collect()
    };
    let mut invariants = InvariantValues::default();
    let mut counts = StateCounts::default();
    if selection.centralizer {
        let (r, n) = well_founded(wftree::rank_lazy(&CentralizerTree::new(m), budget)?)?;
        invariants.centralizer_rank = Some(r);
        counts.centralizer = Some(n);
    }
    if selection.subgroup {
        let (r, n) = well_founded(wftree::rank_lazy(&SubgroupTree::new(m), budget)?)?;
        invariants.subgroup_rank = Some(r);
        counts.subgroup = Some(n);
    }
    if selection.maxn {
        let (r, n) = well_founded(wftree::rank_lazy(&MaxNTree::new(m), budget)?)?;
        invariants.maxn_length = Some(r);
        counts.maxn = Some(n);
    }
    if selection.xi || selection.deg {
        let d = decomposition(m, budget)?;
        if selection.xi {
            invariants.xi = Some(d.xi);
        }
        if selection.deg {
            invariants.deg = Some(d.deg);
        }
        counts.decomposition = Some(d.states);
    }
    Ok(RankReport {
        expression: None,
        group: GroupInfo {
            order: m.carrier().order(),
            degree: g.degree(),
            generators,
        },
        marking: MarkingInfo {
            length: m.len(),
            seed: m.seed(),
        },
        invariants,
        state_counts: counts,
        elapsed_ms: None,
    })
}
