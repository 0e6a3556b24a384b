//! Ranks of well-founded trees.
//!
//! A tree is a set of finite sequences of naturals closed under initial
//! segments. For a node `t`, `ρ_T(t)` is `0` at a leaf and otherwise the
//! supremum of `ρ_T(s) + 1` over proper extensions `s`; the rank of a
//! nonempty well-founded tree is `ρ_T(∅) + 1`, and the empty tree has rank 0.
//!
//! Two presentations are supported. [`FiniteTree`] holds the nodes
//! literally. A [`TreeSpec`] presents a tree lazily through states with
//! canonical keys; children indexed by `i ∈ ℕ` that reach the same state
//! root identical subtrees, so the supremum over indices equals the maximum
//! over distinct child states and [`rank_lazy`] only visits each key once.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::{Debug, Write as _};
use std::hash::Hash;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ordinal::Ordinal;

pub type Node = Vec<u32>;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FiniteTree {
    nodes: BTreeSet<Node>,
}

impl FiniteTree {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Fails unless the node set is closed under initial segments.
    pub fn new(nodes: impl IntoIterator<Item = Node>) -> Result<Self> {
        let nodes: BTreeSet<Node> = nodes.into_iter().collect();
        for n in &nodes {
            if let Some((_, parent)) = n.split_last() {
                if !nodes.contains(parent) {
                    return Err(Error::InvalidArgument(format!(
                        "node {n:?} present without its parent"
                    )));
                }
            }
        }
        Ok(FiniteTree { nodes })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, node: &[u32]) -> bool {
        self.nodes.contains(node)
    }

    pub fn nodes(&self) -> impl Iterator<Item = &Node> {
        self.nodes.iter()
    }

    pub fn depth(&self) -> usize {
        self.nodes.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// `T_s = {r : s⌢r ∈ T}`.
    pub fn subtree(&self, s: &[u32]) -> FiniteTree {
        let nodes = self
            .nodes
            .range(s.to_vec()..)
            .take_while(|n| n.starts_with(s))
            .map(|n| n[s.len()..].to_vec())
            .collect();
        FiniteTree { nodes }
    }

    /// `ρ_T(t)` for every node.
    pub fn node_ranks(&self) -> BTreeMap<Node, u64> {
        let mut ranks: BTreeMap<Node, u64> = BTreeMap::new();
        // Reverse lexicographic order visits every extension before its prefix.
        for n in self.nodes.iter().rev() {
            let r = ranks.get(n).copied().unwrap_or(0);
            ranks.insert(n.clone(), r);
            if let Some((_, parent)) = n.split_last() {
                let p = ranks.entry(parent.to_vec()).or_insert(0);
                *p = (*p).max(r + 1);
            }
        }
        ranks
    }

    pub fn rank(&self) -> Ordinal {
        if self.nodes.is_empty() {
            return Ordinal::zero();
        }
        Ordinal::nat(self.node_ranks()[&Vec::new()] + 1)
    }

    /// Applies `f` to every sibling index; `f` must be injective per parent
    /// for the result to be isomorphic.
    pub fn relabel(&self, mut f: impl FnMut(&[u32], u32) -> u32) -> FiniteTree {
        let nodes = self
            .nodes
            .iter()
            .map(|n| (0..n.len()).map(|i| f(&n[..i], n[i])).collect())
            .collect();
        FiniteTree { nodes }
    }
}

/// A random tree with at most `max_nodes` nodes, grown by attaching each new
/// node under a uniformly chosen existing one.
pub fn random_tree<R: Rng>(rng: &mut R, max_nodes: usize) -> FiniteTree {
    let target = rng.gen_range(1..=max_nodes.max(1));
    let mut nodes: Vec<Node> = vec![vec![]];
    let mut next_label: HashMap<Node, u32> = HashMap::new();
    while nodes.len() < target {
        let parent = nodes[rng.gen_range(0..nodes.len())].clone();
        let label = next_label.entry(parent.clone()).or_insert(0);
        *label += rng.gen_range(1..4);
        let mut child = parent;
        child.push(*label);
        nodes.push(child);
    }
    FiniteTree::new(nodes).expect("grown from the root")
}

/// A random tree `T` with a monotone injection `φ: S → T`: every edge of
/// `S` becomes a path of random length, and unrelated branches are added.
pub fn stretch<R: Rng>(s: &FiniteTree, rng: &mut R) -> (FiniteTree, BTreeMap<Node, Node>) {
    let mut phi: BTreeMap<Node, Node> = BTreeMap::new();
    let mut nodes: BTreeSet<Node> = BTreeSet::new();
    for n in s.nodes() {
        let image = match n.split_last() {
            None => vec![],
            Some((&last, parent)) => {
                let mut img = phi[parent].clone();
                img.push(2 * last);
                for _ in 0..rng.gen_range(0..3) {
                    img.push(rng.gen_range(0..2));
                }
                img
            }
        };
        for i in 0..=image.len() {
            nodes.insert(image[..i].to_vec());
        }
        phi.insert(n.clone(), image);
    }
    let images: Vec<Node> = nodes.iter().cloned().collect();
    for img in images {
        if rng.gen_bool(0.2) {
            let mut extra = img;
            extra.push(2 * rng.gen_range(0..4) + 1);
            nodes.insert(extra);
        }
    }
    (
        FiniteTree::new(nodes).expect("images are prefix-closed"),
        phi,
    )
}

/// A lazily presented tree over canonical states.
///
/// Children must depend only on the key of a state.
pub trait TreeSpec {
    type State: Clone;
    type Key: Clone + Eq + Hash + Ord + Debug;

    fn root(&self) -> Self::State;

    fn key(&self, state: &Self::State) -> Self::Key;

    /// Children by index `0, 1, …`; `None` where the index adds no node.
    fn indexed_children(&self, state: &Self::State) -> Vec<Option<Self::State>>;

    /// Distinct children in order of first appearance.
    fn children(&self, state: &Self::State) -> Vec<Self::State> {
        let mut seen = BTreeSet::new();
        self.indexed_children(state)
            .into_iter()
            .flatten()
            .filter(|c| seen.insert(self.key(c)))
            .collect()
    }

    /// Human-readable label of a state key.
    fn describe(&self, key: &Self::Key) -> String {
        format!("{key:?}")
    }
}

/// The subtree of a spec below one of its states.
pub struct Rooted<'a, T: TreeSpec> {
    pub spec: &'a T,
    pub root: T::State,
}

impl<T: TreeSpec> TreeSpec for Rooted<'_, T> {
    type State = T::State;
    type Key = T::Key;

    fn root(&self) -> T::State {
        self.root.clone()
    }

    fn key(&self, state: &T::State) -> T::Key {
        self.spec.key(state)
    }

    fn indexed_children(&self, state: &T::State) -> Vec<Option<T::State>> {
        self.spec.indexed_children(state)
    }

    fn describe(&self, key: &T::Key) -> String {
        self.spec.describe(key)
    }
}

/// Every distinct state reachable from the root, in depth-first order.
/// Fails past `budget` states; the spec may be ill-founded.
pub fn reachable_states<T: TreeSpec>(spec: &T, budget: usize) -> Result<Vec<T::State>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut stack = vec![spec.root()];
    while let Some(s) = stack.pop() {
        if !seen.insert(spec.key(&s)) {
            continue;
        }
        if out.len() >= budget {
            return Err(Error::ResourceLimit { budget });
        }
        let mut kids = spec.children(&s);
        kids.reverse();
        stack.extend(kids);
        out.push(s);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RankResult<K> {
    WellFounded(Ordinal),
    /// A path of state keys whose first and last entries coincide.
    IllFounded(Vec<K>),
}

impl<K> RankResult<K> {
    pub fn ordinal(&self) -> Option<&Ordinal> {
        match self {
            RankResult::WellFounded(o) => Some(o),
            RankResult::IllFounded(_) => None,
        }
    }

    pub fn is_well_founded(&self) -> bool {
        matches!(self, RankResult::WellFounded(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LazyRank<K> {
    pub outcome: RankResult<K>,
    /// Distinct states visited.
    pub states: usize,
}

struct Explored<K> {
    root: K,
    ranks: HashMap<K, u64>,
    preorder: Vec<K>,
    edges: Vec<(K, K)>,
    cycle: Option<Vec<K>>,
}

struct Frame<S, K> {
    key: K,
    children: Vec<S>,
    next: usize,
    best: u64,
}

fn explore<T: TreeSpec>(spec: &T, budget: usize, record_edges: bool) -> Result<Explored<T::Key>> {
    let root = spec.root();
    let root_key = spec.key(&root);
    let mut ranks: HashMap<T::Key, u64> = HashMap::new();
    let mut on_path: HashMap<T::Key, usize> = HashMap::new();
    let mut preorder = vec![root_key.clone()];
    let mut edges = Vec::new();
    on_path.insert(root_key.clone(), 0);
    let mut stack = vec![Frame {
        key: root_key.clone(),
        children: spec.children(&root),
        next: 0,
        best: 0,
    }];
    while let Some(top) = stack.last_mut() {
        if top.next < top.children.len() {
            let child = top.children[top.next].clone();
            top.next += 1;
            let ck = spec.key(&child);
            if record_edges {
                edges.push((top.key.clone(), ck.clone()));
            }
            if let Some(&r) = ranks.get(&ck) {
                top.best = top.best.max(r + 1);
                continue;
            }
            if let Some(&pos) = on_path.get(&ck) {
                let mut cycle: Vec<T::Key> = stack[pos..].iter().map(|f| f.key.clone()).collect();
                cycle.push(ck);
                return Ok(Explored {
                    root: root_key,
                    ranks,
                    preorder,
                    edges,
                    cycle: Some(cycle),
                });
            }
            if preorder.len() >= budget {
                return Err(Error::ResourceLimit { budget });
            }
            preorder.push(ck.clone());
            on_path.insert(ck.clone(), stack.len());
            let children = spec.children(&child);
            stack.push(Frame {
                key: ck,
                children,
                next: 0,
                best: 0,
            });
        } else {
            let done = stack.pop().expect("nonempty stack");
            on_path.remove(&done.key);
            if let Some(parent) = stack.last_mut() {
                parent.best = parent.best.max(done.best + 1);
            }
            ranks.insert(done.key, done.best);
        }
    }
    Ok(Explored {
        root: root_key,
        ranks,
        preorder,
        edges,
        cycle: None,
    })
}

/// Rank of a lazily presented tree, memoized on state keys. A key that
/// recurs on the active path proves an infinite branch.
pub fn rank_lazy<T: TreeSpec>(spec: &T, budget: usize) -> Result<LazyRank<T::Key>> {
    let ex = explore(spec, budget, false)?;
    let states = ex.preorder.len();
    let outcome = match ex.cycle {
        Some(cycle) => RankResult::IllFounded(cycle),
        None => RankResult::WellFounded(Ordinal::nat(ex.ranks[&ex.root] + 1)),
    };
    Ok(LazyRank { outcome, states })
}

/// Materialises the literal index-labelled tree, indices `0..index_bound`
/// at every node, duplicates included.
pub fn expand_explicit<T: TreeSpec>(
    spec: &T,
    index_bound: usize,
    budget: usize,
) -> Result<FiniteTree> {
    let mut cache: HashMap<T::Key, Vec<Option<T::State>>> = HashMap::new();
    let mut nodes: BTreeSet<Node> = BTreeSet::new();
    let mut stack: Vec<(Node, T::State)> = vec![(Vec::new(), spec.root())];
    while let Some((node, state)) = stack.pop() {
        if nodes.len() >= budget {
            return Err(Error::ResourceLimit { budget });
        }
        let key = spec.key(&state);
        let kids = cache
            .entry(key)
            .or_insert_with(|| spec.indexed_children(&state));
        for (i, child) in kids.iter().enumerate().take(index_bound) {
            if let Some(child) = child {
                let mut n = node.clone();
                n.push(i as u32);
                stack.push((n, child.clone()));
            }
        }
        nodes.insert(node);
    }
    Ok(FiniteTree { nodes })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DagNode {
    pub key: String,
    pub rank: Ordinal,
}

/// The deduplicated state graph of a well-founded spec. Nodes are listed in
/// depth-first discovery order; edges refer to node positions; `rank` is
/// `ρ_T` of the node.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dag {
    pub nodes: Vec<DagNode>,
    pub edges: Vec<[usize; 2]>,
}

pub fn tree_to_dag<T: TreeSpec>(spec: &T, budget: usize) -> Result<Dag> {
    let ex = explore(spec, budget, true)?;
    if let Some(cycle) = ex.cycle {
        return Err(Error::InvalidArgument(format!(
            "tree is ill-founded; a state repeats along the path {:?}",
            cycle.iter().map(|k| spec.describe(k)).collect::<Vec<_>>()
        )));
    }
    let position: HashMap<&T::Key, usize> = ex
        .preorder
        .iter()
        .enumerate()
        .map(|(i, k)| (k, i))
        .collect();
    let nodes = ex
        .preorder
        .iter()
        .map(|k| DagNode {
            key: spec.describe(k),
            rank: Ordinal::nat(ex.ranks[k]),
        })
        .collect();
    let edges = ex
        .edges
        .iter()
        .map(|(a, b)| [position[a], position[b]])
        .collect();
    Ok(Dag { nodes, edges })
}

impl Dag {
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph tree {\n");
        for (i, n) in self.nodes.iter().enumerate() {
            let _ = writeln!(
                out,
                "  n{i} [label=\"{}\\nrank {}\"];",
                n.key.replace('"', "\\\""),
                n.rank
            );
        }
        for [a, b] in &self.edges {
            let _ = writeln!(out, "  n{a} -> n{b};");
        }
        out.push_str("}\n");
        out
    }
}

impl FiniteTree {
    /// The tree as a dag: one node per sequence, keyed by its dotted path.
    pub fn to_dag(&self) -> Dag {
        let ranks = self.node_ranks();
        let position: HashMap<&Node, usize> =
            self.nodes.iter().enumerate().map(|(i, n)| (n, i)).collect();
        let nodes = self
            .nodes
            .iter()
            .map(|n| DagNode {
                key: format!(
                    "({})",
                    n.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
                ),
                rank: Ordinal::nat(ranks[n]),
            })
            .collect();
        let edges = self
            .nodes
            .iter()
            .filter_map(|n| {
                n.split_last()
                    .map(|(_, p)| [position[&p.to_vec()], position[n]])
            })
            .collect();
        Dag { nodes, edges }
    }
}
