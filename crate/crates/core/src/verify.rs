//! Property suites over the catalog.
//!
//! A suite expands into independent [`Task`]s so callers can run them in
//! parallel; results are merged back in task order.

use std::fmt::Display;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::catalog::{self, CatalogEntry};
use crate::dsl::{self, GroupExpr};
use crate::error::Result;
use crate::group::{FinGroup, Limits, MarkedGroup};
use crate::invariants::{self, Decomposer, TreeKind};
use crate::oracle;
use crate::ordinal::Ordinal;
use crate::wftree::{self, Rooted};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Lemmas,
    Oracle,
    Marking,
}

impl Suite {
    pub const ALL: [Suite; 3] = [Suite::Lemmas, Suite::Oracle, Suite::Marking];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lemmas => "lemmas",
            Suite::Oracle => "oracle",
            Suite::Marking => "marking",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub max_order: usize,
    pub seed: u64,
    pub limits: Limits,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            max_order: 64,
            seed: 0,
            limits: Limits::default(),
        }
    }
}

/// Largest group whose whole subgroup lattice the monotonicity and
/// quotient checks walk.
pub const LATTICE_CHECK_ORDER: usize = 48;
/// Largest group whose literal index trees are expanded.
pub const EXPLICIT_TREE_ORDER: usize = 24;
/// Largest order of a wreath product in the superadditivity check.
pub const WREATH_ORDER: usize = 256;
pub const REMARKINGS: u64 = 20;
pub const RANDOM_TREES: usize = 1000;
pub const RANDOM_TREE_NODES: usize = 200;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub group: String,
    pub lemma: String,
    pub expected: String,
    pub observed: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskResult {
    pub cases: usize,
    pub failures: Vec<Failure>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOutcome {
    pub suite: String,
    pub cases: usize,
    pub failures: Vec<Failure>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Task {
    Entry(Suite, CatalogEntry),
    /// Centralizer-rank and length strictness for `A × B`.
    Product(String, String),
    /// Length superadditivity for `H wr K`.
    Wreath(String, String),
    /// Rank inequalities on seeded random trees.
    RandomTrees {
        seed: u64,
        count: usize,
    },
}

impl Task {
    pub fn label(&self) -> String {
        match self {
            Task::Entry(s, e) => format!("{} {}", s.name(), e.name),
            Task::Product(a, b) => format!("lemmas {a} * {b}"),
            Task::Wreath(h, k) => format!("lemmas {h} wr {k}"),
            Task::RandomTrees { seed, count } => {
                format!("lemmas {count} random trees (seed {seed})")
            }
        }
    }
}

fn parse(expr: &str) -> GroupExpr {
    dsl::parse(expr).expect("catalog expressions parse")
}

pub fn tasks(suite: Suite, opts: &VerifyOptions) -> Vec<Task> {
    let entries = catalog::up_to(opts.max_order);
    let mut out: Vec<Task> = entries
        .iter()
        .map(|e| Task::Entry(suite, e.clone()))
        .collect();
    if suite == Suite::Lemmas {
        let small = catalog::up_to(12.min(opts.max_order));
        for a in ["S(3)", "D(4)", "Q8"] {
            for b in &small {
                out.push(Task::Product(a.to_string(), b.expression.clone()));
            }
        }
        // With a trivial factor the product is just the other factor, so
        // the sum bound cannot hold; only nontrivial pairs are checked.
        let pool: Vec<CatalogEntry> = catalog::up_to(8.min(opts.max_order))
            .into_iter()
            .filter(|e| e.expected_order > 1)
            .collect();
        for h in &pool {
            for k in &pool {
                let top =
                    dsl::eval(&parse(&k.expression), opts.limits.max_order).expect("catalog group");
                let order = (h.expected_order as u128)
                    .checked_pow(top.degree() as u32)
                    .map(|p| p * k.expected_order as u128);
                if order.is_some_and(|o| o <= WREATH_ORDER as u128) {
                    out.push(Task::Wreath(h.expression.clone(), k.expression.clone()));
                }
            }
        }
        out.push(Task::RandomTrees {
            seed: opts.seed,
            count: RANDOM_TREES,
        });
    }
    out
}

struct Recorder {
    group: String,
    result: TaskResult,
}

impl Recorder {
    fn new(group: impl Into<String>) -> Self {
        Recorder {
            group: group.into(),
            result: TaskResult::default(),
        }
    }

    fn check(&mut self, lemma: &str, ok: bool, expected: impl Display, observed: impl Display) {
        self.result.cases += 1;
        if !ok {
            self.result.failures.push(Failure {
                group: self.group.clone(),
                lemma: lemma.to_string(),
                expected: expected.to_string(),
                observed: observed.to_string(),
            });
        }
    }

    fn error(&mut self, lemma: &str, e: crate::error::Error) {
        self.check(lemma, false, "a computed value", format!("error: {e}"));
    }
}

pub fn run_task(task: &Task, opts: &VerifyOptions) -> TaskResult {
    match task {
        Task::Entry(suite, entry) => {
            let mut rec = Recorder::new(&entry.name);
            let expr = parse(&entry.expression);
            match dsl::eval(&expr, opts.limits.max_order) {
                Ok(g) => {
                    let outcome = match suite {
                        Suite::Lemmas => lemma_checks(&mut rec, &expr, g, opts),
                        Suite::Oracle => oracle_checks(&mut rec, g, opts),
                        Suite::Marking => marking_checks(&mut rec, g, opts),
                    };
                    if let Err(e) = outcome {
                        rec.error(suite.name(), e);
                    }
                }
                Err(e) => rec.error("evaluation", e),
            }
            rec.result
        }
        Task::Product(a, b) => {
            let expr = GroupExpr::Product(Box::new(parse(a)), Box::new(parse(b)));
            let mut rec = Recorder::new(expr.to_string());
            if let Err(e) = product_checks(&mut rec, a, b, opts) {
                rec.error("product-strictness", e);
            }
            rec.result
        }
        Task::Wreath(h, k) => {
            let expr = GroupExpr::Wreath(Box::new(parse(h)), Box::new(parse(k)));
            let mut rec = Recorder::new(expr.to_string());
            if let Err(e) = wreath_checks(&mut rec, h, k, &expr, opts) {
                rec.error("wreath-superadditivity", e);
            }
            rec.result
        }
        Task::RandomTrees { seed, count } => {
            let mut rec = Recorder::new("random trees");
            random_tree_checks(&mut rec, *seed, *count);
            rec.result
        }
    }
}

/// Runs every task of a suite in order.
pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> VerifyOutcome {
    let results: Vec<TaskResult> = tasks(suite, opts)
        .iter()
        .map(|t| run_task(t, opts))
        .collect();
    merge(suite, results)
}

pub fn merge(suite: Suite, results: impl IntoIterator<Item = TaskResult>) -> VerifyOutcome {
    let mut out = VerifyOutcome {
        suite: suite.name().to_string(),
        cases: 0,
        failures: Vec::new(),
    };
    for r in results {
        out.cases += r.cases;
        out.failures.extend(r.failures);
    }
    out
}

fn marked(g: Arc<FinGroup>) -> MarkedGroup {
    MarkedGroup::default_marking(g)
}

fn lemma_checks(
    rec: &mut Recorder,
    expr: &GroupExpr,
    g: Arc<FinGroup>,
    opts: &VerifyOptions,
) -> Result<()> {
    let budget = opts.limits.node_budget;
    let m = marked(g.clone());
    let order = g.order();

    let profile = invariants::decomposition_profile(&m, order, budget)?;
    let two = Ordinal::nat(2);
    rec.check(
        "full-offset-bound",
        profile[order - 1] <= two,
        "<= 2",
        &profile[order - 1],
    );
    let non_increasing = profile.windows(2).all(|w| w[1] <= w[0]);
    let shown: Vec<String> = profile.iter().map(ToString::to_string).collect();
    rec.check(
        "offset-monotonicity",
        non_increasing,
        "non-increasing in the offset",
        shown.join(","),
    );
    rec.check(
        "finite-first-tree",
        profile[0].is_finite(),
        "a natural number",
        &profile[0],
    );

    let xi = invariants::decomposition_rank(&m, budget)?;
    let rk = dsl::rk_bound(expr);
    let exact = rk.exact.clone().unwrap_or(rk.bound.clone());
    let three_xi = Ordinal::nat(3).mul(&xi);
    rec.check(
        "construction-rank-bound",
        exact <= three_xi,
        format!("<= {three_xi}"),
        &exact,
    );
    let xi_bound = dsl::xi_bound(expr);
    rec.check("xi-bound", xi <= xi_bound, format!("<= {xi_bound}"), &xi);
    rec.check(
        "xi-at-most-first-tree",
        xi <= profile[0],
        format!("<= {}", profile[0]),
        &xi,
    );

    subtree_offset_checks(rec, &m, budget)?;

    if order <= LATTICE_CHECK_ORDER.min(opts.limits.subgroup_oracle) {
        let cent = invariants::centralizer_rank(&m, budget)?;
        let sub = invariants::subgroup_rank(&m, budget)?;
        for h in g.all_subgroups(opts.limits.subgroup_oracle)? {
            let mh = m.induced_subgroup_marking(&h)?;
            let (ch, sh) = (
                invariants::centralizer_rank(&mh, budget)?,
                invariants::subgroup_rank(&mh, budget)?,
            );
            let xh = invariants::decomposition_rank(&mh, budget)?;
            let at = format!("order-{} subgroup", h.order());
            rec.check(
                "subgroup-monotonicity-centralizer",
                ch <= cent,
                format!("<= {cent}"),
                format!("{ch} ({at})"),
            );
            rec.check(
                "subgroup-monotonicity-subgroup",
                sh <= sub,
                format!("<= {sub}"),
                format!("{sh} ({at})"),
            );
            rec.check(
                "subgroup-monotonicity-xi",
                xh <= xi,
                format!("<= {xi}"),
                format!("{xh} ({at})"),
            );
        }
        let len = invariants::maxn_length(&m, budget)?;
        for n in g.normal_subgroups() {
            if n.order() == order {
                continue;
            }
            let (qm, _) = m.induced_quotient_marking(&n)?;
            let q = invariants::maxn_length(&qm, budget)?;
            let at = format!("quotient by order-{} normal subgroup", n.order());
            if n.is_trivial() {
                rec.check(
                    "quotient-length",
                    q == len,
                    format!("= {len}"),
                    format!("{q} ({at})"),
                );
            } else {
                rec.check(
                    "quotient-length",
                    q < len,
                    format!("< {len}"),
                    format!("{q} ({at})"),
                );
            }
        }
    }
    Ok(())
}

/// Compares the rank below each state `(H, d)` of `T^l` with the rank of
/// `T^{d+l}` built afresh on `H` with its induced marking.
fn subtree_offset_checks(rec: &mut Recorder, m: &MarkedGroup, budget: usize) -> Result<()> {
    const SAMPLE: usize = 24;
    let dec = Decomposer::new(m);
    for l in [1, 2] {
        let tree = dec.tree(l);
        let states = wftree::reachable_states(&tree, budget)?;
        let step = states.len().div_ceil(SAMPLE).max(1);
        for state in states.iter().step_by(step) {
            let below = wftree::rank_lazy(
                &Rooted {
                    spec: &tree,
                    root: state.clone(),
                },
                budget,
            )?;
            let fresh = Decomposer::new(&m.induced_subgroup_marking(&state.0)?);
            let direct = wftree::rank_lazy(&fresh.tree(state.1 + l), budget)?;
            let (a, b) = (
                below.outcome.ordinal().cloned(),
                direct.outcome.ordinal().cloned(),
            );
            rec.check(
                "subtree-offset-identity",
                a.is_some() && a == b,
                format!("{b:?}"),
                format!(
                    "{a:?} (order-{} state at depth {}, offset {l})",
                    state.0.order(),
                    state.1
                ),
            );
        }
    }
    Ok(())
}

fn oracle_checks(rec: &mut Recorder, g: Arc<FinGroup>, opts: &VerifyOptions) -> Result<()> {
    let budget = opts.limits.node_budget;
    let m = marked(g.clone());
    if g.order() <= opts.limits.lattice_oracle {
        let chain = oracle::longest_centralizer_chain(&g, opts.limits.lattice_oracle)?;
        let rank = invariants::centralizer_rank(&m, budget)?;
        let want = Ordinal::nat(chain.length as u64 + 1);
        rec.check("rank-chain-centralizer", rank == want, &want, &rank);
        let chain = oracle::longest_normal_chain(&g, opts.limits.lattice_oracle)?;
        let rank = invariants::maxn_length(&m, budget)?;
        let want = Ordinal::nat(chain.length as u64 + 1);
        rec.check("rank-chain-normal", rank == want, &want, &rank);
    }
    if g.order() <= opts.limits.subgroup_oracle {
        let chain = oracle::longest_subgroup_chain(&g, opts.limits.subgroup_oracle)?;
        let rank = invariants::subgroup_rank(&m, budget)?;
        let want = Ordinal::nat(chain.length as u64 + 1);
        rec.check("rank-chain-subgroup", rank == want, &want, &rank);
    }
    if g.order() <= EXPLICIT_TREE_ORDER {
        let explicit_budget = budget.max(5_000_000);
        for kind in [
            TreeKind::Centralizer,
            TreeKind::Subgroup,
            TreeKind::MaxN,
            TreeKind::Decomposition(1),
        ] {
            let lazy = invariants::tree_rank(&m, kind, budget)?.outcome;
            let explicit = invariants::tree_explicit(&m, kind, m.len(), explicit_budget)?.rank();
            let lazy = lazy.ordinal().cloned();
            rec.check(
                &format!("explicit-tree-{kind:?}").to_lowercase(),
                lazy.as_ref() == Some(&explicit),
                &explicit,
                format!("{lazy:?}"),
            );
        }
    }
    Ok(())
}

#[derive(PartialEq, Eq)]
struct Values {
    cent: Ordinal,
    sub: Ordinal,
    maxn: Ordinal,
    xi: Ordinal,
    deg: usize,
}

impl Display for Values {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "cent {} max {} maxn {} xi {} deg {}",
            self.cent, self.sub, self.maxn, self.xi, self.deg
        )
    }
}

fn values(m: &MarkedGroup, budget: usize) -> Result<Values> {
    let d = invariants::decomposition(m, budget)?;
    Ok(Values {
        cent: invariants::centralizer_rank(m, budget)?,
        sub: invariants::subgroup_rank(m, budget)?,
        maxn: invariants::maxn_length(m, budget)?,
        xi: d.xi,
        deg: d.deg,
    })
}

fn marking_checks(rec: &mut Recorder, g: Arc<FinGroup>, opts: &VerifyOptions) -> Result<()> {
    let budget = opts.limits.node_budget;
    let m = marked(g);
    let base = values(&m, budget)?;
    for i in 0..REMARKINGS {
        let seed = opts.seed.wrapping_mul(REMARKINGS).wrapping_add(i);
        let other = values(&m.remark(seed), budget)?;
        rec.check(
            "marking-invariance",
            other == base,
            &base,
            format!("{other} (seed {seed})"),
        );
    }
    Ok(())
}

fn product_checks(rec: &mut Recorder, a: &str, b: &str, opts: &VerifyOptions) -> Result<()> {
    let (limit, budget) = (opts.limits.max_order, opts.limits.node_budget);
    let ga = dsl::eval(&parse(a), limit)?;
    let gb = dsl::eval(&parse(b), limit)?;
    let gab = dsl::eval(
        &GroupExpr::Product(Box::new(parse(a)), Box::new(parse(b))),
        limit,
    )?;
    let (ma, mb, mab) = (marked(ga), marked(gb.clone()), marked(gab));
    let (cb, cab) = (
        invariants::centralizer_rank(&mb, budget)?,
        invariants::centralizer_rank(&mab, budget)?,
    );
    rec.check(
        "product-strictness-centralizer",
        cb < cab,
        format!("> {cb}"),
        &cab,
    );
    let (la, lb) = (
        invariants::maxn_length(&ma, budget)?,
        invariants::maxn_length(&mb, budget)?,
    );
    let lab = invariants::maxn_length(&mab, budget)?;
    rec.check("product-length", lb < lab, format!("> {lb}"), &lab);
    if gb.order() > 1 {
        rec.check("product-length", la < lab, format!("> {la}"), &lab);
    }
    Ok(())
}

fn wreath_checks(
    rec: &mut Recorder,
    h: &str,
    k: &str,
    expr: &GroupExpr,
    opts: &VerifyOptions,
) -> Result<()> {
    let budget = opts.limits.node_budget;
    let limit = opts.limits.max_order.max(WREATH_ORDER);
    let lh = invariants::maxn_length(&marked(dsl::eval(&parse(h), limit)?), budget)?;
    let lk = invariants::maxn_length(&marked(dsl::eval(&parse(k), limit)?), budget)?;
    let lw = invariants::maxn_length(&marked(dsl::eval(expr, limit)?), budget)?;
    let sum = lk.add(&lh);
    rec.check(
        "wreath-superadditivity",
        lw >= sum,
        format!(">= {sum}"),
        &lw,
    );
    Ok(())
}

fn random_tree_checks(rec: &mut Recorder, seed: u64, count: usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..count {
        let s = wftree::random_tree(&mut rng, RANDOM_TREE_NODES);
        let (t, phi) = wftree::stretch(&s, &mut rng);
        let (rs, rt) = (s.node_ranks(), t.node_ranks());
        let worst = s.nodes().find(|n| rs[*n] > rt[&phi[*n]]);
        rec.check(
            "monotone-map",
            worst.is_none() && s.rank() <= t.rank(),
            "rank of S at most rank of T at every node",
            format!("tree {i}: {worst:?}"),
        );
        let rank = s.rank();
        for k in 1..=s.depth() {
            let level = s
                .nodes()
                .filter(|n| n.len() == k)
                .map(|n| s.subtree(n).rank())
                .max()
                .unwrap_or_default();
            let bound = level.add(&Ordinal::nat(k as u64));
            rec.check(
                "depth-bound",
                rank <= bound,
                format!("<= {bound}"),
                format!("{rank} (tree {i}, level {k})"),
            );
        }
    }
}
