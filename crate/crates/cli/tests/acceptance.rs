//! Acceptance suite. Runs each criterion in turn, prints one PASS/FAIL line
//! per criterion and exits nonzero if any failed.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use chainrank::catalog;
use chainrank::dsl;
use chainrank::group::{FinGroup, Limits, MarkedGroup, Subgroup};
use chainrank::invariants::{self, Selection, SymbolicGroup, TreeKind};
use chainrank::oracle;
use chainrank::verify::{self, Suite, VerifyOptions};
use chainrank::wftree;
use chainrank::Ordinal;
use common::{chainrank, chainrank_cached, schema, violations};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

const BUDGET: usize = 1_000_000;

type Criterion = fn() -> Result<String, String>;

fn group(expr: &str) -> Arc<FinGroup> {
    dsl::eval(&dsl::parse(expr).unwrap(), Limits::default().max_order).unwrap()
}

fn marked(expr: &str) -> MarkedGroup {
    MarkedGroup::default_marking(group(expr))
}

fn largest_catalog_order() -> usize {
    catalog::catalog()
        .iter()
        .map(|e| e.expected_order)
        .max()
        .unwrap()
}

fn rank_chain_equivalence() -> Result<String, String> {
    let start = Instant::now();
    let limits = Limits::default();
    let entries = catalog::up_to(64);
    for e in &entries {
        let m = marked(&e.expression);
        let g = m.group();
        let report = invariants::rank_report(
            &m,
            Selection {
                centralizer: true,
                subgroup: true,
                maxn: true,
                ..Default::default()
            },
            BUDGET,
        )
        .map_err(|err| format!("{}: {err}", e.name))?;
        let v = report.invariants;
        let pairs = [
            (
                "centralizer",
                v.centralizer_rank,
                oracle::longest_centralizer_chain(g, limits.lattice_oracle),
            ),
            (
                "subgroup",
                v.subgroup_rank,
                oracle::longest_subgroup_chain(g, limits.subgroup_oracle),
            ),
            (
                "maxn",
                v.maxn_length,
                oracle::longest_normal_chain(g, limits.lattice_oracle),
            ),
        ];
        for (what, rank, chain) in pairs {
            let chain = chain.map_err(|err| format!("{} {what}: {err}", e.name))?;
            let expected = Ordinal::nat(chain.length as u64 + 1);
            if rank.as_ref() != Some(&expected) {
                return Err(format!(
                    "{} {what}: rank {rank:?}, chain length {}",
                    e.name, chain.length
                ));
            }
        }
    }
    within(
        start,
        Duration::from_secs(300),
        format!("{} groups", entries.len()),
    )
}

fn explicit_tree_equivalence() -> Result<String, String> {
    let entries = catalog::up_to(24);
    let mut checked = 0;
    for e in &entries {
        let m = marked(&e.expression);
        let n = m.carrier().order();
        let mut kinds = vec![TreeKind::Centralizer, TreeKind::Subgroup, TreeKind::MaxN];
        kinds.extend([1, 2, n].map(TreeKind::Decomposition));
        kinds.dedup();
        for kind in kinds {
            let same = oracle::explicit_rank_crosscheck(&m, kind, 5_000_000)
                .map_err(|err| format!("{} {kind:?}: {err}", e.name))?;
            if !same {
                return Err(format!(
                    "{} {kind:?}: lazy and explicit ranks differ",
                    e.name
                ));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} trees over {} groups", entries.len()))
}

fn marking_invariance() -> Result<String, String> {
    let entries = catalog::catalog();
    for e in &entries {
        let m = marked(&e.expression);
        let base = invariants::rank_report(&m, Selection::all(), BUDGET)
            .map_err(|err| format!("{}: {err}", e.name))?;
        for seed in 0..20 {
            let r = invariants::rank_report(&m.remark(seed), Selection::all(), BUDGET)
                .map_err(|err| format!("{} seed {seed}: {err}", e.name))?;
            if r.invariants != base.invariants {
                return Err(format!(
                    "{} seed {seed}: {:?} vs {:?}",
                    e.name, r.invariants, base.invariants
                ));
            }
        }
    }
    Ok(format!("{} groups x 20 markings", entries.len()))
}

fn lemma_suite() -> Result<String, String> {
    let opts = VerifyOptions {
        max_order: largest_catalog_order(),
        ..VerifyOptions::default()
    };
    let out = verify::run_suite(Suite::Lemmas, &opts);
    if let Some(f) = out.failures.first() {
        return Err(format!(
            "{} failures, first: {} {} expected {} observed {}",
            out.failures.len(),
            f.group,
            f.lemma,
            f.expected,
            f.observed
        ));
    }
    Ok(format!("{} cases", out.cases))
}

/// `[K, K]` intersected with every normal subgroup of `K` of index at most
/// `k + 1`, with normality checked element by element.
fn s_k(g: &FinGroup, subgroups: &[Subgroup], kk: &Subgroup, k: usize) -> Subgroup {
    let elems: Vec<usize> = kk.elements().collect();
    let comms: Vec<usize> = elems
        .iter()
        .flat_map(|&a| elems.iter().map(move |&b| g.commutator(a, b)))
        .collect();
    let mut acc = g.closure(&comms);
    for n in subgroups {
        let normal = n.is_subset(kk)
            && elems
                .iter()
                .all(|&x| n.elements().all(|y| n.contains(g.conj(y, x))));
        if normal && kk.order() / n.order() <= k + 1 {
            acc = g.intersect(&acc, n).unwrap();
        }
    }
    acc
}

/// Rank of the offset-`l` decomposition tree, read off the chain
/// `H_0 = G`, `H_{j+1} = S_{j+l}(H_j)`.
fn decomposition_chain_rank(g: &FinGroup, l: usize) -> u64 {
    let subgroups = g.all_subgroups(Limits::default().subgroup_oracle).unwrap();
    let mut h = g.whole();
    let mut steps = 0;
    while !h.is_trivial() {
        h = s_k(g, &subgroups, &h, steps + l);
        steps += 1;
    }
    steps as u64 + 1
}

fn derived_values() -> Result<String, String> {
    let limits = Limits::default();
    let chain = |r: oracle::ChainResult| Ordinal::nat(r.length as u64 + 1);
    let mut failures = Vec::new();
    let mut shown = Vec::new();
    let mut check = |what: &str, got: Result<Ordinal, chainrank::Error>, want: Ordinal| match got {
        Ok(v) if v == want => shown.push(format!("{what} = {v}")),
        Ok(v) => failures.push(format!("{what}: got {v}, oracle {want}")),
        Err(e) => failures.push(format!("{what}: {e}")),
    };

    let s3 = group("S(3)");
    check(
        "centralizer rank of S(3)",
        invariants::centralizer_rank(&marked("S(3)"), BUDGET),
        chain(oracle::longest_centralizer_chain(&s3, limits.lattice_oracle).unwrap()),
    );
    check(
        "centralizer rank of Q8",
        invariants::centralizer_rank(&marked("Q8"), BUDGET),
        chain(oracle::longest_centralizer_chain(&group("Q8"), limits.lattice_oracle).unwrap()),
    );
    check(
        "subgroup rank of S(4)",
        invariants::subgroup_rank(&marked("S(4)"), BUDGET),
        chain(oracle::longest_subgroup_chain(&group("S(4)"), limits.subgroup_oracle).unwrap()),
    );
    check(
        "length of D(4)",
        invariants::maxn_length(&marked("D(4)"), BUDGET),
        chain(oracle::longest_normal_chain(&group("D(4)"), limits.lattice_oracle).unwrap()),
    );
    check(
        "first decomposition tree of S(3)",
        invariants::decomposition_tree_rank(&marked("S(3)"), 1, BUDGET),
        Ordinal::nat(decomposition_chain_rank(&s3, 1)),
    );
    let xi = Ordinal::nat(decomposition_chain_rank(&s3, s3.order()));
    check(
        "xi of S(3)",
        invariants::decomposition_rank(&marked("S(3)"), BUDGET),
        xi.clone(),
    );
    // Least offset whose chain already has the eventual rank.
    let deg = (1..=s3.order())
        .find(|&l| Ordinal::nat(decomposition_chain_rank(&s3, l)) == xi)
        .unwrap();
    check(
        "deg of S(3)",
        invariants::decomposition_degree(&marked("S(3)"), BUDGET).map(|d| Ordinal::nat(d as u64)),
        Ordinal::nat(deg as u64),
    );

    // Every proper subgroup of Z is nZ, and the chains above it follow the
    // divisors of n, so the node of nZ has the longest divisor chain of n
    // as rank. Those ranks are unbounded; their supremum is w, and the
    // root adds one.
    let divisor_chain = |n: u64| {
        oracle::longest_subgroup_chain(&group(&format!("C({n})")), limits.subgroup_oracle)
            .unwrap()
            .length
    };
    let ranks: Vec<usize> = (0..6).map(|k| divisor_chain(1 << k)).collect();
    if ranks.windows(2).all(|w| w[1] > w[0]) {
        check(
            "subgroup rank of Z",
            invariants::subgroup_rank_symbolic(SymbolicGroup::Integers),
            Ordinal::omega().succ(),
        );
    } else {
        failures.push(format!(
            "divisor chains of 2^k are not unbounded: {ranks:?}"
        ));
    }

    match failures.is_empty() {
        true => Ok(shown.join(", ")),
        false => Err(failures.join("; ")),
    }
}

fn random_tree_lemmas() -> Result<String, String> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for i in 0..1000 {
        let s = wftree::random_tree(&mut rng, 200);
        if s.len() > 200 {
            return Err(format!("tree {i} has {} nodes", s.len()));
        }
        let (t, phi) = wftree::stretch(&s, &mut rng);
        let (rs, rt) = (s.node_ranks(), t.node_ranks());
        if let Some(n) = s.nodes().find(|n| rs[*n] > rt[&phi[*n]]) {
            return Err(format!("tree {i}: node {n:?} outranks its image"));
        }
        if s.rank() > t.rank() {
            return Err(format!("tree {i}: {} > {}", s.rank(), t.rank()));
        }
        let rank = s.rank();
        for k in 1..=s.depth() {
            let level = s
                .nodes()
                .filter(|n| n.len() == k)
                .map(|n| s.subtree(n).rank())
                .max()
                .unwrap_or_default();
            if rank > level.add(&Ordinal::nat(k as u64)) {
                return Err(format!("tree {i}: rank {rank} exceeds level-{k} bound"));
            }
        }
        if s.is_empty() != (rank == Ordinal::zero())
            || (!s.is_empty() && rank.as_nat() != Some(s.depth() as u64 + 1))
        {
            return Err(format!("tree {i}: finite rank {rank} is not depth + 1"));
        }
    }
    within(start, Duration::from_secs(30), "1000 trees".into())
}

fn ordinal() -> impl Strategy<Value = Ordinal> {
    // Sums of w^(w*a + b) * c, which covers limit and successor exponents.
    prop::collection::vec((0..3u64, 0..4u64, 1..4u64), 0..4).prop_map(|terms| {
        terms.into_iter().fold(Ordinal::zero(), |acc, (a, b, c)| {
            let e = Ordinal::omega().mul(&Ordinal::nat(a)).add(&Ordinal::nat(b));
            acc.add(&Ordinal::omega_pow(e).mul(&Ordinal::nat(c)))
        })
    })
}

fn ordinal_algebra() -> Result<String, String> {
    let start = Instant::now();
    let w = Ordinal::omega();
    let one = Ordinal::one();
    if one.add(&w) != w || w == w.add(&one) || w.add(&one) <= w {
        return Err("1 + w = w != w + 1 fails".into());
    }
    let mut runner = TestRunner::new_with_rng(
        Config {
            cases: 512,
            failure_persistence: None,
            ..Config::default()
        },
        proptest::test_runner::TestRng::deterministic_rng(Default::default()),
    );
    let three = (ordinal(), ordinal(), ordinal());
    runner
        .run(&three, |(a, b, c)| {
            prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            if b < c {
                prop_assert!(a.add(&b) < a.add(&c));
                prop_assert!(b.add(&a) <= c.add(&a));
                if !a.is_zero() {
                    prop_assert!(a.mul(&b) < a.mul(&c));
                }
                prop_assert!(b.mul(&a) <= c.mul(&a));
            }
            prop_assert_eq!(w.mul(&a.succ()), w.mul(&a).add(&w));
            prop_assert!(a <= a.add(&b) && b <= a.add(&b));
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    within(start, Duration::from_secs(5), "512 triples".into())
}

fn cli_contract() -> Result<String, String> {
    let matrix: &[(&[&str], i32)] = &[
        (&["rank", "S(3)", "--invariant", "all"], 0),
        (&["rank", "S(3"], 2),
        (&["rank", "no/such/file.txt"], 2),
        (&["rank", "C(n)"], 2),
        (&["rank", "S(8)"], 3),
        (&["rank", "S(4)", "--budget", "3"], 3),
        (&["oracle", "S(5)", "--check", "max"], 3),
        (&["tree", "S(3)", "--invariant", "xi", "--offset", "1"], 0),
        (&["verify", "--suite", "oracle", "--max-order", "8"], 0),
    ];
    for (args, code) in matrix {
        let r = chainrank(args);
        if r.code != *code {
            return Err(format!(
                "{args:?} exited {} (want {code}): {}",
                r.code, r.stderr
            ));
        }
    }

    let outputs = [
        (
            "rank_report",
            vec!["rank", "S(3) * C(2)", "--marking-seed", "4"],
        ),
        ("chain_report", vec!["oracle", "D(4)", "--check", "maxn"]),
        (
            "dag",
            vec!["tree", "A(4)", "--invariant", "cent", "--format", "json"],
        ),
        (
            "verify_outcome",
            vec!["verify", "--suite", "all", "--max-order", "6"],
        ),
    ];
    for (name, args) in &outputs {
        let first = chainrank(args);
        let v = first.json();
        let bad = violations(&schema(name), &v);
        if !bad.is_empty() {
            return Err(format!("{args:?} violates {name}: {}", bad.join("; ")));
        }
        if chainrank(args).stdout != first.stdout {
            return Err(format!("{args:?} output differs between runs"));
        }
    }
    let mut broken = chainrank(&["rank", "C(2)"]).json();
    broken["invariants"]["xi"] = serde_json::json!("two");
    if violations(&schema("rank_report"), &broken).is_empty() {
        return Err("rank schema accepts a malformed ordinal".into());
    }

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let args = ["rank", "D(6)", "--marking-seed", "2"];
    let fresh = chainrank(&args).stdout;
    let stored = chainrank_cached(dir.path(), &args).stdout;
    let hit = chainrank_cached(dir.path(), &args).stdout;
    if fresh != stored || fresh != hit {
        return Err("cached report differs from a fresh one".into());
    }
    Ok(format!(
        "{} exit cases, {} schemas",
        matrix.len(),
        outputs.len()
    ))
}

fn within(start: Instant, limit: Duration, detail: String) -> Result<String, String> {
    let took = start.elapsed();
    if took <= limit {
        Ok(detail)
    } else {
        Err(format!("{detail} took {took:.1?}, limit {limit:?}"))
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 8] = [
        ("rank-chain oracle equivalence", rank_chain_equivalence),
        ("explicit vs deduplicated trees", explicit_tree_equivalence),
        ("marking invariance", marking_invariance),
        ("lemma suite", lemma_suite),
        ("derived values", derived_values),
        ("random tree lemmas", random_tree_lemmas),
        ("ordinal arithmetic", ordinal_algebra),
        ("cli contract", cli_contract),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
