mod common;

use common::{chainrank, chainrank_cached, schema, violations};

#[test]
fn rank_reports_all_invariants() {
    let r = chainrank(&["rank", "S(3)", "--invariant", "all"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = r.json();
    let inv = &v["invariants"];
    assert_eq!(inv["centralizer_rank"], "3");
    assert_eq!(inv["subgroup_rank"], "3");
    assert_eq!(inv["maxn_length"], "3");
    assert_eq!(inv["xi"], "2");
    assert_eq!(inv["deg"], 5);
    assert!(violations(&schema("rank_report"), &v).is_empty());
}

#[test]
fn rank_single_invariant_leaves_others_null() {
    let v = chainrank(&["rank", "C(5)", "--invariant", "maxn"]).json();
    assert_eq!(v["invariants"]["maxn_length"], "2");
    assert!(v["invariants"]["centralizer_rank"].is_null());
    assert!(v["state_counts"]["decomposition"].is_null());
}

#[test]
fn rank_reads_generator_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gens.txt");
    std::fs::write(&path, "degree 4\n(0 1 2 3)\n").unwrap();
    let r = chainrank(&["rank", path.to_str().unwrap(), "--invariant", "cent"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = r.json();
    assert_eq!(v["group"]["order"], 4);
    assert_eq!(v["invariants"]["centralizer_rank"], "1");
    assert!(v["expression"].is_null());
}

#[test]
fn table_output() {
    let r = chainrank(&["rank", "Q8", "--invariant", "cent", "--format", "table"]);
    assert_eq!(r.code, 0);
    assert!(
        r.stdout
            .lines()
            .any(|l| l.split_whitespace().eq(["centralizer_rank", "3"])),
        "{}",
        r.stdout
    );
}

#[test]
fn timings_are_opt_in() {
    assert!(chainrank(&["rank", "C(3)"]).json()["elapsed_ms"].is_null());
    assert!(chainrank(&["rank", "C(3)", "--timings"]).json()["elapsed_ms"].is_u64());
}

#[test]
fn marking_seed_is_echoed_and_ranks_unchanged() {
    let a = chainrank(&["rank", "D(4)"]).json();
    let b = chainrank(&["rank", "D(4)", "--marking-seed", "9"]).json();
    assert_eq!(b["marking"]["seed"], 9);
    assert_eq!(a["invariants"], b["invariants"]);
}

#[test]
fn exit_codes() {
    let cases: &[(&[&str], i32)] = &[
        (&["rank", "C(4)"], 0),
        (&["rank", "C(4"], 2),
        (&["rank", "C(m)"], 2),
        (&["rank", "E(4, 2)"], 2),
        (&["rank", "quotient(S(3); g5)"], 2),
        (&["rank", "missing/gens.txt"], 2),
        (&["rank", "C(4)", "--invariant", "bogus"], 2),
        (&["rank", "S(8)"], 3),
        (&["rank", "S(4)", "--max-order", "12"], 3),
        (&["rank", "S(4)", "--budget", "2"], 3),
        (&["tree", "S(4)", "--invariant", "max", "--budget", "2"], 3),
        (&["tree", "C(4)", "--invariant", "xi", "--offset", "0"], 2),
        (&["tree", "C(4)", "--invariant", "cent", "--offset", "1"], 2),
        (&["oracle", "S(5)", "--check", "max"], 3),
        (&["oracle", "C(7)", "--check", "max"], 0),
        (&["verify", "--suite", "oracle", "--max-order", "6"], 0),
        (&["cache", "path"], 2),
    ];
    for (args, code) in cases {
        let r = chainrank(args);
        assert_eq!(r.code, *code, "{args:?}: {}", r.stderr);
        if *code >= 2 {
            assert!(r.stdout.is_empty(), "{args:?} wrote to stdout");
        }
    }
}

#[test]
fn tree_outputs() {
    let v = chainrank(&["tree", "C(4)", "--invariant", "max", "--format", "json"]).json();
    assert!(violations(&schema("dag"), &v).is_empty());
    assert_eq!(v["nodes"].as_array().unwrap().len(), 3);
    assert_eq!(v["nodes"][0]["rank"], "2");

    let dot = chainrank(&["tree", "S(3)", "--invariant", "xi", "--offset", "1"]).stdout;
    assert!(dot.starts_with("digraph tree {"));
    assert!(dot.contains("order 3 <(0 2 1)>"), "{dot}");

    let single = chainrank(&["tree", "C(2)", "--invariant", "cent", "--format", "json"]).json();
    assert_eq!(single["nodes"].as_array().unwrap().len(), 1);
    assert!(single["edges"].as_array().unwrap().is_empty());
}

#[test]
fn explicit_tree_rank_matches_dag_root() {
    for inv in ["cent", "max", "maxn", "xi"] {
        let dag = chainrank(&["tree", "S(3)", "--invariant", inv, "--format", "json"]).json();
        let lit = chainrank(&[
            "tree",
            "S(3)",
            "--invariant",
            inv,
            "--format",
            "json",
            "--explicit",
            "6",
        ])
        .json();
        assert!(violations(&schema("dag"), &lit).is_empty());
        assert_eq!(dag["nodes"][0]["rank"], lit["nodes"][0]["rank"], "{inv}");
    }
}

#[test]
fn oracle_outputs() {
    let v = chainrank(&["oracle", "D(4)", "--check", "maxn"]).json();
    assert!(violations(&schema("chain_report"), &v).is_empty());
    assert_eq!(v["length"], 3);
    assert_eq!(v["witness"].as_array().unwrap().len(), 4);
    assert_eq!(
        chainrank(&["oracle", "C(7)", "--check", "max"]).json()["length"],
        1
    );
    assert_eq!(
        chainrank(&["oracle", "S(4)", "--check", "max"]).json()["length"],
        4
    );
}

#[test]
fn verify_outcome_shape() {
    let r = chainrank(&[
        "verify",
        "--suite",
        "all",
        "--max-order",
        "4",
        "--jobs",
        "2",
    ]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    let v = r.json();
    assert!(violations(&schema("verify_outcome"), &v).is_empty());
    let suites: Vec<&str> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|o| o["suite"].as_str().unwrap())
        .collect();
    assert_eq!(suites, ["lemmas", "oracle", "marking"]);
}

#[test]
fn verify_output_does_not_depend_on_jobs() {
    let one = chainrank(&[
        "verify",
        "--suite",
        "marking",
        "--max-order",
        "8",
        "--jobs",
        "1",
    ]);
    let four = chainrank(&[
        "verify",
        "--suite",
        "marking",
        "--max-order",
        "8",
        "--jobs",
        "4",
    ]);
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    for args in [
        &["rank", "A(4) * C(2)", "--marking-seed", "3"][..],
        &[
            "tree",
            "D(6)",
            "--invariant",
            "xi",
            "--offset",
            "2",
            "--format",
            "json",
        ],
        &["oracle", "Q8", "--check", "cent"],
    ] {
        assert_eq!(chainrank(args).stdout, chainrank(args).stdout, "{args:?}");
    }
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["rank", "S(4)", "--marking-seed", "5"];
    let fresh = chainrank(&args).stdout;
    let first = chainrank_cached(dir.path(), &args);
    let second = chainrank_cached(dir.path(), &args);
    assert_eq!(first.stdout, fresh);
    assert_eq!(second.stdout, fresh);

    let stats = chainrank_cached(dir.path(), &["cache", "stats"]).json();
    assert_eq!(stats["entries"], 1);
    // A different selection or marking is a different entry.
    chainrank_cached(dir.path(), &["rank", "S(4)", "--invariant", "cent"]);
    chainrank_cached(dir.path(), &["rank", "S(4)"]);
    assert_eq!(
        chainrank_cached(dir.path(), &["cache", "stats"]).json()["entries"],
        3
    );
    // --no-cache neither reads nor writes.
    assert_eq!(
        chainrank_cached(dir.path(), &["rank", "C(9)", "--no-cache"]).code,
        0
    );
    assert_eq!(
        chainrank_cached(dir.path(), &["cache", "stats"]).json()["entries"],
        3
    );

    let path = chainrank_cached(dir.path(), &["cache", "path"]).stdout;
    assert_eq!(path.trim(), dir.path().to_str().unwrap());
    assert_eq!(chainrank_cached(dir.path(), &["cache", "clear"]).code, 0);
    assert_eq!(
        chainrank_cached(dir.path(), &["cache", "stats"]).json()["entries"],
        0
    );
}

#[test]
fn expressions_are_echoed_in_canonical_form() {
    let v = chainrank(&["rank", "C( 2 )wr C(2)", "--invariant", "maxn"]).json();
    assert_eq!(v["expression"], "C(2) wr C(2)");
    assert_eq!(v["invariants"]["maxn_length"], "4");
}
