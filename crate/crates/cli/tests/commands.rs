use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use csg::{AgentSet, Algorithm, ExplicitTable, SeededRandom, SmallSet, SynergyGraph, Valuation};
use csg_cli::bench::read_csv;
use csg_cli::io::{parse_graph, write_graph};
use csg_cli::report::ResultDocument;
use csg_cli::verify::{run_with, VerifyConfig};
use proptest::prelude::*;

fn csg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_csg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn gen_writes_edge_lists() {
    assert_eq!(stdout(&csg(&["gen", "--model", "path", "--n", "3"])), "3\n0 1\n1 2\n");
    let k3 = stdout(&csg(&["gen", "--model", "complete", "--n", "3"]));
    assert_eq!(k3.lines().skip(1).count(), 3);

    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.txt"), dir.path().join("b.txt"));
    for f in [&a, &b] {
        stdout(&csg(&[
            "gen",
            "--model",
            "tree",
            "--n",
            "10",
            "--seed",
            "7",
            "--out",
            p(f),
        ]));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());

    let bad = csg(&["gen", "--model", "ba:9", "--n", "4"]);
    assert!(!bad.status.success());
}

#[test]
fn solve_line_with_table() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("l3.txt");
    fs::write(&graph, "3\n0 1\n1 2\n").unwrap();
    let table = dir.path().join("v.txt");
    fs::write(&table, "0;2\n1;2\n2;2\n0,1;1\n1,2;1\n0,1,2;1\n").unwrap();
    let values = format!("table:{}", p(&table));

    let out = dir.path().join("r.json");
    let text = stdout(&csg(&[
        "solve",
        "--graph",
        p(&graph),
        "--values",
        &values,
        "--alg",
        "dype",
        "--out",
        p(&out),
    ]));
    assert!(
        text.contains("value 6\n") && text.contains("cs {0} {1} {2}\n"),
        "{text}"
    );
    let doc = ResultDocument::from_json(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc.optimal_value, 6.0);
    assert_eq!(doc.optimal_cs, vec![vec![0], vec![1], vec![2]]);
    assert_eq!(doc.algorithm, "dype");
    assert_eq!(doc.instance.roots, vec![1]);

    let brute = stdout(&csg(&[
        "solve",
        "--graph",
        p(&graph),
        "--values",
        &values,
        "--alg",
        "bruteforce",
    ]));
    assert!(brute.contains("value 6\n"));
}

#[test]
fn solve_dype_and_dyce_agree_on_a_tree() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("t.txt");
    stdout(&csg(&[
        "gen",
        "--model",
        "tree",
        "--n",
        "15",
        "--seed",
        "3",
        "--out",
        p(&graph),
    ]));
    let mut values = Vec::new();
    for alg in ["dype", "dyce"] {
        let out = dir.path().join(format!("{alg}.json"));
        stdout(&csg(&[
            "solve",
            "--graph",
            p(&graph),
            "--values",
            "seed:3",
            "--alg",
            alg,
            "--out",
            p(&out),
        ]));
        values.push(
            ResultDocument::from_json(&fs::read_to_string(&out).unwrap())
                .unwrap()
                .optimal_value,
        );
    }
    assert_eq!(values[0], values[1]);
}

#[test]
fn solve_errors_are_explained() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("k.txt");
    stdout(&csg(&["gen", "--model", "complete", "--n", "30", "--out", p(&graph)]));
    let o = csg(&["solve", "--graph", p(&graph), "--alg", "dp"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("30"));

    for args in [
        vec!["solve", "--graph", "/nonexistent/g.txt"],
        vec!["solve", "--graph", p(&graph), "--alg", "magic"],
        vec!["solve", "--graph", p(&graph), "--values", "coin:1"],
    ] {
        assert!(!csg(&args).status.success(), "{args:?}");
    }
}

#[test]
fn hcs_export() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("l3.txt");
    fs::write(&graph, "3\n0 1\n1 2\n").unwrap();
    let dot = stdout(&csg(&["hcs", "--graph", p(&graph), "--root", "1"]));
    assert!(dot.starts_with("digraph hcs {"));
    assert_eq!(dot.matches(" -> ").count(), 3);
    assert_eq!(dot.matches("[label=").count(), 4);
    assert!(dot.contains("{0}* {1} {2}*"));

    let big = dir.path().join("p13.txt");
    stdout(&csg(&["gen", "--model", "path", "--n", "13", "--out", p(&big)]));
    assert!(!csg(&["hcs", "--graph", p(&big)]).status.success());
}

#[test]
fn bench_writes_raw_and_median_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("runs.csv");
    stdout(&csg(&[
        "bench",
        "--models",
        "tree",
        "--n",
        "5..8",
        "--seeds",
        "3",
        "--algs",
        "dype,dyce",
        "--out",
        p(&out),
    ]));
    let rows = read_csv(&out).unwrap();
    assert_eq!(rows.len(), 24);
    assert!(rows
        .iter()
        .filter(|r| r.alg == "dype")
        .all(|r| r.subproblems == Some(r.n as u64)));
    let head = fs::read_to_string(&out).unwrap();
    assert!(head.starts_with("model,n,seed,alg,subproblems,subspaces,elapsed_ms,value,timeout\n"));
    let medians = fs::read_to_string(dir.path().join("runs.medians.csv")).unwrap();
    assert_eq!(medians.lines().count(), 1 + 8);
}

#[test]
fn bench_complete_graph_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("k.csv");
    stdout(&csg(&[
        "bench",
        "--models",
        "complete",
        "--n",
        "10",
        "--seeds",
        "1",
        "--algs",
        "dype,dp",
        "--out",
        p(&out),
    ]));
    let rows = read_csv(&out).unwrap();
    assert_eq!(
        rows.iter().map(|r| r.subproblems).collect::<Vec<_>>(),
        vec![Some(512), Some(1023)]
    );
}

#[test]
fn bench_timeouts_leave_flagged_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.csv");
    stdout(&csg(&[
        "bench",
        "--models",
        "complete",
        "--n",
        "14..15",
        "--seeds",
        "2",
        "--algs",
        "dyce,dype",
        "--timeout",
        "0",
        "--out",
        p(&out),
    ]));
    let rows = read_csv(&out).unwrap();
    let timeouts = rows.iter().filter(|r| r.timeout).count();
    assert_eq!(rows.len(), 8);
    assert_eq!(timeouts, 8);
    assert_eq!(rows.iter().filter(|r| !r.timeout).count(), 2 * 2 * 2 - timeouts);
    assert!(rows.iter().all(|r| r.elapsed_ms.is_none()));
}

#[test]
fn verify_passes_and_reports_every_instance() {
    let text = stdout(&csg(&["verify", "--n", "6", "--instances", "15", "--seed", "9"]));
    assert_eq!(text.lines().filter(|l| l.starts_with('#')).count(), 15);
    assert!(text.ends_with("all checks passed\n"));
    assert_eq!(stdout(&csg(&["verify", "--instances", "0"])), "all checks passed\n");
    assert!(!csg(&["verify", "--n", "11"]).status.success());
}

/// Hands one solver a table with a single coalition value altered.
#[test]
fn verify_flags_a_corrupted_table() {
    enum Fixture {
        Clean(SeededRandom),
        Corrupted(ExplicitTable),
    }
    impl Valuation for Fixture {
        fn value<S: AgentSet>(&self, c: &S) -> csg::Result<f64> {
            match self {
                Fixture::Clean(m) => m.value(c),
                Fixture::Corrupted(t) => t.value(c),
            }
        }
    }
    let corrupted = |g: &SynergyGraph, seed: u64| {
        let clean = SeededRandom::new(seed);
        let mut t = ExplicitTable::new();
        for mask in 1u64..1 << g.n() {
            let c = SmallSet::from_mask(mask);
            if g.is_feasible(&c) {
                let v = clean.value(&c).unwrap();
                // The grand coalition becomes worth far more than any split.
                let v = if c.len() == g.n() { v + 1000.0 } else { v };
                t.insert(c.to_vec(), v);
            }
        }
        t
    };
    let cfg = VerifyConfig {
        n_max: 5,
        instances: 10,
        seed: 1,
    };
    let report = run_with(&cfg, |g, seed, alg| {
        if alg == Algorithm::Dyce && g.is_connected() {
            Fixture::Corrupted(corrupted(g, seed))
        } else {
            Fixture::Clean(SeededRandom::new(seed))
        }
    });
    assert!(!report.passed());
    assert_eq!(report.lines.len(), 10);
    assert!(report.render().contains("MISMATCH"));
    assert!(report.lines.iter().any(|l| l.contains("dyce found")));
}

proptest! {
    #[test]
    fn graph_files_round_trip(n in 1usize..30, bits in prop::collection::vec(any::<bool>(), 435)) {
        let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        let g = SynergyGraph::new(n, pairs.zip(bits).filter(|(_, b)| *b).map(|(e, _)| e)).unwrap();
        prop_assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g);
    }
}

#[test]
fn solve_with_edge_weights() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("l3.txt");
    fs::write(&graph, "3\n0 1\n1 2\n").unwrap();
    let weights = dir.path().join("w.txt");
    // Singletons are worth 0, {0,1} 5, {1,2} -1 and {0,1,2} 4.
    fs::write(&weights, "0 1 5\n1 2 -1\n").unwrap();
    let values = format!("edgesum:{}", p(&weights));
    for alg in ["dype", "dp", "idp", "dyce", "bruteforce"] {
        let text = stdout(&csg(&[
            "solve",
            "--graph",
            p(&graph),
            "--values",
            &values,
            "--alg",
            alg,
        ]));
        assert!(text.contains("value 5\ncs {0,1} {2}\n"), "{alg}: {text}");
    }
}
