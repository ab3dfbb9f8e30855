mod common;

use std::process::Command;

use unistab::driver::{run_algorithm, RunConfig, RunError};
use unistab::fitting::compute_index;
use unistab::generators::{gen_grassmann_instance, gen_working_example};
use unistab::io::{instance_to_json, parse_instance, parse_tree, tree_record, tree_to_dot, tree_to_json, IndexRecord};
use unistab::membership::algebra_membership;
use unistab::{IndexE, IndexPair};
use unistab_algebra::{GbLimits, Poly, VarTable};

use common::{frac, working_tree};

#[test]
fn runs_are_deterministic() {
    let inst = gen_working_example(2, 1, 1).unwrap();
    let a = tree_to_json(&run_algorithm(&inst, &RunConfig::default()).unwrap());
    let b = tree_to_json(&run_algorithm(&inst, &RunConfig::default()).unwrap());
    assert_eq!(a, b);
}

#[test]
fn instance_round_trip() {
    for inst in [gen_working_example(3, 2, 1).unwrap(), gen_grassmann_instance(3, 2, &[1, 3]).unwrap()] {
        let text = instance_to_json(&inst);
        let back = parse_instance(&text, GbLimits::default()).unwrap();
        assert_eq!(instance_to_json(&back), text);
        assert_eq!(compute_index(&back).unwrap(), compute_index(&inst).unwrap());
    }
}

#[test]
fn tree_round_trip() {
    let (_, tree) = working_tree(3, 2, 1);
    let text = tree_to_json(&tree);
    let rec = parse_tree(&text).unwrap();
    assert_eq!(rec, tree_record(&tree));
    assert!(rec.complete);
    assert_eq!(rec.terminals, tree.terminals());
    for n in &rec.nodes {
        let idx = n.index_after.to_pair().unwrap();
        assert_eq!(idx, tree.nodes[n.id].index_after);
        if n.terminal {
            assert_eq!(n.index_after.e, "inf");
        }
    }
}

#[test]
fn index_records() {
    assert_eq!(IndexRecord::from(IndexPair::finite(1, 2)).to_pair(), Some(IndexPair::finite(1, 2)));
    assert_eq!(IndexRecord::from(IndexPair::infinite(3)).to_pair(), Some(IndexPair::infinite(3)));
    assert_eq!(serde_json::to_string(&IndexRecord::from(IndexPair::infinite(0))).unwrap(), r#"{"d":0,"e":"inf"}"#);
}

#[test]
fn dot_rendering() {
    let (_, tree) = working_tree(2, 1, 1);
    let dot = tree_to_dot(&tree);
    assert!(dot.starts_with("digraph charts {"));
    assert_eq!(dot.matches("peripheries=2").count(), tree.terminals().len());
    assert_eq!(dot.matches(" -> ").count(), tree.nodes.len() - 1);
    assert!(dot.contains("style=dashed"));
}

#[test]
fn step_budget_returns_partial_tree() {
    let inst = gen_working_example(2, 1, 1).unwrap();
    let cfg = RunConfig { max_steps: 3, ..RunConfig::default() };
    match run_algorithm(&inst, &cfg) {
        Err(RunError::Budget(tree)) => {
            assert!(!tree.complete);
            assert!(tree.depth() <= 3);
            assert!(!parse_tree(&tree_to_json(&tree)).unwrap().complete);
        }
        other => panic!("expected a budget error, got {:?}", other.map(|t| t.nodes.len())),
    }
    assert_eq!(RunError::Budget(Box::new(working_tree(2, 1, 1).1)).exit_code(), 4);
}

#[test]
fn constant_stabilisers_end_immediately() {
    let inst = gen_grassmann_instance(3, 1, &[2]).unwrap();
    let tree = run_algorithm(&inst, &RunConfig::default()).unwrap();
    assert_eq!(tree.nodes.len(), 2);
    assert_eq!(tree.terminals(), [1]);
    assert!(tree.nodes[1].chart.identity);
    assert!(tree.nodes[1].quotient.is_some());
}

#[test]
fn trivial_action_is_terminal() {
    let table = std::sync::Arc::new(VarTable::new([("a".to_string(), 0u32), ("f".to_string(), 1)]).unwrap());
    let rows = vec![vec![Poly::zero(&table); 2]; 2];
    let inst = unistab::ConeInstance::new(unistab::GradedAlgebra::new(table, vec![], GbLimits::default()), unistab::LndAction::new(1, rows)).unwrap();
    assert_eq!(compute_index(&inst).unwrap(), IndexPair::infinite(2));
    let tree = run_algorithm(&inst, &RunConfig::default()).unwrap();
    let t = tree.terminals();
    assert_eq!(t.len(), 1);
    assert_eq!(tree.nodes[t[0]].index_after, IndexPair::infinite(2));
}

#[test]
fn depth_is_bounded_by_the_index() {
    for (rho, sigma) in [(2, 1), (3, 2), (3, 1), (5, 3)] {
        let inst = gen_working_example(rho, sigma, 1).unwrap();
        let idx = compute_index(&inst).unwrap();
        let IndexE::Finite(e0) = idx.e else { unreachable!() };
        let e_max = inst.table().weights().iter().copied().max().unwrap() as u64;
        let tree = run_algorithm(&inst, &RunConfig::default()).unwrap();
        assert!(tree.depth() as u64 <= 2 * (idx.d as u64 * e_max + e0) + 2, "({rho},{sigma}) depth {}", tree.depth());
    }
}

#[test]
fn membership_in_chart_algebras() {
    let (inst, tree) = working_tree(2, 1, 1);
    let c1 = &tree.nodes[1].chart;
    let t = c1.instance.table();
    let yes = |s: &str| algebra_membership(&frac(&inst, s), &c1.embedding, t, 8).unwrap();
    assert!(yes("f2/a11").is_yes());
    assert!(yes("f1").is_yes());
    assert!(yes("e*f2/a11^2").is_yes());
    assert!(!yes("f1/a21").is_yes());
}

fn cli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_unistab")).args(args).output().unwrap()
}

#[test]
fn cli_index_and_run() {
    let dir = std::env::temp_dir().join(format!("unistab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("working.json");
    std::fs::write(&file, instance_to_json(&gen_working_example(2, 1, 1).unwrap())).unwrap();
    let path = file.to_str().unwrap();

    let out = cli(&["index", "--instance", path]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), r#"{"d":1,"e":2}"#);

    let out = cli(&["run", "--rho", "3", "--sigma", "2"]);
    assert!(out.status.success());
    assert_eq!(parse_tree(&String::from_utf8_lossy(&out.stdout)).unwrap().terminals.len(), 2);

    let out = cli(&["run", "--instance", path]);
    assert_eq!(parse_tree(&String::from_utf8_lossy(&out.stdout)).unwrap().terminals.len(), 3);

    let out = cli(&["run", "--instance", path, "--max-steps", "2"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(!parse_tree(&String::from_utf8_lossy(&out.stdout)).unwrap().complete);

    let out = cli(&["quotient", "--instance", path]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("\"precondition\""));

    let broken = dir.join("broken.json");
    std::fs::write(&broken, r#"{"w":1,"r":1,"variables":[{"name":"a","degree":0},{"name":"f","degree":1}],"derivations":[{"images":{"f":"f"}}]}"#).unwrap();
    let out = cli(&["verify", "--instance", broken.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("weight-shift"));

    let out = cli(&["index", "--instance", dir.join("missing.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));

    let gen = dir.join("g.json");
    let out = cli(&["gen", "grassmann", "--r", "3", "--b", "1", "--pinned", "2", "--out", gen.to_str().unwrap()]);
    assert!(out.status.success());
    let out = cli(&["quotient", "--instance", gen.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    std::fs::remove_dir_all(&dir).ok();
}
