//! Ground truth for the working example and helpers to compare it with computed charts.
#![allow(dead_code)]

use std::time::Duration;

use unistab::driver::{run_algorithm, ChartTree, RunConfig, TreeNode};
use unistab::fitting::{fitting_report, IndexPair};
use unistab::generators::gen_working_example;
use unistab::membership::{algebra_membership, generator_table, Membership};
use unistab::modification::{centre_mod_i, centre_mod_ii, CentreData, Chart, ModKind};
use unistab::ConeInstance;
use unistab_algebra::{parse_fraction, Fraction, Ideal, Poly};

pub const BOUND: u32 = 12;

/// One chart of the reference description: where it sits and what it contains.
pub struct ExpectedChart {
    pub name: &'static str,
    pub step: u32,
    /// Printed denominator of the chart and of its parent; `None` at the root.
    pub label: Option<&'static str>,
    pub parent_label: Option<&'static str>,
    pub algebra: &'static [&'static str],
    /// `None` stands for the unit ideal.
    pub fit0: Option<&'static [&'static str]>,
    pub fit1: Option<&'static [&'static str]>,
}

const C0: &[&str] = &["a11", "a21", "a22", "e", "f1", "f2"];
const C1: &[&str] = &["a11", "a21/a11", "a22/a11", "e/a11", "f1/a11", "f2/a11"];
const C2: &[&str] = &["a11", "a21/e", "a22/e", "e/a11", "f1/a11", "f2/e"];
const A41: &[&str] = &["a11", "a21/e", "a22/a21", "e^2/(a11*a21)", "f1/a11", "f2/a21"];
const A42: &[&str] = &["a11", "a21/a22", "a22/e", "e^2/(a11*a22)", "f1/a11", "f2/a22"];
const A51: &[&str] = &["a11", "a21^2/(a22*e)", "a22/a21", "e^2/(a11*a22)", "f1/a11", "f2/a22 - f1*a21/(a11*a22)"];

pub fn expected_charts() -> Vec<ExpectedChart> {
    vec![
        ExpectedChart { name: "C(0)", step: 0, label: None, parent_label: None, algebra: C0, fit0: Some(&["a11*a22"]), fit1: Some(&["a11", "a21", "a22"]) },
        ExpectedChart { name: "C(1)", step: 1, label: Some("a11"), parent_label: None, algebra: C1, fit0: Some(&["a22/a11"]), fit1: None },
        ExpectedChart { name: "C(2)", step: 2, label: Some("e/a11"), parent_label: Some("a11"), algebra: C2, fit0: Some(&["a22/e"]), fit1: None },
        ExpectedChart { name: "C(3)", step: 3, label: Some("e/a11"), parent_label: Some("e/a11"), algebra: C2, fit0: Some(&["a22/e"]), fit1: None },
        ExpectedChart { name: "A(4),1", step: 4, label: Some("a21/e"), parent_label: Some("e/a11"), algebra: A41, fit0: Some(&["a22/a21"]), fit1: None },
        ExpectedChart { name: "A(4),2", step: 4, label: Some("a22/e"), parent_label: Some("e/a11"), algebra: A42, fit0: None, fit1: None },
        ExpectedChart { name: "A(5),1", step: 5, label: Some("a22/a21"), parent_label: Some("a21/e"), algebra: A51, fit0: None, fit1: None },
        ExpectedChart { name: "A(5),2", step: 5, label: Some("a22/e"), parent_label: Some("a22/e"), algebra: A42, fit0: None, fit1: None },
    ]
}

/// A centre as displayed: the step of the chart it lives on, that chart, and its generators.
pub struct ExpectedCentre {
    pub name: &'static str,
    /// The expected chart (by name) on which the centre is computed.
    pub chart: &'static str,
    pub generators: &'static [&'static str],
    /// `None` stands for the unit ideal (empty centre).
    pub min_degree: Option<MinDegree>,
}

#[derive(Clone, Copy)]
pub enum MinDegree {
    Zero,
    Sigma,
    RhoMinusSigma,
}

pub fn expected_centres() -> Vec<ExpectedCentre> {
    vec![
        ExpectedCentre { name: "J(0)", chart: "C(0)", generators: &["a11", "a21", "a22", "e", "f1", "f2"], min_degree: Some(MinDegree::Zero) },
        ExpectedCentre { name: "J(1)", chart: "C(1)", generators: &["a21/a11", "a22/a11", "e/a11", "f2/a11"], min_degree: Some(MinDegree::Sigma) },
        ExpectedCentre { name: "J(2)", chart: "C(2)", generators: &[], min_degree: None },
        ExpectedCentre { name: "J(3)", chart: "C(3)", generators: &["a21/e", "a22/e", "e/a11", "f2/e"], min_degree: Some(MinDegree::RhoMinusSigma) },
        ExpectedCentre {
            name: "J(4),1",
            chart: "A(4),1",
            generators: &["a21/e", "a22/a21", "e^2/(a11*a21)", "a22*f1/(a11*a21)", "f2/a21 - f1/a11"],
            min_degree: Some(MinDegree::Zero),
        },
    ]
}

pub fn expected_indices(rho: u64, sigma: u64) -> Vec<IndexPair> {
    vec![
        IndexPair::finite(1, rho),
        IndexPair::finite(1, rho),
        IndexPair::finite(1, rho - sigma),
        IndexPair::finite(1, rho - sigma),
        IndexPair::infinite(0),
        IndexPair::infinite(0),
    ]
}

pub fn working_tree(rho: u32, sigma: u32, w: u32) -> (ConeInstance, ChartTree) {
    let inst = gen_working_example(rho, sigma, w).unwrap();
    let tree = run_algorithm(&inst, &RunConfig::default()).unwrap();
    (inst, tree)
}

pub fn frac(inst: &ConeInstance, s: &str) -> Fraction {
    parse_fraction(s, inst.table()).unwrap_or_else(|e| panic!("{s}: {e}"))
}

pub fn denominator_label(node: &TreeNode) -> Option<String> {
    node.chart.denominator.as_ref().map(|f| f.to_string())
}

/// Locates the computed node matching an expected chart by step and denominators.
pub fn find_node<'t>(tree: &'t ChartTree, inst: &ConeInstance, pc: &ExpectedChart) -> Option<&'t TreeNode> {
    let same = |have: Option<&Fraction>, want: Option<&str>| match (have, want) {
        (None, None) => true,
        (Some(h), Some(w)) => h.same_value(&frac(inst, w)),
        _ => false,
    };
    tree.nodes.iter().find(|n| {
        if n.step != pc.step {
            return false;
        }
        let own = if n.chart.identity { tree.nodes[n.parent.unwrap()].chart.denominator.as_ref() } else { n.chart.denominator.as_ref() };
        if pc.step == 0 {
            return n.parent.is_none();
        }
        if !same(own, pc.label) {
            return false;
        }
        let parent = &tree.nodes[n.parent.unwrap()];
        let parent_own = if parent.chart.identity {
            parent.parent.and_then(|g| tree.nodes[g].chart.denominator.as_ref())
        } else {
            parent.chart.denominator.as_ref()
        };
        same(parent_own, pc.parent_label)
    })
}

/// A root-coordinate fraction as a polynomial in the chart's variables.
pub fn express(chart: &Chart, f: &Fraction) -> Option<Poly> {
    match algebra_membership(f, &chart.embedding, chart.instance.table(), BOUND).unwrap() {
        Membership::Yes(p) => Some(p),
        Membership::Undetermined => None,
    }
}

/// The ideal generated by root fractions in the chart ring, relations included.
pub fn chart_ideal(chart: &Chart, inst: &ConeInstance, gens: &[&str]) -> Result<Ideal, String> {
    let mut polys = Vec::new();
    for g in gens {
        let p = express(chart, &frac(inst, g)).ok_or_else(|| format!("{g} is not in the chart algebra"))?;
        polys.push(p);
    }
    Ok(chart.instance.algebra().ideal(polys))
}

pub fn unit_or(chart: &Chart, inst: &ConeInstance, gens: Option<&[&str]>) -> Result<Ideal, String> {
    match gens {
        Some(g) => chart_ideal(chart, inst, g),
        None => Ok(chart.instance.algebra().ideal([Poly::one(chart.instance.table())])),
    }
}

/// Compares computed `Fit_0`, `Fit_1` with the expected lists.
pub fn fitting_matches(chart: &Chart, inst: &ConeInstance, pc: &ExpectedChart) -> Result<(), String> {
    let report = fitting_report(&chart.instance).map_err(|e| e.to_string())?;
    for (d, want) in [(0, pc.fit0), (1, pc.fit1)] {
        let expected = unit_or(chart, inst, want)?;
        if !report.fitting[d].same_as(&expected).map_err(|e| e.to_string())? {
            return Err(format!("{}: Fit_{d} = {} differs from {:?}", pc.name, report.fitting[d], want));
        }
    }
    Ok(())
}

/// Two-sided subalgebra comparison of a computed chart with a listed algebra.
pub fn algebra_matches(chart: &Chart, inst: &ConeInstance, listed: &[&str]) -> Result<(), String> {
    for g in listed {
        if express(chart, &frac(inst, g)).is_none() {
            return Err(format!("listed generator {g} not found in chart {}", chart.label));
        }
    }
    let gens: Vec<Fraction> = listed.iter().map(|g| frac(inst, g)).collect();
    let weights: Vec<u64> = gens.iter().map(|g| g.weighted_degree().unwrap_or(0).max(0) as u64).collect();
    let z = generator_table("p", &weights);
    for (v, emb) in chart.embedding.iter().enumerate() {
        if !algebra_membership(emb, &gens, &z, BOUND).unwrap().is_yes() {
            return Err(format!(
                "chart variable {} = {emb} not in the listed algebra",
                chart.instance.table().name(v)
            ));
        }
    }
    Ok(())
}

/// Sequence of nodes along every root-to-terminal path.
pub fn terminal_paths(tree: &ChartTree) -> Vec<Vec<&TreeNode>> {
    tree.terminals().into_iter().map(|t| tree.path_to(t).into_iter().map(|i| &tree.nodes[i]).collect()).collect()
}

pub type Outcome = Result<String, String>;

pub fn check_pipeline(tree: &ChartTree, elapsed: Duration) -> Outcome {
    let mut problems = Vec::new();
    let expected = [(ModKind::I, false), (ModKind::II, false), (ModKind::I, true), (ModKind::II, false), (ModKind::I, false)];
    for path in terminal_paths(tree) {
        let edges: Vec<(ModKind, bool)> = path.iter().skip(1).map(|n| (n.mod_type.unwrap(), n.chart.identity)).collect();
        let shape_ok = edges.len() == expected.len()
            && edges.iter().zip(&expected).all(|((k, id), (ek, eid))| k == ek && (!eid || *id));
        if !shape_ok {
            let labels: Vec<String> = path.iter().map(|n| n.chart.label.clone()).collect();
            problems.push(format!("path {} has edges {edges:?}", labels.join(" > ")));
        }
    }
    let terminals = tree.terminals().len();
    if terminals != 2 {
        let labels: Vec<String> = tree.terminals().iter().map(|&t| tree.nodes[t].chart.label.clone()).collect();
        problems.push(format!("{terminals} terminal charts ({}), expected 2", labels.join(", ")));
    }
    if elapsed > Duration::from_secs(300) {
        problems.push(format!("runtime {elapsed:?} exceeds 5 minutes"));
    }
    if problems.is_empty() {
        Ok(format!("edges I, II, I(identity), II, I on every path; 2 terminals; {elapsed:?}"))
    } else {
        Err(problems.join("; "))
    }
}

pub fn check_indices(tree: &ChartTree, rho: u32, sigma: u32) -> Outcome {
    let want = expected_indices(rho as u64, sigma as u64);
    for path in terminal_paths(tree) {
        let got: Vec<_> = path.iter().map(|n| n.index_after).collect();
        if got != want {
            let shown: Vec<String> = got.iter().map(|i| i.to_string()).collect();
            return Err(format!("path to {} has indices {}", path.last().unwrap().chart.label, shown.join(" ")));
        }
    }
    let shown: Vec<String> = want.iter().map(|i| i.to_string()).collect();
    Ok(format!("{} on every path", shown.join(" ")))
}

pub fn check_fitting(inst: &ConeInstance, tree: &ChartTree) -> Outcome {
    let mut checked = 0;
    for pc in expected_charts() {
        let node = find_node(tree, inst, &pc).ok_or_else(|| format!("no computed chart for {}", pc.name))?;
        fitting_matches(&node.chart, inst, &pc)?;
        checked += 1;
    }
    Ok(format!("Fit_0 and Fit_1 agree on all {checked} listed charts"))
}

pub fn computed_centre(chart: &unistab::Chart, step: u32) -> Result<CentreData, String> {
    let r = if step.is_multiple_of(2) { centre_mod_i(&chart.instance) } else { centre_mod_ii(&chart.instance) };
    r.map_err(|e| e.to_string())
}

pub fn check_centres(inst: &ConeInstance, tree: &ChartTree, rho: u32, sigma: u32) -> Outcome {
    let charts = expected_charts();
    let mut problems = Vec::new();
    for pcentre in expected_centres() {
        let pc = charts.iter().find(|c| c.name == pcentre.chart).unwrap();
        let Some(node) = find_node(tree, inst, pc) else {
            problems.push(format!("{}: no computed chart {}", pcentre.name, pc.name));
            continue;
        };
        let chart = &node.chart;
        let centre = computed_centre(chart, pc.step)?;
        let expected = if pcentre.generators.is_empty() {
            Ok(chart.instance.algebra().ideal([Poly::one(chart.instance.table())]))
        } else {
            chart_ideal(chart, inst, pcentre.generators)
        };
        let expected = match expected {
            Ok(e) => e,
            Err(e) => {
                problems.push(format!("{}: {e}", pcentre.name));
                continue;
            }
        };
        let fwd = centre.core.contains_ideal(&expected).map_err(|e| e.to_string())?;
        let back = expected.contains_ideal(&centre.core).map_err(|e| e.to_string())?;
        if !(fwd && back) {
            let shown: Vec<String> = centre.generators.iter().map(|g| chart.embed(g).to_string()).collect();
            problems.push(format!(
                "{}: computed <{}>{}{}",
                pcentre.name,
                shown.join(", "),
                if fwd { "" } else { " misses listed generators" },
                if back { "" } else { " has extra generators" }
            ));
        }
        let want_deg = pcentre.min_degree.map(|m| match m {
            MinDegree::Zero => 0,
            MinDegree::Sigma => sigma as u64,
            MinDegree::RhoMinusSigma => (rho - sigma) as u64,
        });
        if centre.min_degree != want_deg {
            problems.push(format!("{}: minimal degree {:?}, expected {want_deg:?}", pcentre.name, centre.min_degree));
        }
    }
    if problems.is_empty() {
        Ok("J(0), J(1), J(2), J(3), J(4),1 agree".into())
    } else {
        Err(problems.join("; "))
    }
}

pub fn check_algebras(inst: &ConeInstance, tree: &ChartTree) -> Outcome {
    let mut problems = Vec::new();
    for pc in expected_charts() {
        match find_node(tree, inst, &pc) {
            None => problems.push(format!("{}: no computed chart", pc.name)),
            Some(node) => {
                if let Err(e) = algebra_matches(&node.chart, inst, pc.algebra) {
                    problems.push(format!("{}: {e}", pc.name));
                }
            }
        }
    }
    if problems.is_empty() {
        Ok("all listed chart algebras agree both ways".into())
    } else {
        Err(problems.join("; "))
    }
}

