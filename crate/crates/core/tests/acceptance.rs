//! One line per acceptance criterion, at the working example with ρ=2, σ=1, w=1.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use unistab::driver::{run_algorithm, ChartTree, RunConfig};
use unistab::fitting::fitting_report;
use unistab::generators::{gen_grassmann_instance, gen_working_example};
use unistab::membership::{generator_table, poly_membership};
use unistab::modification::{invariant_core, ModKind};
use unistab::quotient::{check_uu, find_slice, invariant_ring};
use unistab::{ConeInstance, GradedAlgebra, LndAction};
use unistab_algebra::ideal::monomials_of_degree;
use unistab_algebra::matrix::subsets;
use unistab_algebra::{rat, GbLimits, Ideal, LinearSpan, Monomial, Poly, VarTable};

use common::*;

const RHO: u32 = 2;
const SIGMA: u32 = 1;
const W: u32 = 1;

/// Monomials of weight `k` and total degree at most `max_deg`.
fn weighted_monomials(table: &VarTable, k: u64, max_deg: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for d in 0..=max_deg {
        for m in monomials_of_degree(table.len(), d) {
            if m.weighted_degree(table.weights()) == k {
                out.push(m);
            }
        }
    }
    out
}

fn random_element(rng: &mut ChaCha8Rng, inst: &ConeInstance, core_gens: &[Poly]) -> Option<Poly> {
    let table = inst.table();
    let k = rng.gen_range(0..=4u64);
    let mons = weighted_monomials(table, k, 3);
    let mut h = Poly::zero(table);
    if rng.gen_bool(0.5) && !core_gens.is_empty() {
        for _ in 0..rng.gen_range(1..=2) {
            let g = &core_gens[rng.gen_range(0..core_gens.len())];
            let gw = g.weighted_degree().value()?;
            if gw > k {
                continue;
            }
            let cof = weighted_monomials(table, k - gw, 2);
            if cof.is_empty() {
                continue;
            }
            let m = &cof[rng.gen_range(0..cof.len())];
            h = &h + &g.mul_monomial(m, &rat(rng.gen_range(1..=3)));
        }
    }
    if mons.is_empty() {
        return (!h.is_zero()).then_some(h);
    }
    if h.is_zero() || rng.gen_bool(0.3) {
        for _ in 0..rng.gen_range(1..=3) {
            let m = &mons[rng.gen_range(0..mons.len())];
            h = &h + &Poly::monomial(table, m.clone(), rat(rng.gen_range(-2..=2)));
        }
    }
    (!h.is_zero()).then_some(h)
}

/// `h ∈ core(I)` iff every `ξ^n h` with `|n| ≤ weight(h)/w` lies in `I`.
fn brute_in_core(inst: &ConeInstance, seed: &Ideal, h: &Poly) -> bool {
    let top = h.weighted_degree().value().unwrap_or(0) / inst.w() as u64;
    let mut level = vec![h.clone()];
    for _ in 0..=top {
        let mut next = Vec::new();
        for p in &level {
            if !seed.contains(p).unwrap() {
                return false;
            }
            for i in 0..inst.r() {
                let q = inst.apply_derivation(i, p).unwrap();
                if !q.is_zero() {
                    next.push(q);
                }
            }
        }
        level = next;
    }
    level.iter().all(|p| seed.contains(p).unwrap())
}

fn criterion_6(tree: &ChartTree) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut total = 0;
    let mut members = 0;
    let mut seen = BTreeSet::new();
    for node in &tree.nodes {
        if node.chart.identity || node.terminal || !seen.insert(node.chart.label.clone() + &node.step.to_string()) {
            continue;
        }
        let inst = &node.chart.instance;
        let report = fitting_report(inst).map_err(|e| e.to_string())?;
        let seeds = [
            inst.algebra().positive_part(),
            report.fitting[report.index.d as usize].sum(&inst.algebra().positive_part()),
        ];
        for seed in seeds {
            let core = invariant_core(inst, &seed).map_err(|e| e.to_string())?;
            for g in core.generators() {
                for i in 0..inst.r() {
                    if !core.contains(&inst.apply_derivation(i, g).unwrap()).unwrap() {
                        return Err(format!("core on {} is not invariant at {g}", node.chart.label));
                    }
                }
            }
            let gens = inst.algebra().minimal_generators(&core).map_err(|e| e.to_string())?;
            let mut count = 0;
            while count < 100 {
                let Some(h) = random_element(&mut rng, inst, &gens) else { continue };
                count += 1;
                let fast = core.contains(&h).unwrap();
                if fast != brute_in_core(inst, &seed, &h) {
                    return Err(format!("disagreement on {} for {h}", node.chart.label));
                }
                members += fast as usize;
            }
            total += count;
        }
    }
    Ok(format!("{total} random elements agree ({members} in the core)"))
}

fn trivial_instance() -> ConeInstance {
    let t = VarTable::from_pairs(&[("s", 0), ("x", 1), ("y", 2)]);
    let zero = vec![Poly::zero(&t); 3];
    ConeInstance::new(GradedAlgebra::new(t, Vec::new(), GbLimits::default()), LndAction::new(1, vec![zero.clone(), zero]))
        .unwrap()
}

fn grassmann_cases() -> Vec<(usize, usize, Vec<usize>)> {
    let mut out = Vec::new();
    for r in 1..=3 {
        for b in 0..=r {
            for pinned in subsets(r, b) {
                out.push((r, b, pinned.into_iter().map(|c| c + 1).collect()));
            }
        }
    }
    out
}

fn test_trees(main: &ChartTree) -> Result<Vec<(String, ChartTree)>, String> {
    let cfg = RunConfig::default();
    let mut trees = vec![("working(2,1,1)".to_string(), main.clone())];
    for (rho, sigma, w) in [(3, 1, 1), (3, 2, 1), (2, 1, 2), (5, 3, 1)] {
        let inst = gen_working_example(rho, sigma, w).unwrap();
        trees.push((format!("working({rho},{sigma},{w})"), run_algorithm(&inst, &cfg).map_err(|e| e.to_string())?));
    }
    for (r, b, pinned) in grassmann_cases() {
        let inst = gen_grassmann_instance(r, b, &pinned).unwrap();
        trees.push((format!("grassmann({r},{b},{pinned:?})"), run_algorithm(&inst, &cfg).map_err(|e| e.to_string())?));
    }
    trees.push(("trivial".into(), run_algorithm(&trivial_instance(), &cfg).map_err(|e| e.to_string())?));
    Ok(trees)
}

fn criterion_7(main: &ChartTree) -> Outcome {
    let trees = test_trees(main)?;
    let (mut n1, mut n2) = (0, 0);
    for (name, tree) in &trees {
        for node in &tree.nodes {
            let (Some(kind), Some(before)) = (node.mod_type, node.index_before) else { continue };
            let after = node.index_after;
            match kind {
                ModKind::I if after > before => return Err(format!("{name}: ModI raised {before} to {after}")),
                ModKind::II if after >= before => return Err(format!("{name}: ModII kept {before} at {after}")),
                ModKind::I => n1 += 1,
                ModKind::II => n2 += 1,
            }
        }
    }
    Ok(format!("{n1} ModI edges non-increasing, {n2} ModII edges decreasing over {} trees", trees.len()))
}

fn uu_and_quotient(inst: &ConeInstance, bound: u32) -> Result<unistab::quotient::QuotientPresentation, String> {
    if !check_uu(inst).map_err(|e| e.to_string())? {
        return Err("check_uu fails".into());
    }
    let report = fitting_report(inst).map_err(|e| e.to_string())?;
    let d = report.index.d as usize;
    if d > 0 && !report.fitting[d - 1].same_as(inst.algebra().relations()).map_err(|e| e.to_string())? {
        return Err(format!("Fit_{} is not zero", d - 1));
    }
    let slice = find_slice(inst, 0, 1000).map_err(|e| e.to_string())?;
    for (i, beta) in slice.betas.iter().enumerate() {
        for (j, f) in slice.slices.iter().enumerate() {
            let v = inst.apply_combination(beta, f).map_err(|e| e.to_string())?;
            let want = if i == j { Poly::one(inst.table()) } else { Poly::zero(inst.table()) };
            if v != want {
                return Err(format!("beta_{}(f_{}) = {v}", i + 1, j + 1));
            }
        }
    }
    let q = invariant_ring(inst, &slice, bound).map_err(|e| e.to_string())?;
    for g in &q.generators {
        for i in 0..inst.r() {
            if !inst.apply_derivation(i, &g.poly).unwrap().is_zero() {
                return Err(format!("{} not killed by xi{}", g.name, i + 1));
            }
        }
    }
    let mut all: Vec<Poly> = q.generators.iter().map(|g| g.poly.clone()).collect();
    all.extend(slice.slices.iter().cloned());
    let weights: Vec<u64> = all.iter().map(|p| p.weighted_degree().value().unwrap_or(0)).collect();
    let z = generator_table("p", &weights);
    for v in 0..inst.table().len() {
        let x = Poly::var(inst.table(), v);
        if !poly_membership(&x, &all, &z, inst.algebra().relations(), bound).map_err(|e| e.to_string())?.is_yes() {
            return Err(format!("{} not reconstructed", inst.table().name(v)));
        }
    }
    Ok(q)
}

fn criterion_8(tree: &ChartTree) -> Outcome {
    for t in tree.terminals() {
        let node = &tree.nodes[t];
        if let Some(e) = &node.quotient_error {
            return Err(format!("terminal {}: {e}", node.chart.label));
        }
        uu_and_quotient(&node.chart.instance, BOUND).map_err(|e| format!("terminal {}: {e}", node.chart.label))?;
    }
    let cases = grassmann_cases();
    for (r, b, pinned) in &cases {
        let inst = gen_grassmann_instance(*r, *b, pinned).unwrap();
        let q = uu_and_quotient(&inst, BOUND).map_err(|e| format!("grassmann({r},{b},{pinned:?}): {e}"))?;
        let zero_vars: Vec<Poly> = inst.algebra().degree_zero_vars().into_iter().map(|v| Poly::var(inst.table(), v)).collect();
        let gens: Vec<Poly> = q.generators.iter().map(|g| g.poly.clone()).collect();
        if gens != zero_vars || !q.relations.is_zero() && !q.relations.generators().iter().all(|g| g.is_zero()) {
            return Err(format!("grassmann({r},{b},{pinned:?}): invariants {gens:?} are not the degree-0 coordinates"));
        }
    }
    Ok(format!("{} terminals and {} Grassmannian charts satisfy UU with valid quotients", tree.terminals().len(), cases.len()))
}

fn random_form(rng: &mut ChaCha8Rng, t: &std::sync::Arc<VarTable>, d: u32) -> Poly {
    let terms = monomials_of_degree(t.len(), d).into_iter().filter_map(|m| {
        let c = rng.gen_range(-3i64..=3);
        (c != 0 && rng.gen_bool(0.6)).then(|| (m, rat(c)))
    });
    Poly::from_terms(t, terms)
}

fn brute_member(gens: &[Poly], p: &Poly) -> bool {
    if p.is_zero() {
        return true;
    }
    let d = p.total_degree();
    let mut span = LinearSpan::new();
    for g in gens.iter().filter(|g| !g.is_zero() && g.total_degree() <= d) {
        for m in monomials_of_degree(p.table().len(), d - g.total_degree()) {
            span.insert(&g.mul_monomial(&m, &rat(1)));
        }
    }
    span.contains(p)
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut yes, mut no) = (0, 0);
    for case in 0..200 {
        let n = 2 + case % 2;
        let t = std::sync::Arc::new(VarTable::new((0..n).map(|i| (format!("x{i}"), 1))).unwrap());
        let gens: Vec<Poly> = (0..rng.gen_range(1..=3))
            .map(|_| {
                let d = rng.gen_range(1..=3);
                random_form(&mut rng, &t, d)
            })
            .filter(|g| !g.is_zero())
            .collect();
        let ideal = Ideal::new(&t, gens.clone());
        let d = rng.gen_range(1..=4);
        let p = if rng.gen_bool(0.5) && !gens.is_empty() {
            let g = &gens[rng.gen_range(0..gens.len())];
            let f = random_form(&mut rng, &t, d.max(g.total_degree()) - g.total_degree());
            &f * g
        } else {
            random_form(&mut rng, &t, d)
        };
        let fast = ideal.contains(&p).map_err(|e| e.to_string())?;
        if fast != brute_member(&gens, &p) {
            return Err(format!("case {case}: {p} in {ideal} disagrees"));
        }
        if fast {
            yes += 1
        } else {
            no += 1
        }
    }
    Ok(format!("200 instances agree ({yes} members, {no} non-members)"))
}

fn main() -> ExitCode {
    let inst = gen_working_example(RHO, SIGMA, W).unwrap();
    let start = Instant::now();
    let tree = run_algorithm(&inst, &RunConfig::default()).expect("algorithm runs");
    let elapsed = start.elapsed();

    let results: Vec<(u32, &str, Outcome)> = vec![
        (1, "working-example pipeline", check_pipeline(&tree, elapsed)),
        (2, "index trace", check_indices(&tree, RHO, SIGMA)),
        (3, "Fitting ideals", check_fitting(&inst, &tree)),
        (4, "centres", check_centres(&inst, &tree, RHO, SIGMA)),
        (5, "chart algebras", check_algebras(&inst, &tree)),
        (6, "invariant core", criterion_6(&tree)),
        (7, "index monotonicity", criterion_7(&tree)),
        (8, "UU and quotient", criterion_8(&tree)),
        (9, "membership oracle", criterion_9()),
    ];
    let mut failed = 0;
    for (n, name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("PASS criterion {n} ({name}): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {n} ({name}): {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
