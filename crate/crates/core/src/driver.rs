//! The algorithm loop, run chart by chart as a tree.

use std::collections::VecDeque;

use thiserror::Error;
use unistab_algebra::{Fraction, GbLimits};

use crate::cone::ConeInstance;
use crate::error::CoreError;
use crate::fitting::{compute_index, IndexE, IndexPair};
use crate::modification::{modify, Chart, ModKind};
use crate::quotient::{check_uu, find_slice, invariant_ring, QuotientPresentation, DEFAULT_BOUND, DEFAULT_BUDGET};

#[derive(Debug, Clone, Copy)]
pub struct RunConfig {
    pub max_steps: u32,
    pub limits: GbLimits,
    pub seed: u64,
    pub budget: usize,
    pub bound: u32,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { max_steps: 64, limits: GbLimits::default(), seed: 0, budget: DEFAULT_BUDGET, bound: DEFAULT_BOUND }
    }
}

#[derive(Debug, Clone)]
pub struct TreeNode {
    pub id: usize,
    pub parent: Option<usize>,
    pub step: u32,
    /// Modification that produced this node; `None` at the root.
    pub mod_type: Option<ModKind>,
    pub chart: Chart,
    /// Generators of the centre blown up to reach this node, in root coordinates.
    pub centre_generators: Vec<Fraction>,
    pub index_before: Option<IndexPair>,
    pub index_after: IndexPair,
    pub terminal: bool,
    pub quotient: Option<QuotientPresentation>,
    pub quotient_error: Option<String>,
}

#[derive(Debug, Clone)]
pub struct ChartTree {
    pub root: ConeInstance,
    pub nodes: Vec<TreeNode>,
    /// False when the step budget ran out.
    pub complete: bool,
}

impl ChartTree {
    pub fn terminals(&self) -> Vec<usize> {
        self.nodes.iter().filter(|n| n.terminal).map(|n| n.id).collect()
    }

    pub fn children(&self, id: usize) -> Vec<usize> {
        self.nodes.iter().filter(|n| n.parent == Some(id)).map(|n| n.id).collect()
    }

    /// Node ids from the root down to `id`.
    pub fn path_to(&self, id: usize) -> Vec<usize> {
        let mut path = vec![id];
        let mut cur = id;
        while let Some(p) = self.nodes[cur].parent {
            path.push(p);
            cur = p;
        }
        path.reverse();
        path
    }

    pub fn depth(&self) -> u32 {
        self.nodes.iter().map(|n| n.step).max().unwrap_or(0)
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("step budget exhausted; partial tree has {} nodes", .0.nodes.len())]
    Budget(Box<ChartTree>),
    #[error(transparent)]
    Engine(#[from] CoreError),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Budget(_) => 4,
            RunError::Engine(e) => e.exit_code(),
        }
    }
}

fn push_children(
    tree: &mut ChartTree,
    parent: usize,
    kind: ModKind,
    centre: Vec<Fraction>,
    charts: Vec<Chart>,
) -> Result<Vec<usize>, CoreError> {
    let before = tree.nodes[parent].index_after;
    let step = tree.nodes[parent].step + 1;
    let mut ids = Vec::new();
    for chart in charts {
        let index = compute_index(&chart.instance)?;
        let id = tree.nodes.len();
        tree.nodes.push(TreeNode {
            id,
            parent: Some(parent),
            step,
            mod_type: Some(kind),
            chart,
            centre_generators: centre.clone(),
            index_before: Some(before),
            index_after: index,
            terminal: false,
            quotient: None,
            quotient_error: None,
        });
        ids.push(id);
    }
    Ok(ids)
}

fn finish_terminal(node: &mut TreeNode, cfg: &RunConfig) -> Result<(), CoreError> {
    node.terminal = true;
    let inst = &node.chart.instance;
    if !check_uu(inst)? {
        node.quotient_error = Some("the UU condition fails on this chart".into());
        return Ok(());
    }
    match find_slice(inst, cfg.seed, cfg.budget).and_then(|s| invariant_ring(inst, &s, cfg.bound)) {
        Ok(q) => node.quotient = Some(q),
        Err(e @ (CoreError::SliceNotFound(_) | CoreError::Internal(_))) => node.quotient_error = Some(e.to_string()),
        Err(e) => return Err(e),
    }
    Ok(())
}

/// Modification I on every chart; charts with `e = ∞` are terminal, the
/// others go through Modification II and back round the loop.
pub fn run_algorithm(inst: &ConeInstance, cfg: &RunConfig) -> Result<ChartTree, RunError> {
    let inst = inst.with_limits(cfg.limits);
    let index = compute_index(&inst)?;
    let mut tree = ChartTree {
        root: inst.clone(),
        nodes: vec![TreeNode {
            id: 0,
            parent: None,
            step: 0,
            mod_type: None,
            chart: Chart::root(inst.clone()),
            centre_generators: Vec::new(),
            index_before: None,
            index_after: index,
            terminal: false,
            quotient: None,
            quotient_error: None,
        }],
        complete: true,
    };
    let mut queue = VecDeque::from([0usize]);
    while let Some(id) = queue.pop_front() {
        if tree.nodes[id].step + 1 > cfg.max_steps {
            tree.complete = false;
            return Err(RunError::Budget(Box::new(tree)));
        }
        let parent = tree.nodes[id].chart.clone();
        let (centre, charts) = modify(&parent, ModKind::I)?;
        let gens = centre.generators.iter().map(|g| parent.embed(g)).collect();
        for child in push_children(&mut tree, id, ModKind::I, gens, charts)? {
            if tree.nodes[child].index_after.e == IndexE::Infinite {
                finish_terminal(&mut tree.nodes[child], cfg)?;
                continue;
            }
            if tree.nodes[child].step + 1 > cfg.max_steps {
                tree.complete = false;
                return Err(RunError::Budget(Box::new(tree)));
            }
            let chart = tree.nodes[child].chart.clone();
            let (centre, charts) = modify(&chart, ModKind::II)?;
            let gens = centre.generators.iter().map(|g| chart.embed(g)).collect();
            queue.extend(push_children(&mut tree, child, ModKind::II, gens, charts)?);
        }
    }
    Ok(tree)
}
