//! JSON instance files, chart-tree records and the dot rendering.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use unistab_algebra::{parse_poly, GbLimits, Poly, Rational, VarTable};

use crate::cone::{ConeInstance, GradedAlgebra, LndAction, SliceData};
use crate::driver::{ChartTree, TreeNode};
use crate::error::{CoreError, Result};
use crate::fitting::{IndexE, IndexPair};
use crate::quotient::QuotientPresentation;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarEntry {
    pub name: String,
    pub degree: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationEntry {
    #[serde(default)]
    pub images: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub w: u32,
    pub r: usize,
    pub variables: Vec<VarEntry>,
    #[serde(default)]
    pub relations: Vec<String>,
    #[serde(default)]
    pub derivations: Vec<DerivationEntry>,
}

impl InstanceFile {
    pub fn from_instance(inst: &ConeInstance) -> Self {
        let table = inst.table();
        let variables =
            (0..table.len()).map(|i| VarEntry { name: table.name(i).to_string(), degree: table.weight(i) }).collect();
        let relations = inst.algebra().relations().generators().iter().map(|g| g.to_string()).collect();
        let derivations = inst
            .action()
            .images()
            .iter()
            .map(|row| DerivationEntry {
                images: row
                    .iter()
                    .enumerate()
                    .filter(|(_, p)| !p.is_zero())
                    .map(|(j, p)| (table.name(j).to_string(), p.to_string()))
                    .collect(),
            })
            .collect();
        InstanceFile { w: inst.w(), r: inst.r(), variables, relations, derivations }
    }

    pub fn to_instance(&self, limits: GbLimits) -> Result<ConeInstance> {
        if self.derivations.len() != self.r {
            return Err(CoreError::InvalidInstance(format!(
                "r = {} but {} derivations are given",
                self.r,
                self.derivations.len()
            )));
        }
        let table = Arc::new(VarTable::new(self.variables.iter().map(|v| (v.name.clone(), v.degree)))?);
        let parse = |what: &str, s: &str| {
            parse_poly(s, &table).map_err(|e| CoreError::InvalidInstance(format!("{what} `{s}`: {e}")))
        };
        let relations =
            self.relations.iter().enumerate().map(|(k, s)| parse(&format!("relation {}", k + 1), s)).collect::<Result<Vec<_>>>()?;
        let mut images = Vec::with_capacity(self.r);
        for (i, d) in self.derivations.iter().enumerate() {
            let mut row = vec![Poly::zero(&table); table.len()];
            for (name, s) in &d.images {
                let Some(j) = table.position(name) else {
                    return Err(CoreError::InvalidInstance(format!("derivation {} names unknown variable `{name}`", i + 1)));
                };
                row[j] = parse(&format!("image of {name} under derivation {}", i + 1), s)?;
            }
            images.push(row);
        }
        ConeInstance::new(GradedAlgebra::new(table, relations, limits), LndAction::new(self.w, images))
    }
}

pub fn parse_instance(text: &str, limits: GbLimits) -> Result<ConeInstance> {
    let file: InstanceFile =
        serde_json::from_str(text).map_err(|e| CoreError::InvalidInstance(format!("malformed instance file: {e}")))?;
    file.to_instance(limits)
}

pub fn instance_to_json(inst: &ConeInstance) -> String {
    serde_json::to_string_pretty(&InstanceFile::from_instance(inst)).expect("serialisable")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexRecord {
    pub d: u32,
    /// A number, or the string `"inf"`.
    pub e: Value,
}

impl From<IndexPair> for IndexRecord {
    fn from(p: IndexPair) -> Self {
        let e = match p.e {
            IndexE::Finite(e) => Value::from(e),
            IndexE::Infinite => Value::from("inf"),
        };
        IndexRecord { d: p.d, e }
    }
}

impl IndexRecord {
    pub fn to_pair(&self) -> Option<IndexPair> {
        match &self.e {
            Value::String(s) if s == "inf" => Some(IndexPair::infinite(self.d)),
            Value::Number(n) => n.as_u64().map(|e| IndexPair::finite(self.d, e)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartVariable {
    pub name: String,
    pub degree: u32,
    pub embedding: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SliceRecord {
    pub betas: Vec<Vec<String>>,
    pub elements: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantRecord {
    pub name: String,
    pub degree: u64,
    pub poly: String,
    pub embedding: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuotientRecord {
    pub slice: SliceRecord,
    pub generators: Vec<InvariantRecord>,
    pub relations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeRecord {
    pub id: usize,
    pub label: String,
    pub parent: Option<usize>,
    pub step: u32,
    pub mod_type: Option<String>,
    pub identity: bool,
    pub centre_generators: Vec<String>,
    pub denominator: Option<String>,
    pub index_before: Option<IndexRecord>,
    pub index_after: IndexRecord,
    pub variables: Vec<ChartVariable>,
    pub relations: Vec<String>,
    pub derivations: Vec<DerivationEntry>,
    pub terminal: bool,
    pub quotient: Option<QuotientRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quotient_error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeRecord {
    pub root: InstanceFile,
    pub nodes: Vec<NodeRecord>,
    pub terminals: Vec<usize>,
    pub complete: bool,
}

fn rational_string(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

pub fn slice_record(slice: &SliceData) -> SliceRecord {
    SliceRecord {
        betas: slice.betas.iter().map(|b| b.iter().map(rational_string).collect()).collect(),
        elements: slice.slices.iter().map(|p| p.to_string()).collect(),
    }
}

/// `embed` maps a chart polynomial to its root-coordinate string.
pub fn quotient_record(q: &QuotientPresentation, embed: impl Fn(&Poly) -> String) -> QuotientRecord {
    QuotientRecord {
        slice: slice_record(&q.slice),
        generators: q
            .generators
            .iter()
            .map(|g| InvariantRecord { name: g.name.clone(), degree: g.degree, poly: g.poly.to_string(), embedding: embed(&g.poly) })
            .collect(),
        relations: q.relations.generators().iter().map(|g| g.to_string()).collect(),
    }
}

fn node_record(node: &TreeNode) -> NodeRecord {
    let chart = &node.chart;
    let inst = InstanceFile::from_instance(&chart.instance);
    let variables = inst
        .variables
        .iter()
        .zip(&chart.embedding)
        .map(|(v, e)| ChartVariable { name: v.name.clone(), degree: v.degree, embedding: e.to_string() })
        .collect();
    NodeRecord {
        id: node.id,
        label: chart.label.clone(),
        parent: node.parent,
        step: node.step,
        mod_type: node.mod_type.map(|k| k.to_string()),
        identity: chart.identity,
        centre_generators: node.centre_generators.iter().map(|f| f.to_string()).collect(),
        denominator: chart.denominator.as_ref().map(|f| f.to_string()),
        index_before: node.index_before.map(IndexRecord::from),
        index_after: node.index_after.into(),
        variables,
        relations: inst.relations,
        derivations: inst.derivations,
        terminal: node.terminal,
        quotient: node.quotient.as_ref().map(|q| quotient_record(q, |p| chart.embed(p).to_string())),
        quotient_error: node.quotient_error.clone(),
    }
}

pub fn tree_record(tree: &ChartTree) -> TreeRecord {
    TreeRecord {
        root: InstanceFile::from_instance(&tree.root),
        nodes: tree.nodes.iter().map(node_record).collect(),
        terminals: tree.terminals(),
        complete: tree.complete,
    }
}

pub fn tree_to_json(tree: &ChartTree) -> String {
    serde_json::to_string_pretty(&tree_record(tree)).expect("serialisable")
}

pub fn parse_tree(text: &str) -> Result<TreeRecord> {
    serde_json::from_str(text).map_err(|e| CoreError::InvalidInstance(format!("malformed chart tree: {e}")))
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Tree shape only: one box per chart, edges labelled by modification type.
pub fn tree_to_dot(tree: &ChartTree) -> String {
    let mut out = String::from("digraph charts {\n  node [shape=box];\n");
    for n in &tree.nodes {
        let shape = if n.terminal { ", peripheries=2" } else { "" };
        let _ = writeln!(
            out,
            "  n{} [label=\"{}\\nstep {} {}\"{shape}];",
            n.id,
            dot_escape(&n.chart.label),
            n.step,
            n.index_after
        );
    }
    for n in &tree.nodes {
        if let (Some(p), Some(k)) = (n.parent, n.mod_type) {
            let style = if n.chart.identity { ", style=dashed" } else { "" };
            let _ = writeln!(out, "  n{p} -> n{} [label=\"{k}\"{style}];", n.id);
        }
    }
    out.push_str("}\n");
    out
}
