use std::collections::HashMap;
use std::sync::Arc;

use crate::error::AlgebraError;

/// Ordered list of polynomial variables together with their grading weights.
///
/// Variable `0` is the largest variable in every monomial order. The table is
/// shared through an [`Arc`] by every polynomial built over it.
#[derive(Debug, Clone)]
pub struct VarTable {
    names: Vec<String>,
    weights: Vec<u32>,
    index: HashMap<String, usize>,
}

impl PartialEq for VarTable {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.weights == other.weights
    }
}

impl Eq for VarTable {}

impl VarTable {
    pub fn new<S: Into<String>>(vars: impl IntoIterator<Item = (S, u32)>) -> Result<Self, AlgebraError> {
        let mut names = Vec::new();
        let mut weights = Vec::new();
        let mut index = HashMap::new();
        for (name, weight) in vars {
            let name = name.into();
            if !is_identifier(&name) {
                return Err(AlgebraError::InvalidVariable(name));
            }
            if index.insert(name.clone(), names.len()).is_some() {
                return Err(AlgebraError::DuplicateVariable(name));
            }
            names.push(name);
            weights.push(weight);
        }
        Ok(Self { names, weights, index })
    }

    /// Same as [`VarTable::new`] but panics on invalid input; for tests and generators.
    pub fn from_pairs(vars: &[(&str, u32)]) -> Arc<Self> {
        Arc::new(Self::new(vars.iter().map(|&(n, w)| (n, w))).expect("valid variable table"))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn weight(&self, i: usize) -> u32 {
        self.weights[i]
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Returns a name not present in the table, derived from `base`.
    pub fn fresh_name(&self, base: &str) -> String {
        if self.position(base).is_none() {
            return base.to_string();
        }
        (2..)
            .map(|k| format!("{base}_{k}"))
            .find(|candidate| self.position(candidate).is_none())
            .unwrap()
    }

    /// A new table with `extra` variables appended after the existing ones.
    pub fn extended<S: Into<String>>(
        &self,
        extra: impl IntoIterator<Item = (S, u32)>,
    ) -> Result<Self, AlgebraError> {
        let existing = self.names.iter().cloned().zip(self.weights.iter().copied());
        let added: Vec<(String, u32)> = extra.into_iter().map(|(n, w)| (n.into(), w)).collect();
        Self::new(existing.chain(added))
    }

    /// A new table consisting of the variables at `keep`, in that order.
    pub fn subset(&self, keep: &[usize]) -> Self {
        Self::new(keep.iter().map(|&i| (self.names[i].clone(), self.weights[i])))
            .expect("subset of a valid table is valid")
    }
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => chars.all(|c| c.is_ascii_alphanumeric() || c == '_'),
        _ => false,
    }
}
