use std::cmp::Ordering;
use std::fmt;

use unistab_algebra::{Ideal, Poly, PolyMatrix, Rational};

use crate::cone::{evaluate_matrix, rank, ConeInstance};
use crate::error::{CoreError, Result};

/// The second component of the index: a positive degree or infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IndexE {
    Finite(u64),
    Infinite,
}

impl PartialOrd for IndexE {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for IndexE {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (IndexE::Finite(a), IndexE::Finite(b)) => a.cmp(b),
            (IndexE::Finite(_), IndexE::Infinite) => Ordering::Less,
            (IndexE::Infinite, IndexE::Finite(_)) => Ordering::Greater,
            (IndexE::Infinite, IndexE::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for IndexE {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexE::Finite(e) => write!(f, "{e}"),
            IndexE::Infinite => write!(f, "inf"),
        }
    }
}

/// `(d(π), e(π))`, ordered lexicographically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexPair {
    pub d: u32,
    pub e: IndexE,
}

impl IndexPair {
    pub fn new(d: u32, e: IndexE) -> Self {
        IndexPair { d, e }
    }

    pub fn finite(d: u32, e: u64) -> Self {
        IndexPair { d, e: IndexE::Finite(e) }
    }

    pub fn infinite(d: u32) -> Self {
        IndexPair { d, e: IndexE::Infinite }
    }
}

impl fmt::Display for IndexPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.d, self.e)
    }
}

/// Presentation matrix, all Fitting ideals and the index of an instance.
#[derive(Debug, Clone)]
pub struct FittingReport {
    pub matrix: PolyMatrix,
    /// Rows of `matrix` correspond to these variables.
    pub rows: Vec<usize>,
    /// `fitting[d]` for `d = 0..=r`, relations included.
    pub fitting: Vec<Ideal>,
    pub index: IndexPair,
}

/// Rows: positive-weight variables; columns: directions; entries `ξ_i(x_j)` mod R.
pub fn presentation_matrix(inst: &ConeInstance) -> Result<(PolyMatrix, Vec<usize>)> {
    let table = inst.table();
    let rows = inst.algebra().positive_vars();
    let mut m = PolyMatrix::zeros(table, rows.len(), inst.r());
    for (a, &j) in rows.iter().enumerate() {
        for i in 0..inst.r() {
            m.set(a, i, inst.apply_derivation(i, &Poly::var(table, j))?);
        }
    }
    Ok((m, rows))
}

/// `Fit_d` as an ideal containing the relations. `d < 0` gives the zero ideal of `A`.
pub fn fitting_ideal(inst: &ConeInstance, d: i64) -> Result<Ideal> {
    let (m, _) = presentation_matrix(inst)?;
    Ok(fitting_from_matrix(inst, &m, d))
}

fn fitting_from_matrix(inst: &ConeInstance, m: &PolyMatrix, d: i64) -> Ideal {
    let r = inst.r() as i64;
    if d < 0 {
        return inst.algebra().ideal([]);
    }
    let minors = m.minors(r - d);
    inst.algebra().ideal(minors.generators().iter().cloned())
}

/// Generators of `Fit_d` reduced modulo the relations, zeros dropped.
pub fn reduced_generators(inst: &ConeInstance, fit: &Ideal) -> Result<Vec<Poly>> {
    let rel_count = inst.algebra().relations().generators().len();
    let mut out = Vec::new();
    for g in &fit.generators()[rel_count..] {
        let r = inst.algebra().reduce(g)?.primitive();
        if !r.is_zero() && !out.contains(&r) {
            out.push(r);
        }
    }
    Ok(out)
}

pub fn fitting_report(inst: &ConeInstance) -> Result<FittingReport> {
    let (matrix, rows) = presentation_matrix(inst)?;
    let r = inst.r() as i64;
    let fitting: Vec<Ideal> = (0..=r).map(|d| fitting_from_matrix(inst, &matrix, d)).collect();
    let index = index_from(inst, &fitting)?;
    Ok(FittingReport { matrix, rows, fitting, index })
}

fn index_from(inst: &ConeInstance, fitting: &[Ideal]) -> Result<IndexPair> {
    for (d, fit) in fitting.iter().enumerate() {
        let gens = reduced_generators(inst, fit)?;
        let escapes = gens.iter().any(|g| g.weighted_degree().value() == Some(0));
        if !escapes {
            continue;
        }
        if d == 0 {
            return Ok(IndexPair::infinite(0));
        }
        let below = reduced_generators(inst, &fitting[d - 1])?;
        let e = below.iter().filter_map(|g| g.weighted_degree().value()).min();
        return Ok(match e {
            Some(e) => IndexPair::finite(d as u32, e),
            None => IndexPair::infinite(d as u32),
        });
    }
    Err(CoreError::Precondition("no Fitting ideal escapes the positive part; is the algebra trivial?".into()))
}

pub fn compute_index(inst: &ConeInstance) -> Result<IndexPair> {
    Ok(fitting_report(inst)?.index)
}

/// `r − rank M(x)` at a rational point of the variety.
pub fn stab_dim_at_point(inst: &ConeInstance, point: &[Rational]) -> Result<usize> {
    let table = inst.table();
    if point.len() != table.len() {
        return Err(CoreError::Precondition(format!("point has {} coordinates, expected {}", point.len(), table.len())));
    }
    for g in inst.algebra().relations().generators() {
        if !num_traits::Zero::is_zero(&g.eval(point)) {
            return Err(CoreError::Precondition(format!("point is not on the variety: {g} does not vanish")));
        }
    }
    let rows = inst.algebra().positive_vars();
    let m = evaluate_matrix(inst, &rows, point);
    Ok(inst.r() - rank(m))
}
