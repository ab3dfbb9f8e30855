//! The UU test, slices and the invariant-ring presentation of the quotient.

use std::sync::Arc;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use unistab_algebra::ideal::cofactor_divide;
use unistab_algebra::matrix::subsets;
use unistab_algebra::{Ideal, Monomial, Poly, PolyMatrix, Rational, VarTable};

use crate::cone::{ConeInstance, SliceData};
use crate::error::{CoreError, Result};
use crate::fitting::{fitting_report, reduced_generators};
use crate::membership::{generator_table, poly_membership, Membership};

pub const DEFAULT_BUDGET: usize = 1000;
pub const DEFAULT_BOUND: u32 = 12;

#[derive(Debug, Clone)]
pub struct InvariantGenerator {
    pub name: String,
    pub poly: Poly,
    pub degree: u64,
}

#[derive(Debug, Clone)]
pub struct QuotientPresentation {
    pub generators: Vec<InvariantGenerator>,
    /// Table of the generator names, with their weights.
    pub table: Arc<VarTable>,
    /// Kernel of `k[generators] → A`.
    pub relations: Ideal,
    pub slice: SliceData,
}

/// `Fit_{d−1} = 0` and `1 ∈ Fit_d`.
pub fn check_uu(inst: &ConeInstance) -> Result<bool> {
    let report = fitting_report(inst)?;
    let d = report.index.d as usize;
    if d > 0 && !reduced_generators(inst, &report.fitting[d - 1])?.is_empty() {
        return Ok(false);
    }
    Ok(report.fitting[d].is_unit()?)
}

/// Monomials in the positive-weight variables of weight exactly `w`, variables first.
fn weight_w_monomials(inst: &ConeInstance) -> Vec<Poly> {
    let table = inst.table();
    let pos = inst.algebra().positive_vars();
    let w = inst.w() as u64;
    let mut out = Vec::new();
    fn go(table: &Arc<VarTable>, pos: &[usize], i: usize, left: u64, cur: &mut Vec<u32>, out: &mut Vec<Poly>) {
        if left == 0 {
            out.push(Poly::monomial(table, Monomial::from_exponents(cur.clone()), Rational::from_integer(1.into())));
            return;
        }
        if i == pos.len() {
            return;
        }
        let wt = table.weight(pos[i]) as u64;
        let mut e = 0u64;
        while e * wt <= left {
            cur[pos[i]] = e as u32;
            go(table, pos, i + 1, left - e * wt, cur, out);
            e += 1;
        }
        cur[pos[i]] = 0;
    }
    go(table, &pos, 0, w, &mut vec![0; table.len()], &mut out);
    out.sort_by_key(|p| (p.total_degree(), p.as_variable().unwrap_or(usize::MAX)));
    out
}

struct Candidate {
    betas: Vec<Vec<Rational>>,
    elements: Vec<Poly>,
}

fn unit_vector(r: usize, k: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); r];
    v[k] = Rational::from_integer(1.into());
    v
}

/// Tries one candidate; returns the normalised slice when its determinant is a unit.
fn try_candidate(inst: &ConeInstance, c: &Candidate) -> Result<Option<SliceData>> {
    let table = inst.table();
    let b = c.elements.len();
    let mut d = PolyMatrix::zeros(table, b, b);
    for i in 0..b {
        for j in 0..b {
            d.set(i, j, inst.apply_combination(&c.betas[i], &c.elements[j])?);
        }
    }
    let det = inst.algebra().reduce(&d.det())?;
    if det.is_zero() || !inst.algebra().ideal([det.clone()]).is_unit()? {
        return Ok(None);
    }
    let inv = cofactor_divide(&Poly::one(table), &det, inst.algebra().relations())?;
    let adj = d.adjugate();
    let mut slices = Vec::with_capacity(b);
    for j in 0..b {
        let mut f = Poly::zero(table);
        for (k, e) in c.elements.iter().enumerate() {
            f = &f + &(e * adj.get(k, j));
        }
        slices.push(inst.algebra().reduce(&(&f * &inv))?);
    }
    Ok(Some(SliceData { betas: c.betas.clone(), slices }))
}

/// Directions `β_1..β_b` and weight-`w` elements with `β_i(f_j) = δ_ij`.
pub fn find_slice(inst: &ConeInstance, seed: u64, budget: usize) -> Result<SliceData> {
    if !check_uu(inst)? {
        return Err(CoreError::Precondition("the UU condition fails; no slice can exist".into()));
    }
    let r = inst.r();
    let d = fitting_report(inst)?.index.d as usize;
    let b = r - d;
    if b == 0 {
        return Ok(SliceData { betas: Vec::new(), slices: Vec::new() });
    }
    let pool = weight_w_monomials(inst);
    if pool.is_empty() {
        return Err(CoreError::SliceNotFound(format!("no elements of weight {} exist", inst.w())));
    }
    let mut tried = 0usize;
    'outer: for dirs in subsets(r, b) {
        let betas: Vec<Vec<Rational>> = dirs.iter().map(|&k| unit_vector(r, k)).collect();
        for pick in subsets(pool.len(), b) {
            if tried >= budget {
                break 'outer;
            }
            tried += 1;
            let cand = Candidate { betas: betas.clone(), elements: pick.iter().map(|&k| pool[k].clone()).collect() };
            if let Some(s) = try_candidate(inst, &cand)? {
                return Ok(s);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while tried < budget {
        tried += 1;
        let betas = (0..b).map(|_| (0..r).map(|_| Rational::from_integer(rng.gen_range(-3i64..=3).into())).collect()).collect();
        let elements = (0..b)
            .map(|_| {
                pool.iter().fold(Poly::zero(inst.table()), |acc, m| {
                    &acc + &m.scale(&Rational::from_integer(rng.gen_range(-2i64..=2).into()))
                })
            })
            .collect();
        if let Some(s) = try_candidate(inst, &Candidate { betas, elements })? {
            return Ok(s);
        }
    }
    Err(CoreError::SliceNotFound(format!(
        "no unit determinant among {tried} candidates; localise the degree-0 part and retry"
    )))
}

/// Invariant generators, their relations, and the reconstruction check.
pub fn invariant_ring(inst: &ConeInstance, slice: &SliceData, bound: u32) -> Result<QuotientPresentation> {
    let table = inst.table();
    let mut generators = Vec::new();
    for v in 0..table.len() {
        let x = Poly::var(table, v);
        if table.weight(v) == 0 {
            generators.push(InvariantGenerator { name: table.name(v).to_string(), poly: x, degree: 0 });
            continue;
        }
        let hat = inst.hat_projection(slice, &x)?;
        if hat.is_zero() {
            continue;
        }
        let name = if hat == x { table.name(v).to_string() } else { format!("hat_{}", table.name(v)) };
        generators.push(InvariantGenerator { name, poly: hat, degree: table.weight(v) as u64 });
    }
    for g in &generators {
        for i in 0..inst.r() {
            if !inst.apply_derivation(i, &g.poly)?.is_zero() {
                return Err(CoreError::Internal(format!("generator {} is not invariant under xi{}", g.name, i + 1)));
            }
        }
    }
    let ztable = Arc::new(VarTable::new(generators.iter().map(|g| (g.name.clone(), g.degree as u32)))?);
    let images: Vec<Poly> = generators.iter().map(|g| g.poly.clone()).collect();
    let relations = inst.algebra().relations().map_preimage(&ztable, &images)?;

    // Every variable must come back from the invariants and the slice.
    let mut all = images.clone();
    all.extend(slice.slices.iter().cloned());
    let weights: Vec<u64> = all.iter().map(|p| p.weighted_degree().value().unwrap_or(0)).collect();
    let ptable = generator_table("p", &weights);
    for v in 0..table.len() {
        let m = poly_membership(&Poly::var(table, v), &all, &ptable, inst.algebra().relations(), bound)?;
        if m == Membership::Undetermined {
            return Err(CoreError::Internal(format!(
                "{} is not recovered from the invariants and the slice within degree {bound}",
                table.name(v)
            )));
        }
    }
    Ok(QuotientPresentation { generators, table: ztable, relations, slice: slice.clone() })
}
