//! Bounded subalgebra membership by graded linear algebra.
//!
//! A target `t` lies in `k[g_1..g_m]` if it is a linear combination of the
//! products `g^α` of matching weight. Products are enumerated by total degree
//! along the ladder 1, 2, 3, 4, 6, 8, 12, ... up to the bound.

use std::collections::HashMap;
use std::sync::Arc;

use unistab_algebra::{Fraction, Ideal, LinearSpan, Monomial, Poly, VarTable};

use crate::error::{CoreError, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Membership {
    /// The target equals this polynomial in the generators.
    Yes(Poly),
    Undetermined,
}

impl Membership {
    pub fn is_yes(&self) -> bool {
        matches!(self, Membership::Yes(_))
    }

    pub fn expression(&self) -> Option<&Poly> {
        match self {
            Membership::Yes(p) => Some(p),
            Membership::Undetermined => None,
        }
    }
}

const LADDER: [u32; 7] = [1, 2, 3, 4, 6, 8, 12];

fn ladder(bound: u32) -> Vec<u32> {
    let mut out: Vec<u32> = LADDER.iter().copied().filter(|&k| k < bound).collect();
    let mut k = 12;
    while k < bound {
        k += 4;
        if k < bound {
            out.push(k);
        }
    }
    out.push(bound);
    out
}

/// Exponent vectors with `Σ α_i w_i = weight` and `lo < |α| ≤ hi`.
fn exponents(weights: &[i64], weight: i64, lo: u32, hi: u32) -> Vec<Vec<u32>> {
    fn go(weights: &[i64], i: usize, left_w: i64, left_d: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == weights.len() {
            if left_w == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let w = weights[i];
        let mut e = 0;
        loop {
            let used = w * e as i64;
            if w > 0 && used > left_w {
                break;
            }
            if e > left_d {
                break;
            }
            cur.push(e);
            go(weights, i + 1, left_w - used, left_d - e, cur, out);
            cur.pop();
            e += 1;
        }
    }
    let mut out = Vec::new();
    go(weights, 0, weight, hi, &mut Vec::new(), &mut out);
    out.retain(|a| a.iter().sum::<u32>() > lo || (lo == 0 && a.iter().all(|&e| e == 0)));
    out
}

/// Generic engine: `value(α)` gives the vector of `g^α`; `target` the vector of `t`.
fn search(
    ztable: &Arc<VarTable>,
    weights: &[i64],
    weight: i64,
    bound: u32,
    target: &Poly,
    mut value: impl FnMut(&[u32]) -> Result<Poly>,
) -> Result<Membership> {
    if weights.iter().any(|&w| w < 0) {
        return Err(CoreError::Precondition("generators of negative weight".into()));
    }
    let mut span = LinearSpan::new();
    let mut ids: Vec<Vec<u32>> = Vec::new();
    let mut prev: Option<u32> = None;
    for k in ladder(bound.max(1)) {
        let lo = prev.map_or(0, |p| p);
        let batch = if prev.is_none() {
            // Degree 0 too: the constants.
            let mut b = exponents(weights, weight, 0, k);
            b.sort_by_key(|a| a.iter().sum::<u32>());
            b
        } else {
            exponents(weights, weight, lo, k)
        };
        for alpha in batch {
            let v = value(&alpha)?;
            span.insert(&v);
            ids.push(alpha);
        }
        let (rem, witness) = span.reduce(target);
        if rem.is_zero() {
            let mut expr = Poly::zero(ztable);
            for (id, c) in witness {
                let m = Monomial::from_exponents(ids[id].clone());
                expr = &expr + &Poly::monomial(ztable, m, c);
            }
            return Ok(Membership::Yes(expr));
        }
        prev = Some(k);
    }
    Ok(Membership::Undetermined)
}

/// Membership of `target` in `k[gens]` inside `A = k[x]/R`, with `R = modulo`.
/// The expression lives over `ztable`, whose variables stand for `gens`.
pub fn poly_membership(target: &Poly, gens: &[Poly], ztable: &Arc<VarTable>, modulo: &Ideal, bound: u32) -> Result<Membership> {
    if gens.len() != ztable.len() {
        return Err(CoreError::Internal("generator table size mismatch".into()));
    }
    let target = modulo.normal_form(target)?;
    let Some(weight) = homogeneous_weight(&target) else {
        return Err(CoreError::Precondition(format!("target {target} is not homogeneous")));
    };
    let mut weights = Vec::new();
    for g in gens {
        let g = modulo.normal_form(g)?;
        weights.push(homogeneous_weight(&g).unwrap_or(if g.is_zero() { 0 } else { -1 }));
    }
    let mut cache: HashMap<Vec<u32>, Poly> = HashMap::new();
    let one = Poly::one(target.table());
    search(ztable, &weights, weight, bound, &target, |alpha| {
        let v = product(alpha, &mut cache, &one, &|a: &Poly, i: usize| modulo.normal_form(&(a * &gens[i])))?;
        Ok(v)
    })
}

fn homogeneous_weight(p: &Poly) -> Option<i64> {
    if p.is_zero() {
        return Some(0);
    }
    p.weighted_degree().value().map(|w| w as i64)
}

fn product(
    alpha: &[u32],
    cache: &mut HashMap<Vec<u32>, Poly>,
    one: &Poly,
    times: &dyn Fn(&Poly, usize) -> Result<Poly, unistab_algebra::AlgebraError>,
) -> Result<Poly> {
    if let Some(v) = cache.get(alpha) {
        return Ok(v.clone());
    }
    let Some(i) = alpha.iter().rposition(|&e| e > 0) else {
        return Ok(one.clone());
    };
    let mut smaller = alpha.to_vec();
    smaller[i] -= 1;
    let base = product(&smaller, cache, one, times)?;
    let v = times(&base, i)?;
    cache.insert(alpha.to_vec(), v.clone());
    Ok(v)
}

/// Exponent offset used to store Laurent polynomials as ordinary ones.
const SHIFT: u32 = 1 << 20;

/// `N/m` with `m` a monomial, stored as `N` shifted by `SHIFT − m`.
fn laurent(f: &Fraction) -> Result<Poly> {
    let den = f.denominator();
    if !den.is_monomial() {
        return Err(CoreError::Precondition(format!("denominator of {f} is not a monomial")));
    }
    let (m, c) = &den.terms()[0];
    let scale = c.recip();
    let terms = f.numerator().terms().iter().map(|(n, k)| {
        let e: Vec<u32> = n.exponents().iter().zip(m.exponents()).map(|(a, b)| a + SHIFT - b).collect();
        (Monomial::from_exponents(e), k * &scale)
    });
    Ok(Poly::from_terms(f.table(), terms))
}

/// Membership of a rational function in `k[gens]`, all in root coordinates.
/// Denominators must be monomials.
pub fn algebra_membership(target: &Fraction, gens: &[Fraction], ztable: &Arc<VarTable>, bound: u32) -> Result<Membership> {
    if gens.len() != ztable.len() {
        return Err(CoreError::Internal("generator table size mismatch".into()));
    }
    let Some(weight) = frac_weight(target) else {
        return Err(CoreError::Precondition(format!("target {target} is not homogeneous")));
    };
    let weights: Vec<i64> = gens.iter().map(|g| frac_weight(g).unwrap_or(-1)).collect();
    let goal = laurent(target)?;
    let mut cache: HashMap<Vec<u32>, Fraction> = HashMap::new();
    let one = Fraction::one(target.table());
    search(ztable, &weights, weight, bound, &goal, |alpha| {
        let v = frac_product(alpha, &mut cache, &one, gens);
        laurent(&v)
    })
}

fn frac_weight(f: &Fraction) -> Option<i64> {
    if f.is_zero() {
        Some(0)
    } else {
        f.weighted_degree()
    }
}

fn frac_product(alpha: &[u32], cache: &mut HashMap<Vec<u32>, Fraction>, one: &Fraction, gens: &[Fraction]) -> Fraction {
    if let Some(v) = cache.get(alpha) {
        return v.clone();
    }
    let Some(i) = alpha.iter().rposition(|&e| e > 0) else {
        return one.clone();
    };
    let mut smaller = alpha.to_vec();
    smaller[i] -= 1;
    let v = frac_product(&smaller, cache, one, gens).mul(&gens[i]);
    cache.insert(alpha.to_vec(), v.clone());
    v
}

/// A table `p1..pm` of the given weights for naming generators.
pub fn generator_table(prefix: &str, weights: &[u64]) -> Arc<VarTable> {
    Arc::new(
        VarTable::new(weights.iter().enumerate().map(|(i, &w)| (format!("{prefix}{}", i + 1), w as u32)))
            .expect("generated names are distinct"),
    )
}
