//! Parametrised instances used throughout the tests.

use std::sync::Arc;

use unistab_algebra::{GbLimits, Poly, VarTable};

use crate::cone::{ConeInstance, GradedAlgebra, LndAction};
use crate::error::{CoreError, Result};

/// Six variables `a11, a21, a22, e, f1, f2` of weights `(0, ρ, ρ, σ, w, ρ+w)`,
/// with `ξ1: f1 ↦ a11, f2 ↦ a21` and `ξ2: f2 ↦ a22`.
pub fn gen_working_example(rho: u32, sigma: u32, w: u32) -> Result<ConeInstance> {
    if !(0 < sigma && sigma < rho) {
        return Err(CoreError::InvalidInstance(format!("need 0 < sigma < rho, got sigma={sigma}, rho={rho}")));
    }
    if w == 0 {
        return Err(CoreError::InvalidInstance("w must be positive".into()));
    }
    let table = Arc::new(VarTable::new([
        ("a11", 0),
        ("a21", rho),
        ("a22", rho),
        ("e", sigma),
        ("f1", w),
        ("f2", rho + w),
    ])?);
    let v = |n: &str| Poly::named(&table, n);
    let zero = Poly::zero(&table);
    let xi1 = vec![zero.clone(), zero.clone(), zero.clone(), zero.clone(), v("a11"), v("a21")];
    let xi2 = vec![zero.clone(), zero.clone(), zero.clone(), zero.clone(), zero.clone(), v("a22")];
    let algebra = GradedAlgebra::new(table, Vec::new(), GbLimits::default());
    ConeInstance::new(algebra, LndAction::new(w, vec![xi1, xi2]))
}

/// The affine chart of the Grassmannian model with pinned columns `pinned`
/// (1-based): variables `a{i}_{j}` of weight 0 for the free entries of a
/// `b × r` matrix and `f{i}` of weight 1, with `ξ_j(f_i) = a_{i,j}`.
pub fn gen_grassmann_instance(r: usize, b: usize, pinned: &[usize]) -> Result<ConeInstance> {
    if b > r {
        return Err(CoreError::InvalidInstance(format!("need b <= r, got b={b}, r={r}")));
    }
    if pinned.len() != b {
        return Err(CoreError::InvalidInstance(format!("expected {b} pinned columns, got {}", pinned.len())));
    }
    let mut sorted = pinned.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != b || sorted.iter().any(|&c| c == 0 || c > r) {
        return Err(CoreError::InvalidInstance(format!("pinned columns {pinned:?} must be distinct in 1..={r}")));
    }
    let mut vars: Vec<(String, u32)> = Vec::new();
    for i in 1..=b {
        for j in 1..=r {
            if !pinned.contains(&j) {
                vars.push((format!("a{i}_{j}"), 0));
            }
        }
    }
    for i in 1..=b {
        vars.push((format!("f{i}"), 1));
    }
    let table = Arc::new(VarTable::new(vars)?);
    let mut images = vec![vec![Poly::zero(&table); table.len()]; r];
    for i in 1..=b {
        let f = table.position(&format!("f{i}")).expect("f variable");
        for j in 1..=r {
            images[j - 1][f] = match pinned.iter().position(|&c| c == j) {
                Some(k) if k + 1 == i => Poly::one(&table),
                Some(_) => Poly::zero(&table),
                None => Poly::named(&table, &format!("a{i}_{j}")),
            };
        }
    }
    let algebra = GradedAlgebra::new(table, Vec::new(), GbLimits::default());
    ConeInstance::new(algebra, LndAction::new(1, images))
}
