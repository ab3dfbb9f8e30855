//! Presented graded algebras with a graded additive group action given by
//! commuting locally nilpotent derivations.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use unistab_algebra::{Degree, GbLimits, Ideal, Monomial, Poly, Rational, VarTable};

use crate::error::{CoreError, Result};

/// `A = k[x]/R` with the grading stored in the variable table.
#[derive(Clone, Debug)]
pub struct GradedAlgebra {
    table: Arc<VarTable>,
    relations: Ideal,
}

impl GradedAlgebra {
    pub fn new(table: Arc<VarTable>, relations: Vec<Poly>, limits: GbLimits) -> Self {
        let relations = Ideal::with_limits(&table, relations, limits);
        GradedAlgebra { table, relations }
    }

    pub fn table(&self) -> &Arc<VarTable> {
        &self.table
    }

    pub fn relations(&self) -> &Ideal {
        &self.relations
    }

    pub fn limits(&self) -> GbLimits {
        self.relations.limits()
    }

    /// Normal form modulo the relations.
    pub fn reduce(&self, p: &Poly) -> Result<Poly> {
        if self.relations.is_zero() {
            return Ok(p.clone());
        }
        Ok(self.relations.normal_form(p)?)
    }

    pub fn is_zero(&self, p: &Poly) -> Result<bool> {
        Ok(self.relations.contains(p)?)
    }

    /// The ideal of `A` generated by `gens`, stored with the relations included.
    pub fn ideal(&self, gens: impl IntoIterator<Item = Poly>) -> Ideal {
        self.relations.with_generators(gens)
    }

    pub fn degree_zero_vars(&self) -> Vec<usize> {
        (0..self.table.len()).filter(|&i| self.table.weight(i) == 0).collect()
    }

    pub fn positive_vars(&self) -> Vec<usize> {
        (0..self.table.len()).filter(|&i| self.table.weight(i) > 0).collect()
    }

    /// `A_{>0}`: generated by the positive-weight variables.
    pub fn positive_part(&self) -> Ideal {
        self.ideal(self.positive_vars().into_iter().map(|i| Poly::var(&self.table, i)))
    }

    /// A redundancy-free homogeneous generating set of `I` modulo the relations,
    /// sorted by weight. `I` must contain the relations and be homogeneous.
    pub fn minimal_generators(&self, ideal: &Ideal) -> Result<Vec<Poly>> {
        let mut cands = Vec::new();
        for g in ideal.basis()? {
            let r = self.reduce(&g)?;
            if !r.is_zero() {
                cands.push(r);
            }
        }
        cands.sort_by(|a, b| {
            let da = a.weighted_degree().value().unwrap_or(u64::MAX);
            let db = b.weighted_degree().value().unwrap_or(u64::MAX);
            da.cmp(&db)
                .then_with(|| a.total_degree().cmp(&b.total_degree()))
                .then_with(|| a.len().cmp(&b.len()))
                .then_with(|| unistab_algebra::MonomialOrder::GrevLex.cmp_mono(&b.terms()[0].0, &a.terms()[0].0))
        });
        let mut kept: Vec<Poly> = Vec::new();
        for g in cands {
            let so_far = self.ideal(kept.iter().cloned());
            if !so_far.contains(&g)? {
                kept.push(g.primitive());
            }
        }
        Ok(kept)
    }
}

/// Images `ξ_i(x_j)` of the variables under `r` commuting derivations.
#[derive(Clone, Debug)]
pub struct LndAction {
    w: u32,
    images: Vec<Vec<Poly>>,
}

impl LndAction {
    pub fn new(w: u32, images: Vec<Vec<Poly>>) -> Self {
        LndAction { w, images }
    }

    pub fn w(&self) -> u32 {
        self.w
    }

    pub fn r(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, i: usize, j: usize) -> &Poly {
        &self.images[i][j]
    }

    pub fn images(&self) -> &[Vec<Poly>] {
        &self.images
    }
}

/// A graded algebra together with the action; the data of an affine cone.
#[derive(Clone, Debug)]
pub struct ConeInstance {
    algebra: GradedAlgebra,
    action: LndAction,
}

/// Slice data `β_i = Σ_k betas[i][k] ξ_k`, `f_j` with `β_i(f_j) = δ_ij`.
#[derive(Clone, Debug, PartialEq)]
pub struct SliceData {
    pub betas: Vec<Vec<Rational>>,
    pub slices: Vec<Poly>,
}

impl SliceData {
    pub fn b(&self) -> usize {
        self.slices.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub axiom: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Outcome of [`ConeInstance::verify_action`]; failures are entries, not errors.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }

    fn record(&mut self, axiom: &'static str, problems: Vec<String>) {
        let passed = problems.is_empty();
        let detail = if passed { "ok".to_string() } else { problems.join("; ") };
        self.checks.push(CheckResult { axiom, passed, detail });
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.axiom, c.detail)?;
        }
        Ok(())
    }
}

fn factorial(n: u32) -> Rational {
    (1..=n).fold(Rational::one(), |acc, k| acc * Rational::from_integer(k.into()))
}

impl ConeInstance {
    /// Structural validation only; use [`ConeInstance::verify_action`] for the axioms.
    pub fn new(algebra: GradedAlgebra, action: LndAction) -> Result<Self> {
        let n = algebra.table.len();
        if action.w == 0 {
            return Err(CoreError::InvalidInstance("the weight w must be positive".into()));
        }
        for (i, row) in action.images.iter().enumerate() {
            if row.len() != n {
                return Err(CoreError::InvalidInstance(format!("derivation {} has {} images for {n} variables", i + 1, row.len())));
            }
            if row.iter().any(|p| p.table() != algebra.table()) {
                return Err(CoreError::InvalidInstance(format!("derivation {} uses a different variable table", i + 1)));
            }
        }
        Ok(ConeInstance { algebra, action })
    }

    pub fn algebra(&self) -> &GradedAlgebra {
        &self.algebra
    }

    pub fn action(&self) -> &LndAction {
        &self.action
    }

    pub fn table(&self) -> &Arc<VarTable> {
        &self.algebra.table
    }

    pub fn r(&self) -> usize {
        self.action.r()
    }

    pub fn w(&self) -> u32 {
        self.action.w
    }

    /// `ξ_i(p)` by the Leibniz rule, without reduction.
    fn derive_raw(&self, i: usize, p: &Poly) -> Poly {
        let mut acc = Poly::zero(self.table());
        for j in p.support() {
            let img = &self.action.images[i][j];
            if img.is_zero() {
                continue;
            }
            acc = &acc + &(&p.derivative(j) * img);
        }
        acc
    }

    /// `ξ_i(p)` reduced modulo the relations (`i` is zero-based).
    pub fn apply_derivation(&self, i: usize, p: &Poly) -> Result<Poly> {
        self.algebra.reduce(&self.derive_raw(i, p))
    }

    /// `β(p)` for `β = Σ_k c_k ξ_k`.
    pub fn apply_combination(&self, beta: &[Rational], p: &Poly) -> Result<Poly> {
        let mut acc = Poly::zero(self.table());
        for (k, c) in beta.iter().enumerate() {
            if !c.is_zero() {
                acc = &acc + &self.derive_raw(k, p).scale(c);
            }
        }
        self.algebra.reduce(&acc)
    }

    fn top_weight(&self, p: &Poly) -> u64 {
        let weights = self.table().weights();
        p.terms().iter().map(|(m, _)| m.weighted_degree(weights)).max().unwrap_or(0)
    }

    /// All nonzero iterated derivatives `D^n p` for the family `D` of size `count`,
    /// keyed by the multi-index `n`.
    fn iterated(&self, count: usize, p: &Poly, d: &dyn Fn(usize, &Poly) -> Result<Poly>) -> Result<Vec<(Vec<u32>, Poly)>> {
        let p = self.algebra.reduce(p)?;
        if p.is_zero() {
            return Ok(Vec::new());
        }
        let cap = self.top_weight(&p) / self.w() as u64 + 1;
        let mut out = vec![(vec![0u32; count], p)];
        let mut level: Vec<(Vec<u32>, Poly, usize)> = vec![(vec![0; count], out[0].1.clone(), 0)];
        let mut depth = 0u64;
        while !level.is_empty() {
            depth += 1;
            if depth > cap {
                return Err(CoreError::Precondition("derivation is not locally nilpotent (weight does not drop)".into()));
            }
            let mut next = Vec::new();
            for (n, v, first) in &level {
                for i in *first..count {
                    let dv = d(i, v)?;
                    if dv.is_zero() {
                        continue;
                    }
                    let mut m = n.clone();
                    m[i] += 1;
                    out.push((m.clone(), dv.clone()));
                    next.push((m, dv, i));
                }
            }
            level = next;
        }
        Ok(out)
    }

    /// Table of `A[u_1..u_r]`: the variables of `A` followed by fresh `u`s.
    pub fn coaction_table(&self) -> Arc<VarTable> {
        let mut t = (**self.table()).clone();
        for i in 1..=self.r() {
            let name = t.fresh_name(&format!("u{i}"));
            t = t.extended([(name, 0)]).expect("fresh name");
        }
        Arc::new(t)
    }

    /// Taylor expansion `Σ_n ξ^n(p)/n! u^n` over `coaction_table()`.
    pub fn coaction(&self, p: &Poly, ext: &Arc<VarTable>) -> Result<Poly> {
        let n = self.table().len();
        let lift: Vec<usize> = (0..n).collect();
        let mut acc = Poly::zero(ext);
        for (idx, v) in self.iterated(self.r(), p, &|i, q| self.apply_derivation(i, q))? {
            let mut e = vec![0; ext.len()];
            let mut denom = Rational::one();
            for (i, &k) in idx.iter().enumerate() {
                e[n + i] = k;
                denom *= factorial(k);
            }
            let u = Poly::monomial(ext, Monomial::from_exponents(e), denom.recip());
            acc = &acc + &(&v.remap(ext, &lift) * &u);
        }
        Ok(acc)
    }

    /// `ĥ = Σ_n (-1)^{|n|}/n! (β^n h) f^n`; killed by every `β_i`.
    pub fn hat_projection(&self, slice: &SliceData, h: &Poly) -> Result<Poly> {
        let b = slice.b();
        let terms = self.iterated(b, h, &|i, q| self.apply_combination(&slice.betas[i], q))?;
        let mut acc = Poly::zero(self.table());
        for (idx, v) in terms {
            let mut coeff = Rational::one();
            let mut t = v;
            for (i, &k) in idx.iter().enumerate() {
                if k > 0 {
                    coeff /= factorial(k);
                    if k % 2 == 1 {
                        coeff = -coeff;
                    }
                    t = &t * &slice.slices[i].pow(k);
                }
            }
            acc = &acc + &t.scale(&coeff);
        }
        self.algebra.reduce(&acc)
    }

    /// Checks every axiom of the action and reports each one.
    pub fn verify_action(&self) -> Result<VerifyReport> {
        let table = self.table();
        let rel = self.algebra.relations();
        let mut report = VerifyReport::default();

        let bad: Vec<String> = rel.generators().iter().filter(|g| !g.is_homogeneous()).map(|g| format!("{g}")).collect();
        report.record("relations-homogeneous", bad);

        let nontrivial = if rel.is_unit()? { vec!["1 lies in the relations".to_string()] } else { vec![] };
        report.record("algebra-nontrivial", nontrivial);

        let mut shift = Vec::new();
        for i in 0..self.r() {
            for j in 0..table.len() {
                let img = self.apply_derivation(i, &Poly::var(table, j))?;
                if img.is_zero() {
                    continue;
                }
                let want = table.weight(j) as i64 - self.w() as i64;
                match img.weighted_degree() {
                    Degree::Homogeneous(d) if d as i64 == want => {}
                    Degree::Homogeneous(d) => shift.push(format!("xi{}({}) = {img} has degree {d}, expected {want}", i + 1, table.name(j))),
                    _ => shift.push(format!("xi{}({}) = {img} is not homogeneous", i + 1, table.name(j))),
                }
            }
        }
        report.record("weight-shift", shift);

        let mut comm = Vec::new();
        for i in 0..self.r() {
            for k in i + 1..self.r() {
                for j in 0..table.len() {
                    let x = Poly::var(table, j);
                    let a = self.apply_derivation(i, &self.apply_derivation(k, &x)?)?;
                    let b = self.apply_derivation(k, &self.apply_derivation(i, &x)?)?;
                    if !self.algebra.is_zero(&(&a - &b))? {
                        comm.push(format!("[xi{}, xi{}]({}) != 0", i + 1, k + 1, table.name(j)));
                    }
                }
            }
        }
        report.record("commutation", comm);

        let mut preserved = Vec::new();
        for i in 0..self.r() {
            for g in rel.generators() {
                if !self.algebra.is_zero(&self.derive_raw(i, g))? {
                    preserved.push(format!("xi{}({g}) not in the relations", i + 1));
                }
            }
        }
        report.record("relations-preserved", preserved);

        let mut nil = Vec::new();
        for i in 0..self.r() {
            for j in 0..table.len() {
                let mut v = Poly::var(table, j);
                let steps = table.weight(j) / self.w() + 1;
                for _ in 0..steps {
                    v = self.apply_derivation(i, &v)?;
                    if v.is_zero() {
                        break;
                    }
                }
                if !v.is_zero() {
                    nil.push(format!("xi{}^{steps}({}) != 0", i + 1, table.name(j)));
                }
            }
        }
        report.record("local-nilpotence", nil);
        Ok(report)
    }

    /// Same data over a table with the same names and different relations or images.
    pub fn with_parts(&self, relations: Vec<Poly>, images: Vec<Vec<Poly>>) -> Result<Self> {
        let algebra = GradedAlgebra::new(self.table().clone(), relations, self.algebra.limits());
        ConeInstance::new(algebra, LndAction::new(self.w(), images))
    }

    /// Copy with new Gröbner limits.
    pub fn with_limits(&self, limits: GbLimits) -> Self {
        let mut c = self.clone();
        c.algebra.relations.set_limits(limits);
        c
    }
}

/// Evaluates all derivation images at a point; used by pointwise stabiliser tests.
pub fn evaluate_matrix(inst: &ConeInstance, rows: &[usize], point: &[Rational]) -> Vec<Vec<Rational>> {
    rows.iter()
        .map(|&j| (0..inst.r()).map(|i| inst.action().image(i, j).eval(point)).collect())
        .collect()
}

/// Rank of a rational matrix by Gaussian elimination.
pub fn rank(mut m: Vec<Vec<Rational>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = &row[c] * &inv;
                for k in c..cols {
                    let d = &f * &pivot_row[k];
                    row[k] -= d;
                }
            }
        }
        r += 1;
    }
    r
}

/// Map from variable names to positions, for building images by name.
pub fn name_map(table: &VarTable) -> HashMap<String, usize> {
    table.names().iter().enumerate().map(|(i, n)| (n.clone(), i)).collect()
}
