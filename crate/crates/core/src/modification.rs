//! Centres of the two modifications and the affine charts of their blow-ups.

use std::fmt;
use std::sync::Arc;

use unistab_algebra::ideal::cofactor_divide;
use unistab_algebra::{Fraction, Ideal, Monomial, MonomialOrder, Poly, VarTable};

use crate::cone::{ConeInstance, GradedAlgebra, LndAction};
use crate::error::{CoreError, Result};
use crate::fitting::{fitting_report, reduced_generators};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModKind {
    I,
    II,
}

impl fmt::Display for ModKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModKind::I => "I",
            ModKind::II => "II",
        })
    }
}

impl std::str::FromStr for ModKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "I" | "i" | "1" => Ok(ModKind::I),
            "II" | "ii" | "2" => Ok(ModKind::II),
            _ => Err(format!("unknown modification type `{s}` (expected I or II)")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CentreData {
    pub kind: ModKind,
    /// Seed ideal `I`, relations included.
    pub seed: Ideal,
    /// Largest invariant ideal `J ⊆ I`, relations included.
    pub core: Ideal,
    /// Homogeneous generators of `J` modulo the relations.
    pub generators: Vec<Poly>,
    /// Minimal weight among `generators`; `None` when `J` is the unit ideal.
    pub min_degree: Option<u64>,
    pub warnings: Vec<String>,
}

impl CentreData {
    pub fn is_empty_centre(&self) -> bool {
        self.min_degree.is_none()
    }
}

/// An affine chart with its embedding into the fraction field of the root algebra.
#[derive(Debug, Clone)]
pub struct Chart {
    pub instance: ConeInstance,
    pub label: String,
    /// Root-coordinate fraction for every chart variable.
    pub embedding: Vec<Fraction>,
    /// Chosen denominator in root coordinates; `None` for the root and identity charts.
    pub denominator: Option<Fraction>,
    /// Image in this chart of each variable of the parent chart.
    pub pullback: Vec<Poly>,
    pub identity: bool,
}

impl Chart {
    pub fn root(instance: ConeInstance) -> Self {
        let table = instance.table().clone();
        let embedding = (0..table.len()).map(|i| Fraction::from_poly(Poly::var(&table, i))).collect();
        let pullback = (0..table.len()).map(|i| Poly::var(&table, i)).collect();
        Chart { instance, label: "root".into(), embedding, denominator: None, pullback, identity: false }
    }

    pub fn root_table(&self) -> &Arc<VarTable> {
        self.embedding.first().map(|f| f.table()).unwrap_or_else(|| self.instance.table())
    }

    /// Root-coordinate fraction of a chart polynomial.
    pub fn embed(&self, p: &Poly) -> Fraction {
        Fraction::substitute(p, &self.root_table().clone(), &self.embedding)
    }

    fn identity_of(parent: &Chart) -> Chart {
        let table = parent.instance.table().clone();
        Chart {
            instance: parent.instance.clone(),
            label: parent.label.clone(),
            embedding: parent.embedding.clone(),
            denominator: None,
            pullback: (0..table.len()).map(|i| Poly::var(&table, i)).collect(),
            identity: true,
        }
    }
}

/// The largest invariant ideal inside `I`: the kernel of `A → (A/I)[u]`.
pub fn invariant_core(inst: &ConeInstance, seed: &Ideal) -> Result<Ideal> {
    let table = inst.table();
    if inst.r() == 0 {
        return Ok(seed.clone());
    }
    let ext = inst.coaction_table();
    let lift: Vec<usize> = (0..table.len()).collect();
    let images = (0..table.len())
        .map(|j| inst.coaction(&Poly::var(table, j), &ext))
        .collect::<Result<Vec<_>>>()?;
    let target = Ideal::with_limits(&ext, seed.generators().iter().map(|g| g.remap(&ext, &lift)), seed.limits());
    let core = target.map_preimage(table, &images)?;
    // Keep the relations visibly present among the generators.
    Ok(inst.algebra().ideal(core.generators().iter().cloned()))
}

fn centre_from(inst: &ConeInstance, kind: ModKind, seed: Ideal) -> Result<CentreData> {
    let core = invariant_core(inst, &seed)?;
    let mut generators = Vec::new();
    let mut min_degree = None;
    if !core.is_unit()? {
        generators = inst.algebra().minimal_generators(&core)?;
        for g in &generators {
            if g.weighted_degree().value().is_none() {
                return Err(CoreError::Internal(format!("centre generator {g} is not homogeneous")));
            }
        }
        min_degree = generators.iter().filter_map(|g| g.weighted_degree().value()).min();
        if min_degree.is_none() {
            return Err(CoreError::Precondition("the centre is the whole cone (J = 0)".into()));
        }
    }
    let mut warnings = Vec::new();
    if let (ModKind::I, Some(i1)) = (kind, min_degree) {
        if i1 > 0 {
            warnings.push(format!("minimal degree of the type I centre is {i1}, not 0"));
        }
    }
    Ok(CentreData { kind, seed, core, generators, min_degree, warnings })
}

/// Type I centre: `J = core(Fit_d + A_{>0})`.
pub fn centre_mod_i(inst: &ConeInstance) -> Result<CentreData> {
    let report = fitting_report(inst)?;
    let d = report.index.d as usize;
    let seed = report.fitting[d].sum(&inst.algebra().positive_part());
    centre_from(inst, ModKind::I, seed)
}

/// Type II centre: `J = core(A_{>0})`, requiring constant stabiliser dimension on the zero section.
pub fn centre_mod_ii(inst: &ConeInstance) -> Result<CentreData> {
    let report = fitting_report(inst)?;
    let d = report.index.d as usize;
    if !report.fitting[d].is_unit()? {
        return Err(CoreError::Precondition(format!(
            "stabiliser dimension not constant on the zero section: Fit_{d} is not the unit ideal"
        )));
    }
    if d > 0 {
        for g in reduced_generators(inst, &report.fitting[d - 1])? {
            if g.weighted_degree().value() == Some(0) {
                return Err(CoreError::Precondition(format!(
                    "stabiliser dimension not constant on the zero section: Fit_{} contains {g} of degree 0",
                    d - 1
                )));
            }
        }
    }
    centre_from(inst, ModKind::II, inst.algebra().positive_part())
}

fn monomial_name(table: &VarTable, m: &Monomial) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.exponents().iter().enumerate() {
        for _ in 0..e {
            parts.push(table.name(i).to_string());
        }
    }
    parts.join("_")
}

/// Identifier derived from a root-coordinate fraction, e.g. `e_e__a11_a21`.
pub fn mechanical_name(f: &Fraction) -> String {
    let table = f.table();
    let side = |p: &Poly| -> String {
        let (m, _) = &p.terms()[0];
        let base = if m.is_one() { "one".to_string() } else { monomial_name(table, m) };
        if p.len() > 1 {
            format!("{base}_c")
        } else {
            base
        }
    };
    if f.is_zero() {
        return "zero".into();
    }
    let num = side(f.numerator());
    if f.denominator().is_constant() {
        num
    } else {
        format!("{num}__{}", side(f.denominator()))
    }
}

/// Coefficient `c` if `p` contains `x_i` only in the single term `c·x_i`.
fn linear_coefficient(p: &Poly, i: usize) -> Option<unistab_algebra::Rational> {
    let mut found = None;
    for (m, c) in p.terms() {
        if m.exp(i) == 0 {
            continue;
        }
        if m.as_variable() != Some(i) || found.is_some() {
            return None;
        }
        found = Some(c.clone());
    }
    found
}

fn compose(p: &Poly, table: &Arc<VarTable>, images: &[Poly]) -> Poly {
    p.substitute(table, images)
}

/// Charts of the blow-up along the centre, one per minimal-degree generator.
pub fn blowup_charts(parent: &Chart, centre: &CentreData) -> Result<Vec<Chart>> {
    let Some(i1) = centre.min_degree else {
        return Ok(vec![Chart::identity_of(parent)]);
    };
    let inst = &parent.instance;
    let mut out = Vec::new();
    for (k, a) in centre.generators.iter().enumerate() {
        if a.weighted_degree().value() != Some(i1) {
            continue;
        }
        for i in 0..inst.r() {
            if !inst.apply_derivation(i, a)?.is_zero() {
                return Err(CoreError::Internal(format!("denominator {a} is not killed by xi{}", i + 1)));
            }
        }
        out.push(chart_at(parent, centre, k, i1)?);
    }
    Ok(out)
}

fn chart_at(parent: &Chart, centre: &CentreData, k: usize, i1: u64) -> Result<Chart> {
    let inst = &parent.instance;
    let ptable = inst.table();
    let n = ptable.len();
    let limits = inst.algebra().limits();
    let root = parent.root_table().clone();
    let a = &centre.generators[k];
    let emb_a = parent.embed(a);
    let others: Vec<usize> = (0..centre.generators.len()).filter(|&j| j != k).collect();

    // Fresh variables y_j = g_j / a.
    let mut names = ptable.as_ref().clone();
    let mut new_vars = Vec::new();
    let mut emb_new = Vec::new();
    for &j in &others {
        let g = &centre.generators[j];
        let f = parent.embed(g).div(&emb_a)?;
        let name = names.fresh_name(&mechanical_name(&f));
        let weight = g.weighted_degree().value().expect("homogeneous") - i1;
        names = names.extended([(name.clone(), weight as u32)])?;
        new_vars.push((name, weight as u32));
        emb_new.push(f);
    }
    let t1 = Arc::new(names);
    let lift: Vec<usize> = (0..n).collect();
    let up = |p: &Poly| p.remap(&t1, &lift);
    let a1 = up(a);
    let y = |idx: usize| Poly::var(&t1, n + idx);

    // Drop parent variables that become polynomial in the others.
    let protected = a.support();
    let mut subst: Vec<Option<Poly>> = vec![None; n];
    let resolve = |p: &Poly, subst: &[Option<Poly>]| -> Poly {
        let images: Vec<Poly> = (0..t1.len())
            .map(|v| match subst.get(v).and_then(|s| s.clone()) {
                Some(s) => s,
                None => Poly::var(&t1, v),
            })
            .collect();
        compose(p, &t1, &images)
    };
    for (idx, &j) in others.iter().enumerate() {
        let g = resolve(&up(&centre.generators[j]), &subst);
        let candidate = (0..n)
            .rev()
            .filter(|i| !protected.contains(i) && subst[*i].is_none())
            .find_map(|i| linear_coefficient(&g, i).map(|c| (i, c)));
        if let Some((i, c)) = candidate {
            let rest = &g - &Poly::var(&t1, i).scale(&c);
            let value = (&(&a1 * &y(idx)) - &rest).scale(&c.recip());
            let mut single: Vec<Option<Poly>> = vec![None; n];
            single[i] = Some(value.clone());
            for s in subst.iter_mut().flatten() {
                *s = resolve(s, &single);
            }
            subst[i] = Some(value);
        }
    }

    let keep: Vec<usize> = (0..t1.len()).filter(|&v| v >= n || subst[v].is_none()).collect();
    let t2 = Arc::new(t1.subset(&keep));
    let mut pos = vec![usize::MAX; t1.len()];
    for (p, &v) in keep.iter().enumerate() {
        pos[v] = p;
    }
    let to_t2 = |p: &Poly| -> Poly {
        let images: Vec<Poly> = (0..t1.len())
            .map(|v| match &subst.get(v).cloned().flatten() {
                Some(s) => s.rename_into(&t2),
                None => Poly::var(&t2, pos[v]),
            })
            .collect();
        p.substitute(&t2, &images)
    };

    let a2 = to_t2(&a1);
    let mut rels: Vec<Poly> = inst.algebra().relations().generators().iter().map(|g| to_t2(&up(g))).collect();
    for (idx, &j) in others.iter().enumerate() {
        let link = &(&a1 * &y(idx)) - &up(&centre.generators[j]);
        rels.push(to_t2(&link));
    }
    let k0 = Ideal::with_limits(&t2, rels, limits);
    let kernel = if k0.is_zero() { k0 } else { k0.saturate(&a2)? };

    // Variables that the relations express through the others.
    let (t3, to_t3, kernel) = prune_linear(&t2, &kernel, &a2)?;
    let a3 = to_t3(&a2);

    let chart_vars: Vec<usize> = keep.clone();
    let pullback: Vec<Poly> = (0..n).map(|i| to_t3(&to_t2(&Poly::var(&t1, i)))).collect();

    // Induced derivations.
    let mut images = vec![Vec::with_capacity(t3.len()); inst.r()];
    let t3_origin: Vec<usize> = t3
        .names()
        .iter()
        .map(|nm| t2.position(nm).map(|p| chart_vars[p]).expect("chart variable comes from t2"))
        .collect();
    for (i, row) in images.iter_mut().enumerate() {
        for &v in &t3_origin {
            let img = if v < n {
                let parent_img = inst.apply_derivation(i, &Poly::var(ptable, v))?;
                compose(&parent_img, &t3, &pullback)
            } else {
                let g = &centre.generators[others[v - n]];
                let dg = inst.apply_derivation(i, g)?;
                let num = compose(&dg, &t3, &pullback);
                cofactor_divide(&num, &a3, &kernel).map_err(|e| CoreError::Internal(format!("induced derivation: {e}")))?
            };
            let img = if kernel.is_zero() { img } else { kernel.normal_form(&img)? };
            row.push(img);
        }
    }

    let embedding: Vec<Fraction> = t3_origin
        .iter()
        .map(|&v| if v < n { parent.embedding[v].clone() } else { emb_new[v - n].clone() })
        .collect();
    let _ = root;
    let algebra = GradedAlgebra::new(t3.clone(), kernel.generators().to_vec(), limits);
    let instance = ConeInstance::new(algebra, LndAction::new(inst.w(), images))?;
    let label = emb_a.to_string().replace(' ', "");
    Ok(Chart { instance, label, embedding, denominator: Some(emb_a), pullback, identity: false })
}

type Mapper = Box<dyn Fn(&Poly) -> Poly>;

/// Removes variables `v` for which the relations contain `c·v − (terms without v)`.
fn prune_linear(table: &Arc<VarTable>, kernel: &Ideal, a: &Poly) -> Result<(Arc<VarTable>, Mapper, Ideal)> {
    let n = table.len();
    let ident = {
        let t = table.clone();
        Box::new(move |p: &Poly| p.rename_into(&t)) as Mapper
    };
    if kernel.is_zero() {
        return Ok((table.clone(), ident, kernel.clone()));
    }
    // Reverse the order so that later (newer) variables lead.
    let rev: Vec<usize> = (0..n).rev().collect();
    let scratch = Arc::new(VarTable::new((0..n).map(|i| (format!("t{i}"), 0)))?);
    let gens: Vec<Poly> = kernel.generators().iter().map(|g| g.remap(&scratch, &rev)).collect();
    let basis: Vec<Poly> = Ideal::with_limits(&scratch, gens, kernel.limits())
        .groebner_basis(MonomialOrder::GrevLex)?
        .into_iter()
        .map(|g| g.remap(table, &rev))
        .collect();
    let protected = a.support();
    let mut subst: Vec<Option<Poly>> = vec![None; n];
    for g in &basis {
        // Leading term in the reversed order: the first term after re-sorting.
        let lead = g
            .terms()
            .iter()
            .max_by(|x, y| {
                let ex: Vec<u32> = rev.iter().map(|&i| x.0.exp(i)).collect();
                let ey: Vec<u32> = rev.iter().map(|&i| y.0.exp(i)).collect();
                MonomialOrder::GrevLex.cmp(&ex, &ey)
            })
            .cloned();
        let Some((m, c)) = lead else { continue };
        let Some(v) = m.as_variable() else { continue };
        if protected.contains(&v) || subst[v].is_some() {
            continue;
        }
        let rest = g - &Poly::var(table, v).scale(&c);
        subst[v] = Some((-&rest).scale(&c.recip()));
    }
    if subst.iter().all(Option::is_none) {
        return Ok((table.clone(), ident, kernel.clone()));
    }
    let keep: Vec<usize> = (0..n).filter(|&v| subst[v].is_none()).collect();
    let t = Arc::new(table.subset(&keep));
    let images: Vec<Poly> = (0..n)
        .map(|v| match &subst[v] {
            Some(s) => s.rename_into(&t),
            None => Poly::named(&t, table.name(v)),
        })
        .collect();
    let map_t = t.clone();
    let mapper: Mapper = Box::new(move |p: &Poly| p.substitute(&map_t, &images));
    let new_gens: Vec<Poly> = basis.iter().map(&mapper).filter(|g| !g.is_zero()).collect();
    let new_kernel = Ideal::with_limits(&t, new_gens, kernel.limits());
    Ok((t, mapper, new_kernel))
}

/// Centre plus charts for one modification step.
pub fn modify(parent: &Chart, kind: ModKind) -> Result<(CentreData, Vec<Chart>)> {
    let centre = match kind {
        ModKind::I => centre_mod_i(&parent.instance)?,
        ModKind::II => centre_mod_ii(&parent.instance)?,
    };
    let charts = blowup_charts(parent, &centre)?;
    Ok((centre, charts))
}

/// `ξ_i` applied to a root-coordinate fraction by the quotient rule.
pub fn derive_fraction(root: &ConeInstance, i: usize, f: &Fraction) -> Result<Fraction> {
    let n = f.numerator();
    let d = f.denominator();
    let dn = root.apply_derivation(i, n)?;
    let dd = root.apply_derivation(i, d)?;
    let num = &(&dn * d) - &(n * &dd);
    Ok(Fraction::new(num, d.pow(2))?)
}

/// Checks that the chart's derivations agree with the root's through the embedding.
pub fn embedding_coherent(root: &ConeInstance, chart: &Chart) -> Result<bool> {
    for i in 0..chart.instance.r() {
        for (v, emb) in chart.embedding.iter().enumerate() {
            let lhs = chart.embed(chart.instance.action().image(i, v));
            let rhs = derive_fraction(root, i, emb)?;
            if !lhs.same_value(&rhs) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
