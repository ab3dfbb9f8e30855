use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{AlgebraError, Result};
use crate::groebner::{self, Element, GbLimits};
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::Poly;
use crate::vars::VarTable;

/// An ideal of the polynomial ring over a [`VarTable`].
///
/// The reduced grevlex basis is computed on first use and cached. Ideals
/// derived from this one inherit its [`GbLimits`].
#[derive(Clone)]
pub struct Ideal {
    table: Arc<VarTable>,
    gens: Vec<Poly>,
    limits: GbLimits,
    basis: OnceLock<Arc<Vec<Element>>>,
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.gens.iter().map(|g| g.to_string())).finish()
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (k, g) in self.gens.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ">")
    }
}

/// Table with `n` anonymous variables, used for auxiliary rings.
fn scratch_table(n: usize) -> Arc<VarTable> {
    Arc::new(VarTable::new((0..n).map(|i| (format!("t{i}"), 0))).expect("valid names"))
}

impl Ideal {
    pub fn new(table: &Arc<VarTable>, gens: impl IntoIterator<Item = Poly>) -> Self {
        Self::with_limits(table, gens, GbLimits::default())
    }

    pub fn with_limits(table: &Arc<VarTable>, gens: impl IntoIterator<Item = Poly>, limits: GbLimits) -> Self {
        let gens = gens.into_iter().filter(|g| !g.is_zero()).collect::<Vec<_>>();
        for g in &gens {
            assert!(g.table() == table, "generator over a different table");
        }
        Ideal { table: table.clone(), gens, limits, basis: OnceLock::new() }
    }

    pub fn zero(table: &Arc<VarTable>) -> Self {
        Self::new(table, [])
    }

    pub fn unit(table: &Arc<VarTable>) -> Self {
        Self::new(table, [Poly::one(table)])
    }

    /// A new ideal over the same ring with the same limits.
    pub fn derive(&self, gens: impl IntoIterator<Item = Poly>) -> Self {
        Self::with_limits(&self.table, gens, self.limits)
    }

    pub fn table(&self) -> &Arc<VarTable> {
        &self.table
    }

    pub fn generators(&self) -> &[Poly] {
        &self.gens
    }

    pub fn limits(&self) -> GbLimits {
        self.limits
    }

    pub fn set_limits(&mut self, limits: GbLimits) {
        self.limits = limits;
    }

    fn cached(&self) -> Result<&Arc<Vec<Element>>> {
        if let Some(b) = self.basis.get() {
            return Ok(b);
        }
        let elems = self
            .gens
            .iter()
            .map(|g| Element::plain(groebner::to_terms(g, MonomialOrder::GrevLex), g.total_degree()))
            .collect();
        let b = groebner::compute(elems, MonomialOrder::GrevLex, self.limits)?;
        // A concurrent initialiser may win; both values are equal.
        Ok(self.basis.get_or_init(|| Arc::new(b)))
    }

    /// The reduced grevlex Gröbner basis.
    pub fn basis(&self) -> Result<Vec<Poly>> {
        Ok(self.cached()?.iter().map(|e| groebner::to_poly(&self.table, e.terms.clone())).collect())
    }

    /// The reduced Gröbner basis for `ord`. Polynomials are returned in canonical
    /// form; the leading term under `ord` is not necessarily first.
    pub fn groebner_basis(&self, ord: MonomialOrder) -> Result<Vec<Poly>> {
        if ord == MonomialOrder::GrevLex {
            return self.basis();
        }
        groebner::groebner_basis(&self.gens, ord, self.limits)
    }

    pub fn normal_form(&self, p: &Poly) -> Result<Poly> {
        let basis = self.cached()?;
        let t = groebner::normal_form_terms(MonomialOrder::GrevLex, p.terms().to_vec(), basis);
        Ok(Poly::from_terms(&self.table, t))
    }

    pub fn contains(&self, p: &Poly) -> Result<bool> {
        if p.is_zero() {
            return Ok(true);
        }
        Ok(self.normal_form(p)?.is_zero())
    }

    pub fn contains_ideal(&self, other: &Ideal) -> Result<bool> {
        for g in &other.gens {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Two-sided containment.
    pub fn same_as(&self, other: &Ideal) -> Result<bool> {
        Ok(self.contains_ideal(other)? && other.contains_ideal(self)?)
    }

    pub fn is_unit(&self) -> Result<bool> {
        Ok(self.cached()?.iter().any(|e| e.terms[0].0.is_one()))
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn sum(&self, other: &Ideal) -> Ideal {
        self.derive(self.gens.iter().chain(&other.gens).cloned())
    }

    pub fn with_generators(&self, extra: impl IntoIterator<Item = Poly>) -> Ideal {
        self.derive(self.gens.iter().cloned().chain(extra))
    }

    /// `I ∩ k[keep]`, expressed over the same table.
    pub fn eliminate(&self, keep: &[usize]) -> Result<Ideal> {
        let n = self.table.len();
        let mut is_kept = vec![false; n];
        for &k in keep {
            is_kept[k] = true;
        }
        let dropped: Vec<usize> = (0..n).filter(|&i| !is_kept[i]).collect();
        if dropped.is_empty() {
            return Ok(self.clone());
        }
        let kept: Vec<usize> = (0..n).filter(|&i| is_kept[i]).collect();
        // New position of each old variable: eliminated ones first.
        let mut to_new = vec![0; n];
        for (pos, &i) in dropped.iter().chain(&kept).enumerate() {
            to_new[i] = pos;
        }
        let scratch = scratch_table(n);
        let gens: Vec<Poly> = self.gens.iter().map(|g| g.remap(&scratch, &to_new)).collect();
        let basis = groebner::groebner_basis(&gens, MonomialOrder::Block(dropped.len()), self.limits)?;
        let mut back = vec![0; n];
        for (i, &p) in to_new.iter().enumerate() {
            back[p] = i;
        }
        let out = basis
            .into_iter()
            .filter(|g| (0..dropped.len()).all(|v| !g.involves(v)))
            .map(|g| g.remap(&self.table, &back));
        Ok(self.derive(out))
    }

    /// `I : f^∞`, via `I + <z f - 1>` and elimination of `z`.
    pub fn saturate(&self, f: &Poly) -> Result<Ideal> {
        if f.is_zero() {
            return Err(AlgebraError::Invalid("saturation by zero".into()));
        }
        let n = self.table.len();
        let scratch = scratch_table(n + 1);
        let shift: Vec<usize> = (1..=n).collect();
        let z = Poly::var(&scratch, 0);
        let mut gens: Vec<Poly> = self.gens.iter().map(|g| g.remap(&scratch, &shift)).collect();
        gens.push(&(&z * &f.remap(&scratch, &shift)) - &Poly::one(&scratch));
        let basis = groebner::groebner_basis(&gens, MonomialOrder::Block(1), self.limits)?;
        let back: Vec<usize> = std::iter::once(0).chain(0..n).collect();
        let out = basis.into_iter().filter(|g| !g.involves(0)).map(|g| g.remap(&self.table, &back));
        Ok(self.derive(out))
    }

    /// Preimage of `self` under the ring map sending source variable `j` to
    /// `images[j]` (polynomials over this ideal's table).
    pub fn map_preimage(&self, source: &Arc<VarTable>, images: &[Poly]) -> Result<Ideal> {
        assert_eq!(images.len(), source.len());
        let n = self.table.len();
        let m = source.len();
        let scratch = scratch_table(n + m);
        let target_map: Vec<usize> = (0..n).collect();
        let mut gens: Vec<Poly> = self.gens.iter().map(|g| g.remap(&scratch, &target_map)).collect();
        for (j, img) in images.iter().enumerate() {
            gens.push(&Poly::var(&scratch, n + j) - &img.remap(&scratch, &target_map));
        }
        let basis = groebner::groebner_basis(&gens, MonomialOrder::Block(n), self.limits)?;
        let back: Vec<usize> = (0..n).map(|_| 0).chain(0..m).collect();
        let out: Vec<Poly> = basis
            .into_iter()
            .filter(|g| (0..n).all(|v| !g.involves(v)))
            .map(|g| g.remap(source, &back))
            .collect();
        Ok(Ideal::with_limits(source, out, self.limits))
    }

    /// `I : f`, the colon by a single element.
    pub fn quotient(&self, f: &Poly) -> Result<Ideal> {
        if f.is_zero() {
            return Ok(self.derive([Poly::one(&self.table)]));
        }
        // I ∩ <f> via t*I + (1-t)*<f>, then divide by f.
        let n = self.table.len();
        let scratch = scratch_table(n + 1);
        let shift: Vec<usize> = (1..=n).collect();
        let t = Poly::var(&scratch, 0);
        let one_minus_t = &Poly::one(&scratch) - &t;
        let mut gens: Vec<Poly> = self.gens.iter().map(|g| &t * &g.remap(&scratch, &shift)).collect();
        gens.push(&one_minus_t * &f.remap(&scratch, &shift));
        let basis = groebner::groebner_basis(&gens, MonomialOrder::Block(1), self.limits)?;
        let back: Vec<usize> = std::iter::once(0).chain(0..n).collect();
        let zero = Ideal::zero(&self.table);
        let mut out = Vec::new();
        for g in basis.into_iter().filter(|g| !g.involves(0)) {
            out.push(cofactor_divide(&g.remap(&self.table, &back), f, &zero)?);
        }
        Ok(self.derive(out))
    }
}

/// Finds `z` with `a·z ≡ n (mod K)`.
///
/// The result is unique modulo `K : a` and is returned in normal form modulo `K`.
pub fn cofactor_divide(n: &Poly, a: &Poly, k: &Ideal) -> Result<Poly> {
    let table = k.table();
    if k.contains(a)? {
        return Err(AlgebraError::NotDivisible(format!("divisor {a} vanishes modulo the ideal")));
    }
    if n.is_zero() {
        return Ok(Poly::zero(table));
    }
    // Exact monomial division needs no Gröbner work.
    if k.is_zero() && a.is_monomial() {
        let (m, c) = &a.terms()[0];
        if n.terms().iter().all(|(t, _)| m.divides(t)) {
            let inv = c.recip();
            return Ok(Poly::from_terms(table, n.terms().iter().map(|(t, d)| (m.quotient_of(t), d * &inv))));
        }
        return Err(AlgebraError::NotDivisible(format!("{n} by {a}")));
    }
    let ord = MonomialOrder::GrevLex;
    let basis = groebner::tracked_basis(k.generators(), a, ord, k.limits())?;
    let (rem, cof) = groebner::tracked_reduce(ord, n.terms().to_vec(), &basis);
    if !rem.is_empty() {
        return Err(AlgebraError::NotDivisible(format!("{n} by {a}")));
    }
    let z = Poly::from_terms(table, cof);
    k.normal_form(&z)
}

/// Monomials of total degree exactly `d` in `n` variables, in descending grevlex order.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut e = vec![0u32; n];
    fn rec(i: usize, left: u32, e: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i + 1 == e.len() {
            e[i] = left;
            out.push(Monomial::from_exponents(e.clone()));
            return;
        }
        for k in (0..=left).rev() {
            e[i] = k;
            rec(i + 1, left - k, e, out);
        }
        e[i] = 0;
    }
    if n == 0 {
        if d == 0 {
            out.push(Monomial::one(0));
        }
        return out;
    }
    rec(0, d, &mut e, &mut out);
    out.sort_by(|a, b| MonomialOrder::GrevLex.cmp_mono(b, a));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn setup(names: &[(&str, u32)]) -> Arc<VarTable> {
        VarTable::from_pairs(names)
    }

    fn ideal(t: &Arc<VarTable>, gens: &[&str]) -> Ideal {
        Ideal::new(t, gens.iter().map(|g| parse_poly(g, t).unwrap()))
    }

    #[test]
    fn membership() {
        let t = setup(&[("x", 1), ("y", 1)]);
        let p = |s| parse_poly(s, &t).unwrap();
        assert!(ideal(&t, &["x"]).contains(&p("x^2*y")).unwrap());
        assert!(!ideal(&t, &["x", "y"]).contains(&p("1")).unwrap());
    }

    #[test]
    fn elimination() {
        let t = setup(&[("t", 1), ("x", 1), ("y", 1)]);
        let e = ideal(&t, &["t - x - y"]).eliminate(&[1, 2]).unwrap();
        assert!(e.is_zero());
        let e = ideal(&t, &["t - x", "t - y"]).eliminate(&[1, 2]).unwrap();
        assert!(e.same_as(&ideal(&t, &["x - y"])).unwrap());
    }

    #[test]
    fn saturation() {
        let t = setup(&[("x", 1), ("y", 1)]);
        let y = parse_poly("y", &t).unwrap();
        let x = parse_poly("x", &t).unwrap();
        assert!(ideal(&t, &["x*y"]).saturate(&y).unwrap().same_as(&ideal(&t, &["x"])).unwrap());
        assert!(ideal(&t, &["x^2"]).saturate(&x).unwrap().is_unit().unwrap());
    }

    #[test]
    fn preimage() {
        let tgt = setup(&[("x", 1), ("y", 1)]);
        let src = setup(&[("t", 1)]);
        let i = ideal(&tgt, &["x + y"]);
        let pre = i.map_preimage(&src, &[parse_poly("x + y", &tgt).unwrap()]).unwrap();
        assert!(pre.same_as(&ideal(&src, &["t"])).unwrap());
        let pre = ideal(&tgt, &["x"]).map_preimage(&src, &[parse_poly("x^2", &tgt).unwrap()]).unwrap();
        assert!(pre.same_as(&ideal(&src, &["t"])).unwrap());
    }

    #[test]
    fn cofactors() {
        let t = setup(&[("x", 1), ("y", 1)]);
        let p = |s| parse_poly(s, &t).unwrap();
        let zero = Ideal::zero(&t);
        assert_eq!(cofactor_divide(&p("x*y"), &p("x"), &zero).unwrap(), p("y"));
        assert!(matches!(cofactor_divide(&p("y"), &p("x"), &zero), Err(AlgebraError::NotDivisible(_))));
        // Modulo x*y - 1, x is invertible with inverse y.
        let k = ideal(&t, &["x*y - 1"]);
        let z = cofactor_divide(&p("1"), &p("x"), &k).unwrap();
        assert!(k.contains(&(&(&p("x") * &z) - &p("1"))).unwrap());
    }

    #[test]
    fn colon() {
        let t = setup(&[("x", 1), ("y", 1)]);
        let q = ideal(&t, &["x*y", "x^2"]).quotient(&parse_poly("x", &t).unwrap()).unwrap();
        assert!(q.same_as(&ideal(&t, &["x", "y"])).unwrap());
    }

    #[test]
    fn monomial_enumeration() {
        assert_eq!(monomials_of_degree(3, 2).len(), 6);
        assert_eq!(monomials_of_degree(2, 0), vec![Monomial::one(2)]);
    }
}
