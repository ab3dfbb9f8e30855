//! Buchberger's algorithm with the sugar selection strategy and the
//! Gebauer–Möller pair criteria.
//!
//! The engine works on plain term lists sorted by the requested order, so the
//! same code serves grevlex, lex and elimination orders. Each basis element
//! may carry a cofactor: the coefficient of one distinguished input generator
//! in its expression as a combination of the inputs.

use std::cmp::Ordering;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{AlgebraError, Result};
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::Poly;
use crate::vars::VarTable;
use crate::Rational;

/// Caps on the Buchberger loop; exceeding one is a [`AlgebraError::ResourceLimit`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GbLimits {
    /// Number of S-pairs that may be reduced.
    pub max_pairs: u64,
    /// Largest total degree allowed for a new basis element.
    pub max_degree: u32,
}

impl Default for GbLimits {
    fn default() -> Self {
        GbLimits { max_pairs: 200_000, max_degree: 64 }
    }
}

pub(crate) type Terms = Vec<(Monomial, Rational)>;

#[derive(Clone, Debug)]
pub(crate) struct Element {
    pub terms: Terms,
    pub cof: Option<Terms>,
    sugar: u32,
}

impl Element {
    pub(crate) fn plain(terms: Terms, sugar: u32) -> Self {
        Element { terms, cof: None, sugar }
    }

    fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }
}

fn sort_terms(ord: MonomialOrder, mut t: Terms) -> Terms {
    t.sort_by(|a, b| ord.cmp_mono(&b.0, &a.0));
    t
}

/// `a + c*m*b`, both sorted descending by `ord`.
fn add_scaled(ord: MonomialOrder, a: &[(Monomial, Rational)], b: &[(Monomial, Rational)], c: &Rational, m: &Monomial) -> Terms {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let mut shifted: Option<(Monomial, Rational)> = b.first().map(|(n, d)| (n.mul(m), d * c));
    while i < a.len() {
        let Some((bm, bc)) = shifted.as_ref() else { break };
        match ord.cmp_mono(&a[i].0, bm) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push(shifted.take().unwrap());
                j += 1;
                shifted = b.get(j).map(|(n, d)| (n.mul(m), d * c));
            }
            Ordering::Equal => {
                let s = &a[i].1 + bc;
                if !s.is_zero() {
                    out.push((a[i].0.clone(), s));
                }
                i += 1;
                j += 1;
                shifted = b.get(j).map(|(n, d)| (n.mul(m), d * c));
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    if let Some(t) = shifted {
        out.push(t);
        out.extend(b[j + 1..].iter().map(|(n, d)| (n.mul(m), d * c)));
    }
    out
}

fn scale_terms(t: &mut Terms, c: &Rational) {
    for (_, a) in t.iter_mut() {
        *a *= c;
    }
}

fn make_monic(e: &mut Element) {
    let lc = e.terms[0].1.clone();
    if !lc.is_one() {
        let inv = lc.recip();
        scale_terms(&mut e.terms, &inv);
        if let Some(c) = e.cof.as_mut() {
            scale_terms(c, &inv);
        }
    }
}

/// Fully reduces `p` (with optional cofactor) by the elements of `basis`.
fn reduce(ord: MonomialOrder, mut p: Element, basis: &[&Element]) -> Element {
    let mut rest: Terms = Vec::new();
    while !p.terms.is_empty() {
        let (lm, lc) = p.terms[0].clone();
        match basis.iter().find(|g| g.lm().divides(&lm)) {
            Some(g) => {
                let m = g.lm().quotient_of(&lm);
                let c = -(&lc / &g.terms[0].1);
                p.terms = add_scaled(ord, &p.terms, &g.terms, &c, &m);
                if let (Some(pc), Some(gc)) = (p.cof.as_mut(), g.cof.as_ref()) {
                    *pc = add_scaled(ord, pc, gc, &c, &m);
                }
                p.sugar = p.sugar.max(g.sugar + m.total_degree());
            }
            None => {
                rest.push(p.terms.remove(0));
            }
        }
    }
    p.terms = rest;
    p
}

#[derive(Debug, Clone)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
}

pub(crate) struct Engine {
    ord: MonomialOrder,
    limits: GbLimits,
    elems: Vec<Element>,
    live: Vec<bool>,
    pairs: Vec<Pair>,
    processed: u64,
}

impl Engine {
    fn new(ord: MonomialOrder, limits: GbLimits) -> Self {
        Engine { ord, limits, elems: Vec::new(), live: Vec::new(), pairs: Vec::new(), processed: 0 }
    }

    fn live_elems(&self) -> Vec<&Element> {
        self.elems.iter().zip(&self.live).filter(|(_, l)| **l).map(|(e, _)| e).collect()
    }

    fn pair(&self, i: usize, j: usize) -> Pair {
        let (a, b) = (&self.elems[i], &self.elems[j]);
        let lcm = a.lm().lcm(b.lm());
        let sa = a.sugar + lcm.total_degree() - a.lm().total_degree();
        let sb = b.sugar + lcm.total_degree() - b.lm().total_degree();
        Pair { i, j, lcm, sugar: sa.max(sb) }
    }

    /// Gebauer–Möller update after appending element `h`.
    fn insert(&mut self, mut h: Element) -> Result<()> {
        if h.terms[0].0.total_degree() > self.limits.max_degree {
            return Err(AlgebraError::ResourceLimit { what: "groebner degree", limit: self.limits.max_degree as u64 });
        }
        make_monic(&mut h);
        let hi = self.elems.len();
        let hlm = h.lm().clone();
        self.elems.push(h);
        self.live.push(true);

        let fresh: Vec<Pair> = (0..hi).filter(|&g| self.live[g]).map(|g| self.pair(g, hi)).collect();
        let mut kept: Vec<Pair> = Vec::new();
        for (k, p) in fresh.iter().enumerate() {
            let coprime = self.elems[p.i].lm().is_coprime(&hlm);
            let dominated = |q: &Pair| q.lcm.divides(&p.lcm) && q.lcm != p.lcm;
            let redundant = !coprime
                && (fresh[k + 1..].iter().any(dominated)
                    || kept.iter().any(|q| q.lcm.divides(&p.lcm))
                    || fresh[..k].iter().any(dominated));
            if !redundant {
                kept.push(p.clone());
            }
        }
        // Among pairs with equal lcm keep one; drop those satisfying the product criterion.
        let mut chosen: Vec<Pair> = Vec::new();
        for p in kept {
            if chosen.iter().any(|q| q.lcm == p.lcm) {
                continue;
            }
            chosen.push(p);
        }
        let chosen: Vec<Pair> = chosen
            .into_iter()
            .filter(|p| !self.elems[p.i].lm().is_coprime(&hlm))
            .collect();

        let elems = &self.elems;
        self.pairs.retain(|p| {
            if !hlm.divides(&p.lcm) {
                return true;
            }
            let l1 = elems[p.i].lm().lcm(&hlm);
            let l2 = elems[p.j].lm().lcm(&hlm);
            l1 == p.lcm || l2 == p.lcm
        });
        self.pairs.extend(chosen);

        for g in 0..hi {
            if self.live[g] && hlm.divides(self.elems[g].lm()) {
                self.live[g] = false;
            }
        }
        Ok(())
    }

    fn next_pair(&mut self) -> Option<Pair> {
        let ord = self.ord;
        let best = self
            .pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| a.sugar.cmp(&b.sugar).then_with(|| ord.cmp_mono(&a.lcm, &b.lcm)))
            .map(|(k, _)| k)?;
        Some(self.pairs.swap_remove(best))
    }

    fn spoly(&self, p: &Pair) -> Element {
        let (a, b) = (&self.elems[p.i], &self.elems[p.j]);
        let ma = a.lm().quotient_of(&p.lcm);
        let mb = b.lm().quotient_of(&p.lcm);
        let ca = b.terms[0].1.clone();
        let cb = -a.terms[0].1.clone();
        let scaled_a = add_scaled(self.ord, &[], &a.terms, &ca, &ma);
        let terms = add_scaled(self.ord, &scaled_a, &b.terms, &cb, &mb);
        let cof = match (&a.cof, &b.cof) {
            (Some(x), Some(y)) => {
                let sx = add_scaled(self.ord, &[], x, &ca, &ma);
                Some(add_scaled(self.ord, &sx, y, &cb, &mb))
            }
            _ => None,
        };
        Element { terms, cof, sugar: p.sugar }
    }

    fn run(&mut self) -> Result<()> {
        while let Some(p) = self.next_pair() {
            self.processed += 1;
            if self.processed > self.limits.max_pairs {
                return Err(AlgebraError::ResourceLimit { what: "groebner pairs", limit: self.limits.max_pairs });
            }
            let s = self.spoly(&p);
            let live = self.live_elems();
            let r = reduce(self.ord, s, &live);
            if !r.terms.is_empty() {
                let unit = r.terms[0].0.is_one();
                self.insert(r)?;
                if unit {
                    self.pairs.clear();
                }
            }
        }
        Ok(())
    }

    /// Minimal, interreduced, monic basis sorted by ascending leading monomial.
    fn reduced(self) -> Vec<Element> {
        let ord = self.ord;
        let mut min: Vec<Element> = self
            .elems
            .into_iter()
            .zip(self.live)
            .filter(|(_, l)| *l)
            .map(|(e, _)| e)
            .collect();
        min.sort_by(|a, b| ord.cmp_mono(a.lm(), b.lm()));
        let mut out: Vec<Element> = Vec::with_capacity(min.len());
        for k in 0..min.len() {
            let e = &min[k];
            let tail = Element { terms: e.terms[1..].to_vec(), cof: e.cof.clone(), sugar: e.sugar };
            let others: Vec<&Element> = min.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, e)| e).collect();
            // The leading term cannot be reduced; only the tail changes.
            let r = reduce(ord, tail, &others);
            let mut terms = vec![e.terms[0].clone()];
            terms.extend(r.terms);
            let mut e = Element { terms, cof: r.cof, sugar: r.sugar };
            make_monic(&mut e);
            out.push(e);
        }
        out
    }
}

pub(crate) fn to_terms(p: &Poly, ord: MonomialOrder) -> Terms {
    if ord == MonomialOrder::GrevLex {
        p.terms().to_vec()
    } else {
        sort_terms(ord, p.terms().to_vec())
    }
}

pub(crate) fn to_poly(table: &Arc<VarTable>, t: Terms) -> Poly {
    Poly::from_terms(table, t)
}

/// Reduced Gröbner basis of the ideal generated by `gens` under `ord`.
pub fn groebner_basis(gens: &[Poly], ord: MonomialOrder, limits: GbLimits) -> Result<Vec<Poly>> {
    let Some(table) = gens.first().map(|g| g.table().clone()) else {
        return Ok(Vec::new());
    };
    let elems = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| Element { terms: to_terms(g, ord), cof: None, sugar: g.total_degree() })
        .collect();
    let basis = compute(elems, ord, limits)?;
    Ok(basis.into_iter().map(|e| to_poly(&table, e.terms)).collect())
}

pub(crate) fn compute(mut input: Vec<Element>, ord: MonomialOrder, limits: GbLimits) -> Result<Vec<Element>> {
    let mut engine = Engine::new(ord, limits);
    // Inserting in ascending order lets earlier elements reduce later ones.
    input.sort_by(|a, b| ord.cmp_mono(&a.terms[0].0, &b.terms[0].0));
    for e in input {
        let live = engine.live_elems();
        let r = reduce(ord, e, &live);
        if !r.terms.is_empty() {
            engine.insert(r)?;
        }
    }
    engine.run()?;
    Ok(engine.reduced())
}

/// Reduces `p` by a basis given as term lists sorted by `ord`; returns the normal form.
pub(crate) fn normal_form_terms(ord: MonomialOrder, p: Terms, basis: &[Element]) -> Terms {
    let refs: Vec<&Element> = basis.iter().collect();
    reduce(ord, Element { terms: p, cof: None, sugar: 0 }, &refs).terms
}

/// Extended variant: computes a Gröbner basis of `others + <tracked>` in which
/// every element remembers its coefficient of `tracked` (modulo `others`).
pub(crate) fn tracked_basis(others: &[Poly], tracked: &Poly, ord: MonomialOrder, limits: GbLimits) -> Result<Vec<Element>> {
    let n = tracked.table().len();
    let mut elems: Vec<Element> = others
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| Element { terms: to_terms(g, ord), cof: Some(Vec::new()), sugar: g.total_degree() })
        .collect();
    elems.push(Element {
        terms: to_terms(tracked, ord),
        cof: Some(vec![(Monomial::one(n), Rational::one())]),
        sugar: tracked.total_degree(),
    });
    compute(elems, ord, limits)
}

/// Reduces `p` by a tracked basis; returns (remainder, accumulated cofactor).
pub(crate) fn tracked_reduce(ord: MonomialOrder, p: Terms, basis: &[Element]) -> (Terms, Terms) {
    let refs: Vec<&Element> = basis.iter().collect();
    let r = reduce(ord, Element { terms: p, cof: Some(Vec::new()), sugar: 0 }, &refs);
    // Reduction subtracts multiples; the cofactor of `p - remainder` is the negation.
    let cof = r.cof.unwrap_or_default().into_iter().map(|(m, c)| (m, -c)).collect();
    (r.terms, cof)
}
