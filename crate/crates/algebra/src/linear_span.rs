use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::monomial::Monomial;
use crate::poly::Poly;
use crate::Rational;

/// A `k`-linear combination of inserted vectors, keyed by insertion index.
pub type Witness = BTreeMap<usize, Rational>;

/// Incremental row-echelon basis for spans of polynomials viewed as vectors
/// over the monomial basis.
///
/// Every stored row remembers how it was built from the inserted vectors, so
/// a successful reduction also yields the coefficients expressing the target.
#[derive(Debug, Clone, Default)]
pub struct LinearSpan {
    rows: Vec<(Poly, Witness)>,
    pivots: HashMap<Monomial, usize>,
    inserted: usize,
}

fn axpy(acc: &mut Witness, c: &Rational, w: &Witness) {
    for (k, v) in w {
        let e = acc.entry(*k).or_insert_with(Rational::zero);
        *e += c * v;
        if e.is_zero() {
            acc.remove(k);
        }
    }
}

impl LinearSpan {
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of vectors inserted so far, dependent or not.
    pub fn inserted(&self) -> usize {
        self.inserted
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis. Returns the remainder and the witness `w`
    /// with `v = remainder + Σ w_k · inserted_k`.
    pub fn reduce(&self, v: &Poly) -> (Poly, Witness) {
        let mut rem = v.clone();
        let mut w = Witness::new();
        let mut idx = 0;
        loop {
            let hit = rem.terms()[idx.min(rem.len())..]
                .iter()
                .enumerate()
                .find_map(|(k, (m, c))| self.pivots.get(m).map(|&r| (idx + k, r, c.clone())));
            let Some((at, r, c)) = hit else { break };
            let (row, rw) = &self.rows[r];
            rem = &rem - &row.scale(&c);
            axpy(&mut w, &c, rw);
            idx = at;
        }
        (rem, w)
    }

    /// Inserts `v`; returns its index and whether it enlarged the span.
    pub fn insert(&mut self, v: &Poly) -> (usize, bool) {
        let id = self.inserted;
        self.inserted += 1;
        let (rem, w) = self.reduce(v);
        if rem.is_zero() {
            return (id, false);
        }
        let mut wit = Witness::new();
        wit.insert(id, Rational::one());
        axpy(&mut wit, &-Rational::one(), &w);
        let lc = rem.leading_coefficient();
        let inv = lc.recip();
        let row = rem.scale(&inv);
        let wit = wit.into_iter().map(|(k, c)| (k, c * &inv)).collect();
        self.pivots.insert(row.terms()[0].0.clone(), self.rows.len());
        self.rows.push((row, wit));
        (id, true)
    }

    pub fn contains(&self, v: &Poly) -> bool {
        self.reduce(v).0.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use crate::vars::VarTable;

    #[test]
    fn witnesses_reconstruct() {
        let t = VarTable::from_pairs(&[("x", 1), ("y", 1)]);
        let p = |s| parse_poly(s, &t).unwrap();
        let vs = [p("x + y"), p("x - y"), p("x^2")];
        let mut span = LinearSpan::new();
        for v in &vs {
            span.insert(v);
        }
        assert_eq!(span.rank(), 3);
        assert!(!span.insert(&p("3*x")).1);
        let target = p("2*x^2 + 5*y - x");
        let (rem, w) = span.reduce(&target);
        assert!(rem.is_zero());
        let mut sum = Poly::zero(&t);
        for (k, c) in &w {
            sum = &sum + &vs[*k].scale(c);
        }
        assert_eq!(sum, target);
    }
}
