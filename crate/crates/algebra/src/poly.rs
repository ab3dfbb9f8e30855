use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::monomial::{Monomial, MonomialOrder};
use crate::vars::VarTable;
use crate::Rational;

/// Weighted degree of a polynomial under the grading stored in its table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degree {
    /// The zero polynomial; deliberately not a number.
    Zero,
    Homogeneous(u64),
    Inhomogeneous,
}

impl Degree {
    pub fn value(self) -> Option<u64> {
        match self {
            Degree::Homogeneous(d) => Some(d),
            _ => None,
        }
    }
}

/// Sparse polynomial with rational coefficients over a shared [`VarTable`].
///
/// Terms are kept in strictly descending grevlex order with no zero
/// coefficients, so equal polynomials have identical term lists.
#[derive(Clone)]
pub struct Poly {
    table: Arc<VarTable>,
    terms: Vec<(Monomial, Rational)>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && (Arc::ptr_eq(&self.table, &other.table) || self.table == other.table)
    }
}

impl Eq for Poly {}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

const CANONICAL: MonomialOrder = MonomialOrder::GrevLex;

impl Poly {
    pub fn zero(table: &Arc<VarTable>) -> Self {
        Poly { table: table.clone(), terms: Vec::new() }
    }

    pub fn one(table: &Arc<VarTable>) -> Self {
        Self::constant(table, Rational::one())
    }

    pub fn constant(table: &Arc<VarTable>, c: Rational) -> Self {
        Self::from_terms(table, [(Monomial::one(table.len()), c)])
    }

    pub fn var(table: &Arc<VarTable>, i: usize) -> Self {
        Poly { table: table.clone(), terms: vec![(Monomial::var(table.len(), i), Rational::one())] }
    }

    /// Looks up a variable by name; panics if absent.
    pub fn named(table: &Arc<VarTable>, name: &str) -> Self {
        let i = table.position(name).unwrap_or_else(|| panic!("no variable `{name}`"));
        Self::var(table, i)
    }

    pub fn monomial(table: &Arc<VarTable>, m: Monomial, c: Rational) -> Self {
        Self::from_terms(table, [(m, c)])
    }

    /// Builds a canonical polynomial, merging duplicate monomials.
    pub fn from_terms(table: &Arc<VarTable>, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (m, c) in terms {
            debug_assert_eq!(m.len(), table.len());
            if c.is_zero() {
                continue;
            }
            *acc.entry(m).or_insert_with(Rational::zero) += c;
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| CANONICAL.cmp_mono(&b.0, &a.0));
        Poly { table: table.clone(), terms }
    }

    /// Trusts that `terms` is already canonical.
    pub(crate) fn from_sorted(table: &Arc<VarTable>, terms: Vec<(Monomial, Rational)>) -> Self {
        Poly { table: table.clone(), terms }
    }

    pub fn table(&self) -> &Arc<VarTable> {
        &self.table
    }

    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, Rational)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// The constant term (zero if absent).
    pub fn constant_term(&self) -> Rational {
        self.terms
            .iter()
            .find(|(m, _)| m.is_one())
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn leading_term(&self) -> Option<&(Monomial, Rational)> {
        self.terms.first()
    }

    pub fn leading_coefficient(&self) -> Rational {
        self.terms.first().map(|t| t.1.clone()).unwrap_or_else(Rational::zero)
    }

    /// Index of the variable if the polynomial is exactly `x_i`.
    pub fn as_variable(&self) -> Option<usize> {
        match self.terms.as_slice() {
            [(m, c)] if c.is_one() => m.as_variable(),
            _ => None,
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.total_degree()).max().unwrap_or(0)
    }

    pub fn weighted_degree(&self) -> Degree {
        let weights = self.table.weights();
        let mut degrees = self.terms.iter().map(|(m, _)| m.weighted_degree(weights));
        match degrees.next() {
            None => Degree::Zero,
            Some(d) => {
                if degrees.all(|e| e == d) {
                    Degree::Homogeneous(d)
                } else {
                    Degree::Inhomogeneous
                }
            }
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        !matches!(self.weighted_degree(), Degree::Inhomogeneous)
    }

    /// Homogeneous pieces in strictly increasing degree; they sum to `self`.
    pub fn homogeneous_components(&self) -> Vec<(u64, Poly)> {
        let weights = self.table.weights();
        let mut buckets: Vec<(u64, Vec<(Monomial, Rational)>)> = Vec::new();
        for (m, c) in &self.terms {
            let d = m.weighted_degree(weights);
            match buckets.iter_mut().find(|(e, _)| *e == d) {
                Some((_, ts)) => ts.push((m.clone(), c.clone())),
                None => buckets.push((d, vec![(m.clone(), c.clone())])),
            }
        }
        buckets.sort_by_key(|(d, _)| *d);
        buckets.into_iter().map(|(d, ts)| (d, Poly::from_sorted(&self.table, ts))).collect()
    }

    /// Variables that occur in some term.
    pub fn support(&self) -> Vec<usize> {
        (0..self.table.len())
            .filter(|&i| self.terms.iter().any(|(m, _)| m.exp(i) > 0))
            .collect()
    }

    pub fn involves(&self, i: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.exp(i) > 0)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.table);
        }
        Poly {
            table: self.table.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.table);
        }
        // Multiplying by a monomial preserves the order of terms.
        Poly {
            table: self.table.clone(),
            terms: self.terms.iter().map(|(t, a)| (t.mul(m), a * c)).collect(),
        }
    }

    /// Scales so the leading coefficient is one.
    pub fn monic(&self) -> Poly {
        match self.terms.first() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    /// Normalises the sign and content so the leading coefficient is positive
    /// and all coefficients are coprime integers.
    pub fn primitive(&self) -> Poly {
        use num_integer::Integer;
        if self.is_zero() {
            return self.clone();
        }
        let mut den_lcm = num_bigint::BigInt::one();
        for (_, c) in &self.terms {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut num_gcd = num_bigint::BigInt::zero();
        for (_, c) in &self.terms {
            let n = c.numer() * (&den_lcm / c.denom());
            num_gcd = num_gcd.gcd(&n);
        }
        let mut factor = Rational::new(den_lcm, num_gcd);
        if self.leading_coefficient().is_negative() {
            factor = -factor;
        }
        self.scale(&factor)
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut result = Poly::one(&self.table);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn derivative(&self, i: usize) -> Poly {
        let terms = self.terms.iter().filter(|(m, _)| m.exp(i) > 0).map(|(m, c)| {
            let mut e = m.exponents().to_vec();
            let k = e[i];
            e[i] -= 1;
            (Monomial::from_exponents(e), c * Rational::from_integer(k.into()))
        });
        Poly::from_terms(&self.table, terms)
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.table.len());
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t *= num_traits::pow(point[i].clone(), e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Ring map sending variable `i` to `images[i]`, all over `target`.
    pub fn substitute(&self, target: &Arc<VarTable>, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.table.len());
        let mut powers: Vec<Vec<Poly>> = vec![Vec::new(); images.len()];
        let mut acc = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(target, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[i];
                if cache.is_empty() {
                    cache.push(Poly::one(target));
                }
                while cache.len() <= e as usize {
                    let next = cache.last().unwrap() * &images[i];
                    cache.push(next);
                }
                t = &t * &cache[e as usize];
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Renames variables: variable `i` of `self` becomes variable `map[i]` of `target`.
    pub fn remap(&self, target: &Arc<VarTable>, map: &[usize]) -> Poly {
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = vec![0; target.len()];
            for (i, &k) in m.exponents().iter().enumerate() {
                if k > 0 {
                    e[map[i]] += k;
                }
            }
            (Monomial::from_exponents(e), c.clone())
        });
        Poly::from_terms(target, terms)
    }

    /// Moves the polynomial into `target`, matching variables by name.
    /// Panics if a used variable does not exist in `target`.
    pub fn rename_into(&self, target: &Arc<VarTable>) -> Poly {
        let map: Vec<usize> = (0..self.table.len())
            .map(|i| target.position(self.table.name(i)).unwrap_or(usize::MAX))
            .collect();
        for i in self.support() {
            assert!(map[i] != usize::MAX, "variable `{}` missing in target", self.table.name(i));
        }
        let map: Vec<usize> = map.into_iter().map(|k| if k == usize::MAX { 0 } else { k }).collect();
        self.remap(target, &map)
    }

    fn check_table(&self, other: &Poly) {
        debug_assert!(
            Arc::ptr_eq(&self.table, &other.table) || *self.table == *other.table,
            "polynomials over different tables"
        );
    }
}

fn merge_add(a: &[(Monomial, Rational)], b: &[(Monomial, Rational)], negate_b: bool) -> Vec<(Monomial, Rational)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match CANONICAL.cmp_mono(&a[i].0, &b[j].0) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                let c = if negate_b { -b[j].1.clone() } else { b[j].1.clone() };
                out.push((b[j].0.clone(), c));
                j += 1;
            }
            Ordering::Equal => {
                let c = if negate_b { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                if !c.is_zero() {
                    out.push((a[i].0.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    for t in &b[j..] {
        let c = if negate_b { -t.1.clone() } else { t.1.clone() };
        out.push((t.0.clone(), c));
    }
    out
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.check_table(rhs);
        Poly::from_sorted(&self.table, merge_add(&self.terms, &rhs.terms, false))
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.check_table(rhs);
        Poly::from_sorted(&self.table, merge_add(&self.terms, &rhs.terms, true))
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.check_table(rhs);
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(&self.table);
        }
        if rhs.terms.len() == 1 {
            return self.mul_monomial(&rhs.terms[0].0, &rhs.terms[0].1);
        }
        if self.terms.len() == 1 {
            return rhs.mul_monomial(&self.terms[0].0, &self.terms[0].1);
        }
        let products = self
            .terms
            .iter()
            .flat_map(|(m, a)| rhs.terms.iter().map(move |(n, b)| (m.mul(n), a * b)));
        Poly::from_terms(&self.table, products)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            table: self.table.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $f(self, rhs: Poly) -> Poly {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $f(self, rhs: &Poly) -> Poly {
                (&self).$f(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}
