use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{AlgebraError, Result};
use crate::monomial::Monomial;
use crate::poly::{Degree, Poly};
use crate::vars::VarTable;
use crate::Rational;

/// A rational function `num / den` with polynomial numerator and denominator.
///
/// Only monomial factors are cancelled; the representation is not reduced by
/// polynomial gcds. The denominator always has leading coefficient one.
#[derive(Clone, PartialEq, Eq)]
pub struct Fraction {
    num: Poly,
    den: Poly,
}

impl fmt::Debug for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fraction({self})")
    }
}

impl Fraction {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(AlgebraError::Invalid("zero denominator".into()));
        }
        Ok(Self::normalised(num, den))
    }

    pub fn from_poly(p: Poly) -> Self {
        let den = Poly::one(p.table());
        Fraction { num: p, den }
    }

    pub fn zero(table: &Arc<VarTable>) -> Self {
        Self::from_poly(Poly::zero(table))
    }

    pub fn one(table: &Arc<VarTable>) -> Self {
        Self::from_poly(Poly::one(table))
    }

    fn normalised(num: Poly, den: Poly) -> Self {
        let table = num.table().clone();
        if num.is_zero() {
            return Self::zero(&table);
        }
        let mut g: Option<Monomial> = None;
        for (m, _) in num.terms().iter().chain(den.terms()) {
            g = Some(match g {
                None => m.clone(),
                Some(h) => h.gcd(m),
            });
        }
        let g = g.expect("nonempty");
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (divide_monomial(&num, &g), divide_monomial(&den, &g))
        };
        let lc = den.leading_coefficient();
        if lc.is_one() {
            Fraction { num, den }
        } else {
            let inv = lc.recip();
            Fraction { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn table(&self) -> &Arc<VarTable> {
        self.num.table()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The polynomial if the denominator is one.
    pub fn as_poly(&self) -> Option<&Poly> {
        self.den.is_constant().then_some(&self.num)
    }

    pub fn weighted_degree(&self) -> Option<i64> {
        match (self.num.weighted_degree(), self.den.weighted_degree()) {
            (Degree::Homogeneous(a), Degree::Homogeneous(b)) => Some(a as i64 - b as i64),
            _ => None,
        }
    }

    pub fn add(&self, other: &Fraction) -> Fraction {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Fraction) -> Fraction {
        self.combine(other, true)
    }

    fn combine(&self, other: &Fraction, negate: bool) -> Fraction {
        let rhs_num = if negate { -&other.num } else { other.num.clone() };
        if self.den == other.den {
            return Self::normalised(&self.num + &rhs_num, self.den.clone());
        }
        if let (Some(m1), Some(m2)) = (monomial_of(&self.den), monomial_of(&other.den)) {
            let l = m1.lcm(&m2);
            let one = Rational::one();
            let a = self.num.mul_monomial(&m1.quotient_of(&l), &one);
            let b = rhs_num.mul_monomial(&m2.quotient_of(&l), &one);
            let den = Poly::monomial(self.table(), l, one);
            return Self::normalised(&a + &b, den);
        }
        let num = &(&self.num * &other.den) + &(&rhs_num * &self.den);
        Self::normalised(num, &self.den * &other.den)
    }

    pub fn mul(&self, other: &Fraction) -> Fraction {
        Self::normalised(&self.num * &other.num, &self.den * &other.den)
    }

    pub fn div(&self, other: &Fraction) -> Result<Fraction> {
        if other.is_zero() {
            return Err(AlgebraError::Invalid("division by zero".into()));
        }
        Ok(Self::normalised(&self.num * &other.den, &self.den * &other.num))
    }

    pub fn neg(&self) -> Fraction {
        Fraction { num: -&self.num, den: self.den.clone() }
    }

    pub fn scale(&self, c: &Rational) -> Fraction {
        Self::normalised(self.num.scale(c), self.den.clone())
    }

    pub fn pow(&self, n: u32) -> Fraction {
        Self::normalised(self.num.pow(n), self.den.pow(n))
    }

    /// Evaluates a polynomial whose variables are sent to `images`.
    pub fn substitute(p: &Poly, target: &Arc<VarTable>, images: &[Fraction]) -> Fraction {
        assert_eq!(images.len(), p.table().len());
        let mut acc = Fraction::zero(target);
        for (m, c) in p.terms() {
            let mut t = Fraction::from_poly(Poly::constant(target, c.clone()));
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t = t.mul(&images[i].pow(e));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Applies `substitute` to numerator and denominator.
    pub fn compose(&self, target: &Arc<VarTable>, images: &[Fraction]) -> Result<Fraction> {
        let n = Self::substitute(&self.num, target, images);
        let d = Self::substitute(&self.den, target, images);
        n.div(&d)
    }

    pub fn eval(&self, point: &[Rational]) -> Option<Rational> {
        let d = self.den.eval(point);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(point) / d)
        }
    }

    /// `num * other.den == other.num * den`.
    pub fn same_value(&self, other: &Fraction) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

fn monomial_of(p: &Poly) -> Option<Monomial> {
    match p.terms() {
        [(m, c)] if c.is_one() => Some(m.clone()),
        _ => None,
    }
}

fn divide_monomial(p: &Poly, g: &Monomial) -> Poly {
    let terms = p.terms().iter().map(|(m, c)| (g.quotient_of(m), c.clone()));
    Poly::from_terms(p.table(), terms)
}

impl From<Poly> for Fraction {
    fn from(p: Poly) -> Self {
        Fraction::from_poly(p)
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            return write!(f, "{}", self.num);
        }
        if self.num.len() == 1 {
            write!(f, "{}", self.num)?;
        } else {
            write!(f, "({})", self.num)?;
        }
        let bare = matches!(self.den.terms(), [(m, c)] if c.is_one() && m.exponents().iter().filter(|&&e| e > 0).count() == 1);
        if bare {
            write!(f, "/{}", self.den)
        } else {
            write!(f, "/({})", self.den)
        }
    }
}
