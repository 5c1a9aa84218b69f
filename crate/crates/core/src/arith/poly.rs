//! Sparse multivariate polynomials over ℚ(i).

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use super::{MultiIndex, Scalar};
use crate::error::{Error, Result};

/// A polynomial in `vars` variables, stored as a map from exponent vector to
/// a nonzero coefficient. Terms are kept in graded-lex order so the leading
/// term is the last entry.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Polynomial {
    vars: usize,
    terms: BTreeMap<MultiIndex, Scalar>,
}

impl Polynomial {
    pub fn zero(vars: usize) -> Self {
        Polynomial { vars, terms: BTreeMap::new() }
    }

    pub fn one(vars: usize) -> Self {
        Polynomial::constant(vars, Scalar::one())
    }

    pub fn constant(vars: usize, c: Scalar) -> Self {
        Polynomial::monomial(vars, MultiIndex::zero(vars), c)
    }

    pub fn monomial(vars: usize, exps: MultiIndex, c: Scalar) -> Self {
        debug_assert_eq!(exps.len(), vars);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Polynomial { vars, terms }
    }

    /// The variable `x_{j+1}` (zero based `j`).
    pub fn var(vars: usize, j: usize) -> Self {
        Polynomial::monomial(vars, MultiIndex::unit(vars, j), Scalar::one())
    }

    pub fn from_terms(vars: usize, terms: impl IntoIterator<Item = (MultiIndex, Scalar)>) -> Self {
        let mut p = Polynomial::zero(vars);
        for (e, c) in terms {
            p.add_term(e, &c);
        }
        p
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&MultiIndex, &Scalar)> + ExactSizeIterator {
        self.terms.iter()
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

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().next().map(|(e, c)| e.is_zero() && c.is_one()).unwrap_or(false)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(MultiIndex::is_zero)
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Constant term value, or `None` if the polynomial is not constant.
    pub fn as_constant(&self) -> Option<Scalar> {
        if self.is_zero() {
            return Some(Scalar::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    pub fn coeff(&self, e: &MultiIndex) -> Scalar {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<(&MultiIndex, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(MultiIndex::total).max().unwrap_or(0)
    }

    pub fn degree_in(&self, j: usize) -> u32 {
        self.terms.keys().map(|e| e.get(j)).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, e: MultiIndex, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.vars);
        }
        Polynomial {
            vars: self.vars,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    /// Multiply by `c·x^e`.
    pub fn mul_term(&self, e: &MultiIndex, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.vars);
        }
        Polynomial {
            vars: self.vars,
            terms: self.terms.iter().map(|(f, a)| (f.add(e), a * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut acc = Polynomial::one(self.vars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Scale so the graded-lex leading coefficient is 1. Zero stays zero.
    pub fn monic(&self) -> Polynomial {
        match self.leading() {
            Some((_, c)) if !c.is_one() => self.scale(&c.inv().expect("leading coefficient is nonzero")),
            _ => self.clone(),
        }
    }

    /// `∂p/∂x_{j+1}`.
    pub fn derive(&self, j: usize) -> Result<Polynomial> {
        if j >= self.vars {
            return Err(Error::IndexOutOfRange { index: j, vars: self.vars });
        }
        let mut out = Polynomial::zero(self.vars);
        for (e, c) in &self.terms {
            let k = e.get(j);
            if k > 0 {
                out.add_term(e.with(j, k - 1), &(c * &Scalar::from_int(k as i64)));
            }
        }
        Ok(out)
    }

    pub fn eval(&self, point: &[Scalar]) -> Result<Scalar> {
        if point.len() != self.vars {
            return Err(Error::DimensionMismatch(format!(
                "point has {} coordinates, polynomial has {} variables",
                point.len(),
                self.vars
            )));
        }
        let mut acc = Scalar::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (j, &k) in e.as_slice().iter().enumerate() {
                if k > 0 {
                    t = &t * &point[j].pow(k);
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Exact quotient `self / divisor`, or `None` if the division leaves a
    /// remainder. Uses graded-lex long division, which is exact for a single
    /// divisor.
    pub fn exact_div(&self, divisor: &Polynomial) -> Option<Polynomial> {
        let (lm, lc) = divisor.leading()?;
        if divisor.is_one() {
            return Some(self.clone());
        }
        let lc_inv = lc.inv()?;
        let mut rem = self.clone();
        let mut quot = Polynomial::zero(self.vars);
        while let Some((re, rc)) = rem.leading() {
            let shift = re.checked_sub(lm)?;
            let c = -&(rc * &lc_inv);
            for (f, a) in &divisor.terms {
                rem.add_term(f.add(&shift), &(a * &c));
            }
            quot.add_term(shift, &-&c);
        }
        Some(quot)
    }

    /// Coefficients with respect to variable `j`: exponent of `x_j` mapped to
    /// a polynomial free of `x_j`.
    pub(crate) fn coefficients_in(&self, j: usize) -> BTreeMap<u32, Polynomial> {
        let mut out: BTreeMap<u32, Polynomial> = BTreeMap::new();
        for (e, c) in &self.terms {
            out.entry(e.get(j))
                .or_insert_with(|| Polynomial::zero(self.vars))
                .add_term(e.with(j, 0), c);
        }
        out
    }
}

impl Add<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        debug_assert_eq!(self.vars, rhs.vars);
        let (big, small) = if self.len() >= rhs.len() { (self, rhs) } else { (rhs, self) };
        let mut out = big.clone();
        for (e, c) in &small.terms {
            out.add_term(e.clone(), c);
        }
        out
    }
}

impl Sub<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        debug_assert_eq!(self.vars, rhs.vars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), &-c);
        }
        out
    }
}

impl Mul<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        debug_assert_eq!(self.vars, rhs.vars);
        if self.is_one() {
            return rhs.clone();
        }
        if rhs.is_one() {
            return self.clone();
        }
        let mut out = Polynomial::zero(self.vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1.add(e2), &(c1 * c2));
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            vars: self.vars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}
