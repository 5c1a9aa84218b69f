use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::gcd::{gcd, lcm};
use super::{Polynomial, Scalar};
use crate::error::{Error, Result};

/// A reduced quotient `num / den` of polynomials.
///
/// `den` is nonzero and monic under graded-lex order, and `gcd(num, den) = 1`,
/// so structural equality is equality of rational functions. Zero is `0/1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn zero(vars: usize) -> Self {
        RationalFunction { num: Polynomial::zero(vars), den: Polynomial::one(vars) }
    }

    pub fn one(vars: usize) -> Self {
        RationalFunction::from_poly(Polynomial::one(vars))
    }

    pub fn constant(vars: usize, c: Scalar) -> Self {
        RationalFunction::from_poly(Polynomial::constant(vars, c))
    }

    pub fn from_poly(p: Polynomial) -> Self {
        let den = Polynomial::one(p.vars());
        RationalFunction { num: p, den }
    }

    /// `num / den`, reduced. Fails on a zero denominator.
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        Ok(RationalFunction::normalized(num, den))
    }

    fn normalized(num: Polynomial, den: Polynomial) -> Self {
        if num.is_zero() {
            return RationalFunction::zero(num.vars());
        }
        if let Some(c) = den.as_constant() {
            let inv = c.inv().expect("denominator is nonzero");
            return RationalFunction::from_poly(num.scale(&inv));
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g).expect("gcd divides"), den.exact_div(&g).expect("gcd divides"))
        };
        RationalFunction::with_monic_den(num, den)
    }

    fn with_monic_den(num: Polynomial, den: Polynomial) -> Self {
        let lc = den.leading().expect("nonzero").1.clone();
        if lc.is_one() {
            RationalFunction { num, den }
        } else {
            let inv = lc.inv().expect("nonzero");
            RationalFunction { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn vars(&self) -> usize {
        self.num.vars()
    }

    pub fn numer(&self) -> &Polynomial {
        &self.num
    }

    pub fn denom(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<Scalar> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    /// A rough size used to pick cheap pivots.
    pub fn weight(&self) -> usize {
        self.num.len() + self.den.len()
    }

    pub fn inv(&self) -> Option<RationalFunction> {
        if self.is_zero() {
            return None;
        }
        Some(RationalFunction::with_monic_den(self.den.clone(), self.num.clone()))
    }

    pub fn scale(&self, c: &Scalar) -> RationalFunction {
        if c.is_zero() {
            return RationalFunction::zero(self.vars());
        }
        RationalFunction { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn mul_poly(&self, p: &Polynomial) -> RationalFunction {
        self * &RationalFunction::from_poly(p.clone())
    }

    /// `∂r/∂x_{j+1}` by the quotient rule.
    pub fn derive(&self, j: usize) -> Result<RationalFunction> {
        let dn = self.num.derive(j)?;
        if self.den.is_one() {
            return Ok(RationalFunction::from_poly(dn));
        }
        let dd = self.den.derive(j)?;
        if dd.is_zero() {
            return Ok(RationalFunction::normalized(dn, self.den.clone()));
        }
        // (n/d)' = (n'd − nd')/d²; gcd(d, d') cancels first to keep sizes down.
        let g = gcd(&self.den, &dd);
        let d_red = self.den.exact_div(&g).expect("gcd divides");
        let dd_red = dd.exact_div(&g).expect("gcd divides");
        let num = &(&dn * &d_red) - &(&self.num * &dd_red);
        let den = &self.den * &d_red;
        Ok(RationalFunction::normalized(num, den))
    }

    /// Exact value at `point`; `EvaluationAtPole` if the denominator vanishes.
    pub fn eval(&self, point: &[Scalar]) -> Result<Scalar> {
        let d = self.den.eval(point)?;
        let n = self.num.eval(point)?;
        let inv = d.inv().ok_or(Error::EvaluationAtPole)?;
        Ok(&n * &inv)
    }

    pub fn is_defined_at(&self, point: &[Scalar]) -> bool {
        matches!(self.den.eval(point), Ok(d) if !d.is_zero())
    }
}

/// The least common multiple of the denominators: the smallest monic `w`
/// with `w·r` polynomial for every `r`. The empty list gives 1.
pub fn common_denominator<'a>(vars: usize, rs: impl IntoIterator<Item = &'a RationalFunction>) -> Polynomial {
    let mut acc = Polynomial::one(vars);
    for r in rs {
        if !r.den.is_one() {
            acc = lcm(&acc, &r.den);
        }
    }
    acc
}

impl Add<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RationalFunction::from_poly(&self.num + &rhs.num);
        }
        if self.den == rhs.den {
            return RationalFunction::normalized(&self.num + &rhs.num, self.den.clone());
        }
        let g = gcd(&self.den, &rhs.den);
        let a = self.den.exact_div(&g).expect("gcd divides");
        let b = rhs.den.exact_div(&g).expect("gcd divides");
        let num = &(&self.num * &b) + &(&rhs.num * &a);
        let den = &a * &rhs.den;
        RationalFunction::normalized(num, den)
    }
}

impl Sub<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &-rhs
    }
}

impl Mul<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero(self.vars());
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RationalFunction::from_poly(&self.num * &rhs.num);
        }
        if let Some(c) = self.as_constant() {
            return rhs.scale(&c);
        }
        if let Some(c) = rhs.as_constant() {
            return self.scale(&c);
        }
        // cross-cancel: gcd(a, d) and gcd(c, b) for (a/b)(c/d)
        let g1 = gcd(&self.num, &rhs.den);
        let g2 = gcd(&rhs.num, &self.den);
        let a = self.num.exact_div(&g1).expect("gcd divides");
        let d = rhs.den.exact_div(&g1).expect("gcd divides");
        let c = rhs.num.exact_div(&g2).expect("gcd divides");
        let b = self.den.exact_div(&g2).expect("gcd divides");
        let den = &b * &d;
        if den.is_constant() {
            let inv = den.as_constant().and_then(|k| k.inv()).expect("nonzero");
            return RationalFunction::from_poly((&a * &c).scale(&inv));
        }
        RationalFunction::with_monic_den(&a * &c, den)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}) / ({:?})", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Polynomial {
        Polynomial::var(1, 0)
    }

    fn k(c: i64) -> Polynomial {
        Polynomial::constant(1, Scalar::from_int(c))
    }

    fn rf(n: Polynomial, d: Polynomial) -> RationalFunction {
        RationalFunction::new(n, d).unwrap()
    }

    #[test]
    fn derive_reciprocal() {
        let r = rf(k(1), x());
        assert_eq!(r.derive(0).unwrap(), rf(k(-1), x().pow(2)));
    }

    #[test]
    fn derive_two_over_square() {
        let r = rf(k(2), x().pow(2));
        assert_eq!(r.derive(0).unwrap(), rf(k(-4), x().pow(3)));
    }

    #[test]
    fn derive_constant() {
        assert!(RationalFunction::constant(1, Scalar::from_int(5)).derive(0).unwrap().is_zero());
    }

    #[test]
    fn eval_cases() {
        let r = rf(k(2), x().pow(2));
        assert_eq!(r.eval(&[Scalar::from_int(2)]).unwrap(), Scalar::ratio(1, 2));
        let p = RationalFunction::from_poly(&x().pow(2) - &k(1));
        assert!(p.eval(&[Scalar::one()]).unwrap().is_zero());
        let pole = rf(k(1), x());
        assert_eq!(pole.eval(&[Scalar::zero()]), Err(Error::EvaluationAtPole));
    }

    #[test]
    fn common_denominator_cases() {
        let a = rf(k(1), x());
        let b = rf(k(2), x().pow(2));
        assert_eq!(common_denominator(1, [&a, &b]), x().pow(2));
        assert!(common_denominator(1, []).is_one());
        let c = rf(x(), &x() - &k(1));
        let d = rf(k(1), &x() + &k(1));
        assert_eq!(common_denominator(1, [&c, &d]), &(&x() - &k(1)) * &(&x() + &k(1)));
    }

    #[test]
    fn normalization_cancels() {
        let r = rf(&x().pow(2) - &k(1), (&x() - &k(1)).scale(&Scalar::from_int(3)));
        assert!(r.is_polynomial());
        assert_eq!(r.numer(), &(&x() + &k(1)).scale(&Scalar::ratio(1, 3)));
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(RationalFunction::new(x(), Polynomial::zero(1)).is_err());
    }
}
