//! Scalar operators kept as `den⁻¹·num` with a polynomial `den` and
//! polynomial coefficients in `num`, so that long chains of products and
//! sums need one gcd per sum instead of one per coefficient.

use std::collections::HashMap;

use super::operator::multi_binomial;
use super::{scalar_operator_product, Derivative, Dims, OperatorVector};
use crate::arith::{common_denominator, MultiIndex, Polynomial, RationalFunction, Scalar};

/// `den⁻¹·num`, the denominator kept as a formal product of monic factors
/// with exponents. Sums take the larger exponent of each factor, so no gcd
/// is ever needed; the product is a common multiple, not always the least.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Cleared {
    pub den: Vec<(Polynomial, u32)>,
    pub num: OperatorVector,
}

fn exponent(den: &[(Polynomial, u32)], f: &Polynomial) -> u32 {
    den.iter().find(|(g, _)| g == f).map_or(0, |(_, e)| *e)
}

pub(crate) fn expand(den: &[(Polynomial, u32)], vars: usize) -> Polynomial {
    den.iter().fold(Polynomial::one(vars), |acc, (f, e)| &acc * &f.pow(*e))
}

impl Cleared {
    pub fn zero(vars: usize) -> Self {
        Cleared { den: Vec::new(), num: OperatorVector::zero(Dims::new(vars, 1)) }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `den⁻¹·num` for a nonzero polynomial `den` and polynomial `num`.
    pub fn over(den: &Polynomial, num: OperatorVector) -> Self {
        let lc = den.leading().expect("nonzero denominator").1.clone();
        let num = if lc.is_one() { num } else { num.left_scale(&RationalFunction::constant(den.vars(), lc.inv().expect("nonzero"))) };
        if den.is_constant() {
            Cleared { den: Vec::new(), num }
        } else {
            Cleared { den: vec![(den.monic(), 1)], num }
        }
    }

    pub fn from_operator(l: &OperatorVector) -> Self {
        let d = common_denominator(l.vars(), l.coefficients());
        let den = if d.is_one() { Vec::new() } else { vec![(d.clone(), 1)] };
        Cleared { num: l.left_scale_poly(&d), den }
    }

    pub fn add(&self, other: &Cleared) -> Cleared {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let vars = self.num.vars();
        let mut den = self.den.clone();
        for (f, e) in &other.den {
            match den.iter_mut().find(|(g, _)| g == f) {
                Some((_, k)) => *k = (*k).max(*e),
                None => den.push((f.clone(), *e)),
            }
        }
        let lift = |mine: &[(Polynomial, u32)]| -> Polynomial {
            den.iter().fold(Polynomial::one(vars), |acc, (f, e)| &acc * &f.pow(e - exponent(mine, f)))
        };
        let a = lift(&self.den);
        let b = lift(&other.den);
        Cleared { num: &self.num.left_scale_poly(&a) + &other.num.left_scale_poly(&b), den }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Cleared) -> Cleared {
        if self.is_zero() || other.is_zero() {
            return Cleared::zero(self.num.vars());
        }
        let b = expand(&other.den, self.num.vars());
        let (k, moved) = move_inverse_left(&self.num, &b);
        let mut den = self.den.clone();
        for (f, e) in &other.den {
            match den.iter_mut().find(|(g, _)| g == f) {
                Some((_, x)) => *x += k * e,
                None => den.push((f.clone(), k * e)),
            }
        }
        Cleared { den, num: scalar_operator_product(&moved, &other.num) }
    }
}

/// `a ∘ b⁻¹ = b^(−k) · moved` with polynomial coefficients in `moved`, using
/// `∂^γ(1/b) = P_γ / b^(|γ|+1)`.
fn move_inverse_left(a: &OperatorVector, b: &Polynomial) -> (u32, OperatorVector) {
    if let Some(c) = b.as_constant() {
        let inv = c.inv().expect("nonzero denominator");
        return (0, a.left_scale(&RationalFunction::constant(b.vars(), inv)));
    }
    let r = a.order();
    let mut numerators: HashMap<MultiIndex, Polynomial> = HashMap::new();
    let mut out = OperatorVector::zero(a.dims());
    for (d, f) in a.terms() {
        for gamma in d.alpha.divisors() {
            let p = inverse_derivative(b, &gamma, &mut numerators);
            if p.is_zero() {
                continue;
            }
            let c = Scalar::from_bigint(multi_binomial(&d.alpha, &gamma));
            let coeff = (&(f.numer() * &p) * &b.pow(r - gamma.total())).scale(&c);
            let target = Derivative::new(0, d.alpha.checked_sub(&gamma).expect("γ ≤ α"));
            out.add_term(target, &RationalFunction::from_poly(coeff));
        }
    }
    (r + 1, out)
}

/// `P_γ` with `∂^γ(1/b) = P_γ / b^(|γ|+1)`.
fn inverse_derivative(b: &Polynomial, gamma: &MultiIndex, memo: &mut HashMap<MultiIndex, Polynomial>) -> Polynomial {
    if gamma.is_zero() {
        return Polynomial::one(b.vars());
    }
    if let Some(p) = memo.get(gamma) {
        return p.clone();
    }
    let j = gamma.as_slice().iter().position(|&e| e > 0).expect("nonzero");
    let lower = gamma.with(j, gamma.get(j) - 1);
    let pl = inverse_derivative(b, &lower, memo);
    let k = Scalar::from_int(i64::from(lower.total()) + 1);
    let p = &(&pl.derive(j).expect("j < vars") * b) - &(&pl * &b.derive(j).expect("j < vars")).scale(&k);
    memo.insert(gamma.clone(), p.clone());
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Polynomial {
        Polynomial::var(1, 0)
    }

    fn rf(p: Polynomial) -> RationalFunction {
        RationalFunction::from_poly(p)
    }

    fn as_operator(c: &Cleared) -> OperatorVector {
        c.num.left_scale(&RationalFunction::new(Polynomial::one(1), expand(&c.den, 1)).unwrap())
    }

    #[test]
    fn compose_matches_rational_product() {
        let dims = Dims::new(1, 1);
        let d = |k: u32| Derivative::new(0, MultiIndex::from_slice(&[k]));
        let inv_x = RationalFunction::new(Polynomial::one(1), x()).unwrap();
        let a = OperatorVector::from_terms(dims, [(d(2), rf(x())), (d(0), rf(&x() + &Polynomial::one(1)))]);
        let b = OperatorVector::from_terms(dims, [(d(1), inv_x.clone()), (d(0), &inv_x * &inv_x)]);
        let got = Cleared::from_operator(&a).compose(&Cleared::from_operator(&b));
        assert_eq!(as_operator(&got), scalar_operator_product(&a, &b));
        let sum = Cleared::from_operator(&a).add(&Cleared::from_operator(&b));
        assert_eq!(as_operator(&sum), &a + &b);
    }
}
