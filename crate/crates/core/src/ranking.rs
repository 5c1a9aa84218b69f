//! Heads under the standard ranking, monic normalization, and full
//! reduction by substitution rules with cofactor tracking.

use std::collections::{BTreeMap, HashMap};

use crate::arith::{MultiIndex, RationalFunction};
use crate::error::{Error, Result};
use crate::weyl::{scalar_operator_product, Derivative, OperatorVector};

pub use crate::weyl::compare_derivatives;

/// `hd p`, `hc p` and `deg p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeadData {
    pub head: Derivative,
    pub coefficient: RationalFunction,
    pub degree: u32,
}

pub fn head_of(p: &OperatorVector) -> Result<HeadData> {
    let (d, c) = p.leading().ok_or(Error::ZeroOperator)?;
    Ok(HeadData { head: d.clone(), coefficient: c.clone(), degree: d.order() })
}

/// `(hc p)^{-1} · p`.
pub fn make_monic(p: &OperatorVector) -> Result<OperatorVector> {
    let h = head_of(p)?;
    if h.coefficient.is_one() {
        return Ok(p.clone());
    }
    Ok(p.left_scale(&h.coefficient.inv().expect("head coefficient is nonzero")))
}

/// Result of [`reduce_full`]: `input = Σ_j cofactors[j]·rules[j] + normal_form`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReductionTrace {
    pub normal_form: OperatorVector,
    /// Scalar-operator cofactors keyed by rule index; rules that were never
    /// used are absent.
    pub cofactors: BTreeMap<usize, OperatorVector>,
}

impl ReductionTrace {
    /// `Σ_j cofactors[j]·rules[j] + normal_form`, recomputed with products.
    pub fn reconstruct(&self, rules: &[OperatorVector]) -> OperatorVector {
        let mut acc = self.normal_form.clone();
        for (&j, h) in &self.cofactors {
            acc = &acc + &scalar_operator_product(h, &rules[j]);
        }
        acc
    }
}

/// A reducible spot: derivative `target` in the current operator, reducible
/// by `rule` with shift `gamma`.
#[derive(Debug, Clone)]
pub struct Reducible {
    pub target: Derivative,
    pub rule: usize,
    pub gamma: MultiIndex,
}

/// Fully reduce `p` by the monic `rules`, always rewriting the
/// ranking-highest reducible derivative; among rules whose head divides it,
/// the one with the highest head, then the lowest index.
pub fn reduce_full(p: &OperatorVector, rules: &[OperatorVector]) -> ReductionTrace {
    let heads = rule_heads(rules);
    let mut order: Vec<usize> = (0..rules.len()).collect();
    // highest head first, ties by index
    order.sort_by(|&a, &b| heads[b].cmp(&heads[a]).then(a.cmp(&b)));
    reduce_by(p, rules, &heads, |current| {
        for (d, _) in current.terms().rev() {
            for &j in &order {
                if d.is_multiple_of(&heads[j]) {
                    let gamma = d.alpha.checked_sub(&heads[j].alpha).expect("divides");
                    return Some(Reducible { target: d.clone(), rule: j, gamma });
                }
            }
        }
        None
    })
}

/// Full reduction with a caller-chosen strategy: `pick` receives every
/// reducible spot of the current operator and returns the index to rewrite.
pub fn reduce_full_with(
    p: &OperatorVector,
    rules: &[OperatorVector],
    mut pick: impl FnMut(&[Reducible]) -> usize,
) -> ReductionTrace {
    let heads = rule_heads(rules);
    reduce_by(p, rules, &heads, |current| {
        let mut spots = Vec::new();
        for (d, _) in current.terms() {
            for (j, h) in heads.iter().enumerate() {
                if d.is_multiple_of(h) {
                    let gamma = d.alpha.checked_sub(&h.alpha).expect("divides");
                    spots.push(Reducible { target: d.clone(), rule: j, gamma });
                }
            }
        }
        if spots.is_empty() {
            None
        } else {
            let k = pick(&spots).min(spots.len() - 1);
            Some(spots.swap_remove(k))
        }
    })
}

fn rule_heads(rules: &[OperatorVector]) -> Vec<Derivative> {
    rules
        .iter()
        .map(|r| {
            let (d, c) = r.leading().expect("rules are nonzero");
            debug_assert!(c.is_one(), "rules must be monic");
            d.clone()
        })
        .collect()
}

fn reduce_by(
    p: &OperatorVector,
    rules: &[OperatorVector],
    heads: &[Derivative],
    mut next: impl FnMut(&OperatorVector) -> Option<Reducible>,
) -> ReductionTrace {
    let vars = p.vars();
    let mut current = p.clone();
    let mut cofactors: BTreeMap<usize, OperatorVector> = BTreeMap::new();
    let mut shifted: HashMap<(usize, MultiIndex), OperatorVector> = HashMap::new();
    while let Some(step) = next(&current) {
        let c = current.coeff(&step.target);
        let key = (step.rule, step.gamma.clone());
        let rule_shift = shifted.entry(key).or_insert_with(|| rules[step.rule].left_mul_d(&step.gamma));
        debug_assert_eq!(rule_shift.leading().map(|(d, _)| d), Some(&step.target));
        debug_assert_eq!(heads[step.rule].shifted(&step.gamma), step.target);
        current = &current - &rule_shift.left_scale(&c);
        let term = OperatorVector::term(
            crate::weyl::Dims::new(vars, 1),
            Derivative::new(0, step.gamma),
            c,
        );
        let entry = cofactors.entry(step.rule).or_insert_with(|| OperatorVector::zero(term.dims()));
        *entry = &*entry + &term;
    }
    cofactors.retain(|_, h| !h.is_zero());
    ReductionTrace { normal_form: current, cofactors }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{Polynomial, Scalar};
    use crate::weyl::Dims;

    fn x() -> RationalFunction {
        RationalFunction::from_poly(Polynomial::var(1, 0))
    }

    fn k(c: i64) -> RationalFunction {
        RationalFunction::constant(1, Scalar::from_int(c))
    }

    fn d(n: u32) -> Derivative {
        Derivative::new(0, MultiIndex::from_slice(&[n]))
    }

    fn op(terms: &[(u32, RationalFunction)]) -> OperatorVector {
        OperatorVector::from_terms(Dims::new(1, 1), terms.iter().map(|(n, c)| (d(*n), c.clone())))
    }

    fn euler() -> OperatorVector {
        op(&[(2, &x() * &x()), (1, &k(-2) * &x()), (0, k(2))])
    }

    fn euler_monic() -> OperatorVector {
        let inv = x().inv().unwrap();
        op(&[(2, k(1)), (1, &k(-2) * &inv), (0, &k(2) * &(&inv * &inv))])
    }

    #[test]
    fn head_of_example() {
        let h = head_of(&euler()).unwrap();
        assert_eq!(h.head, d(2));
        assert_eq!(h.coefficient, &x() * &x());
        assert_eq!(h.degree, 2);
    }

    #[test]
    fn head_component_tiebreak() {
        let dims = Dims::new(1, 2);
        let p = &OperatorVector::unit(dims, 1) + &OperatorVector::unit(dims, 0);
        assert_eq!(head_of(&p).unwrap().head, Derivative::base(1, 1));
    }

    #[test]
    fn head_of_constant() {
        let h = head_of(&op(&[(0, k(5))])).unwrap();
        assert_eq!((h.head, h.coefficient, h.degree), (d(0), k(5), 0));
        assert_eq!(head_of(&OperatorVector::zero(Dims::new(1, 1))), Err(Error::ZeroOperator));
    }

    #[test]
    fn monic_cases() {
        assert_eq!(make_monic(&euler()).unwrap(), euler_monic());
        let x2 = &x() * &x();
        let hermite = op(&[(2, k(-1)), (0, &x2 - &k(1))]);
        assert_eq!(make_monic(&hermite).unwrap(), op(&[(2, k(1)), (0, &k(1) - &x2)]));
        assert_eq!(make_monic(&op(&[(1, k(1))])).unwrap(), op(&[(1, k(1))]));
        assert_eq!(make_monic(&OperatorVector::zero(Dims::new(1, 1))), Err(Error::ZeroOperator));
    }

    #[test]
    fn reduce_d3() {
        let rules = vec![euler_monic()];
        let tr = reduce_full(&op(&[(3, k(1))]), &rules);
        assert!(tr.normal_form.is_zero());
        let inv = x().inv().unwrap();
        assert_eq!(tr.cofactors[&0], op(&[(1, k(1)), (0, &k(2) * &inv)]));
        assert_eq!(tr.reconstruct(&rules), op(&[(3, k(1))]));
    }

    #[test]
    fn reduce_irreducible() {
        let x2 = &x() * &x();
        let rules = vec![op(&[(2, k(1)), (0, &k(1) - &x2)])];
        let q = op(&[(1, k(1)), (0, x())]);
        let tr = reduce_full(&q, &rules);
        assert_eq!(tr.normal_form, q);
        assert!(tr.cofactors.is_empty());
    }

    #[test]
    fn reduce_zero() {
        let tr = reduce_full(&OperatorVector::zero(Dims::new(1, 1)), &[euler_monic()]);
        assert!(tr.normal_form.is_zero() && tr.cofactors.is_empty());
    }
}
