use std::collections::BTreeMap;

use num_rational::BigRational;

use super::{Derivative, Dims, OperatorVector};
use crate::arith::Scalar;
use crate::error::{Error, Result};

/// Truncated Taylor data at a point: the derivative values `δ_α^i[u](x0)` for
/// every `|α| ≤ order`. Absent entries are zero; zeros are never stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Jet {
    dims: Dims,
    point: Vec<Scalar>,
    order: u32,
    values: BTreeMap<Derivative, Scalar>,
}

impl Jet {
    pub fn zero(dims: Dims, point: Vec<Scalar>, order: u32) -> Self {
        assert_eq!(point.len(), dims.vars, "point dimension");
        Jet { dims, point, order, values: BTreeMap::new() }
    }

    /// Build from values listed over `Δ_order` in ranking order.
    pub fn from_vector(dims: Dims, point: Vec<Scalar>, order: u32, values: &[Scalar]) -> Result<Self> {
        let ds = Derivative::up_to(dims, order);
        if ds.len() != values.len() {
            return Err(Error::DimensionMismatch(format!(
                "expected {} jet values, got {}",
                ds.len(),
                values.len()
            )));
        }
        let mut jet = Jet::zero(dims, point, order);
        for (d, v) in ds.into_iter().zip(values) {
            jet.set(d, v.clone())?;
        }
        Ok(jet)
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn point(&self) -> &[Scalar] {
        &self.point
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn set(&mut self, d: Derivative, v: Scalar) -> Result<()> {
        if d.order() > self.order {
            return Err(Error::DegreeExceeded { degree: d.order(), order: self.order });
        }
        if d.component >= self.dims.unknowns || d.alpha.len() != self.dims.vars {
            return Err(Error::DimensionMismatch(format!("derivative {d:?} does not fit the jet")));
        }
        if v.is_zero() {
            self.values.remove(&d);
        } else {
            self.values.insert(d, v);
        }
        Ok(())
    }

    /// `δ[u](x0)`; zero when unset. Panics if `δ` is beyond the truncation.
    pub fn get(&self, d: &Derivative) -> Scalar {
        assert!(d.order() <= self.order, "derivative beyond jet order");
        self.values.get(d).cloned().unwrap_or_default()
    }

    /// Nonzero entries in ranking order.
    pub fn nonzero(&self) -> impl Iterator<Item = (&Derivative, &Scalar)> {
        self.values.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// The values over `Δ_order` in ranking order.
    pub fn to_vector(&self) -> Vec<Scalar> {
        Derivative::up_to(self.dims, self.order).iter().map(|d| self.get(d)).collect()
    }

    /// Drop every entry above order `s`.
    pub fn restrict(&self, s: u32) -> Jet {
        let s = s.min(self.order);
        Jet {
            dims: self.dims,
            point: self.point.clone(),
            order: s,
            values: self.values.iter().filter(|(d, _)| d.order() <= s).map(|(d, v)| (d.clone(), v.clone())).collect(),
        }
    }

    /// Taylor coefficient `δ_α^i[u](x0) / α!`.
    pub fn taylor_coefficient(&self, d: &Derivative) -> Scalar {
        let fact = Scalar::from_rational(BigRational::from_integer(d.alpha.factorial()));
        &self.get(d) * &fact.inv().expect("factorial is nonzero")
    }
}

/// Evaluate `D^β p` at the point for every `|β| ≤ order` against `u`.
///
/// The jet of `p[u]`: its `β` entry is `Σ_δ cf(D^β p)(δ)|_{x0} · δ[u](x0)`,
/// exact through order `T − deg p`.
pub fn apply_to_jet(p: &OperatorVector, u: &Jet) -> Result<Jet> {
    if p.dims() != u.dims {
        return Err(Error::DimensionMismatch("operator and jet shapes differ".into()));
    }
    let deg = p.order();
    if u.order < deg {
        return Err(Error::TruncationUnderflow { degree: deg, order: u.order });
    }
    if !p.is_defined_at(&u.point) {
        return Err(Error::EvaluationAtPole);
    }
    let out_order = u.order - deg;
    let mut out = Jet::zero(u.dims.scalar(), u.point.clone(), out_order);
    if p.is_zero() {
        return Ok(out);
    }
    for (beta, terms) in p.shifts_at(out_order, &u.point)? {
        let mut acc = Scalar::zero();
        for (d, c) in &terms {
            let v = u.get(d);
            if !v.is_zero() {
                acc = &acc + &(c * &v);
            }
        }
        out.set(Derivative::new(0, beta), acc)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{MultiIndex, Polynomial, RationalFunction};

    fn dims1() -> Dims {
        Dims::new(1, 1)
    }

    fn d(k: u32) -> Derivative {
        Derivative::new(0, MultiIndex::from_slice(&[k]))
    }

    fn op(terms: &[(u32, RationalFunction)]) -> OperatorVector {
        OperatorVector::from_terms(dims1(), terms.iter().map(|(k, c)| (d(*k), c.clone())))
    }

    fn k(c: i64) -> RationalFunction {
        RationalFunction::constant(1, Scalar::from_int(c))
    }

    /// Derivative values of exp at 0 are all 1.
    fn exp_jet(order: u32) -> Jet {
        let vals = vec![Scalar::one(); order as usize + 1];
        Jet::from_vector(dims1(), vec![Scalar::zero()], order, &vals).unwrap()
    }

    /// Derivative values of e^{-x²/2} at 0 from its series
    /// Σ (−1/2)^k x^{2k} / k!: the value at order 2k is (2k)!·(−1/2)^k/k!.
    fn gaussian_jet(order: u32) -> Jet {
        let mut vals = Vec::new();
        for n in 0..=order {
            if n % 2 == 1 {
                vals.push(Scalar::zero());
                continue;
            }
            let k = n / 2;
            let num = MultiIndex::from_slice(&[n]).factorial();
            let den = MultiIndex::from_slice(&[k]).factorial();
            let coeff = Scalar::ratio(-1, 2).pow(k);
            vals.push(&(&Scalar::from_bigint(num) * &Scalar::from_bigint(den).inv().unwrap()) * &coeff);
        }
        Jet::from_vector(dims1(), vec![Scalar::zero()], order, &vals).unwrap()
    }

    #[test]
    fn gaussian_jet_values() {
        let j = gaussian_jet(4);
        let taylor: Vec<Scalar> = (0..=4).map(|n| j.taylor_coefficient(&d(n))).collect();
        assert_eq!(
            taylor,
            vec![Scalar::one(), Scalar::zero(), Scalar::ratio(-1, 2), Scalar::zero(), Scalar::ratio(1, 8)]
        );
    }

    #[test]
    fn exp_is_killed_by_d_minus_one() {
        let p = op(&[(1, k(1)), (0, k(-1))]);
        let out = apply_to_jet(&p, &exp_jet(4)).unwrap();
        assert_eq!(out.order(), 3);
        assert!(out.is_zero());
    }

    #[test]
    fn gaussian_is_killed_by_d_plus_x() {
        let x = RationalFunction::from_poly(Polynomial::var(1, 0));
        let p = op(&[(1, k(1)), (0, x)]);
        let out = apply_to_jet(&p, &gaussian_jet(4)).unwrap();
        assert_eq!(out.order(), 3);
        assert!(out.is_zero());
    }

    #[test]
    fn identity_operator_truncates_nothing() {
        let u = exp_jet(3);
        let out = apply_to_jet(&op(&[(0, k(1))]), &u).unwrap();
        assert_eq!(out, u);
    }

    #[test]
    fn underflow_and_pole() {
        let p = op(&[(3, k(1))]);
        assert_eq!(
            apply_to_jet(&p, &exp_jet(2)),
            Err(Error::TruncationUnderflow { degree: 3, order: 2 })
        );
        let inv_x = RationalFunction::from_poly(Polynomial::var(1, 0)).inv().unwrap();
        assert_eq!(apply_to_jet(&op(&[(0, inv_x)]), &exp_jet(2)), Err(Error::EvaluationAtPole));
    }
}
