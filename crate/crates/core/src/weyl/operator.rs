use std::collections::{BTreeMap, HashMap};
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;

use super::{Derivative, Dims};
use crate::arith::{MultiIndex, Polynomial, RationalFunction, Scalar};
use crate::error::{Error, Result};

/// An element of `B_m(F)^n` in standard form: a left F(x)-linear
/// combination of distinct derivatives, coefficients on the left.
///
/// Zero coefficients are never stored, so map equality is operator
/// equality. Scalar operators (elements of `B_m(F)`) are the `unknowns = 1`
/// case.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OperatorVector {
    dims: Dims,
    terms: BTreeMap<Derivative, RationalFunction>,
}

impl OperatorVector {
    pub fn zero(dims: Dims) -> Self {
        OperatorVector { dims, terms: BTreeMap::new() }
    }

    pub fn term(dims: Dims, d: Derivative, coeff: RationalFunction) -> Self {
        let mut p = OperatorVector::zero(dims);
        p.add_term(d, &coeff);
        p
    }

    /// The identity operator `1` (scalar dims).
    pub fn one(vars: usize) -> Self {
        OperatorVector::d_power(vars, MultiIndex::zero(vars))
    }

    /// True for the scalar identity operator.
    pub fn is_one(&self) -> bool {
        self.dims.unknowns == 1
            && self.terms.len() == 1
            && self.terms.iter().all(|(d, c)| d.alpha.is_zero() && c.is_one())
    }

    /// `D^α` as a scalar operator.
    pub fn d_power(vars: usize, alpha: MultiIndex) -> Self {
        OperatorVector::term(Dims::new(vars, 1), Derivative::new(0, alpha), RationalFunction::one(vars))
    }

    /// Multiplication by the function `f`, as a scalar operator.
    pub fn function(vars: usize, f: RationalFunction) -> Self {
        OperatorVector::term(Dims::new(vars, 1), Derivative::base(vars, 0), f)
    }

    /// `e_i` in `B_m^n`.
    pub fn unit(dims: Dims, component: usize) -> Self {
        OperatorVector::term(dims, Derivative::base(dims.vars, component), RationalFunction::one(dims.vars))
    }

    pub fn from_terms(dims: Dims, terms: impl IntoIterator<Item = (Derivative, RationalFunction)>) -> Self {
        let mut p = OperatorVector::zero(dims);
        for (d, c) in terms {
            p.add_term(d, &c);
        }
        p
    }

    /// Assemble a row `(p_1, …, p_n)` from scalar operators.
    pub fn from_components(vars: usize, components: &[OperatorVector]) -> Result<Self> {
        let dims = Dims::new(vars, components.len());
        let mut out = OperatorVector::zero(dims);
        for (i, c) in components.iter().enumerate() {
            if c.dims != Dims::new(vars, 1) {
                return Err(Error::DimensionMismatch("row components must be scalar operators".into()));
            }
            for (d, f) in &c.terms {
                out.add_term(Derivative::new(i, d.alpha.clone()), f);
            }
        }
        Ok(out)
    }

    /// Component `i` as a scalar operator.
    pub fn component(&self, i: usize) -> OperatorVector {
        let mut out = OperatorVector::zero(self.dims.scalar());
        for (d, f) in self.terms.iter().filter(|(d, _)| d.component == i) {
            out.terms.insert(Derivative::new(0, d.alpha.clone()), f.clone());
        }
        out
    }

    /// Place a scalar operator into component `i` of `dims`.
    pub fn into_component(&self, dims: Dims, i: usize) -> OperatorVector {
        debug_assert_eq!(self.dims.unknowns, 1);
        OperatorVector {
            dims,
            terms: self.terms.iter().map(|(d, f)| (Derivative::new(i, d.alpha.clone()), f.clone())).collect(),
        }
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn vars(&self) -> usize {
        self.dims.vars
    }

    /// Terms in increasing ranking order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Derivative, &RationalFunction)> + ExactSizeIterator {
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

    /// `cf(p)(δ)`.
    pub fn coeff(&self, d: &Derivative) -> RationalFunction {
        self.terms.get(d).cloned().unwrap_or_else(|| RationalFunction::zero(self.dims.vars))
    }

    pub fn coeff_ref(&self, d: &Derivative) -> Option<&RationalFunction> {
        self.terms.get(d)
    }

    /// Ranking-maximal term.
    pub fn leading(&self) -> Option<(&Derivative, &RationalFunction)> {
        self.terms.iter().next_back()
    }

    /// Highest order among the terms (0 for zero).
    pub fn order(&self) -> u32 {
        self.leading().map(|(d, _)| d.order()).unwrap_or(0)
    }

    pub fn add_term(&mut self, d: Derivative, c: &RationalFunction) {
        debug_assert!(d.component < self.dims.unknowns && d.alpha.len() == self.dims.vars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(d) {
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

    pub fn remove_term(&mut self, d: &Derivative) -> Option<RationalFunction> {
        self.terms.remove(d)
    }

    /// Left multiplication by a function: `f·p`, coefficientwise.
    pub fn left_scale(&self, f: &RationalFunction) -> OperatorVector {
        if f.is_zero() {
            return OperatorVector::zero(self.dims);
        }
        if f.is_one() {
            return self.clone();
        }
        let mut out = OperatorVector::zero(self.dims);
        for (d, c) in &self.terms {
            out.add_term(d.clone(), &(f * c));
        }
        out
    }

    pub fn left_scale_poly(&self, w: &Polynomial) -> OperatorVector {
        self.left_scale(&RationalFunction::from_poly(w.clone()))
    }

    /// Every coefficient has denominator 1, i.e. this row lies in `A_m(F)^n`.
    pub fn is_polynomial_row(&self) -> bool {
        self.terms.values().all(RationalFunction::is_polynomial)
    }

    pub fn is_defined_at(&self, point: &[Scalar]) -> bool {
        self.terms.values().all(|c| c.is_defined_at(point))
    }

    /// `D_j · p`, via `D_j (f δ) = f (D_j δ) + (∂f/∂x_j) δ`.
    pub fn left_mul_dj(&self, j: usize) -> OperatorVector {
        let mut out = OperatorVector::zero(self.dims);
        let step = MultiIndex::unit(self.dims.vars, j);
        for (d, f) in &self.terms {
            out.add_term(d.shifted(&step), f);
            let df = f.derive(j).expect("j < vars");
            out.add_term(d.clone(), &df);
        }
        out
    }

    /// `D^β · p`, by repeated application of `D_j`.
    pub fn left_mul_d(&self, beta: &MultiIndex) -> OperatorVector {
        let mut out = self.clone();
        for (j, &k) in beta.as_slice().iter().enumerate() {
            for _ in 0..k {
                out = out.left_mul_dj(j);
            }
        }
        out
    }

    /// `(Σ_δ cf(p)(δ)|_{x0})` over `Δ_s`, in ranking order.
    pub fn cf_slice(&self, s: u32, point: &[Scalar]) -> Result<Vec<Scalar>> {
        let order = self.order();
        if order > s {
            return Err(Error::DegreeExceeded { degree: order, order: s });
        }
        Derivative::up_to(self.dims, s)
            .iter()
            .map(|d| match self.terms.get(d) {
                Some(c) => c.eval(point),
                None => Ok(Scalar::zero()),
            })
            .collect()
    }

    /// Symbolic `cf_s(p)`: coefficients over `Δ_s` in ranking order.
    pub fn cf_slice_symbolic(&self, s: u32) -> Result<Vec<RationalFunction>> {
        let order = self.order();
        if order > s {
            return Err(Error::DegreeExceeded { degree: order, order: s });
        }
        Ok(Derivative::up_to(self.dims, s).iter().map(|d| self.coeff(d)).collect())
    }

    /// All coefficients.
    pub fn coefficients(&self) -> impl Iterator<Item = &RationalFunction> {
        self.terms.values()
    }

    /// `D^β·p` evaluated at `point` for every `|β| ≤ bound`, in the order of
    /// [`MultiIndex::up_to`]. Terms come in ranking order with zero values
    /// dropped. Works from truncated Taylor series of the coefficients, so
    /// no rational function is ever differentiated.
    pub fn shifts_at(&self, bound: u32, point: &[Scalar]) -> Result<Vec<(MultiIndex, Vec<(Derivative, Scalar)>)>> {
        let vars = self.dims.vars;
        if point.len() != vars {
            return Err(Error::DimensionMismatch(format!("point has {} coordinates, expected {vars}", point.len())));
        }
        let series = self
            .terms
            .iter()
            .map(|(d, c)| Ok((d, taylor(c, point, bound)?)))
            .collect::<Result<Vec<_>>>()?;
        let mut out = Vec::new();
        for beta in MultiIndex::up_to(vars, bound) {
            let mut acc: BTreeMap<Derivative, Scalar> = BTreeMap::new();
            for (d, t) in &series {
                for (gamma, v) in t {
                    let Some(rest) = beta.checked_sub(gamma) else { continue };
                    // C(β, γ)·∂^γ c(x0) with ∂^γ c(x0) = γ!·t_γ
                    let weight = multi_binomial(&beta, gamma) * gamma.factorial();
                    let term = &Scalar::from_bigint(weight) * v;
                    let slot = acc.entry(d.shifted(&rest)).or_insert_with(Scalar::zero);
                    *slot = &*slot + &term;
                }
            }
            out.push((beta, acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()));
        }
        Ok(out)
    }
}

/// Taylor coefficients `t_γ = ∂^γ p(x0)/γ!` of a polynomial, `|γ| ≤ bound`.
fn polynomial_taylor(p: &Polynomial, point: &[Scalar], bound: u32) -> HashMap<MultiIndex, Scalar> {
    let mut powers: Vec<Vec<Scalar>> = point.iter().map(|x| vec![Scalar::one(), x.clone()]).collect();
    let mut power = |j: usize, k: u32| -> Scalar {
        let row = &mut powers[j];
        while row.len() <= k as usize {
            let next = &row[row.len() - 1] * &row[1];
            row.push(next);
        }
        row[k as usize].clone()
    };
    let mut out: HashMap<MultiIndex, Scalar> = HashMap::new();
    for (e, c) in p.terms() {
        for gamma in MultiIndex::up_to(p.vars(), bound.min(e.total())) {
            let Some(rest) = e.checked_sub(&gamma) else { continue };
            let mut term = c * &Scalar::from_bigint(multi_binomial(e, &gamma));
            for (j, &k) in rest.as_slice().iter().enumerate() {
                if k > 0 {
                    term = &term * &power(j, k);
                }
            }
            let slot = out.entry(gamma).or_insert_with(Scalar::zero);
            *slot = &*slot + &term;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Taylor coefficients of `n/d` at a point where `d` does not vanish, by
/// power-series division.
fn taylor(f: &RationalFunction, point: &[Scalar], bound: u32) -> Result<HashMap<MultiIndex, Scalar>> {
    let n = polynomial_taylor(f.numer(), point, bound);
    if f.denom().is_one() {
        return Ok(n);
    }
    let d = polynomial_taylor(f.denom(), point, bound);
    let d0 = d.get(&MultiIndex::zero(f.vars())).ok_or(Error::EvaluationAtPole)?;
    let d0_inv = d0.inv().ok_or(Error::EvaluationAtPole)?;
    let mut q: HashMap<MultiIndex, Scalar> = HashMap::new();
    for gamma in MultiIndex::up_to(f.vars(), bound) {
        let mut acc = n.get(&gamma).cloned().unwrap_or_else(Scalar::zero);
        for (eta, de) in &d {
            if eta.is_zero() {
                continue;
            }
            if let Some(qr) = gamma.checked_sub(eta).and_then(|rest| q.get(&rest)) {
                acc = &acc - &(de * qr);
            }
        }
        let v = &acc * &d0_inv;
        if !v.is_zero() {
            q.insert(gamma, v);
        }
    }
    Ok(q)
}

/// Binomial `C(α, γ) = Π_j C(α_j, γ_j)`.
pub(crate) fn multi_binomial(alpha: &MultiIndex, gamma: &MultiIndex) -> BigInt {
    let mut acc = BigInt::from(1);
    for (&a, &g) in alpha.as_slice().iter().zip(gamma.as_slice()) {
        let mut c = BigInt::from(1);
        for k in 0..g {
            c = c * BigInt::from(a - k) / BigInt::from(k + 1);
        }
        acc *= c;
    }
    acc
}

/// Memoized `∂^γ g` for one coefficient `g`.
struct DerivativeCache<'a> {
    base: &'a RationalFunction,
    cache: HashMap<MultiIndex, RationalFunction>,
}

impl<'a> DerivativeCache<'a> {
    fn new(base: &'a RationalFunction) -> Self {
        DerivativeCache { base, cache: HashMap::new() }
    }

    fn get(&mut self, gamma: &MultiIndex) -> RationalFunction {
        if gamma.is_zero() {
            return self.base.clone();
        }
        if let Some(r) = self.cache.get(gamma) {
            return r.clone();
        }
        let j = gamma.as_slice().iter().position(|&e| e > 0).expect("nonzero");
        let lower = gamma.with(j, gamma.get(j) - 1);
        let r = self.get(&lower).derive(j).expect("j < vars");
        self.cache.insert(gamma.clone(), r.clone());
        r
    }
}

/// The left product `h·p` of a scalar operator `h` with `p ∈ B_m^n`,
/// normal-ordered by `f D^α · g δ_β^i = Σ_{γ≤α} C(α,γ) f (∂^γ g) δ_{α−γ+β}^i`.
pub fn scalar_operator_product(h: &OperatorVector, p: &OperatorVector) -> OperatorVector {
    assert_eq!(h.dims.unknowns, 1, "left factor must be a scalar operator");
    assert_eq!(h.dims.vars, p.dims.vars, "variable counts differ");
    let mut out = OperatorVector::zero(p.dims);
    if h.is_zero() || p.is_zero() {
        return out;
    }
    for (pd, g) in &p.terms {
        let mut dg = DerivativeCache::new(g);
        for (hd, f) in &h.terms {
            let alpha = &hd.alpha;
            for gamma in alpha.divisors() {
                let c = multi_binomial(alpha, &gamma);
                let dgamma = dg.get(&gamma);
                if dgamma.is_zero() {
                    continue;
                }
                let coeff = (f * &dgamma).scale(&Scalar::from_bigint(c));
                let target = pd.shifted(&alpha.checked_sub(&gamma).expect("γ ≤ α"));
                out.add_term(target, &coeff);
            }
        }
    }
    out
}

impl Add<&OperatorVector> for &OperatorVector {
    type Output = OperatorVector;
    fn add(self, rhs: &OperatorVector) -> OperatorVector {
        debug_assert_eq!(self.dims, rhs.dims);
        let mut out = self.clone();
        for (d, c) in &rhs.terms {
            out.add_term(d.clone(), c);
        }
        out
    }
}

impl Sub<&OperatorVector> for &OperatorVector {
    type Output = OperatorVector;
    fn sub(self, rhs: &OperatorVector) -> OperatorVector {
        debug_assert_eq!(self.dims, rhs.dims);
        let mut out = self.clone();
        for (d, c) in &rhs.terms {
            out.add_term(d.clone(), &-c);
        }
        out
    }
}

impl Neg for &OperatorVector {
    type Output = OperatorVector;
    fn neg(self) -> OperatorVector {
        OperatorVector { dims: self.dims, terms: self.terms.iter().map(|(d, c)| (d.clone(), -c)).collect() }
    }
}

impl std::fmt::Debug for OperatorVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&crate::syntax::format_operator(self))
    }
}
