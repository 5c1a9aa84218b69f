//! Jets of solutions at a point: the linear constraint system on derivative
//! values, order-by-order extension of parametric data to a truncated
//! formal solution, and the dimension of the solution space.

use std::collections::{BTreeMap, HashMap};

use crate::arith::{MultiIndex, Scalar};
use crate::error::{Error, Result};
use crate::linalg::{nullspace, rank};
use crate::riquier::{classify_derivative, parametric_up_to, DerivativeClass, RiquierBasis};
use crate::weyl::{Derivative, Jet};

/// Extra orders beyond `s0` used when no truncation is given.
pub const DEFAULT_EXTRA_ORDER: u32 = 4;

pub fn default_order(basis: &RiquierBasis) -> u32 {
    basis.s0() + DEFAULT_EXTRA_ORDER
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintRow {
    /// Index of the basis element `p`.
    pub element: usize,
    pub beta: MultiIndex,
    /// `cf(D^β p)(δ)|_{x0}` for every column `δ`.
    pub entries: Vec<Scalar>,
}

/// Homogeneous system on `c ∈ F^{Δ_s}`: one row per basis element `p` and
/// shift `β` with `|β| ≤ s − deg p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintSystem {
    pub s: u32,
    pub point: Vec<Scalar>,
    /// `Δ_s` in ranking order.
    pub columns: Vec<Derivative>,
    pub rows: Vec<ConstraintRow>,
}

impl ConstraintSystem {
    pub fn matrix(&self) -> Vec<Vec<Scalar>> {
        self.rows.iter().map(|r| r.entries.clone()).collect()
    }

    pub fn rank(&self) -> usize {
        rank(&self.matrix(), self.columns.len())
    }

    pub fn nullity(&self) -> usize {
        self.columns.len() - self.rank()
    }

    /// A basis of the admissible jets.
    pub fn nullspace_jets(&self, dims: crate::weyl::Dims) -> Result<Vec<Jet>> {
        nullspace(&self.matrix(), self.columns.len(), &Scalar::zero(), &Scalar::one())
            .into_iter()
            .map(|v| Jet::from_vector(dims, self.point.clone(), self.s, &v))
            .collect()
    }
}

fn check_point(basis: &RiquierBasis, point: &[Scalar]) -> Result<()> {
    if point.len() != basis.dims().vars {
        return Err(Error::DimensionMismatch(format!(
            "point has {} coordinates, expected {}",
            point.len(),
            basis.dims().vars
        )));
    }
    if basis.elements().iter().any(|p| !p.is_defined_at(point)) {
        return Err(Error::EvaluationAtPole);
    }
    Ok(())
}

pub fn constraint_matrix(basis: &RiquierBasis, s: u32, point: &[Scalar]) -> Result<ConstraintSystem> {
    if s < basis.s0() {
        return Err(Error::SBelowS0 { s, s0: basis.s0() });
    }
    check_point(basis, point)?;
    let columns = Derivative::up_to(basis.dims(), s);
    let index: HashMap<Derivative, usize> = columns.iter().cloned().enumerate().map(|(k, d)| (d, k)).collect();
    let mut rows = Vec::new();
    for (element, p) in basis.elements().iter().enumerate() {
        for (beta, terms) in p.shifts_at(s - p.order(), point)? {
            let mut entries = vec![Scalar::zero(); columns.len()];
            for (d, v) in terms {
                entries[index[&d]] = v;
            }
            rows.push(ConstraintRow { element, beta, entries });
        }
    }
    Ok(ConstraintSystem { s, point: point.to_vec(), columns, rows })
}

/// Whether every row annihilates the jet.
pub fn check_jet_constraints(c: &Jet, system: &ConstraintSystem) -> Result<bool> {
    if c.order() != system.s || c.point() != system.point.as_slice() {
        return Err(Error::DimensionMismatch("jet order or base point differs from the system".into()));
    }
    let values = c.to_vector();
    if values.len() != system.columns.len() {
        return Err(Error::DimensionMismatch("jet shape differs from the system".into()));
    }
    Ok(system.rows.iter().all(|row| {
        let mut acc = Scalar::zero();
        for (a, v) in row.entries.iter().zip(&values) {
            if !a.is_zero() && !v.is_zero() {
                acc = &acc + &(a * v);
            }
        }
        acc.is_zero()
    }))
}

/// Nullity of the constraint matrix.
pub fn solution_space_dim(basis: &RiquierBasis, s: u32, point: &[Scalar]) -> Result<usize> {
    Ok(constraint_matrix(basis, s, point)?.nullity())
}

/// The parametric values of a jet, as initial data for [`formal_solve`].
pub fn parametric_values(basis: &RiquierBasis, jet: &Jet) -> BTreeMap<Derivative, Scalar> {
    parametric_up_to(basis, jet.order())
        .into_iter()
        .filter_map(|d| {
            let v = jet.get(&d);
            (!v.is_zero()).then_some((d, v))
        })
        .collect()
}

/// Extend parametric initial data to a `T`-jet. Parametric derivatives
/// missing from `init` take the value 0; principal values follow in ranking
/// order from the rule with the highest head dividing them.
pub fn formal_solve(
    basis: &RiquierBasis,
    point: &[Scalar],
    init: &BTreeMap<Derivative, Scalar>,
    order: u32,
) -> Result<Jet> {
    let heads = basis.heads();
    formal_solve_with(basis, point, init, order, |_, rules| {
        let mut best = rules[0];
        for &r in rules {
            if heads[r] > heads[best] {
                best = r;
            }
        }
        best
    })
}

/// As [`formal_solve`], with the caller choosing among the rules whose head
/// divides each principal derivative.
pub fn formal_solve_with(
    basis: &RiquierBasis,
    point: &[Scalar],
    init: &BTreeMap<Derivative, Scalar>,
    order: u32,
    mut pick: impl FnMut(&Derivative, &[usize]) -> usize,
) -> Result<Jet> {
    if order < basis.s0() {
        return Err(Error::SBelowS0 { s: order, s0: basis.s0() });
    }
    check_point(basis, point)?;
    let dims = basis.dims();
    for d in init.keys() {
        if d.component >= dims.unknowns || d.alpha.len() != dims.vars {
            return Err(Error::DimensionMismatch(format!("initial value for {d:?} does not fit the system")));
        }
        if d.order() > order {
            return Err(Error::InvalidInput(format!("initial value for {d:?} lies beyond order {order}")));
        }
        if classify_derivative(basis, d) == DerivativeClass::Principal {
            return Err(Error::InvalidInput(format!("initial value given for principal derivative {d:?}")));
        }
    }
    let heads = basis.heads();
    let mut jet = Jet::zero(dims, point.to_vec(), order);
    // every D^γ p_r evaluated at the point, computed per element on first use
    let mut shifted: HashMap<usize, HashMap<MultiIndex, Vec<(Derivative, Scalar)>>> = HashMap::new();
    for delta in Derivative::up_to(dims, order) {
        let rules: Vec<usize> = (0..heads.len()).filter(|&r| delta.is_multiple_of(&heads[r])).collect();
        if rules.is_empty() {
            if let Some(v) = init.get(&delta) {
                jet.set(delta, v.clone())?;
            }
            continue;
        }
        let r = rules[pick(&delta, &rules).min(rules.len() - 1)];
        let gamma = delta.alpha.checked_sub(&heads[r].alpha).expect("divides");
        if !shifted.contains_key(&r) {
            let p = &basis.elements()[r];
            shifted.insert(r, p.shifts_at(order - p.order(), point)?.into_iter().collect());
        }
        let terms = &shifted[&r][&gamma];
        let (head, head_value) = terms.last().expect("nonzero rule");
        debug_assert_eq!(head, &delta);
        let mut acc = Scalar::zero();
        for (d, c) in &terms[..terms.len() - 1] {
            let v = jet.get(d);
            if !v.is_zero() && !c.is_zero() {
                acc = &acc + &(c * &v);
            }
        }
        let value = -&(&acc * &head_value.inv().ok_or(Error::EvaluationAtPole)?);
        jet.set(delta, value)?;
    }
    Ok(jet)
}

/// Small rational candidates `0, 1, −1, 2, −2, 1/2, −1/2, 3, …`.
fn candidates(count: usize) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero()];
    let mut n = 1i64;
    while out.len() < count {
        for (p, q) in [(n, 1), (1, n)] {
            for sign in [1, -1] {
                let c = Scalar::ratio(sign * p, q);
                if !out.contains(&c) {
                    out.push(c);
                }
            }
        }
        n += 1;
    }
    out.truncate(count);
    out
}

/// The first point, scanning small rational tuples, where every basis
/// coefficient is defined.
pub fn find_regular_point(basis: &RiquierBasis) -> Option<Vec<Scalar>> {
    let vars = basis.dims().vars;
    let cands = candidates(64);
    // tuples ordered by their largest candidate index
    for level in 0..cands.len() {
        let mut idx = vec![0usize; vars];
        loop {
            if idx.contains(&level) || vars == 0 {
                let point: Vec<Scalar> = idx.iter().map(|&i| cands[i].clone()).collect();
                if basis.elements().iter().all(|p| p.is_defined_at(&point)) {
                    return Some(point);
                }
                if vars == 0 {
                    return None;
                }
            }
            let mut j = 0;
            while j < vars && idx[j] == level {
                idx[j] = 0;
                j += 1;
            }
            if j == vars {
                break;
            }
            idx[j] += 1;
        }
    }
    None
}
