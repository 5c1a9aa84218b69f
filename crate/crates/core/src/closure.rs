//! Weyl-closure membership: decide `q ∈ F(x)N ∩ A_m(F)^n` for the module
//! `N ⊆ A_m(F)^n` generated by polynomial rows, and certify a positive
//! answer with `w·q = Σ_j h_j·p_j`.
//!
//! Three independent routes decide membership:
//!
//! - reduction of `q` by a Riquier basis of `F(x)N` (the primary path, which
//!   also yields the witness);
//! - a span test over `F(x)` on the coefficient vectors `cf_s(q)` and
//!   `cf_s(D^β p)`;
//! - Euclidean left division, for one variable and one unknown.

use std::collections::HashMap;

use crate::arith::{gcd, MultiIndex, Polynomial, RationalFunction};
use crate::error::{Error, Result};
use crate::linalg::{solve_in_span, solve_in_span_fraction_free};
use crate::ranking::reduce_full;
use crate::riquier::{combine, complete_to_riquier_basis, RiquierBasis};
use crate::weyl::{scalar_operator_product, Derivative, Dims, OperatorVector};

/// Certificate `w·q = Σ_j cofactors[j]·generators[j]` with `w ≠ 0` and
/// polynomial cofactors.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub w: Polynomial,
    pub cofactors: Vec<OperatorVector>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MembershipResult {
    pub member: bool,
    pub witness: Option<Witness>,
    /// Normal form of `q` against the Riquier basis; zero iff `member`.
    pub normal_form: OperatorVector,
}

/// Outcome of running every applicable decision path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossCheck {
    pub reduction: bool,
    pub span: bool,
    /// Only for one variable and one unknown with a single nonzero generator.
    pub division: Option<bool>,
}

impl CrossCheck {
    pub fn agree(&self) -> bool {
        self.reduction == self.span && self.division.is_none_or(|d| d == self.reduction)
    }
}

fn validate(q: &OperatorVector, generators: &[OperatorVector]) -> Result<Dims> {
    let dims = q.dims();
    if let Some(g) = generators.iter().find(|g| g.dims() != dims) {
        return Err(Error::InvalidInput(format!(
            "generator shape {:?} differs from candidate shape {:?}",
            g.dims(),
            dims
        )));
    }
    if !q.is_polynomial_row() {
        return Err(Error::InvalidInput("candidate has non-polynomial coefficients".into()));
    }
    if let Some(j) = generators.iter().position(|g| !g.is_polynomial_row()) {
        return Err(Error::InvalidInput(format!("generator {} has non-polynomial coefficients", j + 1)));
    }
    Ok(dims)
}

pub fn weyl_closure_member(q: &OperatorVector, generators: &[OperatorVector]) -> Result<MembershipResult> {
    let dims = validate(q, generators)?;
    let basis = complete_to_riquier_basis(dims, generators)?;
    member_with_basis(q, generators, &basis)
}

/// As [`weyl_closure_member`], reusing a basis already completed from
/// `generators`.
pub fn member_with_basis(
    q: &OperatorVector,
    generators: &[OperatorVector],
    basis: &RiquierBasis,
) -> Result<MembershipResult> {
    let dims = validate(q, generators)?;
    if basis.generator_count() != generators.len() || basis.dims() != dims {
        return Err(Error::DimensionMismatch("basis was not computed from these generators".into()));
    }

    if let Some(witness) = direct_witness(q, generators) {
        return Ok(MembershipResult { member: true, witness: Some(witness), normal_form: OperatorVector::zero(dims) });
    }

    let trace = reduce_full(q, basis.elements());
    if !trace.normal_form.is_zero() {
        return Ok(MembershipResult { member: false, witness: None, normal_form: trace.normal_form });
    }

    if let Some(witness) = (0..=ANSATZ_ORDER).find_map(|r| span_witness(q, generators, r)) {
        if verify_witness(&witness, q, generators) {
            return Ok(MembershipResult { member: true, witness: Some(witness), normal_form: trace.normal_form });
        }
    }
    let (w, cofactors) = basis
        .certificate(q)
        .ok_or_else(|| Error::InvalidInput("pseudo-reduction disagrees with reduction".into()))?;
    let witness = Witness { w, cofactors };
    if !verify_witness(&witness, q, generators) {
        return Err(Error::InvalidInput("extracted witness failed verification".into()));
    }
    Ok(MembershipResult { member: true, witness: Some(witness), normal_form: trace.normal_form })
}

/// Largest cofactor order tried by [`span_witness`] before the completion
/// record is unwound.
const ANSATZ_ORDER: u32 = 3;

/// A witness whose cofactors have order `≤ r`: solve
/// `q = Σ_{j,|β|≤r} c_{jβ}·D^β·g_j` for `c ∈ F(x)` and clear denominators.
fn span_witness(q: &OperatorVector, generators: &[OperatorVector], r: u32) -> Option<Witness> {
    let dims = q.dims();
    let vars = dims.vars;
    let top = generators.iter().map(OperatorVector::order).max()? + r;
    if q.order() > top {
        return None;
    }
    let coords = Derivative::up_to(dims, top);
    let vector = |p: &OperatorVector| -> Vec<Polynomial> { coords.iter().map(|d| p.coeff(d).numer().clone()).collect() };
    let mut labels = Vec::new();
    let mut columns = Vec::new();
    for (j, g) in generators.iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        for beta in MultiIndex::up_to(vars, r) {
            columns.push(vector(&g.left_mul_d(&beta)));
            labels.push((j, beta));
        }
    }
    let (w, c) = solve_in_span_fraction_free(&vector(q), &columns)?;
    // strip the common factor and make w monic
    let g = c.iter().fold(w.clone(), |acc, p| gcd(&acc, p)).monic();
    let lc = w.leading().expect("nonzero").1.inv().expect("nonzero");
    let reduce = |p: &Polynomial| p.exact_div(&g).expect("common factor").scale(&lc);
    let w = reduce(&w);
    let scalar = Dims::new(vars, 1);
    let mut cofactors = vec![OperatorVector::zero(scalar); generators.len()];
    for ((j, beta), c) in labels.into_iter().zip(c) {
        if !c.is_zero() {
            let term = OperatorVector::term(scalar, Derivative::new(0, beta), RationalFunction::from_poly(reduce(&c)));
            cofactors[j] = &cofactors[j] + &term;
        }
    }
    Some(Witness { w, cofactors })
}

/// `q = 0`, or `q` a constant multiple of a single generator: certified with
/// `w = 1` and no further work.
fn direct_witness(q: &OperatorVector, generators: &[OperatorVector]) -> Option<Witness> {
    let dims = q.dims();
    let one = Polynomial::one(dims.vars);
    let zeros = || vec![OperatorVector::zero(dims.scalar()); generators.len()];
    if q.is_zero() {
        return Some(Witness { w: one, cofactors: zeros() });
    }
    for (j, g) in generators.iter().enumerate() {
        let Some((d, a)) = g.leading() else { continue };
        let Some(b) = q.coeff_ref(d) else { continue };
        let ratio = b * &a.inv().expect("nonzero");
        if ratio.as_constant().is_none() || g.len() != q.len() {
            continue;
        }
        if &g.left_scale(&ratio) == q {
            let mut cofactors = zeros();
            cofactors[j] = OperatorVector::function(dims.vars, ratio);
            return Some(Witness { w: one, cofactors });
        }
    }
    None
}

/// `w·q − Σ_j h_j·p_j = 0`, computed with operator products only.
pub fn verify_witness(witness: &Witness, q: &OperatorVector, generators: &[OperatorVector]) -> bool {
    if witness.w.is_zero() || witness.cofactors.len() != generators.len() {
        return false;
    }
    if witness.w.vars() != q.vars() {
        return false;
    }
    if witness
        .cofactors
        .iter()
        .any(|h| !h.is_polynomial_row() || h.dims() != q.dims().scalar())
    {
        return false;
    }
    if generators.iter().any(|g| g.dims() != q.dims()) {
        return false;
    }
    let lhs = q.left_scale_poly(&witness.w);
    let rhs = combine(q.dims(), &witness.cofactors, generators);
    (&lhs - &rhs).is_zero()
}

/// Coefficients `h ∈ F(x)^k` with `f = Σ_j h_j g_j`, if they exist.
pub fn span_solve(vars: usize, f: &[RationalFunction], gs: &[Vec<RationalFunction>]) -> Option<Vec<RationalFunction>> {
    if gs.iter().any(|g| g.len() != f.len()) {
        return None;
    }
    solve_in_span(f, gs, &RationalFunction::zero(vars))
}

/// Membership through the coefficient-span criterion: with `s` the largest
/// degree among `q` and the basis, test whether `cf_s(q)` lies in the
/// F(x)-span of `cf_s(D^β p)` for every basis element `p` and `|β| ≤ s − deg p`.
pub fn membership_via_span(q: &OperatorVector, generators: &[OperatorVector]) -> Result<bool> {
    let dims = validate(q, generators)?;
    let basis = complete_to_riquier_basis(dims, generators)?;
    membership_via_span_with_basis(q, &basis)
}

pub fn membership_via_span_with_basis(q: &OperatorVector, basis: &RiquierBasis) -> Result<bool> {
    if q.is_zero() {
        return Ok(true);
    }
    if basis.is_empty() {
        return Ok(false);
    }
    let vars = q.vars();
    let s = q.order().max(basis.s0());
    let f = q.cf_slice_symbolic(s)?;
    let mut gs = Vec::new();
    for p in basis.elements() {
        let mut shifted: HashMap<MultiIndex, OperatorVector> = HashMap::new();
        for beta in MultiIndex::up_to(vars, s - p.order()) {
            let op = match beta.as_slice().iter().position(|&e| e > 0) {
                None => p.clone(),
                Some(j) => shifted[&beta.with(j, beta.get(j) - 1)].left_mul_dj(j),
            };
            gs.push(op.cf_slice_symbolic(s)?);
            shifted.insert(beta, op);
        }
    }
    Ok(span_solve(vars, &f, &gs).is_some())
}

/// Membership of `q` in `B_1·p` by Euclidean left division: cancel the
/// leading term of `q` with `c·D^k·p` until the order drops below `p`'s.
pub fn oracle_division_member_1d(q: &OperatorVector, p: &OperatorVector) -> Result<bool> {
    let one_by_one = Dims::new(1, 1);
    if q.dims() != one_by_one || p.dims() != one_by_one {
        return Err(Error::InvalidInput("Euclidean division needs one variable and one unknown".into()));
    }
    let (pd, pc) = p.leading().ok_or(Error::ZeroOperator)?;
    let p_order = pd.order();
    let pc_inv = pc.inv().expect("nonzero");
    let mut rem = q.clone();
    while let Some((d, c)) = rem.leading() {
        let order = d.order();
        if order < p_order {
            break;
        }
        let mut factor = OperatorVector::d_power(1, MultiIndex::from_slice(&[order - p_order]));
        factor = factor.left_scale(&(c * &pc_inv));
        rem = &rem - &scalar_operator_product(&factor, p);
    }
    Ok(rem.is_zero())
}

/// Run every decision path on the same input.
pub fn cross_check(q: &OperatorVector, generators: &[OperatorVector]) -> Result<CrossCheck> {
    let dims = validate(q, generators)?;
    let basis = complete_to_riquier_basis(dims, generators)?;
    let reduction = member_with_basis(q, generators, &basis)?.member;
    let span = membership_via_span_with_basis(q, &basis)?;
    let nonzero: Vec<&OperatorVector> = generators.iter().filter(|g| !g.is_zero()).collect();
    let division = if dims == Dims::new(1, 1) && nonzero.len() == 1 {
        Some(oracle_division_member_1d(q, nonzero[0])?)
    } else {
        None
    };
    Ok(CrossCheck { reduction, span, division })
}
