//! Seeded random instances shared by the integration tests.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use weyl_closure::riquier::RiquierBasis;
use weyl_closure::{Derivative, Dims, MultiIndex, OperatorVector, Polynomial, RationalFunction, Scalar};

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_int(rng: &mut TestRng) -> i64 {
    let v = rng.gen_range(1..=3);
    if rng.gen_bool(0.5) {
        v
    } else {
        -v
    }
}

pub fn poly(rng: &mut TestRng, vars: usize, max_deg: u32, max_terms: usize) -> Polynomial {
    let monomials = MultiIndex::up_to(vars, max_deg);
    let count = rng.gen_range(1..=max_terms);
    let mut p = Polynomial::zero(vars);
    for _ in 0..count {
        let e = monomials.choose(rng).expect("nonempty").clone();
        p.add_term(e, &Scalar::from_int(small_int(rng)));
    }
    if p.is_zero() {
        Polynomial::one(vars)
    } else {
        p
    }
}

/// Nonzero row with polynomial coefficients: at most `max_terms` derivatives
/// of order `≤ max_order`.
pub fn row(rng: &mut TestRng, dims: Dims, max_order: u32, max_deg: u32, max_terms: usize) -> OperatorVector {
    let derivs = Derivative::up_to(dims, max_order);
    loop {
        let count = rng.gen_range(1..=max_terms);
        let mut p = OperatorVector::zero(dims);
        for _ in 0..count {
            let d = derivs.choose(rng).expect("nonempty").clone();
            let c = RationalFunction::from_poly(poly(rng, dims.vars, max_deg, 2));
            p.add_term(d, &c);
        }
        if !p.is_zero() {
            return p;
        }
    }
}

pub fn scalar_op(rng: &mut TestRng, vars: usize, max_order: u32, max_deg: u32, max_terms: usize) -> OperatorVector {
    row(rng, Dims::new(vars, 1), max_order, max_deg, max_terms)
}

pub fn rational(rng: &mut TestRng) -> Scalar {
    let num = rng.gen_range(-4..=4);
    let den = rng.gen_range(1..=3);
    Scalar::ratio(num, den)
}

pub fn point(rng: &mut TestRng, vars: usize) -> Vec<Scalar> {
    (0..vars).map(|_| rational(rng)).collect()
}

/// A random point where every basis coefficient is defined.
pub fn regular_point(rng: &mut TestRng, basis: &RiquierBasis) -> Vec<Scalar> {
    for _ in 0..200 {
        let p = point(rng, basis.dims().vars);
        if basis.elements().iter().all(|e| e.is_defined_at(&p)) {
            return p;
        }
    }
    weyl_closure::solver::find_regular_point(basis).expect("regular point")
}

pub fn dims(rng: &mut TestRng, max_vars: usize, max_unknowns: usize) -> Dims {
    Dims::new(rng.gen_range(1..=max_vars), rng.gen_range(1..=max_unknowns))
}

/// `Σ h_j·g_j` with random polynomial scalar operators `h_j`.
pub fn combination(rng: &mut TestRng, gens: &[OperatorVector], max_order: u32, max_deg: u32) -> OperatorVector {
    let dims = gens[0].dims();
    let mut acc = OperatorVector::zero(dims);
    for g in gens {
        if rng.gen_bool(0.7) {
            let h = scalar_op(rng, dims.vars, max_order, max_deg, 2);
            acc = &acc + &weyl_closure::weyl::scalar_operator_product(&h, g);
        }
    }
    acc
}

/// A membership question together with what the construction guarantees.
#[derive(Debug, Clone)]
pub struct Case {
    pub generators: Vec<OperatorVector>,
    pub q: OperatorVector,
    /// `Some(true)` when membership holds by construction.
    pub known_member: Option<bool>,
}

/// Random cases: direct combinations, members of the closure only (the
/// generator is `a·r` and the candidate a multiple of `r`), and unrelated
/// candidates.
pub fn case(rng: &mut TestRng, dims: Dims, max_gens: usize, max_order: u32, max_deg: u32) -> Case {
    let k = rng.gen_range(1..=max_gens);
    match rng.gen_range(0..4) {
        0 => {
            let generators: Vec<OperatorVector> =
                (0..k).map(|_| row(rng, dims, max_order, max_deg, 2)).collect();
            let q = combination(rng, &generators, 1, 1);
            Case { generators, q, known_member: Some(true) }
        }
        1 => {
            let r = row(rng, dims, max_order, max_deg.min(1), 2);
            let a = RationalFunction::from_poly(poly(rng, dims.vars, 1.max(max_deg.min(2)), 2));
            let mut generators = vec![r.left_scale(&a)];
            for _ in 1..k {
                generators.push(row(rng, dims, max_order, max_deg, 2));
            }
            generators.shuffle(rng);
            let h = scalar_op(rng, dims.vars, 1, 1, 2);
            let q = weyl_closure::weyl::scalar_operator_product(&h, &r);
            Case { generators, q, known_member: Some(true) }
        }
        _ => {
            let generators: Vec<OperatorVector> =
                (0..k).map(|_| row(rng, dims, max_order, max_deg, 2)).collect();
            let q = row(rng, dims, max_order, max_deg, 2);
            Case { generators, q, known_member: None }
        }
    }
}
