//! Algebraic invariants on seeded random inputs.

mod common;

use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::Rng;

use weyl_closure::arith::{gcd, lcm};
use weyl_closure::ranking::{make_monic, reduce_full, reduce_full_with};
use weyl_closure::riquier::{complete_to_riquier_basis, parametric_up_to};
use weyl_closure::solver::{formal_solve, formal_solve_with};
use weyl_closure::syntax::{format_row, parse_row, Context};
use weyl_closure::weyl::{apply_to_jet, scalar_operator_product};
use weyl_closure::{Derivative, Dims, FieldMode, MultiIndex, OperatorVector, Polynomial, RationalFunction, Scalar};

fn rational(rng: &mut common::TestRng, vars: usize) -> RationalFunction {
    let num = common::poly(rng, vars, 2, 3);
    let den = common::poly(rng, vars, 2, 2);
    RationalFunction::new(num, den).expect("nonzero denominator")
}

/// A point where every given rational function is defined.
fn point_for(rng: &mut common::TestRng, vars: usize, fs: &[&RationalFunction]) -> Vec<Scalar> {
    loop {
        let p = common::point(rng, vars);
        if fs.iter().all(|f| f.is_defined_at(&p)) {
            return p;
        }
    }
}

/// A row with rational coefficients.
fn rational_row(rng: &mut common::TestRng, dims: Dims, max_order: u32) -> OperatorVector {
    let derivs = Derivative::up_to(dims, max_order);
    let mut p = OperatorVector::zero(dims);
    for _ in 0..rng.gen_range(1..=3) {
        let d = derivs[rng.gen_range(0..derivs.len())].clone();
        p.add_term(d, &rational(rng, dims.vars));
    }
    p
}

/// A jet with random rational values at every derivative.
fn generic_jet(rng: &mut common::TestRng, dims: Dims, point: Vec<Scalar>, order: u32) -> weyl_closure::Jet {
    let mut jet = weyl_closure::Jet::zero(dims, point, order);
    for d in Derivative::up_to(dims, order) {
        jet.set(d, common::rational(rng)).unwrap();
    }
    jet
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn polynomial_ring_axioms(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let vars = rng.gen_range(1..=3);
        let a = common::poly(&mut rng, vars, 3, 4);
        let b = common::poly(&mut rng, vars, 3, 4);
        let c = common::poly(&mut rng, vars, 3, 4);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn rational_field_axioms(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let vars = rng.gen_range(1..=2);
        let a = rational(&mut rng, vars);
        let b = rational(&mut rng, vars);
        let c = rational(&mut rng, vars);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if let Some(inv) = a.inv() {
            prop_assert!((&a * &inv).is_one());
        }
    }

    #[test]
    fn leibniz_rule(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let vars = rng.gen_range(1..=2);
        let f = rational(&mut rng, vars);
        let g = rational(&mut rng, vars);
        let j = rng.gen_range(0..vars);
        let lhs = (&f * &g).derive(j).unwrap();
        let rhs = &(&f.derive(j).unwrap() * &g) + &(&f * &g.derive(j).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn evaluation_is_a_homomorphism(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let vars = rng.gen_range(1..=3);
        let f = rational(&mut rng, vars);
        let g = rational(&mut rng, vars);
        let p = point_for(&mut rng, vars, &[&f, &g]);
        let (fv, gv) = (f.eval(&p).unwrap(), g.eval(&p).unwrap());
        prop_assert_eq!((&f + &g).eval(&p).unwrap(), &fv + &gv);
        prop_assert_eq!((&f * &g).eval(&p).unwrap(), &fv * &gv);
    }

    #[test]
    fn gcd_divides_and_is_maximal(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let vars = rng.gen_range(1..=3);
        let a = common::poly(&mut rng, vars, 2, 3);
        let b = common::poly(&mut rng, vars, 2, 3);
        let c = common::poly(&mut rng, vars, 2, 3);
        let (ac, bc) = (&a * &c, &b * &c);
        let g = gcd(&ac, &bc);
        prop_assert!(ac.exact_div(&g).is_some());
        prop_assert!(bc.exact_div(&g).is_some());
        // the common factor c must survive
        prop_assert!(g.exact_div(&c).is_some());
        let l = lcm(&ac, &bc);
        prop_assert!(l.exact_div(&ac).is_some() && l.exact_div(&bc).is_some());
        prop_assert_eq!((&g * &l).monic(), (&ac * &bc).monic());
    }

    #[test]
    fn ranking_is_total_and_compatible_with_differentiation(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let dims = common::dims(&mut rng, 3, 2);
        let ds = Derivative::up_to(dims, 3);
        let a = &ds[rng.gen_range(0..ds.len())];
        let b = &ds[rng.gen_range(0..ds.len())];
        let gamma = MultiIndex::up_to(dims.vars, 2)[rng.gen_range(0..MultiIndex::up_to(dims.vars, 2).len())].clone();
        prop_assert_eq!(a.cmp(b), a.shifted(&gamma).cmp(&b.shifted(&gamma)));
        prop_assert!(a <= &a.shifted(&gamma));
        prop_assert_eq!(a == b, a.cmp(b) == std::cmp::Ordering::Equal);
    }

    #[test]
    fn operator_product_is_associative(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let vars = rng.gen_range(1..=2);
        let f = common::scalar_op(&mut rng, vars, 2, 3, 2);
        let g = common::scalar_op(&mut rng, vars, 2, 3, 2);
        let h = common::scalar_op(&mut rng, vars, 2, 3, 2);
        let left = scalar_operator_product(&scalar_operator_product(&f, &g), &h);
        let right = scalar_operator_product(&f, &scalar_operator_product(&g, &h));
        prop_assert_eq!(left, right);
    }

    #[test]
    fn left_mul_d_is_a_product(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let dims = common::dims(&mut rng, 2, 2);
        let p = rational_row(&mut rng, dims, 2);
        let beta = MultiIndex::up_to(dims.vars, 3)[rng.gen_range(0..MultiIndex::up_to(dims.vars, 3).len())].clone();
        let d = OperatorVector::d_power(dims.vars, beta.clone());
        prop_assert_eq!(p.left_mul_d(&beta), scalar_operator_product(&d, &p));
    }

    #[test]
    fn shifts_at_agree_with_symbolic_shifts(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let dims = common::dims(&mut rng, 2, 2);
        let p = rational_row(&mut rng, dims, 2);
        let coeffs: Vec<&RationalFunction> = p.coefficients().collect();
        let point = point_for(&mut rng, dims.vars, &coeffs);
        for (beta, terms) in p.shifts_at(2, &point).unwrap() {
            let expected: Vec<(Derivative, Scalar)> = p
                .left_mul_d(&beta)
                .terms()
                .map(|(d, c)| (d.clone(), c.eval(&point).unwrap()))
                .filter(|(_, v)| !v.is_zero())
                .collect();
            prop_assert_eq!(terms, expected);
        }
    }

    #[test]
    fn products_commute_with_jets(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let dims = common::dims(&mut rng, 2, 2);
        let p = common::row(&mut rng, dims, 2, 2, 3);
        let h = common::scalar_op(&mut rng, dims.vars, 2, 2, 2);
        let point = common::point(&mut rng, dims.vars);
        let order = p.order() + h.order() + 2;
        let u = generic_jet(&mut rng, dims, point, order);
        let direct = apply_to_jet(&scalar_operator_product(&h, &p), &u).unwrap();
        let staged = apply_to_jet(&h, &apply_to_jet(&p, &u).unwrap()).unwrap();
        prop_assert_eq!(direct.restrict(staged.order()), staged);
    }

    #[test]
    fn reduction_trace_reconstructs_input(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let dims = common::dims(&mut rng, 2, 2);
        let rules: Vec<OperatorVector> = (0..rng.gen_range(1..=3))
            .map(|_| make_monic(&common::row(&mut rng, dims, 2, 2, 2)).unwrap())
            .collect();
        let p = common::row(&mut rng, dims, 3, 2, 4);
        let trace = reduce_full(&p, &rules);
        prop_assert_eq!(trace.reconstruct(&rules), p);
        let heads: Vec<&Derivative> = rules.iter().map(|r| r.leading().unwrap().0).collect();
        for (d, _) in trace.normal_form.terms() {
            prop_assert!(heads.iter().all(|h| !d.is_multiple_of(h)));
        }
    }

    #[test]
    fn normal_form_is_strategy_independent_on_a_basis(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let dims = common::dims(&mut rng, 2, 2);
        let gens: Vec<OperatorVector> = (0..rng.gen_range(1..=2)).map(|_| common::row(&mut rng, dims, 2, 1, 2)).collect();
        let basis = complete_to_riquier_basis(dims, &gens).unwrap();
        let p = common::row(&mut rng, dims, 3, 2, 4);
        let fixed = reduce_full(&p, basis.elements()).normal_form;
        let mut picker = common::rng(seed ^ 0x5eed);
        let shuffled = reduce_full_with(&p, basis.elements(), |spots| picker.gen_range(0..spots.len())).normal_form;
        prop_assert_eq!(fixed, shuffled);
    }

    #[test]
    fn formal_solution_is_independent_of_rule_choice(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let dims = common::dims(&mut rng, 2, 2);
        let gens: Vec<OperatorVector> = (0..rng.gen_range(1..=2)).map(|_| common::row(&mut rng, dims, 2, 1, 2)).collect();
        let basis = complete_to_riquier_basis(dims, &gens).unwrap();
        let point = common::regular_point(&mut rng, &basis);
        let order = basis.s0() + 3;
        let init: BTreeMap<Derivative, Scalar> =
            parametric_up_to(&basis, order).into_iter().map(|d| (d, common::rational(&mut rng))).collect();
        let first = formal_solve(&basis, &point, &init, order).unwrap();
        prop_assert_eq!(&formal_solve(&basis, &point, &init, order).unwrap(), &first);
        let mut picker = common::rng(seed ^ 0xc0ffee);
        let other = formal_solve_with(&basis, &point, &init, order, |_, rules| picker.gen_range(0..rules.len())).unwrap();
        prop_assert_eq!(other, first);
    }

    #[test]
    fn parse_inverts_format(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let dims = common::dims(&mut rng, 3, 2);
        let field = if rng.gen_bool(0.5) { FieldMode::Real } else { FieldMode::Complex };
        let ctx = Context::new(dims.vars, dims.unknowns, field);
        let mut p = rational_row(&mut rng, dims, 3);
        if field == FieldMode::Complex {
            p = p.left_scale(&RationalFunction::constant(dims.vars, &Scalar::i() + &Scalar::ratio(1, 3)));
        }
        let text = format_row(&p);
        prop_assert_eq!(parse_row(&text, ctx).unwrap(), p);
    }

    #[test]
    fn polynomial_arithmetic_matches_evaluation(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let vars = rng.gen_range(1..=3);
        let a = common::poly(&mut rng, vars, 3, 4);
        let b = common::poly(&mut rng, vars, 3, 4);
        let p = common::point(&mut rng, vars);
        let prod: Polynomial = &a * &b;
        prop_assert_eq!(prod.eval(&p).unwrap(), &a.eval(&p).unwrap() * &b.eval(&p).unwrap());
        if let Some(q) = prod.exact_div(&b) {
            prop_assert_eq!(q, a);
        }
    }
}
