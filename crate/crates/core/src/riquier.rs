//! Completion of a generating set of a submodule of `B_m(F)^n` into a
//! Riquier basis (monic, autoreduced, every S-pair reducing to zero), plus
//! the principal / parametric split of the derivatives.
//!
//! Completion runs fraction-free: elements keep polynomial coefficients
//! and are reduced by pseudo-division, so every step is recorded as a
//! combination with polynomial-coefficient multipliers. Generator cofactors
//! are unwound from that record only when asked for.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, OnceLock};

use crate::arith::{gcd, MultiIndex, Polynomial, RationalFunction, Scalar};
use crate::error::{Error, Result};
use crate::ranking::reduce_full;
use crate::weyl::cleared::{expand, Cleared};
use crate::weyl::{scalar_operator_product, Derivative, Dims, OperatorVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeClass {
    Principal,
    Parametric,
}

/// Where a term of an element's derivation comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Source {
    Generator(usize),
    Element(usize),
}

/// `den·element = Σ M·source` with a monic polynomial `den` and scalar
/// operators `M` with polynomial coefficients. Only earlier elements appear.
#[derive(Debug, Clone)]
struct Record {
    den: Polynomial,
    terms: Vec<(OperatorVector, Source)>,
}

#[derive(Debug, Clone)]
pub struct RiquierBasis {
    dims: Dims,
    /// Monic elements, sorted by head.
    elements: Vec<OperatorVector>,
    /// The same elements with primitive polynomial coefficients.
    primitive: Vec<OperatorVector>,
    /// Head coefficient of each primitive element.
    leads: Vec<Polynomial>,
    /// Record id of each element.
    ids: Vec<usize>,
    history: Arc<Vec<Record>>,
    /// `cofactors[b][j]`: scalar operator with `Σ_j cofactors[b][j]·gen_j = elements[b]`,
    /// expanded on first use.
    cofactors: OnceLock<Vec<Vec<OperatorVector>>>,
    generator_count: usize,
}

impl RiquierBasis {
    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn elements(&self) -> &[OperatorVector] {
        &self.elements
    }

    pub fn generator_cofactors(&self) -> &[Vec<OperatorVector>] {
        self.cofactors.get_or_init(|| {
            (0..self.elements.len())
                .map(|b| self.cofactors_of(&BTreeMap::from([(b, OperatorVector::one(self.dims.vars))])))
                .collect()
        })
    }

    /// Generator cofactors of `Σ_b combination[b]·elements[b]` over `B_m`.
    pub fn cofactors_of(&self, combination: &BTreeMap<usize, OperatorVector>) -> Vec<OperatorVector> {
        let (w, hs) = self.cleared_cofactors_of(combination);
        let inv = RationalFunction::new(Polynomial::one(self.dims.vars), w).expect("nonzero");
        hs.iter().map(|h| h.left_scale(&inv)).collect()
    }

    /// `(w, h)` with monic `w ∈ F[x]` and `h_j ∈ A_m` such that
    /// `w·Σ_b combination[b]·elements[b] = Σ_j h_j·gen_j`.
    pub fn cleared_cofactors_of(&self, combination: &BTreeMap<usize, OperatorVector>) -> (Polynomial, Vec<OperatorVector>) {
        let vars = self.dims.vars;
        let mut seeds: BTreeMap<usize, Cleared> = BTreeMap::new();
        for (&b, c) in combination {
            let term = Cleared::from_operator(c).compose(&Cleared::over(&self.leads[b], OperatorVector::one(vars)));
            let slot = seeds.entry(self.ids[b]).or_insert_with(|| Cleared::zero(vars));
            *slot = slot.add(&term);
        }
        self.unwind(seeds)
    }

    /// A certificate `(w, h)` with `w·q = Σ_j h_j·gen_j`, `w ∈ F[x]` monic
    /// and `h_j ∈ A_m`, or `None` when `q` does not reduce to zero.
    pub fn certificate(&self, q: &OperatorVector) -> Option<(Polynomial, Vec<OperatorVector>)> {
        let vars = self.dims.vars;
        let d = crate::arith::common_denominator(vars, q.coefficients());
        let (h, combination, rest) = pseudo_reduce(&q.left_scale_poly(&d), &self.primitive, true);
        if !rest.is_zero() {
            return None;
        }
        let total = &h * &d;
        let mut seeds: BTreeMap<usize, Cleared> = BTreeMap::new();
        for (b, l) in combination {
            let term = Cleared::over(&total, l);
            let slot = seeds.entry(self.ids[b]).or_insert_with(|| Cleared::zero(vars));
            *slot = slot.add(&term);
        }
        Some(self.unwind(seeds))
    }

    /// Expand `Σ seed_id·element_id` in terms of the generators, newest
    /// record first, so that each recorded step is composed once.
    fn unwind(&self, mut pending: BTreeMap<usize, Cleared>) -> (Polynomial, Vec<OperatorVector>) {
        let vars = self.dims.vars;
        let mut slots = vec![Cleared::zero(vars); self.generator_count];
        while let Some((id, l)) = pending.pop_last() {
            if l.is_zero() {
                continue;
            }
            let record = &self.history[id];
            for (m, source) in &record.terms {
                let lm = if m.is_one() && record.den.is_one() {
                    l.clone()
                } else {
                    l.compose(&Cleared::over(&record.den, m.clone()))
                };
                let slot = match *source {
                    Source::Generator(j) => &mut slots[j],
                    Source::Element(e) => pending.entry(e).or_insert_with(|| Cleared::zero(vars)),
                };
                *slot = slot.add(&lm);
            }
        }
        let mut den: Vec<(Polynomial, u32)> = Vec::new();
        for s in &slots {
            for (f, e) in &s.den {
                match den.iter_mut().find(|(g, _)| g == f) {
                    Some((_, k)) => *k = (*k).max(*e),
                    None => den.push((f.clone(), *e)),
                }
            }
        }
        let mut hs: Vec<OperatorVector> = slots
            .iter()
            .map(|s| {
                let lift = den.iter().fold(Polynomial::one(vars), |acc, (f, e)| {
                    let mine = s.den.iter().find(|(g, _)| g == f).map_or(0, |(_, k)| *k);
                    &acc * &f.pow(e - mine)
                });
                s.num.left_scale_poly(&lift)
            })
            .collect();
        // drop factors that still divide every coefficient
        for (f, e) in den.iter_mut() {
            while *e > 0 {
                let divided: Option<Vec<OperatorVector>> = hs.iter().map(|h| divide_coefficients(h, f)).collect();
                match divided {
                    Some(d) => {
                        hs = d;
                        *e -= 1;
                    }
                    None => break,
                }
            }
        }
        (expand(&den, vars), hs)
    }

    pub fn generator_count(&self) -> usize {
        self.generator_count
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    /// Largest degree among the elements; 0 for the empty basis.
    pub fn s0(&self) -> u32 {
        self.elements.iter().map(OperatorVector::order).max().unwrap_or(0)
    }

    pub fn heads(&self) -> Vec<Derivative> {
        self.elements.iter().map(|e| e.leading().expect("nonzero").0.clone()).collect()
    }

    pub fn classify(&self, d: &Derivative) -> DerivativeClass {
        classify_derivative(self, d)
    }

    /// The S-pair of elements `a` and `b`, or `None` when their heads lie in
    /// different components.
    pub fn s_pair(&self, a: usize, b: usize) -> Option<OperatorVector> {
        s_pair(&self.elements[a], &self.elements[b])
    }

    /// Every S-pair reduces to zero against the basis.
    pub fn is_confluent(&self) -> bool {
        let n = self.elements.len();
        (0..n).all(|a| {
            (a + 1..n).all(|b| match self.s_pair(a, b) {
                Some(s) => reduce_full(&s, &self.elements).normal_form.is_zero(),
                None => true,
            })
        })
    }

    /// No derivative of any element is a multiple of another element's head.
    pub fn is_autoreduced(&self) -> bool {
        let heads = self.heads();
        self.elements.iter().enumerate().all(|(a, e)| {
            e.terms().all(|(d, _)| heads.iter().enumerate().all(|(b, h)| a == b || !d.is_multiple_of(h)))
        })
    }

    /// `Σ_j cofactors[b][j]·generators[j]` for element `b`.
    pub fn reconstruct(&self, b: usize, generators: &[OperatorVector]) -> OperatorVector {
        combine(self.dims, &self.generator_cofactors()[b], generators)
    }
}

pub(crate) fn combine(dims: Dims, cofactors: &[OperatorVector], generators: &[OperatorVector]) -> OperatorVector {
    let mut acc = OperatorVector::zero(dims);
    for (h, g) in cofactors.iter().zip(generators) {
        if !h.is_zero() {
            acc = &acc + &scalar_operator_product(h, g);
        }
    }
    acc
}

fn s_pair(f: &OperatorVector, g: &OperatorVector) -> Option<OperatorVector> {
    let (hf, _) = f.leading()?;
    let (hg, _) = g.leading()?;
    if hf.component != hg.component {
        return None;
    }
    let lcm = hf.alpha.lcm(&hg.alpha);
    let sf = lcm.checked_sub(&hf.alpha).expect("lcm");
    let sg = lcm.checked_sub(&hg.alpha).expect("lcm");
    Some(&f.left_mul_d(&sf) - &g.left_mul_d(&sg))
}

pub fn classify_derivative(basis: &RiquierBasis, d: &Derivative) -> DerivativeClass {
    if basis.elements.iter().any(|e| d.is_multiple_of(e.leading().expect("nonzero").0)) {
        DerivativeClass::Principal
    } else {
        DerivativeClass::Parametric
    }
}

/// Parametric derivatives in `Δ_s`, in ranking order.
pub fn parametric_up_to(basis: &RiquierBasis, s: u32) -> Vec<Derivative> {
    Derivative::up_to(basis.dims, s)
        .into_iter()
        .filter(|d| classify_derivative(basis, d) == DerivativeClass::Parametric)
        .collect()
}

/// `h / f` coefficientwise, when `f` divides every coefficient.
fn divide_coefficients(h: &OperatorVector, f: &Polynomial) -> Option<OperatorVector> {
    let mut out = OperatorVector::zero(h.dims());
    for (d, c) in h.terms() {
        out.add_term(d.clone(), &RationalFunction::from_poly(c.numer().exact_div(f)?));
    }
    Some(out)
}

fn head_coefficient(p: &OperatorVector) -> &Polynomial {
    p.leading().expect("nonzero").1.numer()
}

/// `c·D^γ` as a scalar operator.
fn monomial_operator(vars: usize, c: Polynomial, gamma: MultiIndex) -> OperatorVector {
    OperatorVector::term(Dims::new(vars, 1), Derivative::new(0, gamma), RationalFunction::from_poly(c))
}

/// Pseudo-reduction of a polynomial row by polynomial rules: returns
/// `(h, L, r)` with `h·f = Σ_b L_b·rules[b] + r`, `h ∈ F[x]`, every `L_b`
/// with polynomial coefficients. Always rewrites the ranking-highest
/// reducible derivative. With `full`, `r` is irreducible; otherwise only its
/// leading derivative is.
fn pseudo_reduce(
    f: &OperatorVector,
    rules: &[OperatorVector],
    full: bool,
) -> (Polynomial, BTreeMap<usize, OperatorVector>, OperatorVector) {
    let vars = f.vars();
    let heads: Vec<&Derivative> = rules.iter().map(|r| r.leading().expect("nonzero").0).collect();
    let mut order: Vec<usize> = (0..rules.len()).collect();
    order.sort_by(|&a, &b| heads[b].cmp(heads[a]).then(a.cmp(&b)));
    let mut h = Polynomial::one(vars);
    let mut combination: BTreeMap<usize, OperatorVector> = BTreeMap::new();
    let mut current = f.clone();
    let mut shifted: HashMap<(usize, MultiIndex), OperatorVector> = HashMap::new();
    loop {
        let candidates = current.terms().rev().take(if full { usize::MAX } else { 1 });
        let step = candidates.into_iter().find_map(|(d, _)| {
            order.iter().find(|&&j| d.is_multiple_of(heads[j])).map(|&j| (d.clone(), j))
        });
        let Some((target, j)) = step else { break };
        let gamma = target.alpha.checked_sub(&heads[j].alpha).expect("divides");
        let a = current.coeff(&target).numer().clone();
        let lead = head_coefficient(&rules[j]);
        let g = gcd(&a, lead);
        let scale = lead.exact_div(&g).expect("gcd divides");
        let factor = a.exact_div(&g).expect("gcd divides");
        let rule_shift = shifted.entry((j, gamma.clone())).or_insert_with(|| rules[j].left_mul_d(&gamma));
        if !scale.is_one() {
            current = current.left_scale_poly(&scale);
            h = &h * &scale;
            for l in combination.values_mut() {
                *l = l.left_scale_poly(&scale);
            }
        }
        current = &current - &rule_shift.left_scale_poly(&factor);
        let entry = combination.entry(j).or_insert_with(|| OperatorVector::zero(Dims::new(vars, 1)));
        *entry = &*entry + &monomial_operator(vars, factor, gamma);
    }
    combination.retain(|_, l| !l.is_zero());
    (h, combination, current)
}

/// Split a nonzero polynomial row as `c·s·p` with monic polynomial `c`,
/// scalar `s` and `p` primitive with a head coefficient whose leading
/// scalar is 1.
fn make_primitive(r: &OperatorVector) -> (Polynomial, Scalar, OperatorVector) {
    let vars = r.vars();
    let mut c = Polynomial::zero(vars);
    for coeff in r.coefficients() {
        c = gcd(&c, coeff.numer());
        if c.is_one() {
            break;
        }
    }
    let p = if c.is_one() { r.clone() } else { divide_coefficients(r, &c).expect("content divides") };
    let s = head_coefficient(&p).leading().expect("nonzero").1.clone();
    let p = if s.is_one() { p } else { p.left_scale(&RationalFunction::constant(vars, s.inv().expect("nonzero"))) };
    (c, s, p)
}

struct Element {
    id: usize,
    op: OperatorVector,
}

impl Element {
    fn head(&self) -> &Derivative {
        self.op.leading().expect("nonzero").0
    }
}

/// Turn `rest = Σ terms` into a primitive element and its record.
fn new_element(rest: &OperatorVector, terms: Vec<(OperatorVector, Source)>) -> (OperatorVector, Record) {
    let (c, s, p) = make_primitive(rest);
    let terms = if s.is_one() {
        terms
    } else {
        let inv = RationalFunction::constant(rest.vars(), s.inv().expect("nonzero"));
        terms.into_iter().map(|(m, src)| (m.left_scale(&inv), src)).collect()
    };
    (p, Record { den: c, terms })
}

/// Buchberger-style completion with full autoreduction. Zero generators
/// are ignored; an empty or all-zero input yields the empty basis.
pub fn complete_to_riquier_basis(dims: Dims, generators: &[OperatorVector]) -> Result<RiquierBasis> {
    if let Some(g) = generators.iter().find(|g| g.dims() != dims) {
        return Err(Error::DimensionMismatch(format!(
            "generator has dims {:?}, expected {:?}",
            g.dims(),
            dims
        )));
    }
    let vars = dims.vars;
    let k = generators.len();
    let one = OperatorVector::one(vars);
    // pending rows with polynomial coefficients and their exact derivation
    let mut todo: Vec<(OperatorVector, Vec<(OperatorVector, Source)>)> = Vec::new();
    for (j, g) in generators.iter().enumerate() {
        if !g.is_zero() {
            let d = crate::arith::common_denominator(vars, g.coefficients());
            let m = monomial_operator(vars, d.clone(), MultiIndex::zero(vars));
            todo.push((g.left_scale_poly(&d), vec![(m, Source::Generator(j))]));
        }
    }

    let mut history: Vec<Record> = Vec::new();
    let mut basis: Vec<Element> = Vec::new();
    let mut pairs: BTreeSet<(Derivative, usize, usize)> = BTreeSet::new();

    loop {
        // highest head at the front, so pop() takes the lowest
        todo.sort_by(|a, b| b.0.leading().map(|x| x.0).cmp(&a.0.leading().map(|x| x.0)));
        if let Some((op, origin)) = todo.pop() {
            let rules: Vec<OperatorVector> = basis.iter().map(|e| e.op.clone()).collect();
            let (h, combination, rest) = pseudo_reduce(&op, &rules, false);
            if rest.is_zero() {
                continue;
            }
            let mut terms: Vec<(OperatorVector, Source)> =
                origin.into_iter().map(|(m, src)| (m.left_scale_poly(&h), src)).collect();
            for (b, l) in combination {
                terms.push((-&l, Source::Element(basis[b].id)));
            }
            let (nf, record) = new_element(&rest, terms);
            let new_head = nf.leading().expect("nonzero").0.clone();

            let (keep, evicted): (Vec<Element>, Vec<Element>) =
                basis.into_iter().partition(|e| !e.head().is_multiple_of(&new_head));
            basis = keep;
            for e in evicted {
                pairs.retain(|(_, a, b)| *a != e.id && *b != e.id);
                todo.push((e.op, vec![(one.clone(), Source::Element(e.id))]));
            }

            let id = history.len();
            history.push(record);
            for e in &basis {
                let h = e.head();
                if h.component == new_head.component {
                    let lcm = Derivative::new(h.component, h.alpha.lcm(&new_head.alpha));
                    pairs.insert((lcm, e.id, id));
                }
            }
            basis.push(Element { id, op: nf });
            continue;
        }

        let Some((_, a, b)) = pairs.pop_first() else {
            break;
        };
        let ea = basis.iter().find(|e| e.id == a).expect("live pair");
        let eb = basis.iter().find(|e| e.id == b).expect("live pair");
        let lcm = ea.head().alpha.lcm(&eb.head().alpha);
        let sa = lcm.checked_sub(&ea.head().alpha).expect("lcm");
        let sb = lcm.checked_sub(&eb.head().alpha).expect("lcm");
        let (ha, hb) = (head_coefficient(&ea.op), head_coefficient(&eb.op));
        let g = gcd(ha, hb);
        let ma = hb.exact_div(&g).expect("gcd divides");
        let mb = ha.exact_div(&g).expect("gcd divides");
        let s = &ea.op.left_mul_d(&sa).left_scale_poly(&ma) - &eb.op.left_mul_d(&sb).left_scale_poly(&mb);
        let origin = vec![
            (monomial_operator(vars, ma, sa), Source::Element(a)),
            (-&monomial_operator(vars, mb, sb), Source::Element(b)),
        ];
        todo.push((s, origin));
    }

    interreduce(&mut basis, &mut history);
    basis.sort_by(|a, b| a.head().cmp(b.head()));
    let leads: Vec<Polynomial> = basis.iter().map(|e| head_coefficient(&e.op).clone()).collect();
    let elements: Vec<OperatorVector> = basis
        .iter()
        .zip(&leads)
        .map(|(e, l)| e.op.left_scale(&RationalFunction::new(Polynomial::one(vars), l.clone()).expect("nonzero")))
        .collect();
    let (primitive, ids) = basis.into_iter().map(|e| (e.op, e.id)).unzip();
    Ok(RiquierBasis {
        dims,
        elements,
        primitive,
        leads,
        ids,
        history: Arc::new(history),
        cofactors: OnceLock::new(),
        generator_count: k,
    })
}

/// Reduce every element's tail by the others. Heads are pairwise
/// non-divisible, so heads survive.
fn interreduce(basis: &mut [Element], history: &mut Vec<Record>) {
    for i in 0..basis.len() {
        let others: Vec<usize> = (0..basis.len()).filter(|&j| j != i).collect();
        let rules: Vec<OperatorVector> = others.iter().map(|&j| basis[j].op.clone()).collect();
        let (h, combination, rest) = pseudo_reduce(&basis[i].op, &rules, true);
        if combination.is_empty() {
            continue;
        }
        let vars = rest.vars();
        let mut terms = vec![(monomial_operator(vars, h, MultiIndex::zero(vars)), Source::Element(basis[i].id))];
        for (r, l) in combination {
            terms.push((-&l, Source::Element(basis[others[r]].id)));
        }
        let (op, record) = new_element(&rest, terms);
        basis[i].id = history.len();
        history.push(record);
        basis[i].op = op;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{MultiIndex, Polynomial, RationalFunction, Scalar};

    fn d2(a: u32, b: u32) -> Derivative {
        Derivative::new(0, MultiIndex::from_slice(&[a, b]))
    }

    fn k(vars: usize, c: i64) -> RationalFunction {
        RationalFunction::constant(vars, Scalar::from_int(c))
    }

    #[test]
    fn commuting_heads_stay() {
        let dims = Dims::new(2, 1);
        let g = vec![
            OperatorVector::term(dims, d2(1, 0), k(2, 1)),
            OperatorVector::term(dims, d2(0, 1), k(2, 1)),
        ];
        let b = complete_to_riquier_basis(dims, &g).unwrap();
        assert_eq!(b.len(), 2);
        assert!(b.s_pair(0, 1).unwrap().is_zero());
        assert_eq!(parametric_up_to(&b, 1), vec![d2(0, 0)]);
    }

    #[test]
    fn inconsistent_pair_collapses_to_one() {
        let dims = Dims::new(2, 1);
        let x2 = RationalFunction::from_poly(Polynomial::var(2, 1));
        let g = vec![
            OperatorVector::from_terms(dims, [(d2(1, 0), k(2, 1)), (d2(0, 0), -&x2)]),
            OperatorVector::term(dims, d2(0, 1), k(2, 1)),
        ];
        let b = complete_to_riquier_basis(dims, &g).unwrap();
        assert_eq!(b.elements(), &[OperatorVector::term(dims, d2(0, 0), k(2, 1))]);
        assert!(parametric_up_to(&b, 3).is_empty());
        assert_eq!(b.reconstruct(0, &g), b.elements()[0]);
    }

    #[test]
    fn empty_input() {
        let dims = Dims::new(1, 1);
        let b = complete_to_riquier_basis(dims, &[OperatorVector::zero(dims)]).unwrap();
        assert!(b.is_empty());
        assert_eq!(b.s0(), 0);
        assert_eq!(classify_derivative(&b, &Derivative::base(1, 0)), DerivativeClass::Parametric);
    }
}
