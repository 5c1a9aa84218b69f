//! Multivariate polynomial gcd over ℚ(i).
//!
//! Dense evaluation and interpolation: one variable `y` is specialized at
//! successive integers, the gcds of the images are computed recursively and
//! normalized by the image of `gcd(lc(a), lc(b))`, and the coefficients are
//! interpolated in `y` until the candidate divides both inputs. Images whose
//! leading monomial is too large come from unlucky points and are skipped.
//! Results are monic under graded-lex order.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{MultiIndex, Polynomial, Scalar};

/// Evaluation points tried before giving up on a variable; unreachable for
/// inputs of sane size since only finitely many points are unlucky.
const MAX_POINTS: i64 = 10_000;

pub fn gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    let vars = a.vars();
    if a.is_constant() || b.is_constant() {
        return Polynomial::one(vars);
    }
    if a.is_monomial() {
        return monomial_gcd(a, b);
    }
    if b.is_monomial() {
        return monomial_gcd(b, a);
    }
    if a == b {
        return a.monic();
    }

    // a variable present in only one argument can only occur in the gcd
    // through the content with respect to it
    for j in 0..vars {
        match (a.degree_in(j), b.degree_in(j)) {
            (0, d) if d > 0 => return gcd(a, &content(b, j)),
            (d, 0) if d > 0 => return gcd(&content(a, j), b),
            _ => {}
        }
    }
    let present: Vec<usize> = (0..vars).filter(|&j| a.degree_in(j) > 0).collect();
    if present.len() == 1 {
        return euclid(a.clone(), b.clone(), present[0]);
    }
    let y = *present
        .iter()
        .min_by_key(|&&j| a.degree_in(j).max(b.degree_in(j)))
        .expect("two or more variables");
    interpolate(a, b, y)
}

pub fn lcm(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if a.is_zero() || b.is_zero() {
        return Polynomial::zero(a.vars());
    }
    let g = gcd(a, b);
    (&a.exact_div(&g).expect("gcd divides") * b).monic()
}

/// gcd of a monomial `m` with an arbitrary nonzero `p`: the smallest
/// exponents of `m` and of every term of `p`.
fn monomial_gcd(m: &Polynomial, p: &Polynomial) -> Polynomial {
    let vars = m.vars();
    let mut e = m.leading().expect("nonzero").0.clone();
    for (f, _) in p.terms() {
        e = e.gcd(f);
        if e.is_zero() {
            break;
        }
    }
    Polynomial::monomial(vars, e, Scalar::one())
}

/// gcd of the coefficients of `p` viewed as a polynomial in `x_v`.
fn content(p: &Polynomial, v: usize) -> Polynomial {
    let mut coeffs: Vec<Polynomial> = p.coefficients_in(v).into_values().collect();
    coeffs.sort_by_key(Polynomial::len);
    let mut acc = Polynomial::zero(p.vars());
    for c in coeffs {
        acc = gcd(&acc, &c);
        if acc.is_one() {
            break;
        }
    }
    acc
}

/// Coefficients of `p` in `K[x_y]`, keyed by the remaining exponents.
fn split_off(p: &Polynomial, y: usize) -> BTreeMap<MultiIndex, Polynomial> {
    let vars = p.vars();
    let mut out: BTreeMap<MultiIndex, Polynomial> = BTreeMap::new();
    for (e, c) in p.terms() {
        out.entry(e.with(y, 0))
            .or_insert_with(|| Polynomial::zero(vars))
            .add_term(MultiIndex::unit(vars, y).with(y, e.get(y)), c);
    }
    out
}

/// gcd in `K[x_y]` of the coefficients from [`split_off`].
fn content_in(p: &Polynomial, y: usize) -> Polynomial {
    let mut acc = Polynomial::zero(p.vars());
    for c in split_off(p, y).into_values() {
        acc = if acc.is_zero() { c.monic() } else { euclid(acc, c, y) };
        if acc.is_one() {
            break;
        }
    }
    acc
}

/// Leading coefficient in `K[x_y]` with respect to the other variables.
fn leading_in(p: &Polynomial, y: usize) -> (MultiIndex, Polynomial) {
    split_off(p, y).into_iter().next_back().expect("nonzero")
}

fn eval_univariate(p: &Polynomial, y: usize, c: &Scalar) -> Scalar {
    let mut acc = Scalar::zero();
    for (e, k) in p.terms() {
        acc = &acc + &(k * &c.pow(e.get(y)));
    }
    acc
}

/// `p` with `x_y = c`.
fn substitute(p: &Polynomial, y: usize, c: &Scalar) -> Polynomial {
    let mut out = Polynomial::zero(p.vars());
    for (e, k) in p.terms() {
        out.add_term(e.with(y, 0), &(k * &c.pow(e.get(y))));
    }
    out
}

fn interpolate(a: &Polynomial, b: &Polynomial, y: usize) -> Polynomial {
    let vars = a.vars();
    let ca = content_in(a, y);
    let cb = content_in(b, y);
    let a = a.exact_div(&ca).expect("content divides");
    let b = b.exact_div(&cb).expect("content divides");
    let c = euclid(ca, cb, y);
    let (_, la) = leading_in(&a, y);
    let (_, lb) = leading_in(&b, y);
    let gamma = euclid(la.clone(), lb.clone(), y);
    let bound = a.degree_in(y).min(b.degree_in(y)) + gamma.degree_in(y);

    let yvar = Polynomial::var(vars, y);
    let mut lead: Option<MultiIndex> = None;
    let mut h = Polynomial::zero(vars);
    let mut modulus = Polynomial::one(vars);
    let mut used = 0u32;
    for k in 1..=MAX_POINTS {
        let point = Scalar::from_int(if k % 2 == 1 { (k + 1) / 2 } else { -k / 2 });
        if eval_univariate(&la, y, &point).is_zero() || eval_univariate(&lb, y, &point).is_zero() {
            continue;
        }
        let image = gcd(&substitute(&a, y, &point), &substitute(&b, y, &point));
        if image.is_constant() {
            return c;
        }
        let lm = image.leading().expect("nonzero").0.clone();
        match &lead {
            Some(l) if lm > *l => continue,
            Some(l) if lm < *l => {
                h = Polynomial::zero(vars);
                modulus = Polynomial::one(vars);
                used = 0;
            }
            _ => {}
        }
        lead = Some(lm);
        let image = image.scale(&eval_univariate(&gamma, y, &point));
        let residual = &image - &substitute(&h, y, &point);
        let unchanged = residual.is_zero();
        if !unchanged {
            let scale = eval_univariate(&modulus, y, &point).inv().expect("distinct points");
            h = &h + &(&modulus * &residual.scale(&scale));
        }
        modulus = &modulus * &(&yvar - &Polynomial::constant(vars, point));
        used += 1;
        if (unchanged && used > 1) || used > bound {
            let candidate = h.exact_div(&content_in(&h, y)).expect("content divides");
            if a.exact_div(&candidate).is_some() && b.exact_div(&candidate).is_some() {
                return (&c * &candidate).monic();
            }
        }
    }
    unreachable!("no lucky evaluation points for gcd")
}

/// Remainder of `f` by `g` for polynomials in `x_v` alone.
fn field_rem(f: &Polynomial, g: &Polynomial, v: usize) -> Polynomial {
    let (dg, lg) = g.leading().map(|(e, c)| (e.get(v), c.clone())).expect("nonzero");
    let lg_inv = lg.inv().expect("nonzero");
    let mut r = f.clone();
    while let Some((e, c)) = r.leading() {
        let dr = e.get(v);
        if dr < dg {
            break;
        }
        let shift = MultiIndex::unit(r.vars(), v).with(v, dr - dg);
        let q = -&(c * &lg_inv);
        for (ge, gc) in g.terms() {
            r.add_term(ge.add(&shift), &(gc * &q));
        }
    }
    r
}

/// Monic gcd of polynomials in `x_v` alone.
fn euclid(a: Polynomial, b: Polynomial, v: usize) -> Polynomial {
    if a.is_zero() || b.is_zero() {
        return if a.is_zero() { b.monic() } else { a.monic() };
    }
    if a.is_constant() || b.is_constant() {
        return Polynomial::one(a.vars());
    }
    if let (Some(da), Some(db)) = (integer_dense(&a, v), integer_dense(&b, v)) {
        if let Some(g) = heuristic_gcd(&da, &db) {
            let vars = a.vars();
            let terms = g.into_iter().enumerate().map(|(k, c)| {
                (MultiIndex::unit(vars, v).with(v, k as u32), Scalar::from_bigint(c))
            });
            return Polynomial::from_terms(vars, terms).monic();
        }
    }
    field_euclid(a, b, v)
}

/// Dense integer coefficients (index = degree) of a real polynomial in
/// `x_v`, scaled to be primitive.
fn integer_dense(p: &Polynomial, v: usize) -> Option<Vec<BigInt>> {
    if !p.terms().all(|(_, c)| c.is_real()) {
        return None;
    }
    let den = p.terms().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.re().denom()));
    let mut out = vec![BigInt::zero(); p.degree_in(v) as usize + 1];
    for (e, c) in p.terms() {
        out[e.get(v) as usize] = c.re().numer() * (&den / c.re().denom());
    }
    Some(primitive(out))
}

fn primitive(mut p: Vec<BigInt>) -> Vec<BigInt> {
    let g = p.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if !g.is_zero() && !g.is_one() {
        for c in &mut p {
            *c = &*c / &g;
        }
    }
    p
}

fn eval_dense(p: &[BigInt], x: &BigInt) -> BigInt {
    p.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

/// True when `g` divides `p` in `ℤ[x]`.
fn divides_dense(g: &[BigInt], p: &[BigInt]) -> bool {
    let dg = g.len() - 1;
    if p.len() < g.len() {
        return false;
    }
    let lead = &g[dg];
    let mut r = p.to_vec();
    for top in (dg..r.len()).rev() {
        if r[top].is_zero() {
            continue;
        }
        let (q, rem) = r[top].div_rem(lead);
        if !rem.is_zero() {
            return false;
        }
        let shift = top - dg;
        for (k, c) in g.iter().enumerate() {
            r[shift + k] -= &q * c;
        }
    }
    r.iter().all(Zero::is_zero)
}

/// Heuristic gcd of primitive integer polynomials: the integer gcd of the
/// values at a large point, read back in balanced base `ξ`, is the gcd
/// whenever its primitive part divides both inputs.
fn heuristic_gcd(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let norm = |p: &[BigInt]| p.iter().map(|c| c.abs()).max().unwrap_or_default();
    let mut xi: BigInt = 2 * norm(a).min(norm(b)) + 29;
    for _ in 0..6 {
        let gamma = eval_dense(a, &xi).gcd(&eval_dense(b, &xi));
        let mut g = Vec::new();
        let mut rest = gamma;
        let half = &xi / 2;
        while !rest.is_zero() {
            let mut c = rest.mod_floor(&xi);
            if c > half {
                c -= &xi;
            }
            rest = (&rest - &c) / &xi;
            g.push(c);
        }
        let g = primitive(g);
        if divides_dense(&g, a) && divides_dense(&g, b) {
            return Some(g);
        }
        xi = &xi * 73794 / 27011;
    }
    None
}

/// Euclid's algorithm over the field for polynomials in `x_v` alone.
fn field_euclid(a: Polynomial, b: Polynomial, v: usize) -> Polynomial {
    let (mut f, mut g) = if a.degree_in(v) >= b.degree_in(v) { (a, b) } else { (b, a) };
    if g.is_zero() {
        return f.monic();
    }
    while !g.is_zero() {
        if g.is_constant() {
            return Polynomial::one(f.vars());
        }
        let r = field_rem(&f, &g, v).monic();
        f = g;
        g = r;
    }
    f.monic()
}
