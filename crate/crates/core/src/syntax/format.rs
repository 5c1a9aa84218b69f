use crate::arith::{MultiIndex, Polynomial, RationalFunction, Scalar};
use crate::weyl::{Derivative, OperatorVector};

pub(crate) fn var_name(vars: usize, j: usize) -> String {
    if vars == 1 {
        "x".to_string()
    } else {
        format!("x{}", j + 1)
    }
}

pub(crate) fn d_name(vars: usize, j: usize) -> String {
    if vars == 1 {
        "D".to_string()
    } else {
        format!("D{}", j + 1)
    }
}

fn power_product(exps: &MultiIndex, name: impl Fn(usize) -> String) -> String {
    let mut parts = Vec::new();
    for (j, &e) in exps.as_slice().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(name(j)),
            _ => parts.push(format!("{}^{}", name(j), e)),
        }
    }
    parts.join("*")
}

/// Sign and magnitude text of a scalar used as a factor. The magnitude of a
/// mixed complex value is parenthesized.
fn split_scalar(c: &Scalar) -> (bool, Scalar, String) {
    let negative = if c.is_real() || num_traits::Zero::is_zero(c.re()) { c.is_negative_like() } else { num_traits::Signed::is_negative(c.re()) };
    let mag = if negative { -c } else { c.clone() };
    let text = if mag.is_real() || num_traits::Zero::is_zero(mag.re()) { mag.to_string() } else { format!("({mag})") };
    (negative, mag, text)
}

fn join_signed(items: Vec<(bool, String)>) -> String {
    let mut out = String::new();
    for (k, (negative, body)) in items.into_iter().enumerate() {
        match (k, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&body);
    }
    out
}

fn polynomial_items(p: &Polynomial) -> Vec<(bool, String)> {
    let vars = p.vars();
    p.terms()
        .rev()
        .map(|(e, c)| {
            let (negative, mag, text) = split_scalar(c);
            let mono = power_product(e, |j| var_name(vars, j));
            let body = if mono.is_empty() {
                text
            } else if mag.is_one() {
                mono
            } else {
                format!("{text}*{mono}")
            };
            (negative, body)
        })
        .collect()
}

/// Terms in decreasing graded-lex order, e.g. `x^2 - 2*x + 1`.
pub fn format_polynomial(p: &Polynomial) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    join_signed(polynomial_items(p))
}

fn is_variable_power(p: &Polynomial) -> bool {
    p.is_monomial() && p.leading().is_some_and(|(e, c)| c.is_one() && e.as_slice().iter().filter(|&&k| k > 0).count() == 1)
}

/// `num/den`, parenthesizing a numerator with several terms and a
/// denominator that is not a single variable power.
pub fn format_rational(f: &RationalFunction) -> String {
    let num = format_polynomial(f.numer());
    if f.denom().is_one() {
        return num;
    }
    let num = if f.numer().len() > 1 { format!("({num})") } else { num };
    let den = format_polynomial(f.denom());
    let den = if is_variable_power(f.denom()) { den } else { format!("({den})") };
    format!("{num}/{den}")
}

pub fn format_derivative(vars: usize, d: &Derivative) -> String {
    power_product(&d.alpha, |j| d_name(vars, j))
}

fn operator_items(p: &OperatorVector) -> Vec<(bool, String)> {
    let vars = p.vars();
    let tagged = p.dims().unknowns > 1;
    p.terms()
        .rev()
        .map(|(d, c)| {
            let dtext = format_derivative(vars, d);
            let (negative, body) = match c.as_constant() {
                Some(k) => {
                    let (negative, mag, text) = split_scalar(&k);
                    let body = if dtext.is_empty() {
                        text
                    } else if mag.is_one() {
                        dtext
                    } else {
                        format!("{text}*{dtext}")
                    };
                    (negative, body)
                }
                None => {
                    let lead = f_lead(c);
                    let negative = split_scalar(&lead).0;
                    let shown = if negative { -c } else { c.clone() };
                    let coeff = format!("({})", format_rational(&shown));
                    let body = if dtext.is_empty() { coeff } else { format!("{coeff}*{dtext}") };
                    (negative, body)
                }
            };
            if tagged {
                (negative, format!("{body} [u{}]", d.component + 1))
            } else {
                (negative, body)
            }
        })
        .collect()
}

fn f_lead(c: &RationalFunction) -> Scalar {
    c.numer().leading().map(|(_, s)| s.clone()).unwrap_or_default()
}

/// Canonical text: terms in decreasing ranking order; components tagged
/// `[uK]` when there is more than one unknown.
pub fn format_operator(p: &OperatorVector) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    join_signed(operator_items(p))
}

/// The `n` components of a row, separated by `; `.
pub fn format_row(p: &OperatorVector) -> String {
    (0..p.dims().unknowns).map(|i| format_operator(&p.component(i))).collect::<Vec<_>>().join("; ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::Dims;

    fn x() -> RationalFunction {
        RationalFunction::from_poly(Polynomial::var(1, 0))
    }

    fn k(c: i64) -> RationalFunction {
        RationalFunction::constant(1, Scalar::from_int(c))
    }

    fn op(terms: &[(u32, RationalFunction)]) -> OperatorVector {
        OperatorVector::from_terms(
            Dims::new(1, 1),
            terms.iter().map(|(n, c)| (Derivative::new(0, MultiIndex::from_slice(&[*n])), c.clone())),
        )
    }

    #[test]
    fn hermite_text() {
        let p = op(&[(2, k(-1)), (0, &(&x() * &x()) - &k(1))]);
        assert_eq!(format_operator(&p), "-D^2 + (x^2 - 1)");
    }

    #[test]
    fn zero_text() {
        assert_eq!(format_operator(&OperatorVector::zero(Dims::new(2, 3))), "0");
    }

    #[test]
    fn tagged_text() {
        let dims = Dims::new(2, 2);
        let x2 = RationalFunction::from_poly(Polynomial::var(2, 1));
        let p = OperatorVector::term(dims, Derivative::new(1, MultiIndex::from_slice(&[1, 0])), x2);
        assert_eq!(format_operator(&p), "(x2)*D1 [u2]");
    }

    #[test]
    fn negative_nonconstant_and_rational() {
        let p = op(&[(2, k(1)), (1, &k(-2) * &x().inv().unwrap()), (0, RationalFunction::constant(1, Scalar::ratio(1, 2)))]);
        assert_eq!(format_operator(&p), "D^2 - (2/x)*D + 1/2");
        let f = RationalFunction::new(
            &Polynomial::var(1, 0) + &Polynomial::one(1),
            &Polynomial::var(1, 0).pow(2) + &Polynomial::one(1),
        )
        .unwrap();
        assert_eq!(format_rational(&f), "(x + 1)/(x^2 + 1)");
    }

    #[test]
    fn complex_coefficients() {
        use num_rational::BigRational;
        let c = Scalar::complex(BigRational::new(1.into(), 2.into()), BigRational::from_integer((-3).into()));
        let p = op(&[(1, RationalFunction::constant(1, c.clone())), (0, RationalFunction::constant(1, -&c))]);
        assert_eq!(format_operator(&p), "(1/2 - 3*i)*D - (1/2 - 3*i)");
        let q = op(&[(1, RationalFunction::constant(1, -&Scalar::i()))]);
        assert_eq!(format_operator(&q), "-i*D");
    }
}
