use num_bigint::BigInt;

use crate::arith::{FieldMode, MultiIndex, Polynomial, RationalFunction, Scalar};
use crate::weyl::{scalar_operator_product, Derivative, Dims, OperatorVector};

/// Largest exponent accepted after `^`.
pub const MAX_EXPONENT: u32 = 64;
/// Largest operator order or coefficient degree an expression may reach.
pub const MAX_DEGREE: u32 = 256;
const MAX_DEPTH: usize = 256;
const MAX_DIGITS: usize = 2048;

/// Syntax error at a byte offset of the input.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("at byte {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl ParseError {
    fn new(position: usize, message: impl Into<String>) -> Self {
        ParseError { position, message: message.into() }
    }

    fn shifted(mut self, offset: usize) -> Self {
        self.position += offset;
        self
    }
}

type PResult<T> = std::result::Result<T, ParseError>;

/// Variable count, unknown count and scalar field of the expressions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Context {
    pub dims: Dims,
    pub field: FieldMode,
}

impl Context {
    pub fn new(vars: usize, unknowns: usize, field: FieldMode) -> Self {
        Context { dims: Dims::new(vars, unknowns), field }
    }

    fn scalar(self) -> Context {
        Context { dims: self.dims.scalar(), field: self.field }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    End,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(n) => format!("number {n}"),
        Tok::Ident(s) => format!("identifier '{s}'"),
        Tok::Plus => "'+'".into(),
        Tok::Minus => "'-'".into(),
        Tok::Star => "'*'".into(),
        Tok::Slash => "'/'".into(),
        Tok::Caret => "'^'".into(),
        Tok::LParen => "'('".into(),
        Tok::RParen => "')'".into(),
        Tok::LBracket => "'['".into(),
        Tok::RBracket => "']'".into(),
        Tok::End => "end of input".into(),
    }
}

fn lex(text: &str) -> PResult<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'[' => Tok::LBracket,
            b']' => Tok::RBracket,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i - start > MAX_DIGITS {
                    return Err(ParseError::new(start, "number is too long"));
                }
                let n: BigInt = text[start..i].parse().expect("ascii digits");
                out.push((start, Tok::Int(n)));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().expect("in bounds");
                return Err(ParseError::new(start, format!("unexpected character '{ch}'")));
            }
        };
        out.push((start, tok));
        i += 1;
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    ctx: Context,
    depth: usize,
}

enum Atom {
    Var(usize),
    Diff(usize),
    Unit,
}

fn index_suffix(name: &str, prefix: &str) -> Option<usize> {
    let rest = name.strip_prefix(prefix)?;
    if rest.is_empty() || rest.starts_with('0') || !rest.bytes().all(|b| b.is_ascii_digit()) || rest.len() > 9 {
        return None;
    }
    rest.parse().ok()
}

impl Parser {
    fn new(text: &str, ctx: Context) -> PResult<Self> {
        Ok(Parser { toks: lex(text)?, at: 0, ctx, depth: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> PResult<()> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(ParseError::new(self.pos(), format!("expected {}, found {}", describe(&want), describe(self.peek()))))
        }
    }

    fn enter(&mut self) -> PResult<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(ParseError::new(self.pos(), "expression is nested too deeply"));
        }
        Ok(())
    }

    fn vars(&self) -> usize {
        self.ctx.dims.vars
    }

    fn scalar_dims(&self) -> Dims {
        self.ctx.dims.scalar()
    }

    fn check_size(&self, p: &OperatorVector, at: usize) -> PResult<()> {
        let too_big = p.order() > MAX_DEGREE
            || p.coefficients().any(|c| c.numer().total_degree() > MAX_DEGREE || c.denom().total_degree() > MAX_DEGREE);
        if too_big {
            return Err(ParseError::new(at, format!("expression exceeds degree {MAX_DEGREE}")));
        }
        Ok(())
    }

    fn resolve(&self, name: &str) -> Option<Atom> {
        let m = self.vars();
        let alias = |c: char| ['x', 'y', 'z'].iter().position(|&a| a == c);
        if name == "i" {
            return (self.ctx.field == FieldMode::Complex).then_some(Atom::Unit);
        }
        if let Some(k) = index_suffix(name, "x") {
            return (k <= m).then(|| Atom::Var(k - 1));
        }
        if let Some(k) = index_suffix(name, "D") {
            return (k <= m).then(|| Atom::Diff(k - 1));
        }
        if name == "D" {
            return (m >= 1).then_some(Atom::Diff(0));
        }
        if m <= 3 {
            let mut chars = name.chars();
            match (chars.next(), chars.next(), chars.next()) {
                (Some(c), None, None) => {
                    if let Some(j) = alias(c) {
                        return (j < m).then_some(Atom::Var(j));
                    }
                }
                (Some('D'), Some(c), None) => {
                    if let Some(j) = alias(c) {
                        return (j < m).then_some(Atom::Diff(j));
                    }
                }
                _ => {}
            }
        }
        None
    }

    /// expr := term (('+' | '-') term)*, with an optional `[uK]` tag after
    /// each top-level term when `tags` is set.
    fn expr(&mut self, tags: bool) -> PResult<OperatorVector> {
        self.enter()?;
        let dims = if tags { self.ctx.dims } else { self.scalar_dims() };
        let mut acc = OperatorVector::zero(dims);
        let mut negate = false;
        loop {
            let term = self.term()?;
            let term = if tags { self.place(term)? } else { term };
            acc = if negate { &acc - &term } else { &acc + &term };
            match self.peek() {
                Tok::Plus => negate = false,
                Tok::Minus => negate = true,
                _ => break,
            }
            self.bump();
        }
        self.depth -= 1;
        Ok(acc)
    }

    /// Move a scalar term into the component named by its tag.
    fn place(&mut self, term: OperatorVector) -> PResult<OperatorVector> {
        let n = self.ctx.dims.unknowns;
        let component = if *self.peek() == Tok::LBracket {
            self.bump();
            let at = self.pos();
            let k = match self.bump() {
                Tok::Ident(name) => index_suffix(&name, "u"),
                _ => None,
            };
            let k = k.filter(|&k| k <= n).ok_or_else(|| {
                ParseError::new(at, format!("expected a component tag u1..u{n}"))
            })?;
            self.expect(Tok::RBracket)?;
            k - 1
        } else if n == 1 {
            0
        } else {
            return Err(ParseError::new(self.pos(), "term needs a component tag [uK]"));
        };
        Ok(term.into_component(self.ctx.dims, component))
    }

    /// term := unary (('*' | '/') unary)*
    fn term(&mut self) -> PResult<OperatorVector> {
        let mut acc = self.unary()?;
        loop {
            let at = self.pos();
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    let rhs = self.unary()?;
                    acc = scalar_operator_product(&acc, &rhs);
                }
                Tok::Slash => {
                    self.bump();
                    let rhs_at = self.pos();
                    let rhs = self.unary()?;
                    let inv = divisor_inverse(&rhs).map_err(|m| ParseError::new(rhs_at, m))?;
                    acc = scalar_operator_product(&acc, &OperatorVector::function(self.vars(), inv));
                }
                _ => break,
            }
            self.check_size(&acc, at)?;
        }
        Ok(acc)
    }

    /// unary := '-' unary | power
    fn unary(&mut self) -> PResult<OperatorVector> {
        if *self.peek() == Tok::Minus {
            self.bump();
            self.enter()?;
            let v = -&self.unary()?;
            self.depth -= 1;
            return Ok(v);
        }
        self.power()
    }

    /// power := atom ('^' positive-integer)?
    fn power(&mut self) -> PResult<OperatorVector> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let at = self.pos();
        let e = match self.bump() {
            Tok::Int(n) => n,
            Tok::Minus => return Err(ParseError::new(at, "exponent must be a positive integer")),
            t => return Err(ParseError::new(at, format!("expected exponent, found {}", describe(&t)))),
        };
        let e: u32 = match u32::try_from(&e) {
            Ok(0) => return Err(ParseError::new(at, "exponent must be a positive integer")),
            Ok(e) if e <= MAX_EXPONENT => e,
            _ => return Err(ParseError::new(at, format!("exponent exceeds {MAX_EXPONENT}"))),
        };
        if base.order() as u64 * e as u64 > MAX_DEGREE as u64
            || base.coefficients().any(|c| c.numer().total_degree().max(c.denom().total_degree()) as u64 * e as u64 > MAX_DEGREE as u64)
        {
            return Err(ParseError::new(at, format!("expression exceeds degree {MAX_DEGREE}")));
        }
        let mut acc = base.clone();
        for _ in 1..e {
            acc = scalar_operator_product(&acc, &base);
        }
        Ok(acc)
    }

    /// atom := integer | identifier | '(' expr ')'
    fn atom(&mut self) -> PResult<OperatorVector> {
        let at = self.pos();
        let vars = self.vars();
        match self.bump() {
            Tok::Int(n) => Ok(constant(vars, Scalar::from_bigint(n))),
            Tok::Ident(name) => match self.resolve(&name) {
                Some(Atom::Var(j)) => {
                    Ok(OperatorVector::function(vars, RationalFunction::from_poly(Polynomial::var(vars, j))))
                }
                Some(Atom::Diff(j)) => Ok(OperatorVector::d_power(vars, MultiIndex::unit(vars, j))),
                Some(Atom::Unit) => Ok(constant(vars, Scalar::i())),
                None => Err(ParseError::new(at, format!("unknown identifier '{name}'"))),
            },
            Tok::LParen => {
                let inner = self.expr(false)?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            t => Err(ParseError::new(at, format!("expected a factor, found {}", describe(&t)))),
        }
    }

    fn finish(&mut self) -> PResult<()> {
        if *self.peek() != Tok::End {
            return Err(ParseError::new(self.pos(), format!("unexpected {}", describe(self.peek()))));
        }
        Ok(())
    }
}

fn constant(vars: usize, c: Scalar) -> OperatorVector {
    OperatorVector::function(vars, RationalFunction::constant(vars, c))
}

fn divisor_inverse(p: &OperatorVector) -> Result<RationalFunction, String> {
    if p.order() > 0 {
        return Err("divisor must not contain D".into());
    }
    let c = p.coeff(&Derivative::base(p.vars(), 0));
    c.inv().ok_or_else(|| "division by zero".into())
}

/// Parse one operator expression. With more than one unknown every term
/// carries a tag `[uK]`; with one unknown the tag `[u1]` is optional.
pub fn parse_operator(text: &str, ctx: Context) -> PResult<OperatorVector> {
    let mut p = Parser::new(text, ctx)?;
    let v = p.expr(true)?;
    p.finish()?;
    Ok(v)
}

/// Parse a scalar operator (one unknown, no tags).
pub fn parse_scalar_operator(text: &str, ctx: Context) -> PResult<OperatorVector> {
    let mut p = Parser::new(text, ctx.scalar())?;
    let v = p.expr(false)?;
    p.finish()?;
    Ok(v)
}

/// Parse a row `p_1; …; p_n` of untagged components, or a single tagged
/// expression when there is no `;`.
pub fn parse_row(text: &str, ctx: Context) -> PResult<OperatorVector> {
    if !text.contains(';') {
        return parse_operator(text, ctx);
    }
    let n = ctx.dims.unknowns;
    let mut components = Vec::new();
    let mut offset = 0;
    for part in text.split(';') {
        components.push(parse_scalar_operator(part, ctx).map_err(|e| e.shifted(offset))?);
        offset += part.len() + 1;
    }
    if components.len() != n {
        return Err(ParseError::new(0, format!("row has {} components, expected {n}", components.len())));
    }
    Ok(OperatorVector::from_components(ctx.dims.vars, &components).expect("components are scalar"))
}

/// Parse a constant expression such as `-3/4` or `1 + 2*i`.
pub fn parse_scalar(text: &str, ctx: Context) -> PResult<Scalar> {
    let p = parse_scalar_operator(text, ctx)?;
    if p.is_zero() {
        return Ok(Scalar::zero());
    }
    match p.leading() {
        Some((d, c)) if d.order() == 0 && p.len() == 1 => {
            c.as_constant().ok_or_else(|| ParseError::new(0, "expected a constant"))
        }
        _ => Err(ParseError::new(0, "expected a constant")),
    }
}

/// Comma-separated constants, one per variable.
pub fn parse_point(text: &str, ctx: Context) -> PResult<Vec<Scalar>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for part in text.split(',') {
        out.push(parse_scalar(part, ctx).map_err(|e| e.shifted(offset))?);
        offset += part.len() + 1;
    }
    if out.len() != ctx.dims.vars {
        return Err(ParseError::new(0, format!("point has {} coordinates, expected {}", out.len(), ctx.dims.vars)));
    }
    Ok(out)
}

/// A single derivative such as `D1*D2^2 [u2]`, or `1 [uK]` for the
/// unknown itself.
pub fn parse_derivative(text: &str, ctx: Context) -> PResult<Derivative> {
    let p = parse_operator(text, ctx)?;
    match p.leading() {
        Some((d, c)) if p.len() == 1 && c.is_one() => Ok(d.clone()),
        _ => Err(ParseError::new(0, "expected a single derivative with coefficient 1")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::format_operator;

    fn ctx(m: usize, n: usize) -> Context {
        Context::new(m, n, FieldMode::Real)
    }

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
    fn example_operators() {
        let x2 = &x() * &x();
        assert_eq!(
            parse_operator("x^2*D^2 - 2*x*D + 2", ctx(1, 1)).unwrap(),
            op(&[(2, x2.clone()), (1, &k(-2) * &x()), (0, k(2))])
        );
        assert_eq!(parse_operator("D*x", ctx(1, 1)).unwrap(), op(&[(1, x()), (0, k(1))]));
        assert_eq!(parse_operator("(-D+x)*(D+x)", ctx(1, 1)).unwrap(), op(&[(2, k(-1)), (0, &x2 - &k(1))]));
    }

    #[test]
    fn aliases_and_tags() {
        let a = parse_operator("(x2)*D1 [u2]", ctx(2, 2)).unwrap();
        let b = parse_operator("y*Dx [u2]", ctx(2, 2)).unwrap();
        assert_eq!(a, b);
        assert_eq!(format_operator(&a), "(x2)*D1 [u2]");
        assert!(parse_operator("D1", ctx(2, 2)).is_err());
        assert_eq!(parse_operator("D [u1]", ctx(1, 1)).unwrap(), parse_operator("D", ctx(1, 1)).unwrap());
    }

    #[test]
    fn division_is_right_multiplication() {
        // D * (1/x) = (1/x) D - 1/x^2
        let inv = x().inv().unwrap();
        assert_eq!(parse_operator("D/x", ctx(1, 1)).unwrap(), op(&[(1, inv.clone()), (0, -&(&inv * &inv))]));
        assert_eq!(parse_scalar("3/4", ctx(1, 1)).unwrap(), Scalar::ratio(3, 4));
        assert!(parse_operator("x/D", ctx(1, 1)).is_err());
        assert!(parse_operator("x/(x-x)", ctx(1, 1)).is_err());
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_operator("x + q", ctx(1, 1)).unwrap_err();
        assert_eq!(e.position, 4);
        let e = parse_operator("D^0", ctx(1, 1)).unwrap_err();
        assert_eq!(e.position, 2);
        let e = parse_operator("D^-1", ctx(1, 1)).unwrap_err();
        assert_eq!(e.position, 2);
        assert!(parse_operator("D^65", ctx(1, 1)).is_err());
        assert!(parse_operator("", ctx(1, 1)).is_err());
        assert!(parse_operator("x*$", ctx(1, 1)).is_err());
        assert!(parse_operator("i", ctx(1, 1)).is_err());
        assert!(parse_operator("i", Context::new(1, 1, FieldMode::Complex)).is_ok());
        assert_eq!(parse_operator("x3", ctx(2, 1)).unwrap_err().position, 0);
    }

    #[test]
    fn degree_cap() {
        assert!(parse_operator("((x+1)^64)^64", ctx(1, 1)).is_err());
        let deep = "(".repeat(1000) + "x" + &")".repeat(1000);
        assert!(parse_operator(&deep, ctx(1, 1)).is_err());
    }

    #[test]
    fn rows_and_points() {
        let r = parse_row("D1 - x2; D2", ctx(2, 2)).unwrap();
        assert_eq!(r, parse_operator("D1 [u1] - x2 [u1] + D2 [u2]", ctx(2, 2)).unwrap());
        let e = parse_row("D1; q", ctx(2, 2)).unwrap_err();
        assert_eq!(e.position, 4);
        assert!(parse_row("D1", ctx(2, 2)).is_err());
        assert_eq!(parse_point("1, -1/2", ctx(2, 1)).unwrap(), vec![Scalar::one(), Scalar::ratio(-1, 2)]);
        assert!(parse_point("1", ctx(2, 1)).is_err());
        assert!(parse_point("x", ctx(1, 1)).is_err());
    }

    #[test]
    fn derivatives() {
        let d = parse_derivative("D1*D2^2 [u2]", ctx(2, 2)).unwrap();
        assert_eq!(d, Derivative::new(1, MultiIndex::from_slice(&[1, 2])));
        assert_eq!(parse_derivative("1", ctx(1, 1)).unwrap(), Derivative::base(1, 0));
        assert!(parse_derivative("2*D", ctx(1, 1)).is_err());
    }
}
