use crate::arith::{FieldMode, Scalar};
use crate::error::{Error, Result};
use crate::weyl::{Dims, OperatorVector};

use super::format::format_row;
use super::parser::{parse_point, parse_row, Context};

/// A system of equations `p[u] = 0` with optional candidate and evaluation
/// data, as read from a `key: value` text file.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemFile {
    pub field: FieldMode,
    pub dims: Dims,
    pub rows: Vec<OperatorVector>,
    pub q: Option<OperatorVector>,
    pub point: Option<Vec<Scalar>>,
    pub s: Option<u32>,
    pub order: Option<u32>,
}

impl SystemFile {
    pub fn context(&self) -> Context {
        Context { dims: self.dims, field: self.field }
    }

    /// Text that parses back to the same system.
    pub fn to_text(&self) -> String {
        let mut out = format!("field: {}\nvars: {}\nunknowns: {}\n", self.field, self.dims.vars, self.dims.unknowns);
        for r in &self.rows {
            out.push_str(&format!("row: {}\n", format_row(r)));
        }
        if let Some(q) = &self.q {
            out.push_str(&format!("q: {}\n", format_row(q)));
        }
        if let Some(p) = &self.point {
            let coords: Vec<String> = p.iter().map(|c| c.to_string()).collect();
            out.push_str(&format!("point: {}\n", coords.join(", ")));
        }
        if let Some(s) = self.s {
            out.push_str(&format!("s: {s}\n"));
        }
        if let Some(t) = self.order {
            out.push_str(&format!("order: {t}\n"));
        }
        out
    }
}

fn line_error(line: usize, message: impl std::fmt::Display) -> Error {
    Error::InvalidInput(format!("line {line}: {message}"))
}

fn parse_count(line: usize, key: &str, value: &str) -> Result<u32> {
    value.parse().map_err(|_| line_error(line, format!("{key} expects a nonnegative integer, got '{value}'")))
}

/// Parse a system file. Keys: `field`, `vars` (required), `unknowns`
/// (default 1), `row` (repeatable), `q`, `point`, `s`, `order` (alias `T`).
/// `#` starts a comment.
pub fn parse_system(text: &str) -> Result<SystemFile> {
    parse_system_with_field(text, None)
}

/// As [`parse_system`], with `field` taking precedence over the file's
/// `field:` line.
pub fn parse_system_with_field(text: &str, field_override: Option<FieldMode>) -> Result<SystemFile> {
    let mut field = FieldMode::Real;
    let mut vars = None;
    let mut unknowns = 1usize;
    let mut rows = Vec::new();
    let mut q = None;
    let mut point = None;
    let mut s = None;
    let mut order = None;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once(':')
            .ok_or_else(|| line_error(line, "expected 'key: value'"))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "field" => {
                field = value.parse().map_err(|_| line_error(line, format!("unknown field '{value}'")))?;
            }
            "vars" => {
                let m = parse_count(line, key, value)?;
                if m == 0 || m > 16 {
                    return Err(line_error(line, "vars must be between 1 and 16"));
                }
                vars = Some(m as usize);
            }
            "unknowns" => {
                let n = parse_count(line, key, value)?;
                if n == 0 || n > 16 {
                    return Err(line_error(line, "unknowns must be between 1 and 16"));
                }
                unknowns = n as usize;
            }
            "row" => rows.push((line, value.to_string())),
            "q" => q = Some((line, value.to_string())),
            "point" => point = Some((line, value.to_string())),
            "s" => s = Some(parse_count(line, key, value)?),
            "order" | "T" => order = Some(parse_count(line, key, value)?),
            _ => return Err(line_error(line, format!("unknown key '{key}'"))),
        }
    }
    let field = field_override.unwrap_or(field);
    let vars = vars.ok_or_else(|| Error::InvalidInput("missing 'vars'".into()))?;
    let ctx = Context::new(vars, unknowns, field);
    let parse = |(line, text): &(usize, String)| parse_row(text, ctx).map_err(|e| line_error(*line, e));
    let rows = rows.iter().map(parse).collect::<Result<Vec<_>>>()?;
    let q = q.as_ref().map(parse).transpose()?;
    let point = point
        .map(|(line, text)| parse_point(&text, ctx).map_err(|e| line_error(line, e)))
        .transpose()?;
    Ok(SystemFile { field, dims: ctx.dims, rows, q, point, s, order })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_a_system() {
        let text = "# example\nvars: 2\nunknowns: 1\nrow: D1 - x2\nrow: D2  # second\npoint: 0, 1/2\ns: 3\n";
        let sys = parse_system(text).unwrap();
        assert_eq!(sys.dims, Dims::new(2, 1));
        assert_eq!(sys.rows.len(), 2);
        assert_eq!(sys.point, Some(vec![Scalar::zero(), Scalar::ratio(1, 2)]));
        assert_eq!(sys.s, Some(3));
        assert_eq!(parse_system(&sys.to_text()).unwrap(), sys);
    }

    #[test]
    fn errors_name_the_line() {
        let e = parse_system("vars: 1\nrow: D +\n").unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
        let e = parse_system("vars: 1\ncolour: red\n").unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
        assert!(parse_system("row: D\n").is_err());
    }

    #[test]
    fn complex_field() {
        let sys = parse_system("field: complex\nvars: 1\nrow: D - i\n").unwrap();
        assert_eq!(sys.field, FieldMode::Complex);
        assert!(parse_system("vars: 1\nrow: D - i\n").is_err());
        let forced = parse_system_with_field("vars: 1\nrow: D - i\n", Some(FieldMode::Complex)).unwrap();
        assert_eq!(forced.field, FieldMode::Complex);
    }
}
