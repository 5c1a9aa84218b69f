use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

use weyl_closure::closure::{cross_check, member_with_basis, verify_witness, Witness};
use weyl_closure::riquier::{complete_to_riquier_basis, parametric_up_to, RiquierBasis};
use weyl_closure::solver::{constraint_matrix, default_order, find_regular_point, formal_solve};
use weyl_closure::syntax::{
    format_derivative, format_operator, format_polynomial, format_row, parse_derivative, parse_row, parse_scalar,
    parse_scalar_operator, parse_point, parse_system_with_field, SystemFile,
};
use weyl_closure::{Derivative, Dims, FieldMode, Jet, OperatorVector, Scalar};

const EXIT_FALSE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_DISAGREE: u8 = 3;

#[derive(Parser)]
#[command(name = "weyl-closure", version, about = "Exact Weyl-closure membership, Riquier bases and formal jets")]
struct Cli {
    /// Scalar field; overrides the system file's `field:` line.
    #[arg(long, global = true, value_parser = parse_field)]
    field: Option<FieldMode>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Complete the rows to a Riquier basis.
    Riquier {
        system: PathBuf,
        /// List parametric derivatives up to this order.
        #[arg(long)]
        s: Option<u32>,
    },
    /// Decide whether q lies in the Weyl closure of the rows.
    Member {
        system: PathBuf,
        /// Candidate row; defaults to the file's `q:` line.
        #[arg(long)]
        q: Option<String>,
        /// Also run the span test and, for one variable and one unknown,
        /// Euclidean division; exit 3 if they disagree.
        #[arg(long)]
        cross_check: bool,
    },
    /// Extend parametric initial values to a truncated formal solution.
    Solve {
        system: PathBuf,
        #[arg(long)]
        point: Option<String>,
        /// Initial values such as `D=1, 1=0` or `D1 [u2]=1/2`.
        #[arg(long, default_value = "")]
        init: String,
        #[arg(long)]
        order: Option<u32>,
    },
    /// Constraint-matrix shape, nullity and parametric count at a point.
    #[command(alias = "prop1")]
    Constraints {
        system: PathBuf,
        #[arg(long)]
        point: Option<String>,
        #[arg(long)]
        s: Option<u32>,
    },
    /// Check `w*q = h_1*p_1 + ... + h_k*p_k` exactly.
    VerifyWitness {
        system: PathBuf,
        #[arg(long)]
        q: Option<String>,
        #[arg(long)]
        w: String,
        /// Cofactors separated by `;`, one per row.
        #[arg(long)]
        h: String,
    },
}

fn parse_field(s: &str) -> Result<FieldMode, String> {
    s.parse().map_err(|_| format!("expected 'real' or 'complex', got '{s}'"))
}

enum Failure {
    Input(String),
    Exit(u8, Value),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<Value, Failure>;

fn load(path: &PathBuf, field: Option<FieldMode>) -> Result<SystemFile, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok(parse_system_with_field(&text, field)?)
}

fn basis_of(sys: &SystemFile) -> Result<RiquierBasis, Failure> {
    Ok(complete_to_riquier_basis(sys.dims, &sys.rows)?)
}

fn derivative_label(dims: Dims, d: &Derivative) -> String {
    let text = format_derivative(dims.vars, d);
    let text = if text.is_empty() { "1".to_string() } else { text };
    if dims.unknowns > 1 {
        format!("{text} [u{}]", d.component + 1)
    } else {
        text
    }
}

fn point_json(point: &[Scalar]) -> Value {
    Value::Array(point.iter().map(|c| Value::String(c.to_string())).collect())
}

fn jet_json(jet: &Jet) -> Value {
    let dims = jet.dims();
    let mut components = Map::new();
    for i in 0..dims.unknowns {
        let mut values = Map::new();
        for d in Derivative::up_to(dims, jet.order()).into_iter().filter(|d| d.component == i) {
            values.insert(d.alpha.to_string(), Value::String(jet.get(&d).to_string()));
        }
        components.insert(format!("u{}", i + 1), Value::Object(values));
    }
    Value::Object(components)
}

fn resolve_point(text: Option<&str>, sys: &SystemFile, basis: &RiquierBasis) -> Result<Vec<Scalar>, Failure> {
    match (text, &sys.point) {
        (Some(t), _) => Ok(parse_point(t, sys.context())?),
        (None, Some(p)) => Ok(p.clone()),
        (None, None) => find_regular_point(basis).ok_or_else(|| Failure::Input("no regular point found".into())),
    }
}

fn candidate(text: Option<&str>, sys: &SystemFile) -> Result<OperatorVector, Failure> {
    match (text, &sys.q) {
        (Some(t), _) => Ok(parse_row(t, sys.context())?),
        (None, Some(q)) => Ok(q.clone()),
        (None, None) => Err(Failure::Input("no candidate: pass --q or add a 'q:' line".into())),
    }
}

fn riquier(sys: &SystemFile, s: Option<u32>) -> Outcome {
    let basis = basis_of(sys)?;
    let s = s.or(sys.s).unwrap_or_else(|| default_order(&basis));
    let dims = sys.dims;
    Ok(json!({
        "vars": dims.vars,
        "unknowns": dims.unknowns,
        "basis": basis.elements().iter().map(format_operator).collect::<Vec<_>>(),
        "heads": basis.heads().iter().map(|d| derivative_label(dims, d)).collect::<Vec<_>>(),
        "s0": basis.s0(),
        "s": s,
        "parametric": parametric_up_to(&basis, s).iter().map(|d| derivative_label(dims, d)).collect::<Vec<_>>(),
    }))
}

fn member(sys: &SystemFile, q: Option<&str>, check: bool) -> Outcome {
    let q = candidate(q, sys)?;
    let basis = basis_of(sys)?;
    let result = member_with_basis(&q, &sys.rows, &basis)?;
    let witness = match &result.witness {
        Some(w) => json!({
            "w": format_polynomial(&w.w),
            "cofactors": w.cofactors.iter().map(format_operator).collect::<Vec<_>>(),
        }),
        None => Value::Null,
    };
    let mut out = json!({
        "member": result.member,
        "witness": witness,
        "normal_form": format_row(&result.normal_form),
    });
    if check {
        let c = cross_check(&q, &sys.rows)?;
        out["cross_check"] = json!({
            "reduction": c.reduction,
            "span": c.span,
            "division": c.division,
            "agree": c.agree(),
        });
        if !c.agree() {
            return Err(Failure::Exit(EXIT_DISAGREE, out));
        }
    }
    if result.member {
        Ok(out)
    } else {
        Err(Failure::Exit(EXIT_FALSE, out))
    }
}

fn parse_init(text: &str, sys: &SystemFile) -> Result<BTreeMap<Derivative, Scalar>, Failure> {
    let mut init = BTreeMap::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (d, v) = item
            .split_once('=')
            .ok_or_else(|| Failure::Input(format!("initial value '{item}' is not of the form derivative=value")))?;
        let d = parse_derivative(d, sys.context()).map_err(|e| Failure::Input(format!("in '{item}': {e}")))?;
        let v = parse_scalar(v, sys.context()).map_err(|e| Failure::Input(format!("in '{item}': {e}")))?;
        init.insert(d, v);
    }
    Ok(init)
}

fn solve(sys: &SystemFile, point: Option<&str>, init: &str, order: Option<u32>) -> Outcome {
    let basis = basis_of(sys)?;
    let point = resolve_point(point, sys, &basis)?;
    let order = order.or(sys.order).unwrap_or_else(|| default_order(&basis));
    let init = parse_init(init, sys)?;
    let jet = formal_solve(&basis, &point, &init, order)?;
    Ok(json!({
        "point": point_json(&point),
        "order": order,
        "jet": jet_json(&jet),
    }))
}

fn constraints(sys: &SystemFile, point: Option<&str>, s: Option<u32>) -> Outcome {
    let basis = basis_of(sys)?;
    let point = resolve_point(point, sys, &basis)?;
    let s = s.or(sys.s).unwrap_or_else(|| basis.s0());
    let system = constraint_matrix(&basis, s, &point)?;
    let parametric = parametric_up_to(&basis, s);
    Ok(json!({
        "point": point_json(&point),
        "s": s,
        "rows": system.rows.len(),
        "columns": system.columns.len(),
        "rank": system.rank(),
        "nullity": system.nullity(),
        "parametric_count": parametric.len(),
        "parametric": parametric.iter().map(|d| derivative_label(sys.dims, d)).collect::<Vec<_>>(),
    }))
}

fn verify(sys: &SystemFile, q: Option<&str>, w: &str, h: &str) -> Outcome {
    let q = candidate(q, sys)?;
    let ctx = sys.context();
    let w_op = parse_scalar_operator(w, ctx)?;
    let w = match (w_op.order(), w_op.coeff(&Derivative::base(sys.dims.vars, 0))) {
        (0, c) if c.is_polynomial() => c.numer().clone(),
        _ => return Err(Failure::Input("w must be a polynomial without D".into())),
    };
    let cofactors = h.split(';').map(|t| parse_scalar_operator(t, ctx)).collect::<Result<Vec<_>, _>>()?;
    if cofactors.len() != sys.rows.len() {
        return Err(Failure::Input(format!(
            "{} cofactors given for {} rows",
            cofactors.len(),
            sys.rows.len()
        )));
    }
    let valid = verify_witness(&Witness { w, cofactors }, &q, &sys.rows);
    Ok(json!({ "valid": valid }))
}

fn run(cli: Cli) -> Outcome {
    match &cli.command {
        Command::Riquier { system, s } => riquier(&load(system, cli.field)?, *s),
        Command::Member { system, q, cross_check } => member(&load(system, cli.field)?, q.as_deref(), *cross_check),
        Command::Solve { system, point, init, order } => solve(&load(system, cli.field)?, point.as_deref(), init, *order),
        Command::Constraints { system, point, s } => constraints(&load(system, cli.field)?, point.as_deref(), *s),
        Command::VerifyWitness { system, q, w, h } => verify(&load(system, cli.field)?, q.as_deref(), w, h),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let print = |v: &Value| println!("{}", serde_json::to_string_pretty(v).expect("json"));
    match run(cli) {
        Ok(v) => {
            print(&v);
            ExitCode::SUCCESS
        }
        Err(Failure::Exit(code, v)) => {
            print(&v);
            ExitCode::from(code)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
