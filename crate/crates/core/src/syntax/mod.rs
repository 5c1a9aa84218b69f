//! Text form of operators and systems: parsing, canonical printing and the
//! system-file format.

mod format;
mod parser;
mod system;

pub use format::{format_derivative, format_operator, format_polynomial, format_rational, format_row};
pub use parser::{
    parse_derivative, parse_operator, parse_point, parse_row, parse_scalar, parse_scalar_operator, Context,
    ParseError, MAX_DEGREE, MAX_EXPONENT,
};
pub use system::{parse_system, parse_system_with_field, SystemFile};
