//! Text formats: the valuation grammar on the way in, DOT and JSON on the
//! way out.

mod emit;
mod parse;

pub use emit::{emit_dot, emit_json, parse_graph_json};
pub use parse::{
    parse_polynomial, parse_positive, parse_rational, parse_valuation, ParsedValuation,
};
