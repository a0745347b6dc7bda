//! Static parsing of a golden-RTL Verilog subset.
//!
//! Supported: `module`/`endmodule`, ANSI and body port declarations,
//! `wire`/`reg` declarations, `parameter` with integer values, continuous
//! `assign`, `always @(posedge clk)` with nonblocking assigns,
//! `always @(*)` with blocking assigns, `if`/`else`, `case`, the usual
//! binary/unary operators, and bit-/part-selects (collapsed to the base
//! signal). Everything else is reported as an unsupported construct.

mod lexer;
mod parser;

pub use parser::parse_rtl;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Parsed design: one or more modules.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RtlDesign {
    pub modules: Vec<RtlModule>,
}

impl RtlDesign {
    /// All flattened assignments across modules.
    pub fn assigns(&self) -> impl Iterator<Item = &FlatAssign> {
        self.modules.iter().flat_map(|m| m.assigns.iter())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RtlModule {
    pub name: String,
    pub ports: Vec<Port>,
    pub nets: Vec<Net>,
    pub parameters: Vec<Parameter>,
    pub assigns: Vec<FlatAssign>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PortDirection {
    Input,
    Output,
    Inout,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Port {
    pub name: String,
    pub direction: PortDirection,
    pub width: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NetKind {
    Wire,
    Reg,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Net {
    pub name: String,
    pub kind: NetKind,
    pub width: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Parameter {
    pub name: String,
    pub value: i64,
}

/// Whether an assignment updates its target in the same cycle or on the next
/// clock edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AssignKind {
    Combinational,
    Sequential,
}

/// One assignment after control-flow flattening. `conditions` holds the
/// guard expressions of every enclosing `if`/`case`; their signals influence
/// the target just like the right-hand side.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FlatAssign {
    pub lhs: String,
    pub rhs: RtlExpr,
    pub kind: AssignKind,
    pub conditions: Vec<RtlExpr>,
}

/// Right-hand-side expression tree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum RtlExpr {
    Ident(String),
    /// Bit- or part-select; the base signal is what matters for dependencies,
    /// but index expressions contribute occurrences too.
    Select { base: String, indices: Vec<RtlExpr> },
    Literal(String),
    Unary { op: String, operand: Box<RtlExpr> },
    Binary { op: String, lhs: Box<RtlExpr>, rhs: Box<RtlExpr> },
    Ternary { cond: Box<RtlExpr>, then: Box<RtlExpr>, otherwise: Box<RtlExpr> },
    Concat(Vec<RtlExpr>),
}

impl RtlExpr {
    /// Appends every signal occurrence in textual order. `constants` names
    /// identifiers (parameters) that are not signals.
    pub fn signal_occurrences<'a>(
        &'a self,
        constants: &std::collections::BTreeSet<String>,
        out: &mut Vec<&'a str>,
    ) {
        match self {
            RtlExpr::Ident(name) => {
                if !constants.contains(name) {
                    out.push(name);
                }
            }
            RtlExpr::Select { base, indices } => {
                if !constants.contains(base) {
                    out.push(base);
                }
                for idx in indices {
                    idx.signal_occurrences(constants, out);
                }
            }
            RtlExpr::Literal(_) => {}
            RtlExpr::Unary { operand, .. } => operand.signal_occurrences(constants, out),
            RtlExpr::Binary { lhs, rhs, .. } => {
                lhs.signal_occurrences(constants, out);
                rhs.signal_occurrences(constants, out);
            }
            RtlExpr::Ternary { cond, then, otherwise } => {
                cond.signal_occurrences(constants, out);
                then.signal_occurrences(constants, out);
                otherwise.signal_occurrences(constants, out);
            }
            RtlExpr::Concat(parts) => {
                for p in parts {
                    p.signal_occurrences(constants, out);
                }
            }
        }
    }
}

/// RTL front-end errors.
#[derive(Debug, Clone, Error)]
pub enum RtlError {
    #[error("{line}:{column}: syntax error: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{line}:{column}: unsupported construct: {construct}")]
    Unsupported { construct: String, line: usize, column: usize },
    #[error("module '{module}': undeclared identifier '{name}'")]
    Undeclared { module: String, name: String },
}
