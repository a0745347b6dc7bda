//! Grammar, parser, and printer for the SVA subset the pipeline emits and the
//! scorer consumes.
//!
//! The subset covers boolean expressions over signals (`&&`, `||`, `!`,
//! comparisons), fixed delays `##N`, overlapped implication `|->`, and the
//! `property`/`endproperty` wrapper with an optional `disable iff` clause.
//! Ranged delays, repetition, `throughout`, and local variables are out of
//! scope.

mod lexer;
mod parser;

pub use parser::{parse, parse_file, parse_sequence, ParsedAssertion, SyntaxError};

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

/// A signal occurrence pinned to a clock-cycle offset (`sig@t`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TemporalEvent {
    pub signal: String,
    pub offset: u32,
}

impl TemporalEvent {
    pub fn new(signal: impl Into<String>, offset: u32) -> Self {
        TemporalEvent { signal: signal.into(), offset }
    }
}

impl fmt::Display for TemporalEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.signal, self.offset)
    }
}

/// Comparison operators permitted in boolean expressions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    fn as_str(self) -> &'static str {
        match self {
            CmpOp::Eq => "==",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }
}

/// Integer literals; based literals keep their verbatim spelling.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Literal {
    Int(u64),
    Based(String),
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Int(v) => write!(f, "{v}"),
            Literal::Based(s) => write!(f, "{s}"),
        }
    }
}

/// Boolean expression over signals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoolExpr {
    Signal(String),
    Literal(Literal),
    Not(Box<BoolExpr>),
    Cmp { op: CmpOp, lhs: Box<BoolExpr>, rhs: Box<BoolExpr> },
    And(Box<BoolExpr>, Box<BoolExpr>),
    Or(Box<BoolExpr>, Box<BoolExpr>),
}

impl BoolExpr {
    /// Collects signal names in textual order, duplicates included.
    pub fn signal_occurrences<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            BoolExpr::Signal(s) => out.push(s),
            BoolExpr::Literal(_) => {}
            BoolExpr::Not(inner) => inner.signal_occurrences(out),
            BoolExpr::Cmp { lhs, rhs, .. } => {
                lhs.signal_occurrences(out);
                rhs.signal_occurrences(out);
            }
            BoolExpr::And(l, r) | BoolExpr::Or(l, r) => {
                l.signal_occurrences(out);
                r.signal_occurrences(out);
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            BoolExpr::Or(..) => 1,
            BoolExpr::And(..) => 2,
            BoolExpr::Cmp { .. } => 3,
            BoolExpr::Not(..) => 4,
            BoolExpr::Signal(_) | BoolExpr::Literal(_) => 5,
        }
    }
}

impl fmt::Display for BoolExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn child(e: &BoolExpr, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            if e.precedence() < min {
                write!(f, "(")?;
                write!(f, "{e}")?;
                write!(f, ")")
            } else {
                write!(f, "{e}")
            }
        }
        match self {
            BoolExpr::Signal(s) => write!(f, "{s}"),
            BoolExpr::Literal(l) => write!(f, "{l}"),
            BoolExpr::Not(inner) => {
                write!(f, "!")?;
                child(inner, 4, f)
            }
            BoolExpr::Cmp { op, lhs, rhs } => {
                child(lhs, 4, f)?;
                write!(f, " {} ", op.as_str())?;
                child(rhs, 4, f)
            }
            BoolExpr::And(l, r) => {
                child(l, 2, f)?;
                write!(f, " && ")?;
                child(r, 3, f)
            }
            BoolExpr::Or(l, r) => {
                child(l, 1, f)?;
                write!(f, " || ")?;
                child(r, 2, f)
            }
        }
    }
}

/// One step of a sequence: a delay (cycles since the previous step) and a
/// boolean expression sampled at the resulting tick.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceStep {
    pub delay: u32,
    pub expr: BoolExpr,
}

/// Concatenation of delay-separated boolean expressions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceExpr {
    pub steps: Vec<SequenceStep>,
}

impl SequenceExpr {
    /// Tick offset of the last step relative to the sequence start.
    pub fn trailing_offset(&self) -> u32 {
        self.steps.iter().map(|s| s.delay).sum()
    }
}

impl fmt::Display for SequenceExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, step) in self.steps.iter().enumerate() {
            if i == 0 {
                if step.delay > 0 {
                    write!(f, "##{} ", step.delay)?;
                }
            } else {
                write!(f, " ##{} ", step.delay)?;
            }
            write!(f, "{}", step.expr)?;
        }
        Ok(())
    }
}

/// A parsed concurrent assertion: `antecedent |-> consequent` clocked on
/// `posedge clock`, optionally disabled by a reset signal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssertionAst {
    pub name: String,
    pub clock: String,
    pub reset: Option<String>,
    pub antecedent: SequenceExpr,
    pub consequent: SequenceExpr,
}

/// Antecedent events (a set at cumulative offsets from the attempt start) and
/// consequent events (an ordered, first-occurrence-unique list; offsets are
/// anchored at the trailing antecedent tick, per overlapped implication).
pub fn events(ast: &AssertionAst) -> (BTreeSet<TemporalEvent>, Vec<TemporalEvent>) {
    let mut antecedent = BTreeSet::new();
    let mut offset = 0u32;
    for step in &ast.antecedent.steps {
        offset += step.delay;
        let mut occ = Vec::new();
        step.expr.signal_occurrences(&mut occ);
        for sig in occ {
            antecedent.insert(TemporalEvent::new(sig, offset));
        }
    }

    let mut consequent = Vec::new();
    let mut seen = BTreeSet::new();
    let mut offset = ast.antecedent.trailing_offset();
    for step in &ast.consequent.steps {
        offset += step.delay;
        let mut occ = Vec::new();
        step.expr.signal_occurrences(&mut occ);
        for sig in occ {
            let ev = TemporalEvent::new(sig, offset);
            if seen.insert(ev.clone()) {
                consequent.push(ev);
            }
        }
    }
    (antecedent, consequent)
}

/// All signals referenced by the assertion body (clock and reset excluded).
pub fn signals(ast: &AssertionAst) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for seq in [&ast.antecedent, &ast.consequent] {
        for step in &seq.steps {
            let mut occ = Vec::new();
            step.expr.signal_occurrences(&mut occ);
            out.extend(occ.into_iter().map(str::to_owned));
        }
    }
    out
}

/// Canonical source form. `parse(print(ast))` is structurally equal to `ast`.
pub fn print(ast: &AssertionAst) -> String {
    let disable = match &ast.reset {
        Some(reset) => format!("disable iff ({reset}) "),
        None => String::new(),
    };
    format!(
        "property {name};\n  @(posedge {clock}) {disable}{ant} |-> {cons};\nendproperty\n{name}_a: assert property ({name});\n",
        name = ast.name,
        clock = ast.clock,
        disable = disable,
        ant = ast.antecedent,
        cons = ast.consequent,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn handshake_src() -> &'static str {
        "property p0;\n  @(posedge clk) req && !ack |-> ##3 timeout ##1 retry;\nendproperty\np0_a: assert property (p0);\n"
    }

    #[test]
    fn parses_handshake_delays() {
        let ast = parse(handshake_src()).unwrap();
        let delays: Vec<u32> = ast.consequent.steps.iter().map(|s| s.delay).collect();
        assert_eq!(delays, vec![3, 1]);
    }

    #[test]
    fn handshake_temporal_indexing() {
        let ast = parse(handshake_src()).unwrap();
        let (ant, cons) = events(&ast);
        let expected: BTreeSet<_> =
            [TemporalEvent::new("req", 0), TemporalEvent::new("ack", 0)].into_iter().collect();
        assert_eq!(ant, expected);
        assert_eq!(cons, vec![TemporalEvent::new("timeout", 3), TemporalEvent::new("retry", 4)]);
    }

    #[test]
    fn minimal_overlapped_implication() {
        let ast = parse("property p; @(posedge clk) a |-> b; endproperty").unwrap();
        let (ant, cons) = events(&ast);
        assert_eq!(ant.iter().cloned().collect::<Vec<_>>(), vec![TemporalEvent::new("a", 0)]);
        assert_eq!(cons, vec![TemporalEvent::new("b", 0)]);
    }

    #[test]
    fn consequent_offsets_anchor_at_trailing_antecedent_tick() {
        // Hand evaluation: antecedent ticks a@0, b@2; the consequent's ##1
        // counts from the trailing tick, so c lands at offset 3.
        let ast = parse("property p; @(posedge clk) a ##2 b |-> ##1 c; endproperty").unwrap();
        let (ant, cons) = events(&ast);
        let expected: BTreeSet<_> =
            [TemporalEvent::new("a", 0), TemporalEvent::new("b", 2)].into_iter().collect();
        assert_eq!(ant, expected);
        assert_eq!(cons, vec![TemporalEvent::new("c", 3)]);
    }

    #[test]
    fn negative_delay_rejected() {
        let err = parse("property p; @(posedge clk) a |-> ##-1 b; endproperty").unwrap_err();
        assert!(err.to_string().contains("expected"), "got: {err}");
    }

    #[test]
    fn negated_signals_yield_underlying_event() {
        let ast = parse("property p; @(posedge clk) !ack |-> !busy; endproperty").unwrap();
        let (ant, cons) = events(&ast);
        assert!(ant.contains(&TemporalEvent::new("ack", 0)));
        assert_eq!(cons, vec![TemporalEvent::new("busy", 0)]);
    }

    #[test]
    fn consequent_offsets_non_decreasing() {
        let ast = parse(
            "property p; @(posedge clk) a |-> b ##0 c ##2 d && e; endproperty",
        )
        .unwrap();
        let (_, cons) = events(&ast);
        let offsets: Vec<u32> = cons.iter().map(|e| e.offset).collect();
        assert!(offsets.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn round_trips_parse_examples() {
        for src in [
            handshake_src(),
            "property p; @(posedge clk) a |-> b; endproperty",
            "property p2; @(posedge sys_clk) disable iff (rst) a ##2 b |-> ##1 c; endproperty",
            "property p3; @(posedge clk) x == 4'b0101 || !y |-> ##0 z != 1; endproperty",
        ] {
            let ast = parse(src).unwrap();
            let printed = print(&ast);
            let reparsed = parse(&printed).unwrap();
            assert_eq!(ast, reparsed, "round trip failed for {src}");
        }
    }

    #[test]
    fn printer_parenthesizes_by_precedence() {
        let e = BoolExpr::And(
            Box::new(BoolExpr::Signal("a".into())),
            Box::new(BoolExpr::Or(
                Box::new(BoolExpr::Signal("b".into())),
                Box::new(BoolExpr::Signal("c".into())),
            )),
        );
        assert_eq!(e.to_string(), "a && (b || c)");
        let nested_right = BoolExpr::Or(
            Box::new(BoolExpr::Signal("a".into())),
            Box::new(BoolExpr::Or(
                Box::new(BoolExpr::Signal("b".into())),
                Box::new(BoolExpr::Signal("c".into())),
            )),
        );
        assert_eq!(nested_right.to_string(), "a || (b || c)");
    }
}
