//! Recursive descent parser for the SVA subset.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::lexer::{lex, Spanned, Tok};
use super::{AssertionAst, BoolExpr, CmpOp, Literal, SequenceExpr, SequenceStep};

/// Parse failure with position and the token set that would have been
/// accepted at that point.
#[derive(Debug, Clone, Error, Serialize, Deserialize)]
#[error("{line}:{column}: found {found}, expected {}", expected.join(" | "))]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    pub found: String,
    pub expected: Vec<String>,
}

/// One assertion chunk of a `.sv` file, parsed independently so a malformed
/// assertion does not poison its neighbors.
#[derive(Debug, Clone)]
pub struct ParsedAssertion {
    /// Verbatim source slice of this chunk.
    pub source: String,
    pub result: Result<AssertionAst, SyntaxError>,
}

struct Cursor {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Cursor {
    fn new(toks: Vec<Spanned>) -> Self {
        Cursor { toks, pos: 0 }
    }

    fn peek(&self) -> &Spanned {
        &self.toks[self.pos.min(self.toks.len() - 1)]
    }

    fn bump(&mut self) -> Spanned {
        let s = self.toks[self.pos.min(self.toks.len() - 1)].clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        s
    }

    fn error(&self, expected: &[&str]) -> SyntaxError {
        let here = self.peek();
        SyntaxError {
            line: here.line,
            column: here.column,
            found: here.tok.describe(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn eat(&mut self, tok: &Tok, expected: &str) -> Result<(), SyntaxError> {
        if &self.peek().tok == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&[expected]))
        }
    }

    fn eat_ident(&mut self, what: &str) -> Result<String, SyntaxError> {
        match &self.peek().tok {
            Tok::Ident(name) => {
                let name = name.clone();
                self.bump();
                Ok(name)
            }
            _ => Err(self.error(&[what])),
        }
    }

    fn at_eof(&self) -> bool {
        matches!(self.peek().tok, Tok::Eof)
    }
}

/// Parses a single assertion (property block plus optional `assert property`
/// line). Trailing input is an error.
pub fn parse(src: &str) -> Result<AssertionAst, SyntaxError> {
    let mut cur = Cursor::new(lex(src));
    let ast = parse_assertion(&mut cur)?;
    if !cur.at_eof() {
        return Err(cur.error(&["end of input"]));
    }
    Ok(ast)
}

/// Parses a bare sequence expression (used to validate LLM-produced
/// antecedent/consequent blocks before assembly).
pub fn parse_sequence(src: &str) -> Result<SequenceExpr, SyntaxError> {
    let mut cur = Cursor::new(lex(src));
    let seq = parse_seq(&mut cur)?;
    if !cur.at_eof() {
        return Err(cur.error(&["end of sequence"]));
    }
    Ok(seq)
}

/// Splits a source file into assertion chunks at each top-level `property`
/// keyword and parses each chunk independently.
pub fn parse_file(src: &str) -> Vec<ParsedAssertion> {
    let toks = lex(src);
    // Chunk boundaries: every `property` token not preceded by `assert`.
    let mut starts = Vec::new();
    for (i, s) in toks.iter().enumerate() {
        if s.tok == Tok::KwProperty {
            let after_assert = i > 0 && toks[i - 1].tok == Tok::KwAssert;
            if !after_assert {
                starts.push(i);
            }
        }
    }
    let mut out = Vec::new();
    if starts.is_empty() {
        return out;
    }
    let lines: Vec<&str> = src.lines().collect();
    for (idx, &start) in starts.iter().enumerate() {
        let end = starts.get(idx + 1).copied().unwrap_or(toks.len() - 1);
        let mut chunk: Vec<Spanned> = toks[start..end].to_vec();
        let eof_line = chunk.last().map(|s| s.line).unwrap_or(1);
        chunk.push(Spanned { tok: Tok::Eof, line: eof_line, column: 1 });

        let start_line = toks[start].line;
        let end_line = if end < toks.len() - 1 { toks[end].line.saturating_sub(1) } else { lines.len() };
        let source = lines
            .get(start_line.saturating_sub(1)..end_line.max(start_line))
            .unwrap_or(&[])
            .join("\n");

        let mut cur = Cursor::new(chunk);
        let result = parse_assertion(&mut cur).and_then(|ast| {
            if cur.at_eof() {
                Ok(ast)
            } else {
                Err(cur.error(&["end of assertion"]))
            }
        });
        out.push(ParsedAssertion { source, result });
    }
    out
}

fn parse_assertion(cur: &mut Cursor) -> Result<AssertionAst, SyntaxError> {
    cur.eat(&Tok::KwProperty, "'property'")?;
    let name = cur.eat_ident("property name")?;
    cur.eat(&Tok::Semi, "';'")?;
    cur.eat(&Tok::At, "'@'")?;
    cur.eat(&Tok::LParen, "'('")?;
    cur.eat(&Tok::KwPosedge, "'posedge'")?;
    let clock = cur.eat_ident("clock identifier")?;
    cur.eat(&Tok::RParen, "')'")?;

    let reset = if cur.peek().tok == Tok::KwDisable {
        cur.bump();
        cur.eat(&Tok::KwIff, "'iff'")?;
        cur.eat(&Tok::LParen, "'('")?;
        let reset = cur.eat_ident("reset identifier")?;
        cur.eat(&Tok::RParen, "')'")?;
        Some(reset)
    } else {
        None
    };

    let antecedent = parse_seq(cur)?;
    cur.eat(&Tok::Implies, "'|->'")?;
    let consequent = parse_seq(cur)?;
    cur.eat(&Tok::Semi, "';'")?;
    cur.eat(&Tok::KwEndproperty, "'endproperty'")?;

    // Optional `<label>: assert property (<name>);`
    if let Tok::Ident(_) = cur.peek().tok {
        let label_pos = cur.pos;
        let _label = cur.eat_ident("assert label")?;
        if cur.peek().tok == Tok::Colon {
            cur.bump();
            cur.eat(&Tok::KwAssert, "'assert'")?;
            cur.eat(&Tok::KwProperty, "'property'")?;
            cur.eat(&Tok::LParen, "'('")?;
            let target = cur.eat_ident("property name")?;
            cur.eat(&Tok::RParen, "')'")?;
            cur.eat(&Tok::Semi, "';'")?;
            if target != name {
                return Err(SyntaxError {
                    line: cur.peek().line,
                    column: cur.peek().column,
                    found: format!("assert of '{target}'"),
                    expected: vec![format!("assert of '{name}'")],
                });
            }
        } else {
            // Not an assert label; rewind so the caller sees trailing input.
            cur.pos = label_pos;
        }
    }

    if antecedent.steps.is_empty() || consequent.steps.is_empty() {
        return Err(cur.error(&["non-empty sequence"]));
    }
    Ok(AssertionAst { name, clock, reset, antecedent, consequent })
}

fn parse_seq(cur: &mut Cursor) -> Result<SequenceExpr, SyntaxError> {
    let mut steps = Vec::new();
    let first_delay = if cur.peek().tok == Tok::DelayHash {
        cur.bump();
        parse_delay(cur)?
    } else {
        0
    };
    steps.push(SequenceStep { delay: first_delay, expr: parse_expr(cur)? });
    while cur.peek().tok == Tok::DelayHash {
        cur.bump();
        let delay = parse_delay(cur)?;
        steps.push(SequenceStep { delay, expr: parse_expr(cur)? });
    }
    Ok(SequenceExpr { steps })
}

fn parse_delay(cur: &mut Cursor) -> Result<u32, SyntaxError> {
    match cur.peek().tok {
        Tok::Int(v) if v <= u32::MAX as u64 => {
            cur.bump();
            Ok(v as u32)
        }
        _ => Err(cur.error(&["non-negative delay integer"])),
    }
}

fn parse_expr(cur: &mut Cursor) -> Result<BoolExpr, SyntaxError> {
    parse_or(cur)
}

fn parse_or(cur: &mut Cursor) -> Result<BoolExpr, SyntaxError> {
    let mut lhs = parse_and(cur)?;
    while cur.peek().tok == Tok::OrOr {
        cur.bump();
        let rhs = parse_and(cur)?;
        lhs = BoolExpr::Or(Box::new(lhs), Box::new(rhs));
    }
    Ok(lhs)
}

fn parse_and(cur: &mut Cursor) -> Result<BoolExpr, SyntaxError> {
    let mut lhs = parse_cmp(cur)?;
    while cur.peek().tok == Tok::AndAnd {
        cur.bump();
        let rhs = parse_cmp(cur)?;
        lhs = BoolExpr::And(Box::new(lhs), Box::new(rhs));
    }
    Ok(lhs)
}

fn parse_cmp(cur: &mut Cursor) -> Result<BoolExpr, SyntaxError> {
    let lhs = parse_unary(cur)?;
    let op = match cur.peek().tok {
        Tok::EqEq => Some(CmpOp::Eq),
        Tok::NotEq => Some(CmpOp::Ne),
        Tok::Lt => Some(CmpOp::Lt),
        Tok::Le => Some(CmpOp::Le),
        Tok::Gt => Some(CmpOp::Gt),
        Tok::Ge => Some(CmpOp::Ge),
        _ => None,
    };
    match op {
        Some(op) => {
            cur.bump();
            let rhs = parse_unary(cur)?;
            Ok(BoolExpr::Cmp { op, lhs: Box::new(lhs), rhs: Box::new(rhs) })
        }
        None => Ok(lhs),
    }
}

fn parse_unary(cur: &mut Cursor) -> Result<BoolExpr, SyntaxError> {
    if cur.peek().tok == Tok::Bang {
        cur.bump();
        let inner = parse_unary(cur)?;
        return Ok(BoolExpr::Not(Box::new(inner)));
    }
    parse_primary(cur)
}

fn parse_primary(cur: &mut Cursor) -> Result<BoolExpr, SyntaxError> {
    match cur.peek().tok.clone() {
        Tok::Ident(name) => {
            cur.bump();
            Ok(BoolExpr::Signal(name))
        }
        Tok::Int(v) => {
            cur.bump();
            Ok(BoolExpr::Literal(Literal::Int(v)))
        }
        Tok::Based(text) => {
            cur.bump();
            Ok(BoolExpr::Literal(Literal::Based(text)))
        }
        Tok::LParen => {
            cur.bump();
            let inner = parse_expr(cur)?;
            cur.eat(&Tok::RParen, "')'")?;
            Ok(inner)
        }
        _ => Err(cur.error(&["identifier", "literal", "'('", "'!'"])),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_carries_position_and_expectations() {
        let err = parse("property p; @(posedge clk) a |-> ;\nendproperty").unwrap_err();
        assert_eq!(err.line, 1);
        assert!(err.expected.iter().any(|e| e.contains("identifier")));
    }

    #[test]
    fn parse_file_isolates_malformed_assertions() {
        let src = "\
property good0;\n  @(posedge clk) a |-> b;\nendproperty\ngood0_a: assert property (good0);\n\n\
property bad;\n  @(posedge clk) a |-> ##-1 b;\nendproperty\n\n\
property good1;\n  @(posedge clk) c ##1 d |-> e;\nendproperty\ngood1_a: assert property (good1);\n";
        let parsed = parse_file(src);
        assert_eq!(parsed.len(), 3);
        assert!(parsed[0].result.is_ok());
        assert!(parsed[1].result.is_err());
        assert!(parsed[2].result.is_ok());
        assert!(parsed[1].source.contains("bad"));
    }

    #[test]
    fn parse_file_on_empty_source() {
        assert!(parse_file("// no assertions here\n").is_empty());
    }

    #[test]
    fn mismatched_assert_target_rejected() {
        let src = "property p;\n  @(posedge clk) a |-> b;\nendproperty\nq_a: assert property (q);\n";
        assert!(parse(src).is_err());
    }

    #[test]
    fn based_literal_round_trip() {
        let seq = parse_sequence("x == 8'hFF ##2 y").unwrap();
        assert_eq!(seq.to_string(), "x == 8'hFF ##2 y");
    }
}
