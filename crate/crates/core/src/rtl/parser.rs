//! Recursive descent parser for the Verilog subset, flattening control flow
//! into per-target assignments with condition lists.

use std::collections::BTreeSet;

use super::lexer::{lex, Spanned, Tok};
use super::{
    AssignKind, FlatAssign, Net, NetKind, Parameter, Port, PortDirection, RtlDesign, RtlError,
    RtlExpr, RtlModule,
};

/// Parses a source file into a design. The whole file must consist of modules
/// in the supported subset.
pub fn parse_rtl(src: &str) -> Result<RtlDesign, RtlError> {
    let mut cur = Cursor::new(lex(src));
    let mut modules = Vec::new();
    while !cur.at_eof() {
        modules.push(parse_module(&mut cur)?);
    }
    if modules.is_empty() {
        return Err(cur.syntax("expected at least one module"));
    }
    let design = RtlDesign { modules };
    check_declared(&design)?;
    Ok(design)
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

    fn peek2(&self) -> &Spanned {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)]
    }

    fn bump(&mut self) -> Spanned {
        let s = self.toks[self.pos.min(self.toks.len() - 1)].clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        s
    }

    fn at_eof(&self) -> bool {
        matches!(self.peek().tok, Tok::Eof)
    }

    fn syntax(&self, message: impl Into<String>) -> RtlError {
        let here = self.peek();
        RtlError::Syntax { line: here.line, column: here.column, message: message.into() }
    }

    fn unsupported(&self, construct: impl Into<String>) -> RtlError {
        let here = self.peek();
        RtlError::Unsupported {
            construct: construct.into(),
            line: here.line,
            column: here.column,
        }
    }

    fn expect(&mut self, tok: &Tok, what: &str) -> Result<(), RtlError> {
        if let Tok::UnsupportedKw(kw) = &self.peek().tok {
            let kw = kw.clone();
            return Err(self.unsupported(kw));
        }
        if &self.peek().tok == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.syntax(format!("expected {what}, found {}", self.peek().tok.describe())))
        }
    }

    fn expect_ident(&mut self, what: &str) -> Result<String, RtlError> {
        match &self.peek().tok {
            Tok::Ident(name) => {
                let name = name.clone();
                self.bump();
                Ok(name)
            }
            Tok::UnsupportedKw(kw) => {
                let kw = kw.clone();
                Err(self.unsupported(kw))
            }
            _ => Err(self.syntax(format!("expected {what}, found {}", self.peek().tok.describe()))),
        }
    }
}

struct ModuleBuilder {
    name: String,
    ports: Vec<Port>,
    nets: Vec<Net>,
    parameters: Vec<Parameter>,
    assigns: Vec<FlatAssign>,
}

impl ModuleBuilder {
    fn param_value(&self, name: &str) -> Option<i64> {
        self.parameters.iter().find(|p| p.name == name).map(|p| p.value)
    }
}

fn parse_module(cur: &mut Cursor) -> Result<RtlModule, RtlError> {
    cur.expect(&Tok::Module, "'module'")?;
    let name = cur.expect_ident("module name")?;
    let mut builder =
        ModuleBuilder { name, ports: Vec::new(), nets: Vec::new(), parameters: Vec::new(), assigns: Vec::new() };

    if cur.peek().tok == Tok::Hash {
        return Err(cur.unsupported("parameter port list '#(...)'"));
    }
    if cur.peek().tok == Tok::LParen {
        cur.bump();
        parse_port_list(cur, &mut builder)?;
        cur.expect(&Tok::RParen, "')'")?;
    }
    cur.expect(&Tok::Semi, "';' after module header")?;

    while cur.peek().tok != Tok::Endmodule {
        if cur.at_eof() {
            return Err(cur.syntax("unexpected end of input inside module"));
        }
        parse_item(cur, &mut builder)?;
    }
    cur.bump(); // endmodule

    Ok(RtlModule {
        name: builder.name,
        ports: builder.ports,
        nets: builder.nets,
        parameters: builder.parameters,
        assigns: builder.assigns,
    })
}

fn parse_port_list(cur: &mut Cursor, builder: &mut ModuleBuilder) -> Result<(), RtlError> {
    if cur.peek().tok == Tok::RParen {
        return Ok(());
    }
    let mut direction: Option<PortDirection> = None;
    loop {
        match cur.peek().tok.clone() {
            Tok::Input => {
                cur.bump();
                direction = Some(PortDirection::Input);
            }
            Tok::Output => {
                cur.bump();
                direction = Some(PortDirection::Output);
            }
            Tok::Inout => {
                cur.bump();
                direction = Some(PortDirection::Inout);
            }
            _ => {}
        }
        let is_reg = if cur.peek().tok == Tok::Reg {
            cur.bump();
            true
        } else if cur.peek().tok == Tok::Wire {
            cur.bump();
            false
        } else {
            false
        };
        let width = parse_optional_range(cur, builder)?;
        let name = cur.expect_ident("port name")?;
        match direction {
            Some(direction) => {
                builder.ports.push(Port { name: name.clone(), direction, width });
                if is_reg {
                    builder.nets.push(Net { name, kind: NetKind::Reg, width });
                }
            }
            None => {
                // Legacy port list: direction declared in the body later.
                builder.ports.push(Port { name, direction: PortDirection::Inout, width });
            }
        }
        if cur.peek().tok == Tok::Comma {
            cur.bump();
        } else {
            return Ok(());
        }
    }
}

fn parse_item(cur: &mut Cursor, builder: &mut ModuleBuilder) -> Result<(), RtlError> {
    match cur.peek().tok.clone() {
        Tok::UnsupportedKw(kw) => Err(cur.unsupported(kw)),
        Tok::Input | Tok::Output | Tok::Inout => parse_body_port_decl(cur, builder),
        Tok::Wire | Tok::Reg => parse_net_decl(cur, builder),
        Tok::Parameter | Tok::Localparam => parse_parameter_decl(cur, builder),
        Tok::AssignKw => parse_continuous_assign(cur, builder),
        Tok::Always => parse_always(cur, builder),
        Tok::Ident(_) => {
            if matches!(cur.peek2().tok, Tok::Ident(_)) {
                Err(cur.unsupported("module instantiation"))
            } else {
                Err(cur.syntax(format!("unexpected {}", cur.peek().tok.describe())))
            }
        }
        other => Err(cur.syntax(format!("unexpected {}", other.describe()))),
    }
}

fn parse_body_port_decl(cur: &mut Cursor, builder: &mut ModuleBuilder) -> Result<(), RtlError> {
    let direction = match cur.bump().tok {
        Tok::Input => PortDirection::Input,
        Tok::Output => PortDirection::Output,
        _ => PortDirection::Inout,
    };
    let kind = if cur.peek().tok == Tok::Reg {
        cur.bump();
        Some(NetKind::Reg)
    } else if cur.peek().tok == Tok::Wire {
        cur.bump();
        Some(NetKind::Wire)
    } else {
        None
    };
    let width = parse_optional_range(cur, builder)?;
    loop {
        let name = cur.expect_ident("port name")?;
        if let Some(port) = builder.ports.iter_mut().find(|p| p.name == name) {
            port.direction = direction;
            port.width = width;
        } else {
            builder.ports.push(Port { name: name.clone(), direction, width });
        }
        if let Some(kind) = kind {
            builder.nets.push(Net { name, kind, width });
        }
        if cur.peek().tok == Tok::Comma {
            cur.bump();
        } else {
            break;
        }
    }
    cur.expect(&Tok::Semi, "';'")?;
    Ok(())
}

fn parse_net_decl(cur: &mut Cursor, builder: &mut ModuleBuilder) -> Result<(), RtlError> {
    let kind = match cur.bump().tok {
        Tok::Wire => NetKind::Wire,
        _ => NetKind::Reg,
    };
    let width = parse_optional_range(cur, builder)?;
    loop {
        let name = cur.expect_ident("net name")?;
        builder.nets.push(Net { name: name.clone(), kind, width });
        if cur.peek().tok == Tok::Assign {
            // `wire x = expr;` is a continuous assign in disguise.
            if kind == NetKind::Reg {
                return Err(cur.unsupported("reg initializer"));
            }
            cur.bump();
            let rhs = parse_expr(cur)?;
            builder.assigns.push(FlatAssign {
                lhs: name,
                rhs,
                kind: AssignKind::Combinational,
                conditions: Vec::new(),
            });
        }
        if cur.peek().tok == Tok::Comma {
            cur.bump();
        } else {
            break;
        }
    }
    cur.expect(&Tok::Semi, "';'")?;
    Ok(())
}

fn parse_parameter_decl(cur: &mut Cursor, builder: &mut ModuleBuilder) -> Result<(), RtlError> {
    cur.bump(); // parameter | localparam
    let _width = parse_optional_range(cur, builder)?;
    loop {
        let name = cur.expect_ident("parameter name")?;
        cur.expect(&Tok::Assign, "'='")?;
        let value = parse_const_expr(cur, builder)?;
        builder.parameters.push(Parameter { name, value });
        if cur.peek().tok == Tok::Comma {
            cur.bump();
        } else {
            break;
        }
    }
    cur.expect(&Tok::Semi, "';'")?;
    Ok(())
}

fn parse_continuous_assign(cur: &mut Cursor, builder: &mut ModuleBuilder) -> Result<(), RtlError> {
    cur.bump(); // assign
    loop {
        let lhs = parse_lvalue(cur)?;
        cur.expect(&Tok::Assign, "'='")?;
        let rhs = parse_expr(cur)?;
        builder.assigns.push(FlatAssign {
            lhs,
            rhs,
            kind: AssignKind::Combinational,
            conditions: Vec::new(),
        });
        if cur.peek().tok == Tok::Comma {
            cur.bump();
        } else {
            break;
        }
    }
    cur.expect(&Tok::Semi, "';'")?;
    Ok(())
}

fn parse_always(cur: &mut Cursor, builder: &mut ModuleBuilder) -> Result<(), RtlError> {
    cur.bump(); // always
    cur.expect(&Tok::At, "'@'")?;
    let kind = if cur.peek().tok == Tok::Star {
        cur.bump();
        AssignKind::Combinational
    } else {
        cur.expect(&Tok::LParen, "'('")?;
        let kind = match cur.peek().tok.clone() {
            Tok::Star => {
                cur.bump();
                AssignKind::Combinational
            }
            Tok::Posedge => {
                cur.bump();
                let _clock = cur.expect_ident("clock identifier")?;
                if matches!(cur.peek().tok, Tok::Ident(ref w) if w == "or") {
                    return Err(cur.unsupported("multi-event sensitivity list"));
                }
                AssignKind::Sequential
            }
            Tok::UnsupportedKw(kw) => return Err(cur.unsupported(kw)),
            other => {
                return Err(cur.syntax(format!(
                    "unsupported sensitivity list starting with {}",
                    other.describe()
                )))
            }
        };
        cur.expect(&Tok::RParen, "')'")?;
        kind
    };
    let mut conditions = Vec::new();
    parse_stmt(cur, builder, kind, &mut conditions)?;
    Ok(())
}

fn parse_stmt(
    cur: &mut Cursor,
    builder: &mut ModuleBuilder,
    kind: AssignKind,
    conditions: &mut Vec<RtlExpr>,
) -> Result<(), RtlError> {
    match cur.peek().tok.clone() {
        Tok::UnsupportedKw(kw) => Err(cur.unsupported(kw)),
        Tok::Begin => {
            cur.bump();
            while cur.peek().tok != Tok::End {
                if cur.at_eof() {
                    return Err(cur.syntax("unexpected end of input inside begin/end"));
                }
                parse_stmt(cur, builder, kind, conditions)?;
            }
            cur.bump();
            Ok(())
        }
        Tok::If => {
            cur.bump();
            cur.expect(&Tok::LParen, "'('")?;
            let cond = parse_expr(cur)?;
            cur.expect(&Tok::RParen, "')'")?;
            conditions.push(cond);
            parse_stmt(cur, builder, kind, conditions)?;
            if cur.peek().tok == Tok::Else {
                cur.bump();
                parse_stmt(cur, builder, kind, conditions)?;
            }
            conditions.pop();
            Ok(())
        }
        Tok::Case => {
            cur.bump();
            cur.expect(&Tok::LParen, "'('")?;
            let selector = parse_expr(cur)?;
            cur.expect(&Tok::RParen, "')'")?;
            while cur.peek().tok != Tok::Endcase {
                if cur.at_eof() {
                    return Err(cur.syntax("unexpected end of input inside case"));
                }
                let mut labels = Vec::new();
                if cur.peek().tok == Tok::Default {
                    cur.bump();
                    if cur.peek().tok == Tok::Colon {
                        cur.bump();
                    }
                } else {
                    loop {
                        labels.push(parse_expr(cur)?);
                        if cur.peek().tok == Tok::Comma {
                            cur.bump();
                        } else {
                            break;
                        }
                    }
                    cur.expect(&Tok::Colon, "':'")?;
                }
                let outer_depth = conditions.len();
                conditions.push(selector.clone());
                conditions.extend(labels);
                parse_stmt(cur, builder, kind, conditions)?;
                conditions.truncate(outer_depth);
            }
            cur.bump();
            Ok(())
        }
        Tok::Semi => {
            cur.bump();
            Ok(())
        }
        Tok::Ident(_) => {
            let lhs = parse_lvalue(cur)?;
            let assign_tok = cur.bump();
            let actual = match assign_tok.tok {
                Tok::Assign => AssignKind::Combinational,
                Tok::NonBlock => AssignKind::Sequential,
                other => {
                    return Err(cur
                        .syntax(format!("expected assignment operator, found {}", other.describe())))
                }
            };
            match (kind, actual) {
                (AssignKind::Sequential, AssignKind::Combinational) => {
                    return Err(cur.unsupported("blocking assign in sequential block"))
                }
                (AssignKind::Combinational, AssignKind::Sequential) => {
                    return Err(cur.unsupported("nonblocking assign in combinational block"))
                }
                _ => {}
            }
            let rhs = parse_expr(cur)?;
            cur.expect(&Tok::Semi, "';'")?;
            builder.assigns.push(FlatAssign { lhs, rhs, kind, conditions: conditions.clone() });
            Ok(())
        }
        other => Err(cur.syntax(format!("unexpected {}", other.describe()))),
    }
}

// The case-item condition bookkeeping above needs to know how many entries
// belong to enclosing scopes; conditions are pushed as [.., selector, labels..]
// per item, so everything from the last occurrence of the selector onward is
// popped.
fn depth_before(conditions: &[RtlExpr], selector: &RtlExpr) -> usize {
    conditions
        .iter()
        .rposition(|c| c == selector)
        .unwrap_or(conditions.len())
}

fn parse_lvalue(cur: &mut Cursor) -> Result<String, RtlError> {
    let name = cur.expect_ident("assignment target")?;
    if cur.peek().tok == Tok::LBracket {
        // Bit- or part-select collapses to the base signal.
        cur.bump();
        let _ = parse_expr(cur)?;
        if cur.peek().tok == Tok::Colon {
            cur.bump();
            let _ = parse_expr(cur)?;
        }
        cur.expect(&Tok::RBracket, "']'")?;
    }
    Ok(name)
}

fn parse_optional_range(cur: &mut Cursor, builder: &ModuleBuilder) -> Result<u32, RtlError> {
    if cur.peek().tok != Tok::LBracket {
        return Ok(1);
    }
    cur.bump();
    let msb = parse_const_expr(cur, builder)?;
    cur.expect(&Tok::Colon, "':'")?;
    let lsb = parse_const_expr(cur, builder)?;
    cur.expect(&Tok::RBracket, "']'")?;
    Ok((msb - lsb).unsigned_abs() as u32 + 1)
}

/// Constant expression for ranges and parameter values: integers, parameter
/// names, and +,-,* with parentheses.
fn parse_const_expr(cur: &mut Cursor, builder: &ModuleBuilder) -> Result<i64, RtlError> {
    let mut acc = parse_const_term(cur, builder)?;
    loop {
        match cur.peek().tok {
            Tok::Plus => {
                cur.bump();
                acc += parse_const_term(cur, builder)?;
            }
            Tok::Minus => {
                cur.bump();
                acc -= parse_const_term(cur, builder)?;
            }
            _ => return Ok(acc),
        }
    }
}

fn parse_const_term(cur: &mut Cursor, builder: &ModuleBuilder) -> Result<i64, RtlError> {
    let mut acc = parse_const_atom(cur, builder)?;
    while cur.peek().tok == Tok::Star {
        cur.bump();
        acc *= parse_const_atom(cur, builder)?;
    }
    Ok(acc)
}

fn parse_const_atom(cur: &mut Cursor, builder: &ModuleBuilder) -> Result<i64, RtlError> {
    match cur.peek().tok.clone() {
        Tok::Number(text) => {
            cur.bump();
            number_value(&text)
                .ok_or_else(|| cur.syntax(format!("cannot evaluate constant '{text}'")))
        }
        Tok::Ident(name) => {
            cur.bump();
            builder
                .param_value(&name)
                .ok_or_else(|| cur.syntax(format!("'{name}' is not a known parameter")))
        }
        Tok::LParen => {
            cur.bump();
            let v = parse_const_expr(cur, builder)?;
            cur.expect(&Tok::RParen, "')'")?;
            Ok(v)
        }
        other => Err(cur.syntax(format!("expected constant, found {}", other.describe()))),
    }
}

fn number_value(text: &str) -> Option<i64> {
    let cleaned: String = text.chars().filter(|&c| c != '_').collect();
    if let Some(pos) = cleaned.find('\'') {
        let body = &cleaned[pos + 1..];
        let (base, digits) = match body.chars().next()? {
            'b' | 'B' => (2, &body[1..]),
            'o' | 'O' => (8, &body[1..]),
            'd' | 'D' => (10, &body[1..]),
            'h' | 'H' => (16, &body[1..]),
            _ => return None,
        };
        i64::from_str_radix(digits, base).ok()
    } else {
        cleaned.parse().ok()
    }
}

fn parse_expr(cur: &mut Cursor) -> Result<RtlExpr, RtlError> {
    parse_ternary(cur)
}

fn parse_ternary(cur: &mut Cursor) -> Result<RtlExpr, RtlError> {
    let cond = parse_binary(cur, 0)?;
    if cur.peek().tok == Tok::Question {
        cur.bump();
        let then = parse_ternary(cur)?;
        cur.expect(&Tok::Colon, "':'")?;
        let otherwise = parse_ternary(cur)?;
        Ok(RtlExpr::Ternary {
            cond: Box::new(cond),
            then: Box::new(then),
            otherwise: Box::new(otherwise),
        })
    } else {
        Ok(cond)
    }
}

fn binary_op(tok: &Tok) -> Option<(&'static str, u8)> {
    // Precedence climbing; higher binds tighter.
    match tok {
        Tok::OrOr => Some(("||", 1)),
        Tok::AndAnd => Some(("&&", 2)),
        Tok::Pipe => Some(("|", 3)),
        Tok::Caret => Some(("^", 4)),
        Tok::Amp => Some(("&", 5)),
        Tok::EqEq => Some(("==", 6)),
        Tok::NotEq => Some(("!=", 6)),
        Tok::Lt => Some(("<", 7)),
        Tok::NonBlock => Some(("<=", 7)),
        Tok::Gt => Some((">", 7)),
        Tok::Ge => Some((">=", 7)),
        Tok::Shl => Some(("<<", 8)),
        Tok::Shr => Some((">>", 8)),
        Tok::Plus => Some(("+", 9)),
        Tok::Minus => Some(("-", 9)),
        Tok::Star => Some(("*", 10)),
        Tok::Slash => Some(("/", 10)),
        Tok::Percent => Some(("%", 10)),
        _ => None,
    }
}

fn parse_binary(cur: &mut Cursor, min_prec: u8) -> Result<RtlExpr, RtlError> {
    let mut lhs = parse_unary(cur)?;
    while let Some((op, prec)) = binary_op(&cur.peek().tok) {
        if prec < min_prec {
            break;
        }
        cur.bump();
        let rhs = parse_binary(cur, prec + 1)?;
        lhs = RtlExpr::Binary { op: op.into(), lhs: Box::new(lhs), rhs: Box::new(rhs) };
    }
    Ok(lhs)
}

fn parse_unary(cur: &mut Cursor) -> Result<RtlExpr, RtlError> {
    let op = match cur.peek().tok {
        Tok::Not => Some("!"),
        Tok::Tilde => Some("~"),
        Tok::Amp => Some("&"),
        Tok::Pipe => Some("|"),
        Tok::Caret => Some("^"),
        Tok::Minus => Some("-"),
        Tok::Plus => Some("+"),
        _ => None,
    };
    if let Some(op) = op {
        cur.bump();
        let operand = parse_unary(cur)?;
        return Ok(RtlExpr::Unary { op: op.into(), operand: Box::new(operand) });
    }
    parse_primary(cur)
}

fn parse_primary(cur: &mut Cursor) -> Result<RtlExpr, RtlError> {
    match cur.peek().tok.clone() {
        Tok::Ident(name) => {
            cur.bump();
            if cur.peek().tok == Tok::LBracket {
                cur.bump();
                let mut indices = vec![parse_expr(cur)?];
                if cur.peek().tok == Tok::Colon {
                    cur.bump();
                    indices.push(parse_expr(cur)?);
                }
                cur.expect(&Tok::RBracket, "']'")?;
                Ok(RtlExpr::Select { base: name, indices })
            } else {
                Ok(RtlExpr::Ident(name))
            }
        }
        Tok::Number(text) => {
            cur.bump();
            Ok(RtlExpr::Literal(text))
        }
        Tok::LParen => {
            cur.bump();
            let inner = parse_expr(cur)?;
            cur.expect(&Tok::RParen, "')'")?;
            Ok(inner)
        }
        Tok::LBrace => {
            cur.bump();
            let mut parts = vec![parse_expr(cur)?];
            while cur.peek().tok == Tok::Comma {
                cur.bump();
                parts.push(parse_expr(cur)?);
            }
            cur.expect(&Tok::RBrace, "'}'")?;
            Ok(RtlExpr::Concat(parts))
        }
        Tok::UnsupportedKw(kw) => Err(cur.unsupported(kw)),
        other => Err(cur.syntax(format!("expected expression, found {}", other.describe()))),
    }
}

fn check_declared(design: &RtlDesign) -> Result<(), RtlError> {
    for module in &design.modules {
        let mut declared: BTreeSet<String> = BTreeSet::new();
        declared.extend(module.ports.iter().map(|p| p.name.clone()));
        declared.extend(module.nets.iter().map(|n| n.name.clone()));
        let constants: BTreeSet<String> =
            module.parameters.iter().map(|p| p.name.clone()).collect();
        for assign in &module.assigns {
            if !declared.contains(&assign.lhs) {
                return Err(RtlError::Undeclared {
                    module: module.name.clone(),
                    name: assign.lhs.clone(),
                });
            }
            let mut occ = Vec::new();
            assign.rhs.signal_occurrences(&constants, &mut occ);
            for cond in &assign.conditions {
                cond.signal_occurrences(&constants, &mut occ);
            }
            for name in occ {
                if !declared.contains(name) {
                    return Err(RtlError::Undeclared {
                        module: module.name.clone(),
                        name: name.to_string(),
                    });
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_continuous_assign() {
        let design = parse_rtl("module m(input a, input b, output y); assign y = a & b; endmodule")
            .unwrap();
        let assigns: Vec<_> = design.assigns().collect();
        assert_eq!(assigns.len(), 1);
        assert_eq!(assigns[0].kind, AssignKind::Combinational);
        let mut occ = Vec::new();
        assigns[0].rhs.signal_occurrences(&BTreeSet::new(), &mut occ);
        assert_eq!(occ, vec!["a", "b"]);
    }

    #[test]
    fn parses_sequential_block() {
        let design = parse_rtl(
            "module m(input clk, input d, output reg q);\nalways @(posedge clk) q <= d;\nendmodule",
        )
        .unwrap();
        let assigns: Vec<_> = design.assigns().collect();
        assert_eq!(assigns[0].kind, AssignKind::Sequential);
        assert_eq!(assigns[0].lhs, "q");
    }

    #[test]
    fn initial_block_is_unsupported() {
        let err = parse_rtl("module m(input a); initial a = 0; endmodule").unwrap_err();
        match err {
            RtlError::Unsupported { construct, .. } => assert_eq!(construct, "initial"),
            other => panic!("expected Unsupported, got {other:?}"),
        }
    }

    #[test]
    fn if_conditions_attach_to_assigns() {
        let design = parse_rtl(
            "module m(input clk, input en, input d, output reg q);\n\
             always @(posedge clk) begin if (en) q <= d; end\nendmodule",
        )
        .unwrap();
        let assigns: Vec<_> = design.assigns().collect();
        assert_eq!(assigns[0].conditions.len(), 1);
        let mut occ = Vec::new();
        assigns[0].conditions[0].signal_occurrences(&BTreeSet::new(), &mut occ);
        assert_eq!(occ, vec!["en"]);
    }

    #[test]
    fn else_branch_keeps_condition() {
        let design = parse_rtl(
            "module m(input clk, input en, input d, output reg q);\n\
             always @(posedge clk) if (en) q <= d; else q <= 1'b0;\nendmodule",
        )
        .unwrap();
        let assigns: Vec<_> = design.assigns().collect();
        assert_eq!(assigns.len(), 2);
        assert_eq!(assigns[1].conditions.len(), 1);
    }

    #[test]
    fn case_selector_counts_as_condition() {
        let design = parse_rtl(
            "module m(input clk, input [1:0] sel, input a, input b, output reg y);\n\
             always @(posedge clk) case (sel)\n 2'd0: y <= a;\n default: y <= b;\n endcase\nendmodule",
        )
        .unwrap();
        let assigns: Vec<_> = design.assigns().collect();
        assert_eq!(assigns.len(), 2);
        for a in assigns {
            let mut occ = Vec::new();
            for c in &a.conditions {
                c.signal_occurrences(&BTreeSet::new(), &mut occ);
            }
            assert!(occ.contains(&"sel"));
        }
    }

    #[test]
    fn undeclared_identifier_rejected() {
        let err = parse_rtl("module m(input a, output y); assign y = a & ghost; endmodule")
            .unwrap_err();
        assert!(matches!(err, RtlError::Undeclared { ref name, .. } if name == "ghost"));
    }

    #[test]
    fn parameters_are_constants_not_signals() {
        let design = parse_rtl(
            "module m(input clk, input [3:0] cnt, output reg hit);\n\
             parameter LIMIT = 4'd9;\n\
             always @(posedge clk) hit <= (cnt == LIMIT);\nendmodule",
        )
        .unwrap();
        let module = &design.modules[0];
        let constants: BTreeSet<String> =
            module.parameters.iter().map(|p| p.name.clone()).collect();
        let mut occ = Vec::new();
        module.assigns[0].rhs.signal_occurrences(&constants, &mut occ);
        assert_eq!(occ, vec!["cnt"]);
    }

    #[test]
    fn blocking_assign_in_sequential_block_rejected() {
        let err = parse_rtl(
            "module m(input clk, input d, output reg q); always @(posedge clk) q = d; endmodule",
        )
        .unwrap_err();
        assert!(matches!(err, RtlError::Unsupported { .. }));
    }

    #[test]
    fn wire_initializer_is_combinational_assign() {
        let design =
            parse_rtl("module m(input a, input b, output y);\nwire t = a | b;\nassign y = t;\nendmodule")
                .unwrap();
        assert_eq!(design.assigns().count(), 2);
    }
}
