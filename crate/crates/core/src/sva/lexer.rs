//! Tokenizer for the SVA subset. Never fails: unrecognized characters become
//! [`Tok::Unknown`] tokens that the parser reports with position info.

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(u64),
    Based(String),
    DelayHash, // ##
    Implies,   // |->
    AndAnd,
    OrOr,
    Bang,
    EqEq,
    NotEq,
    Lt,
    Le,
    Gt,
    Ge,
    LParen,
    RParen,
    Semi,
    Colon,
    At,
    KwProperty,
    KwEndproperty,
    KwAssert,
    KwDisable,
    KwIff,
    KwPosedge,
    Unknown(char),
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier '{s}'"),
            Tok::Int(v) => format!("integer '{v}'"),
            Tok::Based(s) => format!("literal '{s}'"),
            Tok::DelayHash => "'##'".into(),
            Tok::Implies => "'|->'".into(),
            Tok::AndAnd => "'&&'".into(),
            Tok::OrOr => "'||'".into(),
            Tok::Bang => "'!'".into(),
            Tok::EqEq => "'=='".into(),
            Tok::NotEq => "'!='".into(),
            Tok::Lt => "'<'".into(),
            Tok::Le => "'<='".into(),
            Tok::Gt => "'>'".into(),
            Tok::Ge => "'>='".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Semi => "';'".into(),
            Tok::Colon => "':'".into(),
            Tok::At => "'@'".into(),
            Tok::KwProperty => "'property'".into(),
            Tok::KwEndproperty => "'endproperty'".into(),
            Tok::KwAssert => "'assert'".into(),
            Tok::KwDisable => "'disable'".into(),
            Tok::KwIff => "'iff'".into(),
            Tok::KwPosedge => "'posedge'".into(),
            Tok::Unknown(c) => format!("unexpected character '{c}'"),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

pub fn lex(src: &str) -> Vec<Spanned> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let mut line = 1;
    let mut column = 1;

    macro_rules! push {
        ($tok:expr, $len:expr) => {{
            out.push(Spanned { tok: $tok, line, column });
            column += $len;
            i += $len;
        }};
    }

    while i < chars.len() {
        let c = chars[i];
        match c {
            '\n' => {
                line += 1;
                column = 1;
                i += 1;
            }
            c if c.is_whitespace() => {
                column += 1;
                i += 1;
            }
            '/' if chars.get(i + 1) == Some(&'/') => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                    column += 1;
                }
            }
            '/' if chars.get(i + 1) == Some(&'*') => {
                i += 2;
                column += 2;
                while i < chars.len() {
                    if chars[i] == '*' && chars.get(i + 1) == Some(&'/') {
                        i += 2;
                        column += 2;
                        break;
                    }
                    if chars[i] == '\n' {
                        line += 1;
                        column = 1;
                    } else {
                        column += 1;
                    }
                    i += 1;
                }
            }
            '#' if chars.get(i + 1) == Some(&'#') => push!(Tok::DelayHash, 2),
            '|' if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') => {
                push!(Tok::Implies, 3)
            }
            '|' if chars.get(i + 1) == Some(&'|') => push!(Tok::OrOr, 2),
            '&' if chars.get(i + 1) == Some(&'&') => push!(Tok::AndAnd, 2),
            '=' if chars.get(i + 1) == Some(&'=') => push!(Tok::EqEq, 2),
            '!' if chars.get(i + 1) == Some(&'=') => push!(Tok::NotEq, 2),
            '<' if chars.get(i + 1) == Some(&'=') => push!(Tok::Le, 2),
            '>' if chars.get(i + 1) == Some(&'=') => push!(Tok::Ge, 2),
            '!' => push!(Tok::Bang, 1),
            '<' => push!(Tok::Lt, 1),
            '>' => push!(Tok::Gt, 1),
            '(' => push!(Tok::LParen, 1),
            ')' => push!(Tok::RParen, 1),
            ';' => push!(Tok::Semi, 1),
            ':' => push!(Tok::Colon, 1),
            '@' => push!(Tok::At, 1),
            c if c.is_ascii_digit() || c == '\'' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if i < chars.len() && chars[i] == '\'' {
                    // Based literal such as 4'b0101 or 8'hFF; keep verbatim.
                    i += 1;
                    while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                        i += 1;
                    }
                    let text: String = chars[start..i].iter().collect();
                    let len = i - start;
                    out.push(Spanned { tok: Tok::Based(text), line, column });
                    column += len;
                } else {
                    let text: String = chars[start..i].iter().collect();
                    let len = i - start;
                    let tok = match text.parse::<u64>() {
                        Ok(v) => Tok::Int(v),
                        Err(_) => Tok::Unknown(chars[start]),
                    };
                    out.push(Spanned { tok, line, column });
                    column += len;
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let len = i - start;
                let tok = match text.as_str() {
                    "property" => Tok::KwProperty,
                    "endproperty" => Tok::KwEndproperty,
                    "assert" => Tok::KwAssert,
                    "disable" => Tok::KwDisable,
                    "iff" => Tok::KwIff,
                    "posedge" => Tok::KwPosedge,
                    _ => Tok::Ident(text),
                };
                out.push(Spanned { tok, line, column });
                column += len;
            }
            other => push!(Tok::Unknown(other), 1),
        }
    }
    out.push(Spanned { tok: Tok::Eof, line, column });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexes_operators_and_literals() {
        let toks: Vec<Tok> = lex("a ##3 b |-> 4'hF == x").into_iter().map(|s| s.tok).collect();
        assert_eq!(
            toks,
            vec![
                Tok::Ident("a".into()),
                Tok::DelayHash,
                Tok::Int(3),
                Tok::Ident("b".into()),
                Tok::Implies,
                Tok::Based("4'hF".into()),
                Tok::EqEq,
                Tok::Ident("x".into()),
                Tok::Eof,
            ]
        );
    }

    #[test]
    fn tracks_positions_across_lines_and_comments() {
        let spanned = lex("a\n// comment\n  b");
        let b = spanned.iter().find(|s| s.tok == Tok::Ident("b".into())).unwrap();
        assert_eq!((b.line, b.column), (3, 3));
    }

    #[test]
    fn unknown_characters_are_tokens_not_panics() {
        let toks: Vec<Tok> = lex("a $ b").into_iter().map(|s| s.tok).collect();
        assert!(toks.contains(&Tok::Unknown('$')));
    }
}
