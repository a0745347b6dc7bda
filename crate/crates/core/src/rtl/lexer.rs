//! Tokenizer for the Verilog subset.

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Number(String),
    // punctuation / operators
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Semi,
    Comma,
    Colon,
    Question,
    At,
    Star,
    Hash,
    Assign,    // =
    NonBlock,  // <=  (also less-equal in expression position)
    EqEq,
    NotEq,
    Lt,
    Gt,
    Ge,
    Not,
    Tilde,
    Amp,
    Pipe,
    Caret,
    AndAnd,
    OrOr,
    Plus,
    Minus,
    Slash,
    Percent,
    Shl,
    Shr,
    // keywords
    Module,
    Endmodule,
    Input,
    Output,
    Inout,
    Wire,
    Reg,
    AssignKw,
    Always,
    Begin,
    End,
    If,
    Else,
    Case,
    Endcase,
    Default,
    Posedge,
    Parameter,
    Localparam,
    /// Keyword recognized but outside the supported subset.
    UnsupportedKw(String),
    Unknown(char),
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier '{s}'"),
            Tok::Number(s) => format!("number '{s}'"),
            Tok::UnsupportedKw(s) => format!("keyword '{s}'"),
            Tok::Unknown(c) => format!("character '{c}'"),
            Tok::Eof => "end of input".into(),
            other => format!("{other:?}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

const UNSUPPORTED: &[&str] = &[
    "initial", "negedge", "function", "endfunction", "task", "endtask", "generate",
    "endgenerate", "genvar", "for", "while", "repeat", "forever", "integer", "real", "time",
    "specify", "endspecify", "defparam", "fork", "join", "casez", "casex", "wait", "event",
    "tri", "supply0", "supply1", "signed",
];

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
            '<' if chars.get(i + 1) == Some(&'=') => push!(Tok::NonBlock, 2),
            '<' if chars.get(i + 1) == Some(&'<') => push!(Tok::Shl, 2),
            '>' if chars.get(i + 1) == Some(&'>') => push!(Tok::Shr, 2),
            '>' if chars.get(i + 1) == Some(&'=') => push!(Tok::Ge, 2),
            '=' if chars.get(i + 1) == Some(&'=') => push!(Tok::EqEq, 2),
            '!' if chars.get(i + 1) == Some(&'=') => push!(Tok::NotEq, 2),
            '&' if chars.get(i + 1) == Some(&'&') => push!(Tok::AndAnd, 2),
            '|' if chars.get(i + 1) == Some(&'|') => push!(Tok::OrOr, 2),
            '(' => push!(Tok::LParen, 1),
            ')' => push!(Tok::RParen, 1),
            '[' => push!(Tok::LBracket, 1),
            ']' => push!(Tok::RBracket, 1),
            '{' => push!(Tok::LBrace, 1),
            '}' => push!(Tok::RBrace, 1),
            ';' => push!(Tok::Semi, 1),
            ',' => push!(Tok::Comma, 1),
            ':' => push!(Tok::Colon, 1),
            '?' => push!(Tok::Question, 1),
            '@' => push!(Tok::At, 1),
            '*' => push!(Tok::Star, 1),
            '#' => push!(Tok::Hash, 1),
            '=' => push!(Tok::Assign, 1),
            '<' => push!(Tok::Lt, 1),
            '>' => push!(Tok::Gt, 1),
            '!' => push!(Tok::Not, 1),
            '~' => push!(Tok::Tilde, 1),
            '&' => push!(Tok::Amp, 1),
            '|' => push!(Tok::Pipe, 1),
            '^' => push!(Tok::Caret, 1),
            '+' => push!(Tok::Plus, 1),
            '-' => push!(Tok::Minus, 1),
            '/' => push!(Tok::Slash, 1),
            '%' => push!(Tok::Percent, 1),
            c if c.is_ascii_digit() || c == '\'' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '_') {
                    i += 1;
                }
                if i < chars.len() && chars[i] == '\'' {
                    i += 1;
                    while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                        i += 1;
                    }
                }
                let text: String = chars[start..i].iter().collect();
                let len = i - start;
                out.push(Spanned { tok: Tok::Number(text), line, column });
                column += len;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let len = i - start;
                let tok = match text.as_str() {
                    "module" => Tok::Module,
                    "endmodule" => Tok::Endmodule,
                    "input" => Tok::Input,
                    "output" => Tok::Output,
                    "inout" => Tok::Inout,
                    "wire" => Tok::Wire,
                    "reg" => Tok::Reg,
                    "assign" => Tok::AssignKw,
                    "always" => Tok::Always,
                    "begin" => Tok::Begin,
                    "end" => Tok::End,
                    "if" => Tok::If,
                    "else" => Tok::Else,
                    "case" => Tok::Case,
                    "endcase" => Tok::Endcase,
                    "default" => Tok::Default,
                    "posedge" => Tok::Posedge,
                    "parameter" => Tok::Parameter,
                    "localparam" => Tok::Localparam,
                    kw if UNSUPPORTED.contains(&kw) => Tok::UnsupportedKw(text.clone()),
                    _ => Tok::Ident(text.clone()),
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
