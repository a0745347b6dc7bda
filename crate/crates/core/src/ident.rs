//! Identifier syntax checks and identifier-token scanning shared by the
//! pipeline phases and both parsers.

/// Returns true if `s` is a valid signal identifier: `[A-Za-z_][A-Za-z0-9_]*`.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Scans `text` for maximal identifier-shaped tokens.
///
/// Tokens glued to digits on the left (e.g. the `b0` in `4'b0`) are not
/// produced; a token starts only where the previous character is not part of
/// an identifier.
pub fn identifier_tokens(text: &str) -> Vec<&str> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() {
                let c = bytes[i] as char;
                if c.is_ascii_alphanumeric() || c == '_' {
                    i += 1;
                } else {
                    break;
                }
            }
            out.push(&text[start..i]);
        } else if c.is_ascii_digit() {
            // Skip the whole number (including any based-literal body) so its
            // letters are not mistaken for identifiers.
            while i < bytes.len() {
                let c = bytes[i] as char;
                if c.is_ascii_alphanumeric() || c == '\'' || c == '_' {
                    i += 1;
                } else {
                    break;
                }
            }
        } else {
            i += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_plain_identifiers() {
        assert!(is_identifier("bus_wen"));
        assert!(is_identifier("_r2d2"));
        assert!(is_identifier("CLK"));
    }

    #[test]
    fn rejects_malformed_identifiers() {
        assert!(!is_identifier("1bad"));
        assert!(!is_identifier(""));
        assert!(!is_identifier("bus-err"));
        assert!(!is_identifier("a b"));
    }

    #[test]
    fn scans_tokens_skipping_literals() {
        assert_eq!(
            identifier_tokens("when bus_wen == 4'b0101 goes high"),
            vec!["when", "bus_wen", "goes", "high"]
        );
        assert_eq!(identifier_tokens("x1+y2"), vec!["x1", "y2"]);
        assert_eq!(identifier_tokens("42 17"), Vec::<&str>::new());
    }
}
