use crate::error::{ParseError, ParseErrorKind};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Num(i64),
    /// `chi_{K/k}`
    ChiKK,
    /// `theta_-`
    Theta,
    /// `|x`
    Rtimes,
    Caret,
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Star,
    Slash,
    Minus,
    Plus,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => s.clone(),
            Tok::Num(n) => n.to_string(),
            Tok::ChiKK => "chi_{K/k}".into(),
            Tok::Theta => "theta_-".into(),
            Tok::Rtimes => "|x".into(),
            Tok::Caret => "^".into(),
            Tok::LBrace => "{".into(),
            Tok::RBrace => "}".into(),
            Tok::LParen => "(".into(),
            Tok::RParen => ")".into(),
            Tok::LBracket => "[".into(),
            Tok::RBracket => "]".into(),
            Tok::Comma => ",".into(),
            Tok::Star => "*".into(),
            Tok::Slash => "/".into(),
            Tok::Minus => "-".into(),
            Tok::Plus => "+".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub offset: usize,
}

/// Integer literals above this are rejected, keeping all later arithmetic far
/// from overflow.
pub(crate) const MAX_LITERAL: i64 = 1 << 20;

fn is_ident_char(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_' || b == b'\''
}

pub(crate) fn lex(src: &str, base: usize) -> Result<Vec<Token>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let offset = base + i;
        let single = match b {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'^' => Some(Tok::Caret),
            b'{' => Some(Tok::LBrace),
            b'}' => Some(Tok::RBrace),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            b'[' => Some(Tok::LBracket),
            b']' => Some(Tok::RBracket),
            b',' => Some(Tok::Comma),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'-' => Some(Tok::Minus),
            b'+' => Some(Tok::Plus),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Token { tok, offset });
            i += 1;
            continue;
        }
        if b == b'|' {
            let ok = bytes.get(i + 1) == Some(&b'x')
                && !bytes.get(i + 2).copied().is_some_and(is_ident_char);
            if !ok {
                return Err(ParseError::new(
                    offset,
                    ParseErrorKind::Expected {
                        expected: "`|x`".into(),
                        found: snippet(src, i),
                    },
                ));
            }
            out.push(Token {
                tok: Tok::Rtimes,
                offset,
            });
            i += 2;
            continue;
        }
        if b.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let text = &src[start..i];
            let n = text
                .parse::<i64>()
                .ok()
                .filter(|n| *n <= MAX_LITERAL)
                .ok_or_else(|| {
                    ParseError::new(offset, ParseErrorKind::MalformedRational(text.into()))
                })?;
            out.push(Token {
                tok: Tok::Num(n),
                offset,
            });
            continue;
        }
        if b.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && is_ident_char(bytes[i]) {
                i += 1;
            }
            let word = &src[start..i];
            let tok = if word == "chi_" && src[i..].starts_with("{K/k}") {
                i += "{K/k}".len();
                Tok::ChiKK
            } else if word == "theta_" && bytes.get(i) == Some(&b'-') {
                i += 1;
                Tok::Theta
            } else {
                Tok::Ident(word.to_string())
            };
            out.push(Token { tok, offset });
            continue;
        }
        let c = src[i..].chars().next().unwrap_or('\u{fffd}');
        return Err(ParseError::new(offset, ParseErrorKind::UnexpectedChar(c)));
    }
    Ok(out)
}

fn snippet(src: &str, i: usize) -> String {
    src[i..].chars().take(3).collect()
}
