use num_bigint::BigInt;

use crate::error::{Error, ParseErrorKind, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    End,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("number {n}"),
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Caret => "'^'".into(),
            Tok::Slash => "'/'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::End => "end of input".into(),
        }
    }
}

/// Token with its 1-based character column.
#[derive(Clone, Debug)]
pub struct Spanned {
    pub tok: Tok,
    pub column: usize,
}

pub fn lex_error(column: usize, message: impl Into<String>) -> Error {
    Error::Parse { kind: ParseErrorKind::Lexical, position: column, message: message.into() }
}

pub fn tokenize(text: &str) -> Result<Vec<Spanned>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let column = k + 1;
        if c.is_whitespace() {
            k += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '^' => Some(Tok::Caret),
            '/' => Some(Tok::Slash),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Spanned { tok, column });
            k += 1;
        } else if c.is_ascii_digit() {
            let start = k;
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            let digits: String = chars[start..k].iter().collect();
            if k < chars.len() && (chars[k] == '.' || chars[k].is_ascii_alphabetic()) {
                return Err(lex_error(k + 1, format!("unexpected '{}' after number", chars[k])));
            }
            let n = digits.parse::<BigInt>().expect("ascii digits");
            out.push(Spanned { tok: Tok::Int(n), column });
        } else if c.is_ascii_alphabetic() {
            let start = k;
            while k < chars.len() && chars[k].is_ascii_alphanumeric() {
                k += 1;
            }
            out.push(Spanned { tok: Tok::Ident(chars[start..k].iter().collect()), column });
        } else {
            return Err(lex_error(column, format!("unexpected character '{c}'")));
        }
    }
    out.push(Spanned { tok: Tok::End, column: chars.len() + 1 });
    Ok(out)
}
