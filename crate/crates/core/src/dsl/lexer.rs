use num_bigint::BigInt;

use super::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Keyword(&'static str),
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Colon,
    Semi,
    Arrow,
    Eq,
    Eof,
}

pub const KEYWORDS: &[&str] = &[
    "field",
    "param",
    "algebraic",
    "let",
    "bind",
    "graded",
    "gen",
    "deg",
    "sigma",
    "sigma_inv",
    "delta",
    "expect",
    "nakayama",
    "calabi_yau",
    "dimension",
    "realization",
    "maps",
    "inverse",
    "relation",
    "check",
    "zero",
    "nonzero",
    "true",
    "false",
];

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Keyword(k) => format!("`{k}`"),
            Tok::Int(n) => format!("number `{n}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
    /// Character offsets of the token in the source.
    pub start: usize,
    pub end: usize,
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let single = match c {
            '+' => Some((Tok::Plus, 1)),
            '-' if chars.get(i + 1) == Some(&'>') => Some((Tok::Arrow, 2)),
            '-' => Some((Tok::Minus, 1)),
            '*' => Some((Tok::Star, 1)),
            '/' => Some((Tok::Slash, 1)),
            '^' => Some((Tok::Caret, 1)),
            '(' => Some((Tok::LParen, 1)),
            ')' => Some((Tok::RParen, 1)),
            '{' => Some((Tok::LBrace, 1)),
            '}' => Some((Tok::RBrace, 1)),
            ':' => Some((Tok::Colon, 1)),
            ';' => Some((Tok::Semi, 1)),
            '=' => Some((Tok::Eq, 1)),
            _ => None,
        };
        if let Some((tok, width)) = single {
            out.push(Token { tok, line: tl, col: tc, start: i, end: i + width });
            i += width;
            col += width;
            continue;
        }
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            ' ' | '\t' | '\r' => {
                i += 1;
                col += 1;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            d if d.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                col += i - start;
                out.push(Token { tok: Tok::Int(text.parse().unwrap()), line: tl, col: tc, start, end: i });
            }
            a if a.is_ascii_alphabetic() || a == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                col += i - start;
                let tok = match KEYWORDS.iter().find(|k| **k == text) {
                    Some(k) => Tok::Keyword(k),
                    None => Tok::Ident(text),
                };
                out.push(Token { tok, line: tl, col: tc, start, end: i });
            }
            other => {
                return Err(ParseError::new(line, col, format!("unexpected character `{other}`"), vec![]));
            }
        }
    }
    out.push(Token { tok: Tok::Eof, line, col, start: chars.len(), end: chars.len() });
    Ok(out)
}
