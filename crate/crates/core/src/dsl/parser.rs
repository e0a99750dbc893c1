//! Recursive-descent parser producing the statement list. One token of
//! lookahead decides every branch; see `docs/grammar.md`.

use num_bigint::BigInt;

use super::lexer::{Tok, Token};
use super::ParseError;

#[derive(Clone, Debug, PartialEq)]
pub enum ExprKind {
    Int(BigInt),
    Name(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug)]
pub struct Name {
    pub text: String,
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug)]
pub struct MapEntry {
    pub gen: Name,
    pub image: Expr,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Section {
    Sigma,
    SigmaInv,
    Delta,
}

#[derive(Clone, Debug)]
pub struct GenDecl {
    pub name: Name,
    pub degree: u32,
    /// `None` when no block or an empty block was given.
    pub sections: Option<Vec<(Section, Name, Vec<MapEntry>)>>,
}

#[derive(Clone, Debug)]
pub enum RealizationStmt {
    Gen(GenDecl),
    Maps(Vec<MapEntry>),
    Inverse(Vec<MapEntry>),
}

#[derive(Clone, Debug)]
pub enum Stmt {
    Field(Name),
    Param(Vec<Name>),
    Algebraic { name: Name, lhs: Name, power: u32, rhs: Expr },
    Let { name: Name, value: Expr },
    Bind { name: Name, value: Expr },
    Graded(bool),
    Gen(GenDecl),
    ExpectNakayama(Vec<MapEntry>),
    ExpectCalabiYau(bool),
    ExpectDimension(usize),
    Realization { at: Name, body: Vec<RealizationStmt> },
    Relation { name: Name, value: Expr },
    Check { nonzero: bool, value: Expr, text: String },
}

pub struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    src: &'a [char],
}

type PResult<T> = Result<T, ParseError>;

const STMT_START: &[&str] = &[
    "`field`",
    "`param`",
    "`algebraic`",
    "`let`",
    "`bind`",
    "`graded`",
    "`gen`",
    "`expect`",
    "`realization`",
    "`relation`",
    "`check`",
];

impl<'a> Parser<'a> {
    pub fn new(toks: Vec<Token>, src: &'a [char]) -> Self {
        Parser { toks, pos: 0, src }
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn here(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, msg: impl Into<String>, expected: &[&str]) -> PResult<T> {
        let t = self.here();
        Err(ParseError::new(t.line, t.col, msg, expected.iter().map(|s| s.to_string()).collect()))
    }

    fn unexpected<T>(&self, expected: &[&str]) -> PResult<T> {
        self.error(format!("unexpected {}", self.peek().describe()), expected)
    }

    fn expect(&mut self, tok: Tok, label: &str) -> PResult<Token> {
        if *self.peek() == tok {
            Ok(self.bump())
        } else {
            self.unexpected(&[label])
        }
    }

    fn keyword(&mut self, k: &str) -> PResult<Token> {
        if matches!(self.peek(), Tok::Keyword(w) if *w == k) {
            Ok(self.bump())
        } else {
            self.unexpected(&[&format!("`{k}`")])
        }
    }

    fn at_keyword(&self, k: &str) -> bool {
        matches!(self.peek(), Tok::Keyword(w) if *w == k)
    }

    fn name(&mut self) -> PResult<Name> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let t = self.bump();
                Ok(Name { text: s, line: t.line, col: t.col })
            }
            Tok::Keyword(k) => self.error(format!("`{k}` is a reserved word"), &["identifier"]),
            _ => self.unexpected(&["identifier"]),
        }
    }

    fn small_int(&mut self) -> PResult<u64> {
        match self.peek().clone() {
            Tok::Int(n) => {
                let v: Option<u64> = n.try_into().ok();
                match v {
                    Some(v) if v <= u32::MAX as u64 => {
                        self.bump();
                        Ok(v)
                    }
                    _ => self.error("integer too large", &["small integer"]),
                }
            }
            _ => self.unexpected(&["integer"]),
        }
    }

    fn boolean(&mut self) -> PResult<bool> {
        if self.at_keyword("true") {
            self.bump();
            Ok(true)
        } else if self.at_keyword("false") {
            self.bump();
            Ok(false)
        } else {
            self.unexpected(&["`true`", "`false`"])
        }
    }

    pub fn file(&mut self) -> PResult<Vec<Stmt>> {
        let mut out = Vec::new();
        if *self.peek() == Tok::Eof {
            return self.error("empty tower specification", &["`gen`"]);
        }
        while *self.peek() != Tok::Eof {
            out.push(self.stmt()?);
        }
        Ok(out)
    }

    fn stmt(&mut self) -> PResult<Stmt> {
        let kw = match self.peek() {
            Tok::Keyword(k) => *k,
            _ => return self.unexpected(STMT_START),
        };
        match kw {
            "field" => {
                self.bump();
                Ok(Stmt::Field(self.name()?))
            }
            "param" => {
                self.bump();
                let mut names = vec![self.name()?];
                while matches!(self.peek(), Tok::Ident(_)) {
                    names.push(self.name()?);
                }
                Ok(Stmt::Param(names))
            }
            "algebraic" => {
                self.bump();
                let name = self.name()?;
                self.expect(Tok::Colon, "`:`")?;
                let lhs = self.name()?;
                self.expect(Tok::Caret, "`^`")?;
                let power = self.small_int()? as u32;
                self.expect(Tok::Eq, "`=`")?;
                let rhs = self.expr()?;
                Ok(Stmt::Algebraic { name, lhs, power, rhs })
            }
            "let" | "bind" | "relation" => {
                self.bump();
                let name = self.name()?;
                self.expect(Tok::Eq, "`=`")?;
                let value = self.expr()?;
                Ok(match kw {
                    "let" => Stmt::Let { name, value },
                    "bind" => Stmt::Bind { name, value },
                    _ => Stmt::Relation { name, value },
                })
            }
            "graded" => {
                self.bump();
                Ok(Stmt::Graded(self.boolean()?))
            }
            "gen" => Ok(Stmt::Gen(self.gen_decl()?)),
            "expect" => {
                self.bump();
                if self.at_keyword("nakayama") {
                    self.bump();
                    self.expect(Tok::LBrace, "`{`")?;
                    let entries = self.entries_until_brace()?;
                    Ok(Stmt::ExpectNakayama(entries))
                } else if self.at_keyword("calabi_yau") {
                    self.bump();
                    Ok(Stmt::ExpectCalabiYau(self.boolean()?))
                } else if self.at_keyword("dimension") {
                    self.bump();
                    Ok(Stmt::ExpectDimension(self.small_int()? as usize))
                } else {
                    self.unexpected(&["`nakayama`", "`calabi_yau`", "`dimension`"])
                }
            }
            "realization" => {
                let t = self.bump();
                let at = Name { text: "realization".into(), line: t.line, col: t.col };
                self.expect(Tok::LBrace, "`{`")?;
                let mut body = Vec::new();
                loop {
                    if *self.peek() == Tok::RBrace {
                        self.bump();
                        break;
                    }
                    if self.at_keyword("gen") {
                        body.push(RealizationStmt::Gen(self.gen_decl()?));
                    } else if self.at_keyword("maps") {
                        self.bump();
                        body.push(RealizationStmt::Maps(self.entry_list()?));
                    } else if self.at_keyword("inverse") {
                        self.bump();
                        body.push(RealizationStmt::Inverse(self.entry_list()?));
                    } else {
                        return self.unexpected(&["`gen`", "`maps`", "`inverse`", "`}`"]);
                    }
                }
                Ok(Stmt::Realization { at, body })
            }
            "check" => {
                self.bump();
                let nonzero = if self.at_keyword("zero") {
                    false
                } else if self.at_keyword("nonzero") {
                    true
                } else {
                    return self.unexpected(&["`zero`", "`nonzero`"]);
                };
                self.bump();
                let start = self.here().start;
                let value = self.expr()?;
                let end = self.toks[self.pos - 1].end;
                let text: String = self.src[start..end].iter().collect();
                Ok(Stmt::Check { nonzero, value, text })
            }
            _ => self.unexpected(STMT_START),
        }
    }

    fn gen_decl(&mut self) -> PResult<GenDecl> {
        self.keyword("gen")?;
        let name = self.name()?;
        self.keyword("deg")?;
        let degree = self.small_int()? as u32;
        if *self.peek() != Tok::LBrace {
            return Ok(GenDecl { name, degree, sections: None });
        }
        self.bump();
        let mut sections = Vec::new();
        loop {
            let kind = match self.peek() {
                Tok::RBrace => {
                    self.bump();
                    break;
                }
                Tok::Keyword("sigma") => Section::Sigma,
                Tok::Keyword("sigma_inv") => Section::SigmaInv,
                Tok::Keyword("delta") => Section::Delta,
                _ => return self.unexpected(&["`sigma`", "`sigma_inv`", "`delta`", "`}`"]),
            };
            let t = self.bump();
            let label = Name { text: format!("{kind:?}"), line: t.line, col: t.col };
            self.expect(Tok::Colon, "`:`")?;
            let mut entries = Vec::new();
            // entries separated by `;`; a section ends at the next section keyword or `}`
            while matches!(self.peek(), Tok::Ident(_)) {
                entries.push(self.entry()?);
                if *self.peek() == Tok::Semi {
                    self.bump();
                } else {
                    break;
                }
            }
            sections.push((kind, label, entries));
        }
        let sections = if sections.is_empty() { None } else { Some(sections) };
        Ok(GenDecl { name, degree, sections })
    }

    fn entry(&mut self) -> PResult<MapEntry> {
        let gen = self.name()?;
        self.expect(Tok::Arrow, "`->`")?;
        let image = self.expr()?;
        Ok(MapEntry { gen, image })
    }

    /// `entry (';' entry)*` without braces.
    fn entry_list(&mut self) -> PResult<Vec<MapEntry>> {
        let mut out = vec![self.entry()?];
        while *self.peek() == Tok::Semi {
            self.bump();
            if !matches!(self.peek(), Tok::Ident(_)) {
                break;
            }
            out.push(self.entry()?);
        }
        Ok(out)
    }

    fn entries_until_brace(&mut self) -> PResult<Vec<MapEntry>> {
        let mut out = Vec::new();
        loop {
            match self.peek() {
                Tok::RBrace => {
                    self.bump();
                    return Ok(out);
                }
                Tok::Ident(_) => {
                    out.push(self.entry()?);
                    match self.peek() {
                        Tok::Semi => {
                            self.bump();
                        }
                        Tok::RBrace => {}
                        _ => return self.unexpected(&["`;`", "`}`"]),
                    }
                }
                _ => return self.unexpected(&["identifier", "`}`"]),
            }
        }
    }

    pub fn expr(&mut self) -> PResult<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = self.peek().clone();
            if op != Tok::Plus && op != Tok::Minus {
                return Ok(lhs);
            }
            let t = self.bump();
            let rhs = self.term()?;
            let kind = if op == Tok::Plus {
                ExprKind::Add(Box::new(lhs), Box::new(rhs))
            } else {
                ExprKind::Sub(Box::new(lhs), Box::new(rhs))
            };
            lhs = Expr { kind, line: t.line, col: t.col };
        }
    }

    fn term(&mut self) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = self.peek().clone();
            if op != Tok::Star && op != Tok::Slash {
                return Ok(lhs);
            }
            let t = self.bump();
            let rhs = self.unary()?;
            let kind = if op == Tok::Star {
                ExprKind::Mul(Box::new(lhs), Box::new(rhs))
            } else {
                ExprKind::Div(Box::new(lhs), Box::new(rhs))
            };
            lhs = Expr { kind, line: t.line, col: t.col };
        }
    }

    fn unary(&mut self) -> PResult<Expr> {
        if *self.peek() == Tok::Minus {
            let t = self.bump();
            let inner = self.unary()?;
            return Ok(Expr { kind: ExprKind::Neg(Box::new(inner)), line: t.line, col: t.col });
        }
        self.power()
    }

    fn power(&mut self) -> PResult<Expr> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        let t = self.bump();
        let neg = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let e = self.small_int()? as i64;
        let e = if neg { -e } else { e };
        Ok(Expr { kind: ExprKind::Pow(Box::new(base), e), line: t.line, col: t.col })
    }

    fn atom(&mut self) -> PResult<Expr> {
        let t = self.here().clone();
        match t.tok {
            Tok::Int(n) => {
                self.bump();
                Ok(Expr { kind: ExprKind::Int(n), line: t.line, col: t.col })
            }
            Tok::Ident(s) => {
                self.bump();
                Ok(Expr { kind: ExprKind::Name(s), line: t.line, col: t.col })
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::Keyword(k) => self.error(format!("`{k}` is a reserved word"), &["number", "identifier", "`(`"]),
            _ => self.unexpected(&["number", "identifier", "`(`", "`-`"]),
        }
    }

    pub fn at_eof(&self) -> bool {
        *self.peek() == Tok::Eof
    }

    pub fn trailing_error<T>(&self) -> PResult<T> {
        self.unexpected(&["end of input"])
    }
}
