//! Concrete syntax.
//!
//! ```text
//! term  ::= '\' ident ':' aspect type '.' term | app
//! app   ::= atom+
//! atom  ::= numeral | '0b' bits | ident | 'rand' | 'S0' | 'S1' | 'P'
//!         | '(' term ')' | '<' term ',' term '>' | 'p1' atom | 'p2' atom
//!         | 'case' '[' type ']' app '{' 'zero' '->' term
//!               '|' 'even' '->' term '|' 'odd' '->' term '}'
//!         | 'rec' '[' type ']' '(' term ';' term ';' term ')'
//! type  ::= prod (('!->' | '~->') type)?
//! prod  ::= tatom ('*' prod)?
//! tatom ::= 'N' | '(' type ')'
//! aspect ::= '!' | '~'
//! ```
//!
//! `--` starts a comment running to the end of the line. Application is
//! left-associative, arrows and products are right-associative.

use crate::ast::{Aspect, NameHint, Term, Type};
use num_bigint::BigUint;
use num_traits::Num;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("parse error at {line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Lambda,
    Colon,
    Dot,
    Semi,
    Comma,
    Bar,
    Bang,
    Tilde,
    Star,
    ArrowModal,
    ArrowNonModal,
    BranchArrow,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    LAngle,
    RAngle,
    Num(BigUint),
    Ident(String),
    Kw(&'static str),
    Eof,
}

const KEYWORDS: &[&str] = &[
    "case", "rec", "zero", "even", "odd", "rand", "p1", "p2", "S0", "S1", "P", "N",
];

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            line: self.line,
            col: self.col,
            msg: msg.into(),
        })
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.src.get(self.pos).copied();
        if let Some(c) = c {
            self.pos += 1;
            if c == b'\n' {
                self.line += 1;
                self.col = 1;
            } else {
                self.col += 1;
            }
        }
        c
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn peek2(&self) -> Option<u8> {
        self.src.get(self.pos + 1).copied()
    }

    fn skip_trivia(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_whitespace() => {
                    self.bump();
                }
                Some(b'-') if self.peek2() == Some(b'-') => {
                    while let Some(c) = self.peek() {
                        if c == b'\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                _ => break,
            }
        }
    }

    fn next_tok(&mut self) -> Result<(Tok, usize, usize), ParseError> {
        self.skip_trivia();
        let (line, col) = (self.line, self.col);
        let tok = match self.peek() {
            None => Tok::Eof,
            Some(c) => match c {
                b'\\' => {
                    self.bump();
                    Tok::Lambda
                }
                b':' => {
                    self.bump();
                    Tok::Colon
                }
                b'.' => {
                    self.bump();
                    Tok::Dot
                }
                b';' => {
                    self.bump();
                    Tok::Semi
                }
                b',' => {
                    self.bump();
                    Tok::Comma
                }
                b'|' => {
                    self.bump();
                    Tok::Bar
                }
                b'*' => {
                    self.bump();
                    Tok::Star
                }
                b'(' => {
                    self.bump();
                    Tok::LParen
                }
                b')' => {
                    self.bump();
                    Tok::RParen
                }
                b'[' => {
                    self.bump();
                    Tok::LBracket
                }
                b']' => {
                    self.bump();
                    Tok::RBracket
                }
                b'{' => {
                    self.bump();
                    Tok::LBrace
                }
                b'}' => {
                    self.bump();
                    Tok::RBrace
                }
                b'<' => {
                    self.bump();
                    Tok::LAngle
                }
                b'>' => {
                    self.bump();
                    Tok::RAngle
                }
                b'!' => {
                    self.bump();
                    if self.peek() == Some(b'-') && self.peek2() == Some(b'>') {
                        self.bump();
                        self.bump();
                        Tok::ArrowModal
                    } else {
                        Tok::Bang
                    }
                }
                b'~' => {
                    self.bump();
                    if self.peek() == Some(b'-') && self.peek2() == Some(b'>') {
                        self.bump();
                        self.bump();
                        Tok::ArrowNonModal
                    } else {
                        Tok::Tilde
                    }
                }
                b'-' => {
                    self.bump();
                    if self.peek() == Some(b'>') {
                        self.bump();
                        Tok::BranchArrow
                    } else {
                        return self.err("expected '>' after '-'");
                    }
                }
                b'0' if self.peek2() == Some(b'b') => {
                    self.bump();
                    self.bump();
                    let start = self.pos;
                    while matches!(self.peek(), Some(b'0') | Some(b'1')) {
                        self.bump();
                    }
                    if self.pos == start {
                        return self.err("expected binary digits after '0b'");
                    }
                    let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                    Tok::Num(BigUint::from_str_radix(digits, 2).unwrap())
                }
                b'0'..=b'9' => {
                    let start = self.pos;
                    while matches!(self.peek(), Some(d) if d.is_ascii_digit()) {
                        self.bump();
                    }
                    let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                    Tok::Num(digits.parse().unwrap())
                }
                c if c.is_ascii_alphabetic() => {
                    let start = self.pos;
                    while matches!(self.peek(),
                        Some(d) if d.is_ascii_alphanumeric() || d == b'_' || d == b'\'')
                    {
                        self.bump();
                    }
                    let word = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                    match KEYWORDS.iter().find(|k| **k == word) {
                        Some(k) => Tok::Kw(k),
                        None => Tok::Ident(word.to_string()),
                    }
                }
                other => return self.err(format!("unexpected character '{}'", other as char)),
            },
        };
        Ok((tok, line, col))
    }
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    scope: Vec<String>,
}

pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(src)?;
    let t = p.term()?;
    p.expect(Tok::Eof, "end of input")?;
    Ok(t)
}

pub fn parse_type(src: &str) -> Result<Type, ParseError> {
    let mut p = Parser::new(src)?;
    let t = p.ty()?;
    p.expect(Tok::Eof, "end of input")?;
    Ok(t)
}

impl Parser {
    fn new(src: &str) -> Result<Parser, ParseError> {
        let mut lx = Lexer::new(src);
        let mut toks = Vec::new();
        loop {
            let t = lx.next_tok()?;
            let done = t.0 == Tok::Eof;
            toks.push(t);
            if done {
                break;
            }
        }
        Ok(Parser {
            toks,
            pos: 0,
            scope: Vec::new(),
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        let (_, line, col) = &self.toks[self.pos];
        Err(ParseError {
            line: *line,
            col: *col,
            msg: msg.into(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected {}", what))
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        if *self.peek() == Tok::Lambda {
            self.bump();
            let name = match self.bump() {
                Tok::Ident(n) => n,
                _ => return self.err("expected binder name"),
            };
            self.expect(Tok::Colon, "':' after binder name")?;
            let aspect = self.aspect()?;
            let ty = self.ty()?;
            self.expect(Tok::Dot, "'.' after binder type")?;
            self.scope.push(name.clone());
            let body = self.term()?;
            self.scope.pop();
            Ok(Term::Abs {
                hint: NameHint(name),
                aspect,
                ty,
                body: Box::new(body),
            })
        } else {
            self.app()
        }
    }

    fn aspect(&mut self) -> Result<Aspect, ParseError> {
        match self.bump() {
            Tok::Bang => Ok(Aspect::Modal),
            Tok::Tilde => Ok(Aspect::NonModal),
            _ => self.err("expected aspect '!' or '~'"),
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek(),
            Tok::Num(_)
                | Tok::Ident(_)
                | Tok::LParen
                | Tok::LAngle
                | Tok::Kw("rand")
                | Tok::Kw("S0")
                | Tok::Kw("S1")
                | Tok::Kw("P")
                | Tok::Kw("p1")
                | Tok::Kw("p2")
                | Tok::Kw("case")
                | Tok::Kw("rec")
        )
    }

    fn app(&mut self) -> Result<Term, ParseError> {
        if !self.starts_atom() {
            return self.err("expected a term");
        }
        let mut t = self.atom()?;
        while self.starts_atom() {
            let a = self.atom()?;
            t = Term::App(Box::new(t), Box::new(a));
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        match self.bump() {
            Tok::Num(n) => Ok(Term::Num(n)),
            Tok::Kw("rand") => Ok(Term::Rand),
            Tok::Kw("S0") => Ok(Term::S0),
            Tok::Kw("S1") => Ok(Term::S1),
            Tok::Kw("P") => Ok(Term::P),
            Tok::Ident(name) => {
                match self.scope.iter().rposition(|s| *s == name) {
                    Some(i) => Ok(Term::Var(self.scope.len() - 1 - i, NameHint(name))),
                    None => Ok(Term::Free(name)),
                }
            }
            Tok::LParen => {
                let t = self.term()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(t)
            }
            Tok::LAngle => {
                let l = self.term()?;
                self.expect(Tok::Comma, "',' in pair")?;
                let r = self.term()?;
                self.expect(Tok::RAngle, "'>' closing pair")?;
                Ok(Term::Pair(Box::new(l), Box::new(r)))
            }
            Tok::Kw("p1") => Ok(Term::Proj1(Box::new(self.atom()?))),
            Tok::Kw("p2") => Ok(Term::Proj2(Box::new(self.atom()?))),
            Tok::Kw("case") => {
                self.expect(Tok::LBracket, "'[' after case")?;
                let ty = self.ty()?;
                self.expect(Tok::RBracket, "']' after case type")?;
                let scrut = self.app()?;
                self.expect(Tok::LBrace, "'{' opening case branches")?;
                let zero = self.branch("zero")?;
                self.expect(Tok::Bar, "'|' between branches")?;
                let even = self.branch("even")?;
                self.expect(Tok::Bar, "'|' between branches")?;
                let odd = self.branch("odd")?;
                self.expect(Tok::RBrace, "'}' closing case branches")?;
                Ok(Term::Case {
                    ty,
                    scrut: Box::new(scrut),
                    zero: Box::new(zero),
                    even: Box::new(even),
                    odd: Box::new(odd),
                })
            }
            Tok::Kw("rec") => {
                self.expect(Tok::LBracket, "'[' after rec")?;
                let ty = self.ty()?;
                self.expect(Tok::RBracket, "']' after rec type")?;
                self.expect(Tok::LParen, "'(' after rec type")?;
                let arg = self.term()?;
                self.expect(Tok::Semi, "';' after rec argument")?;
                let base = self.term()?;
                self.expect(Tok::Semi, "';' after rec base")?;
                let step = self.term()?;
                self.expect(Tok::RParen, "')' closing rec")?;
                Ok(Term::Rec {
                    ty,
                    arg: Box::new(arg),
                    base: Box::new(base),
                    step: Box::new(step),
                })
            }
            _ => self.err("expected a term"),
        }
    }

    fn branch(&mut self, label: &'static str) -> Result<Term, ParseError> {
        self.expect(Tok::Kw(label), label)?;
        self.expect(Tok::BranchArrow, "'->' after branch label")?;
        self.term()
    }

    fn ty(&mut self) -> Result<Type, ParseError> {
        let lhs = self.ty_prod()?;
        match self.peek() {
            Tok::ArrowModal => {
                self.bump();
                Ok(Type::arrow(Aspect::Modal, lhs, self.ty()?))
            }
            Tok::ArrowNonModal => {
                self.bump();
                Ok(Type::arrow(Aspect::NonModal, lhs, self.ty()?))
            }
            _ => Ok(lhs),
        }
    }

    fn ty_prod(&mut self) -> Result<Type, ParseError> {
        let lhs = self.ty_atom()?;
        if *self.peek() == Tok::Star {
            self.bump();
            Ok(Type::prod(lhs, self.ty_prod()?))
        } else {
            Ok(lhs)
        }
    }

    fn ty_atom(&mut self) -> Result<Type, ParseError> {
        match self.bump() {
            Tok::Kw("N") => Ok(Type::Nat),
            Tok::LParen => {
                let t = self.ty()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(t)
            }
            _ => self.err("expected a type"),
        }
    }
}
