//! Textual class literals.
//!
//! Two grammars are accepted:
//!
//! * coefficient lists `a;b1,b2,..,br`, e.g. `3;1,1,1`;
//! * type patterns `(a0;m1^n1,m2^n2,..)`, e.g. `(6;3,2^7)`, expanded against
//!   an explicit number of points with multiplicities in descending order
//!   followed by zeros.
//!
//! Whitespace around tokens is ignored. Every integer must lie within
//! `[-MAX_COEFF, MAX_COEFF]` and pattern counts within `1..=8`, so parsed
//! classes can never overflow downstream arithmetic.

use std::fmt;

use thiserror::Error;

use crate::error::{Error, Result};
use crate::lattice::{PicardClass, Rank, TypePattern, MAX_COEFF, MAX_RANK};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("column {column}: {kind}")]
pub struct ParseError {
    /// One-based character column.
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("empty class literal")]
    Empty,
    #[error("expected {0}")]
    Expected(&'static str),
    #[error("integer outside [-{MAX_COEFF}, {MAX_COEFF}]")]
    OutOfRange,
    #[error("multiplicity must be nonzero")]
    ZeroMultiplicity,
    #[error("count must be in 1..={MAX_RANK}")]
    BadCount,
    #[error("more than {MAX_RANK} coefficients")]
    TooManyCoefficients,
    #[error("unexpected trailing input")]
    Trailing,
}

/// A parsed literal, not yet tied to a surface.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassLiteral {
    Coefficients { a: i64, b: Vec<i64> },
    Pattern(TypePattern),
}

impl ClassLiteral {
    /// Turns the literal into a class on `S_rank`.
    ///
    /// A coefficient list must have exactly `rank` entries unless `pad` is
    /// set, in which case shorter lists are zero-padded.
    pub fn resolve(&self, rank: Rank, pad: bool) -> Result<PicardClass> {
        match self {
            ClassLiteral::Coefficients { a, b } => {
                if b.len() == rank.get() || (pad && b.len() < rank.get()) {
                    let mut b = b.clone();
                    b.resize(rank.get(), 0);
                    PicardClass::with_rank(rank, *a, &b)
                } else {
                    Err(Error::LengthMismatch {
                        expected: rank.get(),
                        found: b.len(),
                    })
                }
            }
            ClassLiteral::Pattern(p) => p.to_class(rank),
        }
    }
}

impl fmt::Display for ClassLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassLiteral::Coefficients { a, b } => {
                write!(f, "{a};")?;
                for (i, x) in b.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{x}")?;
                }
                Ok(())
            }
            ClassLiteral::Pattern(p) => p.fmt(f),
        }
    }
}

/// Parses either literal grammar.
pub fn parse_literal(input: &str) -> Result<ClassLiteral, ParseError> {
    let mut p = Parser::new(input);
    p.skip_ws();
    let literal = match p.peek() {
        None => return Err(p.error(ParseErrorKind::Empty)),
        Some('(') => {
            p.bump();
            let pattern = p.pattern_body()?;
            p.expect(')', "')'")?;
            ClassLiteral::Pattern(pattern)
        }
        Some(_) => {
            let a = p.integer()?;
            p.expect(';', "';'")?;
            let mut b = vec![p.integer()?];
            while p.eat(',') {
                if b.len() == MAX_RANK {
                    return Err(p.error(ParseErrorKind::TooManyCoefficients));
                }
                b.push(p.integer()?);
            }
            ClassLiteral::Coefficients { a, b }
        }
    };
    p.skip_ws();
    if p.peek().is_some() {
        return Err(p.error(ParseErrorKind::Trailing));
    }
    Ok(literal)
}

/// Parses a literal and resolves it on `S_rank`.
pub fn parse_class(input: &str, rank: Rank, pad: bool) -> Result<PicardClass> {
    parse_literal(input)?.resolve(rank, pad)
}

struct Parser<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    column: usize,
}

impl<'a> Parser<'a> {
    fn new(input: &'a str) -> Self {
        Parser {
            chars: input.char_indices().peekable(),
            column: 1,
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().map(|&(_, c)| c)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next().map(|(_, c)| c);
        if c.is_some() {
            self.column += 1;
        }
        c
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.bump();
        }
    }

    fn error(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            column: self.column,
            kind,
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char, what: &'static str) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(ParseErrorKind::Expected(what)))
        }
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.column;
        let negative = match self.peek() {
            Some('-') => {
                self.bump();
                true
            }
            Some('+') => {
                self.bump();
                false
            }
            _ => false,
        };
        let mut value: i64 = 0;
        let mut digits = 0;
        while let Some(d) = self.peek().and_then(|c| c.to_digit(10)) {
            self.bump();
            digits += 1;
            value = value.saturating_mul(10).saturating_add(d as i64);
        }
        if digits == 0 {
            return Err(self.error(ParseErrorKind::Expected("an integer")));
        }
        if value > MAX_COEFF {
            return Err(ParseError {
                column: start,
                kind: ParseErrorKind::OutOfRange,
            });
        }
        Ok(if negative { -value } else { value })
    }

    fn pattern_body(&mut self) -> Result<TypePattern, ParseError> {
        let a0 = self.integer()?;
        self.expect(';', "';'")?;
        let mut entries: Vec<(i64, usize)> = Vec::new();
        self.skip_ws();
        if self.peek() != Some(')') {
            loop {
                self.skip_ws();
                let column = self.column;
                let m = self.integer()?;
                if m == 0 {
                    return Err(ParseError {
                        column,
                        kind: ParseErrorKind::ZeroMultiplicity,
                    });
                }
                let n = if self.eat('^') {
                    self.skip_ws();
                    let column = self.column;
                    let n = self.integer()?;
                    if !(1..=MAX_RANK as i64).contains(&n) {
                        return Err(ParseError {
                            column,
                            kind: ParseErrorKind::BadCount,
                        });
                    }
                    n as usize
                } else {
                    1
                };
                entries.push((m, n));
                if entries.iter().map(|&(_, n)| n).sum::<usize>() > MAX_RANK {
                    return Err(ParseError {
                        column,
                        kind: ParseErrorKind::TooManyCoefficients,
                    });
                }
                if !self.eat(',') {
                    break;
                }
            }
        }
        entries.sort_by_key(|x| std::cmp::Reverse(x.0));
        let mut multiplicities: Vec<(i64, usize)> = Vec::new();
        for (m, n) in entries {
            match multiplicities.last_mut() {
                Some((pm, pn)) if *pm == m => *pn += n,
                _ => multiplicities.push((m, n)),
            }
        }
        Ok(TypePattern { a0, multiplicities })
    }
}
