use std::fmt;

use super::FiniteAutomaton;
use crate::alphabet::{Alphabet, Symbol, SymbolAlphabet};
use crate::error::{Error, Result};

/// Regular expressions over symbol indices.
///
/// Text syntax: `+` union, juxtaposition concatenation, postfix `*`,
/// parentheses, `()` for ε and `{}` for ∅. Symbol runs are split into
/// tokens by [`SymbolAlphabet::parse_word`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RegularExpression {
    Empty,
    Epsilon,
    Symbol(Symbol),
    Union(Box<RegularExpression>, Box<RegularExpression>),
    Concat(Box<RegularExpression>, Box<RegularExpression>),
    Star(Box<RegularExpression>),
}

impl RegularExpression {
    pub fn union(a: Self, b: Self) -> Self {
        RegularExpression::Union(Box::new(a), Box::new(b))
    }

    pub fn concat(a: Self, b: Self) -> Self {
        RegularExpression::Concat(Box::new(a), Box::new(b))
    }

    pub fn star(a: Self) -> Self {
        RegularExpression::Star(Box::new(a))
    }

    pub fn node_count(&self) -> usize {
        use RegularExpression::*;
        match self {
            Empty | Epsilon | Symbol(_) => 1,
            Union(a, b) | Concat(a, b) => 1 + a.node_count() + b.node_count(),
            Star(a) => 1 + a.node_count(),
        }
    }

    pub fn parse(alphabet: &SymbolAlphabet, text: &str) -> Result<Self> {
        let mut p = Parser { alphabet, text, pos: 0 };
        let r = p.union()?;
        p.skip_ws();
        if p.pos != text.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(r)
    }

    /// Thompson-style construction; the result has at most twice as many
    /// states as the expression has nodes.
    pub fn compile(&self, alphabet: Alphabet) -> Result<FiniteAutomaton> {
        use RegularExpression::*;
        match self {
            Empty => Ok(FiniteAutomaton::empty(alphabet)),
            Epsilon => Ok(FiniteAutomaton::epsilon(alphabet)),
            Symbol(s) => {
                if *s >= alphabet.len() {
                    return Err(Error::Validation(format!("symbol {s} outside alphabet {alphabet}")));
                }
                FiniteAutomaton::singleton(alphabet, &[*s])
            }
            Union(a, b) => a.compile(alphabet.clone())?.union(&b.compile(alphabet)?),
            Concat(a, b) => a.compile(alphabet.clone())?.concat(&b.compile(alphabet)?),
            Star(a) => a.compile(alphabet)?.star(),
        }
    }

    pub fn display<'a>(&'a self, alphabet: &'a SymbolAlphabet) -> impl fmt::Display + 'a {
        Shown { re: self, alphabet }
    }
}

struct Shown<'a> {
    re: &'a RegularExpression,
    alphabet: &'a SymbolAlphabet,
}

impl fmt::Display for Shown<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use RegularExpression::*;
        let sub = |re| Shown { re, alphabet: self.alphabet };
        match self.re {
            Empty => write!(f, "{{}}"),
            Epsilon => write!(f, "()"),
            Symbol(s) => write!(f, "{}", self.alphabet.token(*s)),
            Union(a, b) => write!(f, "({}+{})", sub(a), sub(b)),
            Concat(a, b) => write!(f, "({}.{})", sub(a), sub(b)),
            Star(a) => write!(f, "({})*", sub(a)),
        }
    }
}

struct Parser<'a> {
    alphabet: &'a SymbolAlphabet,
    text: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, reason: &str) -> Error {
        Error::Parse {
            input: self.text.to_string(),
            reason: format!("{reason} at offset {}", self.pos),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn union(&mut self) -> Result<RegularExpression> {
        let mut left = self.concat()?;
        loop {
            self.skip_ws();
            if self.peek() == Some('+') {
                self.pos += 1;
                let right = self.concat()?;
                left = RegularExpression::union(left, right);
            } else {
                return Ok(left);
            }
        }
    }

    fn concat(&mut self) -> Result<RegularExpression> {
        let mut parts: Vec<RegularExpression> = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                None | Some('+') | Some(')') => break,
                _ => parts.extend(self.starred()?),
            }
        }
        let mut it = parts.into_iter();
        let first = it.next().ok_or_else(|| self.error("empty operand (write `()` for ε)"))?;
        Ok(it.fold(first, RegularExpression::concat))
    }

    // A run of symbols yields several factors; a trailing `*` binds to the
    // last one only.
    fn starred(&mut self) -> Result<Vec<RegularExpression>> {
        let mut factors = self.atom()?;
        loop {
            self.skip_ws();
            if self.peek() == Some('*') {
                self.pos += 1;
                let last = factors.pop().expect("atom yields at least one factor");
                factors.push(RegularExpression::star(last));
            } else {
                return Ok(factors);
            }
        }
    }

    fn atom(&mut self) -> Result<Vec<RegularExpression>> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                self.skip_ws();
                if self.peek() == Some(')') {
                    self.pos += 1;
                    return Ok(vec![RegularExpression::Epsilon]);
                }
                let inner = self.union()?;
                self.skip_ws();
                if self.peek() != Some(')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(vec![inner])
            }
            Some('{') => {
                self.pos += 1;
                self.skip_ws();
                if self.peek() != Some('}') {
                    return Err(self.error("expected `}` after `{`"));
                }
                self.pos += 1;
                Ok(vec![RegularExpression::Empty])
            }
            Some(c) if "*+)}".contains(c) => Err(self.error(&format!("unexpected `{c}`"))),
            Some(_) => {
                let start = self.pos;
                while let Some(c) = self.peek() {
                    if c.is_whitespace() || "+*(){}".contains(c) {
                        break;
                    }
                    self.pos += c.len_utf8();
                }
                let run = &self.text[start..self.pos];
                let word = self.alphabet.parse_word(run).map_err(|e| match e {
                    Error::Parse { reason, .. } => Error::Validation(format!(
                        "regular expression `{}`: {reason}",
                        self.text
                    )),
                    other => other,
                })?;
                if word.is_empty() {
                    return Ok(vec![RegularExpression::Epsilon]);
                }
                Ok(word.into_iter().map(RegularExpression::Symbol).collect())
            }
            None => Err(self.error("unexpected end of expression")),
        }
    }
}
