//! Symbol alphabets and words.
//!
//! Symbols are dense indices into an ordered token list. Words are plain
//! vectors of such indices; their textual form concatenates tokens when the
//! token set is a prefix code and joins them with `.` otherwise.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{invalid, Error, Result};

/// Index of a token inside a [`SymbolAlphabet`].
pub type Symbol = usize;

/// A finite sequence of symbols. The empty vector is the empty word.
pub type Word = Vec<Symbol>;

/// Suffix marking the reversed (barred) copy of a direction token.
pub const BAR: char = '~';

/// Shared handle on an alphabet.
pub type Alphabet = Arc<SymbolAlphabet>;

/// An ordered, non-empty set of pairwise distinct tokens.
#[derive(Clone)]
pub struct SymbolAlphabet {
    tokens: Vec<String>,
    index: HashMap<String, Symbol>,
    concatenate: bool,
}

impl SymbolAlphabet {
    pub fn new<I, S>(tokens: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let tokens: Vec<String> = tokens.into_iter().map(Into::into).collect();
        if tokens.is_empty() {
            return invalid("alphabet must not be empty");
        }
        let mut index = HashMap::with_capacity(tokens.len());
        for (i, t) in tokens.iter().enumerate() {
            if t.is_empty() {
                return invalid("alphabet tokens must be non-empty");
            }
            if t.chars().any(char::is_whitespace) {
                return invalid(format!("token `{t}` contains whitespace"));
            }
            if t.chars().any(|c| "+*(){}".contains(c)) {
                return invalid(format!("token `{t}` contains a reserved character"));
            }
            if index.insert(t.clone(), i).is_some() {
                return invalid(format!("duplicate token `{t}`"));
            }
        }
        let concatenate = tokens
            .iter()
            .all(|t| !t.contains('.') && tokens.iter().all(|u| u == t || !u.starts_with(t.as_str())));
        Ok(SymbolAlphabet {
            tokens,
            index,
            concatenate,
        })
    }

    /// Convenience constructor returning a shared handle.
    pub fn shared<I, S>(tokens: I) -> Result<Alphabet>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::new(tokens).map(Arc::new)
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn token(&self, s: Symbol) -> &str {
        &self.tokens[s]
    }

    pub fn symbol(&self, token: &str) -> Option<Symbol> {
        self.index.get(token).copied()
    }

    pub fn contains(&self, token: &str) -> bool {
        self.index.contains_key(token)
    }

    pub fn symbols(&self) -> std::ops::Range<Symbol> {
        0..self.tokens.len()
    }

    /// Looks a token up, failing with a validation error when absent.
    pub fn require(&self, token: &str) -> Result<Symbol> {
        self.symbol(token)
            .ok_or_else(|| Error::Validation(format!("symbol `{token}` is not in alphabet {self}")))
    }

    /// Splits `text` into tokens by longest match; `.` separates tokens
    /// wherever no token starts. `""`, `ε` and `()` denote the empty word
    /// unless they are tokens themselves.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        if (text.is_empty() || text == "ε" || text == "()") && !self.contains(text) {
            return Ok(Vec::new());
        }
        let mut word = Vec::new();
        let mut rest = text;
        while !rest.is_empty() {
            let best = self
                .tokens
                .iter()
                .enumerate()
                .filter(|(_, t)| rest.starts_with(t.as_str()))
                .max_by_key(|(_, t)| t.len());
            match best {
                Some((sym, tok)) => {
                    word.push(sym);
                    rest = &rest[tok.len()..];
                }
                None if rest.starts_with('.') => rest = &rest[1..],
                None => {
                    return Err(Error::Parse {
                        input: text.to_string(),
                        reason: format!("no token of {self} matches at `{rest}`"),
                    })
                }
            }
        }
        Ok(word)
    }

    /// Canonical textual form; the empty word is `""`.
    pub fn format_word(&self, word: &[Symbol]) -> String {
        let sep = if self.concatenate { "" } else { "." };
        word.iter()
            .map(|&s| self.tokens[s].as_str())
            .collect::<Vec<_>>()
            .join(sep)
    }

    /// Human-readable form; the empty word is `ε`.
    pub fn display_word(&self, word: &[Symbol]) -> String {
        if word.is_empty() {
            "ε".to_string()
        } else {
            self.format_word(word)
        }
    }

    /// The alphabet `D ∪ D̄` of tree walks: every token followed by its
    /// barred copy (`A`, `A~`, `B`, `B~`, ...).
    pub fn with_bars(&self) -> Result<SymbolAlphabet> {
        let mut tokens = Vec::with_capacity(2 * self.len());
        for t in &self.tokens {
            if t.ends_with(BAR) {
                return invalid(format!("direction `{t}` already ends with `{BAR}`"));
            }
            tokens.push(t.clone());
            tokens.push(format!("{t}{BAR}"));
        }
        SymbolAlphabet::new(tokens)
    }
}

impl PartialEq for SymbolAlphabet {
    fn eq(&self, other: &Self) -> bool {
        self.tokens == other.tokens
    }
}

impl Eq for SymbolAlphabet {}

impl fmt::Debug for SymbolAlphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.tokens.iter()).finish()
    }
}

impl fmt::Display for SymbolAlphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.tokens.join(","))
    }
}

/// Splits a barred walk token into its direction and orientation.
pub fn split_bar(token: &str) -> (&str, bool) {
    match token.strip_suffix(BAR) {
        Some(base) => (base, true),
        None => (token, false),
    }
}

pub(crate) fn same_alphabet(a: &Alphabet, b: &Alphabet) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(Error::AlphabetMismatch(format!("{a} vs {b}")))
    }
}
