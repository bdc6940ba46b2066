use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Index of a letter in an [`Alphabet`].
pub type Letter = usize;
/// A finite word as a sequence of letter indices.
pub type Word = Vec<Letter>;

/// An ordered set of named letters.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Alphabet(Arc<[String]>);

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Alphabet{:?}", &*self.0)
    }
}

impl Alphabet {
    pub fn new<I, S>(names: I) -> Result<Alphabet>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() || n.chars().any(char::is_whitespace) || n == "_" || n.contains(':') {
                return Err(Error::Precondition(format!("invalid letter name `{n}`")));
            }
            if names[..i].contains(n) {
                return Err(Error::Precondition(format!("duplicate letter `{n}`")));
            }
        }
        Ok(Alphabet(names.into()))
    }

    /// Single-character letters taken from a string, e.g. `"ab"`.
    pub fn from_chars(s: &str) -> Alphabet {
        Alphabet::new(s.chars().map(String::from)).expect("distinct characters")
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn name(&self, a: Letter) -> &str {
        &self.0[a]
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index(&self, name: &str) -> Option<Letter> {
        self.0.iter().position(|n| n == name)
    }

    pub fn letters(&self) -> std::ops::Range<Letter> {
        0..self.len()
    }

    fn single_char(&self) -> bool {
        self.0.iter().all(|n| n.chars().count() == 1)
    }

    /// Parses a word written as concatenated single-character letters.
    pub fn parse_word(&self, s: &str) -> Result<Word> {
        if !self.single_char() {
            return Err(Error::Precondition(
                "words can only be spelled over single-character alphabets".into(),
            ));
        }
        s.chars()
            .map(|c| {
                let mut buf = [0u8; 4];
                self.index(c.encode_utf8(&mut buf))
                    .ok_or_else(|| Error::AlphabetMismatch(format!("letter `{c}` not in alphabet")))
            })
            .collect()
    }

    /// Spells a word; letters with longer names are separated by dots.
    pub fn format_word(&self, w: &[Letter]) -> String {
        let sep = if self.single_char() { "" } else { "." };
        w.iter().map(|&a| self.name(a)).collect::<Vec<_>>().join(sep)
    }
}
