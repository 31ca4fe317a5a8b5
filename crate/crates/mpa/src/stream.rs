//! Finite message streams and the operations defined on them.
//!
//! A [`Character`] names an equivalence class of messages; a [`Stream`] is a
//! finite sequence of characters. Streams carry automaton inputs and outputs
//! and support concatenation, filtering, head/tail access and the prefix
//! order. Infinite streams are never materialized: every semantic question
//! asked in this crate is depth-bounded, so finite prefixes suffice.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Rejected token text, with the reason.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TokenError {
    #[error("empty token")]
    Empty,
    #[error("token {0:?} contains whitespace")]
    Whitespace(String),
    #[error("token {0:?} contains reserved text {1:?}")]
    Reserved(String, &'static str),
}

/// Reserved substrings that may not appear inside a token. `/` and `->`
/// separate fields of the text format, `#` starts a comment.
const RESERVED: [&str; 3] = ["/", "->", "#"];

/// Validates the shared token shape used by character names, state ids and
/// automaton names: nonempty, no whitespace, none of [`RESERVED`].
pub(crate) fn check_token(text: &str) -> Result<(), TokenError> {
    if text.is_empty() {
        return Err(TokenError::Empty);
    }
    if text.chars().any(char::is_whitespace) {
        return Err(TokenError::Whitespace(text.to_owned()));
    }
    for reserved in RESERVED {
        if text.contains(reserved) {
            return Err(TokenError::Reserved(text.to_owned(), reserved));
        }
    }
    Ok(())
}

/// One input/output character: a named equivalence class of messages.
///
/// Characters are equal exactly when their tokens are equal, and order
/// lexicographically by token. Message content is abstracted away entirely.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Character(String);

impl Character {
    pub fn new(token: impl Into<String>) -> Result<Self, TokenError> {
        let token = token.into();
        check_token(&token)?;
        Ok(Character(token))
    }

    pub fn token(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for Character {
    type Err = TokenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Character::new(s)
    }
}

/// Raised by [`Stream::first`] and [`Stream::rest`] on the empty stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("the empty stream has no first element")]
pub struct EmptyStreamError;

/// A finite sequence of characters. The empty stream is `Stream::default()`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Stream(Vec<Character>);

impl Stream {
    pub fn new(items: Vec<Character>) -> Self {
        Stream(items)
    }

    pub fn empty() -> Self {
        Stream(Vec::new())
    }

    /// Number of characters in the stream.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn items(&self) -> &[Character] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Character> {
        self.0.iter()
    }

    /// Concatenation: the characters of `self` followed by those of `other`.
    pub fn concat(&self, other: &Stream) -> Stream {
        let mut items = Vec::with_capacity(self.0.len() + other.0.len());
        items.extend_from_slice(&self.0);
        items.extend_from_slice(&other.0);
        Stream(items)
    }

    /// `self` extended by one character.
    pub fn push(&self, item: Character) -> Stream {
        let mut items = self.0.clone();
        items.push(item);
        Stream(items)
    }

    /// The subsequence of characters contained in `keep`, order preserved.
    pub fn filtered<'a, K>(&self, keep: K) -> Stream
    where
        K: IntoIterator<Item = &'a Character>,
    {
        let keep: Vec<&Character> = keep.into_iter().collect();
        Stream(
            self.0
                .iter()
                .filter(|item| keep.contains(item))
                .cloned()
                .collect(),
        )
    }

    /// First character; undefined (an error) on the empty stream.
    pub fn first(&self) -> Result<&Character, EmptyStreamError> {
        self.0.first().ok_or(EmptyStreamError)
    }

    /// Everything after the first character; an error on the empty stream.
    pub fn rest(&self) -> Result<Stream, EmptyStreamError> {
        if self.0.is_empty() {
            return Err(EmptyStreamError);
        }
        Ok(Stream(self.0[1..].to_vec()))
    }

    /// Prefix order: true iff some `u` satisfies `self ^ u == other`.
    pub fn is_prefix_of(&self, other: &Stream) -> bool {
        other.0.len() >= self.0.len() && other.0[..self.0.len()] == self.0[..]
    }
}

impl FromIterator<Character> for Stream {
    fn from_iter<I: IntoIterator<Item = Character>>(iter: I) -> Self {
        Stream(iter.into_iter().collect())
    }
}

impl IntoIterator for Stream {
    type Item = Character;
    type IntoIter = std::vec::IntoIter<Character>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

impl<'a> IntoIterator for &'a Stream {
    type Item = &'a Character;
    type IntoIter = std::slice::Iter<'a, Character>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Streams serialize as whitespace-separated tokens; the empty stream is the
/// empty token sequence.
impl fmt::Display for Stream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, item) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{item}")?;
        }
        Ok(())
    }
}

impl FromStr for Stream {
    type Err = TokenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.split_whitespace().map(Character::new).collect()
    }
}
