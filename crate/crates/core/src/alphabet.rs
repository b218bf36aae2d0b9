//! The 26-letter alphabet: `A` is index 0, `Z` is index 25.

use std::fmt;

use crate::error::CipherError;

/// Number of symbols in the alphabet.
pub const ALPHABET_SIZE: u8 = 26;

/// A letter of the alphabet as its index in `0..26`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LetterIndex(u8);

impl LetterIndex {
    pub const A: LetterIndex = LetterIndex(0);

    /// Builds an index, rejecting values outside `0..26`.
    pub fn new(value: u8) -> Result<Self, CipherError> {
        if value < ALPHABET_SIZE {
            Ok(LetterIndex(value))
        } else {
            Err(CipherError::IndexOutOfRange(value as u32))
        }
    }

    /// Reduces any integer into the alphabet.
    pub fn wrapping(value: i64) -> Self {
        LetterIndex(value.rem_euclid(ALPHABET_SIZE as i64) as u8)
    }

    pub fn value(self) -> u8 {
        self.0
    }

    /// Shifts forward by `by` (the encryption direction).
    pub fn shift(self, by: LetterIndex) -> Self {
        LetterIndex((self.0 + by.0) % ALPHABET_SIZE)
    }

    /// Shifts backward by `by` (the decryption direction).
    pub fn unshift(self, by: LetterIndex) -> Self {
        LetterIndex((self.0 + ALPHABET_SIZE - by.0) % ALPHABET_SIZE)
    }

    pub fn to_char(self) -> char {
        (b'A' + self.0) as char
    }

    /// Iterates `A..=Z`.
    pub fn all() -> impl Iterator<Item = LetterIndex> {
        (0..ALPHABET_SIZE).map(LetterIndex)
    }
}

impl TryFrom<char> for LetterIndex {
    type Error = CipherError;

    fn try_from(c: char) -> Result<Self, Self::Error> {
        char_to_index(c)
    }
}

impl fmt::Display for LetterIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// Maps an ASCII letter of either case to its index.
pub fn char_to_index(c: char) -> Result<LetterIndex, CipherError> {
    if c.is_ascii_alphabetic() {
        Ok(LetterIndex(c.to_ascii_uppercase() as u8 - b'A'))
    } else {
        Err(CipherError::InvalidCharacter(c))
    }
}

/// Maps an index back to its uppercase letter.
pub fn index_to_char(index: LetterIndex) -> char {
    index.to_char()
}

/// Parses a run of letters such as a user key. Every character must be an
/// ASCII letter.
pub fn parse_letters(s: &str) -> Result<Vec<LetterIndex>, CipherError> {
    s.chars().map(char_to_index).collect()
}

/// Renders letters as an uppercase string.
pub fn letters_to_string(letters: &[LetterIndex]) -> String {
    letters.iter().map(|l| l.to_char()).collect()
}
