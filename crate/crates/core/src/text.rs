//! Message text split into encryptable letters and passthrough characters.
//!
//! Only ASCII letters are encrypted. Every other character (spaces, digits,
//! punctuation, newlines, non-ASCII) is either carried through verbatim in its
//! original position or removed, depending on [`NonAlphaPolicy`]. Passthrough
//! characters never consume key material.

use std::fmt;
use std::str::FromStr;

use crate::alphabet::{char_to_index, LetterIndex};

/// What happens to characters outside `A-Z`/`a-z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum NonAlphaPolicy {
    /// Keep them in place, unencrypted.
    #[default]
    Preserve,
    /// Drop them before encryption.
    Strip,
}

/// How letter case is handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum CasePolicy {
    /// Everything is uppercased on input.
    #[default]
    Upper,
    /// Letters are processed uppercase, then the original case is re-applied.
    Preserve,
}

/// The pair of text-normalization policies both parties must agree on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct TextPolicy {
    pub non_alpha: NonAlphaPolicy,
    pub case: CasePolicy,
}

impl TextPolicy {
    pub const fn new(non_alpha: NonAlphaPolicy, case: CasePolicy) -> Self {
        TextPolicy { non_alpha, case }
    }

    /// Two-letter wire tag: non-alpha policy (`P`/`S`) then case policy (`U`/`P`).
    pub fn tag(&self) -> &'static str {
        match (self.non_alpha, self.case) {
            (NonAlphaPolicy::Preserve, CasePolicy::Upper) => "PU",
            (NonAlphaPolicy::Preserve, CasePolicy::Preserve) => "PP",
            (NonAlphaPolicy::Strip, CasePolicy::Upper) => "SU",
            (NonAlphaPolicy::Strip, CasePolicy::Preserve) => "SP",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        let policy = match tag {
            "PU" => TextPolicy::new(NonAlphaPolicy::Preserve, CasePolicy::Upper),
            "PP" => TextPolicy::new(NonAlphaPolicy::Preserve, CasePolicy::Preserve),
            "SU" => TextPolicy::new(NonAlphaPolicy::Strip, CasePolicy::Upper),
            "SP" => TextPolicy::new(NonAlphaPolicy::Strip, CasePolicy::Preserve),
            _ => return None,
        };
        Some(policy)
    }
}

impl fmt::Display for TextPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for NonAlphaPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "preserve" => Ok(NonAlphaPolicy::Preserve),
            "strip" => Ok(NonAlphaPolicy::Strip),
            other => Err(format!("unknown non-alpha policy {other:?} (expected preserve|strip)")),
        }
    }
}

impl FromStr for CasePolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "upper" => Ok(CasePolicy::Upper),
            "preserve" => Ok(CasePolicy::Preserve),
            other => Err(format!("unknown case policy {other:?} (expected upper|preserve)")),
        }
    }
}

/// Marker for one character position of the raw text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Slot {
    /// An encryptable letter, rendered uppercase.
    Upper,
    /// An encryptable letter, rendered lowercase.
    Lower,
    /// A character carried through unchanged.
    Passthrough(char),
}

impl Slot {
    pub fn is_letter(&self) -> bool {
        !matches!(self, Slot::Passthrough(_))
    }
}

/// Text as seen by the cipher: the letters in order plus a mask telling where
/// they sit among the passthrough characters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct MessageText {
    raw: String,
    letters: Vec<LetterIndex>,
    mask: Vec<Slot>,
}

impl MessageText {
    /// Normalizes `input` under `policy`.
    pub fn parse(input: &str, policy: TextPolicy) -> Self {
        let mut letters = Vec::new();
        let mut mask = Vec::new();
        for c in input.chars() {
            match char_to_index(c) {
                Ok(letter) => {
                    letters.push(letter);
                    mask.push(match policy.case {
                        CasePolicy::Preserve if c.is_ascii_lowercase() => Slot::Lower,
                        _ => Slot::Upper,
                    });
                }
                Err(_) => {
                    if policy.non_alpha == NonAlphaPolicy::Preserve {
                        mask.push(Slot::Passthrough(c));
                    }
                }
            }
        }
        // the mask was built from valid letters, so this cannot fail
        Self::from_parts(letters, mask).expect("letter count matches mask")
    }

    /// Parses with the default policy (preserve non-letters, uppercase).
    pub fn new(input: &str) -> Self {
        Self::parse(input, TextPolicy::default())
    }

    /// Reassembles a text from letters and a mask. Returns `None` when the
    /// number of letter slots differs from `letters.len()`.
    pub fn from_parts(letters: Vec<LetterIndex>, mask: Vec<Slot>) -> Option<Self> {
        if mask.iter().filter(|s| s.is_letter()).count() != letters.len() {
            return None;
        }
        let mut next = letters.iter();
        let raw = mask
            .iter()
            .map(|slot| match slot {
                Slot::Upper => next.next().unwrap().to_char(),
                Slot::Lower => next.next().unwrap().to_char().to_ascii_lowercase(),
                Slot::Passthrough(c) => *c,
            })
            .collect();
        Some(MessageText { raw, letters, mask })
    }

    /// Returns a text with the same mask and new letters.
    pub(crate) fn with_letters(&self, letters: Vec<LetterIndex>) -> Self {
        debug_assert_eq!(letters.len(), self.letters.len());
        Self::from_parts(letters, self.mask.clone()).expect("same letter count")
    }

    pub fn as_str(&self) -> &str {
        &self.raw
    }

    pub fn letters(&self) -> &[LetterIndex] {
        &self.letters
    }

    pub fn mask(&self) -> &[Slot] {
        &self.mask
    }

    /// Number of encryptable positions.
    pub fn letter_count(&self) -> usize {
        self.letters.len()
    }

    pub fn into_string(self) -> String {
        self.raw
    }
}

impl fmt::Display for MessageText {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.raw)
    }
}
