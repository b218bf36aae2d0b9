//! Key extension: stretching a short user key to the length of the text.
//!
//! [`KeyMode::StandardRepeat`] is the classical Vigenère behavior, cycling the
//! user key. [`KeyMode::Generated`] keeps the user key as the initial fill and
//! then produces each further letter from the previous one:
//!
//! ```text
//! key[i] = (key[i-1] + i) mod 26        for i >= len(user_key), 0-based
//! ```
//!
//! so `MYCODE` stretched to ten letters becomes `MYCODEKRZI` instead of
//! `MYCODEMYCO`.

use std::fmt;
use std::str::FromStr;

use crate::alphabet::{letters_to_string, parse_letters, LetterIndex};
use crate::error::CipherError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum KeyMode {
    /// Repeat the user key.
    StandardRepeat,
    /// Extend the user key with the keystream recurrence.
    #[default]
    Generated,
}

impl KeyMode {
    /// Three-letter wire tag.
    pub fn tag(&self) -> &'static str {
        match self {
            KeyMode::StandardRepeat => "STD",
            KeyMode::Generated => "GEN",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "STD" => Some(KeyMode::StandardRepeat),
            "GEN" => Some(KeyMode::Generated),
            _ => None,
        }
    }
}

impl fmt::Display for KeyMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KeyMode::StandardRepeat => "standard",
            KeyMode::Generated => "generated",
        })
    }
}

impl FromStr for KeyMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "standard" => Ok(KeyMode::StandardRepeat),
            "generated" => Ok(KeyMode::Generated),
            other => Err(format!("unknown key mode {other:?} (expected standard|generated)")),
        }
    }
}

/// A validated, non-empty user key.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UserKey(Vec<LetterIndex>);

impl UserKey {
    /// Parses a key. Letters of either case are accepted; anything else is
    /// rejected.
    pub fn parse(key: &str) -> Result<Self, CipherError> {
        Self::from_letters(parse_letters(key)?)
    }

    pub fn from_letters(letters: Vec<LetterIndex>) -> Result<Self, CipherError> {
        if letters.is_empty() {
            Err(CipherError::EmptyKey)
        } else {
            Ok(UserKey(letters))
        }
    }

    pub fn letters(&self) -> &[LetterIndex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Stretches (or truncates) this key to `target_len` letters.
    pub fn extend(&self, target_len: usize, mode: KeyMode) -> KeyStream {
        let user = &self.0;
        let mut extended: Vec<LetterIndex> = user.iter().copied().take(target_len).collect();
        extended.reserve(target_len.saturating_sub(user.len()));
        for i in user.len()..target_len {
            let next = match mode {
                KeyMode::StandardRepeat => user[i % user.len()],
                KeyMode::Generated => LetterIndex::wrapping(extended[i - 1].value() as i64 + i as i64),
            };
            extended.push(next);
        }
        KeyStream {
            user_key: self.clone(),
            extended,
            mode,
        }
    }
}

// Keys are secrets; keep them out of debug logs.
impl fmt::Debug for UserKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UserKey(<{} letters>)", self.0.len())
    }
}

impl FromStr for UserKey {
    type Err = CipherError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        UserKey::parse(s)
    }
}

/// Key material stretched to the letter count of a particular text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyStream {
    user_key: UserKey,
    extended: Vec<LetterIndex>,
    mode: KeyMode,
}

impl KeyStream {
    pub fn user_key(&self) -> &UserKey {
        &self.user_key
    }

    pub fn letters(&self) -> &[LetterIndex] {
        &self.extended
    }

    pub fn mode(&self) -> KeyMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.extended.len()
    }

    pub fn is_empty(&self) -> bool {
        self.extended.is_empty()
    }
}

impl fmt::Display for KeyStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&letters_to_string(&self.extended))
    }
}

/// Parses `user_key` and stretches it to `target_len` letters.
///
/// When `target_len` does not exceed the key length the leading letters of
/// the key are returned unchanged in both modes. A `target_len` of zero gives
/// an empty stream, which is what a text without letters needs.
pub fn extend_key(user_key: &str, target_len: usize, mode: KeyMode) -> Result<KeyStream, CipherError> {
    Ok(UserKey::parse(user_key)?.extend(target_len, mode))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gen(key: &str, n: usize) -> String {
        extend_key(key, n, KeyMode::Generated).unwrap().to_string()
    }

    fn std(key: &str, n: usize) -> String {
        extend_key(key, n, KeyMode::StandardRepeat).unwrap().to_string()
    }

    #[test]
    fn generated_examples() {
        assert_eq!(gen("MYCODE", 10), "MYCODEKRZI");
        assert_eq!(gen("KEY", 18), "KEYBFKQXFOYJVIWLBS");
        assert_eq!(gen("BUNG", 18), "BUNGKPVCKTDOANBQGX");
        assert_eq!(gen("MYCODE", 6), "MYCODE");
    }

    #[test]
    fn standard_examples() {
        assert_eq!(std("KEY", 18), "KEYKEYKEYKEYKEYKEY");
        assert_eq!(std("UP", 15), "UPUPUPUPUPUPUPU");
    }

    #[test]
    fn longer_key_is_truncated() {
        assert_eq!(gen("MYCODE", 3), "MYC");
        assert_eq!(std("MYCODE", 3), "MYC");
        assert_eq!(gen("MYCODE", 0), "");
    }

    #[test]
    fn lowercase_key_accepted() {
        assert_eq!(gen("mycode", 10), "MYCODEKRZI");
    }

    #[test]
    fn key_errors() {
        assert_eq!(extend_key("", 5, KeyMode::Generated), Err(CipherError::EmptyKey));
        assert_eq!(
            extend_key("KE Y", 5, KeyMode::Generated),
            Err(CipherError::InvalidCharacter(' '))
        );
    }

    #[test]
    fn debug_hides_key() {
        let k = UserKey::parse("SECRET").unwrap();
        assert!(!format!("{k:?}").contains("SECRET"));
    }

    #[test]
    fn tags() {
        assert_eq!(KeyMode::from_tag("GEN"), Some(KeyMode::Generated));
        assert_eq!(KeyMode::from_tag("STD"), Some(KeyMode::StandardRepeat));
        assert_eq!(KeyMode::from_tag("gen"), None);
        assert_eq!("standard".parse::<KeyMode>(), Ok(KeyMode::StandardRepeat));
    }
}
