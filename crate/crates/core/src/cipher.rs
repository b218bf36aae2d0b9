//! Vigenère encryption and decryption as addition and subtraction mod 26.

use crate::alphabet::LetterIndex;
use crate::error::CipherError;
use crate::key::KeyStream;
use crate::text::MessageText;

fn check_len(text: &MessageText, key: &KeyStream) -> Result<(), CipherError> {
    if key.len() != text.letter_count() {
        return Err(CipherError::KeyLengthMismatch {
            expected: text.letter_count(),
            actual: key.len(),
        });
    }
    Ok(())
}

fn apply(
    text: &MessageText,
    key: &KeyStream,
    op: impl Fn(LetterIndex, LetterIndex) -> LetterIndex,
) -> Result<MessageText, CipherError> {
    check_len(text, key)?;
    let letters = text
        .letters()
        .iter()
        .zip(key.letters())
        .map(|(&t, &k)| op(t, k))
        .collect();
    Ok(text.with_letters(letters))
}

/// `C_i = (P_i + K_i) mod 26` for every letter position; passthrough
/// characters are copied and consume no key letter.
pub fn encrypt(plaintext: &MessageText, key: &KeyStream) -> Result<MessageText, CipherError> {
    apply(plaintext, key, LetterIndex::shift)
}

/// `P_i = (C_i - K_i) mod 26`, the inverse of [`encrypt`].
pub fn decrypt(ciphertext: &MessageText, key: &KeyStream) -> Result<MessageText, CipherError> {
    apply(ciphertext, key, LetterIndex::unshift)
}
