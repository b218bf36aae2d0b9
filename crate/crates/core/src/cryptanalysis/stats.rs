//! Letter statistics: counts, index of coincidence and chi-squared fit
//! against a reference frequency table.

use std::path::Path;

use crate::alphabet::{char_to_index, LetterIndex, ALPHABET_SIZE};
use crate::error::AnalysisError;

const ENGLISH_TABLE: &str = include_str!("../../data/english_frequencies.txt");

/// Relative frequency of each letter in a reference language.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyTable([f64; ALPHABET_SIZE as usize]);

impl FrequencyTable {
    /// The bundled English monogram table.
    pub fn english() -> Self {
        Self::parse(ENGLISH_TABLE).expect("bundled table is well formed")
    }

    /// Parses `<LETTER> <frequency>` lines. Blank lines and lines starting
    /// with `#` are ignored. Each letter must appear exactly once and every
    /// frequency must be positive; the values are normalized to sum to 1.
    pub fn parse(text: &str) -> Result<Self, AnalysisError> {
        let mut freqs = [None; ALPHABET_SIZE as usize];
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |reason: &str| AnalysisError::FrequencyTable {
                line: n + 1,
                reason: reason.to_owned(),
            };
            let mut parts = line.split_whitespace();
            let (Some(letter), Some(value), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(err("expected `<LETTER> <frequency>`"));
            };
            let mut chars = letter.chars();
            let letter = match (chars.next(), chars.next()) {
                (Some(c), None) => char_to_index(c).map_err(|_| err("not a letter"))?,
                _ => return Err(err("not a single letter")),
            };
            let value: f64 = value.parse().map_err(|_| err("frequency is not a number"))?;
            if !(value.is_finite() && value > 0.0) {
                return Err(err("frequency must be positive"));
            }
            let slot = &mut freqs[letter.value() as usize];
            if slot.is_some() {
                return Err(err("duplicate letter"));
            }
            *slot = Some(value);
        }
        let mut out = [0.0; ALPHABET_SIZE as usize];
        for (i, f) in freqs.iter().enumerate() {
            out[i] = f.ok_or_else(|| AnalysisError::FrequencyTable {
                line: 0,
                reason: format!("missing letter {}", (b'A' + i as u8) as char),
            })?;
        }
        let total: f64 = out.iter().sum();
        out.iter_mut().for_each(|f| *f /= total);
        Ok(FrequencyTable(out))
    }

    pub fn load(path: &Path) -> Result<Self, AnalysisError> {
        let text = std::fs::read_to_string(path).map_err(|e| AnalysisError::FrequencyTable {
            line: 0,
            reason: format!("{}: {e}", path.display()),
        })?;
        Self::parse(&text)
    }

    pub fn frequency(&self, letter: LetterIndex) -> f64 {
        self.0[letter.value() as usize]
    }
}

impl Default for FrequencyTable {
    fn default() -> Self {
        Self::english()
    }
}

pub fn letter_counts(letters: &[LetterIndex]) -> [usize; ALPHABET_SIZE as usize] {
    let mut counts = [0; ALPHABET_SIZE as usize];
    for l in letters {
        counts[l.value() as usize] += 1;
    }
    counts
}

/// Probability that two letters drawn without replacement are equal:
/// `sum f(f-1) / (N(N-1))`.
pub fn index_of_coincidence(letters: &[LetterIndex]) -> Result<f64, AnalysisError> {
    let n = letters.len();
    if n < 2 {
        return Err(AnalysisError::InsufficientData(format!(
            "index of coincidence needs at least 2 letters, got {n}"
        )));
    }
    let pairs: usize = letter_counts(letters).iter().map(|&f| f * f.saturating_sub(1)).sum();
    Ok(pairs as f64 / (n * (n - 1)) as f64)
}

/// Pearson chi-squared statistic of the observed letter counts against
/// `table`. Zero for an empty input.
pub fn chi_squared(letters: &[LetterIndex], table: &FrequencyTable) -> f64 {
    let n = letters.len() as f64;
    letter_counts(letters)
        .iter()
        .zip(LetterIndex::all())
        .map(|(&observed, letter)| {
            let expected = n * table.frequency(letter);
            let diff = observed as f64 - expected;
            diff * diff / expected
        })
        .sum::<f64>()
        .max(0.0)
}

/// [`chi_squared`] divided by the number of letters, so texts of different
/// lengths can share one threshold.
pub fn chi_squared_per_letter(letters: &[LetterIndex], table: &FrequencyTable) -> Option<f64> {
    (!letters.is_empty()).then(|| chi_squared(letters, table) / letters.len() as f64)
}
