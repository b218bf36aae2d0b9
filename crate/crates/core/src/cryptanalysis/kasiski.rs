//! Kasiski examination: repeated n-grams, the distances between them, and
//! per-column shift recovery once a key length is chosen.

use std::collections::HashMap;
use std::ops::RangeInclusive;

use crate::alphabet::LetterIndex;
use crate::cryptanalysis::stats::{chi_squared, index_of_coincidence, FrequencyTable};
use crate::error::AnalysisError;

pub const DEFAULT_MIN_GRAM: usize = 3;
pub const DEFAULT_MAX_GRAM: usize = 5;
/// Key lengths considered by [`estimate_key_lengths`].
pub const KEY_LENGTH_RANGE: RangeInclusive<usize> = 2..=20;

/// One n-gram that occurs more than once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepeatFinding {
    pub gram: Vec<LetterIndex>,
    /// Letter offsets of every occurrence, strictly increasing.
    pub positions: Vec<usize>,
    /// Gaps between consecutive occurrences.
    pub distances: Vec<usize>,
}

/// A key length with its Kasiski score.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KeyLengthCandidate {
    pub length: usize,
    pub score: usize,
}

/// Reports every n-gram with `min_gram <= n <= max_gram` that occurs at
/// least twice. Overlapping occurrences count. Findings are ordered by gram
/// length, then by first position.
pub fn find_repeats(letters: &[LetterIndex], min_gram: usize, max_gram: usize) -> Vec<RepeatFinding> {
    let mut findings = Vec::new();
    for n in min_gram.max(1)..=max_gram {
        if letters.len() < n {
            break;
        }
        let mut seen: HashMap<&[LetterIndex], Vec<usize>> = HashMap::new();
        for (pos, gram) in letters.windows(n).enumerate() {
            seen.entry(gram).or_default().push(pos);
        }
        let mut repeated: Vec<RepeatFinding> = seen
            .into_iter()
            .filter(|(_, positions)| positions.len() > 1)
            .map(|(gram, positions)| RepeatFinding {
                gram: gram.to_vec(),
                distances: positions.windows(2).map(|w| w[1] - w[0]).collect(),
                positions,
            })
            .collect();
        repeated.sort_by_key(|f| f.positions[0]);
        findings.extend(repeated);
    }
    findings
}

/// Scores each length in [`KEY_LENGTH_RANGE`] by how many repeat distances
/// it divides, each distance weighted by the length of its gram. Only
/// lengths with a positive score are returned, highest score first, ties
/// going to the shorter length.
pub fn estimate_key_lengths(findings: &[RepeatFinding]) -> Vec<KeyLengthCandidate> {
    estimate_key_lengths_in(findings, KEY_LENGTH_RANGE)
}

pub fn estimate_key_lengths_in(findings: &[RepeatFinding], lengths: RangeInclusive<usize>) -> Vec<KeyLengthCandidate> {
    let mut ranked: Vec<KeyLengthCandidate> = lengths
        .filter(|&l| l > 0)
        .map(|length| {
            let score = findings
                .iter()
                .map(|f| f.gram.len() * f.distances.iter().filter(|&&d| d % length == 0).count())
                .sum();
            KeyLengthCandidate { length, score }
        })
        .filter(|c| c.score > 0)
        .collect();
    ranked.sort_by(|a, b| b.score.cmp(&a.score).then(a.length.cmp(&b.length)));
    ranked
}

/// Letters at positions `i, i + key_length, i + 2*key_length, ...`.
pub fn column(letters: &[LetterIndex], key_length: usize, i: usize) -> Vec<LetterIndex> {
    letters.iter().skip(i).step_by(key_length).copied().collect()
}

/// Mean index of coincidence over the `key_length` columns, or `None` when
/// some column has fewer than two letters.
pub fn average_column_ioc(letters: &[LetterIndex], key_length: usize) -> Option<f64> {
    if key_length == 0 {
        return None;
    }
    let mut total = 0.0;
    for i in 0..key_length {
        total += index_of_coincidence(&column(letters, key_length, i)).ok()?;
    }
    Some(total / key_length as f64)
}

/// Recovers a key of `key_length` letters against English frequencies.
pub fn recover_key(letters: &[LetterIndex], key_length: usize) -> Result<Vec<LetterIndex>, AnalysisError> {
    recover_key_with(letters, key_length, &FrequencyTable::english())
}

/// Splits the letters into `key_length` columns and, for each, picks the
/// shift whose decryption has the lowest chi-squared against `table`.
pub fn recover_key_with(
    letters: &[LetterIndex],
    key_length: usize,
    table: &FrequencyTable,
) -> Result<Vec<LetterIndex>, AnalysisError> {
    if key_length == 0 {
        return Err(AnalysisError::InsufficientData("key length must be at least 1".into()));
    }
    (0..key_length)
        .map(|i| {
            let col = column(letters, key_length, i);
            if col.is_empty() {
                return Err(AnalysisError::InsufficientData(format!(
                    "column {i} of {key_length} is empty ({} letters)",
                    letters.len()
                )));
            }
            Ok(best_shift(&col, table))
        })
        .collect()
}

fn best_shift(col: &[LetterIndex], table: &FrequencyTable) -> LetterIndex {
    let mut best = (f64::INFINITY, LetterIndex::A);
    let mut shifted = Vec::with_capacity(col.len());
    for shift in LetterIndex::all() {
        shifted.clear();
        shifted.extend(col.iter().map(|c| c.unshift(shift)));
        let score = chi_squared(&shifted, table);
        if score < best.0 {
            best = (score, shift);
        }
    }
    best.1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::{letters_to_string, parse_letters};

    fn l(s: &str) -> Vec<LetterIndex> {
        parse_letters(s).unwrap()
    }

    #[test]
    fn standard_ciphertext_repeats_at_twelve() {
        let findings = find_repeats(&l("DLCPEKSPWKRBDLCPET"), 3, 5);
        let grams: Vec<String> = findings.iter().map(|f| letters_to_string(&f.gram)).collect();
        for g in ["DLC", "LCP", "CPE", "DLCP", "LCPE", "DLCPE"] {
            assert!(grams.contains(&g.to_string()), "{g} missing from {grams:?}");
        }
        assert_eq!(findings.len(), 6);
        let dlc = findings.iter().find(|f| letters_to_string(&f.gram) == "DLC").unwrap();
        assert_eq!(dlc.positions, vec![0, 12]);
        assert_eq!(dlc.distances, vec![12]);
        assert!(findings.iter().all(|f| f.distances == vec![12]));
    }

    #[test]
    fn generated_ciphertext_has_no_trigram_repeats() {
        assert!(find_repeats(&l("DLCGFWYIDOLMOPAQBN"), 3, 5).is_empty());
    }

    #[test]
    fn overlapping_repeats() {
        let findings = find_repeats(&l("AAAAAA"), 3, 3);
        assert_eq!(findings.len(), 1);
        assert_eq!(findings[0].positions, vec![0, 1, 2, 3]);
        assert_eq!(findings[0].distances, vec![1, 1, 1]);
    }

    #[test]
    fn short_input() {
        assert!(find_repeats(&l("AB"), 3, 5).is_empty());
        assert!(find_repeats(&[], 3, 5).is_empty());
    }

    #[test]
    fn divisors_of_twelve_tie() {
        let f = RepeatFinding {
            gram: l("DLC"),
            positions: vec![0, 12],
            distances: vec![12],
        };
        let ranked = estimate_key_lengths(&[f]);
        let lengths: Vec<usize> = ranked.iter().map(|c| c.length).collect();
        assert_eq!(lengths, vec![2, 3, 4, 6, 12]);
        assert!(ranked.iter().all(|c| c.score == 3));
    }

    #[test]
    fn empty_findings_rank_nothing() {
        assert!(estimate_key_lengths(&[]).is_empty());
    }

    #[test]
    fn identity_key_recovery() {
        let plain = l("THEQUICKBROWNFOXJUMPSOVERTHELAZYDOG");
        assert_eq!(recover_key(&plain, 1).unwrap(), l("A"));
    }

    #[test]
    fn recover_key_errors() {
        assert!(recover_key(&l("ABC"), 0).is_err());
        assert!(matches!(
            recover_key(&l("AB"), 3),
            Err(AnalysisError::InsufficientData(_))
        ));
    }

    #[test]
    fn column_ioc_needs_two_per_column() {
        assert_eq!(average_column_ioc(&l("ABAB"), 2), Some(1.0));
        assert_eq!(average_column_ioc(&l("ABC"), 2), None);
    }
}
