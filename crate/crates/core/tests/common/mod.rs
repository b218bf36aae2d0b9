//! Test-only oracles, written without touching the library's arithmetic.
#![allow(dead_code)]

use std::collections::BTreeMap;

pub const CORPUS: &str = include_str!("../../data/corpus/tale_of_two_cities.txt");

pub const ALPHABET: &str = "ABCDEFGHIJKLMNOPQRSTUVWXYZ";

/// The 26x26 shifted-alphabet square: row = key letter, column = plaintext
/// letter, built by string rotation.
pub fn tabula_recta() -> Vec<Vec<char>> {
    (0..26)
        .map(|row| {
            let rotated = format!("{}{}", &ALPHABET[row..], &ALPHABET[..row]);
            rotated.chars().collect()
        })
        .collect()
}

/// Walks the keystream recurrence one letter at a time on characters: the
/// next letter is the previous one advanced by the number of key letters
/// produced so far.
pub fn keystream_walker(key: &str, len: usize) -> String {
    let mut out: Vec<char> = key.chars().take(len).collect();
    while out.len() < len {
        let prev = out[out.len() - 1];
        let pos = ALPHABET.find(prev).unwrap();
        let next = (pos + out.len()) % 26;
        out.push(ALPHABET.as_bytes()[next] as char);
    }
    out.into_iter().collect()
}

/// Letters of `text`, uppercased, everything else dropped.
pub fn letters_only(text: &str) -> String {
    text.chars()
        .filter(char::is_ascii_alphabetic)
        .map(|c| c.to_ascii_uppercase())
        .collect()
}

/// All-pairs scan: every gram of length `min..=max` that occurs at two or
/// more offsets, mapped to its sorted offsets.
pub fn brute_force_repeats(letters: &str, min: usize, max: usize) -> BTreeMap<String, Vec<usize>> {
    let b = letters.as_bytes();
    let mut out: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for n in min..=max {
        if b.len() < n {
            break;
        }
        for i in 0..=b.len() - n {
            for j in i + 1..=b.len() - n {
                if b[i..i + n] == b[j..j + n] {
                    let entry = out.entry(letters[i..i + n].to_string()).or_default();
                    for p in [i, j] {
                        if !entry.contains(&p) {
                            entry.push(p);
                        }
                    }
                }
            }
        }
    }
    for v in out.values_mut() {
        v.sort_unstable();
    }
    out
}

/// Kasiski score by direct enumeration: for each length, the number of
/// consecutive-occurrence gaps it divides, weighted by gram length.
pub fn brute_force_scores(
    repeats: &BTreeMap<String, Vec<usize>>,
    lengths: std::ops::RangeInclusive<usize>,
) -> Vec<(usize, usize)> {
    let mut scores: Vec<(usize, usize)> = lengths
        .map(|l| {
            let s = repeats
                .iter()
                .map(|(g, pos)| g.len() * pos.windows(2).filter(|w| (w[1] - w[0]) % l == 0).count())
                .sum();
            (l, s)
        })
        .filter(|&(_, s)| s > 0)
        .collect();
    scores.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    scores
}

pub fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    for (i, ca) in a.iter().enumerate() {
        let mut cur = vec![i + 1];
        for (j, cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            cur.push(sub.min(prev[j + 1] + 1).min(cur[j] + 1));
        }
        prev = cur;
    }
    prev[b.len()]
}

/// Vigenère by table lookup with a repeating key, on uppercase letters.
pub fn table_encrypt_repeating(plain: &str, key: &str) -> String {
    let square = tabula_recta();
    let key: Vec<usize> = key.chars().map(|c| ALPHABET.find(c).unwrap()).collect();
    plain
        .chars()
        .enumerate()
        .map(|(i, p)| square[key[i % key.len()]][ALPHABET.find(p).unwrap()])
        .collect()
}
