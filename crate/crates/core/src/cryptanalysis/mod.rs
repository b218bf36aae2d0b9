//! Kasiski cryptanalysis of repeating-key Vigenère ciphertext.

pub mod attack;
pub mod kasiski;
pub mod stats;

pub use attack::{attack, attack_with, AttackConfig, KasiskiReport, Verdict, DEFAULT_BROKEN_THRESHOLD};
pub use kasiski::{
    average_column_ioc, estimate_key_lengths, find_repeats, recover_key, recover_key_with, KeyLengthCandidate,
    RepeatFinding,
};
pub use stats::{chi_squared, chi_squared_per_letter, index_of_coincidence, FrequencyTable};
