//! Run the Kasiski attack against the bundled English excerpt under both key
//! modes, or against a file of your own.
//!
//! ```bash
//! cargo run -p keyless-vigenere --example kasiski_attack
//! cargo run -p keyless-vigenere --example kasiski_attack -- LEMON path/to/plain.txt
//! ```

use keyless_vigenere::cryptanalysis::attack;
use keyless_vigenere::{encrypt, extend_key, KeyMode, MessageText};

const CORPUS: &str = include_str!("../data/corpus/tale_of_two_cities.txt");

fn main() {
    let mut args = std::env::args().skip(1);
    let key = args.next().unwrap_or_else(|| "KEY".to_string());
    let text = match args.next() {
        Some(path) => std::fs::read_to_string(path).expect("readable text file"),
        None => CORPUS.to_string(),
    };

    let plain = MessageText::new(&text);
    for mode in [KeyMode::StandardRepeat, KeyMode::Generated] {
        let stream = extend_key(&key, plain.letter_count(), mode).expect("key must be letters only");
        let cipher = encrypt(&plain, &stream).unwrap();
        println!("==== key {key}, {mode} mode ====");
        println!("{}\n", attack(&cipher));
    }
}
