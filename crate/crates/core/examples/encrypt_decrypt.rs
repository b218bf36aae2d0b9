//! Encrypt and decrypt with both key modes, showing how a repeated word
//! leaks through a repeating key.
//!
//! ```bash
//! cargo run -p keyless-vigenere --example encrypt_decrypt
//! cargo run -p keyless-vigenere --example encrypt_decrypt -- "Attack at dawn, attack at dusk" LEMON
//! ```

use keyless_vigenere::{decrypt, encrypt, extend_key, CasePolicy, KeyMode, MessageText, NonAlphaPolicy, TextPolicy};

fn main() {
    let mut args = std::env::args().skip(1);
    let text = args.next().unwrap_or_else(|| "THE FAMILY AND THE FAV".to_string());
    let key = args.next().unwrap_or_else(|| "KEY".to_string());

    let plain = MessageText::new(&text);
    for mode in [KeyMode::StandardRepeat, KeyMode::Generated] {
        let stream = extend_key(&key, plain.letter_count(), mode).expect("key must be letters only");
        let cipher = encrypt(&plain, &stream).unwrap();
        let back = decrypt(&cipher, &stream).unwrap();
        println!("{mode:>9} key stream : {stream}");
        println!("{mode:>9} ciphertext : {cipher}");
        println!("{mode:>9} decrypted  : {back}");
        println!();
    }

    // lossless on mixed case and punctuation
    let policy = TextPolicy::new(NonAlphaPolicy::Preserve, CasePolicy::Preserve);
    let plain = MessageText::parse(&text, policy);
    let stream = extend_key(&key, plain.letter_count(), KeyMode::Generated).unwrap();
    let cipher = encrypt(&plain, &stream).unwrap();
    println!("case-preserving ciphertext: {cipher}");
    assert_eq!(decrypt(&cipher, &stream).unwrap().as_str(), text);
}
