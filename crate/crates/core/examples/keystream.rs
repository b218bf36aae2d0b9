//! Compare repeating and generated key streams.
//!
//! ```bash
//! cargo run -p keyless-vigenere --example keystream -- MYCODE 30
//! ```

use keyless_vigenere::{extend_key, KeyMode};

fn main() {
    let mut args = std::env::args().skip(1);
    let key = args.next().unwrap_or_else(|| "MYCODE".to_string());
    let len: usize = args
        .next()
        .map(|s| s.parse().expect("length must be a number"))
        .unwrap_or(10);

    let standard = extend_key(&key, len, KeyMode::StandardRepeat).expect("key must be letters only");
    let generated = extend_key(&key, len, KeyMode::Generated).expect("key must be letters only");

    println!("user key  : {key}");
    println!("standard  : {standard}");
    println!("generated : {generated}");

    // Beyond the user key each letter is the previous one advanced by its
    // position, so the stream never settles into the key's period.
    for (i, window) in generated
        .letters()
        .windows(2)
        .enumerate()
        .skip(key.len().saturating_sub(1))
        .take(5)
    {
        println!("  {} = {} + {} (mod 26)", window[1], window[0], i + 1);
    }
}
