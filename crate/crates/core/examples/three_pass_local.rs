//! Run a three-pass exchange in-process, one step at a time.
//!
//! ```bash
//! cargo run -p keyless-vigenere --example three_pass_local
//! ```

use keyless_vigenere::{KeyMode, MessageText, SessionId, TextPolicy, ThreePassSession, UserKey};

fn main() {
    let policy = TextPolicy::default();
    let id = SessionId(1);
    let mut sender = ThreePassSession::sender(UserKey::parse("KEY").unwrap(), KeyMode::Generated, policy, id);
    let mut recipient = ThreePassSession::recipient(UserKey::parse("BUNG").unwrap(), KeyMode::Generated, policy, id);

    let plain = MessageText::new("THE FAMILY AND THE FAV");
    println!("Plaintext         : {plain}");

    let c1 = sender.sender_pass1(&plain).unwrap();
    println!("First Ciphertext  : {c1}   (sender -> recipient)");

    let c2 = recipient.recipient_pass2(&c1).unwrap();
    println!("Second Ciphertext : {c2}   (recipient -> sender)");

    let c3 = sender.sender_pass3(&c2).unwrap();
    println!("Third Ciphertext  : {c3}   (sender -> recipient)");

    let recovered = recipient.recipient_finish(&c3).unwrap();
    println!("Recovered         : {recovered}");

    // the state machine refuses a fourth exchange
    let err = recipient.recipient_finish(&c3).unwrap_err();
    println!("\nreplaying pass 3: {err}");
}
