//! A responder and an initiator talking over a loopback TCP socket.
//!
//! ```bash
//! cargo run -p keyless-vigenere --example three_pass_tcp
//! ```

use std::sync::mpsc;
use std::thread;

use keyless_vigenere::transport::{run_initiator, InitiatorConfig, Responder, ResponderConfig, ResponderEvent};
use keyless_vigenere::{KeyMode, SessionId, TextPolicy, UserKey};

fn main() {
    let policy = TextPolicy::default();
    let config = ResponderConfig::new(UserKey::parse("BUNG").unwrap(), KeyMode::Generated, policy);
    let responder = Responder::bind("127.0.0.1:0", config).expect("bind loopback");
    let addr = responder.local_addr();
    println!("recipient listening on {addr}");

    let (events, delivered) = mpsc::channel();
    let server = thread::spawn(move || responder.serve(events, Some(1)));

    let initiator = InitiatorConfig::new(
        UserKey::parse("KEY").unwrap(),
        KeyMode::Generated,
        policy,
        SessionId(0x5eed),
    );
    let transcript = run_initiator(&addr.to_string(), &initiator, "THE FAMILY AND THE FAV").expect("exchange");

    println!("frames on the wire:");
    for frame in &transcript.frames {
        print!("  {}", String::from_utf8_lossy(frame));
    }

    server.join().unwrap().unwrap();
    if let Ok(ResponderEvent::Delivered(d)) = delivered.recv() {
        println!("recipient recovered session {}: {}", d.session_id, d.plaintext);
    }
}
