//! Encode and decode wire frames, including the error cases.
//!
//! ```bash
//! cargo run -p keyless-vigenere --example frame_codec
//! ```

use keyless_vigenere::transport::{decode_message, encode_error, encode_frame, Frame, PassNumber};
use keyless_vigenere::{KeyMode, SessionId, TextPolicy};

fn main() {
    let frame = Frame {
        session_id: SessionId(0x0123_4567_89ab_cdef),
        pass: PassNumber::FIRST,
        mode: KeyMode::Generated,
        policy: TextPolicy::default(),
        payload: "DLC GFWYID OLM OPA QBN".to_string(),
    };
    let bytes = encode_frame(&frame);
    print!("encoded : {}", String::from_utf8_lossy(&bytes));
    println!("decoded : {:?}", decode_message(&bytes).unwrap());

    let err = encode_error(frame.session_id, "mode mismatch");
    print!("error   : {}", String::from_utf8_lossy(&err));
    println!("decoded : {:?}", decode_message(&err).unwrap());

    for bad in [
        "TPP/2 0000000000000000 1 GEN PU QQ==",
        "TPP/1 0000000000000000 4 GEN PU QQ==",
        "TPP/1 0000000000000000 1 GEN PU ***",
        "TPP/1 0000000000000000 1 GEN",
    ] {
        println!("{bad:<40} -> {}", decode_message(bad.as_bytes()).unwrap_err());
    }
}
