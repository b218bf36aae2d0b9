//! Vigenère cipher with a generated keystream, a three-pass exchange that
//! needs no key distribution, and Kasiski cryptanalysis to compare the two
//! key modes.
//!
//! ```
//! use keyless_vigenere::{encrypt, extend_key, KeyMode, MessageText};
//!
//! let plain = MessageText::new("THE FAMILY AND THE FAV");
//! let key = extend_key("KEY", plain.letter_count(), KeyMode::Generated).unwrap();
//! assert_eq!(key.to_string(), "KEYBFKQXFOYJVIWLBS");
//! assert_eq!(encrypt(&plain, &key).unwrap().as_str(), "DLC GFWYID OLM OPA QBN");
//! ```

pub mod alphabet;
pub mod cipher;
pub mod cli;
pub mod cryptanalysis;
pub mod error;
pub mod key;
pub mod text;
pub mod threepass;
pub mod transport;

pub use alphabet::{char_to_index, index_to_char, LetterIndex};
pub use cipher::{decrypt, encrypt};
pub use error::{AnalysisError, CipherError, ProtocolError};
pub use key::{extend_key, KeyMode, KeyStream, UserKey};
pub use text::{CasePolicy, MessageText, NonAlphaPolicy, TextPolicy};
pub use threepass::{run_local_exchange, ExchangeTranscript, Phase, Role, SessionId, ThreePassSession};
