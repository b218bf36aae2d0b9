//! Line-oriented frame codec.
//!
//! ```text
//! TPP/1 <session_id> <pass> <mode> <policy> <base64 payload>\n
//! TPP/1 <session_id> ERR <reason>\n
//! ```
//!
//! Fields are separated by single spaces. The session id is 16 lowercase
//! hex digits, the pass is `1`, `2` or `3`, the mode is `GEN` or `STD`, the
//! policy is one of `PU`, `PP`, `SU`, `SP`. The payload is standard base-64
//! of the UTF-8 message text and may be empty.

use base64::engine::general_purpose::STANDARD;
use base64::Engine;
use thiserror::Error;

use crate::key::KeyMode;
use crate::text::TextPolicy;
use crate::threepass::SessionId;

pub const VERSION: &str = "TPP/1";

/// Longest line the decoder or the stream reader will accept.
pub const MAX_LINE_LEN: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrameError {
    #[error("unsupported version {0:?}")]
    UnsupportedVersion(String),
    #[error("malformed frame: bad {field}")]
    MalformedFrame { field: &'static str },
    #[error("malformed payload: {0}")]
    MalformedPayload(String),
}

fn malformed(field: &'static str) -> FrameError {
    FrameError::MalformedFrame { field }
}

/// Which of the three exchanges a frame carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PassNumber(u8);

impl PassNumber {
    pub const FIRST: PassNumber = PassNumber(1);
    pub const SECOND: PassNumber = PassNumber(2);
    pub const THIRD: PassNumber = PassNumber(3);

    pub fn new(n: u8) -> Option<Self> {
        (1..=3).contains(&n).then_some(PassNumber(n))
    }

    pub fn get(self) -> u8 {
        self.0
    }
}

/// One ciphertext in flight between the parties.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    pub session_id: SessionId,
    pub pass: PassNumber,
    pub mode: KeyMode,
    pub policy: TextPolicy,
    /// Message text as it appears on screen, passthrough characters included.
    pub payload: String,
}

/// Anything that can appear on the wire.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Message {
    Pass(Frame),
    Error { session_id: SessionId, reason: String },
}

impl Message {
    pub fn session_id(&self) -> SessionId {
        match self {
            Message::Pass(f) => f.session_id,
            Message::Error { session_id, .. } => *session_id,
        }
    }
}

pub fn encode_frame(frame: &Frame) -> Vec<u8> {
    format!(
        "{VERSION} {} {} {} {} {}\n",
        frame.session_id,
        frame.pass.get(),
        frame.mode.tag(),
        frame.policy.tag(),
        STANDARD.encode(frame.payload.as_bytes())
    )
    .into_bytes()
}

/// Encodes an error frame. Line breaks in `reason` are replaced by spaces.
pub fn encode_error(session_id: SessionId, reason: &str) -> Vec<u8> {
    let reason: String = reason
        .chars()
        .map(|c| if c == '\n' || c == '\r' { ' ' } else { c })
        .collect();
    format!("{VERSION} {session_id} ERR {reason}\n").into_bytes()
}

pub fn encode_message(message: &Message) -> Vec<u8> {
    match message {
        Message::Pass(f) => encode_frame(f),
        Message::Error { session_id, reason } => encode_error(*session_id, reason),
    }
}

/// Decodes one line, with or without its trailing linefeed.
pub fn decode_message(line: &[u8]) -> Result<Message, FrameError> {
    let line = line.strip_suffix(b"\n").unwrap_or(line);
    if line.len() > MAX_LINE_LEN {
        return Err(malformed("length"));
    }
    let line = std::str::from_utf8(line).map_err(|_| malformed("encoding"))?;

    let mut head = line.splitn(4, ' ');
    let version = head.next().unwrap_or_default();
    if version != VERSION {
        return Err(FrameError::UnsupportedVersion(version.to_owned()));
    }
    let session_id = head
        .next()
        .ok_or(malformed("field count"))?
        .parse::<SessionId>()
        .map_err(|_| malformed("session_id"))?;
    let pass = head.next().ok_or(malformed("field count"))?;
    if pass == "ERR" {
        let reason = head.next().unwrap_or_default().to_owned();
        return Ok(Message::Error { session_id, reason });
    }

    let rest = head.next().ok_or(malformed("field count"))?;
    let fields: Vec<&str> = rest.split(' ').collect();
    let [mode, policy, payload] = fields[..] else {
        return Err(malformed("field count"));
    };

    let pass = match pass.as_bytes() {
        [d @ b'1'..=b'3'] => PassNumber(d - b'0'),
        _ => return Err(malformed("pass_number")),
    };
    let mode = KeyMode::from_tag(mode).ok_or(malformed("mode"))?;
    let policy = TextPolicy::from_tag(policy).ok_or(malformed("policy"))?;
    let bytes = STANDARD
        .decode(payload)
        .map_err(|e| FrameError::MalformedPayload(e.to_string()))?;
    let payload = String::from_utf8(bytes).map_err(|_| FrameError::MalformedPayload("payload is not UTF-8".into()))?;

    Ok(Message::Pass(Frame {
        session_id,
        pass,
        mode,
        policy,
        payload,
    }))
}

/// Decodes a line that must be a pass frame; error frames are reported as a
/// malformed `pass_number`.
pub fn decode_frame(line: &[u8]) -> Result<Frame, FrameError> {
    match decode_message(line)? {
        Message::Pass(f) => Ok(f),
        Message::Error { .. } => Err(malformed("pass_number")),
    }
}
