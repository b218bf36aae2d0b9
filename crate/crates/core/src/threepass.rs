//! Three-pass exchange: each party only ever uses its own key.
//!
//! ```text
//! sender                                  recipient
//!   c1 = E(P, Ks)          --- pass 1 -->
//!                          <-- pass 2 ---   c2 = E(c1, Kr)
//!   c3 = D(c2, Ks)         --- pass 3 -->
//!                                           P  = D(c3, Kr)
//! ```
//!
//! Because encryption is per-position addition mod 26 the two layers
//! commute, so the sender can strip its layer from under the recipient's.
//! Each party re-derives its key stream from the letter count of the
//! message at every pass. All three ciphertexts share the plaintext's mask,
//! so the streams line up.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::cipher::{decrypt, encrypt};
use crate::error::{CipherError, ProtocolError};
use crate::key::{KeyMode, KeyStream, UserKey};
use crate::text::{MessageText, TextPolicy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Sender,
    Recipient,
}

/// Where a session is in the exchange.
///
/// A sender walks `AwaitStart -> AwaitPass2 -> Done`, a recipient walks
/// `AwaitPass1 -> AwaitPass3 -> Done`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Phase {
    AwaitStart,
    AwaitPass1,
    AwaitPass2,
    AwaitPass3,
    Done,
}

/// Opaque 64-bit session identifier, written as 16 lowercase hex digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SessionId(pub u64);

impl SessionId {
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        SessionId(rng.gen())
    }
}

impl fmt::Display for SessionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:016x}", self.0)
    }
}

impl FromStr for SessionId {
    type Err = ();

    /// Accepts exactly 16 lowercase hex digits.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.len() != 16 || !s.bytes().all(|b| matches!(b, b'0'..=b'9' | b'a'..=b'f')) {
            return Err(());
        }
        u64::from_str_radix(s, 16).map(SessionId).map_err(|_| ())
    }
}

/// One side of a three-pass exchange.
#[derive(Debug)]
pub struct ThreePassSession {
    role: Role,
    own_key: UserKey,
    mode: KeyMode,
    policy: TextPolicy,
    phase: Phase,
    session_id: SessionId,
    letter_count: Option<usize>,
    result: Option<MessageText>,
}

impl ThreePassSession {
    pub fn new(role: Role, own_key: UserKey, mode: KeyMode, policy: TextPolicy, session_id: SessionId) -> Self {
        let phase = match role {
            Role::Sender => Phase::AwaitStart,
            Role::Recipient => Phase::AwaitPass1,
        };
        ThreePassSession {
            role,
            own_key,
            mode,
            policy,
            phase,
            session_id,
            letter_count: None,
            result: None,
        }
    }

    pub fn sender(own_key: UserKey, mode: KeyMode, policy: TextPolicy, session_id: SessionId) -> Self {
        Self::new(Role::Sender, own_key, mode, policy, session_id)
    }

    pub fn recipient(own_key: UserKey, mode: KeyMode, policy: TextPolicy, session_id: SessionId) -> Self {
        Self::new(Role::Recipient, own_key, mode, policy, session_id)
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn mode(&self) -> KeyMode {
        self.mode
    }

    pub fn policy(&self) -> TextPolicy {
        self.policy
    }

    pub fn session_id(&self) -> SessionId {
        self.session_id
    }

    /// The recovered plaintext, present only on a finished recipient.
    pub fn result(&self) -> Option<&MessageText> {
        self.result.as_ref()
    }

    pub fn is_done(&self) -> bool {
        self.phase == Phase::Done
    }

    fn expect(&self, operation: &'static str, role: Role, phase: Phase) -> Result<(), ProtocolError> {
        if self.role == role && self.phase == phase {
            Ok(())
        } else {
            Err(ProtocolError::ProtocolViolation {
                operation,
                role: self.role,
                phase: self.phase,
            })
        }
    }

    /// Key stream for `text`; after the first pass the letter count is pinned.
    fn stream_for(&self, text: &MessageText) -> Result<KeyStream, CipherError> {
        if let Some(expected) = self.letter_count {
            if expected != text.letter_count() {
                return Err(CipherError::KeyLengthMismatch {
                    expected: text.letter_count(),
                    actual: expected,
                });
            }
        }
        Ok(self.own_key.extend(text.letter_count(), self.mode))
    }

    /// Pass 1: the sender encrypts the plaintext under its own key.
    pub fn sender_pass1(&mut self, plaintext: &MessageText) -> Result<MessageText, ProtocolError> {
        self.expect("sender_pass1", Role::Sender, Phase::AwaitStart)?;
        let c1 = encrypt(plaintext, &self.stream_for(plaintext)?)?;
        self.letter_count = Some(plaintext.letter_count());
        self.phase = Phase::AwaitPass2;
        Ok(c1)
    }

    /// Pass 2: the recipient adds its own layer on top of the first ciphertext.
    pub fn recipient_pass2(&mut self, c1: &MessageText) -> Result<MessageText, ProtocolError> {
        self.expect("recipient_pass2", Role::Recipient, Phase::AwaitPass1)?;
        let c2 = encrypt(c1, &self.stream_for(c1)?)?;
        self.letter_count = Some(c1.letter_count());
        self.phase = Phase::AwaitPass3;
        Ok(c2)
    }

    /// Pass 3: the sender removes its layer, leaving only the recipient's.
    pub fn sender_pass3(&mut self, c2: &MessageText) -> Result<MessageText, ProtocolError> {
        self.expect("sender_pass3", Role::Sender, Phase::AwaitPass2)?;
        let c3 = decrypt(c2, &self.stream_for(c2)?)?;
        self.phase = Phase::Done;
        Ok(c3)
    }

    /// Final step: the recipient removes its layer and keeps the plaintext.
    pub fn recipient_finish(&mut self, c3: &MessageText) -> Result<MessageText, ProtocolError> {
        self.expect("recipient_finish", Role::Recipient, Phase::AwaitPass3)?;
        let plaintext = decrypt(c3, &self.stream_for(c3)?)?;
        self.phase = Phase::Done;
        self.result = Some(plaintext.clone());
        Ok(plaintext)
    }
}

/// Everything that crossed the channel in one exchange, plus what the
/// recipient recovered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExchangeTranscript {
    pub first_ciphertext: MessageText,
    pub second_ciphertext: MessageText,
    pub third_ciphertext: MessageText,
    pub plaintext: MessageText,
}

/// Key and conventions for one party of a local exchange.
#[derive(Debug, Clone)]
pub struct Party {
    pub key: UserKey,
    pub mode: KeyMode,
    pub policy: TextPolicy,
}

impl Party {
    pub fn new(key: &str, mode: KeyMode, policy: TextPolicy) -> Result<Self, CipherError> {
        Ok(Party {
            key: UserKey::parse(key)?,
            mode,
            policy,
        })
    }
}

/// Runs all four steps in-process with both parties sharing `mode` and
/// `policy`.
pub fn run_local_exchange(
    plaintext: &str,
    sender_key: &str,
    recipient_key: &str,
    mode: KeyMode,
    policy: TextPolicy,
) -> Result<ExchangeTranscript, ProtocolError> {
    let sender = Party::new(sender_key, mode, policy)?;
    let recipient = Party::new(recipient_key, mode, policy)?;
    run_local_exchange_with(plaintext, &sender, &recipient)
}

/// Runs an in-process exchange where each party may have its own
/// conventions. Every ciphertext is handed over as plain text and re-read
/// by the receiving party under its own policy, as it would be off a wire.
///
/// Fails with [`ProtocolError::PolicyMismatch`] when the recovered text
/// differs from the sender's normalized plaintext.
pub fn run_local_exchange_with(
    plaintext: &str,
    sender: &Party,
    recipient: &Party,
) -> Result<ExchangeTranscript, ProtocolError> {
    let id = SessionId::default();
    let mut s = ThreePassSession::sender(sender.key.clone(), sender.mode, sender.policy, id);
    let mut r = ThreePassSession::recipient(recipient.key.clone(), recipient.mode, recipient.policy, id);

    let plain = MessageText::parse(plaintext, sender.policy);
    let c1 = s.sender_pass1(&plain)?;
    let c2 = r.recipient_pass2(&MessageText::parse(c1.as_str(), recipient.policy))?;
    let c3 = s.sender_pass3(&MessageText::parse(c2.as_str(), sender.policy))?;
    let recovered = r.recipient_finish(&MessageText::parse(c3.as_str(), recipient.policy))?;

    if recovered.as_str() != plain.as_str() {
        return Err(ProtocolError::PolicyMismatch);
    }
    Ok(ExchangeTranscript {
        first_ciphertext: c1,
        second_ciphertext: c2,
        third_ciphertext: c3,
        plaintext: recovered,
    })
}
