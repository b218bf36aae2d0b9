//! Blocking TCP initiator and responder.
//!
//! The responder accepts any number of connections and serves each on its
//! own thread. A connection may carry several interleaved sessions; each
//! session is a [`ThreePassSession`] owned by that connection's thread.
//!
//! The initiator half-closes its write side after pass 3 and waits for the
//! responder to close the connection. A clean close with no `ERR` frame is
//! the acknowledgement that the plaintext was recovered.

use std::collections::HashMap;
use std::io::{self, BufRead, BufReader, Read, Write};
use std::net::{Shutdown, SocketAddr, TcpListener, TcpStream, ToSocketAddrs};
use std::sync::mpsc::Sender;
use std::sync::Arc;
use std::thread::{self, JoinHandle};
use std::time::Duration;

use thiserror::Error;

use super::frame::{decode_message, encode_error, encode_frame, Frame, FrameError, Message, PassNumber, MAX_LINE_LEN};
use crate::error::ProtocolError;
use crate::key::{KeyMode, UserKey};
use crate::text::{MessageText, TextPolicy};
use crate::threepass::{SessionId, ThreePassSession};

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(10);

#[derive(Debug, Error)]
pub enum TransportError {
    #[error("cannot bind {addr}: {source}")]
    Bind { addr: String, source: io::Error },
    #[error("cannot connect to {addr}: {source}")]
    Connect { addr: String, source: io::Error },
    #[error("i/o error with {addr}: {source}")]
    Io { addr: String, source: io::Error },
    #[error("timed out after {0:?} waiting for the peer")]
    TimedOut(Duration),
    #[error("remote error: {0}")]
    RemoteError(String),
    #[error("unexpected frame from peer: {0}")]
    UnexpectedFrame(String),
    #[error("connection closed before the exchange completed")]
    ConnectionClosed,
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
}

impl TransportError {
    fn io(addr: impl ToString, source: io::Error, timeout: Duration) -> Self {
        match source.kind() {
            io::ErrorKind::WouldBlock | io::ErrorKind::TimedOut => TransportError::TimedOut(timeout),
            _ => TransportError::Io {
                addr: addr.to_string(),
                source,
            },
        }
    }
}

/// Reads one `\n`-terminated line. `Ok(None)` means the peer closed the
/// connection (a trailing partial line is discarded).
fn read_line<R: BufRead>(reader: &mut R) -> io::Result<Option<Vec<u8>>> {
    let mut buf = Vec::new();
    let limit = MAX_LINE_LEN as u64 + 1;
    reader.take(limit).read_until(b'\n', &mut buf)?;
    match buf.last() {
        Some(b'\n') => Ok(Some(buf)),
        _ if buf.len() as u64 >= limit => Err(io::Error::new(io::ErrorKind::InvalidData, "line too long")),
        _ => Ok(None),
    }
}

// ── Responder ────────────────────────────────────────────────

#[derive(Debug, Clone)]
pub struct ResponderConfig {
    pub recipient_key: UserKey,
    pub mode: KeyMode,
    pub policy: TextPolicy,
    /// How long a connection may sit idle.
    pub timeout: Duration,
}

impl ResponderConfig {
    pub fn new(recipient_key: UserKey, mode: KeyMode, policy: TextPolicy) -> Self {
        ResponderConfig {
            recipient_key,
            mode,
            policy,
            timeout: DEFAULT_TIMEOUT,
        }
    }
}

/// A plaintext recovered by the responder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Delivery {
    pub peer: SocketAddr,
    pub session_id: SessionId,
    pub plaintext: MessageText,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResponderEvent {
    Delivered(Delivery),
    /// A session or connection was refused with an error frame.
    Rejected {
        peer: SocketAddr,
        session_id: SessionId,
        reason: String,
    },
}

pub struct Responder {
    listener: TcpListener,
    config: Arc<ResponderConfig>,
}

impl Responder {
    pub fn bind(addr: &str, config: ResponderConfig) -> Result<Self, TransportError> {
        let listener = TcpListener::bind(addr).map_err(|source| TransportError::Bind {
            addr: addr.to_owned(),
            source,
        })?;
        Ok(Responder {
            listener,
            config: Arc::new(config),
        })
    }

    pub fn local_addr(&self) -> SocketAddr {
        self.listener.local_addr().expect("bound listener has an address")
    }

    /// Accepts connections and serves each on its own thread, reporting
    /// outcomes to `events`. With `max_connections` set, returns once that
    /// many connections have been accepted and fully served; otherwise runs
    /// until accepting fails.
    pub fn serve(&self, events: Sender<ResponderEvent>, max_connections: Option<usize>) -> Result<(), TransportError> {
        let local = self.local_addr();
        let mut workers: Vec<JoinHandle<()>> = Vec::new();
        let mut accepted = 0usize;
        while max_connections.is_none_or(|max| accepted < max) {
            let (stream, peer) = self
                .listener
                .accept()
                .map_err(|source| TransportError::io(local, source, self.config.timeout))?;
            accepted += 1;
            let config = Arc::clone(&self.config);
            let events = events.clone();
            workers.retain(|w| !w.is_finished());
            workers.push(thread::spawn(move || {
                // connection-level failures are already reported to the peer
                let _ = serve_connection(stream, peer, &config, &events);
            }));
        }
        for w in workers {
            let _ = w.join();
        }
        Ok(())
    }
}

/// Binds `listen_address` and serves exchanges as the recipient.
pub fn run_responder(
    listen_address: &str,
    config: ResponderConfig,
    events: Sender<ResponderEvent>,
    max_connections: Option<usize>,
) -> Result<(), TransportError> {
    Responder::bind(listen_address, config)?.serve(events, max_connections)
}

fn serve_connection(
    stream: TcpStream,
    peer: SocketAddr,
    config: &ResponderConfig,
    events: &Sender<ResponderEvent>,
) -> Result<(), TransportError> {
    let io_err = |e| TransportError::io(peer, e, config.timeout);
    stream.set_read_timeout(Some(config.timeout)).map_err(io_err)?;
    stream.set_write_timeout(Some(config.timeout)).map_err(io_err)?;
    let mut writer = stream.try_clone().map_err(io_err)?;
    let mut reader = BufReader::new(stream);
    let mut sessions: HashMap<SessionId, ThreePassSession> = HashMap::new();

    let reject = |writer: &mut TcpStream, session_id: SessionId, reason: String| -> Result<(), TransportError> {
        writer.write_all(&encode_error(session_id, &reason)).map_err(io_err)?;
        let _ = events.send(ResponderEvent::Rejected {
            peer,
            session_id,
            reason,
        });
        Ok(())
    };

    while let Some(line) = read_line(&mut reader).map_err(io_err)? {
        let frame = match decode_message(&line) {
            Ok(Message::Pass(frame)) => frame,
            Ok(Message::Error { session_id, .. }) => {
                sessions.remove(&session_id);
                continue;
            }
            Err(e) => {
                // no trustworthy session id; give up on the connection
                reject(&mut writer, SessionId::default(), e.to_string())?;
                break;
            }
        };
        let sid = frame.session_id;
        match respond(&mut sessions, frame, config) {
            Ok(Step::Reply(bytes)) => writer.write_all(&bytes).map_err(io_err)?,
            Ok(Step::Finished(plaintext)) => {
                let _ = events.send(ResponderEvent::Delivered(Delivery {
                    peer,
                    session_id: sid,
                    plaintext,
                }));
            }
            Err(reason) => {
                sessions.remove(&sid);
                reject(&mut writer, sid, reason)?;
            }
        }
    }
    let _ = writer.shutdown(Shutdown::Both);
    Ok(())
}

enum Step {
    Reply(Vec<u8>),
    Finished(MessageText),
}

fn respond(
    sessions: &mut HashMap<SessionId, ThreePassSession>,
    frame: Frame,
    config: &ResponderConfig,
) -> Result<Step, String> {
    if frame.mode != config.mode {
        return Err("mode mismatch".into());
    }
    if frame.policy != config.policy {
        return Err("policy mismatch".into());
    }
    let text = MessageText::parse(&frame.payload, config.policy);
    match frame.pass {
        PassNumber::FIRST => {
            if sessions.contains_key(&frame.session_id) {
                return Err("protocol violation: duplicate pass 1".into());
            }
            let mut session = ThreePassSession::recipient(
                config.recipient_key.clone(),
                config.mode,
                config.policy,
                frame.session_id,
            );
            let c2 = session.recipient_pass2(&text).map_err(|e| e.to_string())?;
            sessions.insert(frame.session_id, session);
            Ok(Step::Reply(encode_frame(&Frame {
                pass: PassNumber::SECOND,
                payload: c2.into_string(),
                ..frame
            })))
        }
        PassNumber::THIRD => {
            let mut session = sessions
                .remove(&frame.session_id)
                .ok_or_else(|| "protocol violation: pass 3 before pass 1".to_string())?;
            let plaintext = session.recipient_finish(&text).map_err(|e| e.to_string())?;
            Ok(Step::Finished(plaintext))
        }
        _ => Err("protocol violation: unexpected pass 2".into()),
    }
}

// ── Initiator ────────────────────────────────────────────────

#[derive(Debug, Clone)]
pub struct InitiatorConfig {
    pub sender_key: UserKey,
    pub mode: KeyMode,
    pub policy: TextPolicy,
    pub timeout: Duration,
    pub session_id: SessionId,
}

impl InitiatorConfig {
    pub fn new(sender_key: UserKey, mode: KeyMode, policy: TextPolicy, session_id: SessionId) -> Self {
        InitiatorConfig {
            sender_key,
            mode,
            policy,
            timeout: DEFAULT_TIMEOUT,
            session_id,
        }
    }
}

/// What the initiator saw. It never learns whether the recipient read the
/// message correctly, only that the exchange completed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WireTranscript {
    pub session_id: SessionId,
    pub first_ciphertext: MessageText,
    pub second_ciphertext: MessageText,
    pub third_ciphertext: MessageText,
    /// Every line sent or received, in order, as raw bytes.
    pub frames: Vec<Vec<u8>>,
}

fn connect(addr: &str, timeout: Duration) -> Result<TcpStream, TransportError> {
    let connect_err = |source| TransportError::Connect {
        addr: addr.to_owned(),
        source,
    };
    let mut last = io::Error::new(io::ErrorKind::NotFound, "address resolved to nothing");
    for sa in addr.to_socket_addrs().map_err(connect_err)? {
        match TcpStream::connect_timeout(&sa, timeout) {
            Ok(stream) => return Ok(stream),
            Err(e) => last = e,
        }
    }
    Err(connect_err(last))
}

/// Runs the sender side of one exchange against a responder at
/// `connect_address`.
pub fn run_initiator(
    connect_address: &str,
    config: &InitiatorConfig,
    plaintext: &str,
) -> Result<WireTranscript, TransportError> {
    let timeout = config.timeout;
    let stream = connect(connect_address, timeout)?;
    let io_err = |e| TransportError::io(connect_address, e, timeout);
    stream.set_read_timeout(Some(timeout)).map_err(io_err)?;
    stream.set_write_timeout(Some(timeout)).map_err(io_err)?;
    let mut writer = stream.try_clone().map_err(io_err)?;
    let mut reader = BufReader::new(stream);
    let mut frames = Vec::new();

    let mut session =
        ThreePassSession::sender(config.sender_key.clone(), config.mode, config.policy, config.session_id);
    let plain = MessageText::parse(plaintext, config.policy);
    let c1 = session.sender_pass1(&plain)?;

    let make = |pass, text: &MessageText| Frame {
        session_id: config.session_id,
        pass,
        mode: config.mode,
        policy: config.policy,
        payload: text.as_str().to_owned(),
    };

    let out = encode_frame(&make(PassNumber::FIRST, &c1));
    writer.write_all(&out).map_err(io_err)?;
    frames.push(out);

    let line = read_line(&mut reader)
        .map_err(io_err)?
        .ok_or(TransportError::ConnectionClosed)?;
    frames.push(line.clone());
    let reply = match decode_message(&line)? {
        Message::Error { reason, .. } => return Err(TransportError::RemoteError(reason)),
        Message::Pass(f) => f,
    };
    if reply.session_id != config.session_id
        || reply.pass != PassNumber::SECOND
        || reply.mode != config.mode
        || reply.policy != config.policy
    {
        return Err(TransportError::UnexpectedFrame(
            String::from_utf8_lossy(&line).trim_end().to_owned(),
        ));
    }
    let c2 = MessageText::parse(&reply.payload, config.policy);
    let c3 = session.sender_pass3(&c2)?;

    let out = encode_frame(&make(PassNumber::THIRD, &c3));
    writer.write_all(&out).map_err(io_err)?;
    frames.push(out);
    writer.shutdown(Shutdown::Write).map_err(io_err)?;

    // wait for the responder to hang up; an ERR here means pass 3 was refused
    if let Some(line) = read_line(&mut reader).map_err(io_err)? {
        frames.push(line.clone());
        return match decode_message(&line)? {
            Message::Error { reason, .. } => Err(TransportError::RemoteError(reason)),
            Message::Pass(_) => Err(TransportError::UnexpectedFrame(
                String::from_utf8_lossy(&line).trim_end().to_owned(),
            )),
        };
    }

    Ok(WireTranscript {
        session_id: config.session_id,
        first_ciphertext: c1,
        second_ciphertext: c2,
        third_ciphertext: c3,
        frames,
    })
}
