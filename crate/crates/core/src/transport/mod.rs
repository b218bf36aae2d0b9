//! Running the three-pass exchange between processes.
//!
//! [`frame`] is the pure line codec, [`net`] drives sessions over TCP.

pub mod frame;
pub mod net;

pub use frame::{
    decode_frame, decode_message, encode_error, encode_frame, encode_message, Frame, FrameError, Message, PassNumber,
};
pub use net::{
    run_initiator, run_responder, Delivery, InitiatorConfig, Responder, ResponderConfig, ResponderEvent,
    TransportError, WireTranscript, DEFAULT_TIMEOUT,
};
