use std::io::{BufRead, BufReader, Write};
use std::net::{SocketAddr, TcpListener, TcpStream};
use std::sync::mpsc::{self, Receiver};
use std::thread::{self, JoinHandle};
use std::time::Duration;

use keyless_vigenere::transport::*;
use keyless_vigenere::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};

const PLAIN: &str = "THE FAMILY AND THE FAV";

fn key(k: &str) -> UserKey {
    UserKey::parse(k).unwrap()
}

fn spawn_responder(
    recipient_key: &str,
    mode: KeyMode,
    connections: usize,
) -> (SocketAddr, Receiver<ResponderEvent>, JoinHandle<()>) {
    let config = ResponderConfig::new(key(recipient_key), mode, TextPolicy::default());
    let responder = Responder::bind("127.0.0.1:0", config).unwrap();
    let addr = responder.local_addr();
    let (tx, rx) = mpsc::channel();
    let handle = thread::spawn(move || responder.serve(tx, Some(connections)).unwrap());
    (addr, rx, handle)
}

fn initiator(sender_key: &str, mode: KeyMode, sid: u64) -> InitiatorConfig {
    InitiatorConfig::new(key(sender_key), mode, TextPolicy::default(), SessionId(sid))
}

#[test]
fn worked_exchange_over_loopback() {
    let (addr, events, server) = spawn_responder("BUNG", KeyMode::Generated, 1);
    let t = run_initiator(&addr.to_string(), &initiator("KEY", KeyMode::Generated, 0xabc), PLAIN).unwrap();
    assert_eq!(t.first_ciphertext.as_str(), "DLC GFWYID OLM OPA QBN");
    assert_eq!(t.second_ciphertext.as_str(), "EFP MPLTKN HOA OCB GHK");
    assert_eq!(t.third_ciphertext.as_str(), "UBR LKBDNI TQR TUF VGS");
    assert_eq!(t.frames.len(), 3);
    assert_eq!(
        t.frames[0],
        encode_frame(&Frame {
            session_id: SessionId(0xabc),
            pass: PassNumber::FIRST,
            mode: KeyMode::Generated,
            policy: TextPolicy::default(),
            payload: "DLC GFWYID OLM OPA QBN".into(),
        })
    );
    server.join().unwrap();
    match events.recv().unwrap() {
        ResponderEvent::Delivered(d) => {
            assert_eq!(d.session_id, SessionId(0xabc));
            assert_eq!(d.plaintext.as_str(), PLAIN);
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn frames_do_not_leak_keys() {
    let (addr, _events, server) = spawn_responder("QUARTZBUNG", KeyMode::Generated, 5);
    let mut rng = rand::rngs::StdRng::seed_from_u64(11);
    for i in 0..5 {
        let text: String = (0..120).map(|_| (b'A' + rng.gen_range(0..26)) as char).collect();
        let t = run_initiator(&addr.to_string(), &initiator("SENDERKEY", KeyMode::Generated, i), &text).unwrap();
        let wire: Vec<u8> = t.frames.concat();
        let wire = String::from_utf8(wire).unwrap();
        let mut payloads = String::new();
        for f in &t.frames {
            payloads.push_str(&decode_frame(f).unwrap().payload);
        }
        for k in ["SENDERKEY", "QUARTZBUNG"] {
            let stream = extend_key(k, 120, KeyMode::Generated).unwrap().to_string();
            assert!(!wire.contains(&stream));
            assert!(!payloads.contains(&stream));
        }
        assert_eq!(t.frames.len(), 3);
    }
    server.join().unwrap();
}

#[test]
fn concurrent_initiators() {
    let (addr, events, server) = spawn_responder("BUNG", KeyMode::Generated, 2);
    let a = thread::spawn(move || run_initiator(&addr.to_string(), &initiator("KEY", KeyMode::Generated, 1), PLAIN));
    let b = thread::spawn(move || {
        run_initiator(
            &addr.to_string(),
            &initiator("OTHER", KeyMode::Generated, 2),
            "A SECOND MESSAGE",
        )
    });
    a.join().unwrap().unwrap();
    b.join().unwrap().unwrap();
    server.join().unwrap();
    let mut got: Vec<(u64, String)> = events
        .iter()
        .map(|e| match e {
            ResponderEvent::Delivered(d) => (d.session_id.0, d.plaintext.into_string()),
            other => panic!("unexpected {other:?}"),
        })
        .collect();
    got.sort();
    assert_eq!(got, vec![(1, PLAIN.to_string()), (2, "A SECOND MESSAGE".to_string())]);
}

fn raw_client(addr: SocketAddr) -> (TcpStream, BufReader<TcpStream>) {
    let s = TcpStream::connect(addr).unwrap();
    s.set_read_timeout(Some(Duration::from_secs(5))).unwrap();
    let r = BufReader::new(s.try_clone().unwrap());
    (s, r)
}

fn read_line(r: &mut BufReader<TcpStream>) -> String {
    let mut line = String::new();
    r.read_line(&mut line).unwrap();
    line
}

#[test]
fn interleaved_sessions_on_one_connection() {
    let (addr, events, server) = spawn_responder("BUNG", KeyMode::Generated, 1);
    let (mut w, mut r) = raw_client(addr);
    let policy = TextPolicy::default();
    let mut sessions: Vec<ThreePassSession> = (1..=2)
        .map(|i| ThreePassSession::sender(key("KEY"), KeyMode::Generated, policy, SessionId(i)))
        .collect();
    let texts = [PLAIN, "INTERLEAVED"];
    for (s, t) in sessions.iter_mut().zip(texts) {
        let c1 = s.sender_pass1(&MessageText::new(t)).unwrap();
        let f = Frame {
            session_id: s.session_id(),
            pass: PassNumber::FIRST,
            mode: s.mode(),
            policy,
            payload: c1.into_string(),
        };
        w.write_all(&encode_frame(&f)).unwrap();
    }
    for _ in 0..2 {
        let reply = decode_frame(read_line(&mut r).as_bytes()).unwrap();
        assert_eq!(reply.pass, PassNumber::SECOND);
        let s = sessions
            .iter_mut()
            .find(|s| s.session_id() == reply.session_id)
            .unwrap();
        let c3 = s.sender_pass3(&MessageText::new(&reply.payload)).unwrap();
        let f = Frame {
            session_id: s.session_id(),
            pass: PassNumber::THIRD,
            mode: s.mode(),
            policy,
            payload: c3.into_string(),
        };
        w.write_all(&encode_frame(&f)).unwrap();
    }
    w.shutdown(std::net::Shutdown::Write).unwrap();
    assert_eq!(read_line(&mut r), "");
    server.join().unwrap();
    let mut got: Vec<String> = events
        .iter()
        .filter_map(|e| match e {
            ResponderEvent::Delivered(d) => Some(d.plaintext.into_string()),
            _ => None,
        })
        .collect();
    got.sort();
    assert_eq!(got, vec!["INTERLEAVED".to_string(), PLAIN.to_string()]);
}

#[test]
fn pass3_first_is_rejected() {
    let (addr, events, server) = spawn_responder("BUNG", KeyMode::Generated, 1);
    let (mut w, mut r) = raw_client(addr);
    let f = Frame {
        session_id: SessionId(9),
        pass: PassNumber::THIRD,
        mode: KeyMode::Generated,
        policy: TextPolicy::default(),
        payload: "UBR LKBDNI TQR TUF VGS".into(),
    };
    w.write_all(&encode_frame(&f)).unwrap();
    let line = read_line(&mut r);
    assert_eq!(
        decode_message(line.as_bytes()).unwrap(),
        Message::Error {
            session_id: SessionId(9),
            reason: "protocol violation: pass 3 before pass 1".into()
        }
    );
    drop(w);
    drop(r);
    server.join().unwrap();
    assert!(matches!(
        events.recv().unwrap(),
        ResponderEvent::Rejected {
            session_id: SessionId(9),
            ..
        }
    ));
}

#[test]
fn garbage_line_gets_error_frame_and_close() {
    let (addr, _events, server) = spawn_responder("BUNG", KeyMode::Generated, 1);
    let (mut w, mut r) = raw_client(addr);
    w.write_all(b"HELLO THERE\n").unwrap();
    let line = read_line(&mut r);
    assert!(
        line.starts_with("TPP/1 0000000000000000 ERR unsupported version"),
        "{line}"
    );
    assert_eq!(read_line(&mut r), "");
    server.join().unwrap();
}

#[test]
fn mode_mismatch_is_remote_error() {
    let (addr, _events, server) = spawn_responder("BUNG", KeyMode::StandardRepeat, 2);
    let err = run_initiator(&addr.to_string(), &initiator("KEY", KeyMode::Generated, 3), PLAIN).unwrap_err();
    assert!(
        matches!(&err, TransportError::RemoteError(r) if r == "mode mismatch"),
        "{err}"
    );
    // and the same pair with agreeing modes works
    run_initiator(&addr.to_string(), &initiator("KEY", KeyMode::StandardRepeat, 4), PLAIN).unwrap();
    server.join().unwrap();
}

#[test]
fn policy_mismatch_is_remote_error() {
    let (addr, _events, server) = spawn_responder("BUNG", KeyMode::Generated, 1);
    let mut cfg = initiator("KEY", KeyMode::Generated, 3);
    cfg.policy = TextPolicy::new(NonAlphaPolicy::Strip, CasePolicy::Upper);
    let err = run_initiator(&addr.to_string(), &cfg, PLAIN).unwrap_err();
    assert!(
        matches!(&err, TransportError::RemoteError(r) if r == "policy mismatch"),
        "{err}"
    );
    server.join().unwrap();
}

#[test]
fn unreachable_address() {
    let port = {
        let l = TcpListener::bind("127.0.0.1:0").unwrap();
        l.local_addr().unwrap().port()
    };
    let err = run_initiator(
        &format!("127.0.0.1:{port}"),
        &initiator("KEY", KeyMode::Generated, 1),
        PLAIN,
    )
    .unwrap_err();
    assert!(matches!(err, TransportError::Connect { .. }), "{err}");
    let err = run_initiator("not-an-address", &initiator("KEY", KeyMode::Generated, 1), PLAIN).unwrap_err();
    assert!(matches!(err, TransportError::Connect { .. }), "{err}");
}

#[test]
fn silent_peer_times_out() {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap();
    let hold = thread::spawn(move || {
        let (s, _) = listener.accept().unwrap();
        thread::sleep(Duration::from_millis(800));
        drop(s);
    });
    let mut cfg = initiator("KEY", KeyMode::Generated, 1);
    cfg.timeout = Duration::from_millis(200);
    let err = run_initiator(&addr.to_string(), &cfg, PLAIN).unwrap_err();
    assert!(matches!(err, TransportError::TimedOut(_)), "{err}");
    hold.join().unwrap();
}

#[test]
fn bind_error_names_address() {
    let err = Responder::bind(
        "256.0.0.1:1",
        ResponderConfig::new(key("A"), KeyMode::Generated, TextPolicy::default()),
    )
    .err()
    .unwrap();
    assert!(err.to_string().contains("256.0.0.1:1"));
}

fn any_frame() -> impl Strategy<Value = Frame> {
    (
        any::<u64>(),
        1u8..=3,
        prop_oneof![Just(KeyMode::Generated), Just(KeyMode::StandardRepeat)],
        prop_oneof![Just("PU"), Just("PP"), Just("SU"), Just("SP")],
        any::<String>(),
    )
        .prop_map(|(sid, pass, mode, policy, payload)| Frame {
            session_id: SessionId(sid),
            pass: PassNumber::new(pass).unwrap(),
            mode,
            policy: TextPolicy::from_tag(policy).unwrap(),
            payload,
        })
}

proptest! {
    #[test]
    fn codec_round_trip(f in any_frame()) {
        let bytes = encode_frame(&f);
        prop_assert_eq!(bytes.iter().filter(|&&b| b == b'\n').count(), 1);
        prop_assert_eq!(decode_frame(&bytes).unwrap(), f);
    }

    #[test]
    fn decode_never_panics(line in proptest::collection::vec(any::<u8>(), 0..200)) {
        let _ = decode_message(&line);
    }
}
