//! Command-line interface.
//!
//! Exit status: 0 success (for `attack`, the cipher was broken), 1 `attack`
//! verdict was Resisted, 2 invalid key or arguments, 3 I/O or network
//! failure, 4 protocol failure or error reported by the peer.

use std::fs::{self, OpenOptions};
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::sync::mpsc;
use std::thread;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use rand::rngs::StdRng;
use rand::SeedableRng;

use crate::cipher::{decrypt, encrypt};
use crate::cryptanalysis::{attack_with, AttackConfig, FrequencyTable, Verdict};
use crate::error::ProtocolError;
use crate::key::{KeyMode, UserKey};
use crate::text::{CasePolicy, MessageText, NonAlphaPolicy, TextPolicy};
use crate::threepass::{run_local_exchange, SessionId};
use crate::transport::{run_initiator, InitiatorConfig, Responder, ResponderConfig, ResponderEvent, TransportError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_RESISTED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_PROTOCOL: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "keyless-vigenere",
    version,
    about = "Vigenère with a generated keystream, three-pass exchange, Kasiski attack"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Encrypt text with a key.
    Encrypt(CipherArgs),
    /// Decrypt text with a key.
    Decrypt(CipherArgs),
    /// Print the key stream for a given length.
    Keygen(KeygenArgs),
    /// Three-pass exchange.
    #[command(subcommand)]
    Threepass(ThreepassCommand),
    /// Run the Kasiski attack on a ciphertext.
    Attack(AttackArgs),
}

#[derive(Debug, Subcommand)]
pub enum ThreepassCommand {
    /// Run both parties in-process and print the transcript.
    Local(LocalArgs),
    /// Act as the recipient, listening for senders.
    Serve(ServeArgs),
    /// Act as the sender against a listening recipient.
    Send(SendArgs),
}

#[derive(Debug, Clone, Args)]
pub struct PolicyArgs {
    /// Key extension mode.
    #[arg(long, default_value = "generated", value_name = "standard|generated")]
    pub mode: KeyMode,
    /// What to do with characters other than A-Z.
    #[arg(long = "non-alpha", default_value = "preserve", value_name = "preserve|strip")]
    pub non_alpha: NonAlphaPolicy,
    /// Letter case handling.
    #[arg(long = "case", default_value = "upper", value_name = "upper|preserve")]
    pub case: CasePolicy,
}

impl PolicyArgs {
    fn text_policy(&self) -> TextPolicy {
        TextPolicy::new(self.non_alpha, self.case)
    }
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Input file, or `-` for standard input (the default).
    #[arg(long = "in", value_name = "PATH|-", conflicts_with = "text")]
    pub input: Option<String>,
    /// Inline input text.
    #[arg(long)]
    pub text: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file, or `-` for standard output (the default).
    #[arg(long = "out", value_name = "PATH|-", default_value = "-")]
    pub output: String,
}

#[derive(Debug, Args)]
pub struct CipherArgs {
    #[arg(long)]
    pub key: String,
    #[command(flatten)]
    pub policy: PolicyArgs,
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct KeygenArgs {
    #[arg(long)]
    pub key: String,
    #[arg(long)]
    pub length: usize,
    #[arg(long, default_value = "generated", value_name = "standard|generated")]
    pub mode: KeyMode,
}

#[derive(Debug, Args)]
pub struct LocalArgs {
    #[arg(long = "sender-key")]
    pub sender_key: String,
    #[arg(long = "recipient-key")]
    pub recipient_key: String,
    #[command(flatten)]
    pub policy: PolicyArgs,
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, value_name = "HOST:PORT")]
    pub listen: String,
    #[arg(long = "recipient-key", alias = "key")]
    pub recipient_key: String,
    #[command(flatten)]
    pub policy: PolicyArgs,
    /// Where recovered plaintexts are written.
    #[command(flatten)]
    pub output: OutputArgs,
    /// Idle timeout per connection, in seconds.
    #[arg(long, default_value_t = 10)]
    pub timeout: u64,
    /// Stop after serving this many connections.
    #[arg(long = "max-connections")]
    pub max_connections: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SendArgs {
    #[arg(long, value_name = "HOST:PORT")]
    pub connect: String,
    #[arg(long = "sender-key", alias = "key")]
    pub sender_key: String,
    #[command(flatten)]
    pub policy: PolicyArgs,
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[arg(long, default_value_t = 10)]
    pub timeout: u64,
    /// Seed for the session id; without it the id is random.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct AttackArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Print flat key=value lines instead of the human-readable report.
    #[arg(long)]
    pub machine: bool,
    /// Chi-squared per letter below which the decryption counts as English.
    #[arg(long, default_value_t = crate::cryptanalysis::DEFAULT_BROKEN_THRESHOLD)]
    pub threshold: f64,
    /// Letter frequency table, `<LETTER> <frequency>` per line.
    #[arg(long = "freq-table", value_name = "PATH")]
    pub freq_table: Option<PathBuf>,
}

/// A failure with the exit status it maps to.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl ToString) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.to_string(),
        }
    }

    fn io(message: impl ToString) -> Self {
        Failure {
            code: EXIT_IO,
            message: message.to_string(),
        }
    }
}

impl From<TransportError> for Failure {
    fn from(e: TransportError) -> Self {
        let code = match &e {
            TransportError::Bind { .. }
            | TransportError::Connect { .. }
            | TransportError::Io { .. }
            | TransportError::TimedOut(_)
            | TransportError::ConnectionClosed => EXIT_IO,
            _ => EXIT_PROTOCOL,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
}

impl Io<'_> {
    /// Reads the selected input. The flag tells whether it was inline text.
    fn read_input(&mut self, args: &InputArgs) -> Result<(String, bool), Failure> {
        if let Some(text) = &args.text {
            return Ok((text.clone(), true));
        }
        let bytes = match args.input.as_deref() {
            None | Some("-") => {
                let mut buf = Vec::new();
                self.stdin
                    .read_to_end(&mut buf)
                    .map_err(|e| Failure::io(format!("reading standard input: {e}")))?;
                buf
            }
            Some(path) => fs::read(path).map_err(|e| Failure::io(format!("reading {path}: {e}")))?,
        };
        let text = String::from_utf8(bytes).map_err(|_| Failure::io("input is not valid UTF-8"))?;
        Ok((text, false))
    }

    fn write_output(&mut self, args: &OutputArgs, text: &str) -> Result<(), Failure> {
        if args.output == "-" {
            self.stdout
                .write_all(text.as_bytes())
                .and_then(|_| self.stdout.flush())
                .map_err(|e| Failure::io(format!("writing standard output: {e}")))
        } else {
            fs::write(&args.output, text).map_err(|e| Failure::io(format!("writing {}: {e}", args.output)))
        }
    }
}

fn parse_key(key: &str) -> Result<UserKey, Failure> {
    UserKey::parse(key).map_err(|e| Failure::usage(format!("invalid key: {e}")))
}

/// Runs the CLI against the given argument list and streams, returning the
/// exit status.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    let mut io = Io { stdin, stdout, stderr };
    match dispatch(cli.command, &mut io) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(io.stderr, "error: {}", f.message);
            f.code
        }
    }
}

/// Entry point for the binary.
pub fn main() -> i32 {
    run(
        std::env::args_os(),
        &mut io::stdin().lock(),
        &mut io::stdout().lock(),
        &mut io::stderr().lock(),
    )
}

fn dispatch(command: Command, io: &mut Io<'_>) -> Result<i32, Failure> {
    match command {
        Command::Encrypt(args) => cmd_cipher(args, io, true),
        Command::Decrypt(args) => cmd_cipher(args, io, false),
        Command::Keygen(args) => cmd_keygen(args, io),
        Command::Threepass(ThreepassCommand::Local(args)) => cmd_threepass_local(args, io),
        Command::Threepass(ThreepassCommand::Serve(args)) => cmd_threepass_serve(args, io),
        Command::Threepass(ThreepassCommand::Send(args)) => cmd_threepass_send(args, io),
        Command::Attack(args) => cmd_attack(args, io),
    }
}

fn cmd_cipher(args: CipherArgs, io: &mut Io<'_>, forward: bool) -> Result<i32, Failure> {
    let key = parse_key(&args.key)?;
    let (input, inline) = io.read_input(&args.input)?;
    let text = MessageText::parse(&input, args.policy.text_policy());
    let stream = key.extend(text.letter_count(), args.policy.mode);
    let out = if forward {
        encrypt(&text, &stream)
    } else {
        decrypt(&text, &stream)
    }
    .expect("stream is sized to the text");
    let mut out = out.into_string();
    if inline {
        out.push('\n');
    }
    io.write_output(&args.output, &out)?;
    Ok(EXIT_OK)
}

fn cmd_keygen(args: KeygenArgs, io: &mut Io<'_>) -> Result<i32, Failure> {
    let key = parse_key(&args.key)?;
    let stream = key.extend(args.length, args.mode);
    writeln!(io.stdout, "{stream}").map_err(|e| Failure::io(format!("writing standard output: {e}")))?;
    Ok(EXIT_OK)
}

fn cmd_threepass_local(args: LocalArgs, io: &mut Io<'_>) -> Result<i32, Failure> {
    parse_key(&args.sender_key)?;
    parse_key(&args.recipient_key)?;
    let (input, _) = io.read_input(&args.input)?;
    let transcript = run_local_exchange(
        &input,
        &args.sender_key,
        &args.recipient_key,
        args.policy.mode,
        args.policy.text_policy(),
    )
    .map_err(|e| match e {
        ProtocolError::Cipher(e) => Failure::usage(e),
        e => Failure {
            code: EXIT_PROTOCOL,
            message: e.to_string(),
        },
    })?;
    let out = format!(
        "First Ciphertext  : {}\nSecond Ciphertext : {}\nThird Ciphertext  : {}\nPlaintext         : {}\n",
        transcript.first_ciphertext, transcript.second_ciphertext, transcript.third_ciphertext, transcript.plaintext
    );
    io.write_output(&args.output, &out)?;
    Ok(EXIT_OK)
}

fn cmd_threepass_serve(args: ServeArgs, io: &mut Io<'_>) -> Result<i32, Failure> {
    let key = parse_key(&args.recipient_key)?;
    let mut config = ResponderConfig::new(key, args.policy.mode, args.policy.text_policy());
    config.timeout = Duration::from_secs(args.timeout);
    let responder = Responder::bind(&args.listen, config)?;
    let _ = writeln!(io.stderr, "listening on {}", responder.local_addr());
    let _ = io.stderr.flush();

    if args.output.output != "-" {
        // start from an empty sink; deliveries are appended below
        fs::write(&args.output.output, "").map_err(|e| Failure::io(format!("writing {}: {e}", args.output.output)))?;
    }
    let (tx, rx) = mpsc::channel();
    let max = args.max_connections;
    let server = thread::spawn(move || responder.serve(tx, max));

    for event in rx {
        match event {
            ResponderEvent::Delivered(d) => {
                let mut text = d.plaintext.into_string();
                if !text.ends_with('\n') {
                    text.push('\n');
                }
                if args.output.output == "-" {
                    io.stdout
                        .write_all(text.as_bytes())
                        .and_then(|_| io.stdout.flush())
                        .map_err(|e| Failure::io(format!("writing standard output: {e}")))?;
                } else {
                    OpenOptions::new()
                        .append(true)
                        .open(&args.output.output)
                        .and_then(|mut f| f.write_all(text.as_bytes()))
                        .map_err(|e| Failure::io(format!("writing {}: {e}", args.output.output)))?;
                }
                let _ = writeln!(io.stderr, "session {} from {}: delivered", d.session_id, d.peer);
            }
            ResponderEvent::Rejected {
                peer,
                session_id,
                reason,
            } => {
                let _ = writeln!(io.stderr, "session {session_id} from {peer}: rejected: {reason}");
            }
        }
    }
    server.join().expect("responder thread panicked")?;
    Ok(EXIT_OK)
}

fn cmd_threepass_send(args: SendArgs, io: &mut Io<'_>) -> Result<i32, Failure> {
    let key = parse_key(&args.sender_key)?;
    let (input, _) = io.read_input(&args.input)?;
    let session_id = match args.seed {
        Some(seed) => SessionId::random(&mut StdRng::seed_from_u64(seed)),
        None => SessionId::random(&mut rand::thread_rng()),
    };
    let mut config = InitiatorConfig::new(key, args.policy.mode, args.policy.text_policy(), session_id);
    config.timeout = Duration::from_secs(args.timeout);
    let transcript = run_initiator(&args.connect, &config, &input)?;
    let out = format!(
        "Session           : {}\nFirst Ciphertext  : {}\nSecond Ciphertext : {}\nThird Ciphertext  : {}\n",
        transcript.session_id, transcript.first_ciphertext, transcript.second_ciphertext, transcript.third_ciphertext
    );
    io.write_output(&args.output, &out)?;
    Ok(EXIT_OK)
}

fn cmd_attack(args: AttackArgs, io: &mut Io<'_>) -> Result<i32, Failure> {
    if !(args.threshold.is_finite() && args.threshold > 0.0) {
        return Err(Failure::usage("threshold must be a positive number"));
    }
    let table = match &args.freq_table {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::io(format!("reading {}: {e}", path.display())))?;
            FrequencyTable::parse(&text).map_err(Failure::usage)?
        }
        None => FrequencyTable::english(),
    };
    let config = AttackConfig {
        threshold: args.threshold,
        table,
        ..AttackConfig::default()
    };
    let (input, _) = io.read_input(&args.input)?;
    let report = attack_with(&MessageText::new(&input), &config);
    let out = if args.machine {
        report.to_machine_lines()
    } else {
        format!("{report}\n")
    };
    io.write_output(&args.output, &out)?;
    Ok(match report.verdict {
        Verdict::Broken => EXIT_OK,
        Verdict::Resisted => EXIT_RESISTED,
    })
}
