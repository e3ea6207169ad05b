//! External compressor adapters and a single type covering every spec.

use std::io::Write;
use std::process::{Command, Stdio};

use infodist_core::{Compressor, CompressorSpec, Error as CoreError, LzCompressor};

/// A command that reads data on stdin and writes the compressed stream to
/// stdout. Size is 8 times the number of output bytes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExternalCompressor {
    command: String,
    argv: Vec<String>,
    header_bits: u64,
}

impl ExternalCompressor {
    /// Runs the command once on empty input; its output size becomes the
    /// header overhead.
    pub fn new(command: &str) -> Result<Self, CoreError> {
        let argv: Vec<String> = command
            .split_whitespace()
            .map(|a| if a == "{in}" { "-".to_owned() } else { a.to_owned() })
            .collect();
        if argv.is_empty() {
            return Err(CoreError::InvalidCompressor("empty external command".into()));
        }
        let mut c = ExternalCompressor {
            command: command.to_owned(),
            argv,
            header_bits: 0,
        };
        c.header_bits = c.run(&[])?;
        Ok(c)
    }

    pub fn command(&self) -> &str {
        &self.command
    }

    fn fail(&self, message: impl Into<String>) -> CoreError {
        CoreError::Compressor {
            command: self.command.clone(),
            message: message.into(),
        }
    }

    fn run(&self, data: &[u8]) -> Result<u64, CoreError> {
        let mut child = Command::new(&self.argv[0])
            .args(&self.argv[1..])
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .map_err(|e| self.fail(format!("cannot start: {e}")))?;
        let mut stdin = child.stdin.take().expect("stdin is piped");
        let output = std::thread::scope(|s| {
            let writer = s.spawn(move || stdin.write_all(data));
            let output = child.wait_with_output();
            (writer.join().expect("stdin writer panicked"), output)
        });
        let output = match output {
            (_, Err(e)) => return Err(self.fail(e.to_string())),
            (Err(e), Ok(_)) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                return Err(self.fail(format!("writing input: {e}")))
            }
            (_, Ok(out)) => out,
        };
        if !output.status.success() {
            let stderr = String::from_utf8_lossy(&output.stderr);
            return Err(self.fail(format!("exited with {}: {}", output.status, stderr.trim())));
        }
        Ok(8 * output.stdout.len() as u64)
    }
}

impl Compressor for ExternalCompressor {
    fn compressed_bits(&self, data: &[u8]) -> Result<u64, CoreError> {
        self.run(data)
    }

    fn header_bits(&self) -> u64 {
        self.header_bits
    }
}

/// The compressor described by a [`CompressorSpec`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyCompressor {
    Builtin(LzCompressor),
    External(ExternalCompressor),
}

impl AnyCompressor {
    pub fn from_spec(spec: &CompressorSpec) -> Result<Self, CoreError> {
        match spec {
            CompressorSpec::BuiltinLz { window, level } => {
                Ok(AnyCompressor::Builtin(LzCompressor::new(*window, *level)?))
            }
            CompressorSpec::External { command } => Ok(AnyCompressor::External(ExternalCompressor::new(command)?)),
        }
    }
}

impl Compressor for AnyCompressor {
    fn compressed_bits(&self, data: &[u8]) -> Result<u64, CoreError> {
        match self {
            AnyCompressor::Builtin(c) => Ok(c.compressed_bits(data)),
            AnyCompressor::External(c) => c.compressed_bits(data),
        }
    }

    fn header_bits(&self) -> u64 {
        match self {
            AnyCompressor::Builtin(c) => Compressor::header_bits(c),
            AnyCompressor::External(c) => c.header_bits,
        }
    }
}

/// Whether the spec can be used on this machine.
pub fn is_available(spec: &CompressorSpec) -> bool {
    AnyCompressor::from_spec(spec).is_ok()
}
