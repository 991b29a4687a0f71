//! Line protocol for oracles running as child processes.
//!
//! Each request is one line: the escaped query name, a TAB, the escaped
//! string, then `\n`. Escaping replaces `\` with `\\`, TAB with `\t`, LF with
//! `\n` and CR with `\r`; every other byte is sent as is. The child answers
//! each request with one line holding `1` (accept) or `0` (reject); a trailing
//! `\r` on the reply is ignored. Requests are strictly sequential.

use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::process::{Child, ChildStdin, ChildStdout, Command, Stdio};
use std::sync::Mutex;

use super::{Oracle, OracleError};
use crate::syntax::Query;

pub fn encode_field(raw: &[u8], out: &mut Vec<u8>) {
    for &b in raw {
        match b {
            b'\\' => out.extend_from_slice(b"\\\\"),
            b'\t' => out.extend_from_slice(b"\\t"),
            b'\n' => out.extend_from_slice(b"\\n"),
            b'\r' => out.extend_from_slice(b"\\r"),
            _ => out.push(b),
        }
    }
}

/// Inverse of [`encode_field`]. `None` on a dangling or unknown escape.
pub fn decode_field(field: &[u8]) -> Option<Vec<u8>> {
    let mut out = Vec::with_capacity(field.len());
    let mut it = field.iter();
    while let Some(&b) = it.next() {
        if b != b'\\' {
            out.push(b);
            continue;
        }
        out.push(match it.next()? {
            b'\\' => b'\\',
            b't' => b'\t',
            b'n' => b'\n',
            b'r' => b'\r',
            _ => return None,
        });
    }
    Some(out)
}

/// The full request line for one evaluation, including the newline.
pub fn encode_request(query: &Query, text: &[u8]) -> Vec<u8> {
    let mut line = Vec::with_capacity(query.name().len() + text.len() + 2);
    encode_field(query.name().as_bytes(), &mut line);
    line.push(b'\t');
    encode_field(text, &mut line);
    line.push(b'\n');
    line
}

struct ChildIo {
    child: Child,
    stdin: ChildStdin,
    stdout: BufReader<ChildStdout>,
}

/// Forwards every evaluation to a long-running child process.
pub struct ProcessOracle {
    command: String,
    io: Mutex<Option<ChildIo>>,
}

impl ProcessOracle {
    /// Runs `command` through `sh -c`, optionally in directory `cwd`.
    pub fn spawn(command: &str, cwd: Option<&Path>) -> Result<Self, OracleError> {
        let mut cmd = Command::new("sh");
        cmd.arg("-c")
            .arg(command)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit());
        if let Some(dir) = cwd {
            cmd.current_dir(dir);
        }
        let mut child = cmd.spawn().map_err(|e| OracleError::Process {
            command: command.to_string(),
            message: format!("spawn failed: {e}"),
        })?;
        let stdin = child.stdin.take().expect("piped stdin");
        let stdout = BufReader::new(child.stdout.take().expect("piped stdout"));
        Ok(ProcessOracle {
            command: command.to_string(),
            io: Mutex::new(Some(ChildIo { child, stdin, stdout })),
        })
    }

    pub fn command(&self) -> &str {
        &self.command
    }

    fn failure(&self, message: impl Into<String>) -> OracleError {
        OracleError::Process {
            command: self.command.clone(),
            message: message.into(),
        }
    }
}

impl Oracle for ProcessOracle {
    fn evaluate(&self, query: &Query, text: &[u8]) -> Result<bool, OracleError> {
        let mut guard = self.io.lock().unwrap_or_else(|p| p.into_inner());
        let io = guard.as_mut().ok_or_else(|| self.failure("child exited earlier"))?;
        let request = encode_request(query, text);
        let sent = io.stdin.write_all(&request).and_then(|_| io.stdin.flush());
        if let Err(e) = sent {
            *guard = None;
            return Err(self.failure(format!("write failed: {e}")));
        }
        let mut reply = Vec::new();
        match io.stdout.read_until(b'\n', &mut reply) {
            Ok(0) => {
                *guard = None;
                return Err(self.failure("child exited before replying"));
            }
            Ok(_) => {}
            Err(e) => {
                *guard = None;
                return Err(self.failure(format!("read failed: {e}")));
            }
        }
        let body = reply.strip_suffix(b"\n").unwrap_or(&reply);
        let body = body.strip_suffix(b"\r").unwrap_or(body);
        match body {
            b"1" => Ok(true),
            b"0" => Ok(false),
            other => Err(OracleError::Protocol {
                command: self.command.clone(),
                message: format!("expected 1 or 0, got {:?}", String::from_utf8_lossy(other)),
            }),
        }
    }
}

impl Drop for ProcessOracle {
    fn drop(&mut self) {
        if let Some(mut io) = self.io.get_mut().unwrap_or_else(|p| p.into_inner()).take() {
            drop(io.stdin);
            let _ = io.child.kill();
            let _ = io.child.wait();
        }
    }
}
