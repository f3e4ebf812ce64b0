use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, Command, Stdio};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError};
use std::thread;
use std::time::Duration;

use serde::Serialize;
use serde_json::Value;

use super::Oracle;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::space::{FeatureVector, QueryResult, TargetVector};

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(60);

#[derive(Serialize)]
struct Request<'a> {
    x: &'a [f64],
}

/// Oracle backed by a child process speaking line-delimited JSON on its
/// standard input and output.
///
/// Each query writes `{"x":[...]}` and expects exactly one line back, either
/// `{"y":[...]}` or `{"infeasible":true}`. One request is in flight at a time.
pub struct ExternalOracle {
    child: Child,
    stdin: ChildStdin,
    lines: Receiver<std::io::Result<String>>,
    timeout: Duration,
    n_targets: Option<usize>,
}

impl ExternalOracle {
    pub fn spawn(program: &str, args: &[String], timeout: Duration) -> Result<Self> {
        let mut child = Command::new(program)
            .args(args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()?;
        let stdin = child.stdin.take().expect("stdin is piped");
        let stdout = child.stdout.take().expect("stdout is piped");
        let (tx, rx) = mpsc::channel();
        thread::spawn(move || {
            for line in BufReader::new(stdout).lines() {
                let stop = line.is_err();
                if tx.send(line).is_err() || stop {
                    break;
                }
            }
        });
        Ok(Self {
            child,
            stdin,
            lines: rx,
            timeout,
            n_targets: None,
        })
    }

    /// Splits `command` on whitespace into program and arguments.
    pub fn spawn_command_line(command: &str, timeout: Duration) -> Result<Self> {
        let mut parts = command.split_whitespace().map(str::to_owned);
        let program = parts.next().ok_or_else(|| Error::config("empty oracle command"))?;
        let args: Vec<String> = parts.collect();
        Self::spawn(&program, &args, timeout)
    }

    /// Rejects responses whose `y` does not have `m` components.
    pub fn expect_targets(mut self, m: usize) -> Self {
        self.n_targets = Some(m);
        self
    }

    fn exchange(&mut self, request: &str) -> Result<String> {
        self.stdin
            .write_all(request.as_bytes())
            .and_then(|_| self.stdin.write_all(b"\n"))
            .and_then(|_| self.stdin.flush())
            .map_err(|e| Error::protocol(format!("failed to write request: {e}"), request))?;
        match self.lines.recv_timeout(self.timeout) {
            Ok(Ok(line)) => Ok(line),
            Ok(Err(e)) => Err(Error::protocol(format!("failed to read response: {e}"), "")),
            Err(RecvTimeoutError::Timeout) => Err(Error::Timeout(self.timeout)),
            Err(RecvTimeoutError::Disconnected) => Err(Error::protocol("oracle process exited", request)),
        }
    }

    /// Decodes one response line.
    pub fn parse_response<T: Scalar>(line: &str, n_targets: Option<usize>) -> Result<QueryResult<T>> {
        let value: Value =
            serde_json::from_str(line).map_err(|e| Error::protocol(format!("invalid JSON: {e}"), line))?;
        let obj = value
            .as_object()
            .ok_or_else(|| Error::protocol("response is not a JSON object", line))?;
        if let Some(flag) = obj.get("infeasible") {
            return match flag {
                Value::Bool(true) if !obj.contains_key("y") => Ok(QueryResult::Infeasible),
                Value::Bool(false) if obj.contains_key("y") => Self::parse_y(obj, line, n_targets),
                _ => Err(Error::protocol("ambiguous infeasible flag", line)),
            };
        }
        Self::parse_y(obj, line, n_targets)
    }

    fn parse_y<T: Scalar>(
        obj: &serde_json::Map<String, Value>,
        line: &str,
        n_targets: Option<usize>,
    ) -> Result<QueryResult<T>> {
        let ys = obj
            .get("y")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::protocol("missing \"y\" array", line))?;
        let values = ys
            .iter()
            .map(|v| v.as_f64().map(T::lit))
            .collect::<Option<Vec<T>>>()
            .ok_or_else(|| Error::protocol("non-numeric entry in \"y\"", line))?;
        if let Some(m) = n_targets {
            if values.len() != m {
                return Err(Error::protocol(format!("expected {m} targets, got {}", values.len()), line));
            }
        }
        TargetVector::new(values)
            .map(QueryResult::Labeled)
            .map_err(|_| Error::protocol("non-finite target", line))
    }
}

impl<T: Scalar> Oracle<T> for ExternalOracle {
    fn query(&mut self, x: &FeatureVector<T>, _pool_index: Option<usize>) -> Result<QueryResult<T>> {
        let xs: Vec<f64> = x.iter().map(|v| v.as_f64()).collect();
        let request = serde_json::to_string(&Request { x: &xs })?;
        let line = self.exchange(&request)?;
        Self::parse_response(line.trim_end_matches('\r'), self.n_targets)
    }
}

impl Drop for ExternalOracle {
    fn drop(&mut self) {
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}
