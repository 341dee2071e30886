//! Language server over stdin/stdout: full-document sync, published
//! diagnostics, and hover showing semantic signatures.
//!
//! [`Server`] is transport-free so sessions can be scripted in tests;
//! [`serve`] adds Content-Length framing and coalesces bursts of edits so
//! only the newest version of a document is analysed.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{self, BufRead, Write};
use std::sync::mpsc;

use geomsem_core::{analyze, Analysis, Diagnostic, Severity, SourceSpan};
use serde_json::{json, Value};

pub const PARSE_ERROR: i64 = -32700;
pub const INVALID_REQUEST: i64 = -32600;
pub const METHOD_NOT_FOUND: i64 = -32601;
pub const INVALID_PARAMS: i64 = -32602;
pub const SERVER_NOT_INITIALIZED: i64 = -32002;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    Uninitialized,
    Running,
    ShutDown,
}

struct Document {
    version: i64,
    text: String,
    analysis: Option<Analysis>,
}

pub struct Server {
    phase: Phase,
    docs: BTreeMap<String, Document>,
    /// Documents changed since their last analysis.
    dirty: BTreeSet<String>,
    exit: Option<i32>,
}

impl Default for Server {
    fn default() -> Self {
        Self::new()
    }
}

/// 0-based LSP range from a 1-based span.
pub fn range(span: SourceSpan) -> Value {
    let pos = |line: u32, col: u32| json!({ "line": line.saturating_sub(1), "character": col.saturating_sub(1) });
    json!({ "start": pos(span.start_line, span.start_col), "end": pos(span.end_line, span.end_col) })
}

fn severity(s: Severity) -> u8 {
    match s {
        Severity::Error => 1,
        Severity::Warning => 2,
        Severity::Note => 3,
    }
}

fn to_lsp(uri: &str, d: &Diagnostic) -> Value {
    let related: Vec<_> = d
        .related
        .iter()
        .map(|r| json!({ "location": { "uri": uri, "range": range(r.span) }, "message": r.message }))
        .collect();
    let mut v = json!({
        "range": range(d.span),
        "severity": severity(d.severity),
        "code": d.code,
        "source": "geomsem",
        "message": d.message,
    });
    if !related.is_empty() {
        v["relatedInformation"] = Value::Array(related);
    }
    v
}

fn response(id: &Value, result: Value) -> Value {
    json!({ "jsonrpc": "2.0", "id": id, "result": result })
}

fn error(id: &Value, code: i64, message: &str) -> Value {
    json!({ "jsonrpc": "2.0", "id": id, "error": { "code": code, "message": message } })
}

fn notification(method: &str, params: Value) -> Value {
    json!({ "jsonrpc": "2.0", "method": method, "params": params })
}

impl Server {
    pub fn new() -> Self {
        Self { phase: Phase::Uninitialized, docs: BTreeMap::new(), dirty: BTreeSet::new(), exit: None }
    }

    /// Exit status once an `exit` notification arrived: 0 after a
    /// `shutdown` request, 1 otherwise.
    pub fn exit_code(&self) -> Option<i32> {
        self.exit
    }

    /// Handles one message; returns whatever must be sent right away.
    /// Document changes are only recorded; [`Server::flush`] analyses them.
    pub fn handle(&mut self, msg: &Value) -> Vec<Value> {
        let Some(method) = msg.get("method").and_then(Value::as_str) else {
            // Responses to server requests; we never send any.
            return Vec::new();
        };
        let params = msg.get("params").cloned().unwrap_or(Value::Null);
        match msg.get("id") {
            Some(id) => self.request(id, method, &params),
            None => {
                self.notify(method, &params);
                Vec::new()
            }
        }
    }

    fn request(&mut self, id: &Value, method: &str, params: &Value) -> Vec<Value> {
        match (self.phase, method) {
            (Phase::Uninitialized, "initialize") => {
                self.phase = Phase::Running;
                vec![response(
                    id,
                    json!({
                        "capabilities": { "textDocumentSync": 1, "hoverProvider": true },
                        "serverInfo": { "name": "geomsem", "version": env!("CARGO_PKG_VERSION") },
                    }),
                )]
            }
            (Phase::Uninitialized, _) => vec![error(id, SERVER_NOT_INITIALIZED, "server not initialized")],
            (Phase::ShutDown, _) => vec![error(id, INVALID_REQUEST, "server is shutting down")],
            (Phase::Running, "initialize") => vec![error(id, INVALID_REQUEST, "server already initialized")],
            (Phase::Running, "shutdown") => {
                // Edits received before shutdown still get their diagnostics.
                let mut out = self.flush();
                self.phase = Phase::ShutDown;
                out.push(response(id, Value::Null));
                out
            }
            (Phase::Running, "textDocument/hover") => {
                let (Some(uri), Some(line), Some(character)) = (
                    params.pointer("/textDocument/uri").and_then(Value::as_str),
                    params.pointer("/position/line").and_then(Value::as_u64),
                    params.pointer("/position/character").and_then(Value::as_u64),
                ) else {
                    return vec![error(id, INVALID_PARAMS, "expected textDocument.uri and position")];
                };
                // Answer from the newest text.
                let mut out = self.flush_one(uri);
                out.push(response(id, self.hover(uri, line as u32 + 1, character as u32 + 1)));
                out
            }
            (Phase::Running, _) => vec![error(id, METHOD_NOT_FOUND, &format!("unsupported method `{method}`"))],
        }
    }

    fn notify(&mut self, method: &str, params: &Value) {
        if method == "exit" {
            self.exit = Some(if self.phase == Phase::ShutDown { 0 } else { 1 });
            return;
        }
        if self.phase != Phase::Running {
            return;
        }
        let uri = params.pointer("/textDocument/uri").and_then(Value::as_str).map(str::to_owned);
        let version = params.pointer("/textDocument/version").and_then(Value::as_i64);
        match (method, uri) {
            ("textDocument/didOpen", Some(uri)) => {
                let text = params.pointer("/textDocument/text").and_then(Value::as_str).unwrap_or_default();
                self.update(uri, version.unwrap_or(0), text.to_owned(), true);
            }
            ("textDocument/didChange", Some(uri)) => {
                let text = params
                    .get("contentChanges")
                    .and_then(Value::as_array)
                    .and_then(|c| c.last())
                    .and_then(|c| c.get("text"))
                    .and_then(Value::as_str);
                if let (Some(text), Some(version)) = (text, version) {
                    self.update(uri, version, text.to_owned(), false);
                }
            }
            ("textDocument/didClose", Some(uri)) => {
                self.docs.remove(&uri);
                // Published by flush as an empty set.
                self.dirty.insert(uri);
            }
            _ => {}
        }
    }

    fn update(&mut self, uri: String, version: i64, text: String, open: bool) {
        if let Some(doc) = self.docs.get(&uri) {
            // Out-of-order or repeated versions never replace newer text.
            if version <= doc.version && !open {
                return;
            }
        }
        self.docs.insert(uri.clone(), Document { version, text, analysis: None });
        self.dirty.insert(uri);
    }

    /// Analyses every changed document and returns its diagnostics.
    pub fn flush(&mut self) -> Vec<Value> {
        let uris: Vec<String> = self.dirty.iter().cloned().collect();
        uris.iter().flat_map(|u| self.flush_one(u)).collect()
    }

    fn flush_one(&mut self, uri: &str) -> Vec<Value> {
        if !self.dirty.remove(uri) {
            return Vec::new();
        }
        let Some(doc) = self.docs.get_mut(uri) else {
            return vec![notification("textDocument/publishDiagnostics", json!({ "uri": uri, "diagnostics": [] }))];
        };
        let analysis = analyze(&doc.text);
        let diagnostics: Vec<_> = analysis.report.diagnostics.iter().map(|d| to_lsp(uri, d)).collect();
        doc.analysis = Some(analysis);
        vec![notification(
            "textDocument/publishDiagnostics",
            json!({ "uri": uri, "version": doc.version, "diagnostics": diagnostics }),
        )]
    }

    fn hover(&self, uri: &str, line: u32, col: u32) -> Value {
        let Some(analysis) = self.docs.get(uri).and_then(|d| d.analysis.as_ref()) else {
            return Value::Null;
        };
        let Some(note) = analysis.report.annotation_at(line, col) else {
            return Value::Null;
        };
        let reg = analysis.registry();
        let mut parts: Vec<String> =
            note.signatures.iter().map(|s| format!("{}\n\n`{}`", s.describe(reg), s.display(reg))).collect();
        if !note.codes.is_empty() {
            parts.push(format!("violations: {}", note.codes.join(", ")));
        }
        json!({
            "contents": { "kind": "markdown", "value": parts.join("\n\n---\n\n") },
            "range": range(note.span),
        })
    }
}

/// Reads one framed message. `Ok(None)` at end of input; malformed JSON
/// bodies come back as `Err` with kind `InvalidData`.
pub fn read_message(r: &mut impl BufRead) -> io::Result<Option<Value>> {
    let mut length = None;
    loop {
        let mut line = String::new();
        if r.read_line(&mut line)? == 0 {
            return Ok(None);
        }
        let line = line.trim_end();
        if line.is_empty() {
            if length.is_some() {
                break;
            }
            continue;
        }
        if let Some((name, value)) = line.split_once(':') {
            if name.eq_ignore_ascii_case("content-length") {
                length = value.trim().parse::<usize>().ok();
            }
        }
    }
    let mut body = vec![0; length.expect("checked above")];
    r.read_exact(&mut body)?;
    serde_json::from_slice(&body).map(Some).map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))
}

pub fn write_message(w: &mut impl Write, msg: &Value) -> io::Result<()> {
    let body = serde_json::to_string(msg).expect("JSON values serialize");
    write!(w, "Content-Length: {}\r\n\r\n{body}", body.len())?;
    w.flush()
}

enum Incoming {
    Message(Value),
    Malformed,
}

/// Runs the server until `exit` or end of input; returns the exit status.
pub fn serve<R: BufRead + Send + 'static>(input: R, output: &mut impl Write) -> i32 {
    let (tx, rx) = mpsc::channel();
    std::thread::spawn(move || {
        let mut input = input;
        loop {
            let item = match read_message(&mut input) {
                Ok(Some(v)) => Incoming::Message(v),
                Ok(None) => break,
                Err(e) if e.kind() == io::ErrorKind::InvalidData => Incoming::Malformed,
                Err(_) => break,
            };
            if tx.send(item).is_err() {
                break;
            }
        }
    });
    let mut server = Server::new();
    while let Ok(first) = rx.recv() {
        // Take everything already queued so superseded edits are never analysed.
        let batch: Vec<Incoming> = std::iter::once(first).chain(rx.try_iter()).collect();
        for item in batch {
            let out = match item {
                Incoming::Message(msg) => server.handle(&msg),
                Incoming::Malformed => vec![error(&Value::Null, PARSE_ERROR, "malformed JSON")],
            };
            for msg in out {
                if write_message(output, &msg).is_err() {
                    return 1;
                }
            }
            if let Some(code) = server.exit_code() {
                return code;
            }
        }
        for msg in server.flush() {
            if write_message(output, &msg).is_err() {
                return 1;
            }
        }
    }
    server.exit_code().unwrap_or(1)
}
