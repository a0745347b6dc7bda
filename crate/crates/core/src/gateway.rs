//! Uniform chat-completion interface with deterministic record/replay.
//!
//! Every LLM call in the pipeline goes through [`Gateway::complete`]. In
//! `record` mode responses are appended to a JSON Lines transcript keyed by a
//! request digest; in `replay` mode the transcript is the only source of
//! responses, which makes full pipeline runs reproducible byte for byte with
//! no network access.
//!
//! The digest covers (system prompt, user prompt, temperature) after
//! canonicalization; `max_tokens` is deliberately excluded so token-budget
//! tweaks do not invalidate recordings.

use std::collections::HashMap;
use std::fmt;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};
use std::time::Duration;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

/// Operating mode of the gateway.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LlmMode {
    /// Call the backend directly; no transcript involved.
    Live,
    /// Call the backend on digest miss and append the result to the
    /// transcript; digest hits return the recorded response.
    Record,
    /// Serve responses from the transcript only.
    Replay,
}

impl fmt::Display for LlmMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LlmMode::Live => write!(f, "live"),
            LlmMode::Record => write!(f, "record"),
            LlmMode::Replay => write!(f, "replay"),
        }
    }
}

impl std::str::FromStr for LlmMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "live" => Ok(LlmMode::Live),
            "record" => Ok(LlmMode::Record),
            "replay" => Ok(LlmMode::Replay),
            other => Err(format!("unknown llm mode '{other}' (expected live|record|replay)")),
        }
    }
}

/// A single-turn chat request: one system message, one user message.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChatRequest {
    pub system_prompt: String,
    pub user_prompt: String,
    pub temperature: f64,
    pub max_tokens: u32,
}

impl ChatRequest {
    /// Builds a request, enforcing non-empty prompts and temperature in [0, 2].
    pub fn new(
        system_prompt: impl Into<String>,
        user_prompt: impl Into<String>,
        temperature: f64,
        max_tokens: u32,
    ) -> Result<Self, GatewayError> {
        let system_prompt = system_prompt.into();
        let user_prompt = user_prompt.into();
        if system_prompt.trim().is_empty() || user_prompt.trim().is_empty() {
            return Err(GatewayError::InvalidRequest("prompts must be non-empty".into()));
        }
        if !(0.0..=2.0).contains(&temperature) {
            return Err(GatewayError::InvalidRequest(format!(
                "temperature {temperature} outside [0, 2]"
            )));
        }
        if max_tokens == 0 {
            return Err(GatewayError::InvalidRequest("max_tokens must be positive".into()));
        }
        Ok(ChatRequest { system_prompt, user_prompt, temperature, max_tokens })
    }

    /// Digest of the canonicalized request. Stable across trailing-whitespace
    /// and line-ending edits; independent of `max_tokens`.
    pub fn digest(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(b"chat/v1\0");
        hasher.update(canonicalize(&self.system_prompt).as_bytes());
        hasher.update(b"\0");
        hasher.update(canonicalize(&self.user_prompt).as_bytes());
        hasher.update(b"\0");
        hasher.update(self.temperature.to_bits().to_le_bytes());
        hex::encode(hasher.finalize())
    }
}

/// Normalizes line endings to LF and strips trailing whitespace per line and
/// at the end of the text.
fn canonicalize(text: &str) -> String {
    let unified = text.replace("\r\n", "\n").replace('\r', "\n");
    let mut lines: Vec<&str> = unified.split('\n').map(str::trim_end).collect();
    while lines.last() == Some(&"") {
        lines.pop();
    }
    lines.join("\n")
}

/// One recorded exchange.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranscriptEntry {
    pub digest: String,
    pub response: String,
}

/// Ordered, digest-unique collection of recorded exchanges.
#[derive(Debug, Default, Clone)]
pub struct Transcript {
    entries: Vec<TranscriptEntry>,
    index: HashMap<String, usize>,
}

impl Transcript {
    pub fn new() -> Self {
        Self::default()
    }

    /// Loads a JSON Lines transcript. Duplicate digests are rejected.
    pub fn load(path: &Path) -> Result<Self, GatewayError> {
        let file = File::open(path).map_err(|e| GatewayError::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        let mut transcript = Transcript::new();
        for (lineno, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(|e| GatewayError::Io { path: path.to_path_buf(), source: e })?;
            if line.trim().is_empty() {
                continue;
            }
            let entry: TranscriptEntry = serde_json::from_str(&line).map_err(|e| {
                GatewayError::MalformedTranscript {
                    path: path.to_path_buf(),
                    line: lineno + 1,
                    detail: e.to_string(),
                }
            })?;
            if !transcript.insert(entry) {
                return Err(GatewayError::MalformedTranscript {
                    path: path.to_path_buf(),
                    line: lineno + 1,
                    detail: "duplicate digest".into(),
                });
            }
        }
        Ok(transcript)
    }

    /// Inserts an entry; returns false if the digest is already present.
    pub fn insert(&mut self, entry: TranscriptEntry) -> bool {
        if self.index.contains_key(&entry.digest) {
            return false;
        }
        self.index.insert(entry.digest.clone(), self.entries.len());
        self.entries.push(entry);
        true
    }

    pub fn lookup(&self, digest: &str) -> Option<&str> {
        self.index.get(digest).map(|&i| self.entries[i].response.as_str())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[TranscriptEntry] {
        &self.entries
    }
}

/// Transport-level failure from a backend, reported after bounded retries.
#[derive(Debug, Error)]
#[error("backend failure after {attempts} attempt(s): {message}")]
pub struct BackendError {
    pub message: String,
    pub attempts: u32,
}

/// A chat-completion backend. Implementations must be shareable across
/// threads; the gateway fans requests out from multiple workers.
pub trait ChatBackend: Send + Sync {
    fn complete(&self, req: &ChatRequest) -> Result<String, BackendError>;
}

/// Gateway errors.
#[derive(Debug, Error)]
pub enum GatewayError {
    #[error("invalid request: {0}")]
    InvalidRequest(String),
    #[error("replay miss for digest {digest} — transcript does not cover this request (prompt or config drift?)")]
    ReplayMiss { digest: String },
    #[error(transparent)]
    Backend(#[from] BackendError),
    #[error("no backend configured for {mode} mode")]
    NoBackend { mode: LlmMode },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: malformed transcript: {detail}")]
    MalformedTranscript { path: PathBuf, line: usize, detail: String },
}

struct TranscriptState {
    transcript: Transcript,
    writer: Option<File>,
}

/// Thread-shareable LLM gateway. Transcript access is serialized internally;
/// callers may issue `complete` calls from many threads at once.
pub struct Gateway {
    mode: LlmMode,
    backend: Option<Arc<dyn ChatBackend>>,
    state: Mutex<TranscriptState>,
    transcript_path: Option<PathBuf>,
}

impl Gateway {
    /// Replay-only gateway over an existing transcript file.
    pub fn replay(transcript_path: &Path) -> Result<Self, GatewayError> {
        let transcript = Transcript::load(transcript_path)?;
        Ok(Gateway {
            mode: LlmMode::Replay,
            backend: None,
            state: Mutex::new(TranscriptState { transcript, writer: None }),
            transcript_path: Some(transcript_path.to_path_buf()),
        })
    }

    /// Recording gateway: digest hits are served from the transcript, misses
    /// go to `backend` and are appended to `transcript_path`.
    pub fn record(
        backend: Arc<dyn ChatBackend>,
        transcript_path: &Path,
    ) -> Result<Self, GatewayError> {
        let transcript = if transcript_path.exists() {
            Transcript::load(transcript_path)?
        } else {
            Transcript::new()
        };
        let writer = OpenOptions::new()
            .create(true)
            .append(true)
            .open(transcript_path)
            .map_err(|e| GatewayError::Io { path: transcript_path.to_path_buf(), source: e })?;
        Ok(Gateway {
            mode: LlmMode::Record,
            backend: Some(backend),
            state: Mutex::new(TranscriptState { transcript, writer: Some(writer) }),
            transcript_path: Some(transcript_path.to_path_buf()),
        })
    }

    /// Live gateway with no transcript.
    pub fn live(backend: Arc<dyn ChatBackend>) -> Self {
        Gateway {
            mode: LlmMode::Live,
            backend: Some(backend),
            state: Mutex::new(TranscriptState { transcript: Transcript::new(), writer: None }),
            transcript_path: None,
        }
    }

    pub fn mode(&self) -> LlmMode {
        self.mode
    }

    pub fn transcript_path(&self) -> Option<&Path> {
        self.transcript_path.as_deref()
    }

    /// Number of entries currently held (recorded plus preloaded).
    pub fn transcript_len(&self) -> usize {
        self.state.lock().expect("transcript lock").transcript.len()
    }

    /// Completes a request according to the gateway mode.
    pub fn complete(&self, req: &ChatRequest) -> Result<String, GatewayError> {
        let digest = req.digest();
        match self.mode {
            LlmMode::Replay => {
                let state = self.state.lock().expect("transcript lock");
                state
                    .transcript
                    .lookup(&digest)
                    .map(str::to_owned)
                    .ok_or(GatewayError::ReplayMiss { digest })
            }
            LlmMode::Live => {
                let backend =
                    self.backend.as_ref().ok_or(GatewayError::NoBackend { mode: self.mode })?;
                Ok(backend.complete(req)?)
            }
            LlmMode::Record => {
                if let Some(resp) =
                    self.state.lock().expect("transcript lock").transcript.lookup(&digest)
                {
                    return Ok(resp.to_owned());
                }
                let backend =
                    self.backend.as_ref().ok_or(GatewayError::NoBackend { mode: self.mode })?;
                let response = backend.complete(req)?;
                let mut state = self.state.lock().expect("transcript lock");
                // Another thread may have recorded the same digest while we
                // were waiting on the backend; the first recording wins so
                // identical requests always observe one response.
                if let Some(resp) = state.transcript.lookup(&digest) {
                    return Ok(resp.to_owned());
                }
                let entry = TranscriptEntry { digest, response: response.clone() };
                let line = serde_json::to_string(&entry).expect("transcript entry serializes");
                state.transcript.insert(entry);
                if let Some(writer) = state.writer.as_mut() {
                    writeln!(writer, "{line}").map_err(|e| GatewayError::Io {
                        path: self
                            .transcript_path
                            .clone()
                            .unwrap_or_else(|| PathBuf::from("<transcript>")),
                        source: e,
                    })?;
                    writer.flush().map_err(|e| GatewayError::Io {
                        path: self
                            .transcript_path
                            .clone()
                            .unwrap_or_else(|| PathBuf::from("<transcript>")),
                        source: e,
                    })?;
                }
                Ok(response)
            }
        }
    }
}

/// HTTP chat-completion backend speaking the standard JSON message shape.
///
/// Retries transport and HTTP-status failures with exponential backoff
/// (default 3 attempts starting at 1 s); response content is never a retry
/// trigger.
pub struct HttpBackend {
    endpoint: String,
    api_key: Option<String>,
    model: String,
    max_attempts: u32,
    initial_backoff: Duration,
    client: reqwest::blocking::Client,
}

/// Environment variable naming the chat-completion endpoint URL.
pub const ENV_ENDPOINT: &str = "SVAGEN_LLM_ENDPOINT";
/// Environment variable naming the API key (optional).
pub const ENV_API_KEY: &str = "SVAGEN_LLM_API_KEY";
/// Environment variable naming the model id (optional, default `gpt-4o`).
pub const ENV_MODEL: &str = "SVAGEN_LLM_MODEL";

#[derive(Serialize)]
struct WireMessage<'a> {
    role: &'static str,
    content: &'a str,
}

#[derive(Serialize)]
struct WireRequest<'a> {
    model: &'a str,
    messages: [WireMessage<'a>; 2],
    temperature: f64,
    max_tokens: u32,
}

#[derive(Deserialize)]
struct WireResponse {
    choices: Vec<WireChoice>,
}

#[derive(Deserialize)]
struct WireChoice {
    message: WireResponseMessage,
}

#[derive(Deserialize)]
struct WireResponseMessage {
    content: String,
}

impl HttpBackend {
    pub fn new(endpoint: String, api_key: Option<String>, model: String) -> Self {
        HttpBackend {
            endpoint,
            api_key,
            model,
            max_attempts: 3,
            initial_backoff: Duration::from_secs(1),
            client: reqwest::blocking::Client::new(),
        }
    }

    /// Reads endpoint, key, and model from `SVAGEN_LLM_*` environment variables.
    pub fn from_env() -> Result<Self, BackendError> {
        let endpoint = std::env::var(ENV_ENDPOINT).map_err(|_| BackendError {
            message: format!("{ENV_ENDPOINT} is not set"),
            attempts: 0,
        })?;
        let api_key = std::env::var(ENV_API_KEY).ok();
        let model = std::env::var(ENV_MODEL).unwrap_or_else(|_| "gpt-4o".to_string());
        Ok(Self::new(endpoint, api_key, model))
    }

    #[cfg(test)]
    fn with_retry(mut self, max_attempts: u32, initial_backoff: Duration) -> Self {
        self.max_attempts = max_attempts;
        self.initial_backoff = initial_backoff;
        self
    }

    fn attempt(&self, req: &ChatRequest) -> Result<String, String> {
        let body = WireRequest {
            model: &self.model,
            messages: [
                WireMessage { role: "system", content: &req.system_prompt },
                WireMessage { role: "user", content: &req.user_prompt },
            ],
            temperature: req.temperature,
            max_tokens: req.max_tokens,
        };
        let mut builder = self.client.post(&self.endpoint).json(&body);
        if let Some(key) = &self.api_key {
            builder = builder.bearer_auth(key);
        }
        let response = builder.send().map_err(|e| e.to_string())?;
        let status = response.status();
        if !status.is_success() {
            return Err(format!("HTTP {status}"));
        }
        let parsed: WireResponse = response.json().map_err(|e| e.to_string())?;
        parsed
            .choices
            .into_iter()
            .next()
            .map(|c| c.message.content)
            .ok_or_else(|| "response contained no choices".to_string())
    }
}

impl ChatBackend for HttpBackend {
    fn complete(&self, req: &ChatRequest) -> Result<String, BackendError> {
        let mut backoff = self.initial_backoff;
        let mut last = String::new();
        for attempt in 1..=self.max_attempts {
            match self.attempt(req) {
                Ok(text) => return Ok(text),
                Err(message) => last = message,
            }
            if attempt < self.max_attempts {
                std::thread::sleep(backoff);
                backoff *= 2;
            }
        }
        Err(BackendError { message: last, attempts: self.max_attempts })
    }
}

/// Scripted backend for tests: serves a fixed queue of responses and logs the
/// requests it saw.
#[derive(Default)]
pub struct ScriptedBackend {
    responses: Mutex<std::collections::VecDeque<String>>,
    calls: Mutex<Vec<ChatRequest>>,
}

impl ScriptedBackend {
    pub fn new<I, S>(responses: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        ScriptedBackend {
            responses: Mutex::new(responses.into_iter().map(Into::into).collect()),
            calls: Mutex::new(Vec::new()),
        }
    }

    pub fn calls(&self) -> Vec<ChatRequest> {
        self.calls.lock().expect("calls lock").clone()
    }

    pub fn call_count(&self) -> usize {
        self.calls.lock().expect("calls lock").len()
    }
}

impl ChatBackend for ScriptedBackend {
    fn complete(&self, req: &ChatRequest) -> Result<String, BackendError> {
        self.calls.lock().expect("calls lock").push(req.clone());
        self.responses
            .lock()
            .expect("responses lock")
            .pop_front()
            .ok_or_else(|| BackendError { message: "script exhausted".into(), attempts: 1 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn req(user: &str) -> ChatRequest {
        ChatRequest::new("system", user, 0.7, 256).unwrap()
    }

    #[test]
    fn rejects_invalid_requests() {
        assert!(ChatRequest::new("", "hi", 0.7, 10).is_err());
        assert!(ChatRequest::new("s", "hi", 2.5, 10).is_err());
        assert!(ChatRequest::new("s", "hi", -0.1, 10).is_err());
        assert!(ChatRequest::new("s", "hi", 0.7, 0).is_err());
    }

    #[test]
    fn digest_ignores_max_tokens() {
        let a = ChatRequest::new("s", "u", 0.7, 10).unwrap();
        let b = ChatRequest::new("s", "u", 0.7, 9999).unwrap();
        assert_eq!(a.digest(), b.digest());
    }

    #[test]
    fn digest_stable_under_whitespace_and_line_ending_edits() {
        let a = ChatRequest::new("sys", "line one\nline two", 0.7, 10).unwrap();
        let b = ChatRequest::new("sys", "line one  \r\nline two\r\n", 0.7, 10).unwrap();
        assert_eq!(a.digest(), b.digest());
        let c = ChatRequest::new("sys", "line one\nline two!", 0.7, 10).unwrap();
        assert_ne!(a.digest(), c.digest());
        let d = ChatRequest::new("sys", "line one\nline two", 0.2, 10).unwrap();
        assert_ne!(a.digest(), d.digest());
    }

    #[test]
    fn replay_returns_recorded_text_verbatim() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.jsonl");
        let request = req("hello");
        let entry = TranscriptEntry { digest: request.digest(), response: "  spaced  ".into() };
        std::fs::write(&path, format!("{}\n", serde_json::to_string(&entry).unwrap())).unwrap();
        let gw = Gateway::replay(&path).unwrap();
        assert_eq!(gw.complete(&request).unwrap(), "  spaced  ");
    }

    #[test]
    fn replay_miss_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.jsonl");
        std::fs::write(&path, "").unwrap();
        let gw = Gateway::replay(&path).unwrap();
        match gw.complete(&req("unseen")) {
            Err(GatewayError::ReplayMiss { .. }) => {}
            other => panic!("expected ReplayMiss, got {other:?}"),
        }
    }

    #[test]
    fn record_dedupes_identical_requests() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.jsonl");
        let backend = Arc::new(ScriptedBackend::new(["first", "second"]));
        let gw = Gateway::record(backend.clone(), &path).unwrap();
        let request = req("same");
        let a = gw.complete(&request).unwrap();
        let b = gw.complete(&request).unwrap();
        assert_eq!(a, "first");
        assert_eq!(b, "first");
        assert_eq!(backend.call_count(), 1);
        let transcript = Transcript::load(&path).unwrap();
        assert_eq!(transcript.len(), 1);
    }

    #[test]
    fn recorded_transcript_replays() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.jsonl");
        let backend = Arc::new(ScriptedBackend::new(["resp-a", "resp-b"]));
        let gw = Gateway::record(backend, &path).unwrap();
        gw.complete(&req("a")).unwrap();
        gw.complete(&req("b")).unwrap();
        drop(gw);
        let gw = Gateway::replay(&path).unwrap();
        assert_eq!(gw.complete(&req("a")).unwrap(), "resp-a");
        assert_eq!(gw.complete(&req("b")).unwrap(), "resp-b");
    }

    #[test]
    fn duplicate_digest_in_transcript_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.jsonl");
        let entry = TranscriptEntry { digest: "d".into(), response: "r".into() };
        let line = serde_json::to_string(&entry).unwrap();
        std::fs::write(&path, format!("{line}\n{line}\n")).unwrap();
        assert!(matches!(
            Transcript::load(&path),
            Err(GatewayError::MalformedTranscript { .. })
        ));
    }

    #[test]
    fn http_backend_reports_failure_after_retries() {
        // Unroutable endpoint; with zero backoff this fails fast.
        let backend = HttpBackend::new("http://127.0.0.1:1/v1/chat".into(), None, "m".into())
            .with_retry(2, Duration::from_millis(0));
        let err = backend.complete(&req("x")).unwrap_err();
        assert_eq!(err.attempts, 2);
    }
}
