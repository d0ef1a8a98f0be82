//! Record/replay store keyed by request hash, so benchmark runs can be repeated offline.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::client::{ChatBackend, ChatError, ChatRequest, ChatResponse, Completion};
use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CassetteMode {
    /// Serve recorded responses; forward and append anything not yet recorded.
    Record,
    /// Serve recorded responses only; a miss is an unavailable endpoint.
    Replay,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CassetteEntry {
    pub key: String,
    pub request: ChatRequest,
    pub response: ChatResponse,
}

pub fn request_key(request: &ChatRequest) -> String {
    let bytes = serde_json::to_vec(request).expect("requests serialize");
    hex::encode(Sha256::digest(bytes))
}

#[derive(Default)]
struct Tape {
    /// Responses per key in recording order.
    entries: HashMap<String, Vec<ChatResponse>>,
    /// How many times each key has been served in this session.
    cursor: HashMap<String, usize>,
    writer: Option<File>,
}

pub struct Cassette {
    path: PathBuf,
    mode: CassetteMode,
    inner: Option<Arc<dyn ChatBackend>>,
    tape: Mutex<Tape>,
}

pub fn load_entries(path: &Path) -> Result<Vec<CassetteEntry>, Error> {
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(Error::io(path, e)),
    };
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let entry: CassetteEntry =
            serde_json::from_str(&line).map_err(|e| Error::dataset(path, format!("line {}", i + 1), e.to_string()))?;
        out.push(entry);
    }
    Ok(out)
}

impl Cassette {
    pub fn open(path: impl Into<PathBuf>, mode: CassetteMode, inner: Option<Arc<dyn ChatBackend>>) -> Result<Self, Error> {
        let path = path.into();
        if mode == CassetteMode::Record && inner.is_none() {
            return Err(Error::Config("recording a cassette needs a live backend".into()));
        }
        let mut tape = Tape::default();
        for e in load_entries(&path)? {
            tape.entries.entry(e.key).or_default().push(e.response);
        }
        if mode == CassetteMode::Record {
            let f = OpenOptions::new().create(true).append(true).open(&path).map_err(|e| Error::io(&path, e))?;
            tape.writer = Some(f);
        }
        Ok(Self { path, mode, inner, tape: Mutex::new(tape) })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.tape.lock().expect("tape lock").entries.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl ChatBackend for Cassette {
    fn complete(&self, request: &ChatRequest) -> Result<Completion, ChatError> {
        let key = request_key(request);
        {
            let mut tape = self.tape.lock().expect("tape lock");
            let idx = *tape.cursor.get(&key).unwrap_or(&0);
            if let Some(r) = tape.entries.get(&key).and_then(|v| v.get(idx)).cloned() {
                tape.cursor.insert(key, idx + 1);
                return Ok(Completion { response: r, retries: 0 });
            }
        }
        let Some(inner) = (self.mode == CassetteMode::Record).then_some(self.inner.as_ref()).flatten() else {
            return Err(ChatError::Unavailable { retries: 0, message: format!("no cassette entry for request {key}") });
        };
        let done = inner.complete(request)?;
        let entry = CassetteEntry { key: key.clone(), request: request.clone(), response: done.response.clone() };
        let mut tape = self.tape.lock().expect("tape lock");
        if let Some(w) = tape.writer.as_mut() {
            let line = serde_json::to_string(&entry).expect("entries serialize");
            if let Err(e) = writeln!(w, "{line}").and_then(|_| w.flush()) {
                log::error!("cassette write to {} failed: {e}", self.path.display());
            }
        }
        let served = tape.entries.entry(key.clone()).or_default();
        served.push(done.response.clone());
        let n = served.len();
        tape.cursor.insert(key, n);
        Ok(done)
    }
}
