//! Run reports: every invocation can describe what it read, what it
//! wrote, and what it concluded, as text lines or as one JSON object.

use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Serialize)]
struct FileDigest {
    path: String,
    sha256: String,
}

#[derive(Serialize)]
struct RngInfo {
    id: &'static str,
    seed: u64,
    trials: u32,
}

#[derive(Serialize)]
pub struct RunReport {
    command: String,
    version: &'static str,
    ok: bool,
    /// Wall-clock runtime, reported separately from the verdict so
    /// reruns diff cleanly on everything else.
    elapsed_ms: u64,
    inputs: Vec<FileDigest>,
    outputs: Vec<FileDigest>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rng: Option<RngInfo>,
    result: Value,
    #[serde(skip)]
    started: Instant,
    #[serde(skip)]
    json: bool,
}

fn digest(path: &Path) -> FileDigest {
    let sha256 = match std::fs::read(path) {
        Ok(bytes) => {
            let mut h = Sha256::new();
            h.update(&bytes);
            format!("{:x}", h.finalize())
        }
        Err(_) => "unavailable".to_string(),
    };
    FileDigest {
        path: path.display().to_string(),
        sha256,
    }
}

impl RunReport {
    pub fn new(command: &str, json: bool) -> Self {
        RunReport {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION"),
            ok: true,
            elapsed_ms: 0,
            inputs: Vec::new(),
            outputs: Vec::new(),
            rng: None,
            result: Value::Null,
            started: Instant::now(),
            json,
        }
    }

    pub fn input(&mut self, path: &Path) {
        self.inputs.push(digest(path));
    }

    pub fn output(&mut self, path: &Path) {
        self.outputs.push(digest(path));
        if !self.json {
            println!("wrote {}", path.display());
        }
    }

    pub fn rng(&mut self, seed: u64, trials: u32) {
        self.rng = Some(RngInfo {
            id: "chacha12",
            seed,
            trials,
        });
    }

    /// A human-facing progress line; silent in JSON mode.
    pub fn line(&self, text: impl AsRef<str>) {
        if !self.json {
            println!("{}", text.as_ref());
        }
    }

    pub fn set_result(&mut self, value: Value) {
        self.result = value;
    }

    /// Print the report (JSON mode) and translate the verdict into an
    /// exit code.
    pub fn finish(mut self, ok: bool) -> i32 {
        self.ok = ok;
        self.elapsed_ms = self.started.elapsed().as_millis() as u64;
        if self.json {
            println!(
                "{}",
                serde_json::to_string_pretty(&self).expect("report serializes")
            );
        }
        i32::from(!ok)
    }
}
