//! Run manifests written next to every CSV output as `<out>.manifest`.
//!
//! The format is line-oriented `key = value` text; `#` starts a comment line.
//!
//! ```text
//! # cohpbw run manifest
//! tool = cohpbw
//! version = 0.1.0
//! subcommand = noise
//! seed = 7
//! output = trace.csv
//! param.n = 1
//! param.sigma = 0.3
//! ```
//!
//! `param.*` keys are the resolved long flags of the run, so
//! `cohpbw <subcommand> --<key> <value> ...` repeats it.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::CliError;

/// Name recorded in the `tool` key.
pub const TOOL: &str = "cohpbw";

/// Everything needed to reproduce one run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunManifest {
    /// Subcommand name.
    pub subcommand: String,
    /// Resolved flag values, keyed by long flag name.
    pub params: BTreeMap<String, String>,
    /// Version of the tool that produced the run.
    pub version: String,
    /// Base seed, for randomized runs.
    pub seed: Option<u64>,
    /// Path of the CSV written by the run.
    pub output: Option<PathBuf>,
}

impl RunManifest {
    /// Empty manifest for `subcommand` at the current tool version.
    pub fn new(subcommand: &str) -> Self {
        RunManifest {
            subcommand: subcommand.to_owned(),
            params: BTreeMap::new(),
            version: env!("CARGO_PKG_VERSION").to_owned(),
            seed: None,
            output: None,
        }
    }

    /// Records a resolved flag.
    pub fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.params.insert(key.to_owned(), value.to_string());
        self
    }

    /// Sidecar path for a CSV output.
    pub fn sidecar_path(out: &Path) -> PathBuf {
        let mut s = out.as_os_str().to_owned();
        s.push(".manifest");
        PathBuf::from(s)
    }

    /// Serialized text.
    pub fn render(&self) -> String {
        let mut s = String::from("# cohpbw run manifest\n");
        let _ = writeln!(s, "tool = {TOOL}");
        let _ = writeln!(s, "version = {}", self.version);
        let _ = writeln!(s, "subcommand = {}", self.subcommand);
        if let Some(seed) = self.seed {
            let _ = writeln!(s, "seed = {seed}");
        }
        if let Some(out) = &self.output {
            let _ = writeln!(s, "output = {}", out.display());
        }
        for (k, v) in &self.params {
            let _ = writeln!(s, "param.{k} = {v}");
        }
        s
    }

    /// Parses serialized text.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut m = RunManifest::new("");
        m.version.clear();
        let mut tool = None;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Validation(format!("manifest line {}: expected 'key = value'", i + 1))
            })?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "tool" => tool = Some(value.to_owned()),
                "version" => m.version = value.to_owned(),
                "subcommand" => m.subcommand = value.to_owned(),
                "seed" => {
                    m.seed = Some(value.parse().map_err(|_| {
                        CliError::Validation(format!("manifest line {}: bad seed '{value}'", i + 1))
                    })?)
                }
                "output" => m.output = Some(PathBuf::from(value)),
                _ => match key.strip_prefix("param.") {
                    Some(name) if !name.is_empty() => {
                        m.params.insert(name.to_owned(), value.to_owned());
                    }
                    _ => {
                        return Err(CliError::Validation(format!(
                            "manifest line {}: unknown key '{key}'",
                            i + 1
                        )))
                    }
                },
            }
        }
        if tool.as_deref() != Some(TOOL) {
            return Err(CliError::Validation("not a cohpbw manifest".into()));
        }
        if m.subcommand.is_empty() {
            return Err(CliError::Validation("manifest has no subcommand".into()));
        }
        Ok(m)
    }

    /// Writes the sidecar for `out`.
    pub fn write_sidecar(&self, out: &Path) -> Result<(), CliError> {
        let path = Self::sidecar_path(out);
        std::fs::write(&path, self.render()).map_err(|e| CliError::io(&path, e))
    }

    /// Command-line arguments (without the program name) that repeat the run,
    /// writing to `out` when given, else to the recorded output.
    pub fn to_args(&self, out: Option<&Path>) -> Vec<String> {
        let mut args = vec![self.subcommand.clone()];
        for (k, v) in &self.params {
            args.push(format!("--{k}"));
            args.push(v.clone());
        }
        if let Some(seed) = self.seed {
            args.push("--seed".into());
            args.push(seed.to_string());
        }
        if let Some(out) = out.or(self.output.as_deref()) {
            args.push("--out".into());
            args.push(out.display().to_string());
        }
        args
    }
}
