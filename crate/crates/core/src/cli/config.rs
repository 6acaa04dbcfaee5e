//! Settings resolution: flags and `ETA_FORGE_*` variables (both handled by
//! clap), then a `key = value` config file, then defaults.

use std::collections::BTreeMap;
use std::path::Path;

use super::args::{Format, GlobalOpts};
use crate::numerics::PrecisionContext;

#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub precision_bits: u32,
    pub tol: f64,
    pub format: Format,
    pub jobs: usize,
    pub no_timing: bool,
}

impl Settings {
    pub fn context(&self) -> crate::Result<PrecisionContext> {
        PrecisionContext::new(self.precision_bits, self.tol)
    }
}

const KEYS: [&str; 5] = ["precision_bits", "tol", "format", "jobs", "no_timing"];

/// Blank lines and `#` comments are skipped; keys may use `-` or `_`.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, String> {
    let mut out = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected key = value", lineno + 1))?;
        let key = k.trim().replace('-', "_");
        if !KEYS.contains(&key.as_str()) {
            return Err(format!("config line {}: unknown key '{}'", lineno + 1, k.trim()));
        }
        let v = v.trim().trim_matches('"').to_string();
        out.insert(key, v);
    }
    Ok(out)
}

fn from_file<T: std::str::FromStr>(
    file: &BTreeMap<String, String>,
    key: &str,
) -> Result<Option<T>, String> {
    match file.get(key) {
        None => Ok(None),
        Some(v) => v
            .parse()
            .map(Some)
            .map_err(|_| format!("config key {key}: cannot parse '{v}'")),
    }
}

fn parse_bool(v: &str) -> Option<bool> {
    match v.to_ascii_lowercase().as_str() {
        "1" | "true" | "yes" | "on" => Some(true),
        "0" | "false" | "no" | "off" => Some(false),
        _ => None,
    }
}

pub fn resolve(opts: &GlobalOpts) -> Result<Settings, String> {
    let file = match &opts.config {
        Some(path) => load(path)?,
        None => BTreeMap::new(),
    };
    let format = match opts.format {
        Some(f) => f,
        None => match file.get("format").map(|s| s.to_ascii_lowercase()) {
            None => Format::Json,
            Some(s) if s == "json" => Format::Json,
            Some(s) if s == "csv" => Format::Csv,
            Some(s) => return Err(format!("config key format: '{s}' is not json or csv")),
        },
    };
    let no_timing = match opts.no_timing {
        Some(b) => b,
        None => match file.get("no_timing") {
            None => false,
            Some(v) => parse_bool(v).ok_or_else(|| format!("config key no_timing: cannot parse '{v}'"))?,
        },
    };
    let jobs = match opts.jobs.map_or_else(|| from_file(&file, "jobs"), |j| Ok(Some(j)))? {
        Some(j) => j,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    if jobs == 0 {
        return Err("jobs must be at least 1".into());
    }
    Ok(Settings {
        precision_bits: opts
            .precision_bits
            .map_or_else(|| from_file(&file, "precision_bits"), |b| Ok(Some(b)))?
            .unwrap_or(53),
        tol: opts
            .tol
            .map_or_else(|| from_file(&file, "tol"), |t| Ok(Some(t)))?
            .unwrap_or(1e-12),
        format,
        jobs,
        no_timing,
    })
}

fn load(path: &Path) -> Result<BTreeMap<String, String>, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config file {}: {e}", path.display()))?;
    parse_config(&text)
}
