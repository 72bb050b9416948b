//! Click-stream CSV files and key=value text files.
//!
//! Streams are persisted as a CSV with header `window_id,channel,t_ns`
//! (channel `s` or `p`, LF line endings, UTF-8) next to a sidecar metadata
//! file carrying the windowing layout, seed and config hash in the same flat
//! key=value format used everywhere else.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::sim::{Channel, ClickEvent, ClickStream};

/// FNV-1a, used to fingerprint configurations in stream metadata.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

/// Renders a stream as CSV text.
pub fn stream_to_csv(stream: &ClickStream) -> String {
    let mut out = String::with_capacity(24 * stream.events.len() + 32);
    out.push_str("window_id,channel,t_ns\n");
    for e in &stream.events {
        let _ = writeln!(out, "{},{},{}", e.window_id, e.channel.as_str(), e.t_ns);
    }
    out
}

/// Metadata sidecar text for a stream.
pub fn stream_meta_to_kv(stream: &ClickStream) -> String {
    let mut out = String::new();
    out.push_str("[stream]\n");
    let _ = writeln!(out, "seed = {}", stream.seed);
    let _ = writeln!(out, "config_hash = {:016x}", stream.config_hash);
    let _ = writeln!(out, "n_cycles = {}", stream.n_cycles);
    let _ = writeln!(out, "windows_per_cycle = {}", stream.windows_per_cycle);
    let _ = writeln!(out, "window_ns = {}", stream.window_ns);
    let _ = writeln!(out, "n_events = {}", stream.events.len());
    out
}

/// Writes `<base>.csv` and `<base>.meta`.
pub fn write_stream(stream: &ClickStream, base: &Path) -> Result<()> {
    fs::write(base.with_extension("csv"), stream_to_csv(stream))?;
    fs::write(base.with_extension("meta"), stream_meta_to_kv(stream))?;
    Ok(())
}

/// Reads a stream from `<base>.csv` + `<base>.meta` and validates it.
pub fn read_stream(base: &Path) -> Result<ClickStream> {
    let meta_text = fs::read_to_string(base.with_extension("meta"))?;
    let meta = KvFile::parse(&meta_text)?;
    let seed = meta.get_u64("stream", "seed")?;
    let config_hash = meta.get_hex_u64("stream", "config_hash")?;
    let n_cycles = meta.get_u64("stream", "n_cycles")?;
    let windows_per_cycle = meta.get_u64("stream", "windows_per_cycle")?;
    let window_ns = u32::try_from(meta.get_u64("stream", "window_ns")?).map_err(|_| {
        Error::Parse {
            line: 0,
            msg: "window_ns out of range".into(),
        }
    })?;

    let csv_text = fs::read_to_string(base.with_extension("csv"))?;
    let events = parse_stream_csv(&csv_text)?;
    let stream = ClickStream {
        events,
        window_ns,
        n_cycles,
        windows_per_cycle,
        seed,
        config_hash,
    };
    stream.validate().map_err(|e| Error::Parse {
        line: 0,
        msg: format!("inconsistent stream file: {e}"),
    })?;
    Ok(stream)
}

fn parse_stream_csv(text: &str) -> Result<Vec<ClickEvent>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == "window_id,channel,t_ns" => {}
        Some((_, header)) => {
            return Err(Error::Parse {
                line: 1,
                msg: format!("unexpected header `{header}`"),
            })
        }
        None => {
            return Err(Error::Parse {
                line: 1,
                msg: "empty file".into(),
            })
        }
    }
    let mut events = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split(',');
        let (Some(w), Some(c), Some(t), None) =
            (fields.next(), fields.next(), fields.next(), fields.next())
        else {
            return Err(Error::Parse {
                line: line_no,
                msg: "expected 3 comma-separated fields".into(),
            });
        };
        let window_id = w.parse::<u64>().map_err(|e| Error::Parse {
            line: line_no,
            msg: format!("bad window_id `{w}`: {e}"),
        })?;
        let channel = Channel::parse(c).ok_or_else(|| Error::Parse {
            line: line_no,
            msg: format!("bad channel `{c}` (expected s or p)"),
        })?;
        let t_ns = t.parse::<u32>().map_err(|e| Error::Parse {
            line: line_no,
            msg: format!("bad t_ns `{t}`: {e}"),
        })?;
        events.push(ClickEvent {
            window_id,
            t_ns,
            channel,
        });
    }
    Ok(events)
}

/// One `key = value` entry with its source line for error reporting.
#[derive(Debug, Clone)]
pub struct KvEntry {
    pub section: String,
    pub key: String,
    pub value: String,
    pub line: usize,
}

/// A parsed flat key=value file with `[section]` headers.
#[derive(Debug, Clone, Default)]
pub struct KvFile {
    pub entries: Vec<KvEntry>,
}

impl KvFile {
    /// Parses the text; `#` starts a comment, blank lines are skipped.
    pub fn parse(text: &str) -> Result<KvFile> {
        let mut entries = Vec::new();
        let mut section = String::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[') {
                let Some(name) = name.strip_suffix(']') else {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("unterminated section header `{}`", raw.trim()),
                    });
                };
                section = name.trim().to_string();
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("expected `key = value`, got `{line}`"),
                });
            };
            entries.push(KvEntry {
                section: section.clone(),
                key: key.trim().to_string(),
                value: value.trim().to_string(),
                line: line_no,
            });
        }
        Ok(KvFile { entries })
    }

    pub fn get(&self, section: &str, key: &str) -> Option<&KvEntry> {
        self.entries
            .iter()
            .find(|e| e.section == section && e.key == key)
    }

    pub fn get_u64(&self, section: &str, key: &str) -> Result<u64> {
        let e = self.require(section, key)?;
        e.value.parse().map_err(|err| Error::Parse {
            line: e.line,
            msg: format!("key `{key}`: bad integer `{}`: {err}", e.value),
        })
    }

    pub fn get_hex_u64(&self, section: &str, key: &str) -> Result<u64> {
        let e = self.require(section, key)?;
        u64::from_str_radix(&e.value, 16).map_err(|err| Error::Parse {
            line: e.line,
            msg: format!("key `{key}`: bad hex `{}`: {err}", e.value),
        })
    }

    fn require(&self, section: &str, key: &str) -> Result<&KvEntry> {
        self.get(section, key).ok_or_else(|| Error::Parse {
            line: 0,
            msg: format!("missing key `{key}` in section [{section}]"),
        })
    }
}
