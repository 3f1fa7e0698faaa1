//! Report files. JSON output must be identical across identical runs, so
//! fields that depend on timing move to a `<file>.log` sidecar.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::Result;
use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u8)]
pub enum Outcome {
    Ok = 0,
    Refuted = 1,
    Unknown = 2,
    Usage = 3,
}

/// Removes every field named in `keys`, anywhere in `v`, and lists them as
/// `path key value` lines.
fn split_off(v: &mut Value, keys: &[&str], path: &str, log: &mut String) {
    match v {
        Value::Object(m) => {
            for k in keys {
                if let Some(x) = m.remove(*k) {
                    let _ = writeln!(log, "{} {k} {x}", if path.is_empty() { "." } else { path });
                }
            }
            for (k, x) in m.iter_mut() {
                split_off(x, keys, &format!("{path}.{k}"), log);
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter_mut().enumerate() {
                split_off(x, keys, &format!("{path}[{i}]"), log);
            }
        }
        _ => {}
    }
}

fn sidecar(out: &Path) -> std::path::PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".log");
    name.into()
}

fn emit(report: &impl Serialize, out: Option<&Path>, keys: &[&str], print: bool) -> Result<()> {
    let mut v = serde_json::to_value(report)?;
    let mut log = String::new();
    split_off(&mut v, keys, "", &mut log);
    let text = serde_json::to_string_pretty(&v)? + "\n";
    if print {
        print!("{text}");
    }
    eprint!("{log}");
    if let Some(p) = out {
        std::fs::write(p, &text)?;
        std::fs::write(sidecar(p), &log)?;
    }
    Ok(())
}

/// Solve reports. Node counts from several workers depend on scheduling.
pub fn print_and_write(report: &impl Serialize, out: Option<&Path>, counts_stable: bool) -> Result<()> {
    let keys: &[&str] = if counts_stable {
        &["elapsed_ms"]
    } else {
        &["elapsed_ms", "nodes", "table_hits"]
    };
    emit(report, out, keys, true)
}

pub fn write_json_with_log(report: &impl Serialize, out: Option<&Path>) -> Result<()> {
    emit(report, out, &["elapsed_ms"], out.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nested_timings_are_split_off() {
        let mut v = serde_json::json!({"a": 1, "elapsed_ms": 5, "xs": [{"elapsed_ms": 7, "b": 2}]});
        let mut log = String::new();
        split_off(&mut v, &["elapsed_ms"], "", &mut log);
        assert_eq!(v, serde_json::json!({"a": 1, "xs": [{"b": 2}]}));
        assert_eq!(log, ". elapsed_ms 5\n.xs[0] elapsed_ms 7\n");
    }
}
