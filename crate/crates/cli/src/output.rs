use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::Path;

fn sha256_hex(parts: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p);
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn timestamp() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

/// Writes `contents` to `path` through a temporary file in the same directory, so readers
/// never see a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("creating a temporary file in {}", dir.display()))?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// A CSV body prefixed by comment lines with the tool version, the command, the config
/// as one JSON line, a SHA-256 of config line and body, and the generation time. The
/// timestamp comes last and is not hashed.
pub fn csv_with_provenance(command: &str, config: &impl Serialize, body: &[u8]) -> Result<Vec<u8>> {
    let config = serde_json::to_string(config)?;
    let digest = sha256_hex(&[config.as_bytes(), b"\n", body]);
    let mut out = Vec::with_capacity(body.len() + config.len() + 200);
    writeln!(out, "# charfluct {} {command}", env!("CARGO_PKG_VERSION"))?;
    writeln!(out, "# config: {config}")?;
    writeln!(out, "# sha256: {digest}")?;
    writeln!(out, "# generated: {}", timestamp())?;
    out.extend_from_slice(body);
    Ok(out)
}

#[derive(Serialize)]
struct JsonReport<'a, C: Serialize, R: Serialize> {
    generated: String,
    command: &'a str,
    config: &'a C,
    sha256: String,
    rows: &'a R,
}

/// `{generated, command, config, sha256, rows}`, hashing config and rows.
pub fn json_with_provenance<C: Serialize, R: Serialize>(command: &str, config: &C, rows: &R) -> Result<Vec<u8>> {
    let c = serde_json::to_string(config)?;
    let r = serde_json::to_string(rows)?;
    let report = JsonReport { generated: timestamp(), command, config, sha256: sha256_hex(&[c.as_bytes(), b"\n", r.as_bytes()]), rows };
    let mut out = serde_json::to_vec_pretty(&report)?;
    out.push(b'\n');
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_ignores_timestamp_and_tracks_body() {
        let a = String::from_utf8(csv_with_provenance("exact", &serde_json::json!({"seed": 1}), b"q\n1\n").unwrap()).unwrap();
        let b = String::from_utf8(csv_with_provenance("exact", &serde_json::json!({"seed": 1}), b"q\n2\n").unwrap()).unwrap();
        let sha = |t: &str| t.lines().find(|l| l.starts_with("# sha256:")).unwrap().to_string();
        assert_ne!(sha(&a), sha(&b));
        assert!(a.lines().nth(1).unwrap().starts_with("# config: {\"seed\":1}"));
        assert!(a.ends_with("q\n1\n"));
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sub").join("x.csv");
        write_atomic(&path, b"one").unwrap();
        write_atomic(&path, b"two").unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), b"two");
        assert_eq!(std::fs::read_dir(path.parent().unwrap()).unwrap().count(), 1);
    }
}
