//! `run-manifest.json`: the resolved options of a run and digests of every
//! input it read. Contains nothing time- or machine-dependent, so identical
//! runs produce identical manifests.

use std::io::Read;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{data, CliError};
use crate::RunContext;

pub const FILE_NAME: &str = "run-manifest.json";

#[derive(Debug, Serialize)]
pub struct InputDigest {
    pub role: String,
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub config: serde_json::Value,
    pub inputs: Vec<InputDigest>,
}

impl Manifest {
    pub fn new(command: &'static str, config: &impl Serialize) -> Self {
        Manifest {
            tool: "spud",
            version: env!("CARGO_PKG_VERSION"),
            command,
            config: serde_json::to_value(config).expect("options serialize"),
            inputs: Vec::new(),
        }
    }

    pub fn add_input(&mut self, role: &str, path: &Path) -> Result<(), CliError> {
        let (bytes, sha256) = digest_file(path)?;
        self.inputs.push(InputDigest {
            role: role.to_owned(),
            path: path.display().to_string(),
            bytes,
            sha256,
        });
        Ok(())
    }

    /// Write to the explicit manifest path, else into `dir`. Without either
    /// nothing is written.
    pub fn write(&self, ctx: &RunContext, dir: Option<&Path>) -> Result<(), CliError> {
        let target: PathBuf = match (&ctx.manifest, dir) {
            (Some(path), _) => path.clone(),
            (None, Some(dir)) => dir.join(FILE_NAME),
            (None, None) => return Ok(()),
        };
        write_json(&target, self)
    }
}

pub fn digest_file(path: &Path) -> Result<(u64, String), CliError> {
    let mut file = std::fs::File::open(path)
        .map_err(|e| data(format!("cannot read {}: {e}", path.display())))?;
    let mut hasher = Sha256::new();
    let mut buf = vec![0u8; 1 << 16];
    let mut total = 0u64;
    loop {
        let n = file
            .read(&mut buf)
            .map_err(|e| data(format!("cannot read {}: {e}", path.display())))?;
        if n == 0 {
            break;
        }
        hasher.update(&buf[..n]);
        total += n as u64;
    }
    Ok((total, hex::encode(hasher.finalize())))
}

/// Directory holding `file`, for manifests written next to a single output.
pub fn parent_dir(file: &Path) -> &Path {
    match file.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    }
}

pub fn write_json(path: &Path, value: &impl Serialize) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(data)?;
    text.push('\n');
    write_text(path, &text)
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)
            .map_err(|e| data(format!("cannot create {}: {e}", dir.display())))?;
    }
    std::fs::write(path, text).map_err(|e| data(format!("cannot write {}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_of_known_content() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("abc.txt");
        std::fs::write(&p, "abc").unwrap();
        let (n, hex) = digest_file(&p).unwrap();
        assert_eq!(n, 3);
        assert_eq!(
            hex,
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn parent_of_bare_file_is_cwd() {
        assert_eq!(parent_dir(Path::new("report.json")), Path::new("."));
        assert_eq!(parent_dir(Path::new("out/report.json")), Path::new("out"));
    }
}
