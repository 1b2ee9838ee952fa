use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use pks_core::spectral::{read_checkpoint, write_checkpoint};
use pks_core::SpectralField;

pub fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Read { path: path.into(), source })
}

pub fn write_text(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|source| CliError::Write { path: path.into(), source })
}

pub fn create_dir(path: &Path) -> CliResult<()> {
    fs::create_dir_all(path).map_err(|source| CliError::Write { path: path.into(), source })
}

pub fn read_toml<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    toml::from_str(&read_text(path)?).map_err(|e| CliError::Parse { path: path.into(), message: e.to_string() })
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    serde_json::from_str(&read_text(path)?).map_err(|e| CliError::Parse { path: path.into(), message: e.to_string() })
}

/// Sidecar stored next to a checkpoint as `<file>.json`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Sidecar {
    pub strain: f64,
    pub t: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<pks_core::SimConfig>,
}

pub fn sidecar_path(checkpoint: &Path) -> PathBuf {
    let mut s = checkpoint.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

/// Reads a checkpoint and applies the sidecar strain when one exists.
pub fn load_field(path: &Path) -> CliResult<SpectralField> {
    let file = fs::File::open(path).map_err(|source| CliError::Read { path: path.into(), source })?;
    let field = read_checkpoint(std::io::BufReader::new(file))
        .map_err(|e| CliError::Parse { path: path.into(), message: e.to_string() })?;
    let side = sidecar_path(path);
    if side.exists() {
        let s: Sidecar = read_json(&side)?;
        return Ok(field.with_strain(s.strain));
    }
    Ok(field)
}

pub fn save_field(path: &Path, field: &SpectralField, sidecar: &Sidecar) -> CliResult<()> {
    let mut bytes = Vec::new();
    write_checkpoint(&mut bytes, field)?;
    fs::write(path, bytes).map_err(|source| CliError::Write { path: path.into(), source })?;
    write_text(&sidecar_path(path), &(serde_json::to_string_pretty(sidecar)? + "\n"))
}

/// Resolves `p` against the directory of the file that mentioned it.
pub fn resolve(base_file: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.into()
    } else {
        base_file.parent().unwrap_or(Path::new(".")).join(p)
    }
}
