use crate::error::Result;
use serde::Serialize;
use std::fs;
use std::path::Path;

/// 17 significant digits.
pub fn csv_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes through a temporary file in the same directory and renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("out");
    let tmp = dir.join(format!(".{name}.tmp"));
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Everything needed to rerun a command and get the same files.
#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub seed: u64,
    pub threads: usize,
    pub parallel_feature: bool,
    pub config: serde_json::Value,
    pub outputs: Vec<String>,
}

impl Manifest {
    pub fn new(command: &str, seed: u64, threads: usize, config: serde_json::Value) -> Self {
        Manifest {
            tool: "nnops",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            seed,
            threads,
            parallel_feature: cfg!(feature = "parallel"),
            config,
            outputs: Vec::new(),
        }
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        write_atomic(&dir.join("manifest.json"), serde_json::to_string_pretty(self)?.as_bytes())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_round_trips() {
        for x in [0.1, -1.0 / 3.0, 1e-300, 6.02e23] {
            assert_eq!(csv_float(x).parse::<f64>().unwrap(), x);
        }
    }
}
