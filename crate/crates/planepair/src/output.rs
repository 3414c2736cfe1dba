use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::Format;
use crate::error::{CliError, Result};

/// Environment variable naming the directory reports go to when no output path is given.
pub const OUT_DIR_ENV: &str = "PLANEPAIR_OUT_DIR";

/// A command result in its three presentations.
pub trait Render: Serialize {
    fn csv(&self) -> Result<String>;
    fn text(&self) -> String;

    fn json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => self.json(),
            Format::Csv => self.csv(),
            Format::Text => Ok(self.text()),
        }
    }
}

/// `x` rounded to 9 significant digits.
pub fn sig9(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let r: f64 = format!("{x:.8e}").parse().unwrap_or(x);
    let a = r.abs();
    if (1e-4..1e9).contains(&a) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

pub(crate) fn csv_string(
    rows: impl FnOnce(&mut csv::Writer<Vec<u8>>) -> Result<()>,
) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    rows(&mut w)?;
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::io("csv buffer", e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Where a command's output goes: the explicit path, else `$PLANEPAIR_OUT_DIR/<stem>.<ext>`, else stdout.
pub fn destination(explicit: Option<&Path>, stem: &str, format: Format) -> Option<PathBuf> {
    if let Some(p) = explicit {
        return Some(p.to_path_buf());
    }
    let dir = std::env::var_os(OUT_DIR_ENV)?;
    Some(PathBuf::from(dir).join(format!("{stem}.{}", format.extension())))
}

pub fn emit(content: &str, dest: Option<&Path>) -> Result<()> {
    match dest {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent)
                    .map_err(|e| CliError::io(parent.display().to_string(), e))?;
            }
            std::fs::write(path, content).map_err(|e| CliError::io(path.display().to_string(), e))
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(content.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::io("stdout", e))
        }
    }
}
