use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use hdint_core::num::{parse_rational, to_f64};
use hdint_core::suites::DEFAULT_SEED;

/// Keys accepted in the config file; every one of them is also a flag.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub json: Option<bool>,
    pub seed: Option<u64>,
    pub precision: Option<u32>,
    pub tolerance: Option<String>,
    pub depths: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Settings {
    pub json: bool,
    pub seed: u64,
    pub precision: u32,
    pub tolerance: f64,
    pub depths: RangeInclusive<u32>,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            json: false,
            seed: DEFAULT_SEED,
            precision: 256,
            tolerance: 1e-9,
            depths: 1..=20,
        }
    }
}

/// `$HDINT_CONFIG`, else `hdint/config.toml` under the XDG config directory.
pub fn default_path() -> Option<PathBuf> {
    if let Some(p) = std::env::var_os("HDINT_CONFIG") {
        return Some(PathBuf::from(p));
    }
    let base = std::env::var_os("XDG_CONFIG_HOME")
        .map(PathBuf::from)
        .or_else(|| std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".config")))?;
    Some(base.join("hdint").join("config.toml"))
}

/// Reads `path`; a missing file at the default location is not an error.
pub fn load(path: &Path, required: bool) -> Result<FileConfig, String> {
    match std::fs::read_to_string(path) {
        Ok(text) => toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display())),
        Err(e) if !required && e.kind() == std::io::ErrorKind::NotFound => {
            Ok(FileConfig::default())
        }
        Err(e) => Err(format!("{}: {e}", path.display())),
    }
}

/// `a..b`, inclusive on both ends.
pub fn parse_depths(s: &str) -> Result<RangeInclusive<u32>, String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("depths '{s}' should look like 1..20"))?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let num = |t: &str| {
        t.trim()
            .parse::<u32>()
            .map_err(|_| format!("depths '{s}': '{t}' is not a depth"))
    };
    let (a, b) = (num(a)?, num(b)?);
    if a > b {
        return Err(format!("depths '{s}' is empty"));
    }
    Ok(a..=b)
}

pub fn parse_tolerance(s: &str) -> Result<f64, String> {
    let r = parse_rational(s).map_err(|e| format!("tolerance '{s}': {e}"))?;
    let t = to_f64(&r);
    if t.is_finite() && t >= 0.0 {
        Ok(t)
    } else {
        Err(format!("tolerance '{s}' must be a nonnegative rational"))
    }
}

impl Settings {
    /// Applies the file, then the flags on top.
    pub fn merge(file: FileConfig, flags: FileConfig) -> Result<Settings, String> {
        let mut s = Settings::default();
        for layer in [file, flags] {
            if let Some(j) = layer.json {
                s.json = s.json || j;
            }
            if let Some(seed) = layer.seed {
                s.seed = seed;
            }
            if let Some(p) = layer.precision {
                s.precision = p;
            }
            if let Some(t) = layer.tolerance {
                s.tolerance = parse_tolerance(&t)?;
            }
            if let Some(d) = layer.depths {
                s.depths = parse_depths(&d)?;
            }
        }
        Ok(s)
    }
}
