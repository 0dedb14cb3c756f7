use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::CliError;

/// A `build` / `verify` project file (TOML). Relative paths resolve against
/// the file's own directory.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectConfig {
    pub base: PathBuf,
    pub hspec: PathBuf,
    pub output: PathBuf,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub audit: AuditDepths,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AuditDepths {
    /// word length for validating the base structure
    pub base_depth: usize,
    pub language_depth: usize,
    pub multiplier_depth: usize,
    pub window: (i64, i64),
    pub max_lamps: Option<usize>,
    pub random_words: usize,
    pub max_word_len: usize,
}

impl Default for AuditDepths {
    fn default() -> Self {
        Self {
            base_depth: 6,
            language_depth: 10,
            multiplier_depth: 8,
            window: (-2, 2),
            max_lamps: Some(2),
            random_words: 200,
            max_word_len: 40,
        }
    }
}

fn default_seed() -> u64 {
    7
}

impl ProjectConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        let mut cfg: ProjectConfig = toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        let dir = path.parent().unwrap_or(Path::new("."));
        for p in [&mut cfg.base, &mut cfg.hspec, &mut cfg.output] {
            if p.is_relative() {
                *p = dir.join(&*p);
            }
        }
        cfg.audit.check()?;
        Ok(cfg)
    }
}

impl AuditDepths {
    pub fn check(&self) -> Result<(), CliError> {
        if self.base_depth == 0 || self.language_depth == 0 || self.multiplier_depth == 0 {
            return Err(CliError::Usage("audit depths must be at least 1".into()));
        }
        let (a, b) = self.window;
        if !(a <= 0 && 0 <= b) {
            return Err(CliError::Usage(format!("window {a}:{b} must contain 0")));
        }
        Ok(())
    }
}

/// Parse `A:B`.
pub fn parse_window(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected A:B, got '{s}'"))?;
    let a = a.trim().parse().map_err(|e| format!("bad window start '{a}': {e}"))?;
    let b = b.trim().parse().map_err(|e| format!("bad window end '{b}': {e}"))?;
    Ok((a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_syntax() {
        assert_eq!(parse_window("-2:3"), Ok((-2, 3)));
        assert!(parse_window("2").is_err());
        assert!(parse_window("a:1").is_err());
    }

    #[test]
    fn window_must_hold_zero() {
        let d = AuditDepths { window: (1, 3), ..AuditDepths::default() };
        assert!(d.check().is_err());
        let d = AuditDepths { language_depth: 0, ..AuditDepths::default() };
        assert!(d.check().is_err());
        assert!(AuditDepths::default().check().is_ok());
    }
}
