use std::path::Path;

use serde::Deserialize;

use crate::args::{Cli, Format};

pub const DEFAULT_BOUND: u64 = 10_000;
pub const DEFAULT_SEED: u64 = 0x6d69_6c6e;

/// Optional file defaults; keys mirror the global flags.
#[derive(Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub bound: Option<u64>,
    pub format: Option<Format>,
    pub seed: Option<u64>,
    pub witnesses: Option<bool>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("invalid config {}: {e}", path.display()))
    }
}

/// Effective settings: flag, then environment (both through clap), then
/// config file, then built-in default.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub bound: u64,
    /// `None` means the command's own default.
    pub format: Option<Format>,
    pub seed: u64,
    pub witnesses: bool,
}

impl RunConfig {
    pub fn resolve(cli: &Cli) -> Result<Self, String> {
        let file = match &cli.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        let bound = cli.bound.or(file.bound).unwrap_or(DEFAULT_BOUND);
        if bound == 0 {
            return Err("search bound must be positive".into());
        }
        Ok(RunConfig {
            bound,
            format: cli.format.or(file.format),
            seed: cli.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            witnesses: cli.witnesses || file.witnesses.unwrap_or(false),
        })
    }

    pub fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::Parser;
    use std::io::Write;

    #[test]
    fn precedence_flag_over_config_over_default() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(file, "bound = 77\nformat = \"csv\"\nwitnesses = true").unwrap();
        let path = file.path().to_str().unwrap().to_string();

        let cli = Cli::parse_from(["milnor", "--config", &path, "paper-table"]);
        let cfg = RunConfig::resolve(&cli).unwrap();
        assert_eq!((cfg.bound, cfg.format, cfg.witnesses), (77, Some(Format::Csv), true));
        assert_eq!(cfg.seed, DEFAULT_SEED);

        let cli = Cli::parse_from(["milnor", "--config", &path, "--bound", "5", "--format", "text", "paper-table"]);
        let cfg = RunConfig::resolve(&cli).unwrap();
        assert_eq!((cfg.bound, cfg.format), (5, Some(Format::Text)));

        let cli = Cli::parse_from(["milnor", "paper-table"]);
        assert_eq!(RunConfig::resolve(&cli).unwrap().bound, DEFAULT_BOUND);
    }

    #[test]
    fn rejects_unknown_keys_and_zero_bound() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(file, "boundd = 3").unwrap();
        assert!(FileConfig::load(file.path()).is_err());
        let cli = Cli::parse_from(["milnor", "--bound", "0", "paper-table"]);
        assert!(RunConfig::resolve(&cli).is_err());
    }
}
