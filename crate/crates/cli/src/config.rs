//! Flat `key = value` config files with one section per experiment.
//!
//! ```text
//! # defaults for the compton experiment
//! [compton]
//! lambda = 7.1e-11
//! theta-deg = 90
//! ```
//!
//! Command-line flags always override file values.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context, Result};

/// Parsed config: section name -> key -> raw value string.
#[derive(Debug, Clone, Default)]
pub struct Config {
    sections: BTreeMap<String, BTreeMap<String, String>>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        Config::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Config> {
        let mut sections: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
        let mut current = String::new();
        for (lineno, raw) in text.lines().enumerate() {
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
                    bail!("config line {}: unterminated section header", lineno + 1);
                };
                current = name.trim().to_string();
                sections.entry(current.clone()).or_default();
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("config line {}: expected `key = value`", lineno + 1);
            };
            if current.is_empty() {
                bail!("config line {}: key outside of any [section]", lineno + 1);
            }
            sections
                .get_mut(&current)
                .expect("section exists")
                .insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(Config { sections })
    }

    /// All keys of one section (empty map when absent).
    pub fn section(&self, name: &str) -> BTreeMap<String, String> {
        self.sections.get(name).cloned().unwrap_or_default()
    }
}

/// Pulls typed values out of one experiment's section, tracking which keys
/// were consumed so unknown keys can be rejected.
pub struct SectionReader {
    experiment: String,
    remaining: BTreeMap<String, String>,
}

impl SectionReader {
    pub fn new(config: &Config, experiment: &str) -> Self {
        SectionReader {
            experiment: experiment.to_string(),
            remaining: config.section(experiment),
        }
    }

    /// `flag` wins over the file value; the file value must parse.
    pub fn resolve_f64(&mut self, key: &str, flag: Option<f64>, default: f64) -> Result<f64> {
        match (flag, self.remaining.remove(key)) {
            (Some(v), _) => Ok(v),
            (None, Some(text)) => text.parse::<f64>().with_context(|| {
                format!("config [{}] {key} = {text}: not a number", self.experiment)
            }),
            (None, None) => Ok(default),
        }
    }

    pub fn resolve_u64(&mut self, key: &str, flag: Option<u64>, default: u64) -> Result<u64> {
        match (flag, self.remaining.remove(key)) {
            (Some(v), _) => Ok(v),
            (None, Some(text)) => text.parse::<u64>().with_context(|| {
                format!(
                    "config [{}] {key} = {text}: not an integer",
                    self.experiment
                )
            }),
            (None, None) => Ok(default),
        }
    }

    pub fn resolve_usize(
        &mut self,
        key: &str,
        flag: Option<usize>,
        default: usize,
    ) -> Result<usize> {
        Ok(self.resolve_u64(key, flag.map(|v| v as u64), default as u64)? as usize)
    }

    pub fn resolve_string(
        &mut self,
        key: &str,
        flag: Option<String>,
        default: &str,
    ) -> Result<String> {
        match (flag, self.remaining.remove(key)) {
            (Some(v), _) => Ok(v),
            (None, Some(text)) => Ok(text),
            (None, None) => Ok(default.to_string()),
        }
    }

    /// Errors if the section held keys nobody asked for.
    pub fn finish(self) -> Result<()> {
        if let Some(key) = self.remaining.keys().next() {
            bail!(
                "config section [{}] has unknown key `{key}`",
                self.experiment
            );
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sections_and_comments() {
        let cfg = Config::parse(
            "# top\n[compton]\nlambda = 7.1e-11 # inline\ntheta-deg = 90\n\n[epr]\nn = 1000\n",
        )
        .unwrap();
        assert_eq!(cfg.section("compton").get("lambda").unwrap(), "7.1e-11");
        assert_eq!(cfg.section("epr").get("n").unwrap(), "1000");
        assert!(cfg.section("missing").is_empty());
    }

    #[test]
    fn flag_overrides_file() {
        let cfg = Config::parse("[compton]\nlambda = 1.0\n").unwrap();
        let mut r = SectionReader::new(&cfg, "compton");
        assert_eq!(r.resolve_f64("lambda", Some(2.0), 3.0).unwrap(), 2.0);
        r.finish().unwrap();
    }

    #[test]
    fn file_overrides_default() {
        let cfg = Config::parse("[compton]\nlambda = 1.5\n").unwrap();
        let mut r = SectionReader::new(&cfg, "compton");
        assert_eq!(r.resolve_f64("lambda", None, 3.0).unwrap(), 1.5);
        r.finish().unwrap();
    }

    #[test]
    fn unknown_keys_rejected() {
        let cfg = Config::parse("[compton]\nbogus = 1\n").unwrap();
        let r = SectionReader::new(&cfg, "compton");
        assert!(r.finish().is_err());
    }

    #[test]
    fn malformed_lines_rejected() {
        assert!(Config::parse("[unterminated\n").is_err());
        assert!(Config::parse("keyless\n").is_err());
        assert!(Config::parse("x = 1\n").is_err());
    }
}
