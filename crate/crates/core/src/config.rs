//! Optional `condlint.toml` defaults. Command-line flags take precedence.

use std::path::Path;

use serde::Deserialize;

use crate::{
    corpus::PrevalenceBasis,
    error::{Error, Result},
};

pub const FILE_NAME: &str = "condlint.toml";

#[derive(Clone, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum PatternList {
    #[default]
    All,
    Comma(String),
    List(Vec<String>),
}

impl PatternList {
    /// Comma-joined identifiers, or `None` for all patterns.
    pub fn joined(&self) -> Option<String> {
        match self {
            PatternList::All => None,
            PatternList::Comma(s) => Some(s.clone()),
            PatternList::List(v) => Some(v.join(",")),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub layout: Option<String>,
    pub patterns: Option<PatternList>,
    pub format: Option<String>,
    pub workers: Option<usize>,
    pub basis: Option<PrevalenceBasis>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Config::parse(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    /// `dir/condlint.toml` if it exists, otherwise defaults.
    pub fn discover(dir: &Path) -> Result<Self> {
        let path = dir.join(FILE_NAME);
        if path.is_file() {
            Config::load(&path)
        } else {
            Ok(Config::default())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys() {
        let c = Config::parse(
            "layout = \"labs/{group}/{student}.py\"\npatterns = [\"nested_if\", \"else_if\"]\nformat = \"csv\"\nbasis = \"submissions\"\n",
        )
        .unwrap();
        assert_eq!(c.layout.as_deref(), Some("labs/{group}/{student}.py"));
        assert_eq!(c.patterns.unwrap().joined().unwrap(), "nested_if,else_if");
        assert_eq!(c.basis, Some(PrevalenceBasis::Submissions));
        let c = Config::parse("patterns = \"nested_if\"").unwrap();
        assert_eq!(c.patterns.unwrap().joined().unwrap(), "nested_if");
    }

    #[test]
    fn unknown_key_rejected() {
        assert!(Config::parse("colour = true").is_err());
        assert_eq!(Config::parse("").unwrap(), Config::default());
    }
}
