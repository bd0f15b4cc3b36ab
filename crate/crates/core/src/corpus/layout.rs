use regex::Regex;

use crate::error::{Error, Result};

/// A path pattern such as `{group}/{student}/*.py`.
///
/// `{group}` and `{student}` each match one path segment; `*` and `?` match
/// within a segment and a `**` segment matches any number of directories.
#[derive(Clone, Debug)]
pub struct Layout {
    pattern: String,
    regex: Regex,
}

impl Layout {
    pub fn parse(pattern: &str) -> Result<Self> {
        let invalid = |reason: &str| Error::InvalidLayout {
            layout: pattern.to_string(),
            reason: reason.to_string(),
        };
        for placeholder in ["{group}", "{student}"] {
            match pattern.matches(placeholder).count() {
                1 => {}
                0 => return Err(invalid(&format!("missing {placeholder}"))),
                _ => return Err(invalid(&format!("{placeholder} appears more than once"))),
            }
        }
        let mut re = String::from("^");
        let segments: Vec<&str> = pattern.trim_matches('/').split('/').collect();
        for (i, seg) in segments.iter().enumerate() {
            let last = i + 1 == segments.len();
            if *seg == "**" {
                re.push_str("(?:[^/]+/)*");
                if last {
                    re.push_str("[^/]+");
                }
                continue;
            }
            let mut rest = *seg;
            while !rest.is_empty() {
                if let Some(r) = rest.strip_prefix("{group}") {
                    re.push_str("(?P<group>[^/]+)");
                    rest = r;
                } else if let Some(r) = rest.strip_prefix("{student}") {
                    re.push_str("(?P<student>[^/]+)");
                    rest = r;
                } else {
                    let c = rest.chars().next().unwrap();
                    match c {
                        '*' => re.push_str("[^/]*"),
                        '?' => re.push_str("[^/]"),
                        '{' | '}' => return Err(invalid("unknown placeholder")),
                        c => re.push_str(&regex::escape(&c.to_string())),
                    }
                    rest = &rest[c.len_utf8()..];
                }
            }
            if !last {
                re.push('/');
            }
        }
        re.push('$');
        let regex = Regex::new(&re).map_err(|e| invalid(&e.to_string()))?;
        Ok(Layout {
            pattern: pattern.to_string(),
            regex,
        })
    }

    pub fn as_str(&self) -> &str {
        &self.pattern
    }

    /// `(group, student)` for a `/`-separated path relative to the corpus
    /// root.
    pub fn captures(&self, relative: &str) -> Option<(String, String)> {
        let caps = self.regex.captures(relative)?;
        let group = caps.name("group")?.as_str();
        let student = caps.name("student")?.as_str();
        Some((group.to_string(), student.to_string()))
    }
}

impl Default for Layout {
    fn default() -> Self {
        Layout::parse("{group}/{student}/*.py").expect("default layout is valid")
    }
}
