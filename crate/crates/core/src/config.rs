//! Pronoun inventory and subject markers for discourse processing.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscourseConfig {
    /// "Both companies": refers to the current tie-up.
    pub pronoun_both: String,
    /// "The company": nearest preceding company or the topic.
    pub pronoun_same: String,
    /// "The company itself": the topic.
    pub pronoun_self: String,
    /// Case markers that make a preceding company a topic.
    pub subject_markers: Vec<String>,
}

impl Default for DiscourseConfig {
    fn default() -> Self {
        DiscourseConfig {
            pronoun_both: "両社".into(),
            pronoun_same: "同社".into(),
            pronoun_self: "自社".into(),
            subject_markers: vec!["が".into(), "は".into(), "も".into()],
        }
    }
}

impl DiscourseConfig {
    pub fn is_pronoun(&self, surface: &str) -> bool {
        surface == self.pronoun_both || surface == self.pronoun_same || surface == self.pronoun_self
    }

    pub fn is_subject_marker(&self, surface: &str) -> bool {
        self.subject_markers.iter().any(|m| m == surface)
    }

    /// Applies one configuration key. Returns `false` for keys that are not
    /// discourse settings so callers can share a config file.
    pub fn set(&mut self, key: &str, value: &str) -> bool {
        match key {
            "pronoun.both" => self.pronoun_both = value.to_string(),
            "pronoun.same" => self.pronoun_same = value.to_string(),
            "pronoun.self" => self.pronoun_self = value.to_string(),
            "subject_markers" => {
                self.subject_markers = value.split_whitespace().map(str::to_string).collect()
            }
            _ => return false,
        }
        true
    }

    /// Reads `key = value` lines, ignoring keys it does not know.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = DiscourseConfig::default();
        for (line, key, value) in parse_key_values(text)? {
            cfg.set(&key, &value);
            if cfg.subject_markers.is_empty() {
                return Err(Error::parse(line, "subject_markers must not be empty"));
            }
        }
        Ok(cfg)
    }
}

/// Splits `key = value` lines. `#` starts a comment line.
pub fn parse_key_values(text: &str) -> Result<Vec<(usize, String, String)>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::parse(idx + 1, "expected `key = value`"))?;
        let k = k.trim();
        if k.is_empty() {
            return Err(Error::parse(idx + 1, "empty key"));
        }
        out.push((idx + 1, k.to_string(), v.trim().to_string()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_overrides() {
        let cfg = DiscourseConfig::parse("# discourse\npronoun.same = 当社\nsubject_markers = が は\npatterns = x.pat\n").unwrap();
        assert_eq!(cfg.pronoun_same, "当社");
        assert_eq!(cfg.pronoun_both, "両社");
        assert!(cfg.is_subject_marker("は"));
        assert!(!cfg.is_subject_marker("も"));
        assert!(DiscourseConfig::parse("novalue\n").is_err());
        assert!(DiscourseConfig::parse("subject_markers =\n").is_err());
    }
}
