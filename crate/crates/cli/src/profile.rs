//! On-disk strategy profiles.
//!
//! ```json
//! { "n": 3, "strategies": [[0, 0, 1], [0.5, 0.5, 0], [0.5, 0.5, 0]], "labels": ["A", "B", "C"] }
//! ```
//!
//! Rows are players in order; row and column numbers in diagnostics are
//! 1-based.

use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use lupi::{LupiError, MixedStrategy, StrategyProfile};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileDocument {
    pub n: usize,
    pub strategies: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

/// A validated profile plus its player labels.
#[derive(Debug, Clone)]
pub struct LoadedProfile {
    pub profile: StrategyProfile,
    pub labels: Vec<String>,
}

impl ProfileDocument {
    pub fn from_profile(profile: &StrategyProfile, labels: Option<Vec<String>>) -> Self {
        Self {
            n: profile.spec().n(),
            strategies: profile.strategies().iter().map(|s| s.probs().to_vec()).collect(),
            labels,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| anyhow!("malformed profile document: {e}"))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("profile documents always serialize")
    }

    pub fn validate(self) -> Result<LoadedProfile> {
        let n = self.n;
        if n < 2 {
            bail!("profile needs n >= 2, got n = {n}");
        }
        if self.strategies.len() != n {
            bail!("profile declares n = {n} but has {} strategy rows", self.strategies.len());
        }
        let mut rows = Vec::with_capacity(n);
        for (i, row) in self.strategies.into_iter().enumerate() {
            rows.push(parse_row(i + 1, n, row)?);
        }
        let labels = match self.labels {
            Some(labels) if labels.len() != n => {
                bail!("profile has {} labels for {n} players", labels.len())
            }
            Some(labels) => labels,
            None => (1..=n).map(|i| format!("player {i}")).collect(),
        };
        let profile = StrategyProfile::new(rows)?;
        Ok(LoadedProfile { profile, labels })
    }
}

fn parse_row(row: usize, n: usize, probs: Vec<f64>) -> Result<MixedStrategy> {
    if probs.len() != n {
        bail!("row {row}: expected {n} probabilities, got {}", probs.len());
    }
    MixedStrategy::new(probs).map_err(|e| match e {
        LupiError::InvalidProbability { index, value } => {
            anyhow!("row {row}, column {}: probability {value} is outside [0, 1]", index + 1)
        }
        LupiError::NotNormalized { sum } => {
            anyhow!("row {row}: probabilities sum to {sum}, not within 1e-9 of 1")
        }
        other => anyhow!("row {row}: {other}"),
    })
}

/// Parses one comma-separated strategy such as `0.5,0.5,0`.
pub fn parse_strategy_arg(position: usize, n: usize, text: &str) -> Result<MixedStrategy> {
    let probs = text
        .split(',')
        .enumerate()
        .map(|(j, x)| {
            x.trim()
                .parse::<f64>()
                .with_context(|| format!("strategy {position}, entry {}: '{x}' is not a number", j + 1))
        })
        .collect::<Result<Vec<_>>>()?;
    parse_row(position, n, probs)
}

pub fn load(path: &Path) -> Result<LoadedProfile> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    ProfileDocument::parse(&text)?.validate()
}

pub fn save(path: &Path, doc: &ProfileDocument) -> Result<()> {
    fs::write(path, doc.to_json() + "\n").with_context(|| format!("cannot write {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_labelled_profile() {
        let doc = ProfileDocument::parse(
            r#"{"n": 3, "strategies": [[0,0,1],[0.5,0.5,0],[0.5,0.5,0]], "labels": ["A","B","C"]}"#,
        )
        .unwrap();
        let loaded = doc.validate().unwrap();
        assert_eq!(loaded.labels, vec!["A", "B", "C"]);
        assert_eq!(loaded.profile.strategy(0).probs(), &[0.0, 0.0, 1.0]);
    }

    #[test]
    fn default_labels_are_one_based() {
        let doc = ProfileDocument::parse(r#"{"n": 2, "strategies": [[1,0],[0,1]]}"#).unwrap();
        assert_eq!(doc.validate().unwrap().labels, vec!["player 1", "player 2"]);
    }

    #[test]
    fn reports_the_offending_row_and_column() {
        let err = ProfileDocument::parse(r#"{"n": 2, "strategies": [[1,0],[1.5,-0.5]]}"#)
            .unwrap()
            .validate()
            .unwrap_err();
        assert_eq!(err.to_string(), "row 2, column 1: probability 1.5 is outside [0, 1]");

        let err = ProfileDocument::parse(r#"{"n": 2, "strategies": [[0.5,0.6],[1,0]]}"#)
            .unwrap()
            .validate()
            .unwrap_err();
        assert!(err.to_string().starts_with("row 1: probabilities sum to"));

        let err = ProfileDocument::parse(r#"{"n": 3, "strategies": [[1,0,0],[1,0]]}"#)
            .unwrap()
            .validate()
            .unwrap_err();
        assert!(err.to_string().contains("2 strategy rows"));
    }

    #[test]
    fn syntax_errors_carry_a_position() {
        let err = ProfileDocument::parse("{\"n\": 2,\n \"strategies\": [[1,0],[0,1]").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn strategy_arguments() {
        let s = parse_strategy_arg(1, 3, "0.5, 0.5, 0").unwrap();
        assert_eq!(s.probs(), &[0.5, 0.5, 0.0]);
        assert!(parse_strategy_arg(2, 3, "0.5,x,0").unwrap_err().to_string().contains("entry 2"));
        assert!(parse_strategy_arg(2, 3, "0.5,0.5").is_err());
    }
}
