//! Pipeline configuration, read from TOML.
//!
//! Relative input paths are resolved against the directory holding the
//! config file. See `README.md` for a complete example.

use std::fs;
use std::path::{Path, PathBuf};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::corpus::MessageFormat;
use crate::econometrics::AnalysisConfig;
use crate::error::{Error, Result};
use crate::graphs::DEFAULT_WINDOW_SIZE;
use crate::semantics::SentimentBackend;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Inputs {
    pub messages: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message_format: Option<MessageFormat>,
    pub price: PathBuf,
    pub control: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lexicon: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stopwords: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dictionary: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precomputed_sentiment: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Horizon {
    pub start: DateTime<Utc>,
    pub weeks: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TextConfig {
    /// Language tag for the built-in stopword list and the stemmer.
    pub language: String,
    pub keep_digits: bool,
    pub stem: bool,
}

impl Default for TextConfig {
    fn default() -> Self {
        TextConfig {
            language: "it".into(),
            keep_digits: false,
            stem: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BetweennessMode {
    Exact,
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkConfig {
    pub focal_word: String,
    #[serde(default = "default_window")]
    pub window_size: usize,
    #[serde(default = "default_mode")]
    pub betweenness_mode: BetweennessMode,
    /// Sources per week in sampled mode (capped at the node count).
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
    /// Worker threads for per-week extraction; 0 uses all cores.
    #[serde(default)]
    pub workers: usize,
    #[serde(default = "default_true")]
    pub export_graphs: bool,
}

fn default_window() -> usize {
    DEFAULT_WINDOW_SIZE
}
fn default_mode() -> BetweennessMode {
    BetweennessMode::Exact
}
fn default_samples() -> usize {
    256
}
fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SentimentConfig {
    pub backend: SentimentBackend,
}

impl Default for SentimentConfig {
    fn default() -> Self {
        SentimentConfig {
            backend: SentimentBackend::Lexicon,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub inputs: Inputs,
    pub horizon: Horizon,
    #[serde(default)]
    pub text: TextConfig,
    pub network: NetworkConfig,
    #[serde(default)]
    pub sentiment: SentimentConfig,
    #[serde(default)]
    pub analysis: AnalysisConfig,
    pub output_dir: PathBuf,
}

impl PipelineConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let mut cfg: PipelineConfig = toml::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        cfg.network.focal_word = cfg.network.focal_word.to_lowercase();
        cfg.validate()?;
        Ok(cfg)
    }

    /// Parse and resolve relative paths against the file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let raw = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = Self::from_toml_str(&raw)?;
        let base = path.parent().unwrap_or(Path::new("."));
        cfg.resolve_paths(base);
        Ok(cfg)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        let i = &mut self.inputs;
        fix(&mut i.messages);
        fix(&mut i.price);
        fix(&mut i.control);
        for p in [
            &mut i.lexicon,
            &mut i.stopwords,
            &mut i.dictionary,
            &mut i.precomputed_sentiment,
        ]
        .into_iter()
        .flatten()
        {
            fix(p);
        }
        fix(&mut self.output_dir);
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.horizon.weeks == 0 {
            return bad("horizon.weeks must be at least 1".into());
        }
        if self.network.window_size == 0 {
            return bad("network.window_size must be at least 1".into());
        }
        if self.network.focal_word.trim().is_empty() {
            return bad("network.focal_word is empty".into());
        }
        if self.network.betweenness_mode == BetweennessMode::Sampled && self.network.samples == 0 {
            return bad("network.samples must be at least 1 in sampled mode".into());
        }
        match self.sentiment.backend {
            SentimentBackend::Lexicon if self.inputs.lexicon.is_none() => {
                bad("sentiment backend `lexicon` needs inputs.lexicon".into())
            }
            SentimentBackend::Precomputed if self.inputs.precomputed_sentiment.is_none() => {
                bad("sentiment backend `precomputed` needs inputs.precomputed_sentiment".into())
            }
            _ => Ok(()),
        }
    }

    /// Every configured input file, in a fixed order.
    pub fn input_files(&self) -> Vec<(&'static str, &Path)> {
        let i = &self.inputs;
        let mut v: Vec<(&'static str, &Path)> = vec![
            ("messages", &i.messages),
            ("price", &i.price),
            ("control", &i.control),
        ];
        let optional = [
            ("lexicon", &i.lexicon),
            ("stopwords", &i.stopwords),
            ("dictionary", &i.dictionary),
            ("precomputed_sentiment", &i.precomputed_sentiment),
        ];
        for (name, p) in optional {
            if let Some(p) = p {
                v.push((name, p.as_path()));
            }
        }
        v
    }

    pub fn message_format(&self) -> MessageFormat {
        self.inputs
            .message_format
            .unwrap_or_else(|| MessageFormat::from_path(&self.inputs.messages))
    }
}
