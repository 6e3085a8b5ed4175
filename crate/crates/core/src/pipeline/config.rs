use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

fn default_languages() -> Vec<String> {
    vec!["en".into()]
}
fn default_threshold() -> f64 {
    0.3
}
fn default_max_iters() -> usize {
    100
}
fn default_k_max() -> u32 {
    30
}
fn default_top_urls() -> usize {
    5000
}
fn default_rng_seed() -> u64 {
    42
}
fn default_folds() -> usize {
    5
}
fn default_hashtag_k() -> usize {
    20
}
fn default_human_top() -> usize {
    50
}
fn default_export_min_weight() -> u64 {
    1
}
fn default_true() -> bool {
    true
}

/// Everything a full run needs. Relative paths resolve against the config file's
/// directory when loaded with [`PipelineConfig::load`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub corpus: PathBuf,
    pub scores: PathBuf,
    pub liberal_outlets: PathBuf,
    pub conservative_outlets: PathBuf,
    #[serde(default)]
    pub url_cache: Option<PathBuf>,
    /// Out-of-context terms dropped at ingest.
    #[serde(default)]
    pub exclusion_terms: Option<PathBuf>,
    /// General hashtags left out of rankings; defaults to the built-in list.
    #[serde(default)]
    pub general_hashtags: Option<PathBuf>,
    #[serde(default = "default_languages")]
    pub languages: Vec<String>,
    #[serde(default = "default_threshold")]
    pub threshold: f64,
    #[serde(default = "default_max_iters")]
    pub max_iters: usize,
    #[serde(default = "default_k_max")]
    pub k_max: u32,
    #[serde(default = "default_top_urls")]
    pub top_urls: usize,
    #[serde(default = "default_rng_seed")]
    pub rng_seed: u64,
    #[serde(default = "default_folds")]
    pub folds: usize,
    #[serde(default = "default_hashtag_k")]
    pub hashtag_k: usize,
    #[serde(default = "default_human_top")]
    pub human_top: usize,
    /// Graph exports drop edges lighter than this.
    #[serde(default = "default_export_min_weight")]
    pub export_min_weight: u64,
    #[serde(default = "default_true")]
    pub export_graph: bool,
}

impl PipelineConfig {
    /// A config with default parameters for the given inputs.
    pub fn new(
        corpus: impl Into<PathBuf>,
        scores: impl Into<PathBuf>,
        liberal_outlets: impl Into<PathBuf>,
        conservative_outlets: impl Into<PathBuf>,
    ) -> Self {
        PipelineConfig {
            corpus: corpus.into(),
            scores: scores.into(),
            liberal_outlets: liberal_outlets.into(),
            conservative_outlets: conservative_outlets.into(),
            url_cache: None,
            exclusion_terms: None,
            general_hashtags: None,
            languages: default_languages(),
            threshold: default_threshold(),
            max_iters: default_max_iters(),
            k_max: default_k_max(),
            top_urls: default_top_urls(),
            rng_seed: default_rng_seed(),
            folds: default_folds(),
            hashtag_k: default_hashtag_k(),
            human_top: default_human_top(),
            export_min_weight: default_export_min_weight(),
            export_graph: true,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::from_toml(&text)?;
        if let Some(base) = path.parent() {
            cfg.resolve_relative_to(base);
        }
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn resolve_relative_to(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        fix(&mut self.corpus);
        fix(&mut self.scores);
        fix(&mut self.liberal_outlets);
        fix(&mut self.conservative_outlets);
        for p in [&mut self.url_cache, &mut self.exclusion_terms, &mut self.general_hashtags]
            .into_iter()
            .flatten()
        {
            fix(p);
        }
    }

    /// Checks parameter ranges and that every referenced file exists.
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.threshold) {
            return Err(Error::Config(format!("threshold {} outside [0, 1]", self.threshold)));
        }
        if self.max_iters == 0 {
            return Err(Error::Config("max_iters must be at least 1".into()));
        }
        if self.folds < 2 {
            return Err(Error::Config("folds must be at least 2".into()));
        }
        if self.languages.iter().all(|l| l.trim().is_empty()) {
            return Err(Error::Config("languages must not be empty".into()));
        }
        let required = [&self.corpus, &self.scores, &self.liberal_outlets, &self.conservative_outlets];
        let optional = [&self.url_cache, &self.exclusion_terms, &self.general_hashtags];
        for p in required.into_iter().chain(optional.into_iter().flatten()) {
            if !p.is_file() {
                return Err(Error::Config(format!("input file {} does not exist", p.display())));
            }
        }
        Ok(())
    }
}

/// Per-stage RNG seed: SplitMix64 of the run seed XOR the FNV-1a hash of the stage
/// name. Stages can be rerun alone with the same seed they got inside a full run.
pub fn stage_seed(run_seed: u64, stage: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in stage.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    let mut z = (run_seed ^ h).wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
