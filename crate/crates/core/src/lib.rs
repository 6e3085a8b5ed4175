//! Retweet-network analytics for partisan social-bot studies.
//!
//! The crate is organised as a batch pipeline:
//!
//! - [`corpus`] parses, filters, deduplicates, and indexes a line-delimited tweet corpus.
//! - [`accounts`] attaches precomputed bot scores and classifies accounts.
//! - [`ideology`] seeds political leanings from shared media-outlet URLs and propagates
//!   them over the retweet graph, with stratified cross-validation.
//! - [`graph`] builds the retweet network and computes k-cores, degree centralities,
//!   group interaction matrices, and exports.
//! - [`metrics`] computes the four bot-effectiveness ratios per political side.
//! - [`hashtags`] ranks hashtags per group and flags bot/human divergence.
//! - [`pipeline`] runs every stage end to end and writes a hashed report bundle.
//! - [`scenario`] generates synthetic corpora with closed-form ground truth.

pub mod accounts;
pub mod corpus;
pub mod error;
pub mod graph;
pub mod hashtags;
pub mod ideology;
pub mod metrics;
pub mod pipeline;
pub mod report;
pub mod scenario;

pub use error::{Error, Result};

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// A political side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Leaning {
    Liberal,
    Conservative,
}

impl Leaning {
    pub const BOTH: [Leaning; 2] = [Leaning::Liberal, Leaning::Conservative];

    pub fn opposite(self) -> Leaning {
        match self {
            Leaning::Liberal => Leaning::Conservative,
            Leaning::Conservative => Leaning::Liberal,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Leaning::Liberal => "liberal",
            Leaning::Conservative => "conservative",
        }
    }
}

impl fmt::Display for Leaning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Leaning {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "liberal" | "lib" | "l" => Ok(Leaning::Liberal),
            "conservative" | "con" | "c" => Ok(Leaning::Conservative),
            other => Err(Error::Parse(format!("unknown leaning `{other}`"))),
        }
    }
}
