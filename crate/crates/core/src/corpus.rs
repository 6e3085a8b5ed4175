//! Tweet corpus ingestion: parsing, filtering, deduplication, and indexing.
//!
//! Input is line-delimited JSON, one record per line:
//!
//! ```text
//! {"id":"t1","author_id":"a","kind":"retweet","ref_tweet_id":"t0","ref_author_id":"b",
//!  "lang":"en","text":"RT ...","hashtags":["MAGA"],"urls":[],"created_at":"2018-10-06T12:00:00Z"}
//! ```
//!
//! `kind` is one of `original` (alias `tweet`), `retweet`, `reply`, or `quote`; quote
//! tweets are folded into `original`. Hashtags are case-folded and stored without `#`.

use crate::{Error, Result};
use chrono::{DateTime, Utc};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

const PARSE_BATCH: usize = 16 * 1024;
const MAX_MALFORMED_SAMPLES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TweetKind {
    Original,
    Retweet,
    Reply,
}

impl TweetKind {
    pub const ALL: [TweetKind; 3] = [TweetKind::Original, TweetKind::Retweet, TweetKind::Reply];

    fn slot(self) -> usize {
        match self {
            TweetKind::Original => 0,
            TweetKind::Retweet => 1,
            TweetKind::Reply => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TweetRecord {
    pub tweet_id: String,
    pub author_id: String,
    pub kind: TweetKind,
    /// The retweeted or replied-to tweet.
    pub referenced_tweet_id: Option<String>,
    /// Author of the referenced tweet. For retweet chains this is the origin's author.
    pub referenced_author_id: Option<String>,
    pub language: String,
    pub text: String,
    /// Lowercase, without the leading `#`.
    pub hashtags: Vec<String>,
    pub urls: Vec<String>,
    pub created_at: DateTime<Utc>,
}

impl TweetRecord {
    /// Checks the per-kind reference invariants.
    pub fn validate(&self) -> std::result::Result<(), String> {
        if self.tweet_id.is_empty() {
            return Err("empty tweet id".into());
        }
        if self.author_id.is_empty() {
            return Err("empty author id".into());
        }
        match self.kind {
            TweetKind::Retweet => {
                if self.referenced_tweet_id.is_none() || self.referenced_author_id.is_none() {
                    return Err("retweet without referenced tweet and author".into());
                }
            }
            TweetKind::Reply => {
                if self.referenced_author_id.is_none() {
                    return Err("reply without referenced author".into());
                }
            }
            TweetKind::Original => {
                if self.referenced_tweet_id.is_some() || self.referenced_author_id.is_some() {
                    return Err("original tweet carries a reference".into());
                }
            }
        }
        Ok(())
    }
}

/// Case-folds a hashtag and strips any leading `#`.
pub fn normalize_hashtag(tag: &str) -> String {
    tag.trim().trim_start_matches('#').to_lowercase()
}

/// On-disk shape of one line.
#[derive(Debug, Serialize, Deserialize)]
struct WireRecord {
    id: String,
    author_id: String,
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ref_tweet_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ref_author_id: Option<String>,
    lang: String,
    #[serde(default)]
    text: String,
    #[serde(default)]
    hashtags: Vec<String>,
    #[serde(default)]
    urls: Vec<String>,
    created_at: DateTime<Utc>,
}

impl TryFrom<WireRecord> for TweetRecord {
    type Error = String;

    fn try_from(w: WireRecord) -> std::result::Result<Self, String> {
        let (kind, quote) = match w.kind.to_ascii_lowercase().as_str() {
            "original" | "tweet" => (TweetKind::Original, false),
            "quote" => (TweetKind::Original, true),
            "retweet" => (TweetKind::Retweet, false),
            "reply" => (TweetKind::Reply, false),
            other => return Err(format!("unknown kind `{other}`")),
        };
        let non_empty = |s: Option<String>| s.filter(|s| !s.is_empty());
        let (referenced_tweet_id, referenced_author_id) = if quote {
            (None, None)
        } else {
            (non_empty(w.ref_tweet_id), non_empty(w.ref_author_id))
        };
        let record = TweetRecord {
            tweet_id: w.id,
            author_id: w.author_id,
            kind,
            referenced_tweet_id,
            referenced_author_id,
            language: w.lang,
            text: w.text,
            hashtags: w.hashtags.iter().map(|h| normalize_hashtag(h)).collect(),
            urls: w.urls,
            created_at: w.created_at,
        };
        record.validate()?;
        Ok(record)
    }
}

impl From<&TweetRecord> for WireRecord {
    fn from(r: &TweetRecord) -> Self {
        WireRecord {
            id: r.tweet_id.clone(),
            author_id: r.author_id.clone(),
            kind: match r.kind {
                TweetKind::Original => "original",
                TweetKind::Retweet => "retweet",
                TweetKind::Reply => "reply",
            }
            .to_string(),
            ref_tweet_id: r.referenced_tweet_id.clone(),
            ref_author_id: r.referenced_author_id.clone(),
            lang: r.language.clone(),
            text: r.text.clone(),
            hashtags: r.hashtags.clone(),
            urls: r.urls.clone(),
            created_at: r.created_at,
        }
    }
}

/// Parses a single corpus line.
pub fn parse_record(line: &str) -> std::result::Result<TweetRecord, String> {
    let wire: WireRecord = serde_json::from_str(line).map_err(|e| e.to_string())?;
    TweetRecord::try_from(wire)
}

/// Serializes one record as a corpus line (no trailing newline).
pub fn record_to_line(record: &TweetRecord) -> String {
    serde_json::to_string(&WireRecord::from(record)).expect("record serialization is infallible")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterConfig {
    keep_languages: BTreeSet<String>,
    exclusion_terms: BTreeSet<String>,
    pub dedup: bool,
}

impl Default for FilterConfig {
    fn default() -> Self {
        FilterConfig {
            keep_languages: BTreeSet::from(["en".to_string()]),
            exclusion_terms: BTreeSet::new(),
            dedup: true,
        }
    }
}

impl FilterConfig {
    pub fn new<L, T>(keep_languages: L, exclusion_terms: T) -> Result<Self>
    where
        L: IntoIterator,
        L::Item: AsRef<str>,
        T: IntoIterator,
        T::Item: AsRef<str>,
    {
        let keep_languages: BTreeSet<String> = keep_languages
            .into_iter()
            .map(|l| l.as_ref().trim().to_ascii_lowercase())
            .filter(|l| !l.is_empty())
            .collect();
        if keep_languages.is_empty() {
            return Err(Error::Config("keep_languages must not be empty".into()));
        }
        let exclusion_terms = exclusion_terms
            .into_iter()
            .map(|t| t.as_ref().trim().to_lowercase())
            .filter(|t| !t.is_empty())
            .collect();
        Ok(FilterConfig {
            keep_languages,
            exclusion_terms,
            dedup: true,
        })
    }

    pub fn keep_languages(&self) -> &BTreeSet<String> {
        &self.keep_languages
    }

    pub fn exclusion_terms(&self) -> &BTreeSet<String> {
        &self.exclusion_terms
    }

    pub fn keeps_language(&self, lang: &str) -> bool {
        self.keep_languages.contains(&lang.to_ascii_lowercase())
    }

    /// Case-insensitive substring match over text, exact match over hashtags.
    pub fn is_excluded(&self, record: &TweetRecord) -> bool {
        if self.exclusion_terms.is_empty() {
            return false;
        }
        let text = record.text.to_lowercase();
        self.exclusion_terms.iter().any(|term| {
            text.contains(term.as_str()) || {
                let tag = term.trim_start_matches('#');
                record.hashtags.iter().any(|h| h == tag)
            }
        })
    }
}

/// Reads an exclusion-term file: one term per line, `#` lines are kept as hashtag terms,
/// blank lines are ignored.
pub fn read_terms_file(path: &Path) -> Result<Vec<String>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(str::to_string)
        .collect())
}

/// Per-reason tallies of what ingestion kept and dropped.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct IngestReport {
    pub lines_read: u64,
    pub blank: u64,
    pub malformed: u64,
    pub duplicate: u64,
    pub language: u64,
    pub excluded: u64,
    pub kept: u64,
    /// First few malformed lines as (1-based line number, reason).
    pub malformed_samples: Vec<(u64, String)>,
}

impl IngestReport {
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "reason,count")?;
        for (reason, count) in [
            ("lines_read", self.lines_read),
            ("blank", self.blank),
            ("malformed", self.malformed),
            ("duplicate", self.duplicate),
            ("language", self.language),
            ("excluded", self.excluded),
            ("kept", self.kept),
        ] {
            writeln!(w, "{reason},{count}")?;
        }
        Ok(())
    }
}

/// An immutable, indexed set of unique tweet records.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Corpus {
    records: Vec<TweetRecord>,
    by_author: HashMap<String, Vec<u32>>,
    by_kind: [Vec<u32>; 3],
}

impl Corpus {
    /// Builds a corpus from already-filtered records. Fails on duplicate ids or
    /// records violating the reference invariants.
    pub fn from_records(records: Vec<TweetRecord>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(records.len());
        for r in &records {
            r.validate()
                .map_err(|e| Error::Parse(format!("record {}: {e}", r.tweet_id)))?;
            if !seen.insert(r.tweet_id.as_str()) {
                return Err(Error::Parse(format!("duplicate tweet id {}", r.tweet_id)));
            }
        }
        Ok(Self::index(records))
    }

    fn index(records: Vec<TweetRecord>) -> Self {
        assert!(records.len() <= u32::MAX as usize, "corpus exceeds u32 record ids");
        let mut by_author: HashMap<String, Vec<u32>> = HashMap::new();
        let mut by_kind: [Vec<u32>; 3] = Default::default();
        for (i, r) in records.iter().enumerate() {
            let i = i as u32;
            match by_author.get_mut(r.author_id.as_str()) {
                Some(ids) => ids.push(i),
                None => {
                    by_author.insert(r.author_id.clone(), vec![i]);
                }
            }
            by_kind[r.kind.slot()].push(i);
        }
        Corpus {
            records,
            by_author,
            by_kind,
        }
    }

    pub fn records(&self) -> &[TweetRecord] {
        &self.records
    }

    pub fn get(&self, id: u32) -> Option<&TweetRecord> {
        self.records.get(id as usize)
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Record ids authored by `author`, in corpus order.
    pub fn by_author(&self, author: &str) -> &[u32] {
        self.by_author.get(author).map_or(&[], Vec::as_slice)
    }

    pub fn by_kind(&self, kind: TweetKind) -> &[u32] {
        &self.by_kind[kind.slot()]
    }

    pub fn authors(&self) -> impl Iterator<Item = &str> {
        self.by_author.keys().map(String::as_str)
    }

    /// Every account that authored a record or is referenced by one, sorted.
    pub fn accounts(&self) -> BTreeSet<&str> {
        let mut out: BTreeSet<&str> = self.authors().collect();
        out.extend(
            self.records
                .iter()
                .filter_map(|r| r.referenced_author_id.as_deref()),
        );
        out
    }

    pub fn write_jsonl<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for r in &self.records {
            writeln!(w, "{}", record_to_line(r))?;
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = std::io::BufWriter::new(file);
        self.write_jsonl(&mut w).map_err(|e| Error::io(path, e))?;
        w.flush().map_err(|e| Error::io(path, e))
    }

    /// Loads a corpus previously written by [`Corpus::save`] (or any corpus file),
    /// with deduplication and no language or exclusion filtering.
    pub fn load(path: &Path) -> Result<(Corpus, IngestReport)> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = FilterConfig::default();
        cfg.keep_languages.clear();
        ingest_with(BufReader::new(file), &cfg)
    }
}

/// Parses, filters, and deduplicates a line-delimited record stream.
///
/// Filters apply in order: malformed, duplicate id (first occurrence in input order
/// wins), language, exclusion terms. Lines are parsed in parallel batches; the merge
/// is sequential, so the result does not depend on thread scheduling.
pub fn ingest<R: BufRead>(reader: R, config: &FilterConfig) -> Result<(Corpus, IngestReport)> {
    if config.keep_languages.is_empty() {
        return Err(Error::Config("keep_languages must not be empty".into()));
    }
    ingest_with(reader, config)
}

/// Opens `path` and ingests it.
pub fn ingest_path(path: &Path, config: &FilterConfig) -> Result<(Corpus, IngestReport)> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    ingest(BufReader::with_capacity(1 << 20, file), config).map_err(|e| match e {
        Error::Stream(source) => Error::io(path, source),
        other => other,
    })
}

// An empty language set means "keep every language".
fn ingest_with<R: BufRead>(reader: R, config: &FilterConfig) -> Result<(Corpus, IngestReport)> {
    let mut report = IngestReport::default();
    let mut seen: HashSet<String> = HashSet::new();
    let mut records = Vec::new();
    let mut batch: Vec<(u64, String)> = Vec::with_capacity(PARSE_BATCH);

    let mut flush = |batch: &mut Vec<(u64, String)>, report: &mut IngestReport| {
        let parsed: Vec<(u64, std::result::Result<TweetRecord, String>)> = batch
            .par_iter()
            .map(|(n, line)| (*n, parse_record(line)))
            .collect();
        batch.clear();
        for (line_no, result) in parsed {
            let record = match result {
                Ok(r) => r,
                Err(reason) => {
                    report.malformed += 1;
                    if report.malformed_samples.len() < MAX_MALFORMED_SAMPLES {
                        report.malformed_samples.push((line_no, reason));
                    }
                    continue;
                }
            };
            if config.dedup {
                if seen.contains(record.tweet_id.as_str()) {
                    report.duplicate += 1;
                    continue;
                }
                seen.insert(record.tweet_id.clone());
            }
            if !config.keep_languages.is_empty() && !config.keeps_language(&record.language) {
                report.language += 1;
                continue;
            }
            if config.is_excluded(&record) {
                report.excluded += 1;
                continue;
            }
            report.kept += 1;
            records.push(record);
        }
    };

    for line in reader.lines() {
        let line = line?;
        report.lines_read += 1;
        if line.trim().is_empty() {
            report.blank += 1;
            continue;
        }
        batch.push((report.lines_read, line));
        if batch.len() == PARSE_BATCH {
            flush(&mut batch, &mut report);
        }
    }
    flush(&mut batch, &mut report);
    drop(seen);

    if !config.dedup {
        // Without dedup the corpus may still not hold two records with one id.
        let mut ids = HashSet::with_capacity(records.len());
        records.retain(|r: &TweetRecord| ids.insert(r.tweet_id.clone()));
    }
    records.shrink_to_fit();
    Ok((Corpus::index(records), report))
}

/// Dataset-level counts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CorpusStats {
    pub n_tweets: u64,
    pub n_retweets: u64,
    pub n_replies: u64,
    pub n_users: u64,
}

impl CorpusStats {
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "statistic,count")?;
        writeln!(w, "tweets,{}", self.n_tweets)?;
        writeln!(w, "retweets,{}", self.n_retweets)?;
        writeln!(w, "replies,{}", self.n_replies)?;
        writeln!(w, "users,{}", self.n_users)
    }
}

/// Counts originals, retweets, replies, and distinct accounts (authors plus
/// accounts seen only as referenced authors).
pub fn stats(corpus: &Corpus) -> CorpusStats {
    CorpusStats {
        n_tweets: corpus.by_kind(TweetKind::Original).len() as u64,
        n_retweets: corpus.by_kind(TweetKind::Retweet).len() as u64,
        n_replies: corpus.by_kind(TweetKind::Reply).len() as u64,
        n_users: corpus.accounts().len() as u64,
    }
}

#[cfg(test)]
pub(crate) mod test_support {
    use super::*;
    use chrono::TimeZone;

    pub fn ts() -> DateTime<Utc> {
        Utc.with_ymd_and_hms(2018, 10, 6, 12, 0, 0).unwrap()
    }

    pub fn original(id: &str, author: &str) -> TweetRecord {
        TweetRecord {
            tweet_id: id.into(),
            author_id: author.into(),
            kind: TweetKind::Original,
            referenced_tweet_id: None,
            referenced_author_id: None,
            language: "en".into(),
            text: String::new(),
            hashtags: vec![],
            urls: vec![],
            created_at: ts(),
        }
    }

    pub fn retweet(id: &str, author: &str, ref_tweet: &str, ref_author: &str) -> TweetRecord {
        TweetRecord {
            kind: TweetKind::Retweet,
            referenced_tweet_id: Some(ref_tweet.into()),
            referenced_author_id: Some(ref_author.into()),
            ..original(id, author)
        }
    }

    pub fn reply(id: &str, author: &str, ref_tweet: &str, ref_author: &str) -> TweetRecord {
        TweetRecord {
            kind: TweetKind::Reply,
            referenced_tweet_id: Some(ref_tweet.into()),
            referenced_author_id: Some(ref_author.into()),
            ..original(id, author)
        }
    }

    pub fn corpus(records: Vec<TweetRecord>) -> Corpus {
        Corpus::from_records(records).unwrap()
    }
}
