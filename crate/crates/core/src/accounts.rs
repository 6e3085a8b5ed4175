//! Bot-score loading and threshold classification.
//!
//! Scores come from an external classifier and are read from a CSV file with rows
//! `account_id,score` or `account_id,MISSING,reason` (an optional header row starting
//! with `account_id` is skipped).

use crate::{Error, Result};
use log::warn;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MissingReason {
    Suspended,
    Protected,
    NotQueried,
}

impl FromStr for MissingReason {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace(['-', ' '], "_").as_str() {
            "suspended" => Ok(MissingReason::Suspended),
            "protected" => Ok(MissingReason::Protected),
            "not_queried" | "notqueried" | "" => Ok(MissingReason::NotQueried),
            other => Err(Error::Parse(format!("unknown missing reason `{other}`"))),
        }
    }
}

impl fmt::Display for MissingReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MissingReason::Suspended => "suspended",
            MissingReason::Protected => "protected",
            MissingReason::NotQueried => "not_queried",
        })
    }
}

/// Bot scores in `[0, 1]` plus accounts the scoring service returned nothing for.
/// The two key sets are disjoint.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BotScoreTable {
    scores: HashMap<String, f64>,
    missing: HashMap<String, MissingReason>,
}

impl BotScoreTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts a score, replacing any earlier entry for the account. Returns false (and
    /// stores nothing) when the score is outside `[0, 1]`.
    pub fn insert_score(&mut self, account: impl Into<String>, score: f64) -> bool {
        if !(0.0..=1.0).contains(&score) {
            return false;
        }
        let account = account.into();
        self.missing.remove(&account);
        self.scores.insert(account, score);
        true
    }

    pub fn insert_missing(&mut self, account: impl Into<String>, reason: MissingReason) {
        let account = account.into();
        self.scores.remove(&account);
        self.missing.insert(account, reason);
    }

    pub fn score(&self, account: &str) -> Option<f64> {
        self.scores.get(account).copied()
    }

    pub fn missing_reason(&self, account: &str) -> Option<MissingReason> {
        self.missing.get(account).copied()
    }

    pub fn contains(&self, account: &str) -> bool {
        self.scores.contains_key(account) || self.missing.contains_key(account)
    }

    pub fn scores(&self) -> impl Iterator<Item = (&str, f64)> {
        self.scores.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn missing(&self) -> impl Iterator<Item = (&str, MissingReason)> {
        self.missing.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn n_scored(&self) -> usize {
        self.scores.len()
    }

    pub fn n_missing(&self) -> usize {
        self.missing.len()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LoadReport {
    pub rows: usize,
    pub rejected: usize,
    pub duplicates: usize,
    pub warnings: Vec<String>,
}

impl LoadReport {
    fn warn(&mut self, msg: String) {
        warn!("{msg}");
        self.warnings.push(msg);
    }
}

/// Parses a score CSV. Out-of-range or unparseable rows are rejected with a warning;
/// for duplicate account ids the last row wins.
pub fn parse_scores<R: Read>(reader: R) -> Result<(BotScoreTable, LoadReport)> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);
    let mut table = BotScoreTable::new();
    let mut report = LoadReport::default();

    for (i, row) in rdr.records().enumerate() {
        let row = row?;
        let line = i + 1;
        let account = row.get(0).unwrap_or("");
        if account.is_empty() {
            continue;
        }
        if i == 0 && account.eq_ignore_ascii_case("account_id") {
            continue;
        }
        report.rows += 1;
        let duplicate = table.contains(account);
        let value = row.get(1).unwrap_or("");
        if value.is_empty() || value.eq_ignore_ascii_case("missing") || value.eq_ignore_ascii_case("na") {
            match row.get(2).unwrap_or("").parse::<MissingReason>() {
                Ok(reason) => table.insert_missing(account, reason),
                Err(e) => {
                    report.rejected += 1;
                    report.warn(format!("row {line}: {e}"));
                    continue;
                }
            }
        } else {
            match value.parse::<f64>() {
                Ok(score) if table.insert_score(account, score) => {}
                Ok(score) => {
                    report.rejected += 1;
                    report.warn(format!("row {line}: score {score} for {account} outside [0, 1]"));
                    continue;
                }
                Err(_) => {
                    report.rejected += 1;
                    report.warn(format!("row {line}: unparseable score `{value}` for {account}"));
                    continue;
                }
            }
        }
        if duplicate {
            report.duplicates += 1;
            report.warn(format!("row {line}: duplicate account {account}, keeping last"));
        }
    }
    Ok((table, report))
}

pub fn load_scores(path: &Path) -> Result<(BotScoreTable, LoadReport)> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    parse_scores(std::io::BufReader::new(file))
}

/// A classification threshold in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct Threshold(f64);

impl Threshold {
    pub const DEFAULT: Threshold = Threshold(0.3);

    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(Threshold(value))
        } else {
            Err(Error::Config(format!("threshold {value} outside [0, 1]")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl Default for Threshold {
    fn default() -> Self {
        Threshold::DEFAULT
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AccountClass {
    Human,
    Bot,
    Unknown,
}

impl AccountClass {
    pub fn as_str(self) -> &'static str {
        match self {
            AccountClass::Human => "human",
            AccountClass::Bot => "bot",
            AccountClass::Unknown => "unknown",
        }
    }
}

impl fmt::Display for AccountClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AccountClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "human" => Ok(AccountClass::Human),
            "bot" => Ok(AccountClass::Bot),
            "unknown" => Ok(AccountClass::Unknown),
            other => Err(Error::Parse(format!("unknown account class `{other}`"))),
        }
    }
}

/// Strictly above the threshold is a bot.
pub fn classify_one(table: &BotScoreTable, threshold: Threshold, account: &str) -> AccountClass {
    match table.score(account) {
        Some(s) if s > threshold.0 => AccountClass::Bot,
        Some(_) => AccountClass::Human,
        None => AccountClass::Unknown,
    }
}

pub fn classify<'a, I>(
    table: &BotScoreTable,
    threshold: Threshold,
    accounts: I,
) -> BTreeMap<String, AccountClass>
where
    I: IntoIterator<Item = &'a str>,
{
    accounts
        .into_iter()
        .map(|a| (a.to_string(), classify_one(table, threshold, a)))
        .collect()
}

pub fn write_classes<W: Write>(
    mut w: W,
    table: &BotScoreTable,
    classes: &BTreeMap<String, AccountClass>,
) -> std::io::Result<()> {
    writeln!(w, "account_id,class,score")?;
    for (account, class) in classes {
        let score = table
            .score(account)
            .map_or_else(|| crate::report::UNDEFINED.to_string(), |s| s.to_string());
        writeln!(w, "{},{class},{score}", crate::report::csv_field(account))?;
    }
    Ok(())
}

pub fn read_classes<R: Read>(reader: R) -> Result<BTreeMap<String, AccountClass>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let mut out = BTreeMap::new();
    for row in rdr.records() {
        let row = row?;
        let account = row.get(0).unwrap_or("").to_string();
        let class = row.get(1).unwrap_or("").parse()?;
        out.insert(account, class);
    }
    Ok(out)
}

/// Score histogram over `[0, 1]` in fixed-width bins; the last bin is closed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreHistogram {
    pub bin_width: f64,
    pub counts: Vec<u64>,
    pub missing: u64,
}

impl ScoreHistogram {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Fraction of scored accounts falling in bins fully inside `[lo, hi]`.
    pub fn mass_between(&self, lo: f64, hi: f64) -> f64 {
        let total = self.total();
        if total == 0 {
            return 0.0;
        }
        let eps = 1e-9;
        let inside: u64 = self
            .counts
            .iter()
            .enumerate()
            .filter(|(i, _)| {
                let start = *i as f64 * self.bin_width;
                start >= lo - eps && start + self.bin_width <= hi + eps
            })
            .map(|(_, c)| *c)
            .sum();
        inside as f64 / total as f64
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "bin_start,bin_end,count")?;
        for (i, c) in self.counts.iter().enumerate() {
            let start = i as f64 * self.bin_width;
            writeln!(
                w,
                "{:.2},{:.2},{c}",
                start,
                (start + self.bin_width).min(1.0)
            )?;
        }
        writeln!(w, "missing,missing,{}", self.missing)
    }
}

pub const HISTOGRAM_BIN_WIDTH: f64 = 0.05;

pub fn score_histogram(table: &BotScoreTable) -> ScoreHistogram {
    let bins = (1.0 / HISTOGRAM_BIN_WIDTH).round() as usize;
    let mut counts = vec![0u64; bins];
    for (_, s) in table.scores() {
        let bin = ((s / HISTOGRAM_BIN_WIDTH) as usize).min(bins - 1);
        counts[bin] += 1;
    }
    ScoreHistogram {
        bin_width: HISTOGRAM_BIN_WIDTH,
        counts,
        missing: table.n_missing() as u64,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn empty_file() {
        let (t, r) = parse_scores("".as_bytes()).unwrap();
        assert_eq!(t.n_scored() + t.n_missing(), 0);
        assert_eq!(r.rows, 0);
    }

    #[test]
    fn parses_scores_and_missing() {
        let (t, r) = parse_scores("account_id,score\nu1,0.05\nu2,0.45\nu3,MISSING,Suspended\n".as_bytes()).unwrap();
        assert_eq!(t.n_scored(), 2);
        assert_eq!(t.n_missing(), 1);
        assert_eq!(t.missing_reason("u3"), Some(MissingReason::Suspended));
        assert_eq!(r.rows, 3);
        let (t, _) = parse_scores("a,,protected\nb,NA\n".as_bytes()).unwrap();
        assert_eq!(t.missing_reason("a"), Some(MissingReason::Protected));
        assert_eq!(t.missing_reason("b"), Some(MissingReason::NotQueried));
    }

    #[test]
    fn rejects_out_of_range() {
        let (t, r) = parse_scores("u4,1.7\nu5,-0.1\nu6,abc\n".as_bytes()).unwrap();
        assert!(!t.contains("u4"));
        assert_eq!(r.rejected, 3);
        assert_eq!(r.warnings.len(), 3);
    }

    #[test]
    fn duplicate_last_wins() {
        let (t, r) = parse_scores("u1,0.1\nu1,0.9\nu2,0.2\nu2,MISSING,protected\n".as_bytes()).unwrap();
        assert_eq!(t.score("u1"), Some(0.9));
        assert_eq!(t.score("u2"), None);
        assert_eq!(t.missing_reason("u2"), Some(MissingReason::Protected));
        assert_eq!(r.duplicates, 2);
    }

    #[test]
    fn threshold_is_strict() {
        let mut t = BotScoreTable::new();
        t.insert_score("a", 0.30);
        t.insert_score("b", 0.300001);
        t.insert_score("c", 0.31);
        t.insert_score("d", 0.29);
        let th = Threshold::new(0.3).unwrap();
        assert_eq!(classify_one(&t, th, "a"), AccountClass::Human);
        assert_eq!(classify_one(&t, th, "b"), AccountClass::Bot);
        assert_eq!(classify_one(&t, th, "c"), AccountClass::Bot);
        assert_eq!(classify_one(&t, th, "d"), AccountClass::Human);
        assert_eq!(classify_one(&t, th, "zzz"), AccountClass::Unknown);
    }

    #[test]
    fn threshold_range() {
        assert!(Threshold::new(1.2).is_err());
        assert!(Threshold::new(-0.01).is_err());
        assert_eq!(Threshold::default().value(), 0.3);
    }

    #[test]
    fn histogram_mass_on_skewed_fixture() {
        // 80 scores in [0, 0.2), 10 around 0.3, 10 high
        let mut t = BotScoreTable::new();
        for i in 0..80 {
            t.insert_score(format!("h{i}"), (i as f64) * 0.0025);
        }
        for i in 0..10 {
            t.insert_score(format!("m{i}"), 0.29 + i as f64 * 0.002);
            t.insert_score(format!("b{i}"), 0.9 + i as f64 * 0.01);
        }
        t.insert_score("top", 1.0);
        t.insert_missing("gone", MissingReason::Suspended);
        let h = score_histogram(&t);
        assert_eq!(h.counts.len(), 20);
        assert_eq!(h.total(), 101);
        assert_eq!(*h.counts.last().unwrap(), 6); // 0.95..0.99 plus 1.0 in the closed last bin
        assert!(h.mass_between(0.0, 0.2) > 0.5);
        assert_eq!(h.missing, 1);
    }

    #[test]
    fn classes_roundtrip() {
        let mut t = BotScoreTable::new();
        t.insert_score("a", 0.5);
        let classes = classify(&t, Threshold::DEFAULT, ["a", "b"]);
        let mut buf = Vec::new();
        write_classes(&mut buf, &t, &classes).unwrap();
        assert_eq!(read_classes(buf.as_slice()).unwrap(), classes);
    }

    proptest! {
        #[test]
        fn raising_threshold_never_creates_bots(score in 0.0f64..=1.0, lo in 0.0f64..=1.0, delta in 0.0f64..=1.0) {
            let hi = (lo + delta).min(1.0);
            let mut t = BotScoreTable::new();
            t.insert_score("a", score);
            let at_lo = classify_one(&t, Threshold::new(lo).unwrap(), "a");
            let at_hi = classify_one(&t, Threshold::new(hi).unwrap(), "a");
            prop_assert!(!(at_lo == AccountClass::Human && at_hi == AccountClass::Bot));
        }

        #[test]
        fn every_account_gets_one_class(ids in prop::collection::btree_set("[a-e]{1,3}", 0..20), scored in prop::collection::vec(0.0f64..=1.0, 20)) {
            let mut t = BotScoreTable::new();
            for (id, s) in ids.iter().zip(&scored).step_by(2) {
                t.insert_score(id.clone(), *s);
            }
            let classes = classify(&t, Threshold::DEFAULT, ids.iter().map(String::as_str));
            prop_assert_eq!(classes.len(), ids.len());
        }
    }
}
