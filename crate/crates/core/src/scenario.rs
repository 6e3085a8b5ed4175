//! Synthetic corpora with known group structure, for tests and demos.
//!
//! Every account belongs to one of the five groups by construction. Each account
//! draws Poisson-many originals, replies and retweets; a reply or retweet picks the
//! target group from its source group's propensity row and then a uniform original
//! tweet of that group. Residual accounts target any original uniformly. Outlet links
//! go through short URLs resolved by the generated cache, so ideology seeding runs
//! the same code path as on real data.

use crate::corpus::{record_to_line, TweetKind, TweetRecord};
use crate::graph::{Group, GroupMap};
use crate::pipeline::PipelineConfig;
use crate::{Error, Leaning, Result};
use chrono::{DateTime, Duration, TimeZone, Utc};
use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Poisson};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

pub type Propensity = [[f64; 4]; 4];

const ROW_TOLERANCE: f64 = 1e-6;
const MAX_RESAMPLE: usize = 64;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub size: usize,
    /// Mean originals per account.
    #[serde(default)]
    pub originals: f64,
    #[serde(default)]
    pub retweets: f64,
    #[serde(default)]
    pub replies: f64,
    /// Probability that an original or reply links to one of the side's outlets.
    #[serde(default)]
    pub url_share: f64,
    /// Earlier entries are drawn more often.
    #[serde(default)]
    pub hashtags: Vec<String>,
}

impl GroupSpec {
    fn check(&self, name: &str) -> Result<()> {
        for (what, v) in [("originals", self.originals), ("retweets", self.retweets), ("replies", self.replies)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Config(format!("{name}.{what} must be a finite rate >= 0, got {v}")));
            }
        }
        if !(0.0..=1.0).contains(&self.url_share) {
            return Err(Error::Config(format!("{name}.url_share must lie in [0, 1]")));
        }
        Ok(())
    }

    fn has_originals(&self) -> bool {
        self.size > 0 && self.originals > 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScoreDistribution {
    Uniform { low: f64, high: f64 },
    /// Beta(alpha, beta) rescaled onto `[low, high]`.
    Beta {
        alpha: f64,
        beta: f64,
        #[serde(default)]
        low: f64,
        #[serde(default = "one")]
        high: f64,
    },
}

fn one() -> f64 {
    1.0
}

impl ScoreDistribution {
    fn check(&self) -> Result<()> {
        let (low, high) = match *self {
            ScoreDistribution::Uniform { low, high } => (low, high),
            ScoreDistribution::Beta { alpha, beta, low, high } => {
                if !(alpha > 0.0 && beta > 0.0 && alpha.is_finite() && beta.is_finite()) {
                    return Err(Error::Config("beta parameters must be positive".into()));
                }
                (low, high)
            }
        };
        if !(0.0 <= low && low <= high && high <= 1.0) {
            return Err(Error::Config(format!("score range [{low}, {high}] not within [0, 1]")));
        }
        Ok(())
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> f64 {
        match *self {
            ScoreDistribution::Uniform { low, high } if low == high => low,
            ScoreDistribution::Uniform { low, high } => rng.gen_range(low..=high),
            ScoreDistribution::Beta { alpha, beta, low, high } => {
                let x: f64 = Beta::new(alpha, beta).expect("checked").sample(rng);
                low + x * (high - low)
            }
        }
    }
}

fn default_liberal_outlets() -> Vec<String> {
    ["nytimes.com", "washingtonpost.com", "cnn.com", "msnbc.com"].map(String::from).to_vec()
}

fn default_conservative_outlets() -> Vec<String> {
    ["foxnews.com", "breitbart.com", "dailycaller.com", "thegatewaypundit.com"].map(String::from).to_vec()
}

fn default_urls_per_outlet() -> usize {
    25
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub rng_seed: u64,
    pub liberal_human: GroupSpec,
    pub liberal_bot: GroupSpec,
    pub conservative_human: GroupSpec,
    pub conservative_bot: GroupSpec,
    /// Accounts with no bot score. Their retweets and replies target any original.
    #[serde(default)]
    pub residual: GroupSpec,
    /// Rows are source groups, columns target groups, both in the order liberal
    /// humans, liberal bots, conservative humans, conservative bots.
    pub retweet_propensity: Propensity,
    /// Defaults to the retweet propensities.
    #[serde(default)]
    pub reply_propensity: Option<Propensity>,
    pub human_scores: ScoreDistribution,
    pub bot_scores: ScoreDistribution,
    #[serde(default = "default_liberal_outlets")]
    pub liberal_outlets: Vec<String>,
    #[serde(default = "default_conservative_outlets")]
    pub conservative_outlets: Vec<String>,
    #[serde(default = "default_urls_per_outlet")]
    pub urls_per_outlet: usize,
}

impl ScenarioSpec {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serializes")
    }

    pub fn group(&self, g: Group) -> &GroupSpec {
        match g {
            Group::LiberalHuman => &self.liberal_human,
            Group::LiberalBot => &self.liberal_bot,
            Group::ConservativeHuman => &self.conservative_human,
            Group::ConservativeBot => &self.conservative_bot,
            Group::Residual => &self.residual,
        }
    }

    pub fn replies(&self) -> &Propensity {
        self.reply_propensity.as_ref().unwrap_or(&self.retweet_propensity)
    }

    /// Rejects malformed values (config errors) and specs no corpus can satisfy
    /// (infeasible-scenario errors).
    pub fn validate(&self) -> Result<()> {
        for g in Group::ALL {
            self.group(g).check(g.as_str())?;
        }
        self.human_scores.check()?;
        self.bot_scores.check()?;
        if self.urls_per_outlet == 0 && Group::ALL.iter().any(|g| self.group(*g).url_share > 0.0) {
            return Err(Error::Config("urls_per_outlet must be positive when url_share is".into()));
        }
        for (label, matrix, rate) in [
            ("retweet", &self.retweet_propensity, (|g: &GroupSpec| g.retweets) as fn(&GroupSpec) -> f64),
            ("reply", self.replies(), |g: &GroupSpec| g.replies),
        ] {
            for (i, src) in Group::PARTISAN.iter().enumerate() {
                let row = &matrix[i];
                if row.iter().any(|p| !p.is_finite() || *p < 0.0) {
                    return Err(Error::Config(format!("{label} propensity row {src} has a negative or non-finite entry")));
                }
                let sum: f64 = row.iter().sum();
                let spec = self.group(*src);
                let active = spec.size > 0 && rate(spec) > 0.0;
                if sum == 0.0 {
                    if active {
                        return Err(Error::InfeasibleScenario(format!(
                            "{label} propensity row {src} is all zero but the group has {label} activity"
                        )));
                    }
                    continue;
                }
                if (sum - 1.0).abs() > ROW_TOLERANCE {
                    return Err(Error::Config(format!("{label} propensity row {src} sums to {sum}, not 1")));
                }
                if !active {
                    continue;
                }
                for (j, dst) in Group::PARTISAN.iter().enumerate() {
                    if row[j] == 0.0 {
                        continue;
                    }
                    let target = self.group(*dst);
                    if !target.has_originals() {
                        return Err(Error::InfeasibleScenario(format!(
                            "{src} {label}s target {dst}, which posts no originals"
                        )));
                    }
                    if i == j && target.size == 1 {
                        return Err(Error::InfeasibleScenario(format!(
                            "{src} {label}s target its own single account"
                        )));
                    }
                }
            }
        }
        let r = &self.residual;
        if r.size > 0 && r.retweets + r.replies > 0.0 && !Group::ALL.iter().any(|g| self.group(*g).has_originals()) {
            return Err(Error::InfeasibleScenario("residual accounts interact but nobody posts originals".into()));
        }
        Ok(())
    }

    /// Expected metric values implied by the propensities and rates.
    pub fn expected_metrics(&self, side: Leaning) -> ExpectedMetrics {
        let h = Group::human(side).partisan_index().expect("partisan");
        let b = Group::bot(side).partisan_index().expect("partisan");
        let spec = self.group(Group::human(side));
        let active = |rate: f64| spec.size > 0 && rate > 0.0;
        let rt = self.retweet_propensity[h][b];
        let rp = self.replies()[h][b];
        let total = spec.originals + spec.retweets + spec.replies;
        ExpectedMetrics {
            rtp: active(spec.retweets).then_some(rt),
            rr: active(spec.replies).then_some(rp),
            h2br: active(total).then(|| (spec.retweets * rt + spec.replies * rp) / total),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpectedMetrics {
    pub rtp: Option<f64>,
    pub rr: Option<f64>,
    pub h2br: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioTruth {
    pub group_sizes: BTreeMap<String, usize>,
    pub retweet_propensity: Propensity,
    pub reply_propensity: Propensity,
    pub expected: BTreeMap<String, ExpectedMetrics>,
    pub originals: u64,
    pub retweets: u64,
    pub replies: u64,
}

/// Paths of everything [`generate_scenario`] wrote.
#[derive(Debug, Clone)]
pub struct ScenarioOutput {
    pub corpus: PathBuf,
    pub scores: PathBuf,
    pub liberal_outlets: PathBuf,
    pub conservative_outlets: PathBuf,
    pub url_cache: PathBuf,
    pub truth_groups: PathBuf,
    pub truth_file: PathBuf,
    pub config: PathBuf,
    pub truth: ScenarioTruth,
    pub groups: GroupMap,
}

pub const CORPUS_FILE: &str = "corpus.jsonl";
pub const SCORES_FILE: &str = "scores.csv";
pub const LIBERAL_OUTLETS_FILE: &str = "liberal_outlets.txt";
pub const CONSERVATIVE_OUTLETS_FILE: &str = "conservative_outlets.txt";
pub const URL_CACHE_FILE: &str = "url_cache.tsv";
pub const TRUTH_GROUPS_FILE: &str = "truth_groups.csv";
pub const TRUTH_FILE: &str = "truth.json";
pub const CONFIG_FILE: &str = "pipeline.toml";

fn prefix(g: Group) -> &'static str {
    match g {
        Group::LiberalHuman => "lh",
        Group::LiberalBot => "lb",
        Group::ConservativeHuman => "ch",
        Group::ConservativeBot => "cb",
        Group::Residual => "rs",
    }
}

#[derive(Clone, Copy)]
struct Posted {
    seq: u64,
    author: u32,
    tags: [u16; 2],
    n_tags: u8,
    url: Option<u32>,
}

struct Generator<'a> {
    spec: &'a ScenarioSpec,
    rng: ChaCha8Rng,
    /// (group, index within group) per global account number.
    accounts: Vec<(Group, u32)>,
    next_seq: u64,
    start: DateTime<Utc>,
    truth: ScenarioTruth,
}

impl Generator<'_> {
    fn account_id(&self, account: u32) -> String {
        let (g, i) = self.accounts[account as usize];
        format!("{}{:06}", prefix(g), i)
    }

    fn tweet_id(seq: u64) -> String {
        format!("{seq:010}")
    }

    fn short_url(side: Leaning, n: u32) -> String {
        let tag = match side {
            Leaning::Liberal => 'l',
            Leaning::Conservative => 'c',
        };
        format!("https://t.co/{tag}{n:05}")
    }

    fn url_pool(&self, side: Leaning) -> u32 {
        let outlets = match side {
            Leaning::Liberal => &self.spec.liberal_outlets,
            Leaning::Conservative => &self.spec.conservative_outlets,
        };
        (outlets.len() * self.spec.urls_per_outlet) as u32
    }

    fn draw_content(&mut self, group: Group, tag_weights: &Option<WeightedIndex<f64>>) -> ([u16; 2], u8, Option<u32>) {
        let spec = self.spec.group(group);
        let mut tags = [0u16; 2];
        let mut n_tags = 0u8;
        if let Some(w) = tag_weights {
            let want = self.rng.gen_range(0..=2usize).min(spec.hashtags.len());
            while (n_tags as usize) < want {
                let t = w.sample(&mut self.rng) as u16;
                if n_tags == 0 || tags[0] != t {
                    tags[n_tags as usize] = t;
                    n_tags += 1;
                }
            }
        }
        let url = match group.leaning() {
            Some(side) if spec.url_share > 0.0 && self.rng.gen_bool(spec.url_share) => {
                Some(self.rng.gen_range(0..self.url_pool(side)))
            }
            _ => None,
        };
        (tags, n_tags, url)
    }

    fn record(
        &mut self,
        kind: TweetKind,
        author: u32,
        reference: Option<&Posted>,
        tags: Vec<String>,
        url: Option<String>,
    ) -> TweetRecord {
        let seq = self.next_seq;
        self.next_seq += 1;
        let (group, _) = self.accounts[author as usize];
        TweetRecord {
            tweet_id: Self::tweet_id(seq),
            author_id: self.account_id(author),
            kind,
            referenced_tweet_id: reference.map(|p| Self::tweet_id(p.seq)),
            referenced_author_id: reference.map(|p| self.account_id(p.author)),
            language: "en".into(),
            text: format!("{} {} by {}", group, match kind {
                TweetKind::Original => "original",
                TweetKind::Retweet => "retweet",
                TweetKind::Reply => "reply",
            }, self.account_id(author)),
            hashtags: tags,
            urls: url.into_iter().collect(),
            created_at: self.start + Duration::seconds(seq as i64),
        }
    }
}

fn poisson(rng: &mut ChaCha8Rng, rate: f64) -> u64 {
    if rate <= 0.0 {
        return 0;
    }
    Poisson::new(rate).expect("rate checked").sample(rng) as u64
}

fn write_lines<I: IntoIterator<Item = S>, S: AsRef<str>>(path: &Path, lines: I) -> Result<()> {
    let mut text = String::new();
    for l in lines {
        text.push_str(l.as_ref());
        text.push('\n');
    }
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Writes a scenario's inputs, ground truth and a ready-to-run pipeline config into
/// `out_dir`. The corpus is streamed to disk.
pub fn generate_scenario(spec: &ScenarioSpec, out_dir: &Path) -> Result<ScenarioOutput> {
    spec.validate()?;
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let out = ScenarioOutput {
        corpus: out_dir.join(CORPUS_FILE),
        scores: out_dir.join(SCORES_FILE),
        liberal_outlets: out_dir.join(LIBERAL_OUTLETS_FILE),
        conservative_outlets: out_dir.join(CONSERVATIVE_OUTLETS_FILE),
        url_cache: out_dir.join(URL_CACHE_FILE),
        truth_groups: out_dir.join(TRUTH_GROUPS_FILE),
        truth_file: out_dir.join(TRUTH_FILE),
        config: out_dir.join(CONFIG_FILE),
        truth: ScenarioTruth {
            group_sizes: Group::ALL.iter().map(|g| (g.to_string(), spec.group(*g).size)).collect(),
            retweet_propensity: spec.retweet_propensity,
            reply_propensity: *spec.replies(),
            expected: Leaning::BOTH.iter().map(|s| (s.to_string(), spec.expected_metrics(*s))).collect(),
            originals: 0,
            retweets: 0,
            replies: 0,
        },
        groups: GroupMap::new(),
    };

    let mut gen = Generator {
        spec,
        rng: ChaCha8Rng::seed_from_u64(spec.rng_seed),
        accounts: Vec::new(),
        next_seq: 1,
        start: Utc.with_ymd_and_hms(2018, 10, 1, 0, 0, 0).unwrap(),
        truth: out.truth.clone(),
    };
    let mut groups = GroupMap::new();
    let mut scores = String::from("account_id,score\n");
    for g in Group::ALL {
        for i in 0..spec.group(g).size {
            let n = gen.accounts.len() as u32;
            gen.accounts.push((g, i as u32));
            let id = gen.account_id(n);
            match g {
                Group::Residual => scores.push_str(&format!("{id},MISSING,suspended\n")),
                _ => {
                    let dist = if g.is_bot() { &spec.bot_scores } else { &spec.human_scores };
                    scores.push_str(&format!("{id},{}\n", dist.sample(&mut gen.rng)));
                }
            }
            groups.insert(id, g);
        }
    }
    std::fs::write(&out.scores, scores).map_err(|e| Error::io(&out.scores, e))?;

    let file = std::fs::File::create(&out.corpus).map_err(|e| Error::io(&out.corpus, e))?;
    let mut w = BufWriter::new(file);
    let io = |e| Error::io(&out.corpus, e);

    let tag_weights: Vec<Option<WeightedIndex<f64>>> = Group::ALL
        .iter()
        .map(|g| {
            let n = spec.group(*g).hashtags.len();
            (n > 0).then(|| WeightedIndex::new((0..n).map(|r| 1.0 / (r as f64 + 1.0))).expect("positive weights"))
        })
        .collect();
    let tag_names: Vec<Vec<String>> = Group::ALL
        .iter()
        .map(|g| spec.group(*g).hashtags.iter().map(|t| crate::corpus::normalize_hashtag(t)).collect())
        .collect();
    let slot = |g: Group| Group::ALL.iter().position(|x| *x == g).expect("known group");
    let url_string = |g: Group, u: Option<u32>| u.map(|n| Generator::short_url(g.leaning().expect("partisan"), n));

    // Originals.
    let mut posted: Vec<Posted> = Vec::new();
    let mut pools: Vec<Vec<u32>> = vec![Vec::new(); Group::ALL.len()];
    for account in 0..gen.accounts.len() as u32 {
        let (g, _) = gen.accounts[account as usize];
        let k = poisson(&mut gen.rng, spec.group(g).originals);
        for _ in 0..k {
            let (tags, n_tags, url) = gen.draw_content(g, &tag_weights[slot(g)]);
            let names = tags[..n_tags as usize].iter().map(|t| tag_names[slot(g)][*t as usize].clone()).collect();
            let rec = gen.record(TweetKind::Original, account, None, names, url_string(g, url));
            pools[slot(g)].push(posted.len() as u32);
            posted.push(Posted {
                seq: gen.next_seq - 1,
                author: account,
                tags,
                n_tags,
                url,
            });
            writeln!(w, "{}", record_to_line(&rec)).map_err(io)?;
            gen.truth.originals += 1;
        }
    }

    let row_dists = |m: &Propensity| -> Vec<Option<WeightedIndex<f64>>> {
        m.iter()
            .map(|row| (row.iter().sum::<f64>() > 0.0).then(|| WeightedIndex::new(row.iter().copied()).expect("valid row")))
            .collect()
    };
    let rt_rows = row_dists(&spec.retweet_propensity);
    let rp_rows = row_dists(spec.replies());

    // Replies, then retweets. Both target originals only.
    for kind in [TweetKind::Reply, TweetKind::Retweet] {
        for account in 0..gen.accounts.len() as u32 {
            let (g, _) = gen.accounts[account as usize];
            let gs = spec.group(g);
            let rate = if kind == TweetKind::Reply { gs.replies } else { gs.retweets };
            let k = poisson(&mut gen.rng, rate);
            for _ in 0..k {
                let mut target = None;
                for _ in 0..MAX_RESAMPLE {
                    let pick = match g.partisan_index() {
                        Some(i) => {
                            let rows = if kind == TweetKind::Reply { &rp_rows } else { &rt_rows };
                            let dst = Group::PARTISAN[rows[i].as_ref().expect("validated").sample(&mut gen.rng)];
                            let pool = &pools[slot(dst)];
                            if pool.is_empty() {
                                return Err(Error::InfeasibleScenario(format!(
                                    "no {dst} originals were drawn; raise their size or rate"
                                )));
                            }
                            pool[gen.rng.gen_range(0..pool.len())]
                        }
                        None => {
                            if posted.is_empty() {
                                return Err(Error::InfeasibleScenario("no originals were drawn".into()));
                            }
                            gen.rng.gen_range(0..posted.len() as u32)
                        }
                    };
                    if posted[pick as usize].author != account {
                        target = Some(pick);
                        break;
                    }
                }
                let Some(target) = target else {
                    return Err(Error::InfeasibleScenario(format!(
                        "could not find a target for {} other than itself",
                        gen.account_id(account)
                    )));
                };
                let orig = posted[target as usize];
                let (og, _) = gen.accounts[orig.author as usize];
                let rec = if kind == TweetKind::Retweet {
                    let names = orig.tags[..orig.n_tags as usize]
                        .iter()
                        .map(|t| tag_names[slot(og)][*t as usize].clone())
                        .collect();
                    gen.truth.retweets += 1;
                    gen.record(kind, account, Some(&orig), names, url_string(og, orig.url))
                } else {
                    let (tags, n_tags, url) = gen.draw_content(g, &tag_weights[slot(g)]);
                    let names = tags[..n_tags as usize].iter().map(|t| tag_names[slot(g)][*t as usize].clone()).collect();
                    gen.truth.replies += 1;
                    gen.record(kind, account, Some(&orig), names, url_string(g, url))
                };
                writeln!(w, "{}", record_to_line(&rec)).map_err(io)?;
            }
        }
    }
    w.flush().map_err(io)?;
    drop(w);

    write_lines(&out.liberal_outlets, &spec.liberal_outlets)?;
    write_lines(&out.conservative_outlets, &spec.conservative_outlets)?;
    let mut cache = String::new();
    for side in Leaning::BOTH {
        let outlets = match side {
            Leaning::Liberal => &spec.liberal_outlets,
            Leaning::Conservative => &spec.conservative_outlets,
        };
        for n in 0..gen.url_pool(side) {
            let outlet = &outlets[n as usize % outlets.len()];
            cache.push_str(&format!("{}\thttps://www.{outlet}/politics/story-{n}\n", Generator::short_url(side, n)));
        }
    }
    std::fs::write(&out.url_cache, cache).map_err(|e| Error::io(&out.url_cache, e))?;

    let mut buf = Vec::new();
    groups.write_csv(&mut buf)?;
    std::fs::write(&out.truth_groups, buf).map_err(|e| Error::io(&out.truth_groups, e))?;

    let truth = gen.truth;
    let json = serde_json::to_string_pretty(&truth).expect("truth serializes");
    std::fs::write(&out.truth_file, json + "\n").map_err(|e| Error::io(&out.truth_file, e))?;

    let mut cfg = PipelineConfig::new(CORPUS_FILE, SCORES_FILE, LIBERAL_OUTLETS_FILE, CONSERVATIVE_OUTLETS_FILE);
    cfg.url_cache = Some(URL_CACHE_FILE.into());
    cfg.rng_seed = spec.rng_seed;
    std::fs::write(&out.config, cfg.to_toml()).map_err(|e| Error::io(&out.config, e))?;

    Ok(ScenarioOutput { truth, groups, ..out })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{ingest_path, FilterConfig};
    use crate::graph;
    use crate::metrics;

    fn group(size: usize, originals: f64, retweets: f64, replies: f64) -> GroupSpec {
        GroupSpec {
            size,
            originals,
            retweets,
            replies,
            url_share: 0.3,
            hashtags: vec!["a".into(), "b".into(), "c".into()],
        }
    }

    fn base() -> ScenarioSpec {
        let row = [0.5, 0.25, 0.25, 0.0];
        ScenarioSpec {
            rng_seed: 7,
            liberal_human: group(40, 2.0, 4.0, 1.0),
            liberal_bot: group(10, 4.0, 2.0, 0.0),
            conservative_human: group(40, 2.0, 4.0, 1.0),
            conservative_bot: group(10, 4.0, 2.0, 0.0),
            residual: group(5, 1.0, 1.0, 0.0),
            retweet_propensity: [row, row, [0.25, 0.0, 0.5, 0.25], [0.25, 0.0, 0.5, 0.25]],
            reply_propensity: None,
            human_scores: ScoreDistribution::Uniform { low: 0.0, high: 0.2 },
            bot_scores: ScoreDistribution::Beta { alpha: 2.0, beta: 2.0, low: 0.5, high: 1.0 },
            liberal_outlets: default_liberal_outlets(),
            conservative_outlets: default_conservative_outlets(),
            urls_per_outlet: 3,
        }
    }

    #[test]
    fn toml_round_trip() {
        let s = base();
        assert_eq!(ScenarioSpec::from_toml(&s.to_toml()).unwrap(), s);
    }

    #[test]
    fn rows_must_sum_to_one() {
        let mut s = base();
        s.retweet_propensity[0] = [0.5, 0.2, 0.2, 0.0];
        assert!(matches!(s.validate(), Err(Error::Config(_))));
    }

    #[test]
    fn zero_row_with_activity_is_infeasible() {
        let mut s = base();
        s.retweet_propensity[1] = [0.0; 4];
        assert!(matches!(s.validate(), Err(Error::InfeasibleScenario(_))));
        s.liberal_bot.retweets = 0.0;
        s.liberal_bot.replies = 0.0;
        s.validate().unwrap();
    }

    #[test]
    fn targeting_a_silent_group_is_infeasible() {
        let mut s = base();
        s.liberal_bot.originals = 0.0;
        assert!(matches!(s.validate(), Err(Error::InfeasibleScenario(_))));
    }

    #[test]
    fn originals_only_for_lone_humans() {
        let dir = tempfile::tempdir().unwrap();
        let empty = GroupSpec::default();
        let s = ScenarioSpec {
            liberal_human: group(20, 3.0, 0.0, 0.0),
            liberal_bot: empty.clone(),
            conservative_human: empty.clone(),
            conservative_bot: empty.clone(),
            residual: empty,
            retweet_propensity: [[0.0; 4]; 4],
            ..base()
        };
        let out = generate_scenario(&s, dir.path()).unwrap();
        assert_eq!(out.truth.retweets + out.truth.replies, 0);
        let (c, _) = ingest_path(&out.corpus, &FilterConfig::default()).unwrap();
        assert!(c.records().iter().all(|r| r.kind == TweetKind::Original));
        let r = metrics::effectiveness(&c, &out.groups, Leaning::Liberal);
        assert_eq!(r.rtp.value(), None);
        assert_eq!(r.tsr.value(), None);
        assert_eq!(r.h2br.value(), Some(0.0));
    }

    #[test]
    fn generation_is_deterministic_and_consistent() {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        let oa = generate_scenario(&base(), a.path()).unwrap();
        generate_scenario(&base(), b.path()).unwrap();
        for f in [CORPUS_FILE, SCORES_FILE, URL_CACHE_FILE, TRUTH_GROUPS_FILE, TRUTH_FILE, CONFIG_FILE] {
            assert_eq!(std::fs::read(a.path().join(f)).unwrap(), std::fs::read(b.path().join(f)).unwrap(), "{f}");
        }
        let (c, report) = ingest_path(&oa.corpus, &FilterConfig::default()).unwrap();
        assert_eq!(report.kept, oa.truth.originals + oa.truth.retweets + oa.truth.replies);
        let g = graph::build(&c);
        // no self loops and partisan sources stay inside their propensity support
        for e in g.edges() {
            assert_ne!(e.source, e.target);
            let src = oa.groups.get(g.node_id(e.source));
            let dst = oa.groups.get(g.node_id(e.target));
            if let (Some(i), Some(j)) = (src.partisan_index(), dst.partisan_index()) {
                assert!(base().retweet_propensity[i][j] > 0.0, "{src} -> {dst}");
            } else if src != Group::Residual {
                panic!("partisan {src} retweeted residual {dst}");
            }
        }
    }

    #[test]
    fn expected_metrics_follow_rates() {
        let e = base().expected_metrics(Leaning::Liberal);
        assert_eq!(e.rtp, Some(0.25));
        assert_eq!(e.rr, Some(0.25));
        assert_eq!(e.h2br, Some((4.0 * 0.25 + 1.0 * 0.25) / 7.0));
    }
}
