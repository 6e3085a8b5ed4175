//! Hashtag rankings per group and bot/human divergence flags.

use crate::corpus::{normalize_hashtag, Corpus};
use crate::graph::{Group, GroupMap};
use std::collections::{BTreeSet, HashMap, HashSet};
use std::io::Write;

/// General election hashtags left out of rankings unless overridden.
pub const DEFAULT_GENERAL_HASHTAGS: [&str; 7] = [
    "elections",
    "midterms",
    "democrats",
    "liberals",
    "voteredtosaveamerica",
    "votebluetosaveamerica",
    "trump",
];

pub fn default_exclusions() -> HashSet<String> {
    DEFAULT_GENERAL_HASHTAGS.iter().map(|s| s.to_string()).collect()
}

/// Normalizes a list of exclusion entries (case-folded, `#` stripped).
pub fn exclusion_set<I, S>(items: I) -> HashSet<String>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    items
        .into_iter()
        .map(|s| normalize_hashtag(s.as_ref()))
        .filter(|s| !s.is_empty())
        .collect()
}

/// Top `k` hashtags over records authored by `group`, by count descending then tag
/// ascending. A tag repeated within one record counts once.
pub fn top_hashtags(
    corpus: &Corpus,
    groups: &GroupMap,
    group: Group,
    k: usize,
    exclusions: &HashSet<String>,
) -> Vec<(String, u64)> {
    let mut counts: HashMap<&str, u64> = HashMap::new();
    let mut seen: HashSet<&str> = HashSet::new();
    for r in corpus.records() {
        if groups.get(&r.author_id) != group {
            continue;
        }
        seen.clear();
        for tag in &r.hashtags {
            if !exclusions.contains(tag) && seen.insert(tag.as_str()) {
                *counts.entry(tag.as_str()).or_insert(0) += 1;
            }
        }
    }
    let mut ranked: Vec<(&str, u64)> = counts.into_iter().collect();
    ranked.sort_unstable_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    ranked.truncate(k);
    ranked.into_iter().map(|(t, c)| (t.to_string(), c)).collect()
}

/// Bot hashtags missing from the human list.
pub fn divergence(bot_top: &[(String, u64)], human_top: &[(String, u64)]) -> BTreeSet<String> {
    let human: HashSet<&str> = human_top.iter().map(|(t, _)| t.as_str()).collect();
    bot_top
        .iter()
        .filter(|(t, _)| !human.contains(t.as_str()))
        .map(|(t, _)| t.clone())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HashtagReport {
    pub group: Group,
    pub ranked: Vec<(String, u64)>,
    pub flagged: BTreeSet<String>,
}

impl HashtagReport {
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "rank,hashtag,count,flagged")?;
        for (i, (tag, count)) in self.ranked.iter().enumerate() {
            writeln!(w, "{},#{tag},{count},{}", i + 1, self.flagged.contains(tag))?;
        }
        Ok(())
    }
}

/// Ranks `group`'s top `k` hashtags and, for bot groups, flags those outside the
/// human counterpart's top `human_top`. Human groups get no flags.
pub fn hashtag_report(
    corpus: &Corpus,
    groups: &GroupMap,
    group: Group,
    k: usize,
    human_top: usize,
    exclusions: &HashSet<String>,
) -> HashtagReport {
    let ranked = top_hashtags(corpus, groups, group, k, exclusions);
    let flagged = match group.human_counterpart() {
        Some(h) => divergence(&ranked, &top_hashtags(corpus, groups, h, human_top, exclusions)),
        None => BTreeSet::new(),
    };
    HashtagReport {
        group,
        ranked,
        flagged,
    }
}
