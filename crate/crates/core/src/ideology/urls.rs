use crate::corpus::Corpus;
use crate::{Error, Result};
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::io::{BufRead, Write};
use std::path::Path;

/// Expands shortened URLs. Implementations may hit the network; the pipeline only
/// ever uses the offline [`UrlResolutionCache`].
pub trait UrlResolver {
    /// The expanded form, or `None` when the URL cannot be resolved.
    fn resolve(&self, url: &str) -> Option<String>;
}

/// Short URL -> expanded URL, plus URLs known to be unresolvable.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct UrlResolutionCache {
    expanded: HashMap<String, String>,
    unresolved: BTreeSet<String>,
}

impl UrlResolutionCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// An empty expansion marks the URL as unresolved.
    pub fn insert(&mut self, short: impl Into<String>, expanded: impl Into<String>) {
        let short = short.into();
        let expanded = expanded.into();
        if expanded.trim().is_empty() {
            self.expanded.remove(&short);
            self.unresolved.insert(short);
        } else {
            self.unresolved.remove(&short);
            self.expanded.insert(short, expanded);
        }
    }

    pub fn get(&self, short: &str) -> Option<&str> {
        self.expanded.get(short).map(String::as_str)
    }

    pub fn is_unresolved(&self, short: &str) -> bool {
        self.unresolved.contains(short)
    }

    pub fn len(&self) -> usize {
        self.expanded.len()
    }

    pub fn is_empty(&self) -> bool {
        self.expanded.is_empty() && self.unresolved.is_empty()
    }

    /// The expanded form if cached, otherwise the URL itself.
    pub fn expand<'a>(&'a self, url: &'a str) -> &'a str {
        self.get(url).unwrap_or(url)
    }

    /// Keeps only entries for the given URLs.
    pub fn restricted_to<'a, I: IntoIterator<Item = &'a str>>(&self, urls: I) -> Self {
        let mut out = Self::new();
        for u in urls {
            if let Some(e) = self.get(u) {
                out.insert(u, e);
            } else if self.is_unresolved(u) {
                out.insert(u, "");
            }
        }
        out
    }

    /// Parses `short<TAB>expanded` lines. A line with no or an empty expansion marks
    /// the URL unresolved.
    pub fn read_tsv<R: BufRead>(reader: R) -> Result<Self> {
        let mut out = Self::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let mut parts = line.splitn(2, '\t');
            let short = parts.next().unwrap_or("").trim();
            if short.is_empty() {
                return Err(Error::Parse(format!("url cache line {}: empty short url", i + 1)));
            }
            out.insert(short, parts.next().unwrap_or("").trim());
        }
        Ok(out)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_tsv(std::io::BufReader::new(file))
    }

    pub fn write_tsv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let sorted: BTreeMap<&str, &str> = self
            .expanded
            .iter()
            .map(|(k, v)| (k.as_str(), v.as_str()))
            .chain(self.unresolved.iter().map(|k| (k.as_str(), "")))
            .collect();
        for (k, v) in sorted {
            writeln!(w, "{k}\t{v}")?;
        }
        Ok(())
    }
}

impl UrlResolver for UrlResolutionCache {
    fn resolve(&self, url: &str) -> Option<String> {
        self.get(url).map(str::to_string)
    }
}

/// The `n` most shared URLs as `(url, records containing it)`, by count descending
/// then URL ascending. A URL repeated inside one record counts once.
pub fn rank_urls(corpus: &Corpus, n: usize) -> Vec<(String, u64)> {
    let mut counts: HashMap<&str, u64> = HashMap::new();
    let mut seen: HashSet<&str> = HashSet::new();
    for r in corpus.records() {
        seen.clear();
        for u in &r.urls {
            if seen.insert(u.as_str()) {
                *counts.entry(u.as_str()).or_insert(0) += 1;
            }
        }
    }
    let mut ranked: Vec<(&str, u64)> = counts.into_iter().collect();
    ranked.sort_unstable_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    ranked.truncate(n);
    ranked.into_iter().map(|(u, c)| (u.to_string(), c)).collect()
}

/// Resolves every ranked URL, recording failures as unresolved.
pub fn expand_top(ranked: &[(String, u64)], resolver: &dyn UrlResolver) -> UrlResolutionCache {
    let mut out = UrlResolutionCache::new();
    for (url, _) in ranked {
        out.insert(url.as_str(), resolver.resolve(url).unwrap_or_default());
    }
    out
}
