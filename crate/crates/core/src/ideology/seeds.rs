use super::{registrable_domain, MediaOutletLists, UrlResolutionCache};
use crate::corpus::Corpus;
use crate::{Error, Leaning, Result};
use std::collections::{BTreeMap, HashMap};
use std::io::{Read, Write};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedLabel {
    pub leaning: Leaning,
    /// Records linking at least one liberal outlet.
    pub n_liberal: u64,
    /// Records linking at least one conservative outlet.
    pub n_conservative: u64,
}

/// Accounts labeled directly from the outlets they share.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SeedLabels {
    labels: BTreeMap<String, SeedLabel>,
}

impl SeedLabels {
    /// Applies the majority rule to per-account counts; ties and all-zero accounts
    /// get no label.
    pub fn from_counts<I, S>(counts: I) -> Self
    where
        I: IntoIterator<Item = (S, u64, u64)>,
        S: Into<String>,
    {
        let labels = counts
            .into_iter()
            .filter_map(|(account, n_liberal, n_conservative)| {
                let leaning = match n_liberal.cmp(&n_conservative) {
                    std::cmp::Ordering::Greater => Leaning::Liberal,
                    std::cmp::Ordering::Less => Leaning::Conservative,
                    std::cmp::Ordering::Equal => return None,
                };
                Some((
                    account.into(),
                    SeedLabel {
                        leaning,
                        n_liberal,
                        n_conservative,
                    },
                ))
            })
            .collect();
        SeedLabels { labels }
    }

    pub fn get(&self, account: &str) -> Option<&SeedLabel> {
        self.labels.get(account)
    }

    pub fn leaning(&self, account: &str) -> Option<Leaning> {
        self.labels.get(account).map(|s| s.leaning)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Sorted by account id.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &SeedLabel)> {
        self.labels.iter().map(|(a, s)| (a.as_str(), s))
    }

    /// Keeps the accounts for which `keep` returns true.
    pub fn filter(&self, mut keep: impl FnMut(&str) -> bool) -> SeedLabels {
        SeedLabels {
            labels: self
                .labels
                .iter()
                .filter(|(a, _)| keep(a))
                .map(|(a, s)| (a.clone(), *s))
                .collect(),
        }
    }

    /// Liberal and conservative exchanged, counts included.
    pub fn swapped(&self) -> SeedLabels {
        SeedLabels::from_counts(
            self.labels
                .iter()
                .map(|(a, s)| (a.clone(), s.n_conservative, s.n_liberal)),
        )
    }

    pub fn count(&self, leaning: Leaning) -> usize {
        self.labels.values().filter(|s| s.leaning == leaning).count()
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "account_id,leaning,n_liberal,n_conservative")?;
        for (a, s) in &self.labels {
            writeln!(
                w,
                "{},{},{},{}",
                crate::report::csv_field(a),
                s.leaning,
                s.n_liberal,
                s.n_conservative
            )?;
        }
        Ok(())
    }

    /// Reads the CSV written by [`SeedLabels::write_csv`]; the leaning column is
    /// re-derived from the counts and must agree with them.
    pub fn read_csv<R: Read>(reader: R) -> Result<SeedLabels> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let mut rows = Vec::new();
        for row in rdr.records() {
            let row = row?;
            let account = row.get(0).unwrap_or("").to_string();
            let stated: Leaning = row.get(1).unwrap_or("").parse()?;
            let num = |i: usize| -> Result<u64> {
                row.get(i)
                    .unwrap_or("")
                    .parse()
                    .map_err(|_| Error::Parse(format!("seed {account}: bad count in column {}", i + 1)))
            };
            let (l, c) = (num(2)?, num(3)?);
            let derived = match l.cmp(&c) {
                std::cmp::Ordering::Greater => Leaning::Liberal,
                std::cmp::Ordering::Less => Leaning::Conservative,
                std::cmp::Ordering::Equal => {
                    return Err(Error::Parse(format!("seed {account}: tied counts")))
                }
            };
            if derived != stated {
                return Err(Error::Parse(format!(
                    "seed {account}: leaning {stated} disagrees with counts {l}/{c}"
                )));
            }
            rows.push((account, l, c));
        }
        Ok(SeedLabels::from_counts(rows))
    }
}

/// Counts, per author, the records that link a liberal and a conservative outlet
/// (after URL expansion through `cache`) and labels by majority. A record linking
/// both sides counts once for each.
pub fn seed_label(corpus: &Corpus, cache: &UrlResolutionCache, outlets: &MediaOutletLists) -> SeedLabels {
    let mut domain_side: HashMap<&str, Option<Leaning>> = HashMap::new();
    let mut counts: HashMap<&str, (u64, u64)> = HashMap::new();
    for r in corpus.records() {
        let (mut lib, mut con) = (false, false);
        for url in &r.urls {
            let side = *domain_side.entry(url.as_str()).or_insert_with(|| {
                registrable_domain(cache.expand(url)).and_then(|d| outlets.side_of_domain(&d))
            });
            match side {
                Some(Leaning::Liberal) => lib = true,
                Some(Leaning::Conservative) => con = true,
                None => {}
            }
        }
        if lib || con {
            let entry = counts.entry(r.author_id.as_str()).or_insert((0, 0));
            entry.0 += lib as u64;
            entry.1 += con as u64;
        }
    }
    SeedLabels::from_counts(counts.into_iter().map(|(a, (l, c))| (a, l, c)))
}
