use crate::{Error, Leaning, Result};
use std::collections::BTreeSet;
use std::path::Path;

/// Registrable (public-suffix aware) domain of a URL or bare host, lowercase.
///
/// Scheme-less inputs such as `nyti.ms/abc` are accepted. IP hosts have no
/// registrable domain.
pub fn registrable_domain(input: &str) -> Option<String> {
    let input = input.trim();
    if input.is_empty() {
        return None;
    }
    let parsed = if input.contains("://") {
        url::Url::parse(input).ok()?
    } else {
        url::Url::parse(&format!("http://{input}")).ok()?
    };
    let host = match parsed.host()? {
        url::Host::Domain(d) => d.trim_end_matches('.').to_ascii_lowercase(),
        _ => return None,
    };
    psl::domain_str(&host).map(str::to_string)
}

/// Two disjoint sets of outlet domains, stored as registrable domains.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MediaOutletLists {
    liberal: BTreeSet<String>,
    conservative: BTreeSet<String>,
}

impl MediaOutletLists {
    pub fn new<L, C>(liberal: L, conservative: C) -> Result<Self>
    where
        L: IntoIterator,
        L::Item: AsRef<str>,
        C: IntoIterator,
        C::Item: AsRef<str>,
    {
        let normalize = |items: Vec<String>| -> Result<BTreeSet<String>> {
            items
                .iter()
                .map(|d| {
                    registrable_domain(d)
                        .ok_or_else(|| Error::Parse(format!("`{d}` is not a domain")))
                })
                .collect()
        };
        let liberal = normalize(liberal.into_iter().map(|s| s.as_ref().to_string()).collect())?;
        let conservative =
            normalize(conservative.into_iter().map(|s| s.as_ref().to_string()).collect())?;
        if let Some(shared) = liberal.intersection(&conservative).next() {
            return Err(Error::Config(format!("outlet {shared} is on both lists")));
        }
        Ok(MediaOutletLists {
            liberal,
            conservative,
        })
    }

    /// Reads two files with one domain per line; blank lines and `#` comments skipped.
    pub fn load(liberal: &Path, conservative: &Path) -> Result<Self> {
        Self::new(read_domains(liberal)?, read_domains(conservative)?)
    }

    pub fn liberal(&self) -> &BTreeSet<String> {
        &self.liberal
    }

    pub fn conservative(&self) -> &BTreeSet<String> {
        &self.conservative
    }

    /// Side of an already-extracted registrable domain.
    pub fn side_of_domain(&self, domain: &str) -> Option<Leaning> {
        if self.liberal.contains(domain) {
            Some(Leaning::Liberal)
        } else if self.conservative.contains(domain) {
            Some(Leaning::Conservative)
        } else {
            None
        }
    }

    pub fn side_of_url(&self, url: &str) -> Option<Leaning> {
        self.side_of_domain(&registrable_domain(url)?)
    }

    /// The same lists with sides exchanged.
    pub fn swapped(&self) -> Self {
        MediaOutletLists {
            liberal: self.conservative.clone(),
            conservative: self.liberal.clone(),
        }
    }
}

fn read_domains(path: &Path) -> Result<Vec<String>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_string)
        .collect())
}
