use super::SeedLabels;
use crate::graph::{RetweetGraph, UndirectedView};
use crate::{Error, Leaning, Result};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    Seed,
    Propagated,
    Unlabeled,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Seed => "seed",
            Provenance::Propagated => "propagated",
            Provenance::Unlabeled => "unlabeled",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AccountLeaning {
    pub leaning: Option<Leaning>,
    pub provenance: Provenance,
}

/// Inferred leaning for every graph node and every seed account.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LeaningMap {
    entries: BTreeMap<String, AccountLeaning>,
    /// Sweeps performed.
    pub iterations: usize,
    /// True when the last sweep changed nothing.
    pub converged: bool,
}

impl LeaningMap {
    pub fn leaning(&self, account: &str) -> Option<Leaning> {
        self.entries.get(account).and_then(|e| e.leaning)
    }

    pub fn provenance(&self, account: &str) -> Provenance {
        self.entries
            .get(account)
            .map_or(Provenance::Unlabeled, |e| e.provenance)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sorted by account id.
    pub fn iter(&self) -> impl Iterator<Item = (&str, AccountLeaning)> {
        self.entries.iter().map(|(a, e)| (a.as_str(), *e))
    }

    /// Accounts per (liberal, conservative, unlabeled).
    pub fn counts(&self) -> (usize, usize, usize) {
        self.entries.values().fold((0, 0, 0), |(l, c, u), e| match e.leaning {
            Some(Leaning::Liberal) => (l + 1, c, u),
            Some(Leaning::Conservative) => (l, c + 1, u),
            None => (l, c, u + 1),
        })
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "account_id,leaning,provenance")?;
        for (a, e) in &self.entries {
            let leaning = e.leaning.map_or("unlabeled", Leaning::as_str);
            writeln!(w, "{},{leaning},{}", crate::report::csv_field(a), e.provenance)?;
        }
        Ok(())
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<LeaningMap> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let mut entries = BTreeMap::new();
        for row in rdr.records() {
            let row = row?;
            let leaning = match row.get(1).unwrap_or("") {
                "unlabeled" | "" => None,
                other => Some(other.parse()?),
            };
            let provenance = match row.get(2).unwrap_or("") {
                "seed" => Provenance::Seed,
                "propagated" => Provenance::Propagated,
                "unlabeled" => Provenance::Unlabeled,
                other => return Err(Error::Parse(format!("unknown provenance `{other}`"))),
            };
            entries.insert(row.get(0).unwrap_or("").to_string(), AccountLeaning { leaning, provenance });
        }
        Ok(LeaningMap {
            entries,
            iterations: 0,
            converged: true,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PropagationParams {
    pub max_iters: usize,
    pub rng_seed: u64,
}

impl Default for PropagationParams {
    fn default() -> Self {
        PropagationParams {
            max_iters: 100,
            rng_seed: 42,
        }
    }
}

const UNLABELED: u8 = 0;
const LIBERAL: u8 = 1;
const CONSERVATIVE: u8 = 2;

fn code(l: Leaning) -> u8 {
    match l {
        Leaning::Liberal => LIBERAL,
        Leaning::Conservative => CONSERVATIVE,
    }
}

fn decode(c: u8) -> Option<Leaning> {
    match c {
        LIBERAL => Some(Leaning::Liberal),
        CONSERVATIVE => Some(Leaning::Conservative),
        _ => None,
    }
}

/// Label propagation over one graph; reusable across seed sets (e.g. CV folds).
pub struct Propagator<'g> {
    graph: &'g RetweetGraph,
    adj: UndirectedView,
}

impl<'g> Propagator<'g> {
    pub fn new(graph: &'g RetweetGraph) -> Self {
        Propagator {
            graph,
            adj: graph.undirected(),
        }
    }

    /// Clamped asynchronous label propagation.
    ///
    /// Each sweep visits the non-seed nodes in a fresh shuffle of the run's RNG and
    /// gives each the label with the largest summed edge weight among its labeled
    /// neighbors. Ties draw from the RNG over the tied labels ordered by their
    /// lowest-indexed neighbor, so exchanging the two sides in the seeds exchanges them
    /// in the result. Stops after a sweep with no change or `max_iters` sweeps.
    pub fn run(&self, seeds: &SeedLabels, params: PropagationParams) -> Result<LeaningMap> {
        if seeds.is_empty() {
            return Err(Error::EmptySeeds);
        }
        if params.max_iters == 0 {
            return Err(Error::Config("max_iters must be at least 1".into()));
        }
        let n = self.graph.node_count();
        let mut labels = vec![UNLABELED; n];
        let mut clamped = vec![false; n];
        for (account, seed) in seeds.iter() {
            if let Some(v) = self.graph.index_of(account) {
                labels[v as usize] = code(seed.leaning);
                clamped[v as usize] = true;
            }
        }
        let mut free: Vec<u32> = (0..n as u32).filter(|v| !clamped[*v as usize]).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(params.rng_seed);
        let mut iterations = 0;
        let mut converged = false;

        while iterations < params.max_iters {
            iterations += 1;
            free.shuffle(&mut rng);
            let mut changed = false;
            for &v in &free {
                let mut sums = [0u64; 3];
                let mut first = [u32::MAX; 3];
                for (u, w) in self.adj.weighted_neighbors(v) {
                    let l = labels[u as usize] as usize;
                    if l != UNLABELED as usize {
                        sums[l] += w;
                        first[l] = first[l].min(u);
                    }
                }
                let next = match sums[1].cmp(&sums[2]) {
                    _ if sums[1] == 0 && sums[2] == 0 => continue,
                    std::cmp::Ordering::Greater => LIBERAL,
                    std::cmp::Ordering::Less => CONSERVATIVE,
                    std::cmp::Ordering::Equal => {
                        let order = if first[1] < first[2] {
                            [LIBERAL, CONSERVATIVE]
                        } else {
                            [CONSERVATIVE, LIBERAL]
                        };
                        order[rng.gen_range(0..2)]
                    }
                };
                if labels[v as usize] != next {
                    labels[v as usize] = next;
                    changed = true;
                }
            }
            if !changed {
                converged = true;
                break;
            }
        }

        let mut entries: BTreeMap<String, AccountLeaning> = BTreeMap::new();
        for (v, id) in self.graph.node_ids().iter().enumerate() {
            let leaning = decode(labels[v]);
            let provenance = if clamped[v] {
                Provenance::Seed
            } else if leaning.is_some() {
                Provenance::Propagated
            } else {
                Provenance::Unlabeled
            };
            entries.insert(id.clone(), AccountLeaning { leaning, provenance });
        }
        for (account, seed) in seeds.iter() {
            entries.entry(account.to_string()).or_insert(AccountLeaning {
                leaning: Some(seed.leaning),
                provenance: Provenance::Seed,
            });
        }
        Ok(LeaningMap {
            entries,
            iterations,
            converged,
        })
    }
}

pub fn propagate(graph: &RetweetGraph, seeds: &SeedLabels, params: PropagationParams) -> Result<LeaningMap> {
    Propagator::new(graph).run(seeds, params)
}
