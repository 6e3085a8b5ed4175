//! End-to-end batch run producing a hashed report bundle.

mod config;

pub use config::{stage_seed, PipelineConfig};

use crate::accounts::{self, AccountClass, Threshold};
use crate::corpus::{self, FilterConfig};
use crate::graph::{self, Group, GroupMap};
use crate::hashtags;
use crate::ideology::{self, LeaningMap, MediaOutletLists, PropagationParams, SeedLabels, UrlResolutionCache};
use crate::metrics;
use crate::report::csv_field;
use crate::{Error, Leaning, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub file: String,
    pub sha256: String,
    pub bytes: u64,
}

/// Every file a run emitted, in emission order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub files: Vec<ManifestEntry>,
}

impl Manifest {
    pub fn get(&self, file: &str) -> Option<&ManifestEntry> {
        self.files.iter().find(|e| e.file == file)
    }

    /// Hash over the manifest's own serialized form.
    pub fn digest(&self) -> String {
        hex_digest(serde_json::to_string(self).expect("manifest serializes").as_bytes())
    }
}

fn hex_digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Writes report files into the output directory and records their hashes.
struct Bundle {
    dir: PathBuf,
    manifest: Manifest,
}

impl Bundle {
    fn emit(&mut self, file: &str, body: impl FnOnce(&mut Vec<u8>) -> std::io::Result<()>) -> Result<()> {
        let mut buf = Vec::new();
        body(&mut buf)?;
        let path = self.dir.join(file);
        std::fs::write(&path, &buf).map_err(|e| Error::io(&path, e))?;
        self.manifest.files.push(ManifestEntry {
            file: file.to_string(),
            sha256: hex_digest(&buf),
            bytes: buf.len() as u64,
        });
        Ok(())
    }

    fn finish(self) -> Result<Manifest> {
        let path = self.dir.join(MANIFEST_FILE);
        let text = serde_json::to_string_pretty(&self.manifest).expect("manifest serializes");
        std::fs::write(&path, text + "\n").map_err(|e| Error::io(&path, e))?;
        Ok(self.manifest)
    }
}

fn stage<T>(name: &'static str, f: impl FnOnce() -> Result<T>) -> Result<T> {
    log::info!("stage {name}");
    f().map_err(|e| Error::Stage {
        stage: name,
        source: Box::new(e),
    })
}

fn note_csv(w: &mut Vec<u8>, status: &str) -> std::io::Result<()> {
    writeln!(w, "status")?;
    writeln!(w, "{}", csv_field(status))
}

/// Runs every stage in order and writes the report bundle into `out_dir`.
///
/// A failing stage aborts the run with an [`Error::Stage`]; files written by earlier
/// stages stay on disk. Stages whose preconditions the data cannot meet (no seeds,
/// fewer than two graph nodes, too few seeds per class for the folds) emit a status
/// note instead of failing, so an empty corpus still yields a complete bundle.
pub fn run_all(config: &PipelineConfig, out_dir: &Path) -> Result<Manifest> {
    stage("config", || config.validate())?;
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let mut bundle = Bundle {
        dir: out_dir.to_path_buf(),
        manifest: Manifest::default(),
    };

    let corpus = stage("ingest", || {
        let terms = match &config.exclusion_terms {
            Some(p) => corpus::read_terms_file(p)?,
            None => Vec::new(),
        };
        let filter = FilterConfig::new(&config.languages, terms)?;
        let (corpus, report) = corpus::ingest_path(&config.corpus, &filter)?;
        bundle.emit("ingest_report.csv", |w| report.write_csv(w))?;
        Ok(corpus)
    })?;

    stage("stats", || {
        let stats = corpus::stats(&corpus);
        bundle.emit("corpus_stats.csv", |w| stats.write_csv(w))
    })?;

    let (scores, classes) = stage("classify", || {
        let (scores, load) = accounts::load_scores(&config.scores)?;
        if load.rejected > 0 {
            log::warn!("{} score rows rejected", load.rejected);
        }
        let classes = accounts::classify(&scores, Threshold::new(config.threshold)?, corpus.accounts());
        let histogram = accounts::score_histogram(&scores);
        bundle.emit("score_histogram.csv", |w| histogram.write_csv(w))?;
        Ok((scores, classes))
    })?;

    let seeds = stage("seed", || {
        let outlets = MediaOutletLists::load(&config.liberal_outlets, &config.conservative_outlets)?;
        let full_cache = match &config.url_cache {
            Some(p) => UrlResolutionCache::load(p)?,
            None => UrlResolutionCache::new(),
        };
        let ranked = ideology::rank_urls(&corpus, config.top_urls);
        let cache = ideology::expand_top(&ranked, &full_cache);
        bundle.emit("top_urls.csv", |w| {
            writeln!(w, "rank,url,count,expanded")?;
            for (i, (url, count)) in ranked.iter().enumerate() {
                let expanded = cache.get(url).unwrap_or("");
                writeln!(w, "{},{},{count},{}", i + 1, csv_field(url), csv_field(expanded))?;
            }
            Ok(())
        })?;
        let seeds = ideology::seed_label(&corpus, &cache, &outlets);
        bundle.emit("seeds.csv", |w| seeds.write_csv(w))?;
        Ok(seeds)
    })?;

    let graph = stage("graph", || {
        let graph = graph::build(&corpus);
        log::info!("retweet graph: {} nodes, {} edges", graph.node_count(), graph.edge_count());
        Ok(graph)
    })?;

    let params = PropagationParams {
        max_iters: config.max_iters,
        rng_seed: stage_seed(config.rng_seed, "propagate"),
    };
    let leanings = stage("propagate", || match ideology::propagate(&graph, &seeds, params) {
        Ok(m) => Ok(m),
        Err(Error::EmptySeeds) => Ok(LeaningMap::default()),
        Err(e) => Err(e),
    })?;

    let groups = stage("groups", || {
        let groups = GroupMap::assign(&classes, &leanings);
        bundle.emit("accounts.csv", |w| {
            write_accounts(w, &classes, &scores, &leanings, &groups)
        })?;
        let activity = graph::tweets_per_user(&corpus, &groups);
        bundle.emit("group_activity.csv", |w| graph::write_activity_csv(w, &activity))?;
        Ok(groups)
    })?;

    stage("crossvalidate", || {
        let cv_params = PropagationParams {
            max_iters: config.max_iters,
            rng_seed: stage_seed(config.rng_seed, "crossvalidate"),
        };
        match ideology::crossvalidate(&graph, &seeds, config.folds, cv_params) {
            Ok(report) => bundle.emit("crossvalidation.csv", |w| report.write_csv(w)),
            Err(e @ (Error::InsufficientSeeds { .. } | Error::EmptySeeds)) => {
                bundle.emit("crossvalidation.csv", |w| note_csv(w, &format!("skipped: {e}")))
            }
            Err(e) => Err(e),
        }
    })?;

    let centrality = stage("centrality", || match graph::degree_centrality(&graph) {
        Ok(c) => {
            let rows = graph::group_centrality(&graph, &c, &groups);
            bundle.emit("centrality.csv", |w| graph::write_centrality_csv(w, &rows))?;
            Ok(Some(c))
        }
        Err(e @ Error::TooFewNodes(_)) => {
            bundle.emit("centrality.csv", |w| note_csv(w, &format!("skipped: {e}")))?;
            Ok(None)
        }
        Err(e) => Err(e),
    })?;

    let cores = stage("kcore", || {
        let cores = graph::core_numbers(&graph);
        let series = graph::core_series(&graph, &cores, &groups, config.k_max);
        bundle.emit("core_series.csv", |w| series.write_csv(w))?;
        Ok(cores)
    })?;

    stage("interactions", || {
        let m = graph::interaction_matrix(&graph, &groups);
        bundle.emit("interactions_counts.csv", |w| m.write_counts_csv(w))?;
        bundle.emit("interactions_overall.csv", |w| m.write_overall_csv(w))?;
        bundle.emit("interactions_row.csv", |w| m.write_row_csv(w))
    })?;

    stage("hashtags", || {
        let exclusions = match &config.general_hashtags {
            Some(p) => hashtags::exclusion_set(corpus::read_terms_file(p)?),
            None => hashtags::default_exclusions(),
        };
        for group in [Group::LiberalBot, Group::ConservativeBot] {
            let report = hashtags::hashtag_report(&corpus, &groups, group, config.hashtag_k, config.human_top, &exclusions);
            bundle.emit(&format!("hashtags_{group}.csv"), |w| report.write_csv(w))?;
        }
        Ok(())
    })?;

    stage("effectiveness", || {
        let reports: Vec<_> = Leaning::BOTH
            .iter()
            .map(|side| metrics::effectiveness(&corpus, &groups, *side))
            .collect();
        bundle.emit("effectiveness.csv", |w| metrics::write_reports_csv(w, &reports))
    })?;

    if config.export_graph {
        stage("export", || {
            bundle.emit("retweet_graph.tsv", |w| graph::write_edge_list(&graph, config.export_min_weight, w))?;
            let notes = graph::NodeAnnotations {
                groups: &groups,
                cores: &cores,
                centrality: centrality.as_ref(),
            };
            bundle.emit("retweet_graph.gexf", |w| graph::write_gexf(&graph, &notes, config.export_min_weight, w))
        })?;
    }

    stage("manifest", || bundle.finish())
}

fn write_accounts(
    w: &mut Vec<u8>,
    classes: &BTreeMap<String, AccountClass>,
    scores: &accounts::BotScoreTable,
    leanings: &LeaningMap,
    groups: &GroupMap,
) -> std::io::Result<()> {
    writeln!(w, "account_id,class,score,leaning,provenance,group")?;
    for (account, class) in classes {
        let score = scores.score(account).map_or_else(|| "NA".to_string(), |s| s.to_string());
        let leaning = leanings.leaning(account).map_or("unlabeled", Leaning::as_str);
        writeln!(
            w,
            "{},{class},{score},{leaning},{},{}",
            csv_field(account),
            leanings.provenance(account),
            groups.get(account)
        )?;
    }
    Ok(())
}

/// Reads a previously written manifest.
pub fn read_manifest(dir: &Path) -> Result<Manifest> {
    let path = dir.join(MANIFEST_FILE);
    let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))
}

/// Seeds are exposed for callers that want to rerun single stages.
pub fn seeds_for(corpus: &corpus::Corpus, config: &PipelineConfig) -> Result<SeedLabels> {
    let outlets = MediaOutletLists::load(&config.liberal_outlets, &config.conservative_outlets)?;
    let full = match &config.url_cache {
        Some(p) => UrlResolutionCache::load(p)?,
        None => UrlResolutionCache::new(),
    };
    let ranked = ideology::rank_urls(corpus, config.top_urls);
    Ok(ideology::seed_label(corpus, &ideology::expand_top(&ranked, &full), &outlets))
}
