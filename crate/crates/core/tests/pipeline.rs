use partisan_core::corpus::{ingest_path, FilterConfig, TweetKind};
use partisan_core::graph::{Group, GroupMap};
use partisan_core::pipeline::{self, read_manifest, PipelineConfig};
use partisan_core::scenario::{generate_scenario, ScenarioSpec};
use partisan_core::{Error, Leaning};
use std::collections::HashSet;
use std::path::{Path, PathBuf};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/scenario_500")
}

fn scenario_500(dir: &Path) -> PipelineConfig {
    let spec = ScenarioSpec::load(&fixture("scenario_500.toml")).unwrap();
    let out = generate_scenario(&spec, dir).unwrap();
    PipelineConfig::load(&out.config).unwrap()
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

#[test]
fn bundle_matches_golden() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = scenario_500(&tmp.path().join("inputs"));
    let out = tmp.path().join("out");
    let manifest = pipeline::run_all(&cfg, &out).unwrap();
    let golden = golden_dir();
    let mut names: Vec<String> = manifest.files.iter().map(|e| e.file.clone()).collect();
    names.push(pipeline::MANIFEST_FILE.into());
    if std::env::var_os("BLESS").is_some() {
        std::fs::create_dir_all(&golden).unwrap();
        for n in &names {
            std::fs::copy(out.join(n), golden.join(n)).unwrap();
        }
    }
    for n in &names {
        let want = std::fs::read(golden.join(n)).unwrap_or_else(|_| panic!("missing golden {n}; rerun with BLESS=1"));
        let got = std::fs::read(out.join(n)).unwrap();
        assert!(want == got, "{n} differs from golden");
    }
}

#[test]
fn effectiveness_report_matches_tally() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = scenario_500(&tmp.path().join("inputs"));
    let out = tmp.path().join("out");
    pipeline::run_all(&cfg, &out).unwrap();

    let groups = GroupMap::read_csv(
        csv_rows(&out.join("accounts.csv"))
            .iter()
            .fold("account_id,group\n".to_string(), |acc, r| acc + &format!("{},{}\n", r[0], r[5]))
            .as_bytes(),
    )
    .unwrap();
    let (corpus, _) = ingest_path(&cfg.corpus, &FilterConfig::default()).unwrap();
    for side in Leaning::BOTH {
        let (h, b) = (Group::human(side), Group::bot(side));
        let mine: Vec<_> = corpus.records().iter().filter(|r| groups.get(&r.author_id) == h).collect();
        let to_bot = |r: &&partisan_core::corpus::TweetRecord| {
            r.referenced_author_id.as_deref().map(|a| groups.get(a)) == Some(b)
        };
        let rts: Vec<_> = mine.iter().filter(|r| r.kind == TweetKind::Retweet).collect();
        let reps: Vec<_> = mine.iter().filter(|r| r.kind == TweetKind::Reply).collect();
        let hit: HashSet<&str> = rts
            .iter()
            .filter(|r| to_bot(r))
            .map(|r| r.referenced_tweet_id.as_deref().unwrap())
            .collect();
        let bot_tweets: Vec<_> = corpus
            .records()
            .iter()
            .filter(|r| groups.get(&r.author_id) == b && r.kind != TweetKind::Retweet)
            .collect();
        let expect = [
            ("rtp", rts.iter().filter(|r| to_bot(r)).count(), rts.len()),
            ("rr", reps.iter().filter(|r| to_bot(r)).count(), reps.len()),
            ("h2br", rts.iter().chain(&reps).filter(|r| to_bot(r)).count(), mine.len()),
            ("tsr", bot_tweets.iter().filter(|r| hit.contains(r.tweet_id.as_str())).count(), bot_tweets.len()),
        ];
        let rows = csv_rows(&out.join("effectiveness.csv"));
        for (metric, num, den) in expect {
            let row = rows.iter().find(|r| r[0] == side.as_str() && r[1] == metric).unwrap();
            assert_eq!((row[2].parse::<usize>().unwrap(), row[3].parse::<usize>().unwrap()), (num, den), "{side} {metric}");
        }
    }
}

#[test]
fn reruns_are_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = scenario_500(&tmp.path().join("inputs"));
    let a = pipeline::run_all(&cfg, &tmp.path().join("a")).unwrap();
    let b = pipeline::run_all(&cfg, &tmp.path().join("b")).unwrap();
    assert_eq!(a.digest(), b.digest());
    assert_eq!(read_manifest(&tmp.path().join("a")).unwrap(), a);
    for e in &a.files {
        assert!(tmp.path().join("a").join(&e.file).is_file(), "{} listed but missing", e.file);
    }
}

#[test]
fn empty_corpus_yields_full_bundle() {
    let tmp = tempfile::tempdir().unwrap();
    let p = |n: &str| tmp.path().join(n);
    std::fs::write(p("corpus.jsonl"), "").unwrap();
    std::fs::write(p("scores.csv"), "account_id,score\n").unwrap();
    std::fs::write(p("lib.txt"), "nytimes.com\n").unwrap();
    std::fs::write(p("con.txt"), "foxnews.com\n").unwrap();
    let cfg = PipelineConfig::new(p("corpus.jsonl"), p("scores.csv"), p("lib.txt"), p("con.txt"));
    let m = pipeline::run_all(&cfg, &p("out")).unwrap();
    for f in [
        "ingest_report.csv",
        "corpus_stats.csv",
        "accounts.csv",
        "group_activity.csv",
        "crossvalidation.csv",
        "centrality.csv",
        "core_series.csv",
        "interactions_row.csv",
        "hashtags_liberal-bots.csv",
        "effectiveness.csv",
    ] {
        assert!(m.get(f).is_some(), "{f} missing from manifest");
    }
    let eff = std::fs::read_to_string(p("out/effectiveness.csv")).unwrap();
    assert!(eff.lines().skip(1).all(|l| l.ends_with(",0,0,NA")), "{eff}");
    assert!(std::fs::read_to_string(p("out/crossvalidation.csv")).unwrap().contains("skipped"));
}

#[test]
fn failing_stage_is_tagged_and_keeps_earlier_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = scenario_500(&tmp.path().join("inputs"));
    // an outlet on both lists is rejected when seeding
    std::fs::write(&cfg.conservative_outlets, "foxnews.com\nnytimes.com\n").unwrap();
    cfg.export_graph = false;
    let out = tmp.path().join("out");
    match pipeline::run_all(&cfg, &out) {
        Err(Error::Stage { stage, .. }) => assert_eq!(stage, "seed"),
        other => panic!("expected a seed stage failure, got {other:?}"),
    }
    assert!(out.join("ingest_report.csv").is_file());
    assert!(out.join("score_histogram.csv").is_file());
    assert!(!out.join(pipeline::MANIFEST_FILE).exists());
}

#[test]
fn designed_rtp_is_recovered_through_inference() {
    let spec = ScenarioSpec::from_toml(
        r#"
rng_seed = 11
retweet_propensity = [
    [0.70, 0.25, 0.04, 0.01],
    [0.70, 0.25, 0.04, 0.01],
    [0.01, 0.04, 0.70, 0.25],
    [0.01, 0.04, 0.70, 0.25],
]
[liberal_human]
size = 600
originals = 2.0
retweets = 8.0
url_share = 0.3
[liberal_bot]
size = 120
originals = 6.0
retweets = 3.0
url_share = 0.3
[conservative_human]
size = 600
originals = 2.0
retweets = 8.0
url_share = 0.3
[conservative_bot]
size = 120
originals = 6.0
retweets = 3.0
url_share = 0.3
[human_scores]
kind = "uniform"
low = 0.0
high = 0.25
[bot_scores]
kind = "uniform"
low = 0.5
high = 1.0
"#,
    )
    .unwrap();
    let tmp = tempfile::tempdir().unwrap();
    let gen = generate_scenario(&spec, &tmp.path().join("inputs")).unwrap();
    let out = tmp.path().join("out");
    let mut cfg = PipelineConfig::load(&gen.config).unwrap();
    cfg.export_graph = false;
    pipeline::run_all(&cfg, &out).unwrap();
    for row in csv_rows(&out.join("effectiveness.csv")).iter().filter(|r| r[1] == "rtp") {
        let v: f64 = row[4].parse().unwrap();
        assert!((v - 0.25).abs() <= 0.02, "{} rtp {v}", row[0]);
    }
}
