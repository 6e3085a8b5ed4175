//! Bot-effectiveness ratios for one political side.
//!
//! With H the side's human accounts and B its bot accounts:
//!
//! - RTP: retweets by H of tweets authored by B, over all retweets by H.
//! - RR: replies by H to B, over all replies by H.
//! - H2BR: retweets of plus replies to B by H, over everything H authored.
//! - TSR: distinct tweets of B retweeted at least once by H, over the tweets B
//!   authored (originals and replies; retweets cannot be retweeted themselves).
//!
//! Retweet chains are credited to the origin's author as recorded in the record's
//! referenced author.

use crate::corpus::{Corpus, TweetKind};
use crate::graph::{Group, GroupMap};
use crate::report::{fmt_opt, ratio};
use crate::Leaning;
use std::collections::HashSet;
use std::fmt;
use std::io::Write;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scope {
    /// Humans and bots of one side only.
    Side(Leaning),
    /// Humans and bots of both sides pooled.
    BothSides,
}

impl Scope {
    fn humans(self, g: Group) -> bool {
        match self {
            Scope::Side(side) => g == Group::human(side),
            Scope::BothSides => matches!(g, Group::LiberalHuman | Group::ConservativeHuman),
        }
    }

    fn bots(self, g: Group) -> bool {
        match self {
            Scope::Side(side) => g == Group::bot(side),
            Scope::BothSides => g.is_bot(),
        }
    }
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scope::Side(s) => write!(f, "{s}"),
            Scope::BothSides => f.write_str("both"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Ratio {
    pub numerator: u64,
    pub denominator: u64,
}

impl Ratio {
    /// `None` when the denominator is zero.
    pub fn value(self) -> Option<f64> {
        ratio(self.numerator, self.denominator)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MetricOptions {
    pub scope: Scope,
    /// Drop human retweets/replies whose target is a residual account from the RTP and
    /// RR denominators. Off by default: denominators cover all human activity.
    pub exclude_residual_targets: bool,
}

impl MetricOptions {
    pub fn side(side: Leaning) -> Self {
        MetricOptions {
            scope: Scope::Side(side),
            exclude_residual_targets: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EffectivenessReport {
    pub scope: Scope,
    pub rtp: Ratio,
    pub rr: Ratio,
    pub h2br: Ratio,
    pub tsr: Ratio,
}

impl EffectivenessReport {
    pub fn metrics(&self) -> [(&'static str, Ratio); 4] {
        [("rtp", self.rtp), ("rr", self.rr), ("h2br", self.h2br), ("tsr", self.tsr)]
    }
}

/// Writes one row per (scope, metric) with numerator and denominator.
pub fn write_reports_csv<W: Write>(mut w: W, reports: &[EffectivenessReport]) -> std::io::Result<()> {
    writeln!(w, "side,metric,numerator,denominator,value")?;
    for r in reports {
        for (name, m) in r.metrics() {
            writeln!(w, "{},{name},{},{},{}", r.scope, m.numerator, m.denominator, fmt_opt(m.value()))?;
        }
    }
    Ok(())
}

pub fn effectiveness(corpus: &Corpus, groups: &GroupMap, side: Leaning) -> EffectivenessReport {
    effectiveness_with(corpus, groups, MetricOptions::side(side))
}

pub fn effectiveness_with(corpus: &Corpus, groups: &GroupMap, opts: MetricOptions) -> EffectivenessReport {
    let scope = opts.scope;
    let mut rtp = Ratio::default();
    let mut rr = Ratio::default();
    let mut h2br = Ratio::default();
    let mut retweeted: HashSet<&str> = HashSet::new();

    for r in corpus.records() {
        if !scope.humans(groups.get(&r.author_id)) {
            continue;
        }
        h2br.denominator += 1;
        let target = r.referenced_author_id.as_deref().map(|a| groups.get(a));
        let at_bot = target.is_some_and(|g| scope.bots(g));
        let counted = !(opts.exclude_residual_targets && target == Some(Group::Residual));
        match r.kind {
            TweetKind::Original => {}
            TweetKind::Retweet => {
                rtp.denominator += counted as u64;
                if at_bot {
                    rtp.numerator += 1;
                    h2br.numerator += 1;
                    if let Some(t) = r.referenced_tweet_id.as_deref() {
                        retweeted.insert(t);
                    }
                }
            }
            TweetKind::Reply => {
                rr.denominator += counted as u64;
                if at_bot {
                    rr.numerator += 1;
                    h2br.numerator += 1;
                }
            }
        }
    }

    let mut tsr = Ratio::default();
    for r in corpus.records() {
        if r.kind != TweetKind::Retweet && scope.bots(groups.get(&r.author_id)) {
            tsr.denominator += 1;
            if retweeted.contains(r.tweet_id.as_str()) {
                tsr.numerator += 1;
            }
        }
    }

    EffectivenessReport {
        scope,
        rtp,
        rr,
        h2br,
        tsr,
    }
}
