use super::{Group, GroupMap};
use crate::corpus::{Corpus, TweetKind};
use crate::report::{fmt_opt, ratio};
use std::io::Write;

/// Records authored by one group's accounts.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupActivity {
    pub group: Group,
    pub accounts: u64,
    pub originals: u64,
    pub retweets: u64,
    pub replies: u64,
}

impl GroupActivity {
    pub fn records(&self) -> u64 {
        self.originals + self.retweets + self.replies
    }

    /// Records per account; undefined for an empty group.
    pub fn per_user(&self) -> Option<f64> {
        ratio(self.records(), self.accounts)
    }
}

/// Activity per group, in [`Group::ALL`] order. Group sizes come from the group map.
pub fn tweets_per_user(corpus: &Corpus, groups: &GroupMap) -> Vec<GroupActivity> {
    let sizes = groups.counts();
    let mut out: Vec<GroupActivity> = Group::ALL
        .iter()
        .zip(sizes)
        .map(|(&group, accounts)| GroupActivity {
            group,
            accounts,
            originals: 0,
            retweets: 0,
            replies: 0,
        })
        .collect();
    for r in corpus.records() {
        let g = groups.get(&r.author_id);
        let slot = &mut out[Group::ALL.iter().position(|x| *x == g).expect("group listed")];
        match r.kind {
            TweetKind::Original => slot.originals += 1,
            TweetKind::Retweet => slot.retweets += 1,
            TweetKind::Reply => slot.replies += 1,
        }
    }
    out
}

/// Group sizes and volumes with their shares of all accounts / all records.
pub fn write_activity_csv<W: Write>(mut w: W, rows: &[GroupActivity]) -> std::io::Result<()> {
    let accounts: u64 = rows.iter().map(|r| r.accounts).sum();
    let records: u64 = rows.iter().map(GroupActivity::records).sum();
    writeln!(
        w,
        "group,accounts,account_share,originals,retweets,replies,records,record_share,records_per_account"
    )?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            r.group,
            r.accounts,
            fmt_opt(ratio(r.accounts, accounts)),
            r.originals,
            r.retweets,
            r.replies,
            r.records(),
            fmt_opt(ratio(r.records(), records)),
            fmt_opt(r.per_user()),
        )?;
    }
    Ok(())
}
