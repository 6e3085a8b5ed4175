use crate::accounts::AccountClass;
use crate::ideology::LeaningMap;
use crate::{Error, Leaning, Result};
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

/// Bot class crossed with political leaning. Accounts missing either are `Residual`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Group {
    LiberalHuman,
    LiberalBot,
    ConservativeHuman,
    ConservativeBot,
    Residual,
}

impl Group {
    /// The four partisan groups, in matrix order.
    pub const PARTISAN: [Group; 4] = [
        Group::LiberalHuman,
        Group::LiberalBot,
        Group::ConservativeHuman,
        Group::ConservativeBot,
    ];

    pub const ALL: [Group; 5] = [
        Group::LiberalHuman,
        Group::LiberalBot,
        Group::ConservativeHuman,
        Group::ConservativeBot,
        Group::Residual,
    ];

    pub fn from_parts(class: AccountClass, leaning: Option<Leaning>) -> Group {
        match (class, leaning) {
            (AccountClass::Human, Some(Leaning::Liberal)) => Group::LiberalHuman,
            (AccountClass::Bot, Some(Leaning::Liberal)) => Group::LiberalBot,
            (AccountClass::Human, Some(Leaning::Conservative)) => Group::ConservativeHuman,
            (AccountClass::Bot, Some(Leaning::Conservative)) => Group::ConservativeBot,
            _ => Group::Residual,
        }
    }

    pub fn human(side: Leaning) -> Group {
        Group::from_parts(AccountClass::Human, Some(side))
    }

    pub fn bot(side: Leaning) -> Group {
        Group::from_parts(AccountClass::Bot, Some(side))
    }

    /// Row/column of this group in a 4x4 interaction matrix.
    pub fn partisan_index(self) -> Option<usize> {
        Group::PARTISAN.iter().position(|g| *g == self)
    }

    pub fn leaning(self) -> Option<Leaning> {
        match self {
            Group::LiberalHuman | Group::LiberalBot => Some(Leaning::Liberal),
            Group::ConservativeHuman | Group::ConservativeBot => Some(Leaning::Conservative),
            Group::Residual => None,
        }
    }

    pub fn is_bot(self) -> bool {
        matches!(self, Group::LiberalBot | Group::ConservativeBot)
    }

    /// The human group of the same side, for bot groups.
    pub fn human_counterpart(self) -> Option<Group> {
        match self {
            Group::LiberalBot => Some(Group::LiberalHuman),
            Group::ConservativeBot => Some(Group::ConservativeHuman),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Group::LiberalHuman => "liberal-humans",
            Group::LiberalBot => "liberal-bots",
            Group::ConservativeHuman => "conservative-humans",
            Group::ConservativeBot => "conservative-bots",
            Group::Residual => "residual",
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Group {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace(['_', ' '], "-");
        Group::ALL
            .into_iter()
            .find(|g| {
                let name = g.as_str();
                norm == name || norm == name.trim_end_matches('s')
            })
            .ok_or_else(|| Error::Parse(format!("unknown group `{s}`")))
    }
}

/// Account -> group. Accounts not present are treated as `Residual`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GroupMap {
    groups: HashMap<String, Group>,
}

impl GroupMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Combines account classes with inferred leanings. Every classified account gets
    /// an entry; accounts with a leaning but no class are recorded as `Residual`.
    pub fn assign(classes: &BTreeMap<String, AccountClass>, leanings: &LeaningMap) -> GroupMap {
        let mut groups: HashMap<String, Group> = classes
            .iter()
            .map(|(a, c)| (a.clone(), Group::from_parts(*c, leanings.leaning(a))))
            .collect();
        for (account, _) in leanings.iter() {
            groups.entry(account.to_string()).or_insert(Group::Residual);
        }
        GroupMap { groups }
    }

    pub fn insert(&mut self, account: impl Into<String>, group: Group) {
        self.groups.insert(account.into(), group);
    }

    pub fn get(&self, account: &str) -> Group {
        self.groups.get(account).copied().unwrap_or(Group::Residual)
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Group)> {
        self.groups.iter().map(|(a, g)| (a.as_str(), *g))
    }

    pub fn members(&self, group: Group) -> impl Iterator<Item = &str> {
        self.iter().filter(move |(_, g)| *g == group).map(|(a, _)| a)
    }

    /// Number of accounts per group, in [`Group::ALL`] order.
    pub fn counts(&self) -> [u64; 5] {
        let mut out = [0u64; 5];
        for g in self.groups.values() {
            out[Group::ALL.iter().position(|x| x == g).expect("group listed")] += 1;
        }
        out
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "account_id,group")?;
        let sorted: BTreeMap<&str, Group> = self.iter().collect();
        for (a, g) in sorted {
            writeln!(w, "{},{g}", crate::report::csv_field(a))?;
        }
        Ok(())
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<GroupMap> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let mut out = GroupMap::new();
        for row in rdr.records() {
            let row = row?;
            let account = row.get(0).unwrap_or("");
            if account.is_empty() {
                continue;
            }
            out.insert(account, row.get(1).unwrap_or("").parse()?);
        }
        Ok(out)
    }
}

impl FromIterator<(String, Group)> for GroupMap {
    fn from_iter<T: IntoIterator<Item = (String, Group)>>(iter: T) -> Self {
        GroupMap {
            groups: iter.into_iter().collect(),
        }
    }
}
