use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use super::model::{parse_date, NormalizationMap, Relevance};
use crate::kg::Snapshot;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FindingKind {
    /// Same resource used both as a politician and as a party.
    TypeConflict,
    InvertedInterval,
    DeathBeforeStart,
    NoRelevantAffiliation,
}

impl FindingKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FindingKind::TypeConflict => "type-conflict",
            FindingKind::InvertedInterval => "inverted-interval",
            FindingKind::DeathBeforeStart => "death-before-start",
            FindingKind::NoRelevantAffiliation => "no-relevant-affiliation",
        }
    }
}

impl fmt::Display for FindingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Finding {
    pub kind: FindingKind,
    pub source: String,
    pub subject: String,
    pub detail: String,
}

pub const FINDINGS_HEADER: &str = "kind,source,subject,detail";

/// Data-quality findings, sorted and deduplicated.
///
/// Without a normalization map, "no relevant affiliation" degrades to "no
/// party reference at all".
pub fn validate_snapshot(snapshot: &Snapshot, map: Option<&NormalizationMap>) -> Vec<Finding> {
    let mut out = BTreeSet::new();
    let mut push = |kind, source: &str, subject: &str, detail: String| {
        out.insert(Finding {
            kind,
            source: source.to_owned(),
            subject: subject.to_owned(),
            detail,
        });
    };

    let party_ids: BTreeSet<(&str, &str)> = snapshot
        .politicians
        .iter()
        .map(|r| (r.source.as_str(), r.party_id.trim()))
        .chain(
            snapshot
                .parties
                .iter()
                .map(|p| (p.source.as_str(), p.party_id.trim())),
        )
        .filter(|(_, id)| !id.is_empty())
        .collect();

    struct Career<'a> {
        earliest_start: Option<chrono::NaiveDate>,
        death: Option<chrono::NaiveDate>,
        death_raw: &'a str,
        has_relevant: bool,
    }
    let mut careers: BTreeMap<(&str, &str), Career> = BTreeMap::new();

    for row in &snapshot.politicians {
        let id = row.politician_id.trim();
        if id.is_empty() {
            continue;
        }
        let src = row.source.as_str();
        if party_ids.contains(&(src, id)) {
            push(
                FindingKind::TypeConflict,
                src,
                id,
                "listed as a politician and as a party".into(),
            );
        }
        let start = parse_date(&row.aff_start);
        if let (Some(s), Some(e)) = (start, parse_date(&row.aff_end)) {
            if e < s {
                push(
                    FindingKind::InvertedInterval,
                    src,
                    id,
                    format!("{} ({} .. {})", row.party_id.trim(), row.aff_start, row.aff_end),
                );
            }
        }
        let party = row.party_id.trim();
        let relevant = match map {
            Some(m) => m
                .resolve(party)
                .is_some_and(|p| p.relevance == Relevance::Relevant),
            None => !party.is_empty(),
        };
        let c = careers.entry((src, id)).or_insert(Career {
            earliest_start: None,
            death: None,
            death_raw: "",
            has_relevant: false,
        });
        c.earliest_start = match (c.earliest_start, start) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        if c.death.is_none() {
            c.death = parse_date(&row.death_date);
            c.death_raw = row.death_date.as_str();
        }
        c.has_relevant |= relevant;
    }

    for ((src, id), c) in &careers {
        if let (Some(death), Some(start)) = (c.death, c.earliest_start) {
            if death < start {
                push(
                    FindingKind::DeathBeforeStart,
                    src,
                    id,
                    format!("died {} before first affiliation {start}", c.death_raw),
                );
            }
        }
        if !c.has_relevant {
            push(
                FindingKind::NoRelevantAffiliation,
                src,
                id,
                String::new(),
            );
        }
    }
    out.into_iter().collect()
}

pub fn findings_csv(findings: &[Finding]) -> Vec<u8> {
    crate::kg::csv_bytes(FINDINGS_HEADER, findings)
}
