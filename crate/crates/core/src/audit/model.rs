use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use super::AuditError;

pub type Date = NaiveDate;

pub fn parse_date(s: &str) -> Option<Date> {
    NaiveDate::parse_from_str(s.trim(), "%Y-%m-%d").ok()
}

/// Closed interval with possibly unknown ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DateInterval {
    start: Option<Date>,
    end: Option<Date>,
}

impl DateInterval {
    pub fn new(start: Option<Date>, end: Option<Date>) -> Result<Self, AuditError> {
        if let (Some(s), Some(e)) = (start, end) {
            if e < s {
                return Err(AuditError::InvertedInterval { start: s, end: e });
            }
        }
        Ok(DateInterval { start, end })
    }

    pub fn closed(start: Date, end: Date) -> Result<Self, AuditError> {
        Self::new(Some(start), Some(end))
    }

    pub fn start(&self) -> Option<Date> {
        self.start
    }

    pub fn end(&self) -> Option<Date> {
        self.end
    }

    pub fn is_dated(&self) -> bool {
        self.start.is_some() || self.end.is_some()
    }

    /// Inclusive on both ends; unknown ends are unbounded.
    pub fn contains(&self, d: Date) -> bool {
        self.start.is_none_or(|s| s <= d) && self.end.is_none_or(|e| d <= e)
    }
}

macro_rules! string_enum {
    ($(#[$meta:meta])* $name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum $name { $($variant),+ }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self { $($name::$variant => $text),+ }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = AuditError;
            fn from_str(s: &str) -> Result<Self, AuditError> {
                let norm = s.trim().to_ascii_lowercase().replace([' ', '_'], "-");
                $name::ALL
                    .iter()
                    .copied()
                    .find(|v| v.as_str().eq_ignore_ascii_case(&norm))
                    .ok_or_else(|| AuditError::Parse(format!(
                        "unknown {} `{}`", stringify!($name).to_ascii_lowercase(), s
                    )))
            }
        }
    };
}

string_enum! {
    /// Political position, declared in figure order (left to right, then
    /// the two catch-all categories).
    Alignment {
        ExtremeLeft => "extreme-left",
        Left => "left",
        CentreLeft => "centre-left",
        Centre => "centre",
        CentreRight => "centre-right",
        Right => "right",
        ExtremeRight => "extreme-right",
        Other => "other",
        Unknown => "unknown",
    }
}

string_enum! {
    Relevance {
        Relevant => "relevant",
        NotRelevant => "not-relevant",
        Foreign => "foreign",
    }
}

string_enum! {
    /// Parliamentary body supplying the baseline.
    Body {
        Kvv => "KVV",
        Vp => "VP",
    }
}

string_enum! {
    Verdict {
        Over => "over",
        Under => "under",
        Indeterminate => "indeterminate",
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartyRecord {
    pub canonical_acronym: String,
    pub alignment: Alignment,
    pub relevance: Relevance,
}

impl PartyRecord {
    pub fn new(acronym: impl Into<String>, alignment: Alignment, relevance: Relevance) -> Self {
        PartyRecord {
            canonical_acronym: acronym.into(),
            alignment,
            relevance,
        }
    }
}

/// Stable sort by alignment category, then by acronym.
pub fn sort_parties(parties: &mut [PartyRecord]) {
    parties.sort_by(|a, b| {
        a.alignment
            .cmp(&b.alignment)
            .then_with(|| a.canonical_acronym.cmp(&b.canonical_acronym))
    });
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Affiliation {
    /// Canonical acronym after normalization.
    pub party: String,
    pub interval: Option<DateInterval>,
    pub relevance: Relevance,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoliticianRecord {
    pub id: String,
    pub label: String,
    pub affiliations: Vec<Affiliation>,
    /// Dated activity (positions, terms) not tied to a known party.
    pub activity: Vec<DateInterval>,
    pub death_date: Option<Date>,
    pub career_end_override: Option<Date>,
}

impl PoliticianRecord {
    pub fn new(id: impl Into<String>) -> Self {
        let id = id.into();
        PoliticianRecord {
            label: id.clone(),
            id,
            affiliations: Vec::new(),
            activity: Vec::new(),
            death_date: None,
            career_end_override: None,
        }
    }

    pub fn with_affiliation(
        mut self,
        party: &str,
        relevance: Relevance,
        interval: Option<DateInterval>,
    ) -> Self {
        self.affiliations.push(Affiliation {
            party: party.to_owned(),
            interval,
            relevance,
        });
        self
    }

    /// Relevant parties over the whole career.
    pub fn relevant_parties(&self) -> BTreeSet<&str> {
        self.affiliations
            .iter()
            .filter(|a| a.relevance == Relevance::Relevant)
            .map(|a| a.party.as_str())
            .collect()
    }

    pub fn intervals(&self) -> impl Iterator<Item = &DateInterval> {
        self.affiliations
            .iter()
            .filter_map(|a| a.interval.as_ref())
            .chain(self.activity.iter())
    }
}

/// Alias → canonical acronym, and canonical acronym → party facts.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct NormalizationMap {
    alias_to_canonical: BTreeMap<String, String>,
    canonical_to_party: BTreeMap<String, PartyRecord>,
}

fn percent_decode(s: &str) -> String {
    let bytes = s.as_bytes();
    let mut out = Vec::with_capacity(bytes.len());
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'%' && i + 2 < bytes.len() {
            let hex = std::str::from_utf8(&bytes[i + 1..i + 3]).ok();
            if let Some(b) = hex.and_then(|h| u8::from_str_radix(h, 16).ok()) {
                out.push(b);
                i += 3;
                continue;
            }
        }
        out.push(bytes[i]);
        i += 1;
    }
    String::from_utf8_lossy(&out).into_owned()
}

fn alias_key(s: &str) -> String {
    s.trim().to_lowercase()
}

/// Local name of an IRI, decoded and with underscores as spaces.
fn iri_local_name(s: &str) -> Option<String> {
    let s = s.trim();
    if !(s.starts_with("http://") || s.starts_with("https://")) {
        return None;
    }
    let tail = s.rsplit(['/', '#']).next()?;
    if tail.is_empty() {
        return None;
    }
    Some(percent_decode(tail).replace('_', " "))
}

impl NormalizationMap {
    pub fn new(parties: Vec<PartyRecord>) -> Self {
        let mut map = NormalizationMap::default();
        for p in parties {
            map.canonical_to_party
                .insert(p.canonical_acronym.clone(), p);
        }
        map
    }

    /// Adds an alias; its canonical acronym must already be known.
    pub fn add_alias(&mut self, alias: &str, canonical: &str) -> Result<(), AuditError> {
        if !self.canonical_to_party.contains_key(canonical) {
            return Err(AuditError::Parse(format!(
                "alias `{alias}` maps to `{canonical}`, which has no party entry"
            )));
        }
        self.alias_to_canonical
            .insert(alias_key(alias), canonical.to_owned());
        Ok(())
    }

    pub fn party(&self, canonical: &str) -> Option<&PartyRecord> {
        self.canonical_to_party.get(canonical)
    }

    pub fn parties(&self) -> impl Iterator<Item = &PartyRecord> {
        self.canonical_to_party.values()
    }

    /// Relevant parties in figure order.
    pub fn relevant_parties(&self) -> Vec<PartyRecord> {
        let mut v: Vec<PartyRecord> = self
            .parties()
            .filter(|p| p.relevance == Relevance::Relevant)
            .cloned()
            .collect();
        sort_parties(&mut v);
        v
    }

    /// Resolves a raw party reference (IRI, label or acronym).
    ///
    /// Tries the reference itself, then, for IRIs, the decoded local name.
    /// Matching is case-insensitive; canonical acronyms resolve to themselves.
    pub fn resolve(&self, raw: &str) -> Option<&PartyRecord> {
        let lookup = |key: &str| {
            self.alias_to_canonical
                .get(&alias_key(key))
                .and_then(|c| self.canonical_to_party.get(c))
                .or_else(|| {
                    self.canonical_to_party
                        .values()
                        .find(|p| alias_key(&p.canonical_acronym) == alias_key(key))
                })
        };
        lookup(raw).or_else(|| iri_local_name(raw).and_then(|n| lookup(&n)))
    }

    /// Loads `alias,canonical_acronym` and `canonical_acronym,alignment,relevance`.
    pub fn load(aliases: &Path, parties: &Path) -> Result<Self, AuditError> {
        let mut records = Vec::new();
        for rec in read_records(parties, &["canonical_acronym", "alignment", "relevance"])? {
            records.push(PartyRecord {
                canonical_acronym: rec[0].clone(),
                alignment: rec[1].parse()?,
                relevance: rec[2].parse()?,
            });
        }
        let mut map = NormalizationMap::new(records);
        for rec in read_records(aliases, &["alias", "canonical_acronym"])? {
            map.add_alias(&rec[0], &rec[1])?;
        }
        Ok(map)
    }
}

pub(crate) fn read_records(path: &Path, header: &[&str]) -> Result<Vec<Vec<String>>, AuditError> {
    let io = |e: &dyn fmt::Display| AuditError::Io(format!("{}: {e}", path.display()));
    let mut rdr = csv::Reader::from_path(path).map_err(|e| io(&e))?;
    let found: Vec<String> = rdr
        .headers()
        .map_err(|e| io(&e))?
        .iter()
        .map(|h| h.trim().to_owned())
        .collect();
    if found != header {
        return Err(io(&format!(
            "header `{}`, expected `{}`",
            found.join(","),
            header.join(",")
        )));
    }
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| io(&e))?;
        out.push(rec.iter().map(|f| f.trim().to_owned()).collect());
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Election {
    pub seats: BTreeMap<String, u32>,
    pub total_seats: u32,
}

/// Seats per party at each election of one parliamentary body.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaselineTable {
    pub body: Body,
    pub elections: BTreeMap<Date, Election>,
}

impl BaselineTable {
    pub fn new(body: Body) -> Self {
        BaselineTable {
            body,
            elections: BTreeMap::new(),
        }
    }

    pub fn add_election(
        &mut self,
        date: Date,
        total_seats: u32,
        seats: impl IntoIterator<Item = (String, u32)>,
    ) -> Result<(), AuditError> {
        let seats: BTreeMap<String, u32> = seats.into_iter().collect();
        let sum: u32 = seats.values().sum();
        if total_seats == 0 || sum > total_seats {
            return Err(AuditError::Parse(format!(
                "{} election {date}: {sum} party seats vs {total_seats} total",
                self.body
            )));
        }
        self.elections.insert(date, Election { seats, total_seats });
        Ok(())
    }

    /// Reads `body,election_date,canonical_acronym,seats,total_seats`; one
    /// table per body present in the file.
    pub fn load_all(path: &Path) -> Result<BTreeMap<Body, BaselineTable>, AuditError> {
        type Key = (Body, Date);
        let mut grouped: BTreeMap<Key, (u32, Vec<(String, u32)>)> = BTreeMap::new();
        let header = ["body", "election_date", "canonical_acronym", "seats", "total_seats"];
        for rec in read_records(path, &header)? {
            let body: Body = rec[0].parse()?;
            let date = parse_date(&rec[1])
                .ok_or_else(|| AuditError::Parse(format!("bad election date `{}`", rec[1])))?;
            let num = |s: &str| {
                s.parse::<u32>()
                    .map_err(|_| AuditError::Parse(format!("bad seat count `{s}`")))
            };
            let seats = num(&rec[3])?;
            let total = num(&rec[4])?;
            let entry = grouped.entry((body, date)).or_insert((total, Vec::new()));
            if entry.0 != total {
                return Err(AuditError::Parse(format!(
                    "{body} election {date}: inconsistent total_seats"
                )));
            }
            entry.1.push((rec[2].clone(), seats));
        }
        let mut out: BTreeMap<Body, BaselineTable> = BTreeMap::new();
        for ((body, date), (total, seats)) in grouped {
            out.entry(body)
                .or_insert_with(|| BaselineTable::new(body))
                .add_election(date, total, seats)?;
        }
        Ok(out)
    }
}

/// An audit date; normally 1 January of an audit year.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TimePoint(pub Date);

impl TimePoint {
    pub fn year(y: i32) -> Self {
        TimePoint(NaiveDate::from_ymd_opt(y, 1, 1).expect("valid year"))
    }

    pub fn date(&self) -> Date {
        self.0
    }
}

impl fmt::Display for TimePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.format("%Y-%m-%d"))
    }
}

/// The seven audit dates used by default: 1990, 1996, 2000, 2005, 2011,
/// 2015 and 2020; 1996 and 2011 follow the 1995 and 2010 general elections.
pub fn default_schedule() -> Vec<TimePoint> {
    [1990, 1996, 2000, 2005, 2011, 2015, 2020]
        .into_iter()
        .map(TimePoint::year)
        .collect()
}

/// Parses `1990,1996,...` (years) or full dates.
pub fn parse_schedule(s: &str) -> Result<Vec<TimePoint>, AuditError> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let tp = if let Ok(y) = part.parse::<i32>() {
            NaiveDate::from_ymd_opt(y, 1, 1).map(TimePoint)
        } else {
            parse_date(part).map(TimePoint)
        };
        out.push(tp.ok_or_else(|| AuditError::Parse(format!("bad schedule entry `{part}`")))?);
    }
    if out.is_empty() {
        return Err(AuditError::Parse("empty schedule".into()));
    }
    out.sort();
    out.dedup();
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VisibilityBounds {
    pub canonical_acronym: String,
    #[serde(skip)]
    pub time_point: Option<TimePoint>,
    pub lower_count: usize,
    pub upper_count: usize,
    pub lower_share: f64,
    pub upper_share: f64,
    pub active_total: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RepresentationVerdict {
    pub canonical_acronym: String,
    pub time_point: Option<TimePoint>,
    pub verdict: Verdict,
    pub baseline_share: f64,
    pub bounds: VisibilityBounds,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> Date {
        parse_date(s).unwrap()
    }

    #[test]
    fn interval_invariant() {
        assert!(DateInterval::closed(d("2005-01-01"), d("2001-01-01")).is_err());
        let i = DateInterval::closed(d("1995-01-01"), d("2010-01-01")).unwrap();
        assert!(i.contains(d("1995-01-01")));
        assert!(i.contains(d("2010-01-01")));
        assert!(!i.contains(d("2010-01-02")));
    }

    #[test]
    fn enums_parse_loosely() {
        assert_eq!("Centre Right".parse::<Alignment>().unwrap(), Alignment::CentreRight);
        assert_eq!("not_relevant".parse::<Relevance>().unwrap(), Relevance::NotRelevant);
        assert_eq!("kvv".parse::<Body>().unwrap(), Body::Kvv);
        assert!("far-left".parse::<Alignment>().is_err());
    }

    #[test]
    fn alias_resolution() {
        let mut m = NormalizationMap::new(vec![PartyRecord::new(
            "N-VA",
            Alignment::Right,
            Relevance::Relevant,
        )]);
        m.add_alias("Volksunie", "N-VA").unwrap();
        m.add_alias("New Flemish Alliance", "N-VA").unwrap();
        assert!(m.add_alias("X", "CD&V").is_err());
        for raw in [
            "N-VA",
            "n-va",
            " Volksunie ",
            "http://dbpedia.org/resource/New_Flemish_Alliance",
            "http://nl.dbpedia.org/resource/Volksunie",
        ] {
            assert_eq!(m.resolve(raw).map(|p| p.canonical_acronym.as_str()), Some("N-VA"), "{raw}");
        }
        assert!(m.resolve("http://dbpedia.org/resource/Groen").is_none());
    }

    #[test]
    fn percent_decoding() {
        assert_eq!(percent_decode("Christen-Democratisch_%26_Vlaams"), "Christen-Democratisch_&_Vlaams");
        assert_eq!(percent_decode("100%"), "100%");
        assert_eq!(percent_decode("Belgi%C3%AB"), "België");
    }

    #[test]
    fn schedules() {
        assert_eq!(default_schedule().len(), 7);
        let s = parse_schedule("2020, 1990,2020").unwrap();
        assert_eq!(s, vec![TimePoint::year(1990), TimePoint::year(2020)]);
        assert!(parse_schedule("").is_err());
        assert!(parse_schedule("19x0").is_err());
    }

    #[test]
    fn party_order() {
        let mut v = vec![
            PartyRecord::new("X", Alignment::Right, Relevance::Relevant),
            PartyRecord::new("U", Alignment::Unknown, Relevance::Relevant),
            PartyRecord::new("Y", Alignment::Centre, Relevance::Relevant),
            PartyRecord::new("Z", Alignment::ExtremeLeft, Relevance::Relevant),
        ];
        sort_parties(&mut v);
        let names: Vec<_> = v.iter().map(|p| p.canonical_acronym.as_str()).collect();
        assert_eq!(names, ["Z", "Y", "X", "U"]);
    }
}
