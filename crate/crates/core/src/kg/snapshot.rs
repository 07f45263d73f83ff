//! Politician and party snapshots ("represented now") as flat CSV files.

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::io;
use std::path::Path;

use log::{info, warn};
use serde::{Deserialize, Serialize};

use super::client::SparqlClient;
use super::template::TemplateCatalog;
use super::{Dialect, KgError, ResultTable};

pub const POLITICIANS_CSV: &str = "politicians.csv";
pub const PARTIES_CSV: &str = "parties.csv";

pub const POLITICIANS_HEADER: &str =
    "source,politician_id,label,party_id,aff_start,aff_end,death_date,position,retrieved_at";
pub const PARTIES_HEADER: &str = "source,party_id,label,country,raw_alignment,retrieved_at";

/// One (politician, affiliation) row. Empty strings mean "unknown".
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PoliticianRow {
    pub source: String,
    pub politician_id: String,
    pub label: String,
    pub party_id: String,
    pub aff_start: String,
    pub aff_end: String,
    pub death_date: String,
    pub position: String,
    pub retrieved_at: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PartyRow {
    pub source: String,
    pub party_id: String,
    pub label: String,
    pub country: String,
    pub raw_alignment: String,
    pub retrieved_at: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DateRole {
    Start,
    End,
}

/// Normalizes the date shapes found in DBpedia and Wikidata to `YYYY-MM-DD`.
///
/// Accepts `xsd:date`, `xsd:dateTime` (Wikidata's leading `+` included) and
/// bare years; a bare year maps to 1 January as a start and 31 December as an
/// end. Anything else yields `None`.
pub fn normalize_date(raw: &str, role: DateRole) -> Option<String> {
    let s = raw.trim().trim_start_matches('+');
    if s.len() == 4 && s.bytes().all(|b| b.is_ascii_digit()) {
        return Some(match role {
            DateRole::Start => format!("{s}-01-01"),
            DateRole::End => format!("{s}-12-31"),
        });
    }
    let head = s.get(..10)?;
    chrono::NaiveDate::parse_from_str(head, "%Y-%m-%d")
        .ok()
        .map(|d| d.format("%Y-%m-%d").to_string())
}

fn cell<'a>(table: &'a ResultTable, row: usize, var: &str) -> &'a str {
    table.value(row, var).unwrap_or("")
}

fn date_cell(table: &ResultTable, row: usize, var: &str, role: DateRole) -> String {
    let raw = cell(table, row, var);
    if raw.is_empty() {
        return String::new();
    }
    normalize_date(raw, role).unwrap_or_else(|| {
        warn!("unparseable date `{raw}` in `{var}`; left empty");
        String::new()
    })
}

/// Politicians with one row per (politician, affiliation).
pub fn fetch_politicians(
    client: &SparqlClient,
    catalog: &TemplateCatalog,
    retrieved_at: &str,
) -> Result<Vec<PoliticianRow>, KgError> {
    let dialect = client.endpoint().dialect;
    let template = catalog.get("politicians", dialect)?;
    let table = client.execute_query(template, &BTreeMap::new())?;
    let mut seen = HashSet::new();
    let mut rows = Vec::new();
    for i in 0..table.rows.len() {
        let row = PoliticianRow {
            source: dialect.as_str().to_owned(),
            politician_id: cell(&table, i, "politician").to_owned(),
            label: cell(&table, i, "label").to_owned(),
            party_id: cell(&table, i, "party").to_owned(),
            aff_start: date_cell(&table, i, "start", DateRole::Start),
            aff_end: date_cell(&table, i, "end", DateRole::End),
            death_date: date_cell(&table, i, "death", DateRole::End),
            position: cell(&table, i, "position").to_owned(),
            retrieved_at: retrieved_at.to_owned(),
        };
        if row.politician_id.is_empty() {
            continue;
        }
        if seen.insert(row.clone()) {
            rows.push(row);
        }
    }
    info!("{dialect}: {} politician rows", rows.len());
    Ok(rows)
}

fn party_rows(table: &ResultTable, dialect: Dialect, retrieved_at: &str) -> Vec<PartyRow> {
    let mut seen = HashSet::new();
    let mut rows = Vec::new();
    for i in 0..table.rows.len() {
        let row = PartyRow {
            source: dialect.as_str().to_owned(),
            party_id: cell(table, i, "party").to_owned(),
            label: cell(table, i, "label").to_owned(),
            country: cell(table, i, "country").to_owned(),
            raw_alignment: cell(table, i, "alignment").to_owned(),
            retrieved_at: retrieved_at.to_owned(),
        };
        if !row.party_id.is_empty() && seen.insert(row.clone()) {
            rows.push(row);
        }
    }
    rows
}

/// Parties located in Belgium. Dutch DBpedia answers the direct type +
/// country query with nothing, so there the party-property workaround runs
/// whenever the direct query is empty.
pub fn fetch_parties(
    client: &SparqlClient,
    catalog: &TemplateCatalog,
    retrieved_at: &str,
) -> Result<Vec<PartyRow>, KgError> {
    let dialect = client.endpoint().dialect;
    let direct = client.execute_query(catalog.get("parties", dialect)?, &BTreeMap::new())?;
    let mut rows = party_rows(&direct, dialect, retrieved_at);
    if rows.is_empty() && dialect == Dialect::NlDbpedia {
        info!("nl-dbpedia: direct party query empty, using party-property workaround");
        let via = client.execute_query(
            catalog.get("parties-via-party-property", dialect)?,
            &BTreeMap::new(),
        )?;
        rows = party_rows(&via, dialect, retrieved_at);
    }
    info!("{dialect}: {} party rows", rows.len());
    Ok(rows)
}

/// Politicians and parties of one or more sources, plus optional curated
/// career-end overrides.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Snapshot {
    pub politicians: Vec<PoliticianRow>,
    pub parties: Vec<PartyRow>,
    /// politician id → curated end of political career (`YYYY-MM-DD`).
    pub career_end_overrides: BTreeMap<String, String>,
}

pub const OVERRIDES_CSV: &str = "career_end_overrides.csv";

fn io_err(path: &Path, e: impl std::fmt::Display) -> KgError {
    KgError::Io(format!("{}: {e}", path.display()))
}

fn read_csv<T: for<'de> Deserialize<'de>>(path: &Path, header: &str) -> Result<Vec<T>, KgError> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| io_err(path, e))?;
    let found = rdr
        .headers()
        .map_err(|e| io_err(path, e))?
        .iter()
        .collect::<Vec<_>>()
        .join(",");
    if found != header {
        return Err(io_err(path, format!("header `{found}`, expected `{header}`")));
    }
    rdr.deserialize()
        .collect::<Result<Vec<T>, _>>()
        .map_err(|e| io_err(path, e))
}

pub fn csv_bytes<T: Serialize>(header: &str, rows: &[T]) -> Vec<u8> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header.split(',')).expect("in-memory write");
    for r in rows {
        w.serialize(r).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

impl Snapshot {
    pub fn politicians_csv(&self) -> Vec<u8> {
        csv_bytes(POLITICIANS_HEADER, &self.politicians)
    }

    pub fn parties_csv(&self) -> Vec<u8> {
        csv_bytes(PARTIES_HEADER, &self.parties)
    }

    /// Reads `politicians.csv`, `parties.csv` and, when present,
    /// `career_end_overrides.csv` (`politician_id,career_end`).
    pub fn load(dir: &Path) -> Result<Self, KgError> {
        let politicians = read_csv(&dir.join(POLITICIANS_CSV), POLITICIANS_HEADER)?;
        let parties_path = dir.join(PARTIES_CSV);
        let parties = if parties_path.exists() {
            read_csv(&parties_path, PARTIES_HEADER)?
        } else {
            Vec::new()
        };
        let mut career_end_overrides = BTreeMap::new();
        let ov = dir.join(OVERRIDES_CSV);
        if ov.exists() {
            let mut rdr = csv::Reader::from_path(&ov).map_err(|e| io_err(&ov, e))?;
            for rec in rdr.records() {
                let rec = rec.map_err(|e| io_err(&ov, e))?;
                if let (Some(id), Some(date)) = (rec.get(0), rec.get(1)) {
                    career_end_overrides.insert(id.to_owned(), date.to_owned());
                }
            }
        }
        Ok(Snapshot {
            politicians,
            parties,
            career_end_overrides,
        })
    }

    /// Loads and concatenates several snapshot directories.
    pub fn load_all<P: AsRef<Path>>(dirs: &[P]) -> Result<Self, KgError> {
        let mut out = Snapshot::default();
        for d in dirs {
            let s = Self::load(d.as_ref())?;
            out.politicians.extend(s.politicians);
            out.parties.extend(s.parties);
            out.career_end_overrides.extend(s.career_end_overrides);
        }
        Ok(out)
    }

    /// Writes both CSVs through temporary files so that a failure never
    /// leaves a half-written snapshot behind.
    pub fn write(&self, dir: &Path) -> Result<(), KgError> {
        fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
        let files = [
            (dir.join(POLITICIANS_CSV), self.politicians_csv()),
            (dir.join(PARTIES_CSV), self.parties_csv()),
        ];
        let mut staged = Vec::new();
        let result = (|| -> io::Result<()> {
            for (path, bytes) in &files {
                let tmp = path.with_extension("csv.tmp");
                fs::write(&tmp, bytes)?;
                staged.push((tmp, path.clone()));
            }
            for (tmp, path) in &staged {
                fs::rename(tmp, path)?;
            }
            Ok(())
        })();
        if let Err(e) = result {
            for (tmp, _) in &staged {
                let _ = fs::remove_file(tmp);
            }
            return Err(io_err(dir, e));
        }
        Ok(())
    }
}
