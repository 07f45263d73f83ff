use std::collections::BTreeMap;

use log::warn;

use super::model::{parse_date, Affiliation, DateInterval, NormalizationMap, PoliticianRecord};
use crate::kg::PoliticianRow;

/// Politicians after alias resolution, plus what could not be resolved.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Normalized {
    /// Sorted by politician id.
    pub politicians: Vec<PoliticianRecord>,
    /// Raw party reference → number of rows carrying it.
    pub unmapped: BTreeMap<String, usize>,
    /// (politician id, raw start, raw end) of rows whose interval was unusable.
    pub rejected_intervals: Vec<(String, String, String)>,
}

impl Normalized {
    pub fn unmapped_rows(&self) -> usize {
        self.unmapped.values().sum()
    }
}

fn row_interval(row: &PoliticianRow) -> Result<Option<DateInterval>, ()> {
    let start = parse_date(&row.aff_start);
    let end = parse_date(&row.aff_end);
    if start.is_none() && end.is_none() {
        return Ok(None);
    }
    DateInterval::new(start, end).map(Some).map_err(|_| ())
}

/// Groups snapshot rows by politician and collapses party aliases onto
/// canonical acronyms.
///
/// Affiliations to not-relevant or foreign parties are kept with their
/// relevance so that bounds can skip them. Rows with an unresolvable party
/// still count as dated activity. Identical (party, interval) pairs merge.
pub fn normalize_affiliations(
    rows: &[PoliticianRow],
    map: &NormalizationMap,
    career_end_overrides: &BTreeMap<String, String>,
) -> Normalized {
    let mut out = Normalized::default();
    let mut by_id: BTreeMap<&str, PoliticianRecord> = BTreeMap::new();

    for row in rows {
        let id = row.politician_id.trim();
        if id.is_empty() {
            continue;
        }
        let rec = by_id.entry(id).or_insert_with(|| PoliticianRecord::new(id));
        if rec.label == rec.id && !row.label.trim().is_empty() {
            rec.label = row.label.trim().to_owned();
        }
        if rec.death_date.is_none() {
            rec.death_date = parse_date(&row.death_date);
        }

        let interval = match row_interval(row) {
            Ok(i) => i,
            Err(()) => {
                out.rejected_intervals.push((
                    id.to_owned(),
                    row.aff_start.clone(),
                    row.aff_end.clone(),
                ));
                None
            }
        };

        let party_ref = row.party_id.trim();
        match (party_ref.is_empty(), map.resolve(party_ref)) {
            (false, Some(party)) => {
                let aff = Affiliation {
                    party: party.canonical_acronym.clone(),
                    interval,
                    relevance: party.relevance,
                };
                if !rec.affiliations.contains(&aff) {
                    rec.affiliations.push(aff);
                }
            }
            (unresolved, _) => {
                if !unresolved {
                    *out.unmapped.entry(party_ref.to_owned()).or_default() += 1;
                }
                if let Some(i) = interval {
                    if !rec.activity.contains(&i) {
                        rec.activity.push(i);
                    }
                }
            }
        }
    }

    for (id, rec) in by_id.iter_mut() {
        rec.affiliations.sort();
        rec.activity.sort();
        if let Some(raw) = career_end_overrides.get(*id) {
            match parse_date(raw) {
                Some(d) => rec.career_end_override = Some(d),
                None => warn!("ignoring unparseable career end `{raw}` for {id}"),
            }
        }
    }
    out.politicians = by_id.into_values().collect();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::audit::model::{Alignment, PartyRecord, Relevance};

    fn row(id: &str, party: &str, start: &str, end: &str) -> PoliticianRow {
        PoliticianRow {
            source: "en-dbpedia".into(),
            politician_id: id.into(),
            label: format!("{id} label"),
            party_id: party.into(),
            aff_start: start.into(),
            aff_end: end.into(),
            ..Default::default()
        }
    }

    fn map() -> NormalizationMap {
        let mut m = NormalizationMap::new(vec![
            PartyRecord::new("N-VA", Alignment::Right, Relevance::Relevant),
            PartyRecord::new("Minor", Alignment::Other, Relevance::NotRelevant),
        ]);
        m.add_alias("Volksunie", "N-VA").unwrap();
        m
    }

    #[test]
    fn aliases_collapse_to_single_party_career() {
        let rows = [row("X", "Volksunie", "", ""), row("X", "N-VA", "", "")];
        let n = normalize_affiliations(&rows, &map(), &BTreeMap::new());
        assert_eq!(n.politicians.len(), 1);
        let p = &n.politicians[0];
        assert_eq!(p.relevant_parties().into_iter().collect::<Vec<_>>(), ["N-VA"]);
        assert_eq!(p.affiliations.len(), 1);
    }

    #[test]
    fn not_relevant_kept_but_flagged() {
        let rows = [row("X", "Minor", "2000-01-01", "")];
        let n = normalize_affiliations(&rows, &map(), &BTreeMap::new());
        let p = &n.politicians[0];
        assert_eq!(p.affiliations[0].relevance, Relevance::NotRelevant);
        assert!(p.relevant_parties().is_empty());
    }

    #[test]
    fn duplicates_merge_and_unmapped_reported() {
        let rows = [
            row("X", "N-VA", "2001-01-01", "2005-01-01"),
            row("X", "N-VA", "2001-01-01", "2005-01-01"),
            row("Y", "http://example.org/Unknown", "1999-01-01", ""),
            row("Y", "", "1998-01-01", "1999-01-01"),
            row("Z", "N-VA", "2005-01-01", "2001-01-01"),
        ];
        let mut ov = BTreeMap::new();
        ov.insert("Y".to_string(), "2003-03-03".to_string());
        let n = normalize_affiliations(&rows, &map(), &ov);
        assert_eq!(n.politicians[0].affiliations.len(), 1);
        let y = &n.politicians[1];
        assert_eq!(y.activity.len(), 2);
        assert_eq!(y.career_end_override, parse_date("2003-03-03"));
        assert_eq!(n.unmapped.get("http://example.org/Unknown"), Some(&1));
        assert_eq!(n.rejected_intervals.len(), 1);
        assert_eq!(n.politicians[2].affiliations[0].interval, None);
    }
}
