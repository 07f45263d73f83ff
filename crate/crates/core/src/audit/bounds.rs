use std::fmt;
use std::str::FromStr;

use super::model::{
    BaselineTable, PartyRecord, PoliticianRecord, RepresentationVerdict, TimePoint, Verdict,
    VisibilityBounds,
};
use super::AuditError;

/// Lower and upper visibility counts for each party in `parties`.
///
/// The lower count takes politicians whose relevant parties over the whole
/// career are exactly {P}; the upper count takes everyone ever in P. The
/// denominator is every active politician. No active politicians, no bounds.
pub fn compute_bounds(
    active: &[&PoliticianRecord],
    parties: &[PartyRecord],
    t: TimePoint,
) -> Vec<VisibilityBounds> {
    let total = active.len();
    if total == 0 {
        return Vec::new();
    }
    let careers: Vec<_> = active.iter().map(|p| p.relevant_parties()).collect();
    parties
        .iter()
        .map(|party| {
            let name = party.canonical_acronym.as_str();
            let upper = careers.iter().filter(|c| c.contains(name)).count();
            let lower = careers
                .iter()
                .filter(|c| c.len() == 1 && c.contains(name))
                .count();
            VisibilityBounds {
                canonical_acronym: name.to_owned(),
                time_point: Some(t),
                lower_count: lower,
                upper_count: upper,
                lower_share: lower as f64 / total as f64,
                upper_share: upper as f64 / total as f64,
                active_total: total,
            }
        })
        .collect()
}

/// Which election supplies the baseline for an audit date.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BaselinePolicy {
    /// Latest election on or before T.
    #[default]
    MostRecentPreceding,
    /// Election nearest to T; equidistant ties go to the earlier one.
    ClosestInTime,
}

impl FromStr for BaselinePolicy {
    type Err = AuditError;

    fn from_str(s: &str) -> Result<Self, AuditError> {
        match s.trim() {
            "preceding" | "most-recent-preceding" => Ok(BaselinePolicy::MostRecentPreceding),
            "closest" | "closest-in-time" => Ok(BaselinePolicy::ClosestInTime),
            other => Err(AuditError::Parse(format!(
                "unknown baseline policy `{other}` (expected preceding or closest)"
            ))),
        }
    }
}

impl fmt::Display for BaselinePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BaselinePolicy::MostRecentPreceding => "preceding",
            BaselinePolicy::ClosestInTime => "closest",
        })
    }
}

/// Seat share of `party` in the election picked by `policy`; 0 when the
/// party won no seats there.
pub fn baseline_share(
    baselines: &BaselineTable,
    party: &str,
    t: TimePoint,
    policy: BaselinePolicy,
) -> Result<f64, AuditError> {
    if baselines.elections.is_empty() {
        return Err(AuditError::EmptyBaseline(baselines.body));
    }
    let date = t.date();
    let election = match policy {
        BaselinePolicy::MostRecentPreceding => baselines
            .elections
            .range(..=date)
            .next_back()
            .map(|(_, e)| e)
            .ok_or(AuditError::NoPrecedingElection {
                body: baselines.body,
                time_point: t,
            })?,
        BaselinePolicy::ClosestInTime => {
            // Ascending iteration with a strict comparison keeps the earlier
            // election on ties.
            let mut best: Option<(i64, _)> = None;
            for (d, e) in &baselines.elections {
                let dist = (*d - date).num_days().abs();
                if best.as_ref().is_none_or(|(b, _)| dist < *b) {
                    best = Some((dist, e));
                }
            }
            best.expect("non-empty").1
        }
    };
    let seats = election.seats.get(party).copied().unwrap_or(0);
    Ok(seats as f64 / election.total_seats as f64)
}

/// Strict comparison of both bounds against the baseline.
pub fn classify(bounds: &VisibilityBounds, baseline: f64) -> RepresentationVerdict {
    let verdict = if bounds.lower_share > baseline {
        Verdict::Over
    } else if bounds.upper_share < baseline {
        Verdict::Under
    } else {
        Verdict::Indeterminate
    };
    RepresentationVerdict {
        canonical_acronym: bounds.canonical_acronym.clone(),
        time_point: bounds.time_point,
        verdict,
        baseline_share: baseline,
        bounds: bounds.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::audit::model::{parse_date, Alignment, Body, Relevance};

    fn parties(names: &[&str]) -> Vec<PartyRecord> {
        names
            .iter()
            .map(|n| PartyRecord::new(*n, Alignment::Centre, Relevance::Relevant))
            .collect()
    }

    fn pol(id: &str, affs: &[(&str, Relevance)]) -> PoliticianRecord {
        affs.iter()
            .fold(PoliticianRecord::new(id), |p, (party, rel)| p.with_affiliation(party, *rel, None))
    }

    fn bounds_of(b: &[VisibilityBounds], name: &str) -> (usize, usize, usize) {
        let x = b.iter().find(|x| x.canonical_acronym == name).unwrap();
        (x.lower_count, x.upper_count, x.active_total)
    }

    #[test]
    fn four_politician_bounds() {
        use Relevance::Relevant as R;
        let ps = [
            pol("p1", &[("A", R)]),
            pol("p2", &[("A", R)]),
            pol("p3", &[("A", R), ("B", R)]),
            pol("p4", &[("B", R)]),
        ];
        let active: Vec<_> = ps.iter().collect();
        let b = compute_bounds(&active, &parties(&["A", "B"]), TimePoint::year(2000));
        assert_eq!(bounds_of(&b, "A"), (2, 3, 4));
        assert_eq!(bounds_of(&b, "B"), (1, 2, 4));
        assert_eq!(b[0].lower_share, 0.5);
        assert_eq!(b[0].upper_share, 0.75);
    }

    #[test]
    fn non_relevant_only_counts_in_denominator() {
        let ps = [
            pol("p1", &[("A", Relevance::Relevant)]),
            pol("p2", &[("Minor", Relevance::NotRelevant)]),
            pol("p3", &[("A", Relevance::Relevant), ("Minor", Relevance::NotRelevant)]),
        ];
        let active: Vec<_> = ps.iter().collect();
        let b = compute_bounds(&active, &parties(&["A"]), TimePoint::year(2000));
        assert_eq!(bounds_of(&b, "A"), (2, 2, 3));
    }

    #[test]
    fn empty_active_gives_no_bounds() {
        assert!(compute_bounds(&[], &parties(&["A"]), TimePoint::year(2000)).is_empty());
    }

    fn table() -> BaselineTable {
        let mut t = BaselineTable::new(Body::Vp);
        t.add_election(
            parse_date("2014-05-25").unwrap(),
            124,
            [("N-VA".to_string(), 43), ("Groen".to_string(), 10)],
        )
        .unwrap();
        t.add_election(
            parse_date("2019-05-26").unwrap(),
            124,
            [("N-VA".to_string(), 35), ("Groen".to_string(), 14)],
        )
        .unwrap();
        t
    }

    #[test]
    fn baseline_policies() {
        let t = table();
        let p = BaselinePolicy::MostRecentPreceding;
        let share = baseline_share(&t, "N-VA", TimePoint::year(2020), p).unwrap();
        assert!((share - 35.0 / 124.0).abs() < 1e-12);
        assert!((share - 0.282).abs() < 5e-4);
        assert_eq!(baseline_share(&t, "PVDA", TimePoint::year(2020), p).unwrap(), 0.0);
        assert!(matches!(
            baseline_share(&t, "N-VA", TimePoint::year(2010), p),
            Err(AuditError::NoPrecedingElection { .. })
        ));
        let c = BaselinePolicy::ClosestInTime;
        let early = baseline_share(&t, "N-VA", TimePoint::year(2010), c).unwrap();
        assert!((early - 43.0 / 124.0).abs() < 1e-12);
    }

    #[test]
    fn closest_tie_breaks_to_earlier() {
        let mut t = BaselineTable::new(Body::Kvv);
        t.add_election(parse_date("1999-12-31").unwrap(), 10, [("A".to_string(), 1)])
            .unwrap();
        t.add_election(parse_date("2000-01-03").unwrap(), 10, [("A".to_string(), 9)])
            .unwrap();
        let tp = TimePoint(parse_date("2000-01-01").unwrap());
        let s = baseline_share(&t, "A", tp, BaselinePolicy::ClosestInTime).unwrap();
        assert_eq!(s, 0.1);
    }

    fn vb(lower: f64, upper: f64) -> VisibilityBounds {
        VisibilityBounds {
            canonical_acronym: "P".into(),
            time_point: None,
            lower_count: 0,
            upper_count: 0,
            lower_share: lower,
            upper_share: upper,
            active_total: 0,
        }
    }

    #[test]
    fn classification() {
        assert_eq!(classify(&vb(0.30, 0.40), 0.20).verdict, Verdict::Over);
        assert_eq!(classify(&vb(0.05, 0.10), 0.20).verdict, Verdict::Under);
        assert_eq!(classify(&vb(0.15, 0.25), 0.20).verdict, Verdict::Indeterminate);
        assert_eq!(classify(&vb(0.20, 0.25), 0.20).verdict, Verdict::Indeterminate);
        assert_eq!(classify(&vb(0.10, 0.20), 0.20).verdict, Verdict::Indeterminate);
    }
}
