use super::model::{Date, DateInterval, PoliticianRecord, TimePoint};

/// Maximal activity period of a politician.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ActivityPeriod {
    Active(DateInterval),
    /// No dated affiliation or activity at all.
    NoEvidence,
    /// The earliest known date lies after the applicable career cap
    /// (e.g. a death date before the first recorded start).
    Contradictory { start: Date, cap: Date },
}

impl ActivityPeriod {
    pub fn interval(&self) -> Option<DateInterval> {
        match self {
            ActivityPeriod::Active(i) => Some(*i),
            _ => None,
        }
    }

    pub fn contains(&self, d: Date) -> bool {
        self.interval().is_some_and(|i| i.contains(d))
    }
}

/// Convex hull of every dated interval, capped by the earliest of `today`,
/// the death date and the career-end override. Open-ended intervals run
/// up to that cap; recorded ends beyond it are clamped to it.
pub fn activity_period(p: &PoliticianRecord, today: Date) -> ActivityPeriod {
    let dated: Vec<&DateInterval> = p.intervals().filter(|i| i.is_dated()).collect();
    if dated.is_empty() {
        return ActivityPeriod::NoEvidence;
    }
    let cap = [Some(today), p.death_date, p.career_end_override]
        .into_iter()
        .flatten()
        .min()
        .expect("today is always present");

    // An end-only interval can predate every recorded start.
    let start = dated
        .iter()
        .flat_map(|i| [i.start(), i.end()])
        .flatten()
        .min()
        .expect("dated intervals carry at least one date");

    let open = dated.iter().any(|i| i.end().is_none());
    let latest_end = dated.iter().filter_map(|i| i.end()).max();
    let end = match (open, latest_end) {
        (false, Some(e)) => e.min(cap),
        _ => cap,
    };
    match DateInterval::closed(start, end) {
        Ok(i) => ActivityPeriod::Active(i),
        Err(_) => ActivityPeriod::Contradictory { start, cap },
    }
}

/// Politicians whose activity period contains `t`, endpoints included.
pub fn select_active(
    politicians: &[PoliticianRecord],
    t: TimePoint,
    today: Date,
) -> Vec<&PoliticianRecord> {
    politicians
        .iter()
        .filter(|p| activity_period(p, today).contains(t.date()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::audit::model::{parse_date, Relevance};

    fn d(s: &str) -> Date {
        parse_date(s).unwrap()
    }

    fn iv(s: Option<&str>, e: Option<&str>) -> Option<DateInterval> {
        Some(DateInterval::new(s.map(d), e.map(d)).unwrap())
    }

    #[test]
    fn hull_with_death_cap() {
        let mut p = PoliticianRecord::new("x")
            .with_affiliation("A", Relevance::Relevant, iv(Some("1995-01-01"), Some("2003-12-31")))
            .with_affiliation("A", Relevance::Relevant, iv(Some("2001-01-01"), None));
        p.death_date = Some(d("2010-06-01"));
        assert_eq!(
            activity_period(&p, d("2022-01-01")),
            ActivityPeriod::Active(DateInterval::closed(d("1995-01-01"), d("2010-06-01")).unwrap())
        );
    }

    #[test]
    fn open_interval_capped_by_today() {
        let p = PoliticianRecord::new("x").with_affiliation(
            "A",
            Relevance::Relevant,
            iv(Some("2018-01-01"), None),
        );
        let period = activity_period(&p, d("2022-05-01"));
        assert_eq!(
            period.interval().unwrap(),
            DateInterval::closed(d("2018-01-01"), d("2022-05-01")).unwrap()
        );
    }

    #[test]
    fn no_dates_is_no_evidence() {
        let p = PoliticianRecord::new("x").with_affiliation("A", Relevance::Relevant, None);
        assert_eq!(activity_period(&p, d("2022-01-01")), ActivityPeriod::NoEvidence);
    }

    #[test]
    fn override_and_contradiction() {
        let mut p = PoliticianRecord::new("x").with_affiliation(
            "A",
            Relevance::Relevant,
            iv(Some("1990-01-01"), None),
        );
        p.career_end_override = Some(d("1999-06-30"));
        assert_eq!(activity_period(&p, d("2022-01-01")).interval().unwrap().end(), Some(d("1999-06-30")));
        p.death_date = Some(d("1980-01-01"));
        assert!(matches!(
            activity_period(&p, d("2022-01-01")),
            ActivityPeriod::Contradictory { .. }
        ));
    }

    #[test]
    fn end_only_interval() {
        let p = PoliticianRecord::new("x").with_affiliation(
            "A",
            Relevance::Relevant,
            iv(None, Some("2004-12-31")),
        );
        let i = activity_period(&p, d("2022-01-01")).interval().unwrap();
        assert_eq!((i.start(), i.end()), (Some(d("2004-12-31")), Some(d("2004-12-31"))));
    }

    #[test]
    fn selection_is_inclusive() {
        let ps = vec![
            PoliticianRecord::new("a").with_affiliation(
                "A",
                Relevance::Relevant,
                iv(Some("1995-01-01"), Some("2010-01-01")),
            ),
            PoliticianRecord::new("b").with_affiliation(
                "A",
                Relevance::Relevant,
                iv(Some("1990-01-01"), Some("2000-01-01")),
            ),
        ];
        let today = d("2022-01-01");
        assert_eq!(select_active(&ps, TimePoint::year(2000), today).len(), 2);
        assert!(select_active(&ps, TimePoint::year(2011), today).is_empty());
    }
}
