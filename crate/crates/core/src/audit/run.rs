use std::collections::BTreeMap;

use log::warn;
use serde::Serialize;

use super::bounds::{baseline_share, classify, compute_bounds, BaselinePolicy};
use super::model::{
    default_schedule, parse_date, Alignment, BaselineTable, Date, NormalizationMap, TimePoint,
    Verdict,
};
use super::normalize::normalize_affiliations;
use super::period::{activity_period, select_active, ActivityPeriod};
use super::AuditError;
use crate::kg::{PoliticianRow, Snapshot};

pub const AUDIT_HEADER: &str = "source,time_point,canonical_acronym,alignment,lower_count,upper_count,lower_share,upper_share,baseline_share,verdict,active_total";

/// Below this many active politicians the shares are hard to interpret.
pub const LOW_SAMPLE_THRESHOLD: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct AuditOptions {
    pub schedule: Vec<TimePoint>,
    pub policy: BaselinePolicy,
    /// Cap for open-ended careers. Defaults to the latest `retrieved_at` of
    /// each source, so that a snapshot audits the same on any later day.
    pub today: Option<Date>,
}

impl Default for AuditOptions {
    fn default() -> Self {
        AuditOptions {
            schedule: default_schedule(),
            policy: BaselinePolicy::default(),
            today: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditRow {
    pub source: String,
    pub time_point: TimePoint,
    pub canonical_acronym: String,
    pub alignment: Alignment,
    pub lower_count: usize,
    pub upper_count: usize,
    pub lower_share: f64,
    pub upper_share: f64,
    pub baseline_share: f64,
    pub verdict: Verdict,
    pub active_total: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TimePointSummary {
    pub source: String,
    pub time_point: String,
    pub active_total: usize,
    pub low_sample: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverageReport {
    pub source: String,
    pub politicians: usize,
    pub no_evidence: usize,
    pub contradictory: usize,
    pub unmapped_rows: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct AuditSeries {
    /// Per source, in figure order, then by time point.
    pub rows: Vec<AuditRow>,
    pub summaries: Vec<TimePointSummary>,
    pub coverage: Vec<CoverageReport>,
    /// (source, raw party reference) → rows.
    pub unmapped: BTreeMap<(String, String), usize>,
}

impl AuditSeries {
    pub fn low_sample_warnings(&self) -> impl Iterator<Item = &TimePointSummary> {
        self.summaries.iter().filter(|s| s.low_sample)
    }

    pub fn unmapped_rows(&self) -> usize {
        self.unmapped.values().sum()
    }

    pub fn verdict(&self, source: &str, party: &str, t: TimePoint) -> Option<&AuditRow> {
        self.rows
            .iter()
            .find(|r| r.source == source && r.canonical_acronym == party && r.time_point == t)
    }
}

fn snapshot_date(rows: &[&PoliticianRow]) -> Option<Date> {
    rows.iter().filter_map(|r| parse_date(&r.retrieved_at)).max()
}

/// Audits every source in the snapshot against one baseline body.
pub fn run_audit(
    snapshot: &Snapshot,
    map: &NormalizationMap,
    baselines: &BaselineTable,
    options: &AuditOptions,
) -> Result<AuditSeries, AuditError> {
    if options.schedule.is_empty() {
        return Err(AuditError::Parse("empty audit schedule".into()));
    }
    let mut schedule = options.schedule.clone();
    schedule.sort();
    schedule.dedup();

    let mut by_source: BTreeMap<&str, Vec<&PoliticianRow>> = BTreeMap::new();
    for r in &snapshot.politicians {
        by_source.entry(r.source.as_str()).or_default().push(r);
    }

    let parties = map.relevant_parties();
    let mut series = AuditSeries::default();

    if by_source.is_empty() {
        for t in &schedule {
            series.summaries.push(TimePointSummary {
                source: String::new(),
                time_point: t.to_string(),
                active_total: 0,
                low_sample: true,
            });
        }
        return Ok(series);
    }

    for (source, rows) in by_source {
        let today = options
            .today
            .or_else(|| snapshot_date(&rows))
            .unwrap_or_else(|| chrono::Local::now().date_naive());
        let owned: Vec<PoliticianRow> = rows.into_iter().cloned().collect();
        let norm = normalize_affiliations(&owned, map, &snapshot.career_end_overrides);

        let mut no_evidence = 0;
        let mut contradictory = 0;
        for p in &norm.politicians {
            match activity_period(p, today) {
                ActivityPeriod::NoEvidence => no_evidence += 1,
                ActivityPeriod::Contradictory { .. } => contradictory += 1,
                ActivityPeriod::Active(_) => {}
            }
        }
        series.coverage.push(CoverageReport {
            source: source.to_owned(),
            politicians: norm.politicians.len(),
            no_evidence,
            contradictory,
            unmapped_rows: norm.unmapped_rows(),
        });
        for (raw, n) in &norm.unmapped {
            series
                .unmapped
                .insert((source.to_owned(), raw.clone()), *n);
        }

        let mut per_party: Vec<Vec<AuditRow>> = vec![Vec::new(); parties.len()];
        for &t in &schedule {
            let active = select_active(&norm.politicians, t, today);
            let low_sample = active.len() < LOW_SAMPLE_THRESHOLD;
            if low_sample {
                warn!(
                    "{source} at {t}: only {} active politicians; shares are hard to interpret",
                    active.len()
                );
            }
            series.summaries.push(TimePointSummary {
                source: source.to_owned(),
                time_point: t.to_string(),
                active_total: active.len(),
                low_sample,
            });
            let bounds = compute_bounds(&active, &parties, t);
            for (i, (b, party)) in bounds.iter().zip(&parties).enumerate() {
                let base = baseline_share(baselines, &party.canonical_acronym, t, options.policy)?;
                let v = classify(b, base);
                per_party[i].push(AuditRow {
                    source: source.to_owned(),
                    time_point: t,
                    canonical_acronym: party.canonical_acronym.clone(),
                    alignment: party.alignment,
                    lower_count: b.lower_count,
                    upper_count: b.upper_count,
                    lower_share: b.lower_share,
                    upper_share: b.upper_share,
                    baseline_share: base,
                    verdict: v.verdict,
                    active_total: b.active_total,
                });
            }
        }
        series.rows.extend(per_party.into_iter().flatten());
    }
    Ok(series)
}
