//! Party-representation audit of knowledge-graph snapshots: normalization,
//! activity periods, visibility bounds and verdicts against parliamentary
//! seat baselines.

mod bounds;
mod model;
mod normalize;
mod period;
mod run;
mod validate;

use thiserror::Error;

pub use bounds::{baseline_share, classify, compute_bounds, BaselinePolicy};
pub use model::{
    default_schedule, parse_date, parse_schedule, sort_parties, Affiliation, Alignment,
    BaselineTable, Body, Date, DateInterval, Election, NormalizationMap, PartyRecord,
    PoliticianRecord, RepresentationVerdict, Relevance, TimePoint, Verdict, VisibilityBounds,
};
pub use normalize::{normalize_affiliations, Normalized};
pub use period::{activity_period, select_active, ActivityPeriod};
pub use run::{
    run_audit, AuditOptions, AuditRow, AuditSeries, CoverageReport, TimePointSummary,
    AUDIT_HEADER, LOW_SAMPLE_THRESHOLD,
};
pub use validate::{findings_csv, validate_snapshot, Finding, FindingKind, FINDINGS_HEADER};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AuditError {
    #[error("interval ends ({end}) before it starts ({start})")]
    InvertedInterval { start: Date, end: Date },
    #[error("no {body} election on or before {time_point}")]
    NoPrecedingElection { body: Body, time_point: TimePoint },
    #[error("no {0} baseline elections")]
    EmptyBaseline(Body),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Io(String),
}
