//! C ABI over `kgdiv-core`.
//!
//! Every fallible function returns a [`KgdivStatus`]; on failure the message
//! is available from [`kgdiv_last_error`] on the same thread. Handles are
//! opaque and must be released with their `_free` function. Strings returned
//! as `char *` are owned by the caller and released with
//! [`kgdiv_string_free`].

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use kgdiv_core::audit::{
    classify, parse_date, parse_schedule, run_audit, AuditOptions, AuditSeries, BaselineTable, Body,
    NormalizationMap, TimePoint, Verdict, VisibilityBounds,
};
use kgdiv_core::diversity::{
    diversity_of, gini_simpson, stirling_delta, ActorType, BalanceVector, DisparityMatrix,
    DiversityParams, EntityId, EntityRecord, FeatureSet, JaccardDistance,
};
use kgdiv_core::kg::Snapshot;
use kgdiv_core::report::rows_csv;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KgdivStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    NotFound = 4,
    Io = 5,
    Internal = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KgdivVerdict {
    Over = 0,
    Under = 1,
    Indeterminate = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KgdivActorType {
    Person = 0,
    Organisation = 1,
    GeopoliticalEntity = 2,
}

impl From<Verdict> for KgdivVerdict {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::Over => KgdivVerdict::Over,
            Verdict::Under => KgdivVerdict::Under,
            Verdict::Indeterminate => KgdivVerdict::Indeterminate,
        }
    }
}

impl From<KgdivActorType> for ActorType {
    fn from(t: KgdivActorType) -> Self {
        match t {
            KgdivActorType::Person => ActorType::Person,
            KgdivActorType::Organisation => ActorType::Organisation,
            KgdivActorType::GeopoliticalEntity => ActorType::GeopoliticalEntity,
        }
    }
}

/// Visibility bounds and verdict of one party at one audit date.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct KgdivAuditCell {
    pub lower_count: usize,
    pub upper_count: usize,
    pub active_total: usize,
    pub lower_share: f64,
    pub upper_share: f64,
    pub baseline_share: f64,
    /// A `KgdivVerdict` value.
    pub verdict: i32,
}

/// Entities with mention counts and features, scored with Jaccard disparity.
pub struct KgdivEntitySet {
    counts: BTreeMap<EntityId, u64>,
    records: BTreeMap<EntityId, EntityRecord>,
}

/// A finished audit run.
pub struct KgdivAudit {
    series: AuditSeries,
}

struct Failure(KgdivStatus, String);

type FfiResult<T> = Result<T, Failure>;

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: KgdivStatus, msg: impl std::fmt::Display) -> Failure {
    Failure(status, msg.to_string())
}

/// Runs `f`, recording any error or panic for `kgdiv_last_error`.
fn guard(f: impl FnOnce() -> FfiResult<()>) -> KgdivStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            KgdivStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            KgdivStatus::Internal
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> FfiResult<&'a str> {
    if p.is_null() {
        return Err(fail(KgdivStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(KgdivStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn opt_text<'a>(p: *const c_char, what: &str) -> FfiResult<Option<&'a str>> {
    if p.is_null() {
        Ok(None)
    } else {
        text(p, what).map(Some)
    }
}

unsafe fn out_ref<'a, T>(p: *mut T, what: &str) -> FfiResult<&'a mut T> {
    p.as_mut()
        .ok_or_else(|| fail(KgdivStatus::NullPointer, format!("{what} is null")))
}

unsafe fn slice<'a>(p: *const f64, n: usize, what: &str) -> FfiResult<&'a [f64]> {
    if n == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(fail(KgdivStatus::NullPointer, format!("{what} is null")));
    }
    Ok(std::slice::from_raw_parts(p, n))
}

fn params(alpha: f64, beta: f64) -> FfiResult<DiversityParams> {
    DiversityParams::new(alpha, beta).map_err(|e| fail(KgdivStatus::InvalidArgument, e))
}

fn invalid(e: impl std::fmt::Display) -> Failure {
    fail(KgdivStatus::InvalidArgument, e)
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn kgdiv_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Error message of the most recent call on this thread, or NULL if it
/// succeeded. Valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn kgdiv_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn kgdiv_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Δ for `n` shares (summing to 1) and a row-major `n × n` disparity matrix.
///
/// # Safety
/// `shares` must hold `n` values and `disparity` `n * n`; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kgdiv_stirling_delta(
    shares: *const f64,
    disparity: *const f64,
    n: usize,
    alpha: f64,
    beta: f64,
    out: *mut f64,
) -> KgdivStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let shares = slice(shares, n, "shares")?;
        let n2 = n.checked_mul(n).ok_or_else(|| invalid("n too large"))?;
        let disparity = slice(disparity, n2, "disparity")?;
        let ids: Vec<EntityId> = (0..n).map(|i| EntityId::new(i.to_string())).collect();
        let balance = BalanceVector::from_shares(ids.iter().cloned().zip(shares.iter().copied()))
            .map_err(invalid)?;
        let matrix = DisparityMatrix::from_dense(ids, disparity.to_vec()).map_err(invalid)?;
        *out = stirling_delta(&balance, &matrix, params(alpha, beta)?)
            .map_err(invalid)?
            .delta;
        Ok(())
    })
}

/// `1 − Σ p²` over `n` shares.
///
/// # Safety
/// `shares` must hold `n` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kgdiv_gini_simpson(shares: *const f64, n: usize, out: *mut f64) -> KgdivStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let shares = slice(shares, n, "shares")?;
        let balance = BalanceVector::from_shares(
            shares.iter().enumerate().map(|(i, p)| (EntityId::new(i.to_string()), *p)),
        )
        .map_err(invalid)?;
        *out = gini_simpson(&balance);
        Ok(())
    })
}

/// Verdict for a pair of visibility shares against a baseline share.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kgdiv_classify(
    lower_share: f64,
    upper_share: f64,
    baseline_share: f64,
    out: *mut KgdivVerdict,
) -> KgdivStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let shares = [lower_share, upper_share, baseline_share];
        if shares.iter().any(|s| !(0.0..=1.0).contains(s)) || lower_share > upper_share {
            return Err(invalid("shares must lie in [0, 1] with lower <= upper"));
        }
        let bounds = VisibilityBounds {
            canonical_acronym: String::new(),
            time_point: None,
            lower_count: 0,
            upper_count: 0,
            lower_share,
            upper_share,
            active_total: 0,
        };
        *out = classify(&bounds, baseline_share).verdict.into();
        Ok(())
    })
}

#[no_mangle]
pub extern "C" fn kgdiv_entity_set_new() -> *mut KgdivEntitySet {
    Box::into_raw(Box::new(KgdivEntitySet {
        counts: BTreeMap::new(),
        records: BTreeMap::new(),
    }))
}

/// # Safety
/// `set` must come from `kgdiv_entity_set_new` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn kgdiv_entity_set_free(set: *mut KgdivEntitySet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Adds `count` mentions of entity `id`. Repeated calls accumulate; the
/// actor type of the first call sticks.
///
/// # Safety
/// `set` must be a live handle and `id` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn kgdiv_entity_set_add(
    set: *mut KgdivEntitySet,
    id: *const c_char,
    actor_type: KgdivActorType,
    count: u64,
) -> KgdivStatus {
    guard(|| {
        let set = out_ref(set, "set")?;
        let id = EntityId::new(text(id, "id")?);
        *set.counts.entry(id.clone()).or_insert(0) += count;
        set.records
            .entry(id.clone())
            .or_insert_with(|| EntityRecord::new(id.0.clone(), actor_type.into(), FeatureSet::new()));
        Ok(())
    })
}

/// Attaches a feature to an entity already added.
///
/// # Safety
/// `set` must be a live handle; strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn kgdiv_entity_set_add_feature(
    set: *mut KgdivEntitySet,
    id: *const c_char,
    name: *const c_char,
    value: *const c_char,
) -> KgdivStatus {
    guard(|| {
        let set = out_ref(set, "set")?;
        let id = text(id, "id")?;
        let (name, value) = (text(name, "name")?, text(value, "value")?);
        let rec = set
            .records
            .get_mut(&EntityId::new(id))
            .ok_or_else(|| fail(KgdivStatus::NotFound, format!("unknown entity `{id}`")))?;
        rec.features.insert(name, value);
        Ok(())
    })
}

/// Δ of the set under Jaccard disparity.
///
/// # Safety
/// `set` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kgdiv_entity_set_delta(
    set: *const KgdivEntitySet,
    alpha: f64,
    beta: f64,
    out: *mut f64,
) -> KgdivStatus {
    guard(|| {
        let set = set
            .as_ref()
            .ok_or_else(|| fail(KgdivStatus::NullPointer, "set is null"))?;
        let out = out_ref(out, "out")?;
        let records: Vec<EntityRecord> = set.records.values().cloned().collect();
        *out = diversity_of(&set.counts, &records, &JaccardDistance, params(alpha, beta)?)
            .map_err(invalid)?
            .delta;
        Ok(())
    })
}

/// Runs an audit over one snapshot directory.
///
/// `parties` may be NULL (party_info.csv next to `aliases`), `body` NULL for
/// KVV and `schedule` NULL for the default schedule. Careers without an end
/// run to each source's retrieval date.
///
/// # Safety
/// Strings must be NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kgdiv_audit_run(
    snapshot_dir: *const c_char,
    aliases: *const c_char,
    parties: *const c_char,
    baseline: *const c_char,
    body: *const c_char,
    schedule: *const c_char,
    out: *mut *mut KgdivAudit,
) -> KgdivStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        let snapshot_dir = PathBuf::from(text(snapshot_dir, "snapshot_dir")?);
        let aliases = PathBuf::from(text(aliases, "aliases")?);
        let parties = match opt_text(parties, "parties")? {
            Some(p) => PathBuf::from(p),
            None => aliases.with_file_name("party_info.csv"),
        };
        let baseline = PathBuf::from(text(baseline, "baseline")?);
        let body: Body = match opt_text(body, "body")? {
            Some(b) => b.parse().map_err(invalid)?,
            None => Body::Kvv,
        };
        let mut options = AuditOptions::default();
        if let Some(s) = opt_text(schedule, "schedule")? {
            options.schedule = parse_schedule(s).map_err(invalid)?;
        }
        let io = |e: &dyn std::fmt::Display| fail(KgdivStatus::Io, e);
        let snapshot = Snapshot::load(&snapshot_dir).map_err(|e| io(&e))?;
        let map = NormalizationMap::load(&aliases, &parties).map_err(|e| io(&e))?;
        let table = BaselineTable::load_all(&baseline)
            .map_err(|e| io(&e))?
            .remove(&body)
            .ok_or_else(|| fail(KgdivStatus::NotFound, format!("no {body} elections in baseline")))?;
        let series = run_audit(&snapshot, &map, &table, &options).map_err(invalid)?;
        *out = Box::into_raw(Box::new(KgdivAudit { series }));
        Ok(())
    })
}

/// # Safety
/// `audit` must come from `kgdiv_audit_run` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn kgdiv_audit_free(audit: *mut KgdivAudit) {
    if !audit.is_null() {
        drop(Box::from_raw(audit));
    }
}

/// Number of (source, date, party) rows.
///
/// # Safety
/// `audit` must be a live handle or NULL (0).
#[no_mangle]
pub unsafe extern "C" fn kgdiv_audit_row_count(audit: *const KgdivAudit) -> usize {
    audit.as_ref().map_or(0, |a| a.series.rows.len())
}

/// Looks up one cell by source, party and date (YYYY-MM-DD).
///
/// # Safety
/// `audit` must be a live handle; strings NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kgdiv_audit_cell(
    audit: *const KgdivAudit,
    source: *const c_char,
    party: *const c_char,
    time_point: *const c_char,
    out: *mut KgdivAuditCell,
) -> KgdivStatus {
    guard(|| {
        let audit = audit
            .as_ref()
            .ok_or_else(|| fail(KgdivStatus::NullPointer, "audit is null"))?;
        let out = out_ref(out, "out")?;
        let (source, party) = (text(source, "source")?, text(party, "party")?);
        let t = text(time_point, "time_point")?;
        let t = TimePoint(parse_date(t).ok_or_else(|| invalid(format!("`{t}` is not YYYY-MM-DD")))?);
        let row = audit
            .series
            .verdict(source, party, t)
            .ok_or_else(|| fail(KgdivStatus::NotFound, format!("no row for {source}/{party}/{t}")))?;
        *out = KgdivAuditCell {
            lower_count: row.lower_count,
            upper_count: row.upper_count,
            active_total: row.active_total,
            lower_share: row.lower_share,
            upper_share: row.upper_share,
            baseline_share: row.baseline_share,
            verdict: KgdivVerdict::from(row.verdict) as i32,
        };
        Ok(())
    })
}

/// The audit as CSV text; free with `kgdiv_string_free`.
///
/// # Safety
/// `audit` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kgdiv_audit_csv(audit: *const KgdivAudit, out: *mut *mut c_char) -> KgdivStatus {
    guard(|| {
        let audit = audit
            .as_ref()
            .ok_or_else(|| fail(KgdivStatus::NullPointer, "audit is null"))?;
        let out = out_ref(out, "out")?;
        let csv = CString::new(rows_csv(&audit.series.rows))
            .map_err(|_| fail(KgdivStatus::Internal, "CSV contains NUL"))?;
        *out = csv.into_raw();
        Ok(())
    })
}
