use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, OnceLock};
use std::thread;
use std::time::{Duration, Instant};

use log::{debug, warn};

use super::results::{parse_results, serialize_results, ResultFormat};
use super::template::{QueryTemplate, TEMPLATE_MARKER};
use super::{EndpointConfig, KgError, ResultTable};

#[derive(Debug, Clone, PartialEq)]
pub struct TransportResponse {
    pub body: Vec<u8>,
    pub format: ResultFormat,
}

/// Sends one fully bound query text to an endpoint.
pub trait Transport: Send + Sync {
    fn send(&self, endpoint: &EndpointConfig, query: &str) -> Result<TransportResponse, KgError>;
}

/// SPARQL protocol over HTTP (form-encoded POST).
#[derive(Debug, Default, Clone)]
pub struct HttpTransport;

impl Transport for HttpTransport {
    fn send(&self, endpoint: &EndpointConfig, query: &str) -> Result<TransportResponse, KgError> {
        let agent = ureq::AgentBuilder::new()
            .timeout(Duration::from_secs(endpoint.timeout_secs))
            .user_agent(concat!("kgdiv/", env!("CARGO_PKG_VERSION")))
            .build();
        let accept = format!(
            "{}, {};q=0.9",
            ResultFormat::SparqlJson.media_type(),
            ResultFormat::SparqlXml.media_type()
        );
        let resp = agent
            .post(&endpoint.url)
            .set("Accept", &accept)
            .send_form(&[("query", query)]);
        match resp {
            Ok(resp) => {
                let format = if resp.content_type().contains("xml") {
                    ResultFormat::SparqlXml
                } else {
                    ResultFormat::SparqlJson
                };
                let mut body = Vec::new();
                std::io::Read::read_to_end(&mut resp.into_reader(), &mut body).map_err(|e| {
                    KgError::Transport {
                        url: endpoint.url.clone(),
                        attempts: 1,
                        message: format!("reading body: {e}"),
                    }
                })?;
                Ok(TransportResponse { body, format })
            }
            Err(ureq::Error::Status(status, resp)) => {
                let mut message = resp.into_string().unwrap_or_default();
                message.truncate(200);
                Err(KgError::Http {
                    url: endpoint.url.clone(),
                    status,
                    attempts: 1,
                    message,
                })
            }
            Err(ureq::Error::Transport(t)) => Err(KgError::Transport {
                url: endpoint.url.clone(),
                attempts: 1,
                message: t.to_string(),
            }),
        }
    }
}

/// Replays recorded result documents from a directory laid out as
/// `<dir>/<dialect>/<template-id>.json` (or `.xml`), emulating LIMIT/OFFSET.
#[derive(Debug)]
pub struct FixtureTransport {
    dir: PathBuf,
    cache: Mutex<HashMap<PathBuf, Arc<(ResultTable, ResultFormat)>>>,
    requests: Mutex<Vec<(String, Instant)>>,
}

impl FixtureTransport {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        FixtureTransport {
            dir: dir.into(),
            cache: Mutex::new(HashMap::new()),
            requests: Mutex::new(Vec::new()),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Number of queries answered so far.
    pub fn request_count(&self) -> usize {
        self.requests.lock().unwrap().len()
    }

    /// Arrival time of each answered query, in order.
    pub fn request_times(&self) -> Vec<Instant> {
        self.requests.lock().unwrap().iter().map(|r| r.1).collect()
    }

    fn load(&self, path: &Path, format: ResultFormat) -> Result<Arc<(ResultTable, ResultFormat)>, KgError> {
        let mut cache = self.cache.lock().unwrap();
        if let Some(t) = cache.get(path) {
            return Ok(t.clone());
        }
        let bytes = std::fs::read(path)
            .map_err(|e| KgError::Fixture(format!("{}: {e}", path.display())))?;
        let table = parse_results(&bytes, format)?;
        let entry = Arc::new((table, format));
        cache.insert(path.to_owned(), entry.clone());
        Ok(entry)
    }
}

/// Extracts the template id and the trailing LIMIT/OFFSET of a paged query.
fn paging_of(query: &str) -> (Option<&str>, Option<usize>, usize) {
    let id = query
        .lines()
        .next()
        .and_then(|l| l.strip_prefix(TEMPLATE_MARKER))
        .map(str::trim);
    let mut limit = None;
    let mut offset = 0;
    let tokens: Vec<&str> = query.split_whitespace().collect();
    for w in tokens.windows(2) {
        if w[0].eq_ignore_ascii_case("LIMIT") {
            limit = w[1].parse().ok();
        } else if w[0].eq_ignore_ascii_case("OFFSET") {
            offset = w[1].parse().unwrap_or(0);
        }
    }
    (id, limit, offset)
}

impl Transport for FixtureTransport {
    fn send(&self, endpoint: &EndpointConfig, query: &str) -> Result<TransportResponse, KgError> {
        let (id, limit, offset) = paging_of(query);
        let id = id.ok_or_else(|| KgError::Fixture("query carries no template marker".into()))?;
        self.requests
            .lock()
            .unwrap()
            .push((id.to_owned(), Instant::now()));
        let base = self.dir.join(endpoint.dialect.as_str());
        let json = base.join(format!("{id}.json"));
        let xml = base.join(format!("{id}.xml"));
        let entry = if json.exists() {
            self.load(&json, ResultFormat::SparqlJson)?
        } else if xml.exists() {
            self.load(&xml, ResultFormat::SparqlXml)?
        } else {
            return Err(KgError::Fixture(format!(
                "no recorded result for `{id}` under {}",
                base.display()
            )));
        };
        let (table, format) = (&entry.0, entry.1);
        let end = limit.map_or(table.rows.len(), |l| (offset + l).min(table.rows.len()));
        let start = offset.min(end);
        let page = ResultTable {
            variables: table.variables.clone(),
            rows: table.rows[start..end].to_vec(),
        };
        Ok(TransportResponse {
            body: serialize_results(&page, format),
            format,
        })
    }
}

/// Spaces requests to one endpoint at least `1 / rate` seconds apart.
#[derive(Debug)]
pub struct RateLimiter {
    state: Mutex<LimiterState>,
}

#[derive(Debug)]
struct LimiterState {
    interval: Duration,
    next_slot: Option<Instant>,
}

impl RateLimiter {
    pub fn new(max_requests_per_second: f64) -> Self {
        RateLimiter {
            state: Mutex::new(LimiterState {
                interval: Duration::from_secs_f64(1.0 / max_requests_per_second),
                next_slot: None,
            }),
        }
    }

    pub fn interval(&self) -> Duration {
        self.state.lock().unwrap().interval
    }

    fn tighten(&self, max_requests_per_second: f64) {
        let interval = Duration::from_secs_f64(1.0 / max_requests_per_second);
        let mut s = self.state.lock().unwrap();
        s.interval = s.interval.max(interval);
    }

    /// Blocks until the caller may issue a request. Callers are serialized,
    /// so the cap holds across threads.
    pub fn acquire(&self) {
        let mut s = self.state.lock().unwrap();
        let now = Instant::now();
        let slot = match s.next_slot {
            Some(t) if t > now => {
                thread::sleep(t - now);
                t
            }
            _ => now,
        };
        s.next_slot = Some(slot + s.interval);
    }
}

type LimiterRegistry = Mutex<HashMap<String, Arc<RateLimiter>>>;

/// Process-wide limiter for an endpoint URL. When several configurations
/// name the same URL the slowest rate wins.
pub fn limiter_for(url: &str, max_requests_per_second: f64) -> Arc<RateLimiter> {
    static REGISTRY: OnceLock<LimiterRegistry> = OnceLock::new();
    let mut reg = REGISTRY.get_or_init(Default::default).lock().unwrap();
    match reg.get(url) {
        Some(l) => {
            l.tighten(max_requests_per_second);
            l.clone()
        }
        None => {
            let l = Arc::new(RateLimiter::new(max_requests_per_second));
            reg.insert(url.to_owned(), l.clone());
            l
        }
    }
}

pub struct SparqlClient {
    endpoint: EndpointConfig,
    transport: Arc<dyn Transport>,
    limiter: Arc<RateLimiter>,
}

impl std::fmt::Debug for SparqlClient {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SparqlClient")
            .field("endpoint", &self.endpoint)
            .finish_non_exhaustive()
    }
}

impl SparqlClient {
    pub fn new(endpoint: EndpointConfig, transport: Arc<dyn Transport>) -> Result<Self, KgError> {
        endpoint.validate()?;
        let limiter = limiter_for(&endpoint.url, endpoint.max_requests_per_second);
        Ok(SparqlClient {
            endpoint,
            transport,
            limiter,
        })
    }

    pub fn http(endpoint: EndpointConfig) -> Result<Self, KgError> {
        Self::new(endpoint, Arc::new(HttpTransport))
    }

    pub fn endpoint(&self) -> &EndpointConfig {
        &self.endpoint
    }

    fn send_with_retry(&self, query: &str) -> Result<ResultTable, KgError> {
        let mut attempt: u32 = 0;
        loop {
            self.limiter.acquire();
            let outcome = self
                .transport
                .send(&self.endpoint, query)
                .and_then(|resp| parse_results(&resp.body, resp.format));
            match outcome {
                Ok(table) => return Ok(table),
                Err(e) if e.is_transient() && attempt < self.endpoint.retry_limit => {
                    let delay = Duration::from_millis(self.endpoint.backoff_ms)
                        .saturating_mul(1 << attempt.min(16));
                    warn!(
                        "{}: {e}; retrying in {} ms",
                        self.endpoint.url,
                        delay.as_millis()
                    );
                    thread::sleep(delay);
                    attempt += 1;
                }
                Err(e) => return Err(with_attempts(e, attempt + 1)),
            }
        }
    }

    /// Runs `template` to completion, paging with LIMIT/OFFSET until a short
    /// page comes back. Rows are deduplicated by full-row equality, keeping
    /// first-seen order.
    pub fn execute_query(
        &self,
        template: &QueryTemplate,
        params: &BTreeMap<String, String>,
    ) -> Result<ResultTable, KgError> {
        if template.dialect != self.endpoint.dialect {
            return Err(KgError::DialectMismatch {
                template: template.id.clone(),
                template_dialect: template.dialect,
                endpoint_dialect: self.endpoint.dialect,
            });
        }
        let base = template.bind(params)?;
        let page_size = self.endpoint.page_size;
        let mut out: Option<ResultTable> = None;
        let mut seen = HashSet::new();
        let mut offset = 0usize;
        loop {
            let query = format!("{base}\nLIMIT {page_size}\nOFFSET {offset}");
            let page = self.send_with_retry(&query)?;
            let n = page.rows.len();
            debug!("{} offset {offset}: {n} rows", template.id);
            let table = out.get_or_insert_with(|| ResultTable::new(page.variables.clone()));
            for row in page.rows {
                if seen.insert(row.clone()) {
                    table.rows.push(row);
                }
            }
            if n < page_size {
                break;
            }
            offset += page_size;
        }
        Ok(out.unwrap_or_default())
    }
}

fn with_attempts(e: KgError, n: u32) -> KgError {
    match e {
        KgError::Http {
            url,
            status,
            message,
            ..
        } => KgError::Http {
            url,
            status,
            attempts: n,
            message,
        },
        KgError::Transport { url, message, .. } => KgError::Transport {
            url,
            attempts: n,
            message,
        },
        other => other,
    }
}

/// One-shot query over HTTP.
pub fn execute_query(
    endpoint: &EndpointConfig,
    template: &QueryTemplate,
    params: &BTreeMap<String, String>,
) -> Result<ResultTable, KgError> {
    SparqlClient::http(endpoint.clone())?.execute_query(template, params)
}

#[cfg(test)]
mod tests {
    use super::super::{Dialect, RdfTerm, Row};
    use super::*;
    use std::sync::atomic::{AtomicUsize, Ordering};

    fn table(n: usize) -> ResultTable {
        let mut t = ResultTable::new(vec!["s".into()]);
        for i in 0..n {
            let mut r = Row::new();
            r.insert("s".into(), RdfTerm::iri(format!("http://example.org/{i:04}")));
            t.rows.push(r);
        }
        t
    }

    fn template() -> QueryTemplate {
        QueryTemplate::new(
            "t",
            Dialect::Wikidata,
            vec![],
            vec!["s".into()],
            "SELECT ?s WHERE { ?s ?p ?o } ORDER BY ?s",
        )
        .unwrap()
    }

    /// Serves slices of an in-memory table, failing the first `failures` calls.
    struct Flaky {
        table: ResultTable,
        failures: AtomicUsize,
        status: u16,
        calls: AtomicUsize,
    }

    impl Transport for Flaky {
        fn send(&self, ep: &EndpointConfig, query: &str) -> Result<TransportResponse, KgError> {
            self.calls.fetch_add(1, Ordering::SeqCst);
            if self
                .failures
                .fetch_update(Ordering::SeqCst, Ordering::SeqCst, |f| f.checked_sub(1))
                .is_ok()
            {
                return Err(KgError::Http {
                    url: ep.url.clone(),
                    status: self.status,
                    attempts: 1,
                    message: "busy".into(),
                });
            }
            let (_, limit, offset) = paging_of(query);
            let end = (offset + limit.unwrap()).min(self.table.rows.len());
            let page = ResultTable {
                variables: self.table.variables.clone(),
                rows: self.table.rows[offset.min(end)..end].to_vec(),
            };
            Ok(TransportResponse {
                body: serialize_results(&page, ResultFormat::SparqlJson),
                format: ResultFormat::SparqlJson,
            })
        }
    }

    fn endpoint(name: &str, page_size: usize, retries: u32) -> EndpointConfig {
        EndpointConfig {
            page_size,
            max_requests_per_second: 10_000.0,
            retry_limit: retries,
            backoff_ms: 1,
            ..EndpointConfig::new(format!("mem://{name}"), Dialect::Wikidata)
        }
    }

    fn flaky(n: usize, failures: usize, status: u16) -> Arc<Flaky> {
        Arc::new(Flaky {
            table: table(n),
            failures: AtomicUsize::new(failures),
            status,
            calls: AtomicUsize::new(0),
        })
    }

    #[test]
    fn pages_until_short_page() {
        let t = flaky(250, 0, 500);
        let c = SparqlClient::new(endpoint("paging", 100, 0), t.clone()).unwrap();
        let out = c.execute_query(&template(), &BTreeMap::new()).unwrap();
        assert_eq!(out.len(), 250);
        assert_eq!(t.calls.load(Ordering::SeqCst), 3);
    }

    #[test]
    fn exact_multiple_needs_trailing_empty_page() {
        let t = flaky(200, 0, 500);
        let c = SparqlClient::new(endpoint("exact", 100, 0), t.clone()).unwrap();
        assert_eq!(c.execute_query(&template(), &BTreeMap::new()).unwrap().len(), 200);
        assert_eq!(t.calls.load(Ordering::SeqCst), 3);
    }

    #[test]
    fn transient_failures_are_retried() {
        let t = flaky(5, 2, 503);
        let c = SparqlClient::new(endpoint("retry", 100, 2), t.clone()).unwrap();
        assert_eq!(c.execute_query(&template(), &BTreeMap::new()).unwrap().len(), 5);
        assert_eq!(t.calls.load(Ordering::SeqCst), 3);
    }

    #[test]
    fn retries_exhausted_reports_attempts() {
        let t = flaky(5, 10, 503);
        let c = SparqlClient::new(endpoint("exhaust", 100, 2), t).unwrap();
        match c.execute_query(&template(), &BTreeMap::new()) {
            Err(KgError::Http {
                status: 503,
                attempts: 3,
                ..
            }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn client_errors_are_not_retried() {
        let t = flaky(5, 1, 400);
        let c = SparqlClient::new(endpoint("nonretry", 100, 5), t.clone()).unwrap();
        assert!(c.execute_query(&template(), &BTreeMap::new()).is_err());
        assert_eq!(t.calls.load(Ordering::SeqCst), 1);
    }

    #[test]
    fn dialect_mismatch() {
        let mut ep = endpoint("dialect", 10, 0);
        ep.dialect = Dialect::EnDbpedia;
        let c = SparqlClient::new(ep, flaky(1, 0, 500)).unwrap();
        assert!(matches!(
            c.execute_query(&template(), &BTreeMap::new()),
            Err(KgError::DialectMismatch { .. })
        ));
    }

    #[test]
    fn limiter_spaces_requests() {
        let l = RateLimiter::new(50.0);
        let start = Instant::now();
        for _ in 0..5 {
            l.acquire();
        }
        assert!(start.elapsed() >= Duration::from_millis(80));
    }

    #[test]
    fn registry_keeps_slowest_rate() {
        let a = limiter_for("mem://shared-registry", 10.0);
        let b = limiter_for("mem://shared-registry", 2.0);
        assert!(Arc::ptr_eq(&a, &b));
        assert_eq!(a.interval(), Duration::from_millis(500));
    }

    #[test]
    fn paging_parse() {
        let (id, limit, offset) = paging_of("#kgdiv-template:x\nSELECT ...\nLIMIT 7\nOFFSET 14");
        assert_eq!((id, limit, offset), (Some("x"), Some(7), 14));
    }
}
