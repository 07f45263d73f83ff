//! Linked-data clients: parameterized SPARQL against DBpedia (English, Dutch)
//! and Wikidata, with paging, rate limiting and snapshot CSV materialization.

mod client;
mod rdf;
mod results;
mod snapshot;
mod template;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use client::{
    execute_query, limiter_for, FixtureTransport, HttpTransport, RateLimiter, SparqlClient,
    Transport, TransportResponse,
};
pub use rdf::{RdfTerm, ResultTable, Row, TermKind};
pub use results::{parse_results, serialize_results, ResultFormat};
pub use snapshot::{
    fetch_parties, fetch_politicians, normalize_date, DateRole, PartyRow, PoliticianRow, OVERRIDES_CSV,
    Snapshot, PARTIES_CSV, PARTIES_HEADER, POLITICIANS_CSV, POLITICIANS_HEADER,
};
#[doc(hidden)]
pub use snapshot::csv_bytes;
pub use template::{QueryTemplate, TemplateCatalog, TEMPLATE_MARKER};

#[derive(Debug, Error, PartialEq)]
pub enum KgError {
    #[error("HTTP {status} from {url} after {attempts} attempt(s): {message}")]
    Http {
        url: String,
        status: u16,
        attempts: u32,
        message: String,
    },
    #[error("transport failure talking to {url} after {attempts} attempt(s): {message}")]
    Transport {
        url: String,
        attempts: u32,
        message: String,
    },
    #[error("malformed result document: {0}")]
    Malformed(String),
    #[error("unknown binding kind `{0}`")]
    UnknownBindingKind(String),
    #[error("template `{template}` is for {template_dialect}, endpoint speaks {endpoint_dialect}")]
    DialectMismatch {
        template: String,
        template_dialect: Dialect,
        endpoint_dialect: Dialect,
    },
    #[error("placeholder `{0}` is not bound")]
    UnboundPlaceholder(String),
    #[error("invalid template `{id}`: {reason}")]
    InvalidTemplate { id: String, reason: String },
    #[error("no template `{id}` for {dialect}")]
    MissingTemplate { id: String, dialect: Dialect },
    #[error("invalid endpoint configuration: {0}")]
    InvalidConfig(String),
    #[error("fixture error: {0}")]
    Fixture(String),
    #[error("snapshot I/O: {0}")]
    Io(String),
}

impl KgError {
    /// Failures worth retrying: network trouble, throttling and server errors.
    pub fn is_transient(&self) -> bool {
        match self {
            KgError::Transport { .. } => true,
            KgError::Http { status, .. } => *status == 429 || *status >= 500,
            _ => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Dialect {
    #[serde(rename = "en-dbpedia")]
    EnDbpedia,
    #[serde(rename = "nl-dbpedia")]
    NlDbpedia,
    #[serde(rename = "wikidata")]
    Wikidata,
}

impl Dialect {
    pub const ALL: [Dialect; 3] = [Dialect::EnDbpedia, Dialect::NlDbpedia, Dialect::Wikidata];

    pub fn as_str(self) -> &'static str {
        match self {
            Dialect::EnDbpedia => "en-dbpedia",
            Dialect::NlDbpedia => "nl-dbpedia",
            Dialect::Wikidata => "wikidata",
        }
    }

    pub fn default_url(self) -> &'static str {
        match self {
            Dialect::EnDbpedia => "https://dbpedia.org/sparql",
            Dialect::NlDbpedia => "https://nl.dbpedia.org/sparql",
            Dialect::Wikidata => "https://query.wikidata.org/sparql",
        }
    }

    /// Name of the environment variable overriding this dialect's URL,
    /// e.g. `KGDIV_ENDPOINT_EN_DBPEDIA`.
    pub fn env_var(self) -> String {
        format!(
            "KGDIV_ENDPOINT_{}",
            self.as_str().to_ascii_uppercase().replace('-', "_")
        )
    }
}

impl fmt::Display for Dialect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Dialect {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Dialect::ALL
            .into_iter()
            .find(|d| d.as_str() == s)
            .ok_or_else(|| format!("unknown source `{s}` (expected en-dbpedia, nl-dbpedia or wikidata)"))
    }
}

fn default_timeout() -> u64 {
    30
}

fn default_backoff() -> u64 {
    500
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EndpointConfig {
    pub url: String,
    pub dialect: Dialect,
    pub page_size: usize,
    pub max_requests_per_second: f64,
    pub retry_limit: u32,
    #[serde(default = "default_timeout")]
    pub timeout_secs: u64,
    /// First retry delay; doubles on every further attempt.
    #[serde(default = "default_backoff")]
    pub backoff_ms: u64,
}

impl EndpointConfig {
    pub fn new(url: impl Into<String>, dialect: Dialect) -> Self {
        EndpointConfig {
            url: url.into(),
            dialect,
            page_size: 10_000,
            max_requests_per_second: 1.0,
            retry_limit: 3,
            timeout_secs: default_timeout(),
            backoff_ms: default_backoff(),
        }
    }

    /// Public endpoint for `dialect` with conservative defaults.
    pub fn public(dialect: Dialect) -> Self {
        let mut cfg = Self::new(dialect.default_url(), dialect);
        if dialect == Dialect::Wikidata {
            cfg.page_size = 5_000;
        }
        cfg
    }

    pub fn validate(&self) -> Result<(), KgError> {
        if self.page_size == 0 {
            return Err(KgError::InvalidConfig("page_size must be >= 1".into()));
        }
        if !(self.max_requests_per_second.is_finite() && self.max_requests_per_second > 0.0) {
            return Err(KgError::InvalidConfig(
                "max_requests_per_second must be a positive number".into(),
            ));
        }
        if self.url.trim().is_empty() {
            return Err(KgError::InvalidConfig("url is empty".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dialect_names_round_trip() {
        for d in Dialect::ALL {
            assert_eq!(d.as_str().parse::<Dialect>().unwrap(), d);
        }
        assert!("fr-dbpedia".parse::<Dialect>().is_err());
        assert_eq!(Dialect::NlDbpedia.env_var(), "KGDIV_ENDPOINT_NL_DBPEDIA");
    }

    #[test]
    fn endpoint_validation() {
        let mut cfg = EndpointConfig::public(Dialect::EnDbpedia);
        assert!(cfg.validate().is_ok());
        cfg.page_size = 0;
        assert!(cfg.validate().is_err());
        cfg.page_size = 1;
        cfg.max_requests_per_second = 0.0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn transient_classification() {
        let http = |status| KgError::Http {
            url: "u".into(),
            status,
            attempts: 1,
            message: String::new(),
        };
        assert!(http(503).is_transient());
        assert!(http(429).is_transient());
        assert!(!http(400).is_transient());
        assert!(!KgError::Malformed("x".into()).is_transient());
    }
}
