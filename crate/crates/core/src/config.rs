//! Run configuration: one TOML file with explicit paths. Only endpoint URLs
//! may be overridden from the environment (`KGDIV_ENDPOINT_<DIALECT>`).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use crate::audit::{parse_schedule, BaselinePolicy, Body, TimePoint};
use crate::diversity::{DiversityParams, DEFAULT_METRIC};
use crate::kg::{Dialect, EndpointConfig};

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("cannot read config {path}: {message}")]
    Read { path: String, message: String },
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error("{what} `{path}` does not exist")]
    MissingFile { what: String, path: String },
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuditSection {
    pub map: Option<PathBuf>,
    pub parties: Option<PathBuf>,
    pub baseline: Option<PathBuf>,
    /// Years (`1990`) or dates (`"1990-01-01"`).
    pub schedule: Option<Vec<toml::Value>>,
    pub body: Option<String>,
    pub policy: Option<String>,
    pub max_unmapped: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiversitySection {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub metric: Option<String>,
    pub rules: Option<PathBuf>,
    pub annotator_url: Option<String>,
    /// `subject,predicate,object` CSV used as the knowledge base.
    pub triples: Option<PathBuf>,
    pub kb_dialect: Option<Dialect>,
    pub ontology: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub endpoints: BTreeMap<Dialect, EndpointConfig>,
    pub template_catalog: Option<PathBuf>,
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub audit: AuditSection,
    #[serde(default)]
    pub diversity: DiversitySection,
}

fn resolve(base: &Path, p: &mut Option<PathBuf>) {
    if let Some(path) = p {
        if path.is_relative() {
            *path = base.join(&*path);
        }
    }
}

fn require(what: &str, p: &Option<PathBuf>) -> Result<(), ConfigError> {
    match p {
        Some(path) if !path.exists() => Err(ConfigError::MissingFile {
            what: what.to_owned(),
            path: path.display().to_string(),
        }),
        _ => Ok(()),
    }
}

impl RunConfig {
    /// Parses the file; relative paths are taken relative to its directory
    /// and must exist.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Read {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        let mut cfg = Self::from_toml(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        resolve(base, &mut cfg.template_catalog);
        resolve(base, &mut cfg.output_dir);
        resolve(base, &mut cfg.audit.map);
        resolve(base, &mut cfg.audit.parties);
        resolve(base, &mut cfg.audit.baseline);
        resolve(base, &mut cfg.diversity.rules);
        resolve(base, &mut cfg.diversity.triples);
        resolve(base, &mut cfg.diversity.ontology);
        cfg.check_files()?;
        Ok(cfg)
    }

    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let cfg: RunConfig =
            toml::from_str(text).map_err(|e| ConfigError::Invalid(e.to_string()))?;
        for (d, e) in &cfg.endpoints {
            if e.dialect != *d {
                return Err(ConfigError::Invalid(format!(
                    "endpoint listed under {d} declares dialect {}",
                    e.dialect
                )));
            }
            e.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        }
        cfg.schedule()?;
        cfg.params()?;
        cfg.policy()?;
        cfg.body()?;
        Ok(cfg)
    }

    fn check_files(&self) -> Result<(), ConfigError> {
        require("template catalog", &self.template_catalog)?;
        require("normalization map", &self.audit.map)?;
        require("party table", &self.audit.parties)?;
        require("baseline file", &self.audit.baseline)?;
        require("rule file", &self.diversity.rules)?;
        require("triples file", &self.diversity.triples)?;
        require("ontology", &self.diversity.ontology)
    }

    /// Endpoint for `dialect`: configured or public, with the URL taken from
    /// `KGDIV_ENDPOINT_<DIALECT>` when set.
    pub fn endpoint(&self, dialect: Dialect) -> EndpointConfig {
        let mut e = self
            .endpoints
            .get(&dialect)
            .cloned()
            .unwrap_or_else(|| EndpointConfig::public(dialect));
        if let Ok(url) = std::env::var(dialect.env_var()) {
            if !url.trim().is_empty() {
                e.url = url.trim().to_owned();
            }
        }
        e
    }

    pub fn schedule(&self) -> Result<Option<Vec<TimePoint>>, ConfigError> {
        let Some(items) = &self.audit.schedule else {
            return Ok(None);
        };
        let joined = items
            .iter()
            .map(|v| match v {
                toml::Value::Integer(i) => Ok(i.to_string()),
                toml::Value::String(s) => Ok(s.clone()),
                other => Err(ConfigError::Invalid(format!("schedule entry {other}"))),
            })
            .collect::<Result<Vec<_>, _>>()?
            .join(",");
        parse_schedule(&joined)
            .map(Some)
            .map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    pub fn params(&self) -> Result<DiversityParams, ConfigError> {
        let d = DiversityParams::default();
        DiversityParams::new(
            self.diversity.alpha.unwrap_or(d.alpha),
            self.diversity.beta.unwrap_or(d.beta),
        )
        .map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    pub fn metric(&self) -> &str {
        self.diversity.metric.as_deref().unwrap_or(DEFAULT_METRIC)
    }

    pub fn policy(&self) -> Result<Option<BaselinePolicy>, ConfigError> {
        self.audit
            .policy
            .as_deref()
            .map(str::parse)
            .transpose()
            .map_err(|e: crate::audit::AuditError| ConfigError::Invalid(e.to_string()))
    }

    pub fn body(&self) -> Result<Option<Body>, ConfigError> {
        self.audit
            .body
            .as_deref()
            .map(str::parse)
            .transpose()
            .map_err(|e: crate::audit::AuditError| ConfigError::Invalid(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_config() {
        let cfg = RunConfig::from_toml(
            r#"
output_dir = "out"

[endpoints.wikidata]
url = "http://localhost:9999/sparql"
dialect = "wikidata"
page_size = 500
max_requests_per_second = 2.0
retry_limit = 1

[audit]
schedule = [2020, "1990-01-01"]
body = "VP"
policy = "closest"

[diversity]
alpha = 0.5
beta = 2.0
"#,
        )
        .unwrap();
        assert_eq!(cfg.endpoint(Dialect::Wikidata).page_size, 500);
        assert_eq!(cfg.endpoint(Dialect::EnDbpedia).url, "https://dbpedia.org/sparql");
        assert_eq!(cfg.schedule().unwrap().unwrap()[0], TimePoint::year(1990));
        assert_eq!(cfg.body().unwrap(), Some(Body::Vp));
        assert_eq!(cfg.policy().unwrap(), Some(BaselinePolicy::ClosestInTime));
        assert_eq!(cfg.params().unwrap().alpha, 0.5);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(RunConfig::from_toml("[diversity]\nalpha = -1.0\n").is_err());
        assert!(RunConfig::from_toml("[audit]\nschedule = []\n").is_err());
        assert!(RunConfig::from_toml("bogus = 1\n").is_err());
        let mismatch = "[endpoints.wikidata]\nurl='u'\ndialect='en-dbpedia'\npage_size=1\nmax_requests_per_second=1.0\nretry_limit=0\n";
        assert!(RunConfig::from_toml(mismatch).is_err());
    }

    #[test]
    fn missing_files_detected() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("run.toml");
        std::fs::write(&p, "[audit]\nbaseline = \"nope.csv\"\n").unwrap();
        assert!(matches!(RunConfig::load(&p), Err(ConfigError::MissingFile { .. })));
    }
}
