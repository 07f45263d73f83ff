use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::Deserialize;

use super::PipelineError;
use crate::diversity::ActorType;
use crate::kg::Dialect;

const BUILTIN: &str = include_str!("../../ontology/default.toml");

#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct DialectOntology {
    type_predicates: BTreeSet<String>,
    classes: BTreeMap<String, ActorType>,
    properties: BTreeMap<String, String>,
}

/// Per-dialect predicate → feature-name mapping and actor-type classes.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LocalOntology {
    dialects: BTreeMap<Dialect, DialectOntology>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDialect {
    #[serde(default)]
    type_predicates: Vec<String>,
    #[serde(default)]
    person: Vec<String>,
    #[serde(default)]
    organisation: Vec<String>,
    #[serde(default, rename = "geopolitical-entity")]
    geopolitical_entity: Vec<String>,
    #[serde(default)]
    properties: BTreeMap<String, String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOntology {
    dialects: BTreeMap<String, RawDialect>,
}

impl LocalOntology {
    pub fn builtin() -> Self {
        Self::from_toml(BUILTIN).expect("bundled ontology is valid")
    }

    pub fn from_toml(text: &str) -> Result<Self, PipelineError> {
        let raw: RawOntology =
            toml::from_str(text).map_err(|e| PipelineError::InvalidOntology(e.to_string()))?;
        let mut out = LocalOntology::default();
        for (name, d) in raw.dialects {
            let dialect: Dialect = name.parse().map_err(PipelineError::InvalidOntology)?;
            let mut o = DialectOntology {
                type_predicates: d.type_predicates.into_iter().collect(),
                ..Default::default()
            };
            for (list, ty) in [
                (d.person, ActorType::Person),
                (d.organisation, ActorType::Organisation),
                (d.geopolitical_entity, ActorType::GeopoliticalEntity),
            ] {
                for class in list {
                    if let Some(prev) = o.classes.insert(class.clone(), ty) {
                        if prev != ty {
                            return Err(PipelineError::InvalidOntology(format!(
                                "{dialect}: class {class} listed under two actor types"
                            )));
                        }
                    }
                }
            }
            for (pred, feature) in d.properties {
                if feature.trim().is_empty() {
                    return Err(PipelineError::InvalidOntology(format!(
                        "{dialect}: empty feature name for {pred}"
                    )));
                }
                o.properties.insert(pred, feature.trim().to_owned());
            }
            out.dialects.insert(dialect, o);
        }
        Ok(out)
    }

    pub fn load(path: &Path) -> Result<Self, PipelineError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| PipelineError::Io(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn feature_for(&self, dialect: Dialect, predicate: &str) -> Option<&str> {
        self.dialects
            .get(&dialect)?
            .properties
            .get(predicate)
            .map(String::as_str)
    }

    pub fn is_type_predicate(&self, dialect: Dialect, predicate: &str) -> bool {
        self.dialects
            .get(&dialect)
            .is_some_and(|d| d.type_predicates.contains(predicate))
    }

    pub fn actor_type_of_class(&self, dialect: Dialect, class: &str) -> Option<ActorType> {
        self.dialects.get(&dialect)?.classes.get(class).copied()
    }

    /// Dialect owning an IRI, judged by host.
    pub fn dialect_of(iri: &str) -> Option<Dialect> {
        let host = iri.split("://").nth(1)?.split('/').next()?;
        match host {
            "dbpedia.org" => Some(Dialect::EnDbpedia),
            "nl.dbpedia.org" => Some(Dialect::NlDbpedia),
            "www.wikidata.org" | "wikidata.org" => Some(Dialect::Wikidata),
            _ => None,
        }
    }
}
