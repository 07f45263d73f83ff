use std::collections::BTreeMap;

use log::warn;

use super::ontology::LocalOntology;
use super::PipelineError;
use crate::diversity::{ActorType, FeatureSet};
use crate::kg::{Dialect, RdfTerm, SparqlClient, TemplateCatalog};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Triple {
    pub predicate: String,
    pub object: RdfTerm,
}

/// Outgoing triples of a resource.
pub trait TripleSource {
    fn dialect(&self) -> Dialect;
    fn triples(&self, subject: &str) -> Result<Vec<Triple>, PipelineError>;
}

/// Triples held in memory, e.g. loaded from a `subject,predicate,object` CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct InMemoryTriples {
    dialect: Dialect,
    by_subject: BTreeMap<String, Vec<Triple>>,
}

fn looks_like_iri(s: &str) -> bool {
    s.starts_with("http://") || s.starts_with("https://") || s.starts_with("urn:")
}

impl InMemoryTriples {
    pub fn new(dialect: Dialect) -> Self {
        InMemoryTriples {
            dialect,
            by_subject: BTreeMap::new(),
        }
    }

    pub fn add(&mut self, subject: &str, predicate: &str, object: RdfTerm) -> &mut Self {
        self.by_subject
            .entry(subject.to_owned())
            .or_default()
            .push(Triple {
                predicate: predicate.to_owned(),
                object,
            });
        self
    }

    /// Objects that look like IRIs become IRIs, anything else a literal.
    pub fn from_csv(dialect: Dialect, data: &[u8]) -> Result<Self, PipelineError> {
        let bad = |e: csv::Error| PipelineError::Io(format!("triples CSV: {e}"));
        let mut rdr = csv::Reader::from_reader(data);
        let header: Vec<String> = rdr.headers().map_err(bad)?.iter().map(|h| h.trim().to_owned()).collect();
        if header != ["subject", "predicate", "object"] {
            return Err(PipelineError::Io(format!(
                "triples CSV header `{}`, expected `subject,predicate,object`",
                header.join(",")
            )));
        }
        let mut out = Self::new(dialect);
        for rec in rdr.records() {
            let rec = rec.map_err(bad)?;
            let (s, p, o) = (rec.get(0).unwrap_or(""), rec.get(1).unwrap_or(""), rec.get(2).unwrap_or(""));
            let object = if looks_like_iri(o) {
                RdfTerm::iri(o)
            } else {
                RdfTerm::literal(o)
            };
            out.add(s.trim(), p.trim(), object);
        }
        Ok(out)
    }
}

impl TripleSource for InMemoryTriples {
    fn dialect(&self) -> Dialect {
        self.dialect
    }

    fn triples(&self, subject: &str) -> Result<Vec<Triple>, PipelineError> {
        Ok(self.by_subject.get(subject).cloned().unwrap_or_default())
    }
}

/// Live triples through the catalog's `triples` template.
pub struct SparqlTriples {
    client: SparqlClient,
    catalog: TemplateCatalog,
}

impl SparqlTriples {
    pub fn new(client: SparqlClient, catalog: TemplateCatalog) -> Self {
        SparqlTriples { client, catalog }
    }
}

impl TripleSource for SparqlTriples {
    fn dialect(&self) -> Dialect {
        self.client.endpoint().dialect
    }

    fn triples(&self, subject: &str) -> Result<Vec<Triple>, PipelineError> {
        let err = |e: crate::kg::KgError| PipelineError::Retrieval {
            resource: subject.to_owned(),
            message: e.to_string(),
        };
        let template = self.catalog.get("triples", self.dialect()).map_err(err)?;
        let params = BTreeMap::from([("subject".to_string(), subject.to_string())]);
        let table = self.client.execute_query(template, &params).map_err(err)?;
        Ok(table
            .rows
            .into_iter()
            .filter_map(|mut row| {
                let p = row.remove("p")?;
                let o = row.remove("o")?;
                Some(Triple {
                    predicate: p.value().to_owned(),
                    object: o,
                })
            })
            .collect())
    }
}

/// Where a feature came from: the root itself or a linked resource.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct FeatureProvenance {
    pub name: String,
    pub value: String,
    pub via: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Enrichment {
    pub actor_type: Option<ActorType>,
    pub features: FeatureSet,
    pub provenance: Vec<FeatureProvenance>,
    /// Linked resources that could not be retrieved.
    pub warnings: Vec<String>,
}

fn actor_type(triples: &[Triple], dialect: Dialect, ontology: &LocalOntology) -> Option<ActorType> {
    triples
        .iter()
        .filter(|t| ontology.is_type_predicate(dialect, &t.predicate))
        .filter_map(|t| ontology.actor_type_of_class(dialect, t.object.value()))
        .min()
}

/// Maps a resource's predicates to features, then does the same, once, for
/// every linked resource that is itself an actor, prefixing those feature
/// names with the linking feature (`party.ideology`). Nothing beyond one hop.
pub fn enrich_entity(
    root_id: &str,
    source: &dyn TripleSource,
    ontology: &LocalOntology,
) -> Result<Enrichment, PipelineError> {
    let dialect = source.dialect();
    let root = source.triples(root_id)?;
    let mut out = Enrichment {
        actor_type: actor_type(&root, dialect, ontology),
        ..Default::default()
    };
    let mut linked_cache: BTreeMap<String, Option<Vec<Triple>>> = BTreeMap::new();

    for t in &root {
        let Some(feature) = ontology.feature_for(dialect, &t.predicate) else {
            continue;
        };
        let value = t.object.value();
        if out.features.insert(feature, value) {
            out.provenance.push(FeatureProvenance {
                name: feature.to_owned(),
                value: value.to_owned(),
                via: root_id.to_owned(),
            });
        }
        if !t.object.is_iri() || value == root_id {
            continue;
        }
        let linked = linked_cache.entry(value.to_owned()).or_insert_with(|| {
            match source.triples(value) {
                Ok(ts) => Some(ts),
                Err(e) => {
                    warn!("enriching {root_id}: {e}");
                    out.warnings.push(e.to_string());
                    None
                }
            }
        });
        let Some(linked) = linked else { continue };
        if actor_type(linked, dialect, ontology).is_none() {
            continue;
        }
        for lt in linked.iter() {
            let Some(sub) = ontology.feature_for(dialect, &lt.predicate) else {
                continue;
            };
            let name = format!("{feature}.{sub}");
            let v = lt.object.value();
            if out.features.insert(name.clone(), v) {
                out.provenance.push(FeatureProvenance {
                    name,
                    value: v.to_owned(),
                    via: value.to_owned(),
                });
            }
        }
    }
    out.provenance.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
    const DBO: &str = "http://dbpedia.org/ontology/";
    const RES: &str = "http://dbpedia.org/resource/";

    fn dbo(x: &str) -> String {
        format!("{DBO}{x}")
    }

    fn res(x: &str) -> String {
        format!("{RES}{x}")
    }

    fn source() -> InMemoryTriples {
        let mut s = InMemoryTriples::new(Dialect::EnDbpedia);
        s.add(&res("X"), RDF_TYPE, RdfTerm::iri(dbo("Person")))
            .add(&res("X"), &dbo("party"), RdfTerm::iri(res("Y")))
            .add(&res("X"), &dbo("country"), RdfTerm::iri(res("C")))
            .add(&res("X"), &dbo("wikiPageID"), RdfTerm::literal("42"))
            .add(&res("Y"), RDF_TYPE, RdfTerm::iri(dbo("PoliticalParty")))
            .add(&res("Y"), &dbo("ideology"), RdfTerm::iri(res("Z")))
            .add(&res("Z"), RDF_TYPE, RdfTerm::iri(dbo("Organisation")))
            .add(&res("Z"), &dbo("country"), RdfTerm::iri(res("Hop2")))
            .add(&res("C"), RDF_TYPE, RdfTerm::iri(dbo("Country")))
            .add(&res("C"), &dbo("governmentType"), RdfTerm::iri(res("G")));
        s
    }

    #[test]
    fn one_hop_expansion() {
        let e = enrich_entity(&res("X"), &source(), &LocalOntology::builtin()).unwrap();
        assert_eq!(e.actor_type, Some(ActorType::Person));
        let mut got: Vec<_> = e.features.iter().map(|f| (f.name.clone(), f.value.clone())).collect();
        got.sort();
        assert_eq!(
            got,
            [
                ("country".to_string(), res("C")),
                ("country.government-type".to_string(), res("G")),
                ("party".to_string(), res("Y")),
                ("party.ideology".to_string(), res("Z")),
            ]
        );
        assert!(e.provenance.iter().any(|p| p.name == "party.ideology" && p.via == res("Y")));
    }

    #[test]
    fn unmapped_only_is_empty() {
        let mut s = InMemoryTriples::new(Dialect::EnDbpedia);
        s.add("urn:a", &dbo("wikiPageID"), RdfTerm::literal("1"));
        let e = enrich_entity("urn:a", &s, &LocalOntology::builtin()).unwrap();
        assert!(e.features.is_empty());
        assert_eq!(e.actor_type, None);
    }

    struct Flaky(InMemoryTriples, String);

    impl TripleSource for Flaky {
        fn dialect(&self) -> Dialect {
            self.0.dialect()
        }
        fn triples(&self, subject: &str) -> Result<Vec<Triple>, PipelineError> {
            if subject == self.1 {
                return Err(PipelineError::Retrieval {
                    resource: subject.into(),
                    message: "HTTP 503".into(),
                });
            }
            self.0.triples(subject)
        }
    }

    #[test]
    fn linked_failure_degrades() {
        let flaky = Flaky(source(), res("Y"));
        let e = enrich_entity(&res("X"), &flaky, &LocalOntology::builtin()).unwrap();
        assert!(e.features.contains("party", &res("Y")));
        assert_eq!(e.features.values("party.ideology").count(), 0);
        assert_eq!(e.warnings.len(), 1);

        let root_fails = Flaky(source(), res("X"));
        assert!(enrich_entity(&res("X"), &root_fails, &LocalOntology::builtin()).is_err());
    }

    #[test]
    fn csv_loading() {
        let data = b"subject,predicate,object\nurn:a,http://dbpedia.org/ontology/party,urn:b\nurn:b,http://dbpedia.org/ontology/ideology,Liberalism\n";
        let s = InMemoryTriples::from_csv(Dialect::EnDbpedia, data).unwrap();
        assert!(s.triples("urn:a").unwrap()[0].object.is_iri());
        assert!(!s.triples("urn:b").unwrap()[0].object.is_iri());
        assert!(InMemoryTriples::from_csv(Dialect::EnDbpedia, b"s,p\n").is_err());
    }
}
