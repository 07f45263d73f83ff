mod common;

use std::fs;

use common::fixtures;
use kgdiv_core::diversity::{
    compute_disparity, diversity_of, ActorType, DiversityParams, EntityId, EntityRecord, JaccardDistance,
};
use kgdiv_core::kg::Dialect;
use kgdiv_core::pipeline::{
    aggregate_mentions, annotate, enrich_entity, load_rules, match_rules, parse_annotations,
    AnnotationEndpoint, InMemoryTriples, LocalOntology, MatchLayer, PipelineError, Provenance, TextDocument, Token,
};

struct Recorded(Vec<u8>);

impl AnnotationEndpoint for Recorded {
    fn url(&self) -> &str {
        "recorded://spotlight"
    }
    fn request(&self, _text: &str) -> Result<Vec<u8>, PipelineError> {
        Ok(self.0.clone())
    }
}

#[test]
fn spotlight_fixture_parses_to_one_mention() {
    let body = fs::read(fixtures().join("spotlight/one_resource.json")).unwrap();
    let doc = TextDocument::new("d", "Bart De Wever leidt de N-VA.");
    let mentions = annotate(&doc, &Recorded(body)).unwrap();
    assert_eq!(mentions.len(), 1);
    let m = &mentions[0];
    assert_eq!((m.char_start, m.char_end), (0, 13));
    assert_eq!(m.surface, "Bart De Wever");
    assert_eq!(m.resolved_id, Some(EntityId::new("http://dbpedia.org/resource/Bart_De_Wever")));
    assert_eq!(m.provenance, Provenance::Annotator);
    assert_eq!(m.type_hint, Some(ActorType::Person));
}

#[test]
fn spotlight_without_resources_is_empty() {
    let body = fs::read(fixtures().join("spotlight/empty.json")).unwrap();
    let doc = TextDocument::new("d", "Het regent.");
    assert!(parse_annotations(&body, &doc).unwrap().is_empty());
}

#[test]
fn offsets_outside_text_are_rejected() {
    let body = br#"{"Resources":[{"@URI":"urn:x","@surfaceForm":"abc","@offset":"40"}]}"#;
    let doc = TextDocument::new("d", "short");
    assert!(matches!(parse_annotations(body, &doc), Err(PipelineError::MalformedAnnotation(_))));
}

fn arrivals() -> TextDocument {
    TextDocument::new("c", "Refugees arrived in Ghent")
        .with_tokens(vec![
            Token { surface: "Refugees".into(), lemma: "refugee".into(), char_start: 0, char_end: 8 },
            Token { surface: "arrived".into(), lemma: "arrive".into(), char_start: 9, char_end: 16 },
            Token { surface: "in".into(), lemma: "in".into(), char_start: 17, char_end: 19 },
            Token { surface: "Ghent".into(), lemma: "Ghent".into(), char_start: 20, char_end: 25 },
        ])
        .unwrap()
}

#[test]
fn rules_file_matches_surface_and_lemma_layers() {
    let rules = load_rules(&fixtures().join("score/rules.csv")).unwrap();
    let mentions = match_rules(&arrivals(), &rules).unwrap();
    let keys: Vec<String> = mentions.iter().map(|m| m.entity_key().0).collect();
    assert_eq!(keys, ["unnamed:refugee", "http://dbpedia.org/resource/Ghent"]);
    assert_eq!(mentions[0].category.as_deref(), Some("refugee"));
    assert!(mentions[0].resolved_id.is_none());
}

#[test]
fn knowledge_base_to_delta() {
    let kb = InMemoryTriples::from_csv(
        Dialect::EnDbpedia,
        &fs::read(fixtures().join("score/kb.csv")).unwrap(),
    )
    .unwrap();
    let ontology = LocalOntology::builtin();
    let rules = load_rules(&fixtures().join("score/rules.csv")).unwrap();
    let doc = TextDocument::new("a", "De N-VA en Groen debatteren over het budget.");
    let surface: Vec<_> = rules.into_iter().filter(|r| r.layer == MatchLayer::Surface).collect();
    assert!(matches!(
        match_rules(&doc, &load_rules(&fixtures().join("score/rules.csv")).unwrap()),
        Err(PipelineError::MissingLemmas(_))
    ));
    let counts = aggregate_mentions(&match_rules(&doc, &surface).unwrap());
    assert_eq!(counts.len(), 2);

    let entities: Vec<EntityRecord> = counts
        .keys()
        .map(|id| {
            let e = enrich_entity(id.as_str(), &kb, &ontology).unwrap();
            assert_eq!(e.actor_type, Some(ActorType::Organisation));
            EntityRecord::new(id.as_str(), e.actor_type.unwrap(), e.features)
        })
        .collect();
    let d = compute_disparity(&entities, "jaccard").unwrap();
    assert_eq!(d.get(&entities[0].id, &entities[1].id), Some(1.0));
    let r = diversity_of(&counts, &entities, &JaccardDistance, DiversityParams::default()).unwrap();
    assert!((r.delta - 0.5).abs() < 1e-12);

    // Ghent inherits the government type of its country through one hop.
    let ghent = enrich_entity("http://dbpedia.org/resource/Ghent", &kb, &ontology).unwrap();
    assert_eq!(ghent.actor_type, Some(ActorType::GeopoliticalEntity));
    assert!(ghent.features.contains(
        "country.government-type",
        "http://dbpedia.org/resource/Federal_parliamentary_constitutional_monarchy"
    ));
}
