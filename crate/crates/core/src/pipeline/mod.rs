//! Actor detection in texts (pattern rules and an external entity-linking
//! service) and enrichment of linked entities into feature sets.

mod annotate;
mod enrich;
mod ontology;
mod rules;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::diversity::{ActorType, EntityId};

pub use annotate::{
    annotate, parse_annotations, AnnotationEndpoint, HttpAnnotationEndpoint, DEFAULT_CONFIDENCE,
};
pub use enrich::{
    enrich_entity, Enrichment, FeatureProvenance, InMemoryTriples, SparqlTriples, Triple,
    TripleSource,
};
pub use ontology::LocalOntology;
pub use rules::{load_rules, match_rules, parse_rules, RULES_HEADER};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("document `{0}` has no lemma layer; lemma rules need one")]
    MissingLemmas(String),
    #[error("invalid document `{doc_id}`: {reason}")]
    InvalidDocument { doc_id: String, reason: String },
    #[error("invalid rule: {0}")]
    InvalidRule(String),
    #[error("annotation service unreachable at {url}: {message}")]
    AnnotatorTransport { url: String, message: String },
    #[error("malformed annotation response: {0}")]
    MalformedAnnotation(String),
    #[error("could not retrieve triples for {resource}: {message}")]
    Retrieval { resource: String, message: String },
    #[error("invalid ontology: {0}")]
    InvalidOntology(String),
    #[error("{0}")]
    Io(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub lemma: String,
    pub char_start: usize,
    pub char_end: usize,
}

/// A text with an optional caller-supplied token/lemma layer. Offsets count
/// Unicode scalar values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TextDocument {
    pub doc_id: String,
    pub text: String,
    tokens: Option<Vec<Token>>,
    char_len: usize,
}

impl TextDocument {
    pub fn new(doc_id: impl Into<String>, text: impl Into<String>) -> Self {
        let text = text.into();
        TextDocument {
            doc_id: doc_id.into(),
            char_len: text.chars().count(),
            text,
            tokens: None,
        }
    }

    /// Attaches tokens; spans must be in bounds, ascending and disjoint.
    pub fn with_tokens(mut self, tokens: Vec<Token>) -> Result<Self, PipelineError> {
        let mut prev_end = 0;
        for t in &tokens {
            if t.char_start >= t.char_end || t.char_end > self.char_len || t.char_start < prev_end {
                return Err(PipelineError::InvalidDocument {
                    doc_id: self.doc_id.clone(),
                    reason: format!(
                        "token `{}` span [{}, {}) is out of bounds or overlaps",
                        t.surface, t.char_start, t.char_end
                    ),
                });
            }
            prev_end = t.char_end;
        }
        self.tokens = Some(tokens);
        Ok(self)
    }

    pub fn tokens(&self) -> Option<&[Token]> {
        self.tokens.as_deref()
    }

    pub fn char_len(&self) -> usize {
        self.char_len
    }

    /// Text between two character offsets.
    pub fn slice(&self, char_start: usize, char_end: usize) -> String {
        self.text
            .chars()
            .skip(char_start)
            .take(char_end.saturating_sub(char_start))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchLayer {
    Surface,
    Lemma,
}

/// What a rule points at: a knowledge-base resource or a named category of
/// unnamed actors ("refugee").
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum RuleTarget {
    Resource(EntityId),
    Unnamed(String),
}

pub const UNNAMED_PREFIX: &str = "unnamed:";

impl RuleTarget {
    pub fn parse(s: &str) -> Result<Self, PipelineError> {
        let s = s.trim();
        match s.strip_prefix(UNNAMED_PREFIX) {
            Some(label) if !label.trim().is_empty() => {
                Ok(RuleTarget::Unnamed(label.trim().to_owned()))
            }
            Some(_) => Err(PipelineError::InvalidRule("empty unnamed category".into())),
            None if s.is_empty() => Err(PipelineError::InvalidRule("empty target".into())),
            None => Ok(RuleTarget::Resource(EntityId::new(s))),
        }
    }

    pub fn key(&self) -> EntityId {
        match self {
            RuleTarget::Resource(id) => id.clone(),
            RuleTarget::Unnamed(label) => EntityId::new(format!("{UNNAMED_PREFIX}{label}")),
        }
    }
}

impl fmt::Display for RuleTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key().as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchRule {
    pub pattern: String,
    pub case_sensitive: bool,
    pub layer: MatchLayer,
    pub target: RuleTarget,
}

impl MatchRule {
    pub fn new(
        pattern: impl Into<String>,
        case_sensitive: bool,
        layer: MatchLayer,
        target: RuleTarget,
    ) -> Result<Self, PipelineError> {
        let pattern = pattern.into();
        if pattern.trim().is_empty() {
            return Err(PipelineError::InvalidRule("empty pattern".into()));
        }
        Ok(MatchRule {
            pattern,
            case_sensitive,
            layer,
            target,
        })
    }

    pub fn surface(pattern: &str, case_sensitive: bool, target: &str) -> Result<Self, PipelineError> {
        Self::new(pattern, case_sensitive, MatchLayer::Surface, RuleTarget::parse(target)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Provenance {
    Rule,
    Annotator,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntityMention {
    pub doc_id: String,
    pub char_start: usize,
    pub char_end: usize,
    pub surface: String,
    pub resolved_id: Option<EntityId>,
    /// Unnamed-actor category for rule hits without a resource.
    pub category: Option<String>,
    pub provenance: Provenance,
    /// Actor type suggested by the annotation service, if any.
    pub type_hint: Option<ActorType>,
}

impl EntityMention {
    /// Counting key: the resource, else `unnamed:<category>`, else the surface.
    pub fn entity_key(&self) -> EntityId {
        if let Some(id) = &self.resolved_id {
            return id.clone();
        }
        match &self.category {
            Some(c) => EntityId::new(format!("{UNNAMED_PREFIX}{c}")),
            None => EntityId::new(format!("surface:{}", self.surface)),
        }
    }
}

/// Mentions per entity.
pub fn aggregate_mentions(mentions: &[EntityMention]) -> BTreeMap<EntityId, u64> {
    let mut out = BTreeMap::new();
    for m in mentions {
        *out.entry(m.entity_key()).or_insert(0) += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mention(id: Option<&str>, cat: Option<&str>, prov: Provenance) -> EntityMention {
        EntityMention {
            doc_id: "d".into(),
            char_start: 0,
            char_end: 1,
            surface: "x".into(),
            resolved_id: id.map(EntityId::new),
            category: cat.map(str::to_owned),
            provenance: prov,
            type_hint: None,
        }
    }

    #[test]
    fn aggregation() {
        assert!(aggregate_mentions(&[]).is_empty());
        let ms = [
            mention(Some("A"), None, Provenance::Rule),
            mention(Some("A"), None, Provenance::Annotator),
            mention(Some("A"), None, Provenance::Rule),
            mention(Some("B"), None, Provenance::Annotator),
            mention(None, Some("refugee"), Provenance::Rule),
        ];
        let c = aggregate_mentions(&ms);
        assert_eq!(c[&EntityId::new("A")], 3);
        assert_eq!(c[&EntityId::new("B")], 1);
        assert_eq!(c[&EntityId::new("unnamed:refugee")], 1);
        assert_eq!(c.values().sum::<u64>(), ms.len() as u64);
    }

    #[test]
    fn targets() {
        assert_eq!(
            RuleTarget::parse("unnamed:refugee").unwrap(),
            RuleTarget::Unnamed("refugee".into())
        );
        assert!(RuleTarget::parse("unnamed:").is_err());
        assert!(RuleTarget::parse(" ").is_err());
        assert!(MatchRule::surface("", true, "X").is_err());
    }

    #[test]
    fn token_validation() {
        let doc = TextDocument::new("d", "ab cd");
        let tok = |s, e| Token {
            surface: String::new(),
            lemma: String::new(),
            char_start: s,
            char_end: e,
        };
        assert!(doc.clone().with_tokens(vec![tok(0, 2), tok(3, 5)]).is_ok());
        assert!(doc.clone().with_tokens(vec![tok(0, 2), tok(1, 5)]).is_err());
        assert!(doc.with_tokens(vec![tok(3, 6)]).is_err());
    }
}
