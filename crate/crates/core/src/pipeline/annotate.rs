use std::time::Duration;

use serde_json::Value;

use super::{EntityMention, PipelineError, Provenance, TextDocument};
use crate::diversity::{ActorType, EntityId};

pub const DEFAULT_CONFIDENCE: f64 = 0.5;

/// Something that returns a Spotlight-style annotation document for a text.
pub trait AnnotationEndpoint: Send + Sync {
    fn url(&self) -> &str;
    fn request(&self, text: &str) -> Result<Vec<u8>, PipelineError>;
}

/// `POST <url>` with form fields `text` and `confidence`.
#[derive(Debug, Clone)]
pub struct HttpAnnotationEndpoint {
    pub url: String,
    pub confidence: f64,
    pub timeout: Duration,
}

impl HttpAnnotationEndpoint {
    pub fn new(url: impl Into<String>) -> Self {
        HttpAnnotationEndpoint {
            url: url.into(),
            confidence: DEFAULT_CONFIDENCE,
            timeout: Duration::from_secs(30),
        }
    }
}

impl AnnotationEndpoint for HttpAnnotationEndpoint {
    fn url(&self) -> &str {
        &self.url
    }

    fn request(&self, text: &str) -> Result<Vec<u8>, PipelineError> {
        let transport = |message: String| PipelineError::AnnotatorTransport {
            url: self.url.clone(),
            message,
        };
        let confidence = self.confidence.to_string();
        let resp = ureq::post(&self.url)
            .timeout(self.timeout)
            .set("Accept", "application/json")
            .set("User-Agent", concat!("kgdiv/", env!("CARGO_PKG_VERSION")))
            .send_form(&[("text", text), ("confidence", &confidence)])
            .map_err(|e| match e {
                ureq::Error::Status(code, _) => transport(format!("HTTP {code}")),
                ureq::Error::Transport(t) => transport(t.to_string()),
            })?;
        let mut body = Vec::new();
        std::io::Read::read_to_end(&mut resp.into_reader(), &mut body)
            .map_err(|e| transport(e.to_string()))?;
        Ok(body)
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        _ => None,
    }
}

fn type_hint(types: &str) -> Option<ActorType> {
    let mut hint = None;
    for t in types.split(',').map(str::trim) {
        let local = t.rsplit(':').next().unwrap_or(t);
        let found = match local {
            "Person" => Some(ActorType::Person),
            "Organisation" | "Organization" | "PoliticalParty" => Some(ActorType::Organisation),
            "Country" | "PopulatedPlace" | "Settlement" | "City" | "AdministrativeRegion" => {
                Some(ActorType::GeopoliticalEntity)
            }
            _ => None,
        };
        if found.is_some() {
            hint = hint.or(found);
        }
    }
    hint
}

/// Reads a Spotlight-style JSON document (`Resources` with `@URI`,
/// `@surfaceForm`, `@offset`, `@types`). Offsets count characters.
pub fn parse_annotations(body: &[u8], doc: &TextDocument) -> Result<Vec<EntityMention>, PipelineError> {
    let malformed = |m: String| PipelineError::MalformedAnnotation(m);
    let v: Value = serde_json::from_slice(body).map_err(|e| malformed(e.to_string()))?;
    let obj = v
        .as_object()
        .ok_or_else(|| malformed("top level is not an object".into()))?;
    let resources: Vec<&Value> = match obj.get("Resources") {
        None | Some(Value::Null) => Vec::new(),
        Some(Value::Array(a)) => a.iter().collect(),
        Some(o @ Value::Object(_)) => vec![o],
        Some(_) => return Err(malformed("`Resources` is not a list".into())),
    };

    let mut out = Vec::with_capacity(resources.len());
    for (i, r) in resources.into_iter().enumerate() {
        let field = |k: &str| {
            r.get(k)
                .and_then(scalar)
                .ok_or_else(|| malformed(format!("resource {i}: missing `{k}`")))
        };
        let uri = field("@URI")?;
        let surface = field("@surfaceForm")?;
        let offset: usize = field("@offset")?
            .parse()
            .map_err(|_| malformed(format!("resource {i}: bad `@offset`")))?;
        let end = offset + surface.chars().count();
        if surface.is_empty() || end > doc.char_len() {
            return Err(malformed(format!(
                "resource {i}: span [{offset}, {end}) outside the document"
            )));
        }
        out.push(EntityMention {
            doc_id: doc.doc_id.clone(),
            char_start: offset,
            char_end: end,
            surface,
            resolved_id: Some(EntityId::new(uri)),
            category: None,
            provenance: Provenance::Annotator,
            type_hint: r.get("@types").and_then(scalar).as_deref().and_then(type_hint),
        });
    }
    Ok(out)
}

/// Links entities in `doc` through the annotation service.
pub fn annotate(doc: &TextDocument, endpoint: &dyn AnnotationEndpoint) -> Result<Vec<EntityMention>, PipelineError> {
    let body = endpoint.request(&doc.text)?;
    parse_annotations(&body, doc)
}
