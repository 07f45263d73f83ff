use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::Deserialize;

use super::{Dialect, KgError};

/// Comment line prepended to every issued query so recorded fixtures (and
/// endpoint logs) can be traced back to the template that produced them.
pub const TEMPLATE_MARKER: &str = "#kgdiv-template:";

const BUILTIN_CATALOG: &str = include_str!("../../templates/catalog.toml");

/// A query with `{{name}}` placeholders, bound to one dialect.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct QueryTemplate {
    pub id: String,
    pub dialect: Dialect,
    #[serde(default)]
    pub params: Vec<String>,
    pub result_schema: Vec<String>,
    pub query: String,
}

fn placeholders(text: &str) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    let mut rest = text;
    while let Some(start) = rest.find("{{") {
        let after = &rest[start + 2..];
        match after.find("}}") {
            Some(end) => {
                out.insert(after[..end].trim().to_owned());
                rest = &after[end + 2..];
            }
            None => break,
        }
    }
    out
}

impl QueryTemplate {
    pub fn new(
        id: impl Into<String>,
        dialect: Dialect,
        params: Vec<String>,
        result_schema: Vec<String>,
        query: impl Into<String>,
    ) -> Result<Self, KgError> {
        let t = QueryTemplate {
            id: id.into(),
            dialect,
            params,
            result_schema,
            query: query.into(),
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<(), KgError> {
        let invalid = |reason: String| KgError::InvalidTemplate {
            id: self.id.clone(),
            reason,
        };
        if self.result_schema.is_empty() {
            return Err(invalid("result_schema is empty".into()));
        }
        let declared: BTreeSet<&str> = self.params.iter().map(String::as_str).collect();
        for p in placeholders(&self.query) {
            if !declared.contains(p.as_str()) {
                return Err(invalid(format!("placeholder `{p}` is not a declared parameter")));
            }
        }
        // Paging with OFFSET needs a stable order.
        if !self.query.to_ascii_uppercase().contains("ORDER BY") {
            return Err(invalid("query has no ORDER BY".into()));
        }
        let upper = self.query.to_ascii_uppercase();
        if upper.contains("\nLIMIT") || upper.contains(" LIMIT ") {
            return Err(invalid("LIMIT/OFFSET are added by the pager".into()));
        }
        Ok(())
    }

    /// Substitutes every placeholder; all declared parameters must be bound.
    pub fn bind(&self, params: &BTreeMap<String, String>) -> Result<String, KgError> {
        let mut text = self.query.clone();
        for p in &self.params {
            let value = params
                .get(p)
                .ok_or_else(|| KgError::UnboundPlaceholder(p.clone()))?;
            text = text.replace(&format!("{{{{{p}}}}}"), value);
        }
        Ok(format!("{TEMPLATE_MARKER}{}\n{}", self.id, text.trim()))
    }
}

#[derive(Debug, Deserialize)]
struct CatalogFile {
    template: Vec<QueryTemplate>,
}

/// All templates known for all dialects, keyed by `(id, dialect)`.
#[derive(Debug, Clone, Default)]
pub struct TemplateCatalog {
    templates: BTreeMap<(String, Dialect), QueryTemplate>,
}

impl TemplateCatalog {
    /// The catalog shipped with the crate.
    pub fn builtin() -> Self {
        Self::from_toml(BUILTIN_CATALOG).expect("built-in template catalog is valid")
    }

    pub fn from_toml(text: &str) -> Result<Self, KgError> {
        let file: CatalogFile = toml::from_str(text).map_err(|e| KgError::InvalidTemplate {
            id: "<catalog>".into(),
            reason: e.to_string(),
        })?;
        let mut catalog = TemplateCatalog::default();
        for t in file.template {
            catalog.insert(t)?;
        }
        Ok(catalog)
    }

    pub fn load(path: &Path) -> Result<Self, KgError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| KgError::Io(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn insert(&mut self, t: QueryTemplate) -> Result<(), KgError> {
        t.validate()?;
        let key = (t.id.clone(), t.dialect);
        if self.templates.contains_key(&key) {
            return Err(KgError::InvalidTemplate {
                id: t.id,
                reason: format!("defined twice for {}", key.1),
            });
        }
        self.templates.insert(key, t);
        Ok(())
    }

    pub fn get(&self, id: &str, dialect: Dialect) -> Result<&QueryTemplate, KgError> {
        self.templates
            .get(&(id.to_owned(), dialect))
            .ok_or_else(|| KgError::MissingTemplate {
                id: id.to_owned(),
                dialect,
            })
    }

    pub fn iter(&self) -> impl Iterator<Item = &QueryTemplate> {
        self.templates.values()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tpl(query: &str, params: &[&str]) -> Result<QueryTemplate, KgError> {
        QueryTemplate::new(
            "t",
            Dialect::Wikidata,
            params.iter().map(|s| s.to_string()).collect(),
            vec!["s".into()],
            query,
        )
    }

    #[test]
    fn builtin_catalog_loads() {
        let c = TemplateCatalog::builtin();
        for d in Dialect::ALL {
            assert!(c.get("politicians", d).is_ok(), "{d}");
        }
        assert!(c.get("parties-via-party-property", Dialect::NlDbpedia).is_ok());
        for id in ["coverage-kvv", "coverage-vp", "coverage-us-house"] {
            assert!(c.get(id, Dialect::EnDbpedia).is_ok());
            assert!(c.get(id, Dialect::Wikidata).is_ok());
        }
    }

    #[test]
    fn undeclared_placeholder_rejected() {
        let err = tpl("SELECT ?s WHERE { ?s ?p {{obj}} } ORDER BY ?s", &[]).unwrap_err();
        assert!(matches!(err, KgError::InvalidTemplate { .. }));
    }

    #[test]
    fn unordered_query_rejected() {
        assert!(tpl("SELECT ?s WHERE { ?s ?p ?o }", &[]).is_err());
        assert!(tpl("SELECT ?s WHERE { ?s ?p ?o } ORDER BY ?s LIMIT 10", &[]).is_err());
    }

    #[test]
    fn bind_requires_every_param() {
        let t = tpl("SELECT ?s WHERE { ?s ?p <{{root}}> } ORDER BY ?s", &["root"]).unwrap();
        assert_eq!(
            t.bind(&BTreeMap::new()).unwrap_err(),
            KgError::UnboundPlaceholder("root".into())
        );
        let mut p = BTreeMap::new();
        p.insert("root".to_string(), "http://example.org/x".to_string());
        let q = t.bind(&p).unwrap();
        assert!(q.starts_with("#kgdiv-template:t\n"));
        assert!(q.contains("<http://example.org/x>"));
    }
}
