use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TermKind {
    Iri,
    Literal,
    Blank,
}

/// A single RDF term as it appears in a query solution.
///
/// Only literals carry a datatype or a language tag, and never both.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RdfTerm {
    kind: TermKind,
    value: String,
    datatype: Option<String>,
    language_tag: Option<String>,
}

impl RdfTerm {
    pub fn iri(value: impl Into<String>) -> Self {
        RdfTerm {
            kind: TermKind::Iri,
            value: value.into(),
            datatype: None,
            language_tag: None,
        }
    }

    pub fn blank(value: impl Into<String>) -> Self {
        RdfTerm {
            kind: TermKind::Blank,
            value: value.into(),
            datatype: None,
            language_tag: None,
        }
    }

    pub fn literal(value: impl Into<String>) -> Self {
        RdfTerm {
            kind: TermKind::Literal,
            value: value.into(),
            datatype: None,
            language_tag: None,
        }
    }

    pub fn typed_literal(value: impl Into<String>, datatype: impl Into<String>) -> Self {
        RdfTerm {
            datatype: Some(datatype.into()),
            ..Self::literal(value)
        }
    }

    pub fn lang_literal(value: impl Into<String>, lang: impl Into<String>) -> Self {
        RdfTerm {
            language_tag: Some(lang.into()),
            ..Self::literal(value)
        }
    }

    pub fn kind(&self) -> TermKind {
        self.kind
    }

    pub fn value(&self) -> &str {
        &self.value
    }

    pub fn datatype(&self) -> Option<&str> {
        self.datatype.as_deref()
    }

    pub fn language_tag(&self) -> Option<&str> {
        self.language_tag.as_deref()
    }

    pub fn is_iri(&self) -> bool {
        self.kind == TermKind::Iri
    }
}

impl fmt::Display for RdfTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            TermKind::Iri => write!(f, "<{}>", self.value),
            TermKind::Blank => write!(f, "_:{}", self.value),
            TermKind::Literal => {
                write!(f, "{:?}", self.value)?;
                if let Some(lang) = &self.language_tag {
                    write!(f, "@{lang}")?;
                } else if let Some(dt) = &self.datatype {
                    write!(f, "^^<{dt}>")?;
                }
                Ok(())
            }
        }
    }
}

pub type Row = BTreeMap<String, RdfTerm>;

/// Tabular query solutions. Unbound variables are simply absent from a row.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ResultTable {
    pub variables: Vec<String>,
    pub rows: Vec<Row>,
}

impl ResultTable {
    pub fn new(variables: Vec<String>) -> Self {
        ResultTable {
            variables,
            rows: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Checks that every row only binds declared variables.
    pub fn is_well_formed(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.keys().all(|k| self.variables.iter().any(|v| v == k)))
    }

    pub fn value(&self, row: usize, var: &str) -> Option<&str> {
        self.rows.get(row)?.get(var).map(|t| t.value())
    }
}
