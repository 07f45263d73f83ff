//! SPARQL 1.1 query results in the JSON and XML serializations.

use std::fmt::Write as _;
use std::str::FromStr;

use serde_json::{json, Map, Value};

use super::rdf::{RdfTerm, ResultTable, Row, TermKind};
use super::KgError;

const XML_NS: &str = "http://www.w3.org/2005/sparql-results#";
const XML_LANG_NS: &str = "http://www.w3.org/XML/1998/namespace";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResultFormat {
    SparqlJson,
    SparqlXml,
}

impl ResultFormat {
    pub fn media_type(self) -> &'static str {
        match self {
            ResultFormat::SparqlJson => "application/sparql-results+json",
            ResultFormat::SparqlXml => "application/sparql-results+xml",
        }
    }
}

impl FromStr for ResultFormat {
    type Err = KgError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sparql-json" | "json" => Ok(ResultFormat::SparqlJson),
            "sparql-xml" | "xml" => Ok(ResultFormat::SparqlXml),
            other => Err(KgError::Malformed(format!("unknown result format `{other}`"))),
        }
    }
}

pub fn parse_results(body: &[u8], format: ResultFormat) -> Result<ResultTable, KgError> {
    match format {
        ResultFormat::SparqlJson => parse_json(body),
        ResultFormat::SparqlXml => parse_xml(body),
    }
}

pub fn serialize_results(table: &ResultTable, format: ResultFormat) -> Vec<u8> {
    match format {
        ResultFormat::SparqlJson => serialize_json(table),
        ResultFormat::SparqlXml => serialize_xml(table).into_bytes(),
    }
}

fn malformed(msg: impl Into<String>) -> KgError {
    KgError::Malformed(msg.into())
}

fn parse_json(body: &[u8]) -> Result<ResultTable, KgError> {
    let doc: Value =
        serde_json::from_slice(body).map_err(|e| malformed(format!("invalid JSON: {e}")))?;
    let vars = doc
        .pointer("/head/vars")
        .and_then(Value::as_array)
        .ok_or_else(|| malformed("missing head.vars"))?;
    let variables = vars
        .iter()
        .map(|v| {
            v.as_str()
                .map(str::to_owned)
                .ok_or_else(|| malformed("non-string variable name"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let bindings = doc
        .pointer("/results/bindings")
        .and_then(Value::as_array)
        .ok_or_else(|| malformed("missing results.bindings"))?;

    let mut table = ResultTable::new(variables);
    for binding in bindings {
        let obj = binding
            .as_object()
            .ok_or_else(|| malformed("binding is not an object"))?;
        let mut row = Row::new();
        for (var, term) in obj {
            if !table.variables.iter().any(|v| v == var) {
                return Err(malformed(format!("binding for undeclared variable `{var}`")));
            }
            row.insert(var.clone(), json_term(term)?);
        }
        table.rows.push(row);
    }
    Ok(table)
}

fn json_term(term: &Value) -> Result<RdfTerm, KgError> {
    let field = |name: &str| term.get(name).and_then(Value::as_str);
    let value = field("value").ok_or_else(|| malformed("term without value"))?;
    let kind = field("type").ok_or_else(|| malformed("term without type"))?;
    match kind {
        "uri" => Ok(RdfTerm::iri(value)),
        "bnode" => Ok(RdfTerm::blank(value)),
        // "typed-literal" is emitted by older Virtuoso endpoints (DBpedia).
        "literal" | "typed-literal" => match (field("xml:lang"), field("datatype")) {
            (Some(lang), _) => Ok(RdfTerm::lang_literal(value, lang)),
            (None, Some(dt)) => Ok(RdfTerm::typed_literal(value, dt)),
            (None, None) => Ok(RdfTerm::literal(value)),
        },
        other => Err(KgError::UnknownBindingKind(other.to_owned())),
    }
}

fn serialize_json(table: &ResultTable) -> Vec<u8> {
    let bindings: Vec<Value> = table
        .rows
        .iter()
        .map(|row| {
            let mut obj = Map::new();
            for (var, term) in row {
                let mut t = Map::new();
                let kind = match term.kind() {
                    TermKind::Iri => "uri",
                    TermKind::Literal => "literal",
                    TermKind::Blank => "bnode",
                };
                t.insert("type".into(), kind.into());
                t.insert("value".into(), term.value().into());
                if let Some(lang) = term.language_tag() {
                    t.insert("xml:lang".into(), lang.into());
                }
                if let Some(dt) = term.datatype() {
                    t.insert("datatype".into(), dt.into());
                }
                obj.insert(var.clone(), Value::Object(t));
            }
            Value::Object(obj)
        })
        .collect();
    let doc = json!({
        "head": { "vars": table.variables },
        "results": { "bindings": bindings },
    });
    serde_json::to_vec(&doc).expect("results serialize")
}

fn child<'a, 'i>(node: roxmltree::Node<'a, 'i>, name: &str) -> Option<roxmltree::Node<'a, 'i>> {
    node.children()
        .find(|c| c.is_element() && c.tag_name().name() == name)
}

fn parse_xml(body: &[u8]) -> Result<ResultTable, KgError> {
    let text = std::str::from_utf8(body).map_err(|e| malformed(format!("invalid UTF-8: {e}")))?;
    let doc =
        roxmltree::Document::parse(text).map_err(|e| malformed(format!("invalid XML: {e}")))?;
    let root = doc.root_element();
    if root.tag_name().name() != "sparql" {
        return Err(malformed("root element is not <sparql>"));
    }
    let head = child(root, "head").ok_or_else(|| malformed("missing <head>"))?;
    let variables: Vec<String> = head
        .children()
        .filter(|c| c.is_element() && c.tag_name().name() == "variable")
        .map(|v| {
            v.attribute("name")
                .map(str::to_owned)
                .ok_or_else(|| malformed("<variable> without name"))
        })
        .collect::<Result<_, _>>()?;
    let results = child(root, "results").ok_or_else(|| malformed("missing <results>"))?;

    let mut table = ResultTable::new(variables);
    for result in results
        .children()
        .filter(|c| c.is_element() && c.tag_name().name() == "result")
    {
        let mut row = Row::new();
        for binding in result.children().filter(|c| c.is_element()) {
            let var = binding
                .attribute("name")
                .ok_or_else(|| malformed("<binding> without name"))?;
            if !table.variables.iter().any(|v| v == var) {
                return Err(malformed(format!("binding for undeclared variable `{var}`")));
            }
            let term_el = binding
                .children()
                .find(|c| c.is_element())
                .ok_or_else(|| malformed("empty <binding>"))?;
            let value = term_el.text().unwrap_or("").to_owned();
            let term = match term_el.tag_name().name() {
                "uri" => RdfTerm::iri(value),
                "bnode" => RdfTerm::blank(value),
                "literal" => match (
                    term_el.attribute((XML_LANG_NS, "lang")),
                    term_el.attribute("datatype"),
                ) {
                    (Some(lang), _) => RdfTerm::lang_literal(value, lang),
                    (None, Some(dt)) => RdfTerm::typed_literal(value, dt),
                    (None, None) => RdfTerm::literal(value),
                },
                other => return Err(KgError::UnknownBindingKind(other.to_owned())),
            };
            row.insert(var.to_owned(), term);
        }
        table.rows.push(row);
    }
    Ok(table)
}

fn escape_xml(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            '\r' => out.push_str("&#13;"),
            c => out.push(c),
        }
    }
    out
}

fn serialize_xml(table: &ResultTable) -> String {
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\"?>\n");
    let _ = writeln!(out, "<sparql xmlns=\"{XML_NS}\">");
    out.push_str("  <head>\n");
    for v in &table.variables {
        let _ = writeln!(out, "    <variable name=\"{}\"/>", escape_xml(v));
    }
    out.push_str("  </head>\n  <results>\n");
    for row in &table.rows {
        out.push_str("    <result>\n");
        for (var, term) in row {
            let _ = write!(out, "      <binding name=\"{}\">", escape_xml(var));
            let value = escape_xml(term.value());
            match term.kind() {
                TermKind::Iri => {
                    let _ = write!(out, "<uri>{value}</uri>");
                }
                TermKind::Blank => {
                    let _ = write!(out, "<bnode>{value}</bnode>");
                }
                TermKind::Literal => {
                    if let Some(lang) = term.language_tag() {
                        let _ = write!(
                            out,
                            "<literal xml:lang=\"{}\">{value}</literal>",
                            escape_xml(lang)
                        );
                    } else if let Some(dt) = term.datatype() {
                        let _ = write!(
                            out,
                            "<literal datatype=\"{}\">{value}</literal>",
                            escape_xml(dt)
                        );
                    } else {
                        let _ = write!(out, "<literal>{value}</literal>");
                    }
                }
            }
            out.push_str("</binding>\n");
        }
        out.push_str("    </result>\n");
    }
    out.push_str("  </results>\n</sparql>\n");
    out
}
