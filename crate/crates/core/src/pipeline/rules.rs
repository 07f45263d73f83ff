use std::path::Path;

use super::{EntityMention, MatchLayer, MatchRule, PipelineError, Provenance, RuleTarget, TextDocument};

pub const RULES_HEADER: &str = "pattern,case_sensitive,match_layer,target";

fn chars_equal(a: char, b: char, case_sensitive: bool) -> bool {
    a == b || (!case_sensitive && a.to_lowercase().eq(b.to_lowercase()))
}

fn is_word(c: char) -> bool {
    c.is_alphanumeric()
}

/// Leftmost non-overlapping occurrences of `pattern` in `text`, honouring
/// word boundaries at alphanumeric pattern edges.
fn surface_spans(text: &[char], pattern: &[char], case_sensitive: bool) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let n = pattern.len();
    if n == 0 || n > text.len() {
        return out;
    }
    let need_left = is_word(pattern[0]);
    let need_right = is_word(pattern[n - 1]);
    let mut i = 0;
    while i + n <= text.len() {
        let hit = text[i..i + n]
            .iter()
            .zip(pattern)
            .all(|(&a, &b)| chars_equal(a, b, case_sensitive))
            && !(need_left && i > 0 && is_word(text[i - 1]))
            && !(need_right && i + n < text.len() && is_word(text[i + n]));
        if hit {
            out.push((i, i + n));
            i += n;
        } else {
            i += 1;
        }
    }
    out
}

fn words_equal(a: &str, b: &str, case_sensitive: bool) -> bool {
    if case_sensitive {
        a == b
    } else {
        a.to_lowercase() == b.to_lowercase()
    }
}

fn lemma_spans(
    doc: &TextDocument,
    pattern: &str,
    case_sensitive: bool,
) -> Result<Vec<(usize, usize)>, PipelineError> {
    let tokens = doc
        .tokens()
        .filter(|t| t.iter().any(|t| !t.lemma.is_empty()))
        .ok_or_else(|| PipelineError::MissingLemmas(doc.doc_id.clone()))?;
    let words: Vec<&str> = pattern.split_whitespace().collect();
    let n = words.len();
    let mut out = Vec::new();
    let mut i = 0;
    while n > 0 && i + n <= tokens.len() {
        let hit = tokens[i..i + n]
            .iter()
            .zip(&words)
            .all(|(t, w)| words_equal(&t.lemma, w, case_sensitive));
        if hit {
            out.push((tokens[i].char_start, tokens[i + n - 1].char_end));
            i += n;
        } else {
            i += 1;
        }
    }
    Ok(out)
}

/// Runs every rule over the document.
///
/// Each rule yields its leftmost non-overlapping hits. Where hits of
/// different rules overlap, the longer one wins (then the earlier one, then
/// the earlier rule). Output is sorted by position.
pub fn match_rules(doc: &TextDocument, rules: &[MatchRule]) -> Result<Vec<EntityMention>, PipelineError> {
    let text: Vec<char> = doc.text.chars().collect();
    let mut hits: Vec<(usize, usize, usize)> = Vec::new();
    for (ri, rule) in rules.iter().enumerate() {
        let spans = match rule.layer {
            MatchLayer::Surface => {
                let pattern: Vec<char> = rule.pattern.chars().collect();
                surface_spans(&text, &pattern, rule.case_sensitive)
            }
            MatchLayer::Lemma => lemma_spans(doc, &rule.pattern, rule.case_sensitive)?,
        };
        hits.extend(spans.into_iter().map(|(s, e)| (s, e, ri)));
    }

    hits.sort_by(|a, b| {
        (b.1 - b.0)
            .cmp(&(a.1 - a.0))
            .then(a.0.cmp(&b.0))
            .then(a.2.cmp(&b.2))
    });
    let mut kept: Vec<(usize, usize, usize)> = Vec::new();
    for h in hits {
        if kept.iter().all(|k| h.1 <= k.0 || k.1 <= h.0) {
            kept.push(h);
        }
    }
    kept.sort();

    Ok(kept
        .into_iter()
        .map(|(s, e, ri)| {
            let (resolved_id, category) = match &rules[ri].target {
                RuleTarget::Resource(id) => (Some(id.clone()), None),
                RuleTarget::Unnamed(c) => (None, Some(c.clone())),
            };
            EntityMention {
                doc_id: doc.doc_id.clone(),
                char_start: s,
                char_end: e,
                surface: text[s..e].iter().collect(),
                resolved_id,
                category,
                provenance: Provenance::Rule,
                type_hint: None,
            }
        })
        .collect())
}

fn parse_bool(s: &str) -> Result<bool, PipelineError> {
    match s.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        other => Err(PipelineError::InvalidRule(format!("case_sensitive `{other}`"))),
    }
}

/// Parses a rule file with header `pattern,case_sensitive,match_layer,target`.
pub fn parse_rules(data: &[u8]) -> Result<Vec<MatchRule>, PipelineError> {
    let mut rdr = csv::Reader::from_reader(data);
    let header = rdr
        .headers()
        .map_err(|e| PipelineError::InvalidRule(e.to_string()))?
        .iter()
        .map(str::trim)
        .collect::<Vec<_>>()
        .join(",");
    if header != RULES_HEADER {
        return Err(PipelineError::InvalidRule(format!(
            "header `{header}`, expected `{RULES_HEADER}`"
        )));
    }
    let mut rules = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| PipelineError::InvalidRule(e.to_string()))?;
        let field = |k: usize| rec.get(k).unwrap_or("");
        let layer = match field(2).trim().to_ascii_lowercase().as_str() {
            "surface" | "text" => MatchLayer::Surface,
            "lemma" => MatchLayer::Lemma,
            other => {
                return Err(PipelineError::InvalidRule(format!(
                    "line {}: match_layer `{other}`",
                    i + 2
                )))
            }
        };
        rules.push(MatchRule::new(
            field(0),
            parse_bool(field(1))?,
            layer,
            RuleTarget::parse(field(3))?,
        )?);
    }
    Ok(rules)
}

pub fn load_rules(path: &Path) -> Result<Vec<MatchRule>, PipelineError> {
    let data =
        std::fs::read(path).map_err(|e| PipelineError::Io(format!("{}: {e}", path.display())))?;
    parse_rules(&data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::Token;

    fn spans(doc: &TextDocument, rules: &[MatchRule]) -> Vec<(usize, usize)> {
        match_rules(doc, rules)
            .unwrap()
            .iter()
            .map(|m| (m.char_start, m.char_end))
            .collect()
    }

    #[test]
    fn case_sensitive_literal() {
        let rule = MatchRule::surface("N-VA", true, "http://dbpedia.org/resource/N-VA").unwrap();
        assert_eq!(spans(&TextDocument::new("d", "N-VA wint"), std::slice::from_ref(&rule)), [(0, 4)]);
        assert!(spans(&TextDocument::new("d", "n-va wint"), &[rule]).is_empty());
        let loose = MatchRule::surface("N-VA", false, "x").unwrap();
        assert_eq!(spans(&TextDocument::new("d", "n-va wint"), &[loose]), [(0, 4)]);
    }

    #[test]
    fn word_boundaries_and_unicode() {
        let rule = MatchRule::surface("Groen", false, "x").unwrap();
        let doc = TextDocument::new("d", "Één Groenland, groen!");
        assert_eq!(spans(&doc, &[rule]), [(15, 20)]);
    }

    #[test]
    fn longest_match_across_rules() {
        let rules = [
            MatchRule::surface("Belang", true, "b").unwrap(),
            MatchRule::surface("Vlaams Belang", true, "vb").unwrap(),
        ];
        let doc = TextDocument::new("d", "Vlaams Belang en Belang");
        let ms = match_rules(&doc, &rules).unwrap();
        let got: Vec<_> = ms.iter().map(|m| (m.char_start, m.entity_key().0)).collect();
        assert_eq!(got, [(0, "vb".to_string()), (17, "b".to_string())]);
    }

    #[test]
    fn lemma_layer() {
        let doc = TextDocument::new("d", "refugees arrived")
            .with_tokens(vec![
                Token {
                    surface: "refugees".into(),
                    lemma: "refugee".into(),
                    char_start: 0,
                    char_end: 8,
                },
                Token {
                    surface: "arrived".into(),
                    lemma: "arrive".into(),
                    char_start: 9,
                    char_end: 16,
                },
            ])
            .unwrap();
        let rule = MatchRule::new(
            "refugee",
            false,
            MatchLayer::Lemma,
            RuleTarget::parse("unnamed:refugee").unwrap(),
        )
        .unwrap();
        let ms = match_rules(&doc, std::slice::from_ref(&rule)).unwrap();
        assert_eq!(ms.len(), 1);
        assert_eq!(ms[0].surface, "refugees");
        assert_eq!(ms[0].resolved_id, None);
        assert_eq!(ms[0].category.as_deref(), Some("refugee"));

        let bare = TextDocument::new("d", "refugees arrived");
        assert!(matches!(match_rules(&bare, &[rule]), Err(PipelineError::MissingLemmas(_))));
    }

    #[test]
    fn rule_file() {
        let csv = b"pattern,case_sensitive,match_layer,target\nN-VA,true,surface,http://dbpedia.org/resource/New_Flemish_Alliance\nrefugee,false,lemma,unnamed:refugee\n";
        let rules = parse_rules(csv).unwrap();
        assert_eq!(rules.len(), 2);
        assert_eq!(rules[1].layer, MatchLayer::Lemma);
        assert!(parse_rules(b"a,b\n1,2\n").is_err());
        assert!(parse_rules(b"pattern,case_sensitive,match_layer,target\nx,maybe,surface,t\n").is_err());
    }
}
