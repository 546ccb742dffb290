use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SUBJECT_SLOT: &str = "{s}";
pub const OBJECT_SLOT: &str = "{o}";

const BUNDLED_TEMPLATES: &str = include_str!("../../data/synth/templates.json");

/// A sentence pattern for one predicate in one language.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Template {
    pub predicate_id: String,
    pub language: String,
    pub pattern: String,
}

impl Template {
    /// Fails unless `pattern` has exactly one `{s}` and one `{o}`.
    pub fn new(predicate_id: impl Into<String>, language: impl Into<String>, pattern: impl Into<String>) -> Result<Self> {
        let t = Template { predicate_id: predicate_id.into(), language: language.into(), pattern: pattern.into() };
        for slot in [SUBJECT_SLOT, OBJECT_SLOT] {
            let n = t.pattern.matches(slot).count();
            if n != 1 {
                return Err(Error::InvalidTemplate {
                    predicate: t.predicate_id.clone(),
                    reason: format!("slot {slot} appears {n} times, expected once"),
                });
            }
        }
        if t.predicate_id.trim().is_empty() {
            return Err(Error::InvalidTemplate { predicate: t.predicate_id.clone(), reason: "empty predicate id".into() });
        }
        Ok(t)
    }

    /// Substitutes both slots in one pass, so labels that happen to contain
    /// `{s}` or `{o}` are inserted literally.
    pub fn fill(&self, subject: &str, object: &str) -> String {
        let mut out = String::with_capacity(self.pattern.len() + subject.len() + object.len());
        let mut rest = self.pattern.as_str();
        while let Some(i) = rest.find('{') {
            out.push_str(&rest[..i]);
            let tail = &rest[i..];
            if tail.starts_with(SUBJECT_SLOT) {
                out.push_str(subject);
                rest = &tail[SUBJECT_SLOT.len()..];
            } else if tail.starts_with(OBJECT_SLOT) {
                out.push_str(object);
                rest = &tail[OBJECT_SLOT.len()..];
            } else {
                out.push('{');
                rest = &tail[1..];
            }
        }
        out.push_str(rest);
        out
    }
}

/// Validated templates for one language, indexed by predicate.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TemplateSet {
    pub language: String,
    templates: BTreeMap<String, Template>,
}

impl TemplateSet {
    pub fn new(language: impl Into<String>, templates: impl IntoIterator<Item = Template>) -> Result<Self> {
        let language = language.into();
        let mut map = BTreeMap::new();
        for t in templates {
            if t.language != language {
                continue;
            }
            if map.contains_key(&t.predicate_id) {
                return Err(Error::InvalidTemplate { predicate: t.predicate_id, reason: "duplicate template".into() });
            }
            map.insert(t.predicate_id.clone(), t);
        }
        Ok(TemplateSet { language, templates: map })
    }

    /// Parses `{"predicate": {"nld": "pattern", ...}, ...}` and keeps the
    /// patterns for `language`. Every pattern in the file is validated,
    /// including those for other languages.
    pub fn from_json(json: &str, language: &str) -> Result<Self> {
        let raw: BTreeMap<String, BTreeMap<String, String>> = serde_json::from_str(json)?;
        let mut all = Vec::new();
        for (predicate, patterns) in raw {
            for (lang, pattern) in patterns {
                all.push(Template::new(predicate.clone(), lang, pattern)?);
            }
        }
        TemplateSet::new(language, all)
    }

    /// The bundled templates for `language` (nld and eng ship).
    pub fn bundled(language: &str) -> Self {
        TemplateSet::from_json(BUNDLED_TEMPLATES, language).expect("bundled templates are valid")
    }

    pub fn get(&self, predicate_id: &str) -> Option<&Template> {
        self.templates.get(predicate_id)
    }

    pub fn len(&self) -> usize {
        self.templates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.templates.is_empty()
    }

    pub fn predicates(&self) -> impl Iterator<Item = &str> {
        self.templates.keys().map(String::as_str)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slot_counts_are_checked() {
        assert!(Template::new("p", "nld", "{s} is {o}").is_ok());
        for bad in ["{s} is", "{o}", "{s} {s} {o}", "{s} {o} {o}", "geen slots"] {
            let err = Template::new("p", "nld", bad).unwrap_err();
            assert!(matches!(err, Error::InvalidTemplate { ref predicate, .. } if predicate == "p"), "{bad}");
        }
    }

    #[test]
    fn malformed_file_fails_at_load() {
        let json = r#"{"a": {"nld": "{s} en {o}"}, "b": {"eng": "{s} only"}}"#;
        assert!(TemplateSet::from_json(json, "nld").is_err());
        assert!(TemplateSet::from_json("[1, 2]", "nld").is_err());
    }

    #[test]
    fn fill_is_literal() {
        let t = Template::new("p", "nld", "{s} kent {o}").unwrap();
        assert_eq!(t.fill("{o}", "{s}"), "{o} kent {s}");
        let t = Template::new("p", "nld", "{x} {s} {o}").unwrap();
        assert_eq!(t.fill("a", "b"), "{x} a b");
    }

    #[test]
    fn bundled_sets() {
        let nld = TemplateSet::bundled("nld");
        assert_eq!(nld.get("noble-title").unwrap().pattern, "{s} heeft de titel {o}.");
        assert_eq!(nld.len(), TemplateSet::bundled("eng").len());
        assert!(TemplateSet::bundled("fry").is_empty());
    }
}
