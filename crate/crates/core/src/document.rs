//! JSON documents read and written by the command-line tool: target specs,
//! selection constructions, and transform records.

use serde_json::{json, Map, Value};

use crate::distributions::{spec_from_value, DiscreteSpec, Spec};
use crate::error::{Error, Result};
use crate::selection::SelectionConstruction;
use crate::subadditive::{build_transform, TransformRecord};

/// A parsed input document.
#[derive(Debug, Clone)]
pub enum Document {
    Spec(Spec),
    /// A synthesized construction and, when recorded, the spec it targets.
    Selection {
        construction: SelectionConstruction,
        target: Option<DiscreteSpec>,
    },
    Transform(TransformRecord),
}

/// `value` with object keys in lexicographic order at every level.
pub fn sort_keys(value: &Value) -> Value {
    match value {
        Value::Object(map) => {
            let mut entries: Vec<_> = map.iter().collect();
            entries.sort_by(|a, b| a.0.cmp(b.0));
            let mut out = Map::new();
            for (k, v) in entries {
                out.insert(k.clone(), sort_keys(v));
            }
            Value::Object(out)
        }
        Value::Array(items) => Value::Array(items.iter().map(sort_keys).collect()),
        other => other.clone(),
    }
}

/// Pretty-printed JSON with sorted keys and a trailing newline.
pub fn canonical_json(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(&sort_keys(value)).expect("JSON values serialize");
    s.push('\n');
    s
}

/// The document written for a synthesized construction.
pub fn selection_document(c: &SelectionConstruction, target: Option<&DiscreteSpec>) -> Value {
    json!({
        "type": "selection",
        "target": target.and_then(DiscreteSpec::to_json),
        "construction": serde_json::to_value(c).expect("construction serializes"),
    })
}

pub fn parse_document(text: &str) -> Result<Document> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
    let kind = value
        .get("type")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Malformed("missing \"type\"".into()))?;
    match kind {
        "selection" => {
            let construction = value
                .get("construction")
                .cloned()
                .ok_or_else(|| Error::Malformed("missing \"construction\"".into()))?;
            let construction: SelectionConstruction =
                serde_json::from_value(construction).map_err(|e| Error::Malformed(e.to_string()))?;
            let target = match value.get("target") {
                None | Some(Value::Null) => None,
                Some(t) => match spec_from_value(t.clone())? {
                    Spec::Discrete(d) => Some(d),
                    Spec::Density(_) => {
                        return Err(Error::Malformed("selection target must be discrete".into()))
                    }
                },
            };
            Ok(Document::Selection {
                construction,
                target,
            })
        }
        "transform" => {
            let density = value
                .get("density")
                .cloned()
                .ok_or_else(|| Error::Malformed("missing \"density\"".into()))?;
            let Spec::Density(spec) = spec_from_value(density)? else {
                return Err(Error::Malformed("transform density must be a density spec".into()));
            };
            let record = build_transform(&spec)?;
            if value.get("alpha") != record.to_json().get("alpha") {
                return Err(Error::Malformed("transform alpha does not match its density".into()));
            }
            Ok(Document::Transform(record))
        }
        _ => Ok(Document::Spec(spec_from_value(value)?)),
    }
}
