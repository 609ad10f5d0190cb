//! JSON encodings shared by the project file, trace files, mapping files and
//! the service.

use fretish_core::{
    parse_expr, AbstractionMapping, Decimal, Definition, LintFinding, RefinementVerdict,
    RequirementId, Trace, Value,
};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::json;

/// A trace value: `true`, `false`, `{"num": "<decimal>"}`, `{"enum": "<sym>"}` or `null`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JsonValue(pub Value);

impl Serialize for JsonValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        value_to_json(&self.0).serialize(s)
    }
}

impl<'de> Deserialize<'de> for JsonValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = serde_json::Value::deserialize(d)?;
        value_from_json(&raw)
            .map(JsonValue)
            .map_err(D::Error::custom)
    }
}

pub fn value_to_json(v: &Value) -> serde_json::Value {
    match v {
        Value::Bool(b) => json!(b),
        Value::Num(d) => json!({ "num": d.to_string() }),
        Value::Enum(s) => json!({ "enum": s }),
        Value::Null => serde_json::Value::Null,
    }
}

pub fn value_from_json(raw: &serde_json::Value) -> Result<Value, String> {
    let bad = || {
        format!("expected true, false, null, {{\"num\": ...}} or {{\"enum\": ...}}, found {raw}")
    };
    match raw {
        serde_json::Value::Bool(b) => Ok(Value::Bool(*b)),
        serde_json::Value::Null => Ok(Value::Null),
        serde_json::Value::Object(map) if map.len() == 1 => match map.iter().next() {
            Some((k, serde_json::Value::String(s))) if k == "num" => s
                .parse::<Decimal>()
                .map(Value::Num)
                .map_err(|e| format!("bad decimal `{s}`: {}", e.0)),
            Some((k, serde_json::Value::String(s))) if k == "enum" => Ok(Value::Enum(s.clone())),
            _ => Err(bad()),
        },
        _ => Err(bad()),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceFile {
    pub variables: Vec<String>,
    pub states: Vec<Vec<JsonValue>>,
}

impl TraceFile {
    pub fn from_trace(t: &Trace) -> Self {
        TraceFile {
            variables: t.variables().to_vec(),
            states: t
                .states()
                .iter()
                .map(|s| s.iter().cloned().map(JsonValue).collect())
                .collect(),
        }
    }

    pub fn into_trace(self) -> Result<Trace, String> {
        let states = self
            .states
            .into_iter()
            .map(|s| s.into_iter().map(|v| v.0).collect())
            .collect();
        Trace::new(self.variables, states).map_err(|e| e.to_string())
    }
}

// Struct fields are declared in key order so serialized keys come out sorted.

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DefinitionFile {
    #[serde(rename = "abstract")]
    pub abstract_name: String,
    pub concrete: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MappingFile {
    pub children: Vec<String>,
    #[serde(default)]
    pub definitions: Vec<DefinitionFile>,
    #[serde(default)]
    pub note: String,
    pub parent: String,
}

/// A mapping file that failed to convert; `pointer` is relative to the mapping.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldError {
    pub pointer: String,
    pub reason: String,
}

fn requirement_id(text: &str, pointer: String) -> Result<RequirementId, FieldError> {
    RequirementId::new(text).ok_or_else(|| FieldError {
        pointer,
        reason: format!("`{text}` is not a requirement id"),
    })
}

impl MappingFile {
    pub fn from_mapping(m: &AbstractionMapping) -> Self {
        MappingFile {
            children: m.child_ids.iter().map(|c| c.as_str().to_owned()).collect(),
            definitions: m
                .definitions
                .iter()
                .map(|d| DefinitionFile {
                    abstract_name: d.abstract_name.clone(),
                    concrete: fretish_core::print_expr(&d.concrete),
                })
                .collect(),
            note: m.superposition_note.clone(),
            parent: m.parent_id.as_str().to_owned(),
        }
    }

    pub fn into_mapping(self) -> Result<AbstractionMapping, FieldError> {
        let parent_id = requirement_id(&self.parent, "/parent".into())?;
        let child_ids = self
            .children
            .iter()
            .enumerate()
            .map(|(i, c)| requirement_id(c, format!("/children/{i}")))
            .collect::<Result<_, _>>()?;
        let definitions = self
            .definitions
            .into_iter()
            .enumerate()
            .map(|(i, d)| {
                let concrete = parse_expr(&d.concrete).map_err(|e| FieldError {
                    pointer: format!("/definitions/{i}/concrete"),
                    reason: e.to_string(),
                })?;
                Ok(Definition {
                    abstract_name: d.abstract_name,
                    concrete,
                })
            })
            .collect::<Result<_, FieldError>>()?;
        Ok(AbstractionMapping {
            parent_id,
            child_ids,
            definitions,
            superposition_note: self.note,
        })
    }
}

pub fn verdict_json(v: &RefinementVerdict) -> serde_json::Value {
    match v {
        RefinementVerdict::Refines { bound, traces } => json!({
            "verdict": "refines",
            "bound": bound,
            "traces": traces.to_string(),
            "summary": v.summary(),
        }),
        RefinementVerdict::Counterexample(t) => json!({
            "verdict": "counterexample",
            "summary": v.summary(),
            "trace": TraceFile::from_trace(t),
        }),
        RefinementVerdict::Inconclusive(_) => json!({
            "verdict": "inconclusive",
            "summary": v.summary(),
        }),
    }
}

pub fn finding_json(f: &LintFinding) -> serde_json::Value {
    json!({
        "severity": f.severity.as_str(),
        "requirement_id": f.requirement_id.as_ref().map(|r| r.as_str()),
        "code": f.code.as_str(),
        "message": f.message,
    })
}

/// Serialized JSON with two-space indentation and a trailing newline.
pub fn to_pretty_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("in-memory JSON serialization");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_encoding_round_trips() {
        let values = [
            Value::Bool(true),
            Value::Null,
            Value::Num("-2.5".parse().unwrap()),
            Value::Enum("low".into()),
        ];
        for v in values {
            let j = value_to_json(&v);
            assert_eq!(value_from_json(&j).unwrap(), v);
        }
        assert_eq!(
            value_to_json(&Value::Num("1.50".parse().unwrap())),
            json!({"num": "1.5"})
        );
        assert!(value_from_json(&json!(3)).is_err());
        assert!(value_from_json(&json!({"num": "x"})).is_err());
    }

    #[test]
    fn ragged_trace_is_rejected() {
        let f: TraceFile =
            serde_json::from_str(r#"{"variables": ["p", "q"], "states": [[true]]}"#).unwrap();
        assert!(f.into_trace().is_err());
    }

    #[test]
    fn mapping_pointer_names_bad_expression() {
        let f: MappingFile = serde_json::from_str(
            r#"{"parent": "A", "children": ["B"], "definitions": [{"abstract": "x", "concrete": "a &"}]}"#,
        )
        .unwrap();
        assert_eq!(
            f.into_mapping().unwrap_err().pointer,
            "/definitions/0/concrete"
        );
    }
}
