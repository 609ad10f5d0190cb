//! Project files: load, save and schema validation.

use std::fs;
use std::path::{Path, PathBuf};

use fretish_core::{
    Glossary, Project, RequirementId, RequirementRecord, ScenarioRecord, Value, ValueType, VarKind,
    VariableDecl,
};
use serde::{Deserialize, Serialize};

use crate::formats::{to_pretty_json, FieldError, JsonValue, MappingFile};

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    /// `pointer` is a JSON pointer into the offending document.
    #[error("schema violation at `{pointer}`: {reason}")]
    SchemaViolation { pointer: String, reason: String },
    #[error("cannot access {}: {source}", path.display())]
    IoFailure {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl StoreError {
    fn schema(pointer: impl Into<String>, reason: impl Into<String>) -> Self {
        StoreError::SchemaViolation {
            pointer: pointer.into(),
            reason: reason.into(),
        }
    }

    fn nested(prefix: &str, e: FieldError) -> Self {
        StoreError::schema(format!("{prefix}{}", e.pointer), e.reason)
    }
}

// Fields are declared in key order so the saved file has sorted keys.

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum TypeFile {
    Boolean,
    Integer,
    Real,
    Enum(Vec<String>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DeclFile {
    #[serde(default)]
    arity: usize,
    #[serde(default)]
    description: String,
    #[serde(default)]
    domain: Option<Vec<JsonValue>>,
    kind: String,
    name: String,
    #[serde(rename = "type")]
    value_type: TypeFile,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RequirementFile {
    #[serde(default)]
    pub comments: String,
    pub id: String,
    #[serde(default)]
    pub parents: Vec<String>,
    #[serde(default)]
    pub rationale: String,
    pub text: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    expected_results: String,
    id: String,
    input_steps: String,
    preconditions: String,
    requirement_id: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProjectFile {
    #[serde(default)]
    glossary: Vec<DeclFile>,
    #[serde(default)]
    mappings: Vec<MappingFile>,
    name: String,
    requirements: Vec<RequirementFile>,
    #[serde(default)]
    scenarios: Vec<ScenarioFile>,
}

fn json_pointer(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    path.iter()
        .map(|seg| match seg {
            Segment::Seq { index } => format!("/{index}"),
            Segment::Map { key } => format!("/{}", key.replace('~', "~0").replace('/', "~1")),
            Segment::Enum { variant } => format!("/{variant}"),
            Segment::Unknown => "/?".to_owned(),
        })
        .collect()
}

/// Deserializes `text`, reporting failures with a JSON pointer.
pub fn from_json_text<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, StoreError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(de)
        .map_err(|e| StoreError::schema(json_pointer(e.path()), e.inner().to_string()))?;
    Ok(value)
}

fn id(text: &str, pointer: String) -> Result<RequirementId, StoreError> {
    RequirementId::new(text)
        .ok_or_else(|| StoreError::schema(pointer, format!("`{text}` is not a requirement id")))
}

impl RequirementFile {
    pub fn from_record(r: &RequirementRecord) -> Self {
        RequirementFile {
            comments: r.comments.clone(),
            id: r.id.as_str().to_owned(),
            parents: r.parent_ids.iter().map(|p| p.as_str().to_owned()).collect(),
            rationale: r.rationale.clone(),
            text: r.fretish_text.clone(),
        }
    }

    /// Converts to a record whose AST cache is filled when the text parses.
    /// `pointer` locates this requirement in its document.
    pub fn into_record(self, pointer: &str) -> Result<RequirementRecord, StoreError> {
        let ast = fretish_core::parse_requirement(&self.text).ok();
        Ok(RequirementRecord {
            id: id(&self.id, format!("{pointer}/id"))?,
            parent_ids: self
                .parents
                .iter()
                .enumerate()
                .map(|(k, p)| id(p, format!("{pointer}/parents/{k}")))
                .collect::<Result<_, _>>()?,
            fretish_text: self.text,
            rationale: self.rationale,
            comments: self.comments,
            ast,
        })
    }
}

fn decl_to_file(d: &VariableDecl) -> DeclFile {
    DeclFile {
        arity: d.arity,
        description: d.description.clone(),
        domain: d
            .domain
            .as_ref()
            .map(|vs| vs.iter().cloned().map(JsonValue).collect()),
        kind: d.kind.as_str().to_owned(),
        name: d.name.clone(),
        value_type: match &d.value_type {
            ValueType::Boolean => TypeFile::Boolean,
            ValueType::Integer => TypeFile::Integer,
            ValueType::Real => TypeFile::Real,
            ValueType::Enum(s) => TypeFile::Enum(s.clone()),
        },
    }
}

fn decl_from_file(f: DeclFile, pointer: &str) -> Result<VariableDecl, StoreError> {
    let kind = VarKind::parse(&f.kind).ok_or_else(|| {
        StoreError::schema(
            format!("{pointer}/kind"),
            format!("unknown kind `{}`", f.kind),
        )
    })?;
    let value_type = match f.value_type {
        TypeFile::Boolean => ValueType::Boolean,
        TypeFile::Integer => ValueType::Integer,
        TypeFile::Real => ValueType::Real,
        TypeFile::Enum(s) => ValueType::Enum(s),
    };
    Ok(VariableDecl {
        name: f.name,
        kind,
        value_type,
        arity: f.arity,
        domain: f
            .domain
            .map(|vs| vs.into_iter().map(|v| v.0).collect::<Vec<Value>>()),
        description: f.description,
    })
}

/// Parses a project document.
pub fn project_from_str(text: &str) -> Result<Project, StoreError> {
    let file: ProjectFile = from_json_text(text)?;
    let mut project = Project::new(&file.name);

    let mut glossary = Glossary::new();
    for (i, d) in file.glossary.into_iter().enumerate() {
        let pointer = format!("/glossary/{i}");
        let decl = decl_from_file(d, &pointer)?;
        let name = decl.name.clone();
        if glossary.declare(decl).is_some() {
            return Err(StoreError::schema(
                format!("{pointer}/name"),
                format!("`{name}` is declared more than once"),
            ));
        }
    }
    project.glossary = glossary;

    for (i, r) in file.requirements.into_iter().enumerate() {
        let pointer = format!("/requirements/{i}");
        let record = r.into_record(&pointer)?;
        if project.requirement(record.id.as_str()).is_some() {
            return Err(StoreError::schema(
                format!("{pointer}/id"),
                format!("duplicate requirement id `{}`", record.id),
            ));
        }
        project.requirements.push(record);
    }

    for (i, m) in file.mappings.into_iter().enumerate() {
        let mapping = m
            .into_mapping()
            .map_err(|e| StoreError::nested(&format!("/mappings/{i}"), e))?;
        project.mappings.push(mapping);
    }

    let mut scenario_ids = std::collections::BTreeSet::new();
    for (i, s) in file.scenarios.into_iter().enumerate() {
        let pointer = format!("/scenarios/{i}");
        if !scenario_ids.insert(s.id.clone()) {
            return Err(StoreError::schema(
                format!("{pointer}/id"),
                format!("duplicate scenario id `{}`", s.id),
            ));
        }
        project.scenarios.push(ScenarioRecord {
            requirement_id: id(&s.requirement_id, format!("{pointer}/requirement_id"))?,
            id: s.id,
            preconditions: s.preconditions,
            input_steps: s.input_steps,
            expected_results: s.expected_results,
        });
    }
    Ok(project)
}

/// The canonical file content for a project.
pub fn project_to_string(project: &Project) -> String {
    let file = ProjectFile {
        glossary: project.glossary.iter().map(decl_to_file).collect(),
        mappings: project
            .mappings
            .iter()
            .map(MappingFile::from_mapping)
            .collect(),
        name: project.name.clone(),
        requirements: project
            .requirements
            .iter()
            .map(RequirementFile::from_record)
            .collect(),
        scenarios: project
            .scenarios
            .iter()
            .map(|s| ScenarioFile {
                expected_results: s.expected_results.clone(),
                id: s.id.clone(),
                input_steps: s.input_steps.clone(),
                preconditions: s.preconditions.clone(),
                requirement_id: s.requirement_id.as_str().to_owned(),
            })
            .collect(),
    };
    to_pretty_json(&file)
}

pub fn read_text(path: &Path) -> Result<String, StoreError> {
    fs::read_to_string(path).map_err(|source| StoreError::IoFailure {
        path: path.to_owned(),
        source,
    })
}

pub fn load_project(path: &Path) -> Result<Project, StoreError> {
    project_from_str(&read_text(path)?)
}

/// Writes through a sibling temporary file so readers never see a partial file.
pub fn write_atomic(path: &Path, content: &str) -> Result<(), StoreError> {
    let io = |source| StoreError::IoFailure {
        path: path.to_owned(),
        source,
    };
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, content).map_err(io)?;
    fs::rename(&tmp, path).map_err(io)
}

pub fn save_project(project: &Project, path: &Path) -> Result<(), StoreError> {
    write_atomic(path, &project_to_string(project))
}

#[cfg(test)]
mod tests {
    use super::*;
    use fretish_core::builtin_corpus;

    #[test]
    fn corpus_is_a_fixpoint() {
        let text = project_to_string(&builtin_corpus());
        let loaded = project_from_str(&text).unwrap();
        assert_eq!(loaded, builtin_corpus());
        assert_eq!(project_to_string(&loaded), text);
    }

    #[test]
    fn empty_project_round_trips() {
        let p = Project::new("empty");
        assert_eq!(project_from_str(&project_to_string(&p)).unwrap(), p);
    }

    #[test]
    fn duplicate_id_names_the_id() {
        let text = r#"{"name": "d", "requirements": [
            {"id": "A", "text": "Controller shall always (p)"},
            {"id": "A", "text": "Controller shall always (q)"}]}"#;
        match project_from_str(text) {
            Err(StoreError::SchemaViolation { pointer, reason }) => {
                assert_eq!(pointer, "/requirements/1/id");
                assert!(reason.contains("`A`"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn type_errors_carry_a_pointer() {
        let text = r#"{"name": "d", "requirements": [{"id": "A", "text": 3}]}"#;
        match project_from_str(text) {
            Err(StoreError::SchemaViolation { pointer, .. }) => {
                assert_eq!(pointer, "/requirements/0/text")
            }
            other => panic!("{other:?}"),
        }
        let text = r#"{"name": "d", "requirements": [], "extra": 1}"#;
        assert!(matches!(
            project_from_str(text),
            Err(StoreError::SchemaViolation { .. })
        ));
    }
}
