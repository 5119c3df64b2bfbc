//! The `.cdoc.json` interchange format and the bundled reference corpus.
//!
//! A document is a JSON object with top-level keys `schema_version`,
//! `language`, `entities`, `utterances` and optionally `expected`. Enum values
//! are lower_snake_case strings. Optional fields that are absent or at their
//! default are omitted on output, so a document produced by
//! [`serialize_document`] parses back to itself byte for byte.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::centering::{Rule, Transition};
use crate::error::CorpusError;
use crate::felicity::{FelicityLabel, Reason};
use crate::model::{
    validate, Discourse, Entity, EntityId, ExprRef, Language, Utterance, UtteranceId, Violation,
    ViolationKind,
};

pub const SCHEMA_VERSION: &str = "1";

/// Environment variable pointing at a corpus directory to use instead of the
/// bundled files.
pub const CORPUS_DIR_ENV: &str = "CENTERING_CORPUS_DIR";

pub const EXTENSION: &str = ".cdoc.json";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscourseDocument {
    pub schema_version: String,
    pub discourse: Discourse,
    pub expected: Option<ExpectedAnnotations>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectedAnnotations {
    pub utterances: Vec<ExpectedUtterance>,
}

impl ExpectedAnnotations {
    pub fn utterance(&self, id: &UtteranceId) -> Option<&ExpectedUtterance> {
        self.utterances.iter().find(|u| &u.id == id)
    }
}

/// What the analysis of one utterance should produce. Absent fields are not
/// checked.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectedUtterance {
    pub id: UtteranceId,
    /// `null` expects no Cb at all.
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        deserialize_with = "some_nullable",
        serialize_with = "nullable"
    )]
    pub cb: Option<Option<EntityId>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cf: Option<Vec<EntityId>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transition: Option<Transition>,
    /// Resolver output for the listed expressions.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bindings: Vec<ExpectedBinding>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub garden_path: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambiguous: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skip_segment: Option<bool>,
    /// Rules expected to be violated; `[]` expects none.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub violations: Option<Vec<Rule>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub felicity: Option<FelicityLabel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reasons: Option<Vec<Reason>>,
}

impl ExpectedUtterance {
    pub fn new(id: impl Into<String>) -> Self {
        ExpectedUtterance {
            id: UtteranceId::new(id),
            cb: None,
            cf: None,
            transition: None,
            bindings: Vec::new(),
            garden_path: None,
            ambiguous: None,
            skip_segment: None,
            violations: None,
            felicity: None,
            reasons: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectedBinding {
    pub clause: usize,
    pub expression: usize,
    pub entity: EntityId,
}

impl ExpectedBinding {
    pub fn at(&self) -> ExprRef {
        ExprRef::new(self.clause, self.expression)
    }
}

fn some_nullable<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Option<EntityId>>, D::Error> {
    Option::<EntityId>::deserialize(d).map(Some)
}

fn nullable<S: Serializer>(v: &Option<Option<EntityId>>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(inner) => inner.serialize(s),
        None => s.serialize_none(),
    }
}

/// On-disk layout; the discourse fields sit at top level.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Wire {
    schema_version: String,
    language: Language,
    entities: Vec<Entity>,
    utterances: Vec<Utterance>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    expected: Option<ExpectedAnnotations>,
}

#[derive(Deserialize)]
struct VersionProbe {
    schema_version: Option<serde_json::Value>,
}

/// Parses and validates a document.
///
/// Syntax errors carry line and column; a wrong `schema_version` is reported
/// before any structural problem; a structurally valid document that breaks
/// an invariant yields every violation at once.
pub fn parse_document(bytes: &[u8]) -> Result<DiscourseDocument, CorpusError> {
    let text = std::str::from_utf8(bytes)?;
    let probe: VersionProbe = serde_json::from_str(text)?;
    match probe.schema_version {
        Some(serde_json::Value::String(v)) if v == SCHEMA_VERSION => {}
        Some(serde_json::Value::String(v)) => return Err(CorpusError::Version(v)),
        Some(other) => return Err(CorpusError::Version(other.to_string())),
        None => return Err(CorpusError::Version(String::new())),
    }
    let wire: Wire = serde_json::from_str(text)?;
    let doc = DiscourseDocument {
        schema_version: wire.schema_version,
        discourse: Discourse {
            language: wire.language,
            entities: wire.entities,
            utterances: wire.utterances,
        },
        expected: wire.expected,
    };
    let violations = validate_document(&doc);
    if violations.is_empty() {
        Ok(doc)
    } else {
        Err(CorpusError::Invalid(violations))
    }
}

/// Pretty-printed JSON with a trailing newline.
pub fn serialize_document(doc: &DiscourseDocument) -> Vec<u8> {
    let wire = Wire {
        schema_version: doc.schema_version.clone(),
        language: doc.discourse.language,
        entities: doc.discourse.entities.clone(),
        utterances: doc.discourse.utterances.clone(),
        expected: doc.expected.clone(),
    };
    let mut out = serde_json::to_vec_pretty(&wire).expect("documents always serialize");
    out.push(b'\n');
    out
}

/// Discourse invariants plus referential integrity of the expected block.
pub fn validate_document(doc: &DiscourseDocument) -> Vec<Violation> {
    let mut out = validate(&doc.discourse);
    let Some(expected) = &doc.expected else {
        return out;
    };
    let declared: HashSet<&EntityId> = doc.discourse.entities.iter().map(|e| &e.id).collect();
    for exp in &expected.utterances {
        let flag = |kind| Violation {
            utterance: Some(exp.id.clone()),
            clause: None,
            expression: None,
            kind,
        };
        let Some(u) = doc.discourse.utterance(&exp.id) else {
            out.push(flag(ViolationKind::ExpectedUnknownUtterance));
            continue;
        };
        let mut ids: Vec<&EntityId> = Vec::new();
        if let Some(Some(cb)) = &exp.cb {
            ids.push(cb);
        }
        ids.extend(exp.cf.iter().flatten());
        ids.extend(exp.bindings.iter().map(|b| &b.entity));
        for id in ids {
            if !declared.contains(id) {
                out.push(flag(ViolationKind::UndeclaredEntity { id: id.clone() }));
            }
        }
        for b in &exp.bindings {
            if u.expression(b.at()).is_none() {
                out.push(flag(ViolationKind::ExpectedUnknownExpression {
                    clause: b.clause,
                    expression: b.expression,
                }));
            }
        }
    }
    out
}

/// A named document source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusFile {
    /// File stem without the `.cdoc.json` extension.
    pub name: String,
    pub bytes: Vec<u8>,
}

macro_rules! bundled {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../corpus/", $name, ".cdoc.json")))),*]
    };
}

static BUNDLED: &[(&str, &str)] = bundled!(
    "ex1_a", "ex1_b", "ex2_d1", "ex2_d2", "ex3", "ex3_his", "ex4", "ex4_u3a", "ex4_u3b", "ex4_u3c",
    "ex4_u3d", "ex5_u2a", "ex5_u2b", "ex5_u2c", "ex6", "ex7",
);

/// The reference examples compiled into the library.
pub fn bundled() -> Vec<CorpusFile> {
    BUNDLED
        .iter()
        .map(|(name, text)| CorpusFile {
            name: name.to_string(),
            bytes: text.as_bytes().to_vec(),
        })
        .collect()
}

pub fn bundled_file(name: &str) -> Option<CorpusFile> {
    bundled().into_iter().find(|f| f.name == name)
}

/// Every `*.cdoc.json` in `dir`, sorted by name.
pub fn load_dir(dir: &Path) -> Result<Vec<CorpusFile>, CorpusError> {
    let io = |source| CorpusError::Io {
        path: dir.display().to_string(),
        source,
    };
    let mut files = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(io)? {
        let path = entry.map_err(io)?.path();
        let Some(name) = path
            .file_name()
            .and_then(|n| n.to_str())
            .and_then(|n| n.strip_suffix(EXTENSION))
        else {
            continue;
        };
        let name = name.to_string();
        files.push(CorpusFile {
            name,
            bytes: read_file(&path)?,
        });
    }
    files.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(files)
}

pub fn read_file(path: &Path) -> Result<Vec<u8>, CorpusError> {
    std::fs::read(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// The corpus directory named by `CENTERING_CORPUS_DIR`, if set.
pub fn corpus_dir_override() -> Option<PathBuf> {
    std::env::var_os(CORPUS_DIR_ENV)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
}

/// The override directory when set, the bundled files otherwise.
pub fn corpus() -> Result<Vec<CorpusFile>, CorpusError> {
    match corpus_dir_override() {
        Some(dir) => load_dir(&dir),
        None => Ok(bundled()),
    }
}
