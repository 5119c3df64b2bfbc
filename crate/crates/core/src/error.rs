use thiserror::Error;

use crate::model::{EntityId, ExprRef, Violation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("segment entities have no morphology")]
    SegmentMorphology(EntityId),
}

/// Failures reading a discourse document.
#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("input is not valid UTF-8: {0}")]
    Utf8(#[from] std::str::Utf8Error),
    #[error("parse error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported schema_version {0:?} (expected \"1\")")]
    Version(String),
    #[error("document is invalid:\n{}", render_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

fn render_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|v| format!("  - {v}"))
        .collect::<Vec<_>>()
        .join("\n")
}

impl From<serde_json::Error> for CorpusError {
    fn from(e: serde_json::Error) -> Self {
        CorpusError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolveError {
    #[error("{expression}: no candidate satisfies {detail}")]
    Unresolvable { expression: ExprRef, detail: String },
    #[error("{expression}: clitic without placement annotation")]
    MissingPlacement { expression: ExprRef },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AdviceError {
    #[error("`{0}` is not an available center")]
    NotAvailable(EntityId),
    #[error("planned agreement features do not fit `{0}`")]
    FeatureClash(EntityId),
    #[error("unknown entity `{0}`")]
    UnknownEntity(EntityId),
}

/// Anything that can stop the analysis pipeline.
#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error("utterance {utterance}: {source}")]
    Resolve {
        utterance: String,
        #[source]
        source: ResolveError,
    },
    #[error(transparent)]
    Advice(#[from] AdviceError),
    #[error("unknown utterance `{0}`")]
    UnknownUtterance(String),
    #[error("strict mode:\n{}", .0.iter().map(|w| format!("  - {w}")).collect::<Vec<_>>().join("\n"))]
    Strict(Vec<String>),
    #[error("{0}")]
    Input(String),
}
