//! The full pipeline over a document, report types and rendering.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::centering::{
    advance, Bindings, CenteringState, Rule, RuleCheck, RuleStatus, Transition,
};
use crate::corpus::{parse_document, DiscourseDocument, ExpectedUtterance};
use crate::error::{AdviceError, AnalysisError};
use crate::felicity::{advise_form, judge, FelicityLabel, FelicityVerdict, FormAdvice};
use crate::model::{warnings, Discourse, EntityId, Language, MorphFeatures, Role, UtteranceId};
use crate::resolver::{Binding, ResolutionResult, Resolver, TraceEvent, TraceKind};

pub const REPORT_SCHEMA_VERSION: &str = "1";

/// Everything computed for one utterance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UtteranceRecord {
    pub id: UtteranceId,
    pub cb: Option<EntityId>,
    pub cf: Vec<EntityId>,
    pub transition: Transition,
    pub checks: Vec<RuleCheck>,
    pub bindings: Vec<Binding>,
    pub trace: Vec<TraceEvent>,
    pub garden_path: bool,
    pub ambiguous: bool,
    pub felicity: FelicityVerdict,
}

impl UtteranceRecord {
    pub fn violations(&self) -> Vec<Rule> {
        let mut v: Vec<Rule> = self
            .checks
            .iter()
            .filter(|c| c.is_violated())
            .map(|c| c.rule)
            .collect();
        v.sort();
        v
    }

    pub fn skipped_segment(&self) -> bool {
        self.trace.iter().any(|t| t.kind == TraceKind::SkipSegment)
    }

    pub fn state(&self) -> CenteringState {
        CenteringState {
            cb: self.cb.clone(),
            cf: self.cf.clone(),
            source_utterance: self.id.clone(),
        }
    }
}

/// Counts per transition and per felicity label, every label present.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub utterances: usize,
    pub transitions: BTreeMap<String, usize>,
    pub felicity: BTreeMap<String, usize>,
}

impl Summary {
    pub fn of(records: &[UtteranceRecord]) -> Self {
        let mut transitions: BTreeMap<String, usize> =
            Transition::ALL.iter().map(|t| (t.to_string(), 0)).collect();
        let mut felicity: BTreeMap<String, usize> = FelicityLabel::ALL
            .iter()
            .map(|l| (l.to_string(), 0))
            .collect();
        for r in records {
            *transitions.entry(r.transition.to_string()).or_default() += 1;
            *felicity.entry(r.felicity.label.to_string()).or_default() += 1;
        }
        Summary {
            utterances: records.len(),
            transitions,
            felicity,
        }
    }
}

/// One expected field that differs from the computed one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub utterance: UtteranceId,
    pub field: String,
    pub expected: Value,
    pub actual: Value,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema_version: String,
    pub document: String,
    pub utterances: Vec<UtteranceRecord>,
    pub summary: Summary,
    pub mismatches: Vec<Mismatch>,
}

impl AnalysisReport {
    pub fn record(&self, id: &str) -> Option<&UtteranceRecord> {
        self.utterances.iter().find(|u| u.id.as_str() == id)
    }
}

/// Runs resolution, centering and judgment over every utterance in order.
pub fn analyze_discourse(discourse: &Discourse) -> Result<Vec<UtteranceRecord>, AnalysisError> {
    let entities = discourse.entity_table();
    let resolver = Resolver::new(&entities);
    let mut prev: Option<CenteringState> = None;
    let mut out = Vec::with_capacity(discourse.utterances.len());
    for u in &discourse.utterances {
        let before = prev.clone().unwrap_or_else(CenteringState::empty);
        let resolution =
            resolver
                .resolve_utterance(u, &before)
                .map_err(|source| AnalysisError::Resolve {
                    utterance: u.id.to_string(),
                    source,
                })?;
        let bindings = effective_bindings(u, &resolution);
        let step = advance(prev.as_ref(), u, &bindings, &entities);
        let subject_form = u
            .main_subject()
            .map(|(_, e)| e.form)
            // English has no null/overt contrast to judge
            .filter(|f| discourse.language == Language::Italian || !f.is_pronominal());
        let felicity = judge(step.transition, subject_form, &resolution, &step.checks);
        out.push(UtteranceRecord {
            id: u.id.clone(),
            cb: step.state.cb.clone(),
            cf: step.state.cf.clone(),
            transition: step.transition,
            checks: step.checks,
            bindings: resolution.bindings,
            trace: resolution.trace,
            garden_path: resolution.garden_path,
            ambiguous: resolution.ambiguous,
            felicity,
        });
        prev = Some(step.state);
    }
    Ok(out)
}

/// Gold references where annotated, resolver output elsewhere.
pub fn effective_bindings(
    utterance: &crate::model::Utterance,
    resolution: &ResolutionResult,
) -> Bindings {
    let mut map = resolution.entity_map();
    for (r, e) in utterance.expressions() {
        if let Some(g) = &e.gold_ref {
            map.insert(r, g.clone());
        }
    }
    map
}

pub fn analyze_document(
    name: &str,
    doc: &DiscourseDocument,
) -> Result<AnalysisReport, AnalysisError> {
    let utterances = analyze_discourse(&doc.discourse)?;
    let mismatches = match &doc.expected {
        Some(exp) => compare(&exp.utterances, &utterances),
        None => Vec::new(),
    };
    Ok(AnalysisReport {
        schema_version: REPORT_SCHEMA_VERSION.to_string(),
        document: name.to_string(),
        summary: Summary::of(&utterances),
        utterances,
        mismatches,
    })
}

/// Parses, optionally applies strict mode, and analyzes.
pub fn analyze_bytes(
    name: &str,
    bytes: &[u8],
    strict: bool,
) -> Result<AnalysisReport, AnalysisError> {
    let doc = parse_document(bytes)?;
    if strict {
        let w = warnings(&doc.discourse);
        if !w.is_empty() {
            return Err(AnalysisError::Strict(w));
        }
    }
    analyze_document(name, &doc)
}

/// Every expected field that differs from the computed record.
pub fn compare(expected: &[ExpectedUtterance], records: &[UtteranceRecord]) -> Vec<Mismatch> {
    let mut out = Vec::new();
    for exp in expected {
        let mut diff = |field: &str, expected: Value, actual: Value| {
            if expected != actual {
                out.push(Mismatch {
                    utterance: exp.id.clone(),
                    field: field.to_string(),
                    expected,
                    actual,
                });
            }
        };
        let Some(rec) = records.iter().find(|r| r.id == exp.id) else {
            diff("utterance", json!(exp.id), Value::Null);
            continue;
        };
        if let Some(cb) = &exp.cb {
            diff("cb", json!(cb), json!(rec.cb));
        }
        if let Some(cf) = &exp.cf {
            diff("cf", json!(cf), json!(rec.cf));
        }
        if let Some(t) = exp.transition {
            diff("transition", json!(t), json!(rec.transition));
        }
        for b in &exp.bindings {
            let actual = rec
                .bindings
                .iter()
                .find(|x| x.expression == b.at())
                .map(|x| &x.entity);
            diff(
                &format!("binding {}", b.at()),
                json!(b.entity),
                json!(actual),
            );
        }
        if let Some(g) = exp.garden_path {
            diff("garden_path", json!(g), json!(rec.garden_path));
        }
        if let Some(a) = exp.ambiguous {
            diff("ambiguous", json!(a), json!(rec.ambiguous));
        }
        if let Some(s) = exp.skip_segment {
            diff("skip_segment", json!(s), json!(rec.skipped_segment()));
        }
        if let Some(v) = &exp.violations {
            let mut v = v.clone();
            v.sort();
            diff("violations", json!(v), json!(rec.violations()));
        }
        if let Some(l) = exp.felicity {
            diff("felicity", json!(l), json!(rec.felicity.label));
        }
        if let Some(r) = &exp.reasons {
            diff("reasons", json!(r), json!(rec.felicity.reasons));
        }
    }
    out
}

/// Form advice for the utterance that would follow `after`.
pub fn advise(
    discourse: &Discourse,
    after: &UtteranceId,
    intended: &EntityId,
    role: Role,
    planned: &MorphFeatures,
) -> Result<FormAdvice, AnalysisError> {
    let pos = discourse
        .utterances
        .iter()
        .position(|u| &u.id == after)
        .ok_or_else(|| AnalysisError::UnknownUtterance(after.to_string()))?;
    let entities = discourse.entity_table();
    if !entities.contains(intended) {
        return Err(AdviceError::UnknownEntity(intended.clone()).into());
    }
    let prefix = Discourse {
        language: discourse.language,
        entities: discourse.entities.clone(),
        utterances: discourse.utterances[..=pos].to_vec(),
    };
    let records = analyze_discourse(&prefix)?;
    let state = records.last().expect("prefix is non-empty").state();
    Ok(advise_form(intended, role, &state, planned, &entities)?)
}

/// Exit status for a batch: input errors dominate, then mismatches.
pub fn exit_code(input_errors: bool, mismatches: bool) -> i32 {
    match (input_errors, mismatches) {
        (true, _) => 2,
        (false, true) => 1,
        (false, false) => 0,
    }
}

fn or_dash(id: Option<&EntityId>) -> String {
    id.map_or_else(|| "-".to_string(), ToString::to_string)
}

fn status_str(s: RuleStatus) -> &'static str {
    match s {
        RuleStatus::Satisfied => "satisfied",
        RuleStatus::Violated => "violated",
        RuleStatus::Vacuous => "vacuous",
    }
}

/// Human-readable report; one line per utterance, details under it when
/// `trace` is set.
pub fn render_text(report: &AnalysisReport, trace: bool) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# {}", report.document);
    for r in &report.utterances {
        let cf: Vec<String> = r.cf.iter().map(ToString::to_string).collect();
        let _ = write!(
            s,
            "{}  Cb={} Cf=[{}] transition={} felicity={}",
            r.id,
            or_dash(r.cb.as_ref()),
            cf.join(", "),
            r.transition,
            r.felicity.label
        );
        if !r.felicity.reasons.is_empty() {
            let reasons: Vec<String> = r
                .felicity
                .reasons
                .iter()
                .map(|x| json!(x).as_str().unwrap_or_default().to_string())
                .collect();
            let _ = write!(s, " ({})", reasons.join(", "));
        }
        s.push('\n');
        if trace {
            for c in &r.checks {
                let _ = writeln!(s, "    {} {}: {}", c.rule, status_str(c.status), c.detail);
            }
            for b in &r.bindings {
                let basis = json!(b.basis);
                let _ = writeln!(
                    s,
                    "    {} -> {} [{} @{}]",
                    b.expression,
                    b.entity,
                    basis.as_str().unwrap_or_default(),
                    b.settled_at
                );
            }
            for t in &r.trace {
                let at = t.expression.map_or_else(String::new, |e| format!(" e{e}"));
                let _ = writeln!(
                    s,
                    "    c{} @{} {}{}: {}",
                    t.clause, t.position, t.kind, at, t.detail
                );
            }
            if r.garden_path {
                s.push_str("    garden path\n");
            }
            if r.ambiguous {
                s.push_str("    ambiguous\n");
            }
        }
    }
    let sum = &report.summary;
    let counts = |m: &BTreeMap<String, usize>| {
        m.iter()
            .filter(|(_, n)| **n > 0)
            .map(|(k, n)| format!("{k}={n}"))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let _ = writeln!(
        s,
        "summary: {} utterances; {}; {}",
        sum.utterances,
        counts(&sum.transitions),
        counts(&sum.felicity)
    );
    if report.mismatches.is_empty() {
        s.push_str("mismatches: none\n");
    } else {
        for m in &report.mismatches {
            let _ = writeln!(
                s,
                "MISMATCH {} {}: expected {} got {}",
                m.utterance, m.field, m.expected, m.actual
            );
        }
    }
    s
}

pub fn render_json(report: &AnalysisReport) -> String {
    serde_json::to_string_pretty(report).expect("reports always serialize")
}

/// A JSON array with one report per document.
pub fn render_json_all(reports: &[AnalysisReport]) -> String {
    serde_json::to_string_pretty(reports).expect("reports always serialize")
}
