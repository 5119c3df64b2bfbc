//! Annotated discourse representation.
//!
//! A [`Discourse`] is a list of entities plus a sequence of utterances, each
//! utterance a list of clauses, each clause a list of referring expressions
//! and an agreement window. Nothing here parses raw text: token positions,
//! grammatical roles and morphological features arrive pre-annotated.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::ModelError;

/// Identifier of a discourse entity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EntityId(pub String);

impl EntityId {
    pub fn new(id: impl Into<String>) -> Self {
        EntityId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for EntityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for EntityId {
    fn from(s: &str) -> Self {
        EntityId(s.to_string())
    }
}

/// Identifier of an utterance.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct UtteranceId(pub String);

impl UtteranceId {
    pub fn new(id: impl Into<String>) -> Self {
        UtteranceId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for UtteranceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for UtteranceId {
    fn from(s: &str) -> Self {
        UtteranceId(s.to_string())
    }
}

/// Italian has no neuter: inanimates are masculine or feminine too.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gender {
    Masculine,
    Feminine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Number {
    Singular,
    Plural,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Animacy {
    Animate,
    Inanimate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntityKind {
    Individual,
    /// A referent standing for a whole stretch of discourse. Never ranked as a
    /// forward-looking center.
    Segment,
}

/// Grammatical person, serialized as the integers 1, 2, 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Person {
    First,
    Second,
    Third,
}

impl Serialize for Person {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let n: u8 = match self {
            Person::First => 1,
            Person::Second => 2,
            Person::Third => 3,
        };
        s.serialize_u8(n)
    }
}

impl<'de> Deserialize<'de> for Person {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match u8::deserialize(d)? {
            1 => Ok(Person::First),
            2 => Ok(Person::Second),
            3 => Ok(Person::Third),
            n => Err(serde::de::Error::custom(format!(
                "person must be 1, 2 or 3, got {n}"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entity {
    pub id: EntityId,
    pub gender: Gender,
    pub number: Number,
    pub animacy: Animacy,
    pub kind: EntityKind,
}

impl Entity {
    /// An animate singular individual, the common case in the examples.
    pub fn individual(id: impl Into<String>, gender: Gender) -> Self {
        Entity {
            id: EntityId::new(id),
            gender,
            number: Number::Singular,
            animacy: Animacy::Animate,
            kind: EntityKind::Individual,
        }
    }

    pub fn is_individual(&self) -> bool {
        self.kind == EntityKind::Individual
    }
}

/// Morphological marking carried by an expression or a verbal form. An absent
/// field is unmarked and matches anything.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphFeatures {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gender: Option<Gender>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub number: Option<Number>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub person: Option<Person>,
}

impl MorphFeatures {
    pub fn is_empty(&self) -> bool {
        self.gender.is_none() && self.number.is_none() && self.person.is_none()
    }

    pub fn gender(gender: Gender) -> Self {
        MorphFeatures {
            gender: Some(gender),
            ..Default::default()
        }
    }

    /// Third person singular with the given gender, i.e. lui / lei.
    pub fn third_singular(gender: Option<Gender>) -> Self {
        MorphFeatures {
            gender,
            number: Some(Number::Singular),
            person: Some(Person::Third),
        }
    }

    /// Field-wise check against an entity, ignoring its kind.
    fn matches(&self, entity: &Entity) -> bool {
        self.gender.is_none_or(|g| g == entity.gender)
            && self.number.is_none_or(|n| n == entity.number)
            // discourse entities are all third person
            && self.person.is_none_or(|p| p == Person::Third)
    }
}

impl fmt::Display for MorphFeatures {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if let Some(g) = self.gender {
            parts.push(match g {
                Gender::Masculine => "masc",
                Gender::Feminine => "fem",
            });
        }
        if let Some(n) = self.number {
            parts.push(match n {
                Number::Singular => "sg",
                Number::Plural => "pl",
            });
        }
        if let Some(p) = self.person {
            parts.push(match p {
                Person::First => "1",
                Person::Second => "2",
                Person::Third => "3",
            });
        }
        if parts.is_empty() {
            f.write_str("{}")
        } else {
            write!(f, "{{{}}}", parts.join(","))
        }
    }
}

/// True iff every marked feature agrees with the entity.
///
/// Segment entities carry no usable morphology and are rejected.
pub fn compatible(features: &MorphFeatures, entity: &Entity) -> Result<bool, ModelError> {
    if !entity.is_individual() {
        return Err(ModelError::SegmentMorphology(entity.id.clone()));
    }
    Ok(features.matches(entity))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Form {
    NullSubject,
    CliticPronoun,
    StrongPronoun,
    ProperName,
    DefiniteNp,
    ReflexiveClitic,
}

impl Form {
    /// Forms whose referent has to be found in context.
    pub fn is_pronominal(self) -> bool {
        matches!(
            self,
            Form::NullSubject | Form::CliticPronoun | Form::StrongPronoun | Form::ReflexiveClitic
        )
    }

    pub fn is_clitic(self) -> bool {
        matches!(self, Form::CliticPronoun | Form::ReflexiveClitic)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Form::NullSubject => "null_subject",
            Form::CliticPronoun => "clitic_pronoun",
            Form::StrongPronoun => "strong_pronoun",
            Form::ProperName => "proper_name",
            Form::DefiniteNp => "definite_np",
            Form::ReflexiveClitic => "reflexive_clitic",
        }
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Grammatical role, listed from most to least prominent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Subject,
    DirectObject,
    IndirectObject,
    Oblique,
    Possessor,
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CliticPlacement {
    /// Before the finite verb (proclitic), including climbed clitics.
    Preverbal,
    /// Attached after an infinitive or gerund.
    Enclitic,
}

fn is_false(b: &bool) -> bool {
    !*b
}

/// One mention in a clause.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferringExpression {
    pub form: Form,
    pub role: Role,
    #[serde(default, skip_serializing_if = "MorphFeatures::is_empty")]
    pub features: MorphFeatures,
    pub position: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clitic_placement: Option<CliticPlacement>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gold_ref: Option<EntityId>,
    #[serde(default, skip_serializing_if = "is_false")]
    pub pragmatic_override: bool,
}

impl ReferringExpression {
    pub fn new(form: Form, role: Role, position: usize) -> Self {
        ReferringExpression {
            form,
            role,
            features: MorphFeatures::default(),
            position,
            clitic_placement: None,
            gold_ref: None,
            pragmatic_override: false,
        }
    }

    pub fn null_subject(position: usize) -> Self {
        Self::new(Form::NullSubject, Role::Subject, position)
    }

    pub fn clitic(role: Role, position: usize, placement: CliticPlacement) -> Self {
        ReferringExpression {
            clitic_placement: Some(placement),
            ..Self::new(Form::CliticPronoun, role, position)
        }
    }

    pub fn with_features(mut self, features: MorphFeatures) -> Self {
        self.features = features;
        self
    }

    pub fn with_gold(mut self, id: impl Into<String>) -> Self {
        self.gold_ref = Some(EntityId::new(id));
        self
    }
}

/// Inclusive token span of the verbal forms carrying tense and agreement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgreementWindow {
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClauseType {
    Main,
    Subordinate,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Clause {
    pub clause_type: ClauseType,
    pub agreement_window: AgreementWindow,
    /// Subject agreement marked inside the window (finite verb, agreeing
    /// participle). Applied to the subject once the window closes.
    #[serde(default, skip_serializing_if = "MorphFeatures::is_empty")]
    pub agreement: MorphFeatures,
    pub expressions: Vec<ReferringExpression>,
}

impl Clause {
    pub fn subject_index(&self) -> Option<usize> {
        self.expressions
            .iter()
            .position(|e| e.role == Role::Subject)
    }

    pub fn subject(&self) -> Option<&ReferringExpression> {
        self.subject_index().map(|i| &self.expressions[i])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Utterance {
    pub id: UtteranceId,
    /// Surface text, for reports only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text: Option<String>,
    pub clauses: Vec<Clause>,
}

impl Utterance {
    pub fn main_clause_index(&self) -> Option<usize> {
        self.clauses
            .iter()
            .position(|c| c.clause_type == ClauseType::Main)
    }

    pub fn main_clause(&self) -> Option<&Clause> {
        self.main_clause_index().map(|i| &self.clauses[i])
    }

    /// The main clause's subject, the expression whose form gets judged.
    pub fn main_subject(&self) -> Option<(ExprRef, &ReferringExpression)> {
        let ci = self.main_clause_index()?;
        let ei = self.clauses[ci].subject_index()?;
        Some((ExprRef::new(ci, ei), &self.clauses[ci].expressions[ei]))
    }

    pub fn expressions(&self) -> impl Iterator<Item = (ExprRef, &ReferringExpression)> {
        self.clauses.iter().enumerate().flat_map(|(ci, c)| {
            c.expressions
                .iter()
                .enumerate()
                .map(move |(ei, e)| (ExprRef::new(ci, ei), e))
        })
    }

    pub fn expression(&self, r: ExprRef) -> Option<&ReferringExpression> {
        self.clauses.get(r.clause)?.expressions.get(r.expression)
    }
}

/// Address of an expression inside an utterance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExprRef {
    pub clause: usize,
    pub expression: usize,
}

impl ExprRef {
    pub fn new(clause: usize, expression: usize) -> Self {
        ExprRef { clause, expression }
    }
}

impl fmt::Display for ExprRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}.e{}", self.clause, self.expression)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Language {
    Italian,
    English,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Discourse {
    pub language: Language,
    pub entities: Vec<Entity>,
    pub utterances: Vec<Utterance>,
}

impl Discourse {
    pub fn entity_table(&self) -> EntityTable {
        EntityTable::new(self.entities.iter().cloned())
    }

    pub fn utterance(&self, id: &UtteranceId) -> Option<&Utterance> {
        self.utterances.iter().find(|u| &u.id == id)
    }
}

/// Entities by id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EntityTable {
    entities: BTreeMap<EntityId, Entity>,
}

impl EntityTable {
    pub fn new(entities: impl IntoIterator<Item = Entity>) -> Self {
        EntityTable {
            entities: entities.into_iter().map(|e| (e.id.clone(), e)).collect(),
        }
    }

    pub fn get(&self, id: &EntityId) -> Option<&Entity> {
        self.entities.get(id)
    }

    pub fn contains(&self, id: &EntityId) -> bool {
        self.entities.contains_key(id)
    }

    /// Declared and of kind individual.
    pub fn is_individual(&self, id: &EntityId) -> bool {
        self.get(id).is_some_and(Entity::is_individual)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Entity> {
        self.entities.values()
    }

    pub fn len(&self) -> usize {
        self.entities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entities.is_empty()
    }
}

/// Which invariant a [`Violation`] breaches.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "invariant", rename_all = "snake_case")]
pub enum ViolationKind {
    DuplicateEntity {
        id: EntityId,
    },
    DuplicateUtterance,
    NoClauses,
    MainClauseCount {
        found: usize,
    },
    WindowInverted {
        start: usize,
        end: usize,
    },
    MultipleSubjects {
        found: usize,
    },
    PositionsNotIncreasing,
    NullSubjectNotSubject,
    NullSubjectWithPlacement,
    MissingCliticPlacement,
    UnexpectedCliticPlacement,
    UndeclaredEntity {
        id: EntityId,
    },
    NullSubjectInEnglish,
    OverrideWithoutGoldRef,
    /// An expected block names an utterance the document does not have.
    ExpectedUnknownUtterance,
    ExpectedUnknownExpression {
        clause: usize,
        expression: usize,
    },
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ViolationKind::DuplicateEntity { id } => write!(f, "entity id `{id}` declared twice"),
            ViolationKind::DuplicateUtterance => f.write_str("utterance id declared twice"),
            ViolationKind::NoClauses => f.write_str("utterance has no clauses"),
            ViolationKind::MainClauseCount { found } => {
                write!(f, "expected exactly one main clause, found {found}")
            }
            ViolationKind::WindowInverted { start, end } => {
                write!(f, "agreement window start {start} is after end {end}")
            }
            ViolationKind::MultipleSubjects { found } => {
                write!(f, "clause has {found} subjects")
            }
            ViolationKind::PositionsNotIncreasing => {
                f.write_str("expression positions are not strictly increasing")
            }
            ViolationKind::NullSubjectNotSubject => {
                f.write_str("null subject must have role subject")
            }
            ViolationKind::NullSubjectWithPlacement => {
                f.write_str("null subject cannot carry a clitic placement")
            }
            ViolationKind::MissingCliticPlacement => f.write_str("clitic lacks clitic_placement"),
            ViolationKind::UnexpectedCliticPlacement => {
                f.write_str("clitic_placement on a non-clitic form")
            }
            ViolationKind::UndeclaredEntity { id } => write!(f, "entity `{id}` is not declared"),
            ViolationKind::NullSubjectInEnglish => {
                f.write_str("english discourse contains a null subject")
            }
            ViolationKind::OverrideWithoutGoldRef => {
                f.write_str("pragmatic_override set without a gold_ref")
            }
            ViolationKind::ExpectedUnknownUtterance => {
                f.write_str("expected block names an undeclared utterance")
            }
            ViolationKind::ExpectedUnknownExpression { clause, expression } => write!(
                f,
                "expected binding for c{clause}.e{expression}, which does not exist"
            ),
        }
    }
}

/// A breached invariant, located as precisely as the invariant allows.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Violation {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub utterance: Option<UtteranceId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clause: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expression: Option<usize>,
    #[serde(flatten)]
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut loc = Vec::new();
        if let Some(u) = &self.utterance {
            loc.push(format!("utterance {u}"));
        }
        if let Some(c) = self.clause {
            loc.push(format!("clause {c}"));
        }
        if let Some(e) = self.expression {
            loc.push(format!("expression {e}"));
        }
        if loc.is_empty() {
            write!(f, "{}", self.kind)
        } else {
            write!(f, "{}: {}", loc.join(", "), self.kind)
        }
    }
}

/// Checks every structural invariant and reports all breaches, in document
/// order. An empty result means the discourse is well formed.
pub fn validate(discourse: &Discourse) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for e in &discourse.entities {
        if !seen.insert(&e.id) {
            out.push(Violation {
                utterance: None,
                clause: None,
                expression: None,
                kind: ViolationKind::DuplicateEntity { id: e.id.clone() },
            });
        }
    }

    let mut utterance_ids = HashSet::new();
    for u in &discourse.utterances {
        let at = |clause: Option<usize>, expression: Option<usize>, kind| Violation {
            utterance: Some(u.id.clone()),
            clause,
            expression,
            kind,
        };
        if !utterance_ids.insert(&u.id) {
            out.push(at(None, None, ViolationKind::DuplicateUtterance));
        }
        if u.clauses.is_empty() {
            out.push(at(None, None, ViolationKind::NoClauses));
            continue;
        }
        let mains = u
            .clauses
            .iter()
            .filter(|c| c.clause_type == ClauseType::Main)
            .count();
        if mains != 1 {
            out.push(at(
                None,
                None,
                ViolationKind::MainClauseCount { found: mains },
            ));
        }

        for (ci, clause) in u.clauses.iter().enumerate() {
            let w = clause.agreement_window;
            if w.start > w.end {
                out.push(at(
                    Some(ci),
                    None,
                    ViolationKind::WindowInverted {
                        start: w.start,
                        end: w.end,
                    },
                ));
            }
            let subjects = clause
                .expressions
                .iter()
                .filter(|e| e.role == Role::Subject)
                .count();
            if subjects > 1 {
                out.push(at(
                    Some(ci),
                    None,
                    ViolationKind::MultipleSubjects { found: subjects },
                ));
            }
            if clause
                .expressions
                .windows(2)
                .any(|p| p[0].position >= p[1].position)
            {
                out.push(at(Some(ci), None, ViolationKind::PositionsNotIncreasing));
            }

            for (ei, expr) in clause.expressions.iter().enumerate() {
                let mut flag = |kind| out.push(at(Some(ci), Some(ei), kind));
                if expr.form == Form::NullSubject {
                    if expr.role != Role::Subject {
                        flag(ViolationKind::NullSubjectNotSubject);
                    }
                    if expr.clitic_placement.is_some() {
                        flag(ViolationKind::NullSubjectWithPlacement);
                    }
                    if discourse.language == Language::English {
                        flag(ViolationKind::NullSubjectInEnglish);
                    }
                } else if expr.form.is_clitic() && expr.clitic_placement.is_none() {
                    flag(ViolationKind::MissingCliticPlacement);
                } else if !expr.form.is_clitic() && expr.clitic_placement.is_some() {
                    flag(ViolationKind::UnexpectedCliticPlacement);
                }
                match &expr.gold_ref {
                    Some(id) if !seen.contains(id) => {
                        flag(ViolationKind::UndeclaredEntity { id: id.clone() })
                    }
                    None if expr.pragmatic_override => flag(ViolationKind::OverrideWithoutGoldRef),
                    _ => {}
                }
            }
        }
    }
    out
}

/// Non-fatal oddities, promoted to errors by strict mode.
pub fn warnings(discourse: &Discourse) -> Vec<String> {
    let mut out = Vec::new();
    let referenced: HashSet<&EntityId> = discourse
        .utterances
        .iter()
        .flat_map(|u| u.expressions())
        .filter_map(|(_, e)| e.gold_ref.as_ref())
        .collect();
    for e in &discourse.entities {
        if !referenced.contains(&e.id) {
            out.push(format!("entity `{}` is never referenced", e.id));
        }
    }
    for u in &discourse.utterances {
        for (r, e) in u.expressions() {
            if !e.form.is_pronominal() && e.gold_ref.is_none() {
                out.push(format!(
                    "utterance {}, {r}: {} has no gold_ref and realizes nothing",
                    u.id, e.form
                ));
            }
        }
    }
    out
}
