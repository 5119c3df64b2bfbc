//! Forward-looking center ranking, backward-looking center computation,
//! transition classification and the two realization rules.
//!
//! Everything here works on *bindings*: a map from each expression of an
//! utterance to the entity it realizes. The analysis pipeline supplies
//! annotated referents where they exist and resolver output elsewhere.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::{EntityId, EntityTable, ExprRef, Role, Utterance, UtteranceId};

/// Expression → entity map for one utterance.
pub type Bindings = BTreeMap<ExprRef, EntityId>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CenteringState {
    pub cb: Option<EntityId>,
    /// Highest rank first.
    pub cf: Vec<EntityId>,
    pub source_utterance: UtteranceId,
}

impl CenteringState {
    /// State before any utterance: no centers at all.
    pub fn empty() -> Self {
        CenteringState {
            cb: None,
            cf: Vec::new(),
            source_utterance: UtteranceId::new(""),
        }
    }

    pub fn head(&self) -> Option<&EntityId> {
        self.cf.first()
    }

    /// The center the next utterance is measured against: the Cb, or when the
    /// utterance established none, its top-ranked Cf.
    pub fn reference_center(&self) -> Option<&EntityId> {
        self.cb.as_ref().or_else(|| self.head())
    }

    pub fn rank_of(&self, id: &EntityId) -> Option<usize> {
        self.cf.iter().position(|e| e == id)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Transition {
    Continuation,
    Retention,
    Shifting,
    /// First utterance of a discourse.
    Initial,
}

impl Transition {
    pub const ALL: [Transition; 4] = [
        Transition::Continuation,
        Transition::Retention,
        Transition::Shifting,
        Transition::Initial,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Transition::Continuation => "continuation",
            Transition::Retention => "retention",
            Transition::Shifting => "shifting",
            Transition::Initial => "initial",
        }
    }
}

impl fmt::Display for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    R1,
    R2,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::R1 => "r1",
            Rule::R2 => "r2",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleStatus {
    Satisfied,
    Violated,
    Vacuous,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RuleCheck {
    pub rule: Rule,
    pub status: RuleStatus,
    pub detail: String,
}

impl RuleCheck {
    pub fn is_violated(&self) -> bool {
        self.status == RuleStatus::Violated
    }
}

/// Cf ordering by grammatical role. Lower index ranks higher.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoleHierarchy {
    order: Vec<Role>,
}

impl Default for RoleHierarchy {
    fn default() -> Self {
        RoleHierarchy {
            order: vec![
                Role::Subject,
                Role::DirectObject,
                Role::IndirectObject,
                Role::Oblique,
                Role::Possessor,
                Role::Other,
            ],
        }
    }
}

impl RoleHierarchy {
    /// Roles missing from `order` rank below every listed role.
    pub fn new(order: Vec<Role>) -> Self {
        RoleHierarchy { order }
    }

    pub fn rank(&self, role: Role) -> usize {
        self.order
            .iter()
            .position(|r| *r == role)
            .unwrap_or(self.order.len())
    }
}

/// Individual entities realized in the utterance, best-ranked first.
///
/// Role decides; ties go to the earlier mention (clause order, then token
/// position). An entity mentioned several times keeps its best rank.
pub fn rank_cfs(
    utterance: &Utterance,
    bindings: &Bindings,
    entities: &EntityTable,
) -> Vec<EntityId> {
    rank_cfs_with(&RoleHierarchy::default(), utterance, bindings, entities)
}

pub fn rank_cfs_with(
    hierarchy: &RoleHierarchy,
    utterance: &Utterance,
    bindings: &Bindings,
    entities: &EntityTable,
) -> Vec<EntityId> {
    let mut best: BTreeMap<&EntityId, (usize, usize, usize)> = BTreeMap::new();
    for (r, expr) in utterance.expressions() {
        let Some(id) = bindings.get(&r) else { continue };
        if !entities.is_individual(id) {
            continue;
        }
        let key = (hierarchy.rank(expr.role), r.clause, expr.position);
        best.entry(id)
            .and_modify(|k| *k = (*k).min(key))
            .or_insert(key);
    }
    let mut ranked: Vec<_> = best.into_iter().collect();
    ranked.sort_by_key(|(id, key)| (*key, (*id).clone()));
    ranked.into_iter().map(|(id, _)| id.clone()).collect()
}

/// Individual entities bound anywhere in the utterance.
pub fn realized(
    utterance: &Utterance,
    bindings: &Bindings,
    entities: &EntityTable,
) -> BTreeSet<EntityId> {
    utterance
        .expressions()
        .filter_map(|(r, _)| bindings.get(&r))
        .filter(|id| entities.is_individual(id))
        .cloned()
        .collect()
}

/// The previous Cb if it is realized again, otherwise the best-ranked
/// previous Cf that is.
pub fn compute_cb(
    realized: &BTreeSet<EntityId>,
    prev: Option<&CenteringState>,
) -> Option<EntityId> {
    let prev = prev?;
    if let Some(cb) = &prev.cb {
        if realized.contains(cb) {
            return Some(cb.clone());
        }
    }
    prev.cf.iter().find(|id| realized.contains(*id)).cloned()
}

pub fn classify_transition(prev: Option<&CenteringState>, cur: &CenteringState) -> Transition {
    let Some(prev) = prev else {
        return Transition::Initial;
    };
    let Some(cb) = &cur.cb else {
        return Transition::Shifting;
    };
    if prev.reference_center() != Some(cb) {
        Transition::Shifting
    } else if cur.head() == Some(cb) {
        Transition::Continuation
    } else {
        Transition::Retention
    }
}

/// Pronouns that count for R1: reflexives are fixed by grammar and segment
/// references sit outside the center machinery.
fn r1_pronouns<'a>(
    utterance: &'a Utterance,
    bindings: &'a Bindings,
    entities: &'a EntityTable,
) -> impl Iterator<Item = ExprRef> + 'a {
    utterance
        .expressions()
        .filter(|(_, e)| e.form.is_pronominal() && e.form != crate::model::Form::ReflexiveClitic)
        .filter(move |(r, _)| bindings.get(r).is_none_or(|id| entities.is_individual(id)))
        .map(|(r, _)| r)
}

/// R1: a lone pronoun must realize the Cb.
pub fn check_r1(
    prev: Option<&CenteringState>,
    utterance: &Utterance,
    bindings: &Bindings,
    cb: Option<&EntityId>,
    entities: &EntityTable,
) -> RuleCheck {
    let vacuous = |detail: String| RuleCheck {
        rule: Rule::R1,
        status: RuleStatus::Vacuous,
        detail,
    };
    if prev.is_none() {
        return vacuous("discourse-initial utterance has no Cb".into());
    }
    let pronouns: Vec<ExprRef> = r1_pronouns(utterance, bindings, entities).collect();
    if pronouns.len() != 1 {
        return vacuous(format!("{} pronouns", pronouns.len()));
    }
    let r = pronouns[0];
    let bound = bindings.get(&r);
    let show = |id: Option<&EntityId>| id.map_or("nothing".to_string(), |i| i.to_string());
    if bound.is_some() && bound == cb {
        RuleCheck {
            rule: Rule::R1,
            status: RuleStatus::Satisfied,
            detail: format!("single pronoun {r} realizes Cb {}", show(cb)),
        }
    } else {
        RuleCheck {
            rule: Rule::R1,
            status: RuleStatus::Violated,
            detail: format!(
                "single pronoun {r} realizes {} but Cb is {}",
                show(bound),
                show(cb)
            ),
        }
    }
}

/// R2: if a lower-ranked previous Cf is pronominalized, every higher-ranked
/// previous Cf realized in the utterance must be pronominalized as well.
pub fn check_r2(
    prev: Option<&CenteringState>,
    utterance: &Utterance,
    bindings: &Bindings,
    entities: &EntityTable,
) -> RuleCheck {
    let Some(prev) = prev.filter(|p| !p.cf.is_empty()) else {
        return RuleCheck {
            rule: Rule::R2,
            status: RuleStatus::Vacuous,
            detail: "no previous forward-looking centers".into(),
        };
    };

    // per previous Cf: realized at all, realized by a pronoun, and where
    let mut by_name: BTreeMap<&EntityId, Vec<ExprRef>> = BTreeMap::new();
    let mut by_pronoun: BTreeMap<&EntityId, Vec<ExprRef>> = BTreeMap::new();
    for (r, expr) in utterance.expressions() {
        let Some(id) = bindings.get(&r) else { continue };
        if !entities.is_individual(id) {
            continue;
        }
        if expr.form.is_pronominal() {
            by_pronoun.entry(id).or_default().push(r);
        } else {
            by_name.entry(id).or_default().push(r);
        }
    }

    let mut offenders = Vec::new();
    for (i, yi) in prev.cf.iter().enumerate() {
        if by_pronoun.contains_key(yi) {
            continue;
        }
        let Some(named) = by_name.get(yi) else {
            continue;
        };
        for yj in &prev.cf[i + 1..] {
            if let Some(pron) = by_pronoun.get(yj) {
                offenders.push(format!(
                    "{yi} ({}) not pronominalized while lower-ranked {yj} ({}) is",
                    join_refs(named),
                    join_refs(pron)
                ));
            }
        }
    }
    if offenders.is_empty() {
        RuleCheck {
            rule: Rule::R2,
            status: RuleStatus::Satisfied,
            detail: "no higher-ranked center left unpronominalized".into(),
        }
    } else {
        RuleCheck {
            rule: Rule::R2,
            status: RuleStatus::Violated,
            detail: offenders.join("; "),
        }
    }
}

fn join_refs(refs: &[ExprRef]) -> String {
    refs.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

/// Result of moving the centering state across one utterance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub state: CenteringState,
    pub transition: Transition,
    pub checks: Vec<RuleCheck>,
}

pub fn advance(
    prev: Option<&CenteringState>,
    utterance: &Utterance,
    bindings: &Bindings,
    entities: &EntityTable,
) -> Step {
    let cf = rank_cfs(utterance, bindings, entities);
    let cb = compute_cb(&realized(utterance, bindings, entities), prev);
    let state = CenteringState {
        cb,
        cf,
        source_utterance: utterance.id.clone(),
    };
    let transition = classify_transition(prev, &state);
    let checks = vec![
        check_r1(prev, utterance, bindings, state.cb.as_ref(), entities),
        check_r2(prev, utterance, bindings, entities),
    ];
    Step {
        state,
        transition,
        checks,
    }
}
