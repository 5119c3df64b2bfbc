//! Left-to-right pronoun resolution.
//!
//! A clause is read as a sequence of events in token order: each referring
//! expression at its position, and the close of the agreement window. Every
//! event can add constraints:
//!
//! * an expression's own features (gender on a clitic or strong pronoun);
//! * subject agreement from the verbal forms, once the window closes;
//! * disjointness between a non-reflexive clitic and the subject, and between
//!   two non-reflexive clitics;
//! * coreference between a reflexive clitic and the subject.
//!
//! After each event the current hypothesis is the most preferred assignment
//! that satisfies every constraint seen so far. Preference is lexicographic in
//! arrival order, each expression ranking candidates by Cf rank (a strong
//! subject pronoun demotes the top compatible candidate, the one a null
//! subject would take). When a new constraint knocks out an earlier binding
//! the trace records a `revise`; a subject revise after the agreement window
//! closes is a garden path.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::centering::{rank_cfs, Bindings, CenteringState};
use crate::error::ResolveError;
use crate::model::{
    compatible, Clause, EntityId, EntityTable, ExprRef, Form, MorphFeatures, Role, Utterance,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    /// First choice in the expression's preference order.
    DefaultHighestCf,
    /// Revised, or left with a single admissible candidate by a filter.
    FilterForced,
    /// Taken from the annotation because of `pragmatic_override`.
    GoldOverride,
    /// Annotated as referring to a discourse segment; not resolved.
    SegmentReference,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Binding {
    pub expression: ExprRef,
    pub entity: EntityId,
    pub basis: Basis,
    /// Token position of the event that established the basis.
    pub settled_at: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceKind {
    Bind,
    Filter,
    Revise,
    SkipSegment,
}

impl fmt::Display for TraceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TraceKind::Bind => "bind",
            TraceKind::Filter => "filter",
            TraceKind::Revise => "revise",
            TraceKind::SkipSegment => "skip_segment",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TraceEvent {
    pub clause: usize,
    pub position: usize,
    pub kind: TraceKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expression: Option<usize>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionResult {
    /// Pronominal, overridden and segment-referring expressions, in
    /// expression order. Names and NPs are not resolved.
    pub bindings: Vec<Binding>,
    pub trace: Vec<TraceEvent>,
    pub garden_path: bool,
    /// More than one assignment satisfies all filters.
    pub ambiguous: bool,
    /// Subject of the clause whose garden path is reported.
    pub subject: Option<ExprRef>,
    pub window_end: Option<usize>,
}

impl ResolutionResult {
    pub fn binding(&self, r: ExprRef) -> Option<&Binding> {
        self.bindings.iter().find(|b| b.expression == r)
    }

    pub fn subject_binding(&self) -> Option<&Binding> {
        self.subject.and_then(|s| self.binding(s))
    }

    pub fn entity_map(&self) -> Bindings {
        self.bindings
            .iter()
            .map(|b| (b.expression, b.entity.clone()))
            .collect()
    }

    /// The judged subject was pinned down by a filter no later than the end of
    /// the agreement window.
    pub fn subject_forced_in_window(&self) -> bool {
        match (self.subject_binding(), self.window_end) {
            (Some(b), Some(end)) => b.basis == Basis::FilterForced && b.settled_at <= end,
            _ => false,
        }
    }
}

/// What an expression contributes to resolution.
#[derive(Debug, Clone)]
enum Slot {
    Var(usize),
    /// Referent given by annotation: overridden pronoun or name.
    Fixed {
        entity: EntityId,
        overridden: bool,
    },
    Segment(EntityId),
    Unbound,
}

#[derive(Debug, Clone)]
enum Term {
    Var(usize),
    Fixed(EntityId),
}

#[derive(Debug, Clone)]
enum ConstraintKind {
    Features(usize, MorphFeatures),
    Agreement(usize, MorphFeatures),
    Distinct(Term, Term),
    Same(Term, Term),
}

#[derive(Debug, Clone)]
struct Constraint {
    kind: ConstraintKind,
    /// Index into the event list at which the constraint becomes known.
    active_from: usize,
    detail: String,
}

#[derive(Debug, Clone)]
struct Var {
    expr: usize,
    preference: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Event {
    Expr(usize),
    WindowEnd,
}

/// Resolves clauses and utterances against an entity table.
#[derive(Debug, Clone, Copy)]
pub struct Resolver<'a> {
    entities: &'a EntityTable,
}

impl<'a> Resolver<'a> {
    pub fn new(entities: &'a EntityTable) -> Self {
        Resolver { entities }
    }

    /// Resolves one clause. `clause_index` only labels the output.
    pub fn resolve_clause(
        &self,
        clause_index: usize,
        clause: &Clause,
        state: &CenteringState,
    ) -> Result<ResolutionResult, ResolveError> {
        ClauseRun::new(self.entities, clause_index, clause, state)?.run()
    }

    /// Resolves every clause in order. Later clauses also see the entities
    /// realized by earlier ones, ranked ahead of the previous state's Cf.
    /// Only the main clause's subject can produce a garden path.
    pub fn resolve_utterance(
        &self,
        utterance: &Utterance,
        state: &CenteringState,
    ) -> Result<ResolutionResult, ResolveError> {
        let main = utterance.main_clause_index();
        let mut out = ResolutionResult {
            bindings: Vec::new(),
            trace: Vec::new(),
            garden_path: false,
            ambiguous: false,
            subject: None,
            window_end: None,
        };
        let mut so_far = Bindings::new();
        for (ci, clause) in utterance.clauses.iter().enumerate() {
            let local = if ci == 0 {
                state.clone()
            } else {
                self.augment(state, utterance, &so_far)
            };
            let r = self.resolve_clause(ci, clause, &local)?;
            for (ei, e) in clause.expressions.iter().enumerate() {
                if let Some(g) = e.gold_ref.as_ref().filter(|_| !e.form.is_pronominal()) {
                    so_far.insert(ExprRef::new(ci, ei), g.clone());
                }
            }
            so_far.extend(r.entity_map());
            if Some(ci) == main {
                out.garden_path = r.garden_path;
                out.subject = r.subject;
                out.window_end = r.window_end;
            }
            out.ambiguous |= r.ambiguous;
            out.bindings.extend(r.bindings);
            out.trace.extend(r.trace);
        }
        Ok(out)
    }

    fn augment(
        &self,
        state: &CenteringState,
        utterance: &Utterance,
        so_far: &Bindings,
    ) -> CenteringState {
        let mut cf = rank_cfs(utterance, so_far, self.entities);
        for id in &state.cf {
            if !cf.contains(id) {
                cf.push(id.clone());
            }
        }
        CenteringState {
            cb: state.cb.clone(),
            cf,
            source_utterance: state.source_utterance.clone(),
        }
    }
}

struct ClauseRun<'a> {
    entities: &'a EntityTable,
    clause_index: usize,
    clause: &'a Clause,
    candidates: Vec<EntityId>,
    slots: Vec<Slot>,
    vars: Vec<Var>,
    events: Vec<(usize, Event)>,
    constraints: Vec<Constraint>,
    subject: Option<usize>,
}

impl<'a> ClauseRun<'a> {
    fn new(
        entities: &'a EntityTable,
        clause_index: usize,
        clause: &'a Clause,
        state: &CenteringState,
    ) -> Result<Self, ResolveError> {
        let mut candidates: Vec<EntityId> = Vec::new();
        for id in &state.cf {
            if entities.is_individual(id) && !candidates.contains(id) {
                candidates.push(id.clone());
            }
        }

        let mut slots = Vec::with_capacity(clause.expressions.len());
        let mut vars = Vec::new();
        for (ei, e) in clause.expressions.iter().enumerate() {
            if e.form.is_clitic() && e.clitic_placement.is_none() {
                return Err(ResolveError::MissingPlacement {
                    expression: ExprRef::new(clause_index, ei),
                });
            }
            let gold = e.gold_ref.as_ref().and_then(|g| entities.get(g));
            let slot = match gold {
                Some(g) if !g.is_individual() => Slot::Segment(g.id.clone()),
                Some(g) if e.pragmatic_override => Slot::Fixed {
                    entity: g.id.clone(),
                    overridden: true,
                },
                _ if e.form.is_pronominal() => {
                    vars.push(Var {
                        expr: ei,
                        preference: preference(e.form, e.role, &e.features, &candidates, entities),
                    });
                    Slot::Var(vars.len() - 1)
                }
                Some(g) => Slot::Fixed {
                    entity: g.id.clone(),
                    overridden: false,
                },
                None => Slot::Unbound,
            };
            slots.push(slot);
        }

        let mut events: Vec<(usize, Event)> = clause
            .expressions
            .iter()
            .enumerate()
            .map(|(i, e)| (e.position, Event::Expr(i)))
            .collect();
        events.push((clause.agreement_window.end, Event::WindowEnd));
        // expressions sharing the window's last token are read before it closes
        events.sort();

        let mut run = ClauseRun {
            entities,
            clause_index,
            clause,
            candidates,
            slots,
            vars,
            events,
            constraints: Vec::new(),
            subject: clause.subject_index(),
        };
        run.build_constraints();
        Ok(run)
    }

    fn event_of(&self, expr: usize) -> usize {
        self.events
            .iter()
            .position(|(_, e)| *e == Event::Expr(expr))
            .expect("every expression has an event")
    }

    fn window_event(&self) -> usize {
        self.events
            .iter()
            .position(|(_, e)| *e == Event::WindowEnd)
            .expect("window event present")
    }

    fn term(&self, expr: usize) -> Option<Term> {
        match &self.slots[expr] {
            Slot::Var(v) => Some(Term::Var(*v)),
            Slot::Fixed { entity, .. } => Some(Term::Fixed(entity.clone())),
            Slot::Segment(_) | Slot::Unbound => None,
        }
    }

    fn label(&self, expr: usize) -> ExprRef {
        ExprRef::new(self.clause_index, expr)
    }

    fn build_constraints(&mut self) {
        let mut out = Vec::new();
        for (ei, e) in self.clause.expressions.iter().enumerate() {
            let Slot::Var(v) = self.slots[ei] else {
                continue;
            };
            if !e.features.is_empty() {
                out.push(Constraint {
                    kind: ConstraintKind::Features(v, e.features),
                    active_from: self.event_of(ei),
                    detail: format!("{} {} marked {}", self.label(ei), e.form, e.features),
                });
            }
        }

        if let Some(s) = self.subject {
            if let (Slot::Var(v), false) = (&self.slots[s], self.clause.agreement.is_empty()) {
                out.push(Constraint {
                    kind: ConstraintKind::Agreement(*v, self.clause.agreement),
                    active_from: self.event_of(s).max(self.window_event()),
                    detail: format!(
                        "agreement window closes: subject {} must be {}",
                        self.label(s),
                        self.clause.agreement
                    ),
                });
            }
        }

        let clitics: Vec<usize> = self
            .clause
            .expressions
            .iter()
            .enumerate()
            .filter(|(_, e)| e.form == Form::CliticPronoun)
            .map(|(i, _)| i)
            .collect();
        let both_fixed = |a: &Term, b: &Term| matches!((a, b), (Term::Fixed(_), Term::Fixed(_)));

        if let Some(s) = self.subject {
            for (ei, e) in self.clause.expressions.iter().enumerate() {
                if ei == s || !e.form.is_clitic() {
                    continue;
                }
                let (Some(a), Some(b)) = (self.term(ei), self.term(s)) else {
                    continue;
                };
                if both_fixed(&a, &b) {
                    continue;
                }
                let active_from = self.event_of(ei).max(self.event_of(s));
                if e.form == Form::ReflexiveClitic {
                    out.push(Constraint {
                        kind: ConstraintKind::Same(a, b),
                        active_from,
                        detail: format!(
                            "reflexive {} corefers with subject {}",
                            self.label(ei),
                            self.label(s)
                        ),
                    });
                } else {
                    out.push(Constraint {
                        kind: ConstraintKind::Distinct(a, b),
                        active_from,
                        detail: format!(
                            "non-reflexive {} cannot corefer with subject {}",
                            self.label(ei),
                            self.label(s)
                        ),
                    });
                }
            }
        }

        for (i, &x) in clitics.iter().enumerate() {
            for &y in &clitics[i + 1..] {
                let (Some(a), Some(b)) = (self.term(x), self.term(y)) else {
                    continue;
                };
                if both_fixed(&a, &b) {
                    continue;
                }
                out.push(Constraint {
                    kind: ConstraintKind::Distinct(a, b),
                    active_from: self.event_of(x).max(self.event_of(y)),
                    detail: format!(
                        "clitics {} and {} are disjoint",
                        self.label(x),
                        self.label(y)
                    ),
                });
            }
        }
        self.constraints = out;
    }

    fn value(&self, assignment: &[Option<usize>], t: &Term) -> Option<EntityId> {
        match t {
            Term::Var(v) => assignment[*v].map(|c| self.candidates[c].clone()),
            Term::Fixed(id) => Some(id.clone()),
        }
    }

    /// False only when every participant is assigned and the constraint fails.
    fn holds(&self, c: &Constraint, assignment: &[Option<usize>]) -> bool {
        let fits = |v: usize, f: &MorphFeatures| match assignment[v] {
            Some(x) => self
                .entities
                .get(&self.candidates[x])
                .is_some_and(|e| compatible(f, e).unwrap_or(false)),
            None => true,
        };
        match &c.kind {
            ConstraintKind::Features(v, f) | ConstraintKind::Agreement(v, f) => fits(*v, f),
            ConstraintKind::Distinct(a, b) => {
                match (self.value(assignment, a), self.value(assignment, b)) {
                    (Some(x), Some(y)) => x != y,
                    _ => true,
                }
            }
            ConstraintKind::Same(a, b) => {
                match (self.value(assignment, a), self.value(assignment, b)) {
                    (Some(x), Some(y)) => x == y,
                    _ => true,
                }
            }
        }
    }

    /// Lexicographically first assignment of `order` under `active`, with
    /// optional pins `(var, candidate)`.
    fn solve(
        &self,
        order: &[usize],
        active: &[&Constraint],
        pin: Option<(usize, usize)>,
    ) -> Option<Vec<Option<usize>>> {
        let mut assignment = vec![None; self.vars.len()];
        if self.search(order, 0, active, pin, &mut assignment) {
            Some(assignment)
        } else {
            None
        }
    }

    fn search(
        &self,
        order: &[usize],
        depth: usize,
        active: &[&Constraint],
        pin: Option<(usize, usize)>,
        assignment: &mut Vec<Option<usize>>,
    ) -> bool {
        let Some(&v) = order.get(depth) else {
            return true;
        };
        for &c in &self.vars[v].preference {
            if matches!(pin, Some((pv, pc)) if pv == v && pc != c) {
                continue;
            }
            assignment[v] = Some(c);
            if active.iter().all(|k| self.holds(k, assignment))
                && self.search(order, depth + 1, active, pin, assignment)
            {
                return true;
            }
        }
        assignment[v] = None;
        false
    }

    /// Number of admissible values of `v` (stops counting at two).
    fn admissible(&self, order: &[usize], active: &[&Constraint], v: usize) -> usize {
        let mut n = 0;
        for &c in &self.vars[v].preference {
            if self.solve(order, active, Some((v, c))).is_some() {
                n += 1;
                if n > 1 {
                    break;
                }
            }
        }
        n
    }

    fn run(self) -> Result<ResolutionResult, ResolveError> {
        let mut trace = Vec::new();
        let mut order: Vec<usize> = Vec::new();
        let mut current: Vec<Option<usize>> = vec![None; self.vars.len()];
        let mut basis: Vec<(Basis, usize)> = vec![(Basis::DefaultHighestCf, 0); self.vars.len()];
        let mut fixed_bindings: BTreeMap<usize, Binding> = BTreeMap::new();
        let mut garden_path = false;
        let window_end = self.clause.agreement_window.end;
        let subject_var = self.subject.and_then(|s| match self.slots[s] {
            Slot::Var(v) => Some(v),
            _ => None,
        });

        let push = |trace: &mut Vec<TraceEvent>, position, kind, expression, detail| {
            trace.push(TraceEvent {
                clause: self.clause_index,
                position,
                kind,
                expression,
                detail,
            })
        };

        for (ev, &(position, event)) in self.events.iter().enumerate() {
            let fresh: Vec<&Constraint> = self
                .constraints
                .iter()
                .filter(|c| c.active_from == ev)
                .collect();
            for c in &fresh {
                push(
                    &mut trace,
                    position,
                    TraceKind::Filter,
                    None,
                    c.detail.clone(),
                );
            }

            let mut new_var = None;
            if let Event::Expr(ei) = event {
                let e = &self.clause.expressions[ei];
                match &self.slots[ei] {
                    Slot::Var(v) => {
                        order.push(*v);
                        new_var = Some(*v);
                    }
                    Slot::Fixed {
                        entity,
                        overridden: true,
                    } => {
                        push(
                            &mut trace,
                            position,
                            TraceKind::Bind,
                            Some(ei),
                            format!(
                                "{} {} -> {entity} (pragmatic override)",
                                self.label(ei),
                                e.form
                            ),
                        );
                        fixed_bindings.insert(
                            ei,
                            Binding {
                                expression: self.label(ei),
                                entity: entity.clone(),
                                basis: Basis::GoldOverride,
                                settled_at: position,
                            },
                        );
                    }
                    Slot::Segment(seg) => {
                        push(
                            &mut trace,
                            position,
                            TraceKind::SkipSegment,
                            Some(ei),
                            format!(
                                "{} {} refers to segment {seg}; not resolved",
                                self.label(ei),
                                e.form
                            ),
                        );
                        fixed_bindings.insert(
                            ei,
                            Binding {
                                expression: self.label(ei),
                                entity: seg.clone(),
                                basis: Basis::SegmentReference,
                                settled_at: position,
                            },
                        );
                    }
                    Slot::Fixed { .. } | Slot::Unbound => {}
                }
            }

            if fresh.is_empty() && new_var.is_none() {
                continue;
            }

            let active: Vec<&Constraint> = self
                .constraints
                .iter()
                .filter(|c| c.active_from <= ev)
                .collect();
            let Some(next) = self.solve(&order, &active, None) else {
                let culprit = match event {
                    Event::Expr(ei) => ei,
                    Event::WindowEnd => self.subject.unwrap_or(0),
                };
                let detail = if self.candidates.is_empty() {
                    "any constraint: no forward-looking centers available".to_string()
                } else {
                    let mut what: Vec<String> = active.iter().map(|c| c.detail.clone()).collect();
                    if what.is_empty() {
                        what.push("its preference list".into());
                    }
                    what.join("; ")
                };
                return Err(ResolveError::Unresolvable {
                    expression: self.label(culprit),
                    detail,
                });
            };

            for &v in &order {
                if Some(v) == new_var {
                    continue;
                }
                if next[v] != current[v] {
                    let ei = self.vars[v].expr;
                    let from = current[v].map(|c| self.candidates[c].to_string());
                    let to = &self.candidates[next[v].expect("solved")];
                    push(
                        &mut trace,
                        position,
                        TraceKind::Revise,
                        Some(ei),
                        format!(
                            "{} {} {} -> {to}",
                            self.label(ei),
                            self.clause.expressions[ei].form,
                            from.unwrap_or_default()
                        ),
                    );
                    basis[v] = (Basis::FilterForced, position);
                    if Some(v) == subject_var && position > window_end {
                        garden_path = true;
                    }
                }
            }
            if let Some(v) = new_var {
                let ei = self.vars[v].expr;
                let c = next[v].expect("solved");
                let how = if c == self.vars[v].preference[0] {
                    "first preference"
                } else {
                    "best remaining candidate"
                };
                push(
                    &mut trace,
                    position,
                    TraceKind::Bind,
                    Some(ei),
                    format!(
                        "{} {} -> {} ({how})",
                        self.label(ei),
                        self.clause.expressions[ei].form,
                        self.candidates[c]
                    ),
                );
                basis[v] = (Basis::DefaultHighestCf, position);
            }
            current = next;

            for &v in &order {
                if basis[v].0 != Basis::FilterForced
                    && self.vars[v].preference.len() > 1
                    && self.admissible(&order, &active, v) == 1
                {
                    basis[v] = (Basis::FilterForced, position);
                }
            }
        }

        let all: Vec<&Constraint> = self.constraints.iter().collect();
        let ambiguous = order.iter().any(|&v| self.admissible(&order, &all, v) > 1);

        let mut bindings: Vec<Binding> = fixed_bindings.into_values().collect();
        for (v, var) in self.vars.iter().enumerate() {
            let c = current[v].expect("every variable is bound by the end");
            bindings.push(Binding {
                expression: self.label(var.expr),
                entity: self.candidates[c].clone(),
                basis: basis[v].0,
                settled_at: basis[v].1,
            });
        }
        bindings.sort_by_key(|b| b.expression);

        Ok(ResolutionResult {
            bindings,
            trace,
            garden_path,
            ambiguous,
            subject: self.subject.map(|s| self.label(s)),
            window_end: Some(window_end),
        })
    }
}

/// Candidate order for one expression. A strong subject pronoun skips the
/// candidate a null subject would take unless nothing else fits its features.
fn preference(
    form: Form,
    role: Role,
    features: &MorphFeatures,
    candidates: &[EntityId],
    entities: &EntityTable,
) -> Vec<usize> {
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    if form == Form::StrongPronoun && role == Role::Subject {
        let fits: Vec<usize> = order
            .iter()
            .copied()
            .filter(|&i| {
                entities
                    .get(&candidates[i])
                    .is_some_and(|e| compatible(features, e).unwrap_or(false))
            })
            .collect();
        if fits.len() > 1 {
            order.retain(|&i| i != fits[0]);
            order.push(fits[0]);
        }
    }
    order
}
