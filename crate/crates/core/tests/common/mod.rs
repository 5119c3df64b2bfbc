//! Shared test support: a random discourse generator and brute-force
//! reference implementations that share no code with the library beyond the
//! data model.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use centering::analysis::UtteranceRecord;
use centering::centering::CenteringState;
use centering::model::{
    AgreementWindow, Clause, ClauseType, CliticPlacement, Discourse, Entity, EntityId, EntityKind,
    ExprRef, Form, Gender, Language, MorphFeatures, Number, Person, ReferringExpression, Role,
    Utterance,
};
use centering::Transition;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

// ---------------------------------------------------------------------------
// generator

pub fn random_entities(rng: &mut StdRng) -> Vec<Entity> {
    let n = rng.gen_range(1..=4);
    (0..n)
        .map(|i| Entity {
            id: EntityId::new(format!("e{i}")),
            gender: if rng.gen_bool(0.5) {
                Gender::Masculine
            } else {
                Gender::Feminine
            },
            number: if rng.gen_bool(0.8) {
                Number::Singular
            } else {
                Number::Plural
            },
            animacy: centering::model::Animacy::Animate,
            kind: EntityKind::Individual,
        })
        .collect()
}

fn random_features(rng: &mut StdRng) -> MorphFeatures {
    MorphFeatures {
        gender: match rng.gen_range(0..3) {
            0 => Some(Gender::Masculine),
            1 => Some(Gender::Feminine),
            _ => None,
        },
        number: match rng.gen_range(0..4) {
            0 => Some(Number::Plural),
            1 | 2 => Some(Number::Singular),
            _ => None,
        },
        person: rng.gen_bool(0.3).then_some(Person::Third),
    }
}

fn pick_id(rng: &mut StdRng, entities: &[Entity]) -> EntityId {
    entities.choose(rng).expect("non-empty").id.clone()
}

/// Features of some entity, partially specified; occasionally arbitrary.
fn plausible_features(rng: &mut StdRng, entities: &[Entity]) -> MorphFeatures {
    if rng.gen_bool(0.2) {
        return random_features(rng);
    }
    let e = entities.choose(rng).expect("non-empty");
    MorphFeatures {
        gender: rng.gen_bool(0.5).then_some(e.gender),
        number: rng.gen_bool(0.7).then_some(e.number),
        person: rng.gen_bool(0.3).then_some(Person::Third),
    }
}

/// `opening` clauses have nothing to resolve against, so their pronouns
/// always carry an overriding annotation.
fn random_clause(
    rng: &mut StdRng,
    entities: &[Entity],
    clause_type: ClauseType,
    opening: bool,
) -> Clause {
    let n = rng.gen_range(1..=4);
    let mut positions: Vec<usize> = (0..9).collect();
    positions.shuffle(rng);
    let mut positions: Vec<usize> = positions[..n].to_vec();
    positions.sort();

    let subject_slot = rng.gen_bool(0.85).then(|| rng.gen_range(0..n));
    let mut expressions = Vec::with_capacity(n);
    for (i, &position) in positions.iter().enumerate() {
        let mut e = if Some(i) == subject_slot {
            let form = *[
                Form::NullSubject,
                Form::NullSubject,
                Form::StrongPronoun,
                Form::ProperName,
            ]
            .choose(rng)
            .unwrap();
            let mut e = ReferringExpression::new(form, Role::Subject, position);
            if form == Form::StrongPronoun {
                e.features = MorphFeatures {
                    gender: rng.gen_bool(0.8).then(|| {
                        if rng.gen_bool(0.5) {
                            Gender::Masculine
                        } else {
                            Gender::Feminine
                        }
                    }),
                    number: Some(Number::Singular),
                    person: Some(Person::Third),
                };
            }
            if form == Form::ProperName {
                e.gold_ref = Some(pick_id(rng, entities));
            }
            e
        } else {
            let role = *[
                Role::DirectObject,
                Role::IndirectObject,
                Role::Oblique,
                Role::Possessor,
                Role::Other,
            ]
            .choose(rng)
            .unwrap();
            let form = *[
                Form::CliticPronoun,
                Form::CliticPronoun,
                Form::ReflexiveClitic,
                Form::ProperName,
                Form::DefiniteNp,
            ]
            .choose(rng)
            .unwrap();
            let mut e = ReferringExpression::new(form, role, position);
            if form.is_clitic() {
                e.clitic_placement = Some(if rng.gen_bool(0.5) {
                    CliticPlacement::Preverbal
                } else {
                    CliticPlacement::Enclitic
                });
                if form == Form::CliticPronoun && rng.gen_bool(0.7) {
                    e.features =
                        MorphFeatures::gender(entities.choose(rng).expect("non-empty").gender);
                }
            } else {
                e.gold_ref = Some(pick_id(rng, entities));
            }
            e
        };
        if e.form.is_pronominal() && (opening || rng.gen_bool(0.3)) {
            e.gold_ref = Some(pick_id(rng, entities));
            e.pragmatic_override = opening || rng.gen_bool(0.3);
        }
        expressions.push(e);
    }
    let start = rng.gen_range(0..8);
    let end = rng.gen_range(start..9);
    Clause {
        clause_type,
        agreement_window: AgreementWindow { start, end },
        agreement: if rng.gen_bool(0.6) {
            plausible_features(rng, entities)
        } else {
            MorphFeatures::default()
        },
        expressions,
    }
}

/// A valid Italian discourse: up to 3 utterances, 4 entities, 4 expressions
/// per clause.
pub fn random_discourse(rng: &mut StdRng) -> Discourse {
    let entities = random_entities(rng);
    let n = rng.gen_range(1..=3);
    let utterances = (0..n)
        .map(|i| {
            let extra = rng.gen_range(0..=1);
            let main_at = rng.gen_range(0..=extra);
            let clauses = (0..=extra)
                .map(|ci| {
                    let t = if ci == main_at {
                        ClauseType::Main
                    } else {
                        ClauseType::Subordinate
                    };
                    random_clause(rng, &entities, t, i == 0 && ci == 0)
                })
                .collect();
            Utterance {
                id: format!("u{}", i + 1).as_str().into(),
                text: None,
                clauses,
            }
        })
        .collect();
    Discourse {
        language: Language::Italian,
        entities,
        utterances,
    }
}

// ---------------------------------------------------------------------------
// brute-force resolver

/// What the enumerator concluded about one clause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleClause {
    Unresolvable,
    Resolved {
        /// Final value of every resolvable pronoun.
        bindings: BTreeMap<usize, EntityId>,
        /// Subject value changed at a step past the window end.
        garden_path: bool,
        /// More than one complete assignment satisfies every constraint.
        ambiguous: bool,
    },
}

fn fits(features: &MorphFeatures, e: &Entity) -> bool {
    e.kind == EntityKind::Individual
        && features.gender.is_none_or(|g| g == e.gender)
        && features.number.is_none_or(|n| n == e.number)
        && features.person.is_none_or(|p| p == Person::Third)
}

/// A pairwise or unary requirement and the step at which it is known.
enum Req {
    Fits(usize, MorphFeatures),
    Distinct(Operand, Operand),
    Same(Operand, Operand),
}

#[derive(Clone)]
enum Operand {
    Var(usize),
    Known(EntityId),
}

/// Exhaustive reading of one clause against candidate list `cands`.
///
/// At every reading step (each token carrying an expression, then the window
/// close, ties read expression first) the hypothesis is the best complete
/// assignment of the pronouns read so far, ordering assignments by the
/// preference rank of each pronoun's value in reading order.
pub fn oracle_clause(clause: &Clause, cands: &[EntityId], entities: &[Entity]) -> OracleClause {
    let ent = |id: &EntityId| entities.iter().find(|e| &e.id == id);
    let cands: Vec<EntityId> = {
        let mut v: Vec<EntityId> = Vec::new();
        for c in cands {
            if ent(c).is_some_and(|e| e.kind == EntityKind::Individual) && !v.contains(c) {
                v.push(c.clone());
            }
        }
        v
    };

    // steps: (position, 0 for expression / 1 for window, expression index)
    let mut steps: Vec<(usize, u8, usize)> = clause
        .expressions
        .iter()
        .enumerate()
        .map(|(i, e)| (e.position, 0, i))
        .collect();
    steps.push((clause.agreement_window.end, 1, usize::MAX));
    steps.sort();
    let step_of = |i: usize| {
        steps
            .iter()
            .position(|s| s.0 == clause.expressions[i].position && s.1 == 0)
            .unwrap()
    };
    let window_step = steps.iter().position(|s| s.1 == 1).unwrap();

    // which expressions are unknowns
    let mut var_of: BTreeMap<usize, usize> = BTreeMap::new();
    let mut known: BTreeMap<usize, EntityId> = BTreeMap::new();
    let mut prefs: Vec<Vec<usize>> = Vec::new();
    for (i, e) in clause.expressions.iter().enumerate() {
        let gold = e.gold_ref.as_ref().and_then(&ent);
        match gold {
            Some(g) if g.kind != EntityKind::Individual => continue,
            Some(g) if e.pragmatic_override => {
                known.insert(i, g.id.clone());
                continue;
            }
            _ => {}
        }
        if e.form.is_pronominal() {
            let mut order: Vec<usize> = (0..cands.len()).collect();
            if e.form == Form::StrongPronoun && e.role == Role::Subject {
                let ok: Vec<usize> = order
                    .iter()
                    .copied()
                    .filter(|&c| fits(&e.features, ent(&cands[c]).unwrap()))
                    .collect();
                if ok.len() >= 2 {
                    order.remove(order.iter().position(|&c| c == ok[0]).unwrap());
                    order.push(ok[0]);
                }
            }
            var_of.insert(i, prefs.len());
            prefs.push(order);
        } else if let Some(g) = gold {
            known.insert(i, g.id.clone());
        }
    }
    let nvars = prefs.len();
    let operand = |i: usize| -> Option<Operand> {
        var_of
            .get(&i)
            .map(|&v| Operand::Var(v))
            .or_else(|| known.get(&i).map(|k| Operand::Known(k.clone())))
    };
    // two annotated referents are taken as given, never checked
    let pair = |a: usize, b: usize| match (operand(a), operand(b)) {
        (Some(Operand::Known(_)), Some(Operand::Known(_))) => None,
        (Some(x), Some(y)) => Some((x, y)),
        _ => None,
    };

    let mut reqs: Vec<(usize, Req)> = Vec::new();
    for (i, e) in clause.expressions.iter().enumerate() {
        if let Some(&v) = var_of.get(&i) {
            reqs.push((step_of(i), Req::Fits(v, e.features)));
        }
    }
    let subj = clause
        .expressions
        .iter()
        .position(|e| e.role == Role::Subject);
    if let Some(s) = subj {
        if let Some(&v) = var_of.get(&s) {
            reqs.push((step_of(s).max(window_step), Req::Fits(v, clause.agreement)));
        }
        for (i, e) in clause.expressions.iter().enumerate() {
            if i == s || !e.form.is_clitic() {
                continue;
            }
            if let Some((a, b)) = pair(i, s) {
                let at = step_of(i).max(step_of(s));
                if e.form == Form::ReflexiveClitic {
                    reqs.push((at, Req::Same(a, b)));
                } else {
                    reqs.push((at, Req::Distinct(a, b)));
                }
            }
        }
    }
    let clitics: Vec<usize> = (0..clause.expressions.len())
        .filter(|&i| clause.expressions[i].form == Form::CliticPronoun)
        .collect();
    for (k, &x) in clitics.iter().enumerate() {
        for &y in &clitics[k + 1..] {
            if let Some((a, b)) = pair(x, y) {
                reqs.push((step_of(x).max(step_of(y)), Req::Distinct(a, b)));
            }
        }
    }

    let value = |asg: &[usize], o: &Operand| -> EntityId {
        match o {
            Operand::Var(v) => cands[asg[*v]].clone(),
            Operand::Known(k) => k.clone(),
        }
    };
    let satisfied = |asg: &[usize], r: &Req| match r {
        Req::Fits(v, f) => fits(f, ent(&cands[asg[*v]]).unwrap()),
        Req::Distinct(a, b) => value(asg, a) != value(asg, b),
        Req::Same(a, b) => value(asg, a) == value(asg, b),
    };

    // every complete assignment, as candidate indices per var
    let mut all: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..nvars {
        all = all
            .into_iter()
            .flat_map(|a| {
                (0..cands.len()).map(move |c| {
                    let mut b = a.clone();
                    b.push(c);
                    b
                })
            })
            .collect();
    }
    if nvars > 0 && cands.is_empty() {
        return OracleClause::Unresolvable;
    }

    let var_expr: BTreeMap<usize, usize> = var_of.iter().map(|(&i, &v)| (v, i)).collect();
    let mut read_order: Vec<usize> = (0..nvars).collect();
    read_order.sort_by_key(|&v| step_of(var_expr[&v]));

    let mut garden_path = false;
    let mut prev_subject: Option<usize> = None;
    let subj_var = subj.and_then(|s| var_of.get(&s).copied());
    let mut last_best: Option<Vec<usize>> = None;
    for (step, &(step_position, _, _)) in steps.iter().enumerate() {
        let seen: Vec<usize> = read_order
            .iter()
            .copied()
            .filter(|&v| step_of(var_expr[&v]) <= step)
            .collect();
        // project consistent assignments onto the seen vars; unseen vars are
        // free, and constraints known by now only mention seen vars
        let mut best: Option<(Vec<usize>, Vec<usize>)> = None;
        for a in &all {
            if !reqs
                .iter()
                .filter(|(at, _)| *at <= step)
                .all(|(_, r)| satisfied(a, r))
            {
                continue;
            }
            let key: Vec<usize> = seen
                .iter()
                .map(|&v| prefs[v].iter().position(|&c| c == a[v]).unwrap())
                .collect();
            if best.as_ref().is_none_or(|(k, _)| key < *k) {
                best = Some((key, a.clone()));
            }
        }
        let Some((_, a)) = best else {
            return OracleClause::Unresolvable;
        };
        if let Some(sv) = subj_var {
            if seen.contains(&sv) {
                let now = a[sv];
                if prev_subject.is_some_and(|p| p != now)
                    && step_position > clause.agreement_window.end
                {
                    garden_path = true;
                }
                prev_subject = Some(now);
            }
        }
        last_best = Some(a);
    }

    let consistent = all
        .iter()
        .filter(|a| reqs.iter().all(|(_, r)| satisfied(a, r)))
        .count();
    let final_asg = last_best.unwrap_or_default();
    let bindings = var_of
        .iter()
        .map(|(&i, &v)| (i, cands[final_asg[v]].clone()))
        .collect();
    OracleClause::Resolved {
        bindings,
        garden_path,
        ambiguous: consistent > 1,
    }
}

/// Names and overridden pronouns carry their referent into later clauses.
fn annotated_into(so_far: &mut BTreeMap<ExprRef, EntityId>, ci: usize, clause: &Clause) {
    for (i, e) in clause.expressions.iter().enumerate() {
        if let Some(g) = &e.gold_ref {
            if !e.form.is_pronominal() || e.pragmatic_override {
                so_far.insert(ExprRef::new(ci, i), g.clone());
            }
        }
    }
}

fn utterance_unresolvable(d: &Discourse, u: &Utterance, before: &CenteringState) -> bool {
    let mut so_far: BTreeMap<ExprRef, EntityId> = BTreeMap::new();
    for (ci, clause) in u.clauses.iter().enumerate() {
        let mut cands = if ci == 0 {
            vec![]
        } else {
            oracle_cf(u, &so_far, &d.entities)
        };
        for c in &before.cf {
            if !cands.contains(c) {
                cands.push(c.clone());
            }
        }
        match oracle_clause(clause, &cands, &d.entities) {
            OracleClause::Unresolvable => return true,
            OracleClause::Resolved { bindings, .. } => {
                annotated_into(&mut so_far, ci, clause);
                for (i, id) in bindings {
                    so_far.insert(ExprRef::new(ci, i), id);
                }
            }
        }
    }
    false
}

// ---------------------------------------------------------------------------
// centering by the book

const HIERARCHY: [Role; 6] = [
    Role::Subject,
    Role::DirectObject,
    Role::IndirectObject,
    Role::Oblique,
    Role::Possessor,
    Role::Other,
];

fn is_individual(entities: &[Entity], id: &EntityId) -> bool {
    entities
        .iter()
        .any(|e| &e.id == id && e.kind == EntityKind::Individual)
}

/// Cf list by pairwise comparison of best mentions.
pub fn oracle_cf(
    u: &Utterance,
    bindings: &BTreeMap<ExprRef, EntityId>,
    entities: &[Entity],
) -> Vec<EntityId> {
    let mut mentions: Vec<(EntityId, (usize, usize, usize))> = Vec::new();
    for (ci, c) in u.clauses.iter().enumerate() {
        for (ei, e) in c.expressions.iter().enumerate() {
            let Some(id) = bindings.get(&ExprRef::new(ci, ei)) else {
                continue;
            };
            if !is_individual(entities, id) {
                continue;
            }
            let rank = HIERARCHY.iter().position(|r| *r == e.role).unwrap();
            mentions.push((id.clone(), (rank, ci, e.position)));
        }
    }
    let mut ids: Vec<EntityId> = mentions
        .iter()
        .map(|m| m.0.clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let best = |id: &EntityId| {
        mentions
            .iter()
            .filter(|m| &m.0 == id)
            .map(|m| m.1)
            .min()
            .unwrap()
    };
    // selection sort: repeatedly take the entity no other entity beats
    let mut out = Vec::new();
    while !ids.is_empty() {
        let i = (0..ids.len())
            .find(|&i| ids.iter().all(|o| (best(&ids[i]), &ids[i]) <= (best(o), o)))
            .unwrap();
        out.push(ids.remove(i));
    }
    out
}

pub fn oracle_cb(realized: &BTreeSet<EntityId>, prev: Option<&CenteringState>) -> Option<EntityId> {
    let prev = prev?;
    let mut order: Vec<&EntityId> = Vec::new();
    order.extend(prev.cb.iter());
    order.extend(prev.cf.iter());
    order.into_iter().find(|id| realized.contains(*id)).cloned()
}

/// Transition as a truth table over the three tests; exactly one row matches.
pub fn oracle_transition(prev: Option<&CenteringState>, cur: &CenteringState) -> Transition {
    let Some(prev) = prev else {
        return Transition::Initial;
    };
    let reference = prev.cb.clone().or_else(|| prev.cf.first().cloned());
    let has_cb = cur.cb.is_some();
    let same = has_cb && cur.cb == reference;
    let top = has_cb && cur.cb.as_ref() == cur.cf.first();
    let rows = [
        (has_cb && same && top, Transition::Continuation),
        (has_cb && same && !top, Transition::Retention),
        (!has_cb || !same, Transition::Shifting),
    ];
    let hits: Vec<Transition> = rows.iter().filter(|r| r.0).map(|r| r.1).collect();
    assert_eq!(hits.len(), 1, "transition table rows overlap");
    hits[0]
}

/// R2 by direct quantification over pairs of previous Cfs.
pub fn oracle_r2_violated(
    prev: Option<&CenteringState>,
    u: &Utterance,
    bindings: &BTreeMap<ExprRef, EntityId>,
    entities: &[Entity],
) -> bool {
    let Some(prev) = prev else { return false };
    let forms_of = |id: &EntityId| -> Vec<Form> {
        u.expressions()
            .filter(|(r, _)| bindings.get(r) == Some(id) && is_individual(entities, id))
            .map(|(_, e)| e.form)
            .collect()
    };
    for i in 0..prev.cf.len() {
        for j in i + 1..prev.cf.len() {
            let hi = forms_of(&prev.cf[i]);
            let lo = forms_of(&prev.cf[j]);
            let hi_only_full = !hi.is_empty() && hi.iter().all(|f| !f.is_pronominal());
            if hi_only_full && lo.iter().any(|f| f.is_pronominal()) {
                return true;
            }
        }
    }
    false
}

/// R1 by counting the relevant pronouns directly.
pub fn oracle_r1_violated(
    prev: Option<&CenteringState>,
    u: &Utterance,
    bindings: &BTreeMap<ExprRef, EntityId>,
    cb: Option<&EntityId>,
    entities: &[Entity],
) -> bool {
    if prev.is_none() {
        return false;
    }
    let pronouns: Vec<ExprRef> = u
        .expressions()
        .filter(|(_, e)| e.form.is_pronominal() && e.form != Form::ReflexiveClitic)
        .filter(|(r, _)| bindings.get(r).is_none_or(|id| is_individual(entities, id)))
        .map(|(r, _)| r)
        .collect();
    pronouns.len() == 1
        && (bindings.get(&pronouns[0]).is_none() || bindings.get(&pronouns[0]) != cb)
}

/// Runs the enumerator over a whole discourse in lock step with the
/// library's records and returns every disagreement found. `records` may be
/// a prefix when the library gave up on the next utterance; the enumerator
/// must then find that utterance unresolvable too.
pub fn disagreements(d: &Discourse, records: &[UtteranceRecord]) -> Vec<String> {
    let mut out = Vec::new();
    let mut prev: Option<CenteringState> = None;
    for (k, u) in d.utterances.iter().enumerate() {
        let Some(rec) = records.get(k) else {
            let before = prev.clone().unwrap_or_else(CenteringState::empty);
            if !utterance_unresolvable(d, u, &before) {
                out.push(format!(
                    "{}: library failed but the enumerator resolves it",
                    u.id
                ));
            }
            return out;
        };
        let before = prev.clone().unwrap_or_else(CenteringState::empty);
        let main = u
            .clauses
            .iter()
            .position(|c| c.clause_type == ClauseType::Main);
        let mut so_far: BTreeMap<ExprRef, EntityId> = BTreeMap::new();
        let mut gp = false;
        let mut amb = false;
        for (ci, clause) in u.clauses.iter().enumerate() {
            let mut cands = if ci == 0 {
                vec![]
            } else {
                oracle_cf(u, &so_far, &d.entities)
            };
            for c in &before.cf {
                if !cands.contains(c) {
                    cands.push(c.clone());
                }
            }
            match oracle_clause(clause, &cands, &d.entities) {
                OracleClause::Unresolvable => {
                    out.push(format!(
                        "{}: oracle finds clause {ci} unresolvable but library resolved it",
                        u.id
                    ));
                    return out;
                }
                OracleClause::Resolved {
                    bindings,
                    garden_path,
                    ambiguous,
                } => {
                    annotated_into(&mut so_far, ci, clause);
                    for (i, id) in &bindings {
                        let r = ExprRef::new(ci, *i);
                        so_far.insert(r, id.clone());
                        let lib = rec
                            .bindings
                            .iter()
                            .find(|b| b.expression == r)
                            .map(|b| &b.entity);
                        if lib != Some(id) {
                            out.push(format!("{} {r}: oracle {id}, library {lib:?}", u.id));
                        }
                    }
                    if Some(ci) == main {
                        gp = garden_path;
                    }
                    amb |= ambiguous;
                }
            }
        }
        if gp != rec.garden_path {
            out.push(format!(
                "{}: garden_path oracle {gp}, library {}",
                u.id, rec.garden_path
            ));
        }
        if amb != rec.ambiguous {
            out.push(format!(
                "{}: ambiguous oracle {amb}, library {}",
                u.id, rec.ambiguous
            ));
        }

        // centering over effective bindings
        let mut eff: BTreeMap<ExprRef, EntityId> = rec
            .bindings
            .iter()
            .map(|b| (b.expression, b.entity.clone()))
            .collect();
        for (r, e) in u.expressions() {
            if let Some(g) = &e.gold_ref {
                eff.insert(r, g.clone());
            }
        }
        let cf = oracle_cf(u, &eff, &d.entities);
        let realized: BTreeSet<EntityId> = cf.iter().cloned().collect();
        let cb = oracle_cb(&realized, prev.as_ref());
        let cur = CenteringState {
            cb: cb.clone(),
            cf: cf.clone(),
            source_utterance: u.id.clone(),
        };
        let t = oracle_transition(prev.as_ref(), &cur);
        if cf != rec.cf {
            out.push(format!("{}: cf oracle {cf:?}, library {:?}", u.id, rec.cf));
        }
        if cb != rec.cb {
            out.push(format!("{}: cb oracle {cb:?}, library {:?}", u.id, rec.cb));
        }
        if t != rec.transition {
            out.push(format!(
                "{}: transition oracle {t}, library {}",
                u.id, rec.transition
            ));
        }
        let r1 = oracle_r1_violated(prev.as_ref(), u, &eff, cb.as_ref(), &d.entities);
        let r2 = oracle_r2_violated(prev.as_ref(), u, &eff, &d.entities);
        let lib = rec.violations();
        if r1 != lib.contains(&centering::centering::Rule::R1) {
            out.push(format!("{}: r1 oracle {r1}, library {lib:?}", u.id));
        }
        if r2 != lib.contains(&centering::centering::Rule::R2) {
            out.push(format!("{}: r2 oracle {r2}, library {lib:?}", u.id));
        }
        prev = Some(cur);
    }
    out
}

/// The library's records, cut short before the first utterance it cannot
/// resolve.
pub fn library_records(d: &Discourse) -> Vec<UtteranceRecord> {
    if let Ok(r) = centering::analysis::analyze_discourse(d) {
        return r;
    }
    for k in (0..d.utterances.len()).rev() {
        let prefix = Discourse {
            language: d.language,
            entities: d.entities.clone(),
            utterances: d.utterances[..k].to_vec(),
        };
        if let Ok(r) = centering::analysis::analyze_discourse(&prefix) {
            return r;
        }
    }
    Vec::new()
}
