//! Cf ranking, Cb and transitions for a hand-built two-utterance discourse.
//!
//! cargo run --example centers

use centering::centering::{advance, Bindings, Step};
use centering::model::{
    AgreementWindow, Clause, ClauseType, Entity, EntityTable, ExprRef, Form, Gender,
    ReferringExpression, Role, Utterance,
};

fn main() {
    let entities = EntityTable::new([
        Entity::individual("maria", Gender::Feminine),
        Entity::individual("giovanni", Gender::Masculine),
    ]);

    // "Maria voleva andare al mare. Telefono' a Giovanni."
    let u1 = utterance(
        "u1",
        vec![ReferringExpression::new(Form::ProperName, Role::Subject, 0).with_gold("maria")],
    );
    let u2 = utterance(
        "u2",
        vec![
            ReferringExpression::null_subject(0),
            ReferringExpression::new(Form::ProperName, Role::IndirectObject, 3)
                .with_gold("giovanni"),
        ],
    );

    let b1: Bindings = [(ExprRef::new(0, 0), "maria".into())].into();
    let s1 = advance(None, &u1, &b1, &entities);
    show("u1", &s1);

    // the null subject is taken to be Maria here; see `resolve` for how the
    // resolver arrives at that
    let b2: Bindings = [
        (ExprRef::new(0, 0), "maria".into()),
        (ExprRef::new(0, 1), "giovanni".into()),
    ]
    .into();
    let s2 = advance(Some(&s1.state), &u2, &b2, &entities);
    show("u2", &s2);
    for c in &s2.checks {
        println!("    {} {:?}: {}", c.rule, c.status, c.detail);
    }
}

fn show(id: &str, step: &Step) {
    let cf: Vec<&str> = step.state.cf.iter().map(|e| e.as_str()).collect();
    let cb = step.state.cb.as_ref().map_or("-", |e| e.as_str());
    println!("{id}: Cb={cb} Cf=[{}] {}", cf.join(", "), step.transition);
}

fn utterance(id: &str, expressions: Vec<ReferringExpression>) -> Utterance {
    Utterance {
        id: id.into(),
        text: None,
        clauses: vec![Clause {
            clause_type: ClauseType::Main,
            agreement_window: AgreementWindow { start: 1, end: 1 },
            agreement: Default::default(),
            expressions,
        }],
    }
}
