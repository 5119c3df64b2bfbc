//! Incremental resolution and garden-path detection: the same null subject
//! is revised early by a preverbal clitic and too late by an enclitic.
//!
//! cargo run --example resolve

use centering::centering::CenteringState;
use centering::model::{
    AgreementWindow, Clause, ClauseType, CliticPlacement, Entity, EntityTable, Gender,
    MorphFeatures, ReferringExpression, Role,
};
use centering::Resolver;

fn main() {
    let entities = EntityTable::new([
        Entity::individual("maria", Gender::Feminine),
        Entity::individual("giorgio", Gender::Masculine),
    ]);
    // after "Maria e' arrabbiata con Giorgio"
    let state = CenteringState {
        cb: None,
        cf: vec!["maria".into(), "giorgio".into()],
        source_utterance: "u1".into(),
    };
    let resolver = Resolver::new(&entities);

    for (label, placement, clitic_at, window) in [
        (
            "non le vuole piu' parlare",
            CliticPlacement::Preverbal,
            2,
            (3, 3),
        ),
        (
            "non vuole piu' parlarle",
            CliticPlacement::Enclitic,
            4,
            (2, 2),
        ),
    ] {
        let clause = Clause {
            clause_type: ClauseType::Main,
            agreement_window: AgreementWindow {
                start: window.0,
                end: window.1,
            },
            agreement: MorphFeatures::third_singular(None),
            expressions: vec![
                ReferringExpression::null_subject(0),
                ReferringExpression::clitic(Role::IndirectObject, clitic_at, placement)
                    .with_features(MorphFeatures::gender(Gender::Feminine)),
            ],
        };
        let r = resolver
            .resolve_clause(0, &clause, &state)
            .expect("resolvable");
        println!(
            "{label}: garden_path={} ambiguous={}",
            r.garden_path, r.ambiguous
        );
        for e in &r.trace {
            println!("    @{} {} {}", e.position, e.kind, e.detail);
        }
        for b in &r.bindings {
            println!(
                "    {} -> {} ({:?}, settled at {})",
                b.expression, b.entity, b.basis, b.settled_at
            );
        }
    }
}
