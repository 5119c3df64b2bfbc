//! Choosing a subject form for the next utterance.
//!
//! cargo run --example advise

use centering::centering::CenteringState;
use centering::felicity::advise_form;
use centering::model::{Entity, EntityTable, Gender, MorphFeatures, Role};

fn main() {
    let entities = EntityTable::new([
        Entity::individual("maria", Gender::Feminine),
        Entity::individual("giovanni", Gender::Masculine),
    ]);
    // after "Maria voleva andare al mare. Telefono' a Giovanni."
    let state = CenteringState {
        cb: Some("maria".into()),
        cf: vec!["maria".into(), "giovanni".into()],
        source_utterance: "u2".into(),
    };

    let plain = MorphFeatures::default();
    let participle = MorphFeatures::gender(Gender::Masculine);
    for (who, planned, note) in [
        ("maria", &plain, "no agreement cue"),
        ("giovanni", &plain, "no agreement cue"),
        ("giovanni", &participle, "masculine participle planned"),
    ] {
        let a =
            advise_form(&who.into(), Role::Subject, &state, planned, &entities).expect("available");
        println!("{who:<9} {note:<29} -> {} ({})", a.form, a.rationale);
    }

    match advise_form(&"luigi".into(), Role::Subject, &state, &plain, &entities) {
        Ok(a) => println!("luigi -> {}", a.form),
        Err(e) => println!("luigi -> error: {e}"),
    }
}
