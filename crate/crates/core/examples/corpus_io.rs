//! Reading, validating and writing `.cdoc.json` documents.
//!
//! cargo run --example corpus_io

use centering::corpus::{bundled, parse_document, serialize_document};
use centering::CorpusError;

fn main() {
    for f in bundled() {
        let doc = parse_document(&f.bytes).expect("bundled corpus is valid");
        let canonical = serialize_document(&doc) == f.bytes;
        println!(
            "{:<8} {:?} {} entities, {} utterances, canonical={canonical}",
            f.name,
            doc.discourse.language,
            doc.discourse.entities.len(),
            doc.discourse.utterances.len()
        );
    }

    let broken = br#"{"schema_version": "1", "language": "italian", "entities": [],
        "utterances": [{"id": "u1", "clauses": []}, {"id": "u1", "clauses": []}]}"#;
    match parse_document(broken) {
        Err(CorpusError::Invalid(violations)) => {
            println!("invalid document:");
            for v in violations {
                println!("  - {v}");
            }
        }
        other => println!("unexpected: {other:?}"),
    }
    match parse_document(br#"{"schema_version": "2"}"#) {
        Err(e) => println!("{e}"),
        Ok(_) => unreachable!(),
    }
}
