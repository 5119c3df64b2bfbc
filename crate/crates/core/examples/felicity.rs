//! Felicity labels for the four continuations of the Maria/Giovanni
//! discourse, straight from the bundled corpus.
//!
//! cargo run --example felicity

use centering::analysis::analyze_bytes;
use centering::corpus::bundled_file;

fn main() {
    for name in ["ex4_u3a", "ex4_u3b", "ex4_u3c", "ex4_u3d"] {
        let f = bundled_file(name).expect("bundled");
        let report = analyze_bytes(name, &f.bytes, false).expect("valid corpus file");
        let u3 = report.record("u3").expect("third utterance");
        let text = centering::corpus::parse_document(&f.bytes)
            .ok()
            .and_then(|d| d.discourse.utterances[2].text.clone())
            .unwrap_or_default();
        println!(
            "{name}: {text:<42} {:<12} {:<11} {:?}",
            u3.transition.to_string(),
            u3.felicity.label.to_string(),
            u3.felicity.reasons
        );
    }
}
