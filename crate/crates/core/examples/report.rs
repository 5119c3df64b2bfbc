//! Full analysis report for a document, as text and JSON.
//!
//! cargo run --example report [FILE]

use centering::analysis::{analyze_bytes, render_json, render_text};
use centering::corpus::{bundled_file, read_file};

fn main() {
    let (name, bytes) = match std::env::args().nth(1) {
        Some(path) => {
            let bytes = read_file(path.as_ref()).unwrap_or_else(|e| {
                eprintln!("{e}");
                std::process::exit(2);
            });
            (path, bytes)
        }
        None => (
            "ex3".to_string(),
            bundled_file("ex3").expect("bundled").bytes,
        ),
    };
    let report = analyze_bytes(&name, &bytes, false).unwrap_or_else(|e| {
        eprintln!("{e}");
        std::process::exit(2);
    });
    print!("{}", render_text(&report, true));
    println!();
    println!("{}", render_json(&report));
}
