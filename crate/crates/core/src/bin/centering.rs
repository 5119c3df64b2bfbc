use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use centering::analysis::{self, render_json_all, render_text, AnalysisReport};
use centering::corpus::{self, parse_document, read_file};
use centering::model::{Gender, MorphFeatures, Number, Role};

#[derive(Parser)]
#[command(
    name = "centering",
    version,
    about = "Centering analysis of annotated discourse"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze discourse documents.
    Analyze {
        #[arg(long, value_enum, default_value_t = Emit::Text)]
        emit: Emit,
        /// Show rule checks, bindings and resolution events.
        #[arg(long)]
        trace: bool,
        /// Treat validation warnings as errors.
        #[arg(long)]
        strict: bool,
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Recommend a referring form for the utterance after UTTERANCE.
    Advise {
        file: PathBuf,
        #[arg(long)]
        utterance: String,
        #[arg(long)]
        intended: String,
        #[arg(long, value_enum, default_value_t = RoleArg::Subject)]
        role: RoleArg,
        /// Gender the planned verb or participle will show.
        #[arg(long, value_enum)]
        gender: Option<GenderArg>,
        /// Number the planned verb will show.
        #[arg(long, value_enum)]
        number: Option<NumberArg>,
    },
    /// Analyze the reference corpus and check it against its expectations.
    CorpusCheck {
        #[arg(long, value_enum, default_value_t = Emit::Text)]
        emit: Emit,
        #[arg(long)]
        trace: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum RoleArg {
    Subject,
    DirectObject,
    IndirectObject,
    Oblique,
    Possessor,
    Other,
}

impl From<RoleArg> for Role {
    fn from(r: RoleArg) -> Role {
        match r {
            RoleArg::Subject => Role::Subject,
            RoleArg::DirectObject => Role::DirectObject,
            RoleArg::IndirectObject => Role::IndirectObject,
            RoleArg::Oblique => Role::Oblique,
            RoleArg::Possessor => Role::Possessor,
            RoleArg::Other => Role::Other,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GenderArg {
    Masculine,
    Feminine,
}

#[derive(Clone, Copy, ValueEnum)]
enum NumberArg {
    Singular,
    Plural,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Analyze {
            emit,
            trace,
            strict,
            files,
        } => {
            let inputs: Vec<(String, Result<Vec<u8>, String>)> = files
                .iter()
                .map(|p| {
                    (
                        p.display().to_string(),
                        read_file(p).map_err(|e| e.to_string()),
                    )
                })
                .collect();
            run(inputs, emit, trace, strict)
        }
        Command::CorpusCheck { emit, trace } => match corpus::corpus() {
            Ok(files) => {
                let inputs = files.into_iter().map(|f| (f.name, Ok(f.bytes))).collect();
                run(inputs, emit, trace, false)
            }
            Err(e) => {
                eprintln!("error: {e}");
                2
            }
        },
        Command::Advise {
            file,
            utterance,
            intended,
            role,
            gender,
            number,
        } => {
            let planned = MorphFeatures {
                gender: gender.map(|g| match g {
                    GenderArg::Masculine => Gender::Masculine,
                    GenderArg::Feminine => Gender::Feminine,
                }),
                number: number.map(|n| match n {
                    NumberArg::Singular => Number::Singular,
                    NumberArg::Plural => Number::Plural,
                }),
                person: None,
            };
            let result = read_file(&file)
                .and_then(|b| parse_document(&b))
                .map_err(analysis_error)
                .and_then(|doc| {
                    analysis::advise(
                        &doc.discourse,
                        &utterance.as_str().into(),
                        &intended.as_str().into(),
                        role.into(),
                        &planned,
                    )
                });
            match result {
                Ok(a) => {
                    println!("{} ({})", a.form, a.rationale);
                    0
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    2
                }
            }
        }
    };
    ExitCode::from(code as u8)
}

fn analysis_error(e: centering::CorpusError) -> centering::AnalysisError {
    e.into()
}

fn run(
    inputs: Vec<(String, Result<Vec<u8>, String>)>,
    emit: Emit,
    trace: bool,
    strict: bool,
) -> i32 {
    let mut errors = false;
    let mut mismatches = false;
    let mut reports: Vec<AnalysisReport> = Vec::new();
    let stdout = std::io::stdout();
    for (name, bytes) in inputs {
        let outcome = bytes
            .map_err(centering::AnalysisError::Input)
            .and_then(|b| analysis::analyze_bytes(&name, &b, strict));
        match outcome {
            Ok(report) => {
                mismatches |= !report.mismatches.is_empty();
                if emit == Emit::Text {
                    let mut out = stdout.lock();
                    let _ = out.write_all(render_text(&report, trace).as_bytes());
                }
                reports.push(report);
            }
            Err(e) => {
                errors = true;
                eprintln!("error: {name}: {e}");
            }
        }
    }
    if emit == Emit::Json {
        println!("{}", render_json_all(&reports));
    }
    analysis::exit_code(errors, mismatches)
}
