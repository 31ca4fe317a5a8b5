//! Command line front end: validate and inspect automata, run words through
//! them, replay refinement transcripts and check bounded refinement.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use mpa::refine::{apply_transcript, check_refines_bounded, find_simulation, DEFAULT_ORACLE_DEPTH};
use mpa::semantics::{executions, output_set};
use mpa::textio::{
    export_dot, parse_automaton, parse_transcript_file, render_automaton, render_execution,
};
use mpa::{Automaton, Character, Stream};

#[derive(Parser)]
#[command(name = "mpa", version, about = "Message processing automata toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate an automaton file
    Validate { file: PathBuf },
    /// Show totality, chaotic pairs and the reachable states
    Info { file: PathBuf },
    /// Enumerate the complete executions of an input word
    Run {
        file: PathBuf,
        /// Input word, one character per argument (quote `?` in the shell)
        word: Vec<String>,
    },
    /// Print every output the input word can produce
    Outset {
        file: PathBuf,
        /// Input word, one character per argument (quote `?` in the shell)
        word: Vec<String>,
    },
    /// Replay a refinement transcript and print the final automaton
    Refine {
        transcript: PathBuf,
        /// Also write every intermediate automaton into this directory
        #[arg(long, value_name = "DIR")]
        emit_intermediates: Option<PathBuf>,
    },
    /// Check that the second automaton refines the first, up to a depth
    CheckRefines {
        original: PathBuf,
        refined: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ORACLE_DEPTH)]
        depth: usize,
    },
    /// Export an automaton as a GraphViz digraph
    ExportDot { file: PathBuf },
}

fn load_automaton(path: &Path) -> Result<Automaton, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_automaton(&text).map_err(|d| format!("{}:{}", path.display(), d))
}

fn parse_word(tokens: &[String]) -> Result<Stream, String> {
    tokens
        .iter()
        .map(|t| Character::new(t.as_str()).map_err(|e| e.to_string()))
        .collect()
}

fn angle(stream: &Stream) -> String {
    let items: Vec<&str> = stream.iter().map(Character::token).collect();
    format!("⟨{}⟩", items.join(","))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("mpa: {message}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Validate { file } => {
            let automaton = load_automaton(&file)?;
            println!(
                "ok: {} ({} states, {} transitions, {} initial elements)",
                automaton.name(),
                automaton.states().len(),
                automaton.transitions().len(),
                automaton.initials().len()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Info { file } => {
            let automaton = load_automaton(&file)?;
            println!("automaton {}", automaton.name());
            let states: Vec<&str> = automaton.states().iter().map(|s| s.token()).collect();
            println!("states: {}", states.join(" "));
            let alphabet: Vec<&str> = automaton.alphabet().iter().map(|c| c.token()).collect();
            println!("alphabet: {}", alphabet.join(" "));
            println!("transitions: {}", automaton.transitions().len());
            println!("initials: {}", automaton.initials().len());
            let reachable: Vec<String> =
                automaton.reachable().iter().map(|s| s.to_string()).collect();
            println!("reachable: {}", reachable.join(" "));
            let missing = automaton.missing_pairs();
            println!("total: {}", if missing.is_empty() { "yes" } else { "no" });
            for (state, input) in missing {
                println!("missing: {state} {input}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Run { file, word } => {
            let automaton = load_automaton(&file)?;
            let input = parse_word(&word)?;
            let runs = executions(&automaton, &input).map_err(|e| e.to_string())?;
            for run in &runs {
                println!("{}", render_execution(run));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Outset { file, word } => {
            let automaton = load_automaton(&file)?;
            let input = parse_word(&word)?;
            let results = output_set(&automaton, &input).map_err(|e| e.to_string())?;
            for result in results {
                println!("{result}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Refine {
            transcript,
            emit_intermediates,
        } => {
            let transcript_path = transcript;
            let transcript = parse_transcript_file(&transcript_path)
                .map_err(|e| format!("{}: {e}", transcript_path.display()))?;
            let replay = apply_transcript(&transcript)
                .map_err(|e| format!("{}: {e}", transcript_path.display()))?;
            if let Some(dir) = emit_intermediates {
                fs::create_dir_all(&dir).map_err(|e| format!("{}: {e}", dir.display()))?;
                let mut stage = 0usize;
                let mut write_stage = |label: &str, automaton: &Automaton| -> Result<(), String> {
                    let path = dir.join(format!("{stage:02}-{label}.mpa"));
                    fs::write(&path, render_automaton(automaton))
                        .map_err(|e| format!("{}: {e}", path.display()))?;
                    stage += 1;
                    Ok(())
                };
                write_stage("start", &replay.start)?;
                if let Some(extended) = &replay.extended {
                    write_stage("extend-alphabet", extended)?;
                }
                for (step, automaton) in transcript.steps.iter().zip(&replay.intermediates) {
                    write_stage(step.kind(), automaton)?;
                }
            }
            print!("{}", render_automaton(replay.final_automaton()));
            Ok(ExitCode::SUCCESS)
        }
        Command::CheckRefines {
            original,
            refined,
            depth,
        } => {
            let original = load_automaton(&original)?;
            let refined = load_automaton(&refined)?;
            let simulation = find_simulation(&original, &refined).map_err(|e| e.to_string())?;
            let verdict =
                check_refines_bounded(&original, &refined, depth).map_err(|e| e.to_string())?;
            if verdict.holds {
                match simulation {
                    Some(relation) => println!(
                        "refines: yes (simulation with {} pairs; bounded check to depth {depth} agrees)",
                        relation.len()
                    ),
                    None => println!(
                        "refines: up to depth {depth} (bounded check only; no simulation found)"
                    ),
                }
                Ok(ExitCode::SUCCESS)
            } else {
                let counterexample = verdict
                    .counterexample
                    .expect("failing verdicts carry a counterexample");
                println!("refines: no");
                println!("counterexample input: {}", angle(&counterexample.input));
                println!("uncovered output: {}", counterexample.offending);
                Ok(ExitCode::FAILURE)
            }
        }
        Command::ExportDot { file } => {
            let automaton = load_automaton(&file)?;
            print!("{}", export_dot(&automaton));
            Ok(ExitCode::SUCCESS)
        }
    }
}
