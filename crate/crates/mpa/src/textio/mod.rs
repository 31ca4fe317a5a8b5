//! Text formats and rendering.
//!
//! # Automaton format (`.mpa`)
//!
//! UTF-8 text, one declaration per line, whitespace-separated tokens, `#`
//! starts a comment. Declarations may come in any order after the header;
//! `alphabet` and `state` lines may repeat and accumulate.
//!
//! ```text
//! automaton parity
//! alphabet 0 L ?
//! state even odd
//! init even /
//! trans even 0 -> even /
//! trans even ? -> even / 0
//! ```
//!
//! `init <state> / <char>…` declares an initial element, `trans <src>
//! <char> -> <dst> / <char>…` a transition; the characters after `/` are the
//! output stream, possibly empty. [`render_automaton`] emits this format in
//! a canonical order, so value-equal automata render byte-identically.
//!
//! # Transcript format (`.rft`)
//!
//! A transcript names its starting automaton — either `refine <file>`
//! referencing an `.mpa` file, or the automaton declarations inlined before
//! the first step — optionally widens the alphabet, and then lists rule
//! applications:
//!
//! ```text
//! refine figure.mpa
//! extend-alphabet fill empty
//! add-trans Selected fill -> Selected /
//! add-trans Selected empty -> Selected /
//! refine-state SelFilled SelEmpty Deselected map SelFilled->Selected SelEmpty->Selected Deselected->Deselected
//! remove-trans SelFilled fill -> SelEmpty /
//! remove-state Junk
//! remove-init SelFilled /
//! add-state Extra
//! ```
//!
//! Consecutive lines with the same step keyword merge into a single rule
//! application; this is what lets one addition enable a pair with several
//! alternative transitions at once. Side conditions are checked at replay
//! time, not at parse time.

mod automaton_format;
mod dot;
mod transcript_format;

pub use automaton_format::{parse_automaton, render_automaton};
pub use dot::export_dot;
pub use transcript_format::{parse_transcript, parse_transcript_file};

use thiserror::Error;

use crate::semantics::Execution;

/// A parse or validation failure, located in the input text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct SourceDiagnostic {
    /// 1-based line in the parsed text.
    pub line: usize,
    pub message: String,
    pub offending_token: String,
}

impl SourceDiagnostic {
    pub(crate) fn new(
        line: usize,
        message: impl Into<String>,
        offending_token: impl Into<String>,
    ) -> Self {
        SourceDiagnostic {
            line,
            message: message.into(),
            offending_token: offending_token.into(),
        }
    }
}

/// Error of the file-reading entry points.
#[derive(Debug, Error)]
pub enum FileError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Parse(#[from] SourceDiagnostic),
}

/// Splits text into `(line_number, tokens)` pairs, dropping comments and
/// blank lines. Line numbers are 1-based.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(index, line)| {
        let content = line.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        (!tokens.is_empty()).then_some((index + 1, tokens))
    })
}

/// One execution on a single line:
/// `init <state> / <out> ; <src> -<in>/<out>-> <dst> ; …`.
pub fn render_execution(execution: &Execution) -> String {
    let mut line = format!("init {}", execution.initial.start);
    line.push_str(" /");
    if !execution.initial.output.is_empty() {
        line.push(' ');
        line.push_str(&execution.initial.output.to_string());
    }
    for step in &execution.steps {
        line.push_str(&format!(
            " ; {} -{}/{}-> {}",
            step.source, step.input, step.output, step.target
        ));
    }
    line
}
