//! Parsing and canonical rendering of the automaton format.

use std::fmt::Write as _;

use crate::automaton::{Automaton, InitialElement, StateId, Transition};
use crate::stream::{check_token, Character, Stream};
use crate::textio::{content_lines, SourceDiagnostic};

/// Keywords that begin automaton declaration lines.
pub(crate) fn is_automaton_keyword(word: &str) -> bool {
    matches!(word, "automaton" | "alphabet" | "state" | "init" | "trans")
}

/// Declarations whose membership checks run after all lines are read.
enum Decl {
    Init(InitialElement),
    Trans(Transition),
}

/// Accumulates declaration lines; the transcript parser feeds it too, so
/// inline automata report diagnostics with transcript line numbers.
pub(crate) struct AutomatonDraft {
    header: Option<(usize, String)>,
    states: Vec<StateId>,
    alphabet: Vec<Character>,
    decls: Vec<(usize, Decl)>,
}

fn parse_character(line: usize, token: &str) -> Result<Character, SourceDiagnostic> {
    Character::new(token).map_err(|e| SourceDiagnostic::new(line, e.to_string(), token))
}

fn parse_state(line: usize, token: &str) -> Result<StateId, SourceDiagnostic> {
    StateId::new(token).map_err(|e| SourceDiagnostic::new(line, e.to_string(), token))
}

fn parse_output(line: usize, tokens: &[&str]) -> Result<Stream, SourceDiagnostic> {
    tokens
        .iter()
        .map(|t| parse_character(line, t))
        .collect::<Result<_, _>>()
}

/// Parses `<src> <char> -> <dst> / <char>…`, shared with transcript steps.
pub(crate) fn parse_transition_tokens(
    line: usize,
    tokens: &[&str],
) -> Result<Transition, SourceDiagnostic> {
    if tokens.len() < 5 || tokens[2] != "->" || tokens[4] != "/" {
        return Err(SourceDiagnostic::new(
            line,
            "expected `<source> <input> -> <target> / <output>...`",
            tokens.join(" "),
        ));
    }
    Ok(Transition::new(
        parse_state(line, tokens[0])?,
        parse_character(line, tokens[1])?,
        parse_state(line, tokens[3])?,
        parse_output(line, &tokens[5..])?,
    ))
}

/// Parses `<state> / <char>…`, shared with transcript steps.
pub(crate) fn parse_initial_tokens(
    line: usize,
    tokens: &[&str],
) -> Result<InitialElement, SourceDiagnostic> {
    if tokens.len() < 2 || tokens[1] != "/" {
        return Err(SourceDiagnostic::new(
            line,
            "expected `<state> / <output>...`",
            tokens.join(" "),
        ));
    }
    Ok(InitialElement::new(
        parse_state(line, tokens[0])?,
        parse_output(line, &tokens[2..])?,
    ))
}

impl AutomatonDraft {
    pub(crate) fn new() -> Self {
        AutomatonDraft {
            header: None,
            states: Vec::new(),
            alphabet: Vec::new(),
            decls: Vec::new(),
        }
    }

    /// Consumes one declaration line. `tokens[0]` must satisfy
    /// [`is_automaton_keyword`].
    pub(crate) fn feed(&mut self, line: usize, tokens: &[&str]) -> Result<(), SourceDiagnostic> {
        match tokens[0] {
            "automaton" => {
                if self.header.is_some() {
                    return Err(SourceDiagnostic::new(
                        line,
                        "duplicate automaton header",
                        tokens.get(1).copied().unwrap_or(""),
                    ));
                }
                let [_, name] = tokens else {
                    return Err(SourceDiagnostic::new(
                        line,
                        "expected `automaton <name>`",
                        tokens.join(" "),
                    ));
                };
                check_token(name)
                    .map_err(|e| SourceDiagnostic::new(line, e.to_string(), *name))?;
                self.header = Some((line, (*name).to_owned()));
            }
            "alphabet" => {
                if tokens.len() == 1 {
                    return Err(SourceDiagnostic::new(line, "expected characters", "alphabet"));
                }
                for token in &tokens[1..] {
                    self.alphabet.push(parse_character(line, token)?);
                }
            }
            "state" => {
                if tokens.len() == 1 {
                    return Err(SourceDiagnostic::new(line, "expected state names", "state"));
                }
                for token in &tokens[1..] {
                    self.states.push(parse_state(line, token)?);
                }
            }
            "init" => {
                let initial = parse_initial_tokens(line, &tokens[1..])?;
                self.decls.push((line, Decl::Init(initial)));
            }
            "trans" => {
                let transition = parse_transition_tokens(line, &tokens[1..])?;
                self.decls.push((line, Decl::Trans(transition)));
            }
            other => {
                return Err(SourceDiagnostic::new(
                    line,
                    format!("unknown declaration {other}"),
                    other,
                ))
            }
        }
        Ok(())
    }

    /// Runs the membership checks and builds the validated automaton.
    pub(crate) fn finish(self) -> Result<Automaton, SourceDiagnostic> {
        let Some((header_line, name)) = self.header else {
            return Err(SourceDiagnostic::new(1, "missing automaton header", ""));
        };

        let known_state = |line: usize, s: &StateId| {
            if self.states.contains(s) {
                Ok(())
            } else {
                Err(SourceDiagnostic::new(
                    line,
                    format!("unknown state {s}"),
                    s.token(),
                ))
            }
        };
        let known_char = |line: usize, c: &Character| {
            if self.alphabet.contains(c) {
                Ok(())
            } else {
                Err(SourceDiagnostic::new(
                    line,
                    format!("unknown character {c}"),
                    c.token(),
                ))
            }
        };
        let known_output = |line: usize, out: &Stream| {
            out.iter().try_for_each(|c| known_char(line, c))
        };

        let mut initials = Vec::new();
        let mut transitions = Vec::new();
        for (line, decl) in &self.decls {
            match decl {
                Decl::Init(initial) => {
                    known_state(*line, &initial.start)?;
                    known_output(*line, &initial.output)?;
                    initials.push(initial.clone());
                }
                Decl::Trans(transition) => {
                    known_state(*line, &transition.source)?;
                    known_state(*line, &transition.target)?;
                    known_char(*line, &transition.input)?;
                    known_output(*line, &transition.output)?;
                    transitions.push(transition.clone());
                }
            }
        }

        Automaton::new(name, self.states, self.alphabet, transitions, initials)
            .map_err(|e| SourceDiagnostic::new(header_line, e.to_string(), ""))
    }
}

/// Parses automaton source text. The first syntax or validation failure is
/// reported and parsing stops.
pub fn parse_automaton(text: &str) -> Result<Automaton, SourceDiagnostic> {
    let mut draft = AutomatonDraft::new();
    for (line, tokens) in content_lines(text) {
        if !is_automaton_keyword(tokens[0]) {
            return Err(SourceDiagnostic::new(
                line,
                format!("unknown declaration {}", tokens[0]),
                tokens[0],
            ));
        }
        draft.feed(line, &tokens)?;
    }
    draft.finish()
}

/// Renders an automaton as source text in canonical order: alphabet, states,
/// initial elements and transitions each sorted lexicographically.
/// `parse_automaton` accepts the output and returns an equal automaton;
/// equal automata render byte-identically.
pub fn render_automaton(automaton: &Automaton) -> String {
    let mut text = String::new();
    let _ = writeln!(text, "automaton {}", automaton.name());

    let mut line = String::from("alphabet");
    for c in automaton.alphabet() {
        let _ = write!(line, " {c}");
    }
    text.push_str(&line);
    text.push('\n');

    let mut line = String::from("state");
    for s in automaton.states() {
        let _ = write!(line, " {s}");
    }
    text.push_str(&line);
    text.push('\n');

    for initial in automaton.initials() {
        let _ = write!(text, "init {} /", initial.start);
        for c in &initial.output {
            let _ = write!(text, " {c}");
        }
        text.push('\n');
    }
    for t in automaton.transitions() {
        let _ = write!(text, "trans {} {} -> {} /", t.source, t.input, t.target);
        for c in &t.output {
            let _ = write!(text, " {c}");
        }
        text.push('\n');
    }
    text
}
