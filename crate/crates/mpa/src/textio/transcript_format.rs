//! Parsing of the transcript format.

use std::collections::BTreeSet;
use std::path::Path;

use crate::automaton::{Automaton, StateId};
use crate::refine::{AbstractionMap, RefinementStep, Transcript};
use crate::stream::Character;
use crate::textio::automaton_format::{
    is_automaton_keyword, parse_initial_tokens, parse_transition_tokens, AutomatonDraft,
};
use crate::textio::{content_lines, FileError, SourceDiagnostic};

fn is_step_keyword(word: &str) -> bool {
    matches!(
        word,
        "extend-alphabet"
            | "remove-init"
            | "remove-trans"
            | "add-trans"
            | "remove-state"
            | "add-state"
            | "refine-state"
    )
}

fn parse_state(line: usize, token: &str) -> Result<StateId, SourceDiagnostic> {
    StateId::new(token).map_err(|e| SourceDiagnostic::new(line, e.to_string(), token))
}

fn parse_state_list(line: usize, tokens: &[&str]) -> Result<BTreeSet<StateId>, SourceDiagnostic> {
    if tokens.is_empty() {
        return Err(SourceDiagnostic::new(line, "expected state names", ""));
    }
    tokens.iter().map(|t| parse_state(line, t)).collect()
}

fn parse_refine_state(line: usize, tokens: &[&str]) -> Result<RefinementStep, SourceDiagnostic> {
    let Some(split) = tokens.iter().position(|t| *t == "map") else {
        return Err(SourceDiagnostic::new(
            line,
            "expected `refine-state <state>... map <new>-><old>...`",
            tokens.join(" "),
        ));
    };
    let states = parse_state_list(line, &tokens[..split])?;
    let pairs = &tokens[split + 1..];
    if pairs.is_empty() {
        return Err(SourceDiagnostic::new(line, "expected map entries", "map"));
    }
    let mut map = std::collections::BTreeMap::new();
    for pair in pairs {
        let Some((new, old)) = pair.split_once("->") else {
            return Err(SourceDiagnostic::new(
                line,
                format!("map entry {pair} is not of the form <new>-><old>"),
                *pair,
            ));
        };
        let new = parse_state(line, new)?;
        let old = parse_state(line, old)?;
        if map.insert(new.clone(), old).is_some() {
            return Err(SourceDiagnostic::new(
                line,
                format!("duplicate map entry for {new}"),
                *pair,
            ));
        }
    }
    Ok(RefinementStep::RefineStates {
        states,
        map: AbstractionMap::new(map),
    })
}

/// Appends a step, merging it into the previous one when both have the same
/// kind. Merging makes a block of `add-trans` lines count as one rule
/// application, which is what allows several alternative transitions on a
/// single freshly enabled pair. State refinements never merge.
fn push_step(steps: &mut Vec<RefinementStep>, step: RefinementStep) {
    use RefinementStep::*;
    match (steps.last_mut(), step) {
        (Some(RemoveInitials { remove }), RemoveInitials { remove: more }) => {
            remove.extend(more);
        }
        (Some(RemoveTransitions { remove }), RemoveTransitions { remove: more }) => {
            remove.extend(more);
        }
        (Some(AddTransitions { add }), AddTransitions { add: more }) => {
            add.extend(more);
        }
        (Some(RemoveStates { remove }), RemoveStates { remove: more }) => {
            remove.extend(more);
        }
        (Some(AddStates { add }), AddStates { add: more }) => {
            add.extend(more);
        }
        (_, step) => steps.push(step),
    }
}

enum Section {
    Start,
    Inline(AutomatonDraft),
    Steps,
}

/// Parses transcript source text. `resolve` supplies the source of an
/// automaton file referenced by a `refine <file>` line; inline automata
/// need no resolver. Rule side conditions are not checked here — replay
/// does that.
pub fn parse_transcript<F>(text: &str, mut resolve: F) -> Result<Transcript, SourceDiagnostic>
where
    F: FnMut(&str) -> Result<String, String>,
{
    let mut section = Section::Start;
    let mut start: Option<Automaton> = None;
    let mut extension: Option<BTreeSet<Character>> = None;
    let mut steps: Vec<RefinementStep> = Vec::new();

    for (line, tokens) in content_lines(text) {
        let keyword = tokens[0];
        if keyword == "refine" {
            if !matches!(section, Section::Start) {
                return Err(SourceDiagnostic::new(
                    line,
                    "refine must be the first declaration",
                    keyword,
                ));
            }
            let [_, file] = tokens.as_slice() else {
                return Err(SourceDiagnostic::new(
                    line,
                    "expected `refine <automaton-file>`",
                    tokens.join(" "),
                ));
            };
            let source = resolve(file).map_err(|e| {
                SourceDiagnostic::new(line, format!("cannot read {file}: {e}"), *file)
            })?;
            let automaton = super::parse_automaton(&source).map_err(|inner| {
                SourceDiagnostic::new(
                    line,
                    format!("{file}: {inner}"),
                    inner.offending_token,
                )
            })?;
            start = Some(automaton);
            section = Section::Steps;
        } else if is_automaton_keyword(keyword) {
            match &mut section {
                Section::Start => {
                    let mut draft = AutomatonDraft::new();
                    draft.feed(line, &tokens)?;
                    section = Section::Inline(draft);
                }
                Section::Inline(draft) => draft.feed(line, &tokens)?,
                Section::Steps => {
                    return Err(SourceDiagnostic::new(
                        line,
                        "automaton declarations must precede the steps",
                        keyword,
                    ))
                }
            }
        } else if is_step_keyword(keyword) {
            if let Section::Inline(draft) =
                std::mem::replace(&mut section, Section::Steps)
            {
                start = Some(draft.finish()?);
            }
            section = Section::Steps;
            if start.is_none() {
                return Err(SourceDiagnostic::new(
                    line,
                    "transcript has no start automaton",
                    keyword,
                ));
            }
            let payload = &tokens[1..];
            match keyword {
                "extend-alphabet" => {
                    if extension.is_some() || !steps.is_empty() {
                        return Err(SourceDiagnostic::new(
                            line,
                            "extend-alphabet must appear once, before any step",
                            keyword,
                        ));
                    }
                    if payload.is_empty() {
                        return Err(SourceDiagnostic::new(line, "expected characters", keyword));
                    }
                    let chars = payload
                        .iter()
                        .map(|t| {
                            Character::new(*t).map_err(|e| {
                                SourceDiagnostic::new(line, e.to_string(), *t)
                            })
                        })
                        .collect::<Result<BTreeSet<_>, _>>()?;
                    extension = Some(chars);
                }
                "remove-init" => {
                    let initial = parse_initial_tokens(line, payload)?;
                    push_step(
                        &mut steps,
                        RefinementStep::RemoveInitials {
                            remove: [initial].into_iter().collect(),
                        },
                    );
                }
                "remove-trans" => {
                    let transition = parse_transition_tokens(line, payload)?;
                    push_step(
                        &mut steps,
                        RefinementStep::RemoveTransitions {
                            remove: [transition].into_iter().collect(),
                        },
                    );
                }
                "add-trans" => {
                    let transition = parse_transition_tokens(line, payload)?;
                    push_step(
                        &mut steps,
                        RefinementStep::AddTransitions {
                            add: [transition].into_iter().collect(),
                        },
                    );
                }
                "remove-state" => {
                    let states = parse_state_list(line, payload)?;
                    push_step(&mut steps, RefinementStep::RemoveStates { remove: states });
                }
                "add-state" => {
                    let states = parse_state_list(line, payload)?;
                    push_step(&mut steps, RefinementStep::AddStates { add: states });
                }
                "refine-state" => {
                    push_step(&mut steps, parse_refine_state(line, payload)?);
                }
                _ => unreachable!("matched by is_step_keyword"),
            }
        } else {
            return Err(SourceDiagnostic::new(
                line,
                format!("unknown declaration {keyword}"),
                keyword,
            ));
        }
    }

    if let Section::Inline(draft) = section {
        start = Some(draft.finish()?);
    }
    let Some(start) = start else {
        return Err(SourceDiagnostic::new(1, "transcript has no start automaton", ""));
    };
    let mut transcript = Transcript::new(start, steps);
    if let Some(extension) = extension {
        transcript = transcript.with_alphabet_extension(extension);
    }
    Ok(transcript)
}

/// Reads and parses a transcript file; `refine <file>` references resolve
/// relative to the transcript's directory.
pub fn parse_transcript_file(path: &Path) -> Result<Transcript, FileError> {
    let text = std::fs::read_to_string(path)?;
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let transcript = parse_transcript(&text, |name| {
        std::fs::read_to_string(dir.join(name)).map_err(|e| e.to_string())
    })?;
    Ok(transcript)
}
