//! Operational and (bounded) denotational semantics.
//!
//! The operational reading enumerates [`Execution`]s: chains of transitions
//! spelling a given input word. The denotational reading is approximated by
//! a depth-bounded [`BehaviorNode`] tree that unrolls every nondeterministic
//! choice; the exact greatest-fixpoint object over infinite streams is never
//! computed. Both routes answer the same question — which outputs can a word
//! produce — and the test suite holds them equal on every word within the
//! depth bound.
//!
//! A missing `(state, input)` pair means chaos: from that point on, any
//! behavior at all is allowed. [`OutputResult`] keeps chaos observable as a
//! prefix plus a flag, denoting the set `{prefix ^ u | u any stream}`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::automaton::{Automaton, AutomatonError, InitialElement, StateId, Transition};
use crate::stream::{Character, Stream};

/// One run of an automaton: an initial element followed by transitions whose
/// source/target states chain up.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Execution {
    pub initial: InitialElement,
    pub steps: Vec<Transition>,
}

impl Execution {
    /// The input word this execution consumes.
    pub fn input(&self) -> Stream {
        self.steps.iter().map(|t| t.input.clone()).collect()
    }

    /// The full output: initial output followed by each step's output.
    pub fn output(&self) -> Stream {
        let mut out = self.initial.output.clone();
        for step in &self.steps {
            out = out.concat(&step.output);
        }
        out
    }

    /// The state the execution ends in.
    pub fn last_state(&self) -> &StateId {
        self.steps
            .last()
            .map(|t| &t.target)
            .unwrap_or(&self.initial.start)
    }
}

/// One possible output for a given input word.
///
/// Non-chaotic: `prefix` is the complete output of a finished run. Chaotic:
/// some run hit a missing pair after emitting `prefix`, and every
/// continuation of `prefix` is allowed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct OutputResult {
    pub prefix: Stream,
    pub chaotic: bool,
}

impl OutputResult {
    pub fn complete(prefix: Stream) -> Self {
        OutputResult {
            prefix,
            chaotic: false,
        }
    }

    pub fn chaotic(prefix: Stream) -> Self {
        OutputResult {
            prefix,
            chaotic: true,
        }
    }
}

impl fmt::Display for OutputResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("⟨")?;
        for (i, c) in self.prefix.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("⟩")?;
        if self.chaotic {
            f.write_str(" ^ any")?;
        }
        Ok(())
    }
}

fn check_word(automaton: &Automaton, input: &Stream) -> Result<(), AutomatonError> {
    input.iter().try_for_each(|c| automaton.check_character(c))
}

/// All complete executions of `automaton` whose inputs spell exactly `input`,
/// from every initial element. Runs that hit a missing pair do not appear
/// here; [`output_set`] reports them as chaotic results.
pub fn executions(automaton: &Automaton, input: &Stream) -> Result<Vec<Execution>, AutomatonError> {
    check_word(automaton, input)?;
    let mut found = Vec::new();
    for initial in automaton.initials() {
        let mut steps = Vec::new();
        walk_executions(automaton, &initial.start, input.items(), &mut steps, &mut |steps| {
            found.push(Execution {
                initial: initial.clone(),
                steps: steps.to_vec(),
            });
        });
    }
    Ok(found)
}

fn walk_executions(
    automaton: &Automaton,
    state: &StateId,
    remaining: &[Character],
    steps: &mut Vec<Transition>,
    emit: &mut impl FnMut(&[Transition]),
) {
    let Some((input, rest)) = remaining.split_first() else {
        emit(steps);
        return;
    };
    for (target, output) in automaton.outgoing(state, input) {
        steps.push(Transition::new(
            state.clone(),
            input.clone(),
            target.clone(),
            output.clone(),
        ));
        walk_executions(automaton, target, rest, steps, emit);
        steps.pop();
    }
}

/// Every output `input` can produce, as a canonically ordered set: one
/// complete result per finished run and one chaotic result per run truncated
/// at a missing pair, duplicates merged.
pub fn output_set(
    automaton: &Automaton,
    input: &Stream,
) -> Result<BTreeSet<OutputResult>, AutomatonError> {
    check_word(automaton, input)?;
    let mut results = BTreeSet::new();
    for initial in automaton.initials() {
        collect_outputs(
            automaton,
            &initial.start,
            input.items(),
            initial.output.clone(),
            &mut results,
        );
    }
    Ok(results)
}

fn collect_outputs(
    automaton: &Automaton,
    state: &StateId,
    remaining: &[Character],
    emitted: Stream,
    results: &mut BTreeSet<OutputResult>,
) {
    let Some((input, rest)) = remaining.split_first() else {
        results.insert(OutputResult::complete(emitted));
        return;
    };
    let choices = automaton.outgoing(state, input);
    if choices.is_empty() {
        results.insert(OutputResult::chaotic(emitted));
        return;
    }
    for (target, output) in choices {
        collect_outputs(automaton, target, rest, emitted.concat(output), results);
    }
}

/// One node of the bounded behavior tree: the state reached, everything
/// emitted on the way, and per-character child sets. Chaotic nodes mark a
/// missing pair and have no children.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BehaviorNode {
    pub state: StateId,
    pub emitted: Stream,
    pub children: BTreeMap<Character, Vec<BehaviorNode>>,
    pub chaotic: bool,
}

/// Unrolls the semantics to `depth` input characters: one root per initial
/// element. Every non-chaotic node above the depth bound has one child set
/// per alphabet character.
pub fn behavior_tree(automaton: &Automaton, depth: usize) -> Vec<BehaviorNode> {
    automaton
        .initials()
        .iter()
        .map(|initial| expand(automaton, &initial.start, initial.output.clone(), depth))
        .collect()
}

fn expand(automaton: &Automaton, state: &StateId, emitted: Stream, depth: usize) -> BehaviorNode {
    let mut children = BTreeMap::new();
    if depth > 0 {
        for input in automaton.alphabet() {
            let choices = automaton.outgoing(state, input);
            let nodes = if choices.is_empty() {
                vec![BehaviorNode {
                    state: state.clone(),
                    emitted: emitted.clone(),
                    children: BTreeMap::new(),
                    chaotic: true,
                }]
            } else {
                choices
                    .iter()
                    .map(|(target, output)| {
                        expand(automaton, target, emitted.concat(output), depth - 1)
                    })
                    .collect()
            };
            children.insert(input.clone(), nodes);
        }
    }
    BehaviorNode {
        state: state.clone(),
        emitted,
        children,
        chaotic: false,
    }
}

/// Recovers the output set of `input` by walking a prebuilt behavior tree.
/// Returns `None` when the word runs past the tree's depth bound or uses a
/// character the tree was not built for.
pub fn output_set_from_tree(
    roots: &[BehaviorNode],
    input: &Stream,
) -> Option<BTreeSet<OutputResult>> {
    let mut results = BTreeSet::new();
    for root in roots {
        read_tree(root, input.items(), &mut results)?;
    }
    Some(results)
}

fn read_tree(
    node: &BehaviorNode,
    remaining: &[Character],
    results: &mut BTreeSet<OutputResult>,
) -> Option<()> {
    if node.chaotic {
        results.insert(OutputResult::chaotic(node.emitted.clone()));
        return Some(());
    }
    let Some((input, rest)) = remaining.split_first() else {
        results.insert(OutputResult::complete(node.emitted.clone()));
        return Some(());
    };
    let children = node.children.get(input)?;
    for child in children {
        read_tree(child, rest, results)?;
    }
    Some(())
}

/// A branch along which output failed to grow monotonically. Cannot occur
/// for trees built by [`behavior_tree`], where outputs only accumulate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotonicityViolation {
    pub input: Stream,
    pub ancestor_output: Stream,
    pub descendant_output: Stream,
}

/// Outcome of [`check_monotone`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotonicityCheck {
    pub holds: bool,
    pub counterexample: Option<MonotonicityViolation>,
}

/// Verifies that along every branch of the depth-bounded behavior tree the
/// emitted output of a node is a prefix of the output at each descendant.
pub fn check_monotone(automaton: &Automaton, depth: usize) -> MonotonicityCheck {
    for root in behavior_tree(automaton, depth) {
        let mut path = Vec::new();
        if let Some(violation) = scan_monotone(&root, &mut path) {
            return MonotonicityCheck {
                holds: false,
                counterexample: Some(violation),
            };
        }
    }
    MonotonicityCheck {
        holds: true,
        counterexample: None,
    }
}

fn scan_monotone(
    node: &BehaviorNode,
    path: &mut Vec<Character>,
) -> Option<MonotonicityViolation> {
    for (input, children) in &node.children {
        for child in children {
            path.push(input.clone());
            // prefix order is transitive, so parent/child checks cover all
            // ancestor/descendant pairs
            if !node.emitted.is_prefix_of(&child.emitted) {
                return Some(MonotonicityViolation {
                    input: path.iter().cloned().collect(),
                    ancestor_output: node.emitted.clone(),
                    descendant_output: child.emitted.clone(),
                });
            }
            if let Some(violation) = scan_monotone(child, path) {
                return Some(violation);
            }
            path.pop();
        }
    }
    None
}
