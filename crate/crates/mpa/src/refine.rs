//! The refinement calculus: six checked transformation rules, transcripts
//! that replay them, and a two-tier oracle for semantic inclusion.
//!
//! Each rule takes an automaton and returns a fresh one, or a diagnostic
//! when its side condition fails:
//!
//! * [`remove_initials`] — keep a nonempty subset of the initial elements.
//! * [`remove_transitions`] — drop transitions, but never a pair's last one.
//! * [`add_transitions`] — add transitions only on currently disabled pairs,
//!   turning chaos into explicit behavior.
//! * [`remove_states`] — drop unreachable states and their transitions.
//! * [`add_states`] — add fresh, unconnected states.
//! * [`refine_states`] — split states along a total surjective abstraction
//!   map, duplicating every touching transition.
//!
//! Creating the starting automaton is the seventh rule; it is
//! [`Automaton::new`], not a step kind, since it refines nothing.
//!
//! Semantic inclusion itself — every behavior of the refined automaton is
//! allowed by the original — is undecidable to check directly over infinite
//! input streams, so the oracle is split in two tiers.
//! [`check_refines_bounded`] (tier 1) is a necessary condition: it compares
//! output sets for every input word up to a depth bound and produces a
//! replayable counterexample on failure. [`find_simulation`] (tier 2) is a
//! sufficient condition: a step-wise simulation relation between states,
//! valid at every depth when found. Neither tier decides inclusion exactly;
//! together they bracket it.

use std::collections::{BTreeMap, BTreeSet};

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use thiserror::Error;

use crate::automaton::{Automaton, AutomatonError, InitialElement, StateId, Transition};
use crate::semantics::{output_set, OutputResult};
use crate::stream::{Character, Stream};
use crate::words;

/// Default depth bound of the tier-1 oracle: deep enough to traverse every
/// loop of the shipped catalog automata at least twice.
pub const DEFAULT_ORACLE_DEPTH: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("initial element ({0}) is not part of the automaton")]
    UnknownInitial(InitialElement),
    #[error("cannot remove every initial element")]
    EmptyInitials,
    #[error("transition ({0}) is not part of the automaton")]
    UnknownTransition(Transition),
    #[error("removal would leave pair ({0}, {1}) without a transition")]
    DisablesPair(StateId, Character),
    #[error("pair ({0}, {1}) already has transitions; additions must target disabled pairs")]
    AlreadyEnabled(StateId, Character),
    #[error("state {0} is reachable and cannot be removed")]
    ReachableStateDropped(StateId),
    #[error("state {0} is not part of the automaton")]
    UnknownState(StateId),
    #[error("state {0} already exists")]
    StateCollision(StateId),
    #[error("abstraction map does not cover refined state {0}; it must be total")]
    MapNotTotal(StateId),
    #[error("abstraction map entry {0} is not in the refined state set")]
    MapDomainExcess(StateId),
    #[error("abstraction map sends {0} to unknown state {1}")]
    MapUnknownTarget(StateId, StateId),
    #[error("no refined state maps to {0}; the abstraction map must be surjective")]
    MapNotSurjective(StateId),
    #[error("character {0} is already in the alphabet")]
    AlreadyInAlphabet(Character),
    #[error("the automata have different alphabets")]
    AlphabetMismatch,
    #[error(transparent)]
    Invalid(#[from] AutomatonError),
}

fn rebuild(
    a: &Automaton,
    states: BTreeSet<StateId>,
    alphabet: BTreeSet<Character>,
    transitions: BTreeSet<Transition>,
    initials: BTreeSet<InitialElement>,
) -> Result<Automaton, RuleError> {
    Ok(Automaton::new(
        a.name().to_owned(),
        states,
        alphabet,
        transitions,
        initials,
    )?)
}

/// Restricts the initial elements to `keep`, reducing the initial choice.
/// `keep` must be a nonempty subset of the current initial elements.
pub fn remove_initials(
    a: &Automaton,
    keep: &BTreeSet<InitialElement>,
) -> Result<Automaton, RuleError> {
    if let Some(foreign) = keep.iter().find(|i| !a.initials().contains(i)) {
        return Err(RuleError::UnknownInitial(foreign.clone()));
    }
    if keep.is_empty() {
        return Err(RuleError::EmptyInitials);
    }
    rebuild(
        a,
        a.states().clone(),
        a.alphabet().clone(),
        a.transitions().clone(),
        keep.clone(),
    )
}

/// Removes the given transitions. Every pair that is enabled now must keep
/// at least one alternative transition, so no new chaos appears.
pub fn remove_transitions(
    a: &Automaton,
    remove: &BTreeSet<Transition>,
) -> Result<Automaton, RuleError> {
    if let Some(foreign) = remove.iter().find(|t| !a.transitions().contains(t)) {
        return Err(RuleError::UnknownTransition(foreign.clone()));
    }
    let kept: BTreeSet<Transition> = a.transitions().difference(remove).cloned().collect();
    for t in remove {
        let still_enabled = kept
            .iter()
            .any(|k| k.source == t.source && k.input == t.input);
        if !still_enabled {
            return Err(RuleError::DisablesPair(t.source.clone(), t.input.clone()));
        }
    }
    rebuild(
        a,
        a.states().clone(),
        a.alphabet().clone(),
        kept,
        a.initials().clone(),
    )
}

/// Adds transitions on pairs that have none yet, replacing chaotic behavior
/// with an explicit description. Several new transitions may share one
/// freshly enabled pair; freshness is judged against the automaton as it is
/// now, not against earlier additions in the same call.
pub fn add_transitions(a: &Automaton, add: &BTreeSet<Transition>) -> Result<Automaton, RuleError> {
    for t in add {
        if !a.outgoing(&t.source, &t.input).is_empty() {
            return Err(RuleError::AlreadyEnabled(t.source.clone(), t.input.clone()));
        }
    }
    let transitions = a.transitions().union(add).cloned().collect();
    rebuild(
        a,
        a.states().clone(),
        a.alphabet().clone(),
        transitions,
        a.initials().clone(),
    )
}

/// Restricts the state set to `keep`, which must contain every reachable
/// state; transitions touching dropped states disappear with them.
pub fn remove_states(a: &Automaton, keep: &BTreeSet<StateId>) -> Result<Automaton, RuleError> {
    if let Some(foreign) = keep.iter().find(|s| !a.states().contains(s)) {
        return Err(RuleError::UnknownState(foreign.clone()));
    }
    if let Some(reachable) = a.reachable().iter().find(|s| !keep.contains(s)) {
        return Err(RuleError::ReachableStateDropped(reachable.clone()));
    }
    let transitions = a
        .transitions()
        .iter()
        .filter(|t| keep.contains(&t.source) && keep.contains(&t.target))
        .cloned()
        .collect();
    rebuild(
        a,
        keep.clone(),
        a.alphabet().clone(),
        transitions,
        a.initials().clone(),
    )
}

/// Adds fresh states. They start unreachable and transition-free, hence
/// chaotic on every input, and harmless until wired up.
pub fn add_states(a: &Automaton, add: &BTreeSet<StateId>) -> Result<Automaton, RuleError> {
    if let Some(existing) = add.iter().find(|s| a.states().contains(s)) {
        return Err(RuleError::StateCollision(existing.clone()));
    }
    rebuild(
        a,
        a.states().union(add).cloned().collect(),
        a.alphabet().clone(),
        a.transitions().clone(),
        a.initials().clone(),
    )
}

/// A total, surjective map from refined states back to the states they
/// refine. Totality and surjectivity are checked when the map is applied.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AbstractionMap(BTreeMap<StateId, StateId>);

impl AbstractionMap {
    pub fn new(map: BTreeMap<StateId, StateId>) -> Self {
        AbstractionMap(map)
    }

    /// The identity map on `states`.
    pub fn identity<'a>(states: impl IntoIterator<Item = &'a StateId>) -> Self {
        AbstractionMap(
            states
                .into_iter()
                .map(|s| (s.clone(), s.clone()))
                .collect(),
        )
    }

    pub fn get(&self, refined: &StateId) -> Option<&StateId> {
        self.0.get(refined)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&StateId, &StateId)> {
        self.0.iter()
    }

    fn preimage(&self, original: &StateId) -> Vec<&StateId> {
        self.0
            .iter()
            .filter(|(_, to)| *to == original)
            .map(|(from, _)| from)
            .collect()
    }
}

impl FromIterator<(StateId, StateId)> for AbstractionMap {
    fn from_iter<I: IntoIterator<Item = (StateId, StateId)>>(iter: I) -> Self {
        AbstractionMap(iter.into_iter().collect())
    }
}

/// Replaces the state set by `refined`, pulling transitions and initial
/// elements back along `map`: a transition whose source has `k` preimages
/// and whose target has `l` yields `k * l` refined transitions.
pub fn refine_states(
    a: &Automaton,
    refined: &BTreeSet<StateId>,
    map: &AbstractionMap,
) -> Result<Automaton, RuleError> {
    for s in refined {
        if map.get(s).is_none() {
            return Err(RuleError::MapNotTotal(s.clone()));
        }
    }
    for (from, to) in map.iter() {
        if !refined.contains(from) {
            return Err(RuleError::MapDomainExcess(from.clone()));
        }
        if !a.states().contains(to) {
            return Err(RuleError::MapUnknownTarget(from.clone(), to.clone()));
        }
    }
    for original in a.states() {
        if map.preimage(original).is_empty() {
            return Err(RuleError::MapNotSurjective(original.clone()));
        }
    }

    let mut transitions = BTreeSet::new();
    for t in a.transitions() {
        for source in map.preimage(&t.source) {
            for target in map.preimage(&t.target) {
                transitions.insert(Transition::new(
                    source.clone(),
                    t.input.clone(),
                    target.clone(),
                    t.output.clone(),
                ));
            }
        }
    }
    let mut initials = BTreeSet::new();
    for i in a.initials() {
        for start in map.preimage(&i.start) {
            initials.insert(InitialElement::new(start.clone(), i.output.clone()));
        }
    }
    rebuild(a, refined.clone(), a.alphabet().clone(), transitions, initials)
}

/// Enlarges the alphabet, leaving transitions untouched; the new characters
/// are chaotic everywhere. This sits outside the six-rule calculus — the
/// inclusion oracle makes no claim across it — but it is what lets a
/// subclass development start from an inherited automaton with a wider
/// message set.
pub fn extend_alphabet(
    a: &Automaton,
    extra: &BTreeSet<Character>,
) -> Result<Automaton, RuleError> {
    if let Some(existing) = extra.iter().find(|c| a.alphabet().contains(c)) {
        return Err(RuleError::AlreadyInAlphabet(existing.clone()));
    }
    rebuild(
        a,
        a.states().clone(),
        a.alphabet().union(extra).cloned().collect(),
        a.transitions().clone(),
        a.initials().clone(),
    )
}

/// One recorded rule application. Removal payloads name what goes away;
/// the surviving sets are computed against the automaton being refined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RefinementStep {
    RemoveInitials { remove: BTreeSet<InitialElement> },
    RemoveTransitions { remove: BTreeSet<Transition> },
    AddTransitions { add: BTreeSet<Transition> },
    RemoveStates { remove: BTreeSet<StateId> },
    AddStates { add: BTreeSet<StateId> },
    RefineStates { states: BTreeSet<StateId>, map: AbstractionMap },
}

impl RefinementStep {
    /// The step keyword, as written in transcript files.
    pub fn kind(&self) -> &'static str {
        match self {
            RefinementStep::RemoveInitials { .. } => "remove-init",
            RefinementStep::RemoveTransitions { .. } => "remove-trans",
            RefinementStep::AddTransitions { .. } => "add-trans",
            RefinementStep::RemoveStates { .. } => "remove-state",
            RefinementStep::AddStates { .. } => "add-state",
            RefinementStep::RefineStates { .. } => "refine-state",
        }
    }

    /// Applies the step to `a`, checking its side condition.
    pub fn apply(&self, a: &Automaton) -> Result<Automaton, RuleError> {
        match self {
            RefinementStep::RemoveInitials { remove } => {
                if let Some(foreign) = remove.iter().find(|i| !a.initials().contains(i)) {
                    return Err(RuleError::UnknownInitial(foreign.clone()));
                }
                let keep = a.initials().difference(remove).cloned().collect();
                remove_initials(a, &keep)
            }
            RefinementStep::RemoveTransitions { remove } => remove_transitions(a, remove),
            RefinementStep::AddTransitions { add } => add_transitions(a, add),
            RefinementStep::RemoveStates { remove } => {
                if let Some(foreign) = remove.iter().find(|s| !a.states().contains(s)) {
                    return Err(RuleError::UnknownState(foreign.clone()));
                }
                let keep = a.states().difference(remove).cloned().collect();
                remove_states(a, &keep)
            }
            RefinementStep::AddStates { add } => add_states(a, add),
            RefinementStep::RefineStates { states, map } => refine_states(a, states, map),
        }
    }
}

/// A development: a starting automaton, an optional alphabet extension
/// applied before any step, and the rule applications in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    pub start: Automaton,
    pub alphabet_extension: BTreeSet<Character>,
    pub steps: Vec<RefinementStep>,
}

impl Transcript {
    pub fn new(start: Automaton, steps: Vec<RefinementStep>) -> Self {
        Transcript {
            start,
            alphabet_extension: BTreeSet::new(),
            steps,
        }
    }

    pub fn with_alphabet_extension(mut self, extra: BTreeSet<Character>) -> Self {
        self.alphabet_extension = extra;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranscriptError {
    #[error("alphabet extension failed: {0}")]
    Preamble(#[source] RuleError),
    #[error("step {index} ({rule}) failed: {source}")]
    Step {
        index: usize,
        rule: &'static str,
        #[source]
        source: RuleError,
    },
}

/// Everything a successful replay produces: the automaton after the
/// alphabet extension (when there is one) and after every step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Replay {
    pub start: Automaton,
    pub extended: Option<Automaton>,
    pub intermediates: Vec<Automaton>,
}

impl Replay {
    pub fn final_automaton(&self) -> &Automaton {
        self.intermediates
            .last()
            .or(self.extended.as_ref())
            .unwrap_or(&self.start)
    }

    /// Consecutive `(original, refined)` pairs claimed by the calculus, one
    /// per step. The alphabet extension boundary is not such a pair.
    pub fn rule_pairs(&self) -> Vec<(&Automaton, &Automaton)> {
        let mut stages: Vec<&Automaton> = Vec::with_capacity(self.intermediates.len() + 1);
        stages.push(self.extended.as_ref().unwrap_or(&self.start));
        stages.extend(self.intermediates.iter());
        stages.windows(2).map(|w| (w[0], w[1])).collect()
    }
}

/// Replays a transcript from its start, checking every side condition. The
/// first failing step is reported with its index (1-based), rule keyword
/// and violated condition.
pub fn apply_transcript(transcript: &Transcript) -> Result<Replay, TranscriptError> {
    let mut current = transcript.start.clone();
    let extended = if transcript.alphabet_extension.is_empty() {
        None
    } else {
        current = extend_alphabet(&current, &transcript.alphabet_extension)
            .map_err(TranscriptError::Preamble)?;
        Some(current.clone())
    };
    let mut intermediates = Vec::with_capacity(transcript.steps.len());
    for (index, step) in transcript.steps.iter().enumerate() {
        current = step.apply(&current).map_err(|source| TranscriptError::Step {
            index: index + 1,
            rule: step.kind(),
            source,
        })?;
        intermediates.push(current.clone());
    }
    Ok(Replay {
        start: transcript.start.clone(),
        extended,
        intermediates,
    })
}

/// An input word whose output set exposes a behavior of the refined
/// automaton that the original does not allow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub input: Stream,
    pub offending: OutputResult,
}

/// Result of a depth-bounded inclusion check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InclusionVerdict {
    pub holds: bool,
    pub depth: usize,
    pub counterexample: Option<Counterexample>,
}

/// Whether one output result of the original automaton accounts for one
/// result of the refined automaton. A chaotic result allows any
/// continuation of its prefix, so it covers everything that extends it;
/// a complete result covers only its exact twin.
pub fn covers(original: &OutputResult, refined: &OutputResult) -> bool {
    if refined.chaotic {
        original.chaotic && original.prefix.is_prefix_of(&refined.prefix)
    } else if original.chaotic {
        original.prefix.is_prefix_of(&refined.prefix)
    } else {
        original.prefix == refined.prefix
    }
}

struct InclusionScan<'a> {
    original: &'a Automaton,
    refined: &'a Automaton,
    alphabet: Vec<Character>,
}

impl InclusionScan<'_> {
    fn violation_at(&self, len: usize, index: u64) -> Option<Counterexample> {
        let input = words::word_at(&self.alphabet, len, index);
        self.violation_for(input)
    }

    fn violation_for(&self, input: Stream) -> Option<Counterexample> {
        let allowed = output_set(self.original, &input).expect("word is over the shared alphabet");
        let produced = output_set(self.refined, &input).expect("word is over the shared alphabet");
        produced
            .into_iter()
            .find(|candidate| !allowed.iter().any(|a| covers(a, candidate)))
            .map(|offending| Counterexample { input, offending })
    }

    fn first_violation_seq(&self, len: usize) -> Option<Counterexample> {
        (0..words::word_count(self.alphabet.len(), len))
            .find_map(|index| self.violation_at(len, index))
    }

    #[cfg(feature = "parallel")]
    fn first_violation_par(&self, len: usize) -> Option<Counterexample> {
        (0..words::word_count(self.alphabet.len(), len))
            .into_par_iter()
            .find_map_first(|index| self.violation_at(len, index))
    }
}

fn run_inclusion_check(
    original: &Automaton,
    refined: &Automaton,
    depth: usize,
    scan_len: impl Fn(&InclusionScan<'_>, usize) -> Option<Counterexample>,
) -> Result<InclusionVerdict, RuleError> {
    if original.alphabet() != refined.alphabet() {
        return Err(RuleError::AlphabetMismatch);
    }
    let scan = InclusionScan {
        original,
        refined,
        alphabet: original.alphabet().iter().cloned().collect(),
    };
    for len in 0..=depth {
        if let Some(counterexample) = scan_len(&scan, len) {
            return Ok(InclusionVerdict {
                holds: false,
                depth,
                counterexample: Some(counterexample),
            });
        }
    }
    Ok(InclusionVerdict {
        holds: true,
        depth,
        counterexample: None,
    })
}

/// Tier 1, a necessary condition for refinement: for every input word up to
/// `depth` characters, every output result of `refined` must be covered by
/// some result of `original`. Words are scanned shortest first, so a failure
/// reports the least counterexample in canonical word order.
///
/// Distinct words are checked in parallel when the `parallel` feature is
/// enabled (it is by default); verdict and counterexample do not depend on
/// the feature.
pub fn check_refines_bounded(
    original: &Automaton,
    refined: &Automaton,
    depth: usize,
) -> Result<InclusionVerdict, RuleError> {
    #[cfg(feature = "parallel")]
    return run_inclusion_check(original, refined, depth, |scan, len| {
        scan.first_violation_par(len)
    });
    #[cfg(not(feature = "parallel"))]
    run_inclusion_check(original, refined, depth, |scan, len| {
        scan.first_violation_seq(len)
    })
}

/// Single-threaded variant of [`check_refines_bounded`]; same verdict, same
/// counterexample.
pub fn check_refines_bounded_seq(
    original: &Automaton,
    refined: &Automaton,
    depth: usize,
) -> Result<InclusionVerdict, RuleError> {
    run_inclusion_check(original, refined, depth, |scan, len| {
        scan.first_violation_seq(len)
    })
}

/// Pairs `(refined state, original state)` witnessing a step-wise
/// simulation.
pub type SimulationRelation = BTreeSet<(StateId, StateId)>;

fn pair_simulates(
    original: &Automaton,
    refined: &Automaton,
    refined_state: &StateId,
    original_state: &StateId,
    relation: &SimulationRelation,
) -> bool {
    for input in original.alphabet() {
        let refined_moves = refined.outgoing(refined_state, input);
        let original_moves = original.outgoing(original_state, input);
        if refined_moves.is_empty() {
            // refined chaos can only be matched by original chaos
            if !original_moves.is_empty() {
                return false;
            }
            continue;
        }
        if original_moves.is_empty() {
            // original chaos allows any refined behavior on this input
            continue;
        }
        for (refined_target, output) in refined_moves {
            let matched = original_moves.iter().any(|(original_target, allowed)| {
                allowed == output
                    && relation.contains(&(refined_target.clone(), original_target.clone()))
            });
            if !matched {
                return false;
            }
        }
    }
    true
}

fn initials_matched(
    original: &Automaton,
    refined: &Automaton,
    relation: &SimulationRelation,
) -> bool {
    refined.initials().iter().all(|ri| {
        original.initials().iter().any(|oi| {
            oi.output == ri.output && relation.contains(&(ri.start.clone(), oi.start.clone()))
        })
    })
}

/// Tier 2, a sufficient condition for refinement: computes the greatest
/// step-wise simulation between the two state sets and accepts when every
/// refined initial element is matched. A returned relation is a proof
/// object valid at every depth; `None` decides nothing.
pub fn find_simulation(
    original: &Automaton,
    refined: &Automaton,
) -> Result<Option<SimulationRelation>, RuleError> {
    if original.alphabet() != refined.alphabet() {
        return Err(RuleError::AlphabetMismatch);
    }
    let mut relation: SimulationRelation = refined
        .states()
        .iter()
        .flat_map(|r| original.states().iter().map(move |o| (r.clone(), o.clone())))
        .collect();
    loop {
        let pruned: SimulationRelation = relation
            .iter()
            .filter(|(r, o)| pair_simulates(original, refined, r, o, &relation))
            .cloned()
            .collect();
        if pruned.len() == relation.len() {
            break;
        }
        relation = pruned;
    }
    Ok(initials_matched(original, refined, &relation).then_some(relation))
}

/// Verifies that a given relation is a simulation witness, including the
/// initial-element condition. Useful for checking externally constructed
/// relations, such as the composition of two witnesses.
pub fn is_simulation(
    original: &Automaton,
    refined: &Automaton,
    relation: &SimulationRelation,
) -> Result<bool, RuleError> {
    if original.alphabet() != refined.alphabet() {
        return Err(RuleError::AlphabetMismatch);
    }
    for (r, o) in relation {
        refined.check_state(r)?;
        original.check_state(o)?;
    }
    Ok(relation
        .iter()
        .all(|(r, o)| pair_simulates(original, refined, r, o, relation))
        && initials_matched(original, refined, relation))
}
