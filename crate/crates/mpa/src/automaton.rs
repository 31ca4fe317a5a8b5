//! The automaton model: a named 4-tuple of states, alphabet, transition
//! relation and initial elements.
//!
//! Transitions consume one input character and emit a finite output stream;
//! initial elements pair a start state with an output emitted before any
//! input. Construction validates every membership invariant, so a value of
//! type [`Automaton`] is always internally consistent, and all operations on
//! it are pure queries or produce fresh values.
//!
//! A `(state, input)` pair with no transition is deliberately representable:
//! it stands for completely unconstrained ("chaotic") behavior at that pair.
//! [`Automaton::missing_pairs`] enumerates them and
//! [`Automaton::complete_with`] replaces them with explicit transitions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::stream::{check_token, Character, Stream, TokenError};

/// An opaque state name. States compare and order by token, like characters.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(String);

impl StateId {
    pub fn new(token: impl Into<String>) -> Result<Self, TokenError> {
        let token = token.into();
        check_token(&token)?;
        Ok(StateId(token))
    }

    pub fn token(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for StateId {
    type Err = TokenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        StateId::new(s)
    }
}

/// One element of the transition relation: in `source`, consuming `input`
/// moves to `target` while emitting `output`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transition {
    pub source: StateId,
    pub input: Character,
    pub target: StateId,
    pub output: Stream,
}

impl Transition {
    pub fn new(source: StateId, input: Character, target: StateId, output: Stream) -> Self {
        Transition {
            source,
            input,
            target,
            output,
        }
    }
}

impl fmt::Display for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} -> {} / {}",
            self.source, self.input, self.target, self.output
        )
    }
}

/// A start state together with the output emitted before any input arrives.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InitialElement {
    pub start: StateId,
    pub output: Stream,
}

impl InitialElement {
    pub fn new(start: StateId, output: Stream) -> Self {
        InitialElement { start, output }
    }
}

impl fmt::Display for InitialElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} / {}", self.start, self.output)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomatonError {
    #[error("automaton has no states")]
    EmptyStates,
    #[error("automaton has no alphabet characters")]
    EmptyAlphabet,
    #[error("automaton has no initial elements")]
    EmptyInitials,
    #[error("unknown state {0}")]
    UnknownState(StateId),
    #[error("unknown character {0}")]
    UnknownCharacter(Character),
    #[error(transparent)]
    Name(#[from] TokenError),
}

/// Raised by [`Automaton::complete_with`] when the policy does not cover the
/// chaotic pairs exactly, or a policy entry violates a membership invariant.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompletionError {
    #[error("policy misses chaotic pair ({0}, {1})")]
    MissingPair(StateId, Character),
    #[error("policy names pair ({0}, {1}) which already has a transition")]
    UnexpectedPair(StateId, Character),
    #[error(transparent)]
    Invalid(#[from] AutomatonError),
}

/// Completion policy: for each chaotic `(state, input)` pair, the target
/// state and output of the transition to add.
pub type CompletionPolicy = BTreeMap<(StateId, Character), (StateId, Stream)>;

/// A message processing automaton. Immutable after construction; every
/// transition and initial element satisfies the membership invariants.
#[derive(Debug, Clone)]
pub struct Automaton {
    name: String,
    states: BTreeSet<StateId>,
    alphabet: BTreeSet<Character>,
    transitions: BTreeSet<Transition>,
    initials: BTreeSet<InitialElement>,
    // derived: (source, input) -> [(target, output)] in canonical order
    outgoing: BTreeMap<(StateId, Character), Vec<(StateId, Stream)>>,
}

impl PartialEq for Automaton {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.states == other.states
            && self.alphabet == other.alphabet
            && self.transitions == other.transitions
            && self.initials == other.initials
    }
}

impl Eq for Automaton {}

impl Automaton {
    /// Builds and validates an automaton. Duplicate transitions or initial
    /// elements collapse silently (set semantics). Every membership
    /// invariant is checked here, so no partially valid automaton is ever
    /// observable.
    pub fn new(
        name: impl Into<String>,
        states: impl IntoIterator<Item = StateId>,
        alphabet: impl IntoIterator<Item = Character>,
        transitions: impl IntoIterator<Item = Transition>,
        initials: impl IntoIterator<Item = InitialElement>,
    ) -> Result<Self, AutomatonError> {
        let name = name.into();
        check_token(&name)?;
        let states: BTreeSet<StateId> = states.into_iter().collect();
        let alphabet: BTreeSet<Character> = alphabet.into_iter().collect();
        let transitions: BTreeSet<Transition> = transitions.into_iter().collect();
        let initials: BTreeSet<InitialElement> = initials.into_iter().collect();

        if states.is_empty() {
            return Err(AutomatonError::EmptyStates);
        }
        if alphabet.is_empty() {
            return Err(AutomatonError::EmptyAlphabet);
        }
        if initials.is_empty() {
            return Err(AutomatonError::EmptyInitials);
        }

        let check_state = |s: &StateId| {
            states
                .contains(s)
                .then_some(())
                .ok_or_else(|| AutomatonError::UnknownState(s.clone()))
        };
        let check_char = |c: &Character| {
            alphabet
                .contains(c)
                .then_some(())
                .ok_or_else(|| AutomatonError::UnknownCharacter(c.clone()))
        };
        let check_stream = |out: &Stream| out.iter().try_for_each(check_char);

        for t in &transitions {
            check_state(&t.source)?;
            check_state(&t.target)?;
            check_char(&t.input)?;
            check_stream(&t.output)?;
        }
        for i in &initials {
            check_state(&i.start)?;
            check_stream(&i.output)?;
        }

        let mut outgoing: BTreeMap<(StateId, Character), Vec<(StateId, Stream)>> = BTreeMap::new();
        for t in &transitions {
            outgoing
                .entry((t.source.clone(), t.input.clone()))
                .or_default()
                .push((t.target.clone(), t.output.clone()));
        }

        Ok(Automaton {
            name,
            states,
            alphabet,
            transitions,
            initials,
            outgoing,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn states(&self) -> &BTreeSet<StateId> {
        &self.states
    }

    pub fn alphabet(&self) -> &BTreeSet<Character> {
        &self.alphabet
    }

    pub fn transitions(&self) -> &BTreeSet<Transition> {
        &self.transitions
    }

    pub fn initials(&self) -> &BTreeSet<InitialElement> {
        &self.initials
    }

    pub(crate) fn check_state(&self, s: &StateId) -> Result<(), AutomatonError> {
        if self.states.contains(s) {
            Ok(())
        } else {
            Err(AutomatonError::UnknownState(s.clone()))
        }
    }

    pub(crate) fn check_character(&self, c: &Character) -> Result<(), AutomatonError> {
        if self.alphabet.contains(c) {
            Ok(())
        } else {
            Err(AutomatonError::UnknownCharacter(c.clone()))
        }
    }

    /// `(target, output)` choices at `(s, m)` without membership validation;
    /// empty for chaotic pairs. Callers must pass members of `states` and
    /// `alphabet`.
    pub(crate) fn outgoing(&self, s: &StateId, m: &Character) -> &[(StateId, Stream)] {
        self.outgoing
            .get(&(s.clone(), m.clone()))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// True iff some transition leaves `s` on input `m`.
    pub fn enabled(&self, s: &StateId, m: &Character) -> Result<bool, AutomatonError> {
        self.check_state(s)?;
        self.check_character(m)?;
        Ok(!self.outgoing(s, m).is_empty())
    }

    /// The set of `(target, output)` pairs reachable from `s` in one step on
    /// input `m`; empty when the pair is chaotic.
    pub fn successors(
        &self,
        s: &StateId,
        m: &Character,
    ) -> Result<BTreeSet<(StateId, Stream)>, AutomatonError> {
        self.check_state(s)?;
        self.check_character(m)?;
        Ok(self.outgoing(s, m).iter().cloned().collect())
    }

    /// True iff every `(state, input)` pair has at least one transition.
    pub fn is_total(&self) -> bool {
        self.states
            .iter()
            .all(|s| self.alphabet.iter().all(|m| !self.outgoing(s, m).is_empty()))
    }

    /// All `(state, input)` pairs with no transition; empty iff the
    /// automaton is total.
    pub fn missing_pairs(&self) -> BTreeSet<(StateId, Character)> {
        let mut missing = BTreeSet::new();
        for s in &self.states {
            for m in &self.alphabet {
                if self.outgoing(s, m).is_empty() {
                    missing.insert((s.clone(), m.clone()));
                }
            }
        }
        missing
    }

    /// The least set of states containing every initial start state and
    /// closed under transition targets.
    pub fn reachable(&self) -> BTreeSet<StateId> {
        let mut seen: BTreeSet<StateId> =
            self.initials.iter().map(|i| i.start.clone()).collect();
        let mut frontier: Vec<StateId> = seen.iter().cloned().collect();
        while let Some(s) = frontier.pop() {
            for m in &self.alphabet {
                for (target, _) in self.outgoing(&s, m) {
                    if seen.insert(target.clone()) {
                        frontier.push(target.clone());
                    }
                }
            }
        }
        seen
    }

    /// Totalizes the automaton by adding one transition per chaotic pair,
    /// as directed by `policy`. The policy domain must equal
    /// [`Automaton::missing_pairs`] exactly; the result is total and keeps
    /// every existing transition.
    pub fn complete_with(&self, policy: &CompletionPolicy) -> Result<Automaton, CompletionError> {
        let missing = self.missing_pairs();
        for pair in &missing {
            if !policy.contains_key(pair) {
                return Err(CompletionError::MissingPair(pair.0.clone(), pair.1.clone()));
            }
        }
        for pair in policy.keys() {
            if !missing.contains(pair) {
                return Err(CompletionError::UnexpectedPair(
                    pair.0.clone(),
                    pair.1.clone(),
                ));
            }
        }
        let added = policy.iter().map(|((s, m), (target, output))| {
            Transition::new(s.clone(), m.clone(), target.clone(), output.clone())
        });
        let transitions = self.transitions.iter().cloned().chain(added);
        Ok(Automaton::new(
            self.name.clone(),
            self.states.clone(),
            self.alphabet.clone(),
            transitions,
            self.initials.clone(),
        )?)
    }
}
