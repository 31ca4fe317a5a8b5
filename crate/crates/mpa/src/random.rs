//! Random automata and random valid rule applications, for the randomized
//! suites. Desk scale by default: at most four states, three characters and
//! two-character outputs.

use std::collections::BTreeSet;

use rand::prelude::*;

use crate::automaton::{Automaton, InitialElement, StateId, Transition};
use crate::refine::{AbstractionMap, RefinementStep};
use crate::stream::{Character, Stream};

#[derive(Debug, Clone)]
pub struct GeneratorConfig {
    pub max_states: usize,
    pub max_alphabet: usize,
    pub max_output_len: usize,
    /// Most transitions a single `(state, input)` pair receives.
    pub max_choices: usize,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            max_states: 4,
            max_alphabet: 3,
            max_output_len: 2,
            max_choices: 2,
        }
    }
}

fn random_output(rng: &mut impl Rng, alphabet: &[Character], max_len: usize) -> Stream {
    let len = rng.gen_range(0..=max_len);
    (0..len)
        .map(|_| alphabet.choose(rng).expect("alphabet is nonempty").clone())
        .collect()
}

/// Draws a valid automaton. Chaotic pairs occur naturally: every pair gets
/// zero to `max_choices` transitions.
pub fn random_automaton(rng: &mut impl Rng, config: &GeneratorConfig) -> Automaton {
    let state_count = rng.gen_range(1..=config.max_states);
    let char_count = rng.gen_range(1..=config.max_alphabet);
    let states: Vec<StateId> = (0..state_count)
        .map(|i| StateId::new(format!("s{i}")).unwrap())
        .collect();
    let alphabet: Vec<Character> = (0..char_count)
        .map(|i| Character::new(format!("m{i}")).unwrap())
        .collect();

    let mut transitions = Vec::new();
    for source in &states {
        for input in &alphabet {
            for _ in 0..rng.gen_range(0..=config.max_choices) {
                transitions.push(Transition::new(
                    source.clone(),
                    input.clone(),
                    states.choose(rng).unwrap().clone(),
                    random_output(rng, &alphabet, config.max_output_len),
                ));
            }
        }
    }

    let initial_count = rng.gen_range(1..=state_count);
    let initials: Vec<InitialElement> = states
        .choose_multiple(rng, initial_count)
        .map(|start| {
            InitialElement::new(
                start.clone(),
                random_output(rng, &alphabet, config.max_output_len),
            )
        })
        .collect();

    Automaton::new("rand", states, alphabet, transitions, initials)
        .expect("generated automaton is valid by construction")
}

fn fresh_states(a: &Automaton, count: usize) -> BTreeSet<StateId> {
    let mut fresh = BTreeSet::new();
    let mut index = 0;
    while fresh.len() < count {
        let candidate = StateId::new(format!("t{index}")).unwrap();
        if !a.states().contains(&candidate) {
            fresh.insert(candidate);
        }
        index += 1;
    }
    fresh
}

fn try_step(
    rng: &mut impl Rng,
    a: &Automaton,
    config: &GeneratorConfig,
    kind: u32,
) -> Option<RefinementStep> {
    match kind {
        // drop some initial elements, keeping at least one
        0 => {
            let initials: Vec<&InitialElement> = a.initials().iter().collect();
            if initials.len() < 2 {
                return None;
            }
            let remove_count = rng.gen_range(1..initials.len());
            let remove = initials
                .choose_multiple(rng, remove_count)
                .map(|i| (*i).clone())
                .collect();
            Some(RefinementStep::RemoveInitials { remove })
        }
        // drop alternatives of one pair with several transitions
        1 => {
            let mut by_pair: std::collections::BTreeMap<_, Vec<&Transition>> =
                std::collections::BTreeMap::new();
            for t in a.transitions() {
                by_pair.entry((&t.source, &t.input)).or_default().push(t);
            }
            let crowded: Vec<&Vec<&Transition>> =
                by_pair.values().filter(|v| v.len() >= 2).collect();
            let group = crowded.choose(rng)?;
            let remove_count = rng.gen_range(1..group.len());
            let remove = group
                .choose_multiple(rng, remove_count)
                .map(|t| (*t).clone())
                .collect();
            Some(RefinementStep::RemoveTransitions { remove })
        }
        // describe one or two chaotic pairs explicitly
        2 => {
            let missing: Vec<(StateId, Character)> = a.missing_pairs().into_iter().collect();
            if missing.is_empty() {
                return None;
            }
            let pair_count = rng.gen_range(1..=missing.len().min(2));
            let states: Vec<&StateId> = a.states().iter().collect();
            let alphabet: Vec<Character> = a.alphabet().iter().cloned().collect();
            let mut add = BTreeSet::new();
            for (source, input) in missing.choose_multiple(rng, pair_count) {
                for _ in 0..rng.gen_range(1..=config.max_choices) {
                    add.insert(Transition::new(
                        source.clone(),
                        input.clone(),
                        (*states.choose(rng).unwrap()).clone(),
                        random_output(rng, &alphabet, config.max_output_len),
                    ));
                }
            }
            Some(RefinementStep::AddTransitions { add })
        }
        // drop some unreachable states
        3 => {
            let reachable = a.reachable();
            let unreachable: Vec<&StateId> =
                a.states().iter().filter(|s| !reachable.contains(s)).collect();
            if unreachable.is_empty() {
                return None;
            }
            let remove_count = rng.gen_range(1..=unreachable.len());
            let remove = unreachable
                .choose_multiple(rng, remove_count)
                .map(|s| (*s).clone())
                .collect();
            Some(RefinementStep::RemoveStates { remove })
        }
        // add one or two fresh states
        4 => Some(RefinementStep::AddStates {
            add: fresh_states(a, rng.gen_range(1..=2)),
        }),
        // split every state into one or two refined states
        _ => {
            let mut states = BTreeSet::new();
            let mut map = std::collections::BTreeMap::new();
            for original in a.states() {
                for part in 0..rng.gen_range(1..=2) {
                    let refined = StateId::new(format!("{}.{part}", original.token())).unwrap();
                    states.insert(refined.clone());
                    map.insert(refined, original.clone());
                }
            }
            Some(RefinementStep::RefineStates {
                states,
                map: AbstractionMap::new(map),
            })
        }
    }
}

/// Draws a rule application whose side condition holds on `a`, applies it,
/// and returns the step together with the refined automaton. Always
/// terminates: adding states and splitting states are applicable to every
/// automaton.
pub fn random_application(
    rng: &mut impl Rng,
    a: &Automaton,
    config: &GeneratorConfig,
) -> (RefinementStep, Automaton) {
    loop {
        let kind = rng.gen_range(0..6);
        if let Some(step) = try_step(rng, a, config, kind) {
            let refined = step
                .apply(a)
                .unwrap_or_else(|e| panic!("generator drew an invalid {} step: {e}", step.kind()));
            return (step, refined);
        }
    }
}
