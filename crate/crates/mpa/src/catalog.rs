//! Shipped example automata and developments, used throughout the test
//! suite. Each entry is also available as a source file under `examples/`
//! in this crate, and the two representations are held equal by tests.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::automaton::{Automaton, InitialElement, StateId, Transition};
use crate::refine::{AbstractionMap, RefinementStep, Transcript};
use crate::stream::{Character, Stream};

fn ch(token: &str) -> Character {
    Character::new(token).expect("catalog token")
}

fn st(token: &str) -> StateId {
    StateId::new(token).expect("catalog token")
}

fn none() -> Stream {
    Stream::empty()
}

fn emit(token: &str) -> Stream {
    Stream::new(vec![ch(token)])
}

/// The two-state parity tracker: `0` and `L` feed bits, `?` asks whether the
/// number of `L`s seen so far is even (answer `0`) or odd (answer `L`).
pub fn parity() -> Automaton {
    let even = st("even");
    let odd = st("odd");
    Automaton::new(
        "parity",
        [even.clone(), odd.clone()],
        [ch("0"), ch("L"), ch("?")],
        [
            Transition::new(even.clone(), ch("0"), even.clone(), none()),
            Transition::new(even.clone(), ch("L"), odd.clone(), none()),
            Transition::new(even.clone(), ch("?"), even.clone(), emit("0")),
            Transition::new(odd.clone(), ch("0"), odd.clone(), none()),
            Transition::new(odd.clone(), ch("L"), even.clone(), none()),
            Transition::new(odd.clone(), ch("?"), odd.clone(), emit("L")),
        ],
        [InitialElement::new(even, none())],
    )
    .expect("parity automaton is valid")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("buffer data set is empty")]
    EmptyData,
    #[error("buffer capacity must be at least 1")]
    ZeroCapacity,
    #[error("buffer data character {0} is reserved by the state naming scheme")]
    ReservedData(Character),
}

/// Name of the empty-buffer state.
const EMPTY_BUFFER: &str = "ε";

fn buffer_state(word: &[Character]) -> StateId {
    if word.is_empty() {
        return st(EMPTY_BUFFER);
    }
    let name = word
        .iter()
        .map(Character::token)
        .collect::<Vec<_>>()
        .join(".");
    StateId::new(name).expect("joined data tokens form a token")
}

/// A FIFO buffer over `data`, expanded to hold at most `capacity` elements:
/// one state per buffered word. Data characters enqueue (no output), `?`
/// dequeues the oldest element. Two situations are deliberately left
/// chaotic: `?` on an empty buffer and data on a full one.
pub fn bounded_buffer(
    data: &BTreeSet<Character>,
    capacity: usize,
) -> Result<Automaton, CatalogError> {
    if data.is_empty() {
        return Err(CatalogError::EmptyData);
    }
    if capacity == 0 {
        return Err(CatalogError::ZeroCapacity);
    }
    for d in data {
        if d.token() == "?" || d.token() == EMPTY_BUFFER || d.token().contains('.') {
            return Err(CatalogError::ReservedData(d.clone()));
        }
    }

    let mut words: Vec<Vec<Character>> = vec![Vec::new()];
    let mut layer: Vec<Vec<Character>> = vec![Vec::new()];
    for _ in 0..capacity {
        let mut next = Vec::new();
        for word in &layer {
            for d in data {
                let mut longer = word.clone();
                longer.push(d.clone());
                next.push(longer);
            }
        }
        words.extend(next.iter().cloned());
        layer = next;
    }

    let query = ch("?");
    let mut transitions = Vec::new();
    for word in &words {
        if word.len() < capacity {
            for d in data {
                let mut longer = word.clone();
                longer.push(d.clone());
                transitions.push(Transition::new(
                    buffer_state(word),
                    d.clone(),
                    buffer_state(&longer),
                    none(),
                ));
            }
        }
        if !word.is_empty() {
            transitions.push(Transition::new(
                buffer_state(word),
                query.clone(),
                buffer_state(&word[1..]),
                Stream::new(vec![word[0].clone()]),
            ));
        }
    }

    let alphabet = data.iter().cloned().chain([query]);
    Ok(Automaton::new(
        "buffer",
        words.iter().map(|w| buffer_state(w)),
        alphabet,
        transitions,
        [InitialElement::new(buffer_state(&[]), none())],
    )
    .expect("buffer expansion is valid"))
}

/// The development of a selectable screen figure: starting from a bare
/// two-state automaton where only `select` from `Deselected` is described,
/// `deselect` behavior is explored through an error state, made robust, and
/// the initial choice is fixed to `Selected`.
pub fn figure_transcript() -> Transcript {
    let selected = st("Selected");
    let deselected = st("Deselected");
    let error = st("Error");
    let select = ch("select");
    let deselect = ch("deselect");

    let start = Automaton::new(
        "figure",
        [selected.clone(), deselected.clone()],
        [select.clone(), deselect.clone()],
        [Transition::new(
            deselected.clone(),
            select.clone(),
            selected.clone(),
            none(),
        )],
        [
            InitialElement::new(selected.clone(), none()),
            InitialElement::new(deselected.clone(), none()),
        ],
    )
    .expect("figure start is valid");

    let steps = vec![
        RefinementStep::AddStates {
            add: [error.clone()].into_iter().collect(),
        },
        RefinementStep::AddTransitions {
            add: [
                Transition::new(selected.clone(), deselect.clone(), deselected.clone(), none()),
                Transition::new(deselected.clone(), deselect.clone(), error.clone(), none()),
                Transition::new(
                    deselected.clone(),
                    deselect.clone(),
                    deselected.clone(),
                    none(),
                ),
            ]
            .into_iter()
            .collect(),
        },
        RefinementStep::RemoveTransitions {
            remove: [Transition::new(
                deselected.clone(),
                deselect.clone(),
                error.clone(),
                none(),
            )]
            .into_iter()
            .collect(),
        },
        RefinementStep::RemoveStates {
            remove: [error].into_iter().collect(),
        },
        RefinementStep::RemoveInitials {
            remove: [InitialElement::new(deselected, none())].into_iter().collect(),
        },
    ];
    Transcript::new(start, steps)
}

/// Continues the figure development for a subclass whose area can be filled
/// and emptied: the alphabet is widened, fill/empty loops are added, the
/// selected state is split by fill status, and the duplicated transitions
/// are pruned so that `fill` always leads to `SelFilled` and `empty` to
/// `SelEmpty`. A new object starts unfilled.
pub fn figure2d_transcript() -> Transcript {
    let selected = st("Selected");
    let deselected = st("Deselected");
    let sel_filled = st("SelFilled");
    let sel_empty = st("SelEmpty");
    let select = ch("select");
    let deselect = ch("deselect");
    let fill = ch("fill");
    let empty = ch("empty");

    // the inherited figure automaton, i.e. the final stage of
    // `figure_transcript`, under the subclass name
    let start = Automaton::new(
        "figure2d",
        [selected.clone(), deselected.clone()],
        [select.clone(), deselect.clone()],
        [
            Transition::new(deselected.clone(), select.clone(), selected.clone(), none()),
            Transition::new(selected.clone(), deselect.clone(), deselected.clone(), none()),
            Transition::new(
                deselected.clone(),
                deselect.clone(),
                deselected.clone(),
                none(),
            ),
        ],
        [InitialElement::new(selected.clone(), none())],
    )
    .expect("figure2d start is valid");

    let steps = vec![
        RefinementStep::AddTransitions {
            add: [
                Transition::new(selected.clone(), fill.clone(), selected.clone(), none()),
                Transition::new(selected.clone(), empty.clone(), selected.clone(), none()),
            ]
            .into_iter()
            .collect(),
        },
        RefinementStep::RefineStates {
            states: [sel_filled.clone(), sel_empty.clone(), deselected.clone()]
                .into_iter()
                .collect(),
            map: [
                (sel_filled.clone(), selected.clone()),
                (sel_empty.clone(), selected.clone()),
                (deselected.clone(), deselected.clone()),
            ]
            .into_iter()
            .collect::<AbstractionMap>(),
        },
        RefinementStep::RemoveTransitions {
            remove: [
                Transition::new(sel_filled.clone(), fill.clone(), sel_empty.clone(), none()),
                Transition::new(sel_empty.clone(), fill.clone(), sel_empty.clone(), none()),
                Transition::new(sel_empty.clone(), empty.clone(), sel_filled.clone(), none()),
                Transition::new(sel_filled.clone(), empty.clone(), sel_filled.clone(), none()),
            ]
            .into_iter()
            .collect(),
        },
        RefinementStep::RemoveInitials {
            remove: [InitialElement::new(sel_filled, none())].into_iter().collect(),
        },
    ];
    Transcript::new(start, steps)
        .with_alphabet_extension([fill, empty].into_iter().collect())
}

/// An automaton or a development shipped with the crate.
#[derive(Debug, Clone)]
pub enum CatalogArtifact {
    Automaton(Automaton),
    Transcript(Transcript),
}

/// A named catalog entry together with the source file it ships as.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub artifact: CatalogArtifact,
    /// Where the entry comes from, in one line.
    pub provenance: &'static str,
}

/// All shipped entries.
pub fn entries() -> Vec<CatalogEntry> {
    let ab: BTreeSet<Character> = [ch("a"), ch("b")].into_iter().collect();
    vec![
        CatalogEntry {
            name: "parity",
            artifact: CatalogArtifact::Automaton(parity()),
            provenance: "two-state parity tracker over {0, L} with a ? query",
        },
        CatalogEntry {
            name: "buffer_ab_cap3",
            artifact: CatalogArtifact::Automaton(
                bounded_buffer(&ab, 3).expect("shipped buffer parameters are valid"),
            ),
            provenance: "FIFO buffer over {a, b} expanded to capacity 3",
        },
        CatalogEntry {
            name: "figure",
            artifact: CatalogArtifact::Transcript(figure_transcript()),
            provenance: "stepwise development of a selectable screen figure",
        },
        CatalogEntry {
            name: "figure2d",
            artifact: CatalogArtifact::Transcript(figure2d_transcript()),
            provenance: "subclass development adding fill/empty to the figure",
        },
    ]
}
