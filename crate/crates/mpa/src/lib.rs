//! Message processing automata: Mealy-style automata whose transitions
//! consume one input character and emit a finite output stream, modeling
//! objects that communicate by asynchronous message passing.
//!
//! The crate provides
//!
//! * [`stream`] — finite message streams and their operations,
//! * [`automaton`] — the validated automaton value with totality,
//!   reachability and completion queries,
//! * [`semantics`] — executions, chaos-aware output sets and a depth-bounded
//!   behavior tree,
//! * [`refine`] — six checked refinement rules, replayable transcripts and a
//!   two-tier semantic-inclusion oracle,
//! * [`textio`] — the `.mpa`/`.rft` text formats, canonical rendering and
//!   DOT export,
//! * [`catalog`] — the shipped example automata and developments,
//! * [`random`] — random automata for the property suites.
//!
//! With the default `parallel` feature the bounded inclusion oracle checks
//! distinct input words on a rayon pool; disabling the feature yields a
//! fully sequential build with identical results.

pub mod automaton;
pub mod catalog;
pub mod random;
pub mod refine;
pub mod semantics;
pub mod stream;
pub mod textio;
pub mod words;

pub use automaton::{Automaton, AutomatonError, InitialElement, StateId, Transition};
pub use refine::{InclusionVerdict, RefinementStep, Transcript};
pub use semantics::{Execution, OutputResult};
pub use stream::{Character, Stream};
