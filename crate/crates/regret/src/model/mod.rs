//! Arenas, automata, strategies and the extremum-recording transform.

pub mod arena;
pub mod automaton;
pub mod strategy;
pub mod transform;

pub use arena::{parse_arena, Arena, ArenaBuilder, Edge, Player};
pub use automaton::{parse_automaton, Automaton, Transition};
pub use strategy::MooreStrategy;
pub use transform::{record_automaton, record_extremum_transform, record_from, Extremum, RecordArena, RecordAutomaton};
