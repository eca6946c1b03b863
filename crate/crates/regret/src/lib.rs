//! Regret of quantitative games on weighted arenas and automata.
//!
//! Three adversary models are supported: unrestricted Adam ([`regret_any`]),
//! positional Adam ([`regret_memoryless`]) and word strategies ([`word`]).

pub mod error;
pub mod model;
pub mod oracle;
pub mod payoffs;
pub mod rational;
pub mod regret_any;
pub mod regret_memoryless;
pub mod solvers;
pub mod testgen;
pub mod word;

pub use error::{Error, Result};
pub use payoffs::PayoffKind;
pub use rational::Q;
