pub mod game;
pub mod graph;
pub mod meanpayoff;
pub mod parity;
pub mod streett;
pub mod values;

pub use graph::{weighted_graph_nonempty, EdgeLasso, WGraph};
pub use parity::{solve_parity, ParityGame, ParitySolution};
pub use streett::{solve_streett, StreettGame, StreettSolution};
pub use values::{antagonistic_value, cooperative_value, GameValueResult};
