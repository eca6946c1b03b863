//! Parity games with priorities on edges.

use crate::model::{MooreStrategy, Player};
use crate::solvers::game::{full, Game, Strat};

/// Eve wins a play iff the least priority seen infinitely often is odd.
#[derive(Clone, Debug, Default)]
pub struct ParityGame {
    pub owner: Vec<Player>,
    /// `(source, target, priority)`
    pub edges: Vec<(usize, usize, usize)>,
    pub initial: usize,
}

#[derive(Clone, Debug)]
pub struct ParitySolution {
    pub eve_wins: bool,
    pub eve_region: Vec<bool>,
    /// Edge per Eve vertex, winning on `eve_region`.
    pub eve_strategy: Strat,
    /// Edge per Adam vertex, winning outside `eve_region`.
    pub adam_strategy: Strat,
}

impl ParityGame {
    pub fn new(owner: Vec<Player>, initial: usize) -> Self {
        ParityGame { owner, edges: Vec::new(), initial }
    }

    pub fn add_edge(&mut self, u: usize, v: usize, prio: usize) -> usize {
        self.edges.push((u, v, prio));
        self.edges.len() - 1
    }

    pub fn len(&self) -> usize {
        self.owner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.owner.is_empty()
    }
}

impl ParitySolution {
    pub fn eve_moore(&self) -> MooreStrategy {
        MooreStrategy::positional(self.eve_strategy.iter().enumerate().filter_map(|(v, e)| e.map(|e| (v, e))))
    }

    pub fn adam_moore(&self) -> MooreStrategy {
        MooreStrategy::positional(self.adam_strategy.iter().enumerate().filter_map(|(v, e)| e.map(|e| (v, e))))
    }
}

/// Solves by splitting every edge through a fresh vertex carrying its priority.
pub fn solve_parity(pg: &ParityGame) -> ParitySolution {
    let n = pg.len();
    let m = pg.edges.len();
    let top = pg.edges.iter().map(|e| e.2).max().unwrap_or(0) + 1;
    let mut owner = pg.owner.clone();
    owner.extend(std::iter::repeat_n(Player::Eve, m));
    let mut g = Game::with_owners(owner);
    for &(u, _, _) in &pg.edges {
        let id = g.edge_count;
        g.add_edge(u, n + id);
    }
    for (i, &(_, v, _)) in pg.edges.iter().enumerate() {
        g.add_edge(n + i, v);
    }
    let prio: Vec<usize> = (0..n).map(|_| top).chain(pg.edges.iter().map(|e| e.2)).collect();
    let (win, strat) = g.parity(&prio, &full(n + m));
    let mut eve_strategy = vec![None; n];
    let mut adam_strategy = vec![None; n];
    for v in 0..n {
        let s = strat[v].or_else(|| g.out[v].first().map(|x| x.0));
        match pg.owner[v] {
            Player::Eve => eve_strategy[v] = s,
            Player::Adam => adam_strategy[v] = s,
        }
    }
    ParitySolution {
        eve_wins: win[pg.initial],
        eve_region: win[..n].to_vec(),
        eve_strategy,
        adam_strategy,
    }
}
