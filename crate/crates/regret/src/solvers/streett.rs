//! Streett games, solved by recursive dominion decomposition.
//!
//! Adam (the Rabin player) has positional strategies. Eve's strategy cycles
//! through pair modes; each mode splits her region into the attractor to the
//! pair's `F` set and a stack of layers, each solved recursively without the pair.

use crate::model::strategy::explore;
use crate::model::{MooreStrategy, Player};
use crate::solvers::game::{and, any, full, minus, Game, Mask, Strat};

#[derive(Clone, Debug, Default)]
pub struct StreettGame {
    pub owner: Vec<Player>,
    pub edges: Vec<(usize, usize)>,
    /// `(E, F)`: visiting `E` infinitely often requires visiting `F` infinitely often.
    pub pairs: Vec<(Mask, Mask)>,
    pub initial: usize,
}

impl StreettGame {
    pub fn new(owner: Vec<Player>, initial: usize) -> Self {
        StreettGame { owner, edges: Vec::new(), pairs: Vec::new(), initial }
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> usize {
        self.edges.push((u, v));
        self.edges.len() - 1
    }

    pub fn len(&self) -> usize {
        self.owner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.owner.is_empty()
    }

    fn game(&self) -> Game {
        let mut g = Game::with_owners(self.owner.clone());
        for &(u, v) in &self.edges {
            g.add_edge(u, v);
        }
        g
    }
}

#[derive(Clone, Debug)]
struct Layer {
    core: Mask,
    attr_str: Strat,
    sub: Node,
}

#[derive(Clone, Debug)]
struct Mode {
    pair: usize,
    af_str: Strat,
    /// layer index per vertex, `AF` for the attractor to `F`
    layer_of: Vec<usize>,
    layers: Vec<Layer>,
}

const AF: usize = usize::MAX;

#[derive(Clone, Debug)]
struct Node {
    region: Mask,
    modes: Vec<Mode>,
}

#[derive(Clone, Debug)]
pub struct StreettSolution {
    pub eve_wins: bool,
    pub eve_region: Mask,
    /// Positional, winning for Adam outside `eve_region`.
    pub adam_strategy: Strat,
    game: Game,
    ends: Vec<(usize, usize)>,
    pairs: Vec<(Mask, Mask)>,
    tree: Node,
}

pub fn solve_streett(sg: &StreettGame) -> StreettSolution {
    let game = sg.game();
    let all: Vec<usize> = (0..sg.pairs.len()).collect();
    let mut adam = vec![None; sg.len()];
    let tree = {
        let solver = Solver { g: &game, pairs: &sg.pairs };
        let (_, tree) = solver.solve(&full(sg.len()), &all, &mut adam);
        tree
    };
    for v in 0..sg.len() {
        if adam[v].is_none() && sg.owner[v] == Player::Adam {
            adam[v] = game.out[v].first().map(|x| x.0);
        }
    }
    StreettSolution {
        eve_wins: tree.region[sg.initial],
        eve_region: tree.region.clone(),
        adam_strategy: adam,
        game,
        ends: sg.edges.clone(),
        pairs: sg.pairs.clone(),
        tree,
    }
}

struct Solver<'a> {
    g: &'a Game,
    pairs: &'a [(Mask, Mask)],
}

impl Solver<'_> {
    /// Returns Adam's region inside `g0` and Eve's strategy tree on the rest.
    fn solve(&self, g0: &Mask, pairs: &[usize], adam: &mut Strat) -> (Mask, Node) {
        let n = self.g.len();
        let mut g = g0.clone();
        let mut wr = vec![false; n];
        'outer: loop {
            let live: Vec<usize> = pairs.iter().copied().filter(|&j| any(&and(&self.pairs[j].0, &g))).collect();
            let mut modes = Vec::new();
            for &j in &live {
                let (e_j, f_j) = &self.pairs[j];
                let (af, af_str) = self.g.attractor(Player::Eve, &and(f_j, &g), &g);
                let rest: Vec<usize> = live.iter().copied().filter(|&i| i != j).collect();
                let mut x = minus(&g, &af);
                let mut layer_of: Vec<usize> = (0..n).map(|v| if af[v] { AF } else { 0 }).collect();
                let mut layers = Vec::new();
                while any(&x) {
                    let (y, y_str) = self.g.attractor(Player::Adam, &and(e_j, &x), &x);
                    let z = minus(&x, &y);
                    let mut sub_adam = vec![None; n];
                    let (u, sub) = self.solve(&z, &rest, &mut sub_adam);
                    let core = minus(&z, &u);
                    if !any(&core) {
                        // x is an Adam dominion
                        for v in 0..n {
                            if !x[v] || self.g.owner[v] != Player::Adam {
                                continue;
                            }
                            adam[v] = if u[v] {
                                sub_adam[v]
                            } else if e_j[v] {
                                self.g.stay(v, &x)
                            } else {
                                y_str[v]
                            };
                        }
                        let (d, d_str) = self.g.attractor(Player::Adam, &x, &g);
                        for v in 0..n {
                            if d[v] && !x[v] && self.g.owner[v] == Player::Adam {
                                adam[v] = d_str[v];
                            }
                        }
                        for v in 0..n {
                            wr[v] |= d[v];
                        }
                        g = minus(&g, &d);
                        continue 'outer;
                    }
                    let (l, attr_str) = self.g.attractor(Player::Eve, &core, &x);
                    for v in 0..n {
                        if l[v] {
                            layer_of[v] = layers.len();
                        }
                    }
                    layers.push(Layer { core, attr_str, sub });
                    x = minus(&x, &l);
                }
                modes.push(Mode { pair: j, af_str, layer_of, layers });
            }
            return (wr, Node { region: g, modes });
        }
    }
}

/// Memory: the current mode at each nesting level entered so far. Layers are
/// read off the vertices, so only modes are remembered.
type Mem = Vec<usize>;

impl Node {
    fn fresh(&self, mode: usize, v: usize) -> Mem {
        if self.modes.is_empty() {
            return Vec::new();
        }
        let m = &self.modes[mode];
        let layer = m.layer_of[v];
        let mut mem = vec![mode];
        if layer != AF && m.layers[layer].core[v] {
            mem.extend(m.layers[layer].sub.fresh(0, v));
        }
        mem
    }

    fn update(&self, pairs: &[(Mask, Mask)], mem: &[usize], u: usize, v: usize) -> Mem {
        if self.modes.is_empty() {
            return Vec::new();
        }
        let mode = mem[0];
        let m = &self.modes[mode];
        if pairs[m.pair].1[v] {
            return self.fresh((mode + 1) % self.modes.len(), v);
        }
        let (lu, lv) = (m.layer_of[u], m.layer_of[v]);
        if lu != lv || lv == AF || !m.layers[lv].core[v] {
            return self.fresh(mode, v);
        }
        let l = &m.layers[lv];
        let mut out = vec![mode];
        if l.core[u] {
            out.extend(l.sub.update(pairs, &mem[1..], u, v));
        } else {
            out.extend(l.sub.fresh(0, v));
        }
        out
    }

    fn choose(&self, g: &Game, pairs: &[(Mask, Mask)], mem: &[usize], v: usize) -> Option<usize> {
        if self.modes.is_empty() {
            return g.stay(v, &self.region);
        }
        let m = &self.modes[mem[0]];
        let layer = m.layer_of[v];
        let pick = if layer == AF {
            if pairs[m.pair].1[v] {
                None
            } else {
                m.af_str[v]
            }
        } else {
            let l = &m.layers[layer];
            if l.core[v] {
                l.sub.choose(g, pairs, &mem[1..], v)
            } else {
                l.attr_str[v]
            }
        };
        pick.or_else(|| g.stay(v, &self.region))
    }
}

impl StreettSolution {
    /// Eve's finite-memory strategy from `from`, which must lie in her region.
    /// Choices and observations are edge indices of the game.
    pub fn eve_strategy(&self, from: usize) -> MooreStrategy {
        let g = &self.game;
        let init = self.tree.fresh(0, from);
        explore(
            from,
            |v| g.owner[v] == Player::Eve,
            |v| g.out[v].clone(),
            init,
            |v, m: &Mem| self.tree.choose(g, &self.pairs, m, v).expect("Eve vertex without move"),
            |m, e| {
                let (u, v) = self.ends[e];
                self.tree.update(&self.pairs, m, u, v)
            },
        )
    }

    pub fn adam_moore(&self) -> MooreStrategy {
        MooreStrategy::positional(self.adam_strategy.iter().enumerate().filter_map(|(v, e)| e.map(|e| (v, e))))
    }
}

/// One-player check: can the controller of every vertex in `allowed` edges
/// build an infinite path from `from` satisfying all pairs?
pub fn one_player_streett(
    n: usize,
    edges: &[(usize, usize)],
    pairs: &[(Mask, Mask)],
    from: usize,
) -> bool {
    let g = {
        let mut w = crate::solvers::graph::WGraph::new(n);
        for &(u, v) in edges {
            w.add_edge(u, v, crate::rational::q(0));
        }
        w
    };
    let reach = g.reachable(from);
    good_scc(&g, &reach, pairs)
}

fn good_scc(g: &crate::solvers::graph::WGraph, alive: &[bool], pairs: &[(Mask, Mask)]) -> bool {
    let n = g.n;
    let mut h = crate::solvers::graph::WGraph::new(n);
    for (u, v, w) in &g.edges {
        if alive[*u] && alive[*v] {
            h.add_edge(*u, *v, w.clone());
        }
    }
    let (comp, ncomp) = h.scc();
    let cyc = h.cyclic_edges();
    for c in 0..ncomp {
        let members: Vec<bool> = (0..n).map(|v| alive[v] && comp[v] == c).collect();
        let nontrivial = h.edges.iter().enumerate().any(|(i, e)| cyc[i] && members[e.0]);
        if !nontrivial {
            continue;
        }
        let bad: Vec<usize> = (0..pairs.len())
            .filter(|&j| any(&and(&pairs[j].0, &members)) && !any(&and(&pairs[j].1, &members)))
            .collect();
        if bad.is_empty() {
            return true;
        }
        let mut keep = members.clone();
        for j in bad {
            keep = minus(&keep, &pairs[j].0);
        }
        if good_scc(&h, &keep, pairs) {
            return true;
        }
    }
    false
}

/// Whether Adam wins the Rabin condition in a one-player graph from `from`.
pub fn one_player_rabin(n: usize, edges: &[(usize, usize)], pairs: &[(Mask, Mask)], from: usize) -> bool {
    let mut w = crate::solvers::graph::WGraph::new(n);
    for &(u, v) in edges {
        w.add_edge(u, v, crate::rational::q(0));
    }
    let reach = w.reachable(from);
    pairs.iter().any(|(e, f)| {
        let mut h = crate::solvers::graph::WGraph::new(n);
        for &(u, v) in edges {
            if reach[u] && !f[u] && !f[v] {
                h.add_edge(u, v, crate::rational::q(0));
            }
        }
        let cyc = h.cyclic_edges();
        h.edges.iter().enumerate().any(|(i, x)| cyc[i] && e[x.0])
    })
}
