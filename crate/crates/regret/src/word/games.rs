//! Regret games against word strategies: Adam spells a word, Eve resolves the
//! nondeterminism, a deterministic component tracks what the word is worth.

use std::collections::HashMap;

use crate::model::strategy::explore_word;
use crate::model::{Automaton, MooreStrategy, Player};
use crate::rational::Q;
use crate::solvers::{solve_parity, solve_streett, ParityGame, StreettGame};
use crate::word::liminf::DetWeighted;
use crate::word::monitor::{determinize_buchi_to_parity, threshold_monitor, Acceptance, Dpa};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    /// (state, deterministic state)
    Adam(usize, usize),
    /// (state, deterministic state before the letter, letter)
    Eve(usize, usize, usize),
    /// (deterministic state before the letter, transition)
    Mid(usize, usize),
}

/// Game graph shared by the parity and Streett reductions. One round is a
/// letter edge, a transition edge and, with `mid`, a forced edge.
#[derive(Clone, Debug)]
pub struct RoundGame {
    pub kind: Vec<Kind>,
    pub edges: Vec<(usize, usize)>,
    pub out: Vec<Vec<usize>>,
    /// letter edge of an Adam vertex
    pub letter_edge: HashMap<(usize, usize), usize>,
    /// transition edge of an Eve vertex
    pub trans_edge: HashMap<(usize, usize), usize>,
    /// transition carried by each Eve edge
    pub trans_of: Vec<Option<usize>>,
    pub letter_of: Vec<Option<usize>>,
}

impl RoundGame {
    fn build(a: &Automaton, det_init: usize, det_step: impl Fn(usize, usize) -> usize, mid: bool) -> RoundGame {
        let mut g = RoundGame {
            kind: Vec::new(),
            edges: Vec::new(),
            out: Vec::new(),
            letter_edge: HashMap::new(),
            trans_edge: HashMap::new(),
            trans_of: Vec::new(),
            letter_of: Vec::new(),
        };
        let mut ids: HashMap<Kind, usize> = HashMap::new();
        let mut stack = Vec::new();
        let mut vertex = |k: Kind, g: &mut RoundGame, stack: &mut Vec<usize>| -> usize {
            *ids.entry(k).or_insert_with(|| {
                g.kind.push(k);
                g.out.push(Vec::new());
                stack.push(g.kind.len() - 1);
                g.kind.len() - 1
            })
        };
        vertex(Kind::Adam(a.initial(), det_init), &mut g, &mut stack);
        let edge = |g: &mut RoundGame, u: usize, v: usize, l: Option<usize>, t: Option<usize>| -> usize {
            g.edges.push((u, v));
            g.out[u].push(g.edges.len() - 1);
            g.letter_of.push(l);
            g.trans_of.push(t);
            g.edges.len() - 1
        };
        while let Some(v) = stack.pop() {
            match g.kind[v] {
                Kind::Adam(q, d) => {
                    for l in 0..a.letters() {
                        let u = vertex(Kind::Eve(q, d, l), &mut g, &mut stack);
                        let e = edge(&mut g, v, u, Some(l), None);
                        g.letter_edge.insert((v, l), e);
                    }
                }
                Kind::Eve(q, d, l) => {
                    for &t in a.succ(q, l) {
                        let u = if mid {
                            vertex(Kind::Mid(d, t), &mut g, &mut stack)
                        } else {
                            vertex(Kind::Adam(a.transition(t).dst, det_step(d, l)), &mut g, &mut stack)
                        };
                        let e = edge(&mut g, v, u, None, Some(t));
                        g.trans_edge.insert((v, t), e);
                    }
                }
                Kind::Mid(d, t) => {
                    let tr = a.transition(t);
                    let u = vertex(Kind::Adam(tr.dst, det_step(d, tr.sym)), &mut g, &mut stack);
                    edge(&mut g, v, u, None, None);
                }
            }
        }
        g
    }

    pub fn len(&self) -> usize {
        self.kind.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kind.is_empty()
    }

    pub fn owners(&self) -> Vec<Player> {
        self.kind
            .iter()
            .map(|k| if matches!(k, Kind::Eve(..)) { Player::Eve } else { Player::Adam })
            .collect()
    }

    /// Re-expresses a game strategy of Eve as a word strategy on `a`. Memory is
    /// the Adam vertex at the start of the round and the game strategy's memory.
    pub fn lift_eve(&self, a: &Automaton, s: &MooreStrategy) -> MooreStrategy {
        let first = |v: usize, m: usize, l: usize| {
            let e = self.letter_edge[&(v, l)];
            (self.edges[e].1, s.next(m, e))
        };
        explore_word(
            a,
            (0usize, s.initial_memory),
            |_, l, &(v, m)| {
                let (u, m1) = first(v, m, l);
                let e = s.choose(u, m1).expect("winning strategy defined on reachable vertices");
                self.trans_of[e].expect("Eve edges carry transitions")
            },
            |&(v, m), t| {
                let (u, m1) = first(v, m, a.transition(t).sym);
                let e = self.trans_edge[&(u, t)];
                let (mut w, mut m2) = (self.edges[e].1, s.next(m1, e));
                if let Kind::Mid(..) = self.kind[w] {
                    let f = self.out[w][0];
                    m2 = s.next(m2, f);
                    w = self.edges[f].1;
                }
                (w, m2)
            },
        )
    }

    /// Plays positional `adam` against positional `eve` (first edge where
    /// undefined) and returns the letters and transitions of the resulting lasso.
    pub fn play(&self, adam: &[Option<usize>], eve: &[Option<usize>]) -> (Vec<(usize, usize)>, usize) {
        let mut seen: HashMap<usize, usize> = HashMap::new();
        let mut rounds = Vec::new();
        let mut v = 0usize;
        loop {
            if let Some(&i) = seen.get(&v) {
                return (rounds, i);
            }
            seen.insert(v, rounds.len());
            let e = adam[v].unwrap_or(self.out[v][0]);
            let l = self.letter_of[e].expect("letter edge");
            let u = self.edges[e].1;
            let f = eve[u].unwrap_or(self.out[u][0]);
            let t = self.trans_of[f].expect("transition edge");
            let mut w = self.edges[f].1;
            if let Kind::Mid(..) = self.kind[w] {
                w = self.edges[self.out[w][0]].1;
            }
            rounds.push((l, t));
            v = w;
        }
    }
}

/// Position of `v` among the ordered weights: `1 + #{x : x <= v}`, or with
/// `strict`, `1 + #{x : x < v}`.
fn slot(xs: &[Q], v: &Q, strict: bool) -> usize {
    1 + xs.iter().filter(|x| if strict { *x < v } else { *x <= v }).count()
}

pub struct ParityRegretGame {
    pub round: RoundGame,
    pub game: ParityGame,
}

/// Eve wins iff the liminf of her run is at least the word's value minus `r`
/// (strictly more with `strict`). `a` is read with LimInf.
pub fn build_parity_regret_game(a: &Automaton, d: &DetWeighted, r: &Q, strict: bool) -> ParityRegretGame {
    let mut xs = a.weight_set();
    xs.extend(d.delta.iter().map(|x| x.1.clone()));
    xs.sort();
    xs.dedup();
    let round = RoundGame::build(a, d.initial, |s, l| d.step(s, l).0, false);
    let mut game = ParityGame::new(round.owners(), 0);
    for (e, &(u, v)) in round.edges.iter().enumerate() {
        let prio = match round.kind[u] {
            Kind::Adam(_, s) => {
                let x = &d.step(s, round.letter_of[e].unwrap()).1;
                2 * slot(&xs, x, true) + 1
            }
            _ => {
                let w = &a.transition(round.trans_of[e].unwrap()).weight;
                2 * slot(&xs, &(w + r), strict)
            }
        };
        game.add_edge(u, v, prio);
    }
    ParityRegretGame { round, game }
}

pub struct StreettRegretGame {
    pub round: RoundGame,
    pub game: StreettGame,
    pub monitors: Vec<(Q, Dpa)>,
}

/// Eve wins iff for every threshold whose monitor accepts the word her run sees
/// a weight of at least that threshold minus `r` infinitely often (strictly more with `strict`).
pub fn build_streett_regret_game(a: &Automaton, r: &Q, strict: bool) -> StreettRegretGame {
    let xs = a.weight_set();
    let min = xs[0].clone();
    // thresholds met by every weight impose nothing
    let monitors: Vec<(Q, Dpa)> = xs
        .iter()
        .filter(|x| {
            let need = *x - r;
            if strict {
                min <= need
            } else {
                min < need
            }
        })
        .map(|x| (x.clone(), determinize_buchi_to_parity(&threshold_monitor(a, x, Acceptance::Buchi))))
        .collect();
    let mut tuples: Vec<Vec<usize>> = vec![monitors.iter().map(|m| m.1.initial).collect()];
    let mut tuple_ids: HashMap<Vec<usize>, usize> = HashMap::from([(tuples[0].clone(), 0)]);
    let step_table = std::cell::RefCell::new((tuples.clone(), tuple_ids.clone()));
    let step = |s: usize, l: usize| -> usize {
        let mut tab = step_table.borrow_mut();
        let next: Vec<usize> = tab.0[s].iter().zip(&monitors).map(|(&p, m)| m.1.step(p, l).0).collect();
        if let Some(&i) = tab.1.get(&next) {
            return i;
        }
        tab.0.push(next.clone());
        let i = tab.0.len() - 1;
        tab.1.insert(next, i);
        i
    };
    let round = RoundGame::build(a, 0, step, true);
    (tuples, tuple_ids) = step_table.into_inner();
    let _ = tuple_ids;
    let mut game = StreettGame::new(round.owners(), 0);
    for &(u, v) in &round.edges {
        game.add_edge(u, v);
    }
    let n = round.len();
    for (i, (x, dpa)) in monitors.iter().enumerate() {
        for y in dpa.priorities().into_iter().filter(|y| y % 2 == 0) {
            let mut e = vec![false; n];
            let mut f = vec![false; n];
            for (v, k) in round.kind.iter().enumerate() {
                if let Kind::Mid(s, t) = *k {
                    let tr = a.transition(t);
                    let pr = dpa.step(tuples[s][i], tr.sym).1;
                    let need = x - r;
                    let good = if strict { tr.weight > need } else { tr.weight >= need };
                    e[v] = pr == y;
                    f[v] = pr < y || good;
                }
            }
            if e.iter().any(|&b| b) {
                game.pairs.push((e, f));
            }
        }
    }
    StreettRegretGame { round, game, monitors }
}

/// Outcome of a threshold query on a game: Eve's word strategy when she wins,
/// otherwise the rounds of a losing play as `(letter, transition)` with the cycle start.
pub enum GameAnswer {
    Eve(MooreStrategy),
    Adam(Vec<(usize, usize)>, usize),
}

pub fn solve_parity_regret(a: &Automaton, g: &ParityRegretGame) -> GameAnswer {
    let sol = solve_parity(&g.game);
    if sol.eve_wins {
        GameAnswer::Eve(g.round.lift_eve(a, &sol.eve_moore()))
    } else {
        let (rounds, at) = g.round.play(&sol.adam_strategy, &sol.eve_strategy);
        GameAnswer::Adam(rounds, at)
    }
}

pub fn solve_streett_regret(a: &Automaton, g: &StreettRegretGame) -> GameAnswer {
    let sol = solve_streett(&g.game);
    if sol.eve_wins {
        GameAnswer::Eve(g.round.lift_eve(a, &sol.eve_strategy(0)))
    } else {
        let eve = vec![None; g.round.len()];
        let (rounds, at) = g.round.play(&sol.adam_strategy, &eve);
        GameAnswer::Adam(rounds, at)
    }
}
