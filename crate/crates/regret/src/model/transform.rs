use std::collections::{HashMap, VecDeque};

use crate::model::arena::{Arena, Edge, Player};
use crate::model::strategy::{explore_arena, MooreStrategy};
use crate::model::automaton::{Automaton, Transition};
use crate::rational::Q;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Extremum {
    Min,
    Max,
}

impl Extremum {
    pub fn combine(self, a: &Q, b: &Q) -> Q {
        match self {
            Extremum::Min => a.min(b).clone(),
            Extremum::Max => a.max(b).clone(),
        }
    }

    /// Recorded value before any move: `W` for min, `-W` for max.
    pub fn start(self, w: &Q) -> Q {
        match self {
            Extremum::Min => w.clone(),
            Extremum::Max => -w.clone(),
        }
    }
}

/// Arena whose vertices remember the extremum seen so far.
#[derive(Clone, Debug)]
pub struct RecordArena {
    pub arena: Arena,
    /// vertex -> (original vertex, recorded value)
    pub origin: Vec<(usize, Q)>,
    /// edge -> original edge
    pub edge_origin: Vec<usize>,
}

impl RecordArena {
    pub fn lookup(&self, v: usize, x: &Q) -> Option<usize> {
        self.origin.iter().position(|(u, y)| *u == v && y == x)
    }

    /// Record edge leaving record vertex `r` that copies original edge `e`.
    pub fn lift_edge(&self, r: usize, e: usize) -> Option<usize> {
        self.arena.out(r).iter().copied().find(|&f| self.edge_origin[f] == e)
    }

    /// Re-expresses a strategy on the record arena as one on `g`, remembering
    /// the record vertex alongside the strategy's own memory.
    pub fn lift_strategy(&self, g: &Arena, who: Player, s: &MooreStrategy) -> MooreStrategy {
        explore_arena(
            g,
            who,
            (0usize, s.initial_memory),
            |_, &(r, m)| self.edge_origin[s.choose(r, m).expect("strategy defined on reachable record vertex")],
            |&(r, m), e| {
                let f = self.lift_edge(r, e).expect("edge exists in record arena");
                (self.arena.edge(f).dst, s.next(m, f))
            },
        )
    }
}

pub fn record_extremum_transform(g: &Arena, mode: Extremum) -> RecordArena {
    record_from(g, mode, g.initial(), mode.start(g.w_max()))
}

/// Reachable part of the record arena from `(start, x0)`.
pub fn record_from(g: &Arena, mode: Extremum, start: usize, x0: Q) -> RecordArena {
    let mut ids: HashMap<(usize, Q), usize> = HashMap::new();
    let mut origin = vec![(start, x0.clone())];
    ids.insert((start, x0), 0);
    let mut edges = Vec::new();
    let mut edge_origin = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let (v, x) = origin[i].clone();
        for &e in g.out(v) {
            let ed = g.edge(e);
            let m = mode.combine(&x, &ed.weight);
            let key = (ed.dst, m.clone());
            let j = match ids.get(&key) {
                Some(&j) => j,
                None => {
                    let j = origin.len();
                    origin.push(key.clone());
                    ids.insert(key, j);
                    queue.push_back(j);
                    j
                }
            };
            edges.push(Edge { src: i, dst: j, weight: m, label: ed.label.clone() });
            edge_origin.push(e);
        }
    }
    let owners: Vec<_> = origin.iter().map(|(v, _)| g.owner(*v)).collect();
    let vnames: Vec<String> = origin.iter().map(|(v, x)| format!("{}[{}]", g.name(*v), x)).collect();
    let arena = Arena::from_parts(vnames, owners, edges, 0).expect("record arena is total");
    RecordArena { arena, origin, edge_origin }
}

/// Automaton whose states remember the extremum seen so far.
#[derive(Clone, Debug)]
pub struct RecordAutomaton {
    pub automaton: Automaton,
    pub origin: Vec<(usize, Q)>,
    pub trans_origin: Vec<usize>,
}

pub fn record_automaton(a: &Automaton, mode: Extremum) -> RecordAutomaton {
    let x0 = mode.start(a.w_max());
    let mut ids: HashMap<(usize, Q), usize> = HashMap::new();
    let mut origin = vec![(a.initial(), x0.clone())];
    ids.insert((a.initial(), x0), 0);
    let mut trans = Vec::new();
    let mut trans_origin = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let (q, x) = origin[i].clone();
        for l in 0..a.letters() {
            for &t in a.succ(q, l) {
                let tr = a.transition(t);
                let m = mode.combine(&x, &tr.weight);
                let key = (tr.dst, m.clone());
                let j = match ids.get(&key) {
                    Some(&j) => j,
                    None => {
                        let j = origin.len();
                        origin.push(key.clone());
                        ids.insert(key, j);
                        queue.push_back(j);
                        j
                    }
                };
                trans.push(Transition { src: i, sym: l, dst: j, weight: m });
                trans_origin.push(t);
            }
        }
    }
    let names = origin.iter().map(|(q, x)| format!("{}[{}]", a.state_name(*q), x)).collect();
    let automaton = Automaton::from_parts(names, a.alphabet().to_vec(), trans, 0).expect("record automaton is total");
    RecordAutomaton { automaton, origin, trans_origin }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::arena::{parse_arena, ArenaBuilder, Player};
    use crate::payoffs::{lasso_value, Lasso, PayoffKind};
    use crate::rational::{frac, q};

    const G0: &str = include_str!("../../../../fixtures/g0.arena");

    fn lasso_edges(g: &Arena, len: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
        // every edge path from the initial vertex of length <= len that closes a cycle at its end
        let mut out = Vec::new();
        let mut stack: Vec<Vec<usize>> = g.out(g.initial()).iter().map(|&e| vec![e]).collect();
        while let Some(p) = stack.pop() {
            let last = g.edge(*p.last().unwrap()).dst;
            for i in 0..p.len() {
                if g.edge(p[i]).src == last {
                    out.push((p[..i].to_vec(), p[i..].to_vec()));
                }
            }
            if p.len() < len {
                for &e in g.out(last) {
                    let mut q = p.clone();
                    q.push(e);
                    stack.push(q);
                }
            }
        }
        out
    }

    fn image(r: &RecordArena, path: &[usize]) -> Vec<usize> {
        let mut v = 0usize;
        let mut res = Vec::new();
        for &e in path {
            let ie = (0..r.arena.edges().len())
                .find(|&i| r.arena.edge(i).src == v && r.edge_origin[i] == e)
                .unwrap();
            res.push(ie);
            v = r.arena.edge(ie).dst;
        }
        res
    }

    fn check(g: &Arena, mode: Extremum, p: PayoffKind, lp: PayoffKind) {
        let r = record_extremum_transform(g, mode);
        for (stem, cycle) in lasso_edges(g, 6) {
            let w = |es: &[usize]| es.iter().map(|&e| g.edge(e).weight.clone()).collect::<Vec<_>>();
            let orig = lasso_value(&Lasso::new(w(&stem), w(&cycle)), p).unwrap();
            // unroll the cycle enough times for the record to stabilise
            let mut path = stem.clone();
            for _ in 0..=g.edges().len() {
                path.extend_from_slice(&cycle);
            }
            let im = image(&r, &path);
            let k = cycle.len();
            let (s, c) = im.split_at(im.len() - k);
            let rw = |es: &[usize]| es.iter().map(|&e| r.arena.edge(e).weight.clone()).collect::<Vec<_>>();
            assert_eq!(r.arena.edge(c[0]).src, r.arena.edge(*c.last().unwrap()).dst);
            let img = lasso_value(&Lasso::new(rw(s), rw(c)), lp).unwrap();
            assert_eq!(orig, img);
        }
    }

    #[test]
    fn g0_inf_and_sup_preserved() {
        let g = parse_arena(G0).unwrap();
        check(&g, Extremum::Min, PayoffKind::Inf, PayoffKind::LimInf);
        check(&g, Extremum::Max, PayoffKind::Sup, PayoffKind::LimSup);
    }

    #[test]
    fn g0_v3_loop() {
        let g = parse_arena(G0).unwrap();
        let r = record_extremum_transform(&g, Extremum::Min);
        let v3 = g.index_of("v3").unwrap();
        assert!(r.lookup(v3, &frac(1, 2)).is_some());
        assert_eq!(r.origin[0], (0, q(2)));
    }

    #[test]
    fn constant_loop_isomorphic() {
        let mut b = ArenaBuilder::new();
        let a = b.vertex("a", Player::Eve);
        b.edge(a, a, q(3));
        b.initial(a);
        let g = b.build().unwrap();
        let r = record_extremum_transform(&g, Extremum::Min);
        assert_eq!(r.arena.len(), 1);
        assert_eq!(r.arena.edge(0).weight, q(3));
    }

    #[test]
    fn two_edge_path() {
        let mut b = ArenaBuilder::new();
        let x = b.vertex("x", Player::Eve);
        let y = b.vertex("y", Player::Eve);
        let z = b.vertex("z", Player::Eve);
        b.edge(x, y, q(3));
        b.edge(y, z, q(1));
        b.edge(z, z, q(1));
        b.initial(x);
        let g = b.build().unwrap();
        let r = record_extremum_transform(&g, Extremum::Min);
        let e1 = (0..r.arena.edges().len()).find(|&i| r.edge_origin[i] == 1).unwrap();
        assert_eq!(r.arena.edge(e1).weight, q(1));
        assert!(r.arena.len() <= g.len() * (g.weight_set().len() + 1));
    }
}
