use std::collections::{BTreeMap, HashMap, VecDeque};
use std::hash::Hash;

use crate::model::arena::{Arena, Player};
use crate::model::automaton::Automaton;
use crate::payoffs::{Lasso, LassoWord};

/// Finite-memory strategy.
///
/// Positions and observations are indices whose meaning depends on the host:
/// on an arena a position is a vertex and choices and observations are edges;
/// on an automaton a position is `state * letters + letter` and choices and
/// observations are transitions. A missing update entry keeps the memory.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MooreStrategy {
    pub memory: usize,
    pub initial_memory: usize,
    pub choice: BTreeMap<(usize, usize), usize>,
    pub update: BTreeMap<(usize, usize), usize>,
}

impl MooreStrategy {
    pub fn positional(choices: impl IntoIterator<Item = (usize, usize)>) -> Self {
        MooreStrategy {
            memory: 1,
            initial_memory: 0,
            choice: choices.into_iter().map(|(p, c)| ((p, 0), c)).collect(),
            update: BTreeMap::new(),
        }
    }

    pub fn choose(&self, pos: usize, mem: usize) -> Option<usize> {
        self.choice.get(&(pos, mem)).copied()
    }

    pub fn next(&self, mem: usize, obs: usize) -> usize {
        self.update.get(&(mem, obs)).copied().unwrap_or(mem)
    }

    pub fn is_positional(&self) -> bool {
        self.memory <= 1
    }
}

/// Builds a Moore strategy for `who` on `g` from an abstract memory, keeping only
/// the (vertex, memory) pairs reachable from the initial vertex.
pub fn explore_arena<M: Clone + Eq + Hash>(
    g: &Arena,
    who: Player,
    init: M,
    choose: impl Fn(usize, &M) -> usize,
    update: impl Fn(&M, usize) -> M,
) -> MooreStrategy {
    explore(
        g.initial(),
        |v| g.owner(v) == who,
        |v| g.out(v).iter().map(|&e| (e, g.edge(e).dst)).collect(),
        init,
        choose,
        update,
    )
}

/// Graph-agnostic version of [`explore_arena`]: `out` lists `(edge, target)`.
pub fn explore<M: Clone + Eq + Hash>(
    start: usize,
    mine: impl Fn(usize) -> bool,
    out: impl Fn(usize) -> Vec<(usize, usize)>,
    init: M,
    choose: impl Fn(usize, &M) -> usize,
    update: impl Fn(&M, usize) -> M,
) -> MooreStrategy {
    let mut ids: HashMap<M, usize> = HashMap::new();
    let mut mems: Vec<M> = vec![init.clone()];
    ids.insert(init, 0);
    let mut s = MooreStrategy { memory: 1, ..Default::default() };
    let mut seen = std::collections::HashSet::new();
    let mut queue = VecDeque::from([(start, 0usize)]);
    seen.insert((start, 0usize));
    while let Some((v, m)) = queue.pop_front() {
        let all = out(v);
        let edges: Vec<(usize, usize)> = if mine(v) {
            let e = choose(v, &mems[m]);
            s.choice.insert((v, m), e);
            all.into_iter().filter(|&(x, _)| x == e).collect()
        } else {
            all
        };
        for (e, d) in edges {
            let nm = update(&mems[m], e);
            let id = match ids.get(&nm) {
                Some(&i) => i,
                None => {
                    let i = mems.len();
                    ids.insert(nm.clone(), i);
                    mems.push(nm);
                    i
                }
            };
            if id != m {
                s.update.insert((m, e), id);
            }
            if seen.insert((d, id)) {
                queue.push_back((d, id));
            }
        }
    }
    s.memory = mems.len();
    s
}

/// Same as [`explore_arena`] for Eve resolving the nondeterminism of an automaton.
pub fn explore_word<M: Clone + Eq + Hash>(
    a: &Automaton,
    init: M,
    choose: impl Fn(usize, usize, &M) -> usize,
    update: impl Fn(&M, usize) -> M,
) -> MooreStrategy {
    let k = a.letters();
    let mut ids: HashMap<M, usize> = HashMap::new();
    let mut mems: Vec<M> = vec![init.clone()];
    ids.insert(init, 0);
    let mut s = MooreStrategy { memory: 1, ..Default::default() };
    let mut seen = std::collections::HashSet::new();
    let mut queue = VecDeque::from([(a.initial(), 0usize)]);
    seen.insert((a.initial(), 0usize));
    while let Some((q, m)) = queue.pop_front() {
        for l in 0..k {
            let t = choose(q, l, &mems[m]);
            s.choice.insert((q * k + l, m), t);
            let nm = update(&mems[m], t);
            let id = match ids.get(&nm) {
                Some(&i) => i,
                None => {
                    let i = mems.len();
                    ids.insert(nm.clone(), i);
                    mems.push(nm);
                    i
                }
            };
            if id != m {
                s.update.insert((m, t), id);
            }
            let d = a.transition(t).dst;
            if seen.insert((d, id)) {
                queue.push_back((d, id));
            }
        }
    }
    s.memory = mems.len();
    s
}

/// Edge sequence of the play of two strategies, split into stem and cycle.
pub fn play_lasso(g: &Arena, eve: &MooreStrategy, adam: &MooreStrategy) -> Option<(Vec<usize>, Vec<usize>)> {
    let mut seen: HashMap<(usize, usize, usize), usize> = HashMap::new();
    let mut edges = Vec::new();
    let (mut v, mut me, mut ma) = (g.initial(), eve.initial_memory, adam.initial_memory);
    loop {
        if let Some(&i) = seen.get(&(v, me, ma)) {
            let cycle = edges.split_off(i);
            return Some((edges, cycle));
        }
        seen.insert((v, me, ma), edges.len());
        let e = match g.owner(v) {
            Player::Eve => eve.choose(v, me)?,
            Player::Adam => adam.choose(v, ma)?,
        };
        if g.edge(e).src != v {
            return None;
        }
        edges.push(e);
        me = eve.next(me, e);
        ma = adam.next(ma, e);
        v = g.edge(e).dst;
    }
}

pub fn edge_weights(g: &Arena, edges: &[usize]) -> Vec<crate::rational::Q> {
    edges.iter().map(|&e| g.edge(e).weight.clone()).collect()
}

/// Run of a word strategy on a lasso word, as a transition lasso.
pub fn word_run(a: &Automaton, s: &MooreStrategy, w: &LassoWord) -> Option<(Vec<usize>, Vec<usize>)> {
    let k = a.letters();
    let mut seen: HashMap<(usize, usize, usize), usize> = HashMap::new();
    let mut ts = Vec::new();
    let (mut q, mut m, mut i) = (a.initial(), s.initial_memory, 0usize);
    loop {
        if let Some(&j) = seen.get(&(q, m, i)) {
            let cycle = ts.split_off(j);
            return Some((ts, cycle));
        }
        seen.insert((q, m, i), ts.len());
        let l = w.letter(i);
        let t = s.choose(q * k + l, m)?;
        let tr = a.transition(t);
        if tr.src != q || tr.sym != l {
            return None;
        }
        ts.push(t);
        m = s.next(m, t);
        q = tr.dst;
        i = w.next_pos(i);
    }
}

pub fn word_run_lasso(a: &Automaton, s: &MooreStrategy, w: &LassoWord) -> Option<Lasso> {
    let (stem, cycle) = word_run(a, s, w)?;
    let wt = |v: Vec<usize>| v.into_iter().map(|t| a.transition(t).weight.clone()).collect();
    Some(Lasso::new(wt(stem), wt(cycle)))
}

/// Checks that every reachable Eve position has a legal choice.
pub fn is_legal_arena(g: &Arena, who: Player, s: &MooreStrategy) -> bool {
    let mut seen = std::collections::HashSet::new();
    let mut stack = vec![(g.initial(), s.initial_memory)];
    while let Some((v, m)) = stack.pop() {
        if !seen.insert((v, m)) {
            continue;
        }
        let es: Vec<usize> = if g.owner(v) == who {
            match s.choose(v, m) {
                Some(e) if g.edge(e).src == v => vec![e],
                _ => return false,
            }
        } else {
            g.out(v).to_vec()
        };
        for e in es {
            stack.push((g.edge(e).dst, s.next(m, e)));
        }
    }
    true
}

/// Checks that the word strategy answers every reachable (state, letter, memory) legally.
pub fn is_legal_word(a: &Automaton, s: &MooreStrategy) -> bool {
    let k = a.letters();
    let mut seen = std::collections::HashSet::new();
    let mut stack = vec![(a.initial(), s.initial_memory)];
    while let Some((q, m)) = stack.pop() {
        if !seen.insert((q, m)) {
            continue;
        }
        for l in 0..k {
            match s.choose(q * k + l, m) {
                Some(t) if a.transition(t).src == q && a.transition(t).sym == l => {
                    stack.push((a.transition(t).dst, s.next(m, t)));
                }
                _ => return false,
            }
        }
    }
    true
}
