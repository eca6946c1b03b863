//! Threshold monitors and their determinization into parity automata.

use std::collections::{HashMap, VecDeque};

use crate::model::Automaton;
use crate::payoffs::LassoWord;
use crate::rational::Q;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Acceptance {
    /// infinitely many marked transitions
    Buchi,
    /// eventually only marked transitions
    CoBuchi,
}

/// `a` with the transitions of weight at least `x` marked.
#[derive(Clone, Debug)]
pub struct Monitor {
    pub automaton: Automaton,
    pub marked: Vec<bool>,
    pub kind: Acceptance,
}

pub fn threshold_monitor(a: &Automaton, x: &Q, kind: Acceptance) -> Monitor {
    let marked = a.transitions().iter().map(|t| t.weight >= *x).collect();
    Monitor { automaton: a.clone(), marked, kind }
}

/// Deterministic parity automaton; a word is accepted iff the least priority
/// seen infinitely often is even.
#[derive(Clone, Debug)]
pub struct Dpa {
    pub initial: usize,
    pub letters: usize,
    /// `state * letters + letter` -> (successor, priority)
    pub delta: Vec<(usize, usize)>,
}

impl Dpa {
    pub fn len(&self) -> usize {
        self.delta.len() / self.letters.max(1)
    }

    pub fn is_empty(&self) -> bool {
        self.delta.is_empty()
    }

    pub fn step(&self, s: usize, a: usize) -> (usize, usize) {
        self.delta[s * self.letters + a]
    }

    pub fn priorities(&self) -> Vec<usize> {
        let mut p: Vec<usize> = self.delta.iter().map(|d| d.1).collect();
        p.sort();
        p.dedup();
        p
    }

    pub fn accepts(&self, w: &LassoWord) -> bool {
        let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
        let mut prios = Vec::new();
        let (mut s, mut i) = (self.initial, 0usize);
        loop {
            if let Some(&j) = seen.get(&(s, i)) {
                return prios[j..].iter().min().is_some_and(|p| p % 2 == 0);
            }
            seen.insert((s, i), prios.len());
            let (t, p) = self.step(s, w.letter(i));
            prios.push(p);
            s = t;
            i = w.next_pos(i);
        }
    }
}

/// Safra tree: node `i` has name `i + 1`; names follow age, so parents precede
/// children and older siblings precede younger ones.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Tree {
    /// (parent index or `usize::MAX` for the root, label bitmask)
    nodes: Vec<(usize, u64)>,
}

const ROOT: usize = usize::MAX;

fn post(a: &Automaton, set: u64, l: usize, only_marked: Option<&[bool]>) -> u64 {
    let mut out = 0u64;
    let mut s = set;
    while s != 0 {
        let q = s.trailing_zeros() as usize;
        s &= s - 1;
        for &t in a.succ(q, l) {
            if only_marked.is_none_or(|m| m[t]) {
                out |= 1 << a.transition(t).dst;
            }
        }
    }
    out
}

impl Tree {
    /// Successor tree and the priority of the step.
    fn step(&self, m: &Monitor, l: usize) -> (Tree, usize) {
        let a = &m.automaton;
        let k = self.nodes.len();
        let mut nodes: Vec<(usize, u64)> = self.nodes.iter().map(|&(p, s)| (p, post(a, s, l, None))).collect();
        for i in 0..k {
            let c = post(a, self.nodes[i].1, l, Some(&m.marked));
            if c != 0 {
                nodes.push((i, c));
            }
        }
        // horizontal merge: older siblings keep shared states
        let mut used = vec![0u64; nodes.len()];
        for i in 0..nodes.len() {
            let p = nodes[i].0;
            if p == ROOT {
                continue;
            }
            let lab = nodes[i].1 & nodes[p].1 & !used[p];
            used[p] |= lab;
            nodes[i].1 = lab;
        }
        let mut alive: Vec<bool> = nodes.iter().map(|n| n.1 != 0).collect();
        for i in 0..nodes.len() {
            if nodes[i].0 != ROOT && !alive[nodes[i].0] {
                alive[i] = false;
            }
        }
        // vertical merge
        let mut green = vec![false; nodes.len()];
        for i in 0..nodes.len() {
            if !alive[i] {
                continue;
            }
            let kids: u64 = (i + 1..nodes.len()).filter(|&j| alive[j] && nodes[j].0 == i).map(|j| nodes[j].1).fold(0, |x, y| x | y);
            if kids == nodes[i].1 {
                green[i] = true;
                for j in i + 1..nodes.len() {
                    if nodes[j].0 != ROOT && (nodes[j].0 == i || !alive[nodes[j].0]) {
                        alive[j] = false;
                    }
                }
            }
        }
        let n = a.len();
        let mut prio = 2 * n + 1;
        for i in 0..k {
            if !alive[i] {
                prio = prio.min(2 * (i + 1) - 1);
            } else if green[i] {
                prio = prio.min(2 * (i + 1));
            }
        }
        let mut rename = vec![ROOT; nodes.len()];
        let mut out = Vec::new();
        for i in 0..nodes.len() {
            if alive[i] {
                rename[i] = out.len();
                let p = if nodes[i].0 == ROOT { ROOT } else { rename[nodes[i].0] };
                out.push((p, nodes[i].1));
            }
        }
        (Tree { nodes: out }, prio)
    }
}

/// Safra-tree determinization of a Büchi monitor.
pub fn determinize_buchi_to_parity(m: &Monitor) -> Dpa {
    let a = &m.automaton;
    assert!(a.len() <= 64, "monitor too large");
    let k = a.letters();
    let init = Tree { nodes: vec![(ROOT, 1u64 << a.initial())] };
    let mut ids: HashMap<Tree, usize> = HashMap::from([(init.clone(), 0)]);
    let mut trees = vec![init];
    let mut delta = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let row: Vec<(usize, usize)> = (0..k)
            .map(|l| {
                let (t, p) = trees[i].step(m, l);
                let j = *ids.entry(t.clone()).or_insert_with(|| {
                    trees.push(t);
                    queue.push_back(trees.len() - 1);
                    trees.len() - 1
                });
                (j, p)
            })
            .collect();
        if delta.len() < (i + 1) * k {
            delta.resize((i + 1) * k, (0, 0));
        }
        delta[i * k..(i + 1) * k].copy_from_slice(&row);
    }
    delta.resize(trees.len() * k, (0, 0));
    Dpa { initial: 0, letters: k, delta }
}
