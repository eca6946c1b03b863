//! Brute-force reference computations. Nothing here calls into `solvers`:
//! these are deliberately separate implementations used to check the solvers.

use std::collections::{HashMap, HashSet};
use std::sync::Mutex;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{record_automaton, Arena, Automaton, Extremum, Player};
use crate::payoffs::{lasso_value, Lasso, LassoWord, PayoffKind};
use crate::word::monitor::{Acceptance, Monitor};
use crate::rational::{lcm_denominators, scaled_i64, Q};

pub const DEFAULT_BUDGET: usize = 5_000_000;

fn cycle_value(p: PayoffKind, ws: &[Q]) -> Q {
    match p {
        PayoffKind::Inf | PayoffKind::LimInf => ws.iter().min().unwrap().clone(),
        PayoffKind::Sup | PayoffKind::LimSup => ws.iter().max().unwrap().clone(),
        _ => ws.iter().sum::<Q>() / Q::from_integer(BigInt::from(ws.len())),
    }
}

/// Vertices mutually reachable with `v`, per vertex, by plain closure.
fn components(n: usize, succ: &[Vec<usize>]) -> Vec<usize> {
    let reach: Vec<Vec<bool>> = (0..n)
        .map(|s| {
            let mut seen = vec![false; n];
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(u) = stack.pop() {
                for &v in &succ[u] {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
            seen
        })
        .collect();
    (0..n).map(|v| (0..n).find(|&u| reach[v][u] && reach[u][v]).unwrap()).collect()
}

/// Value of the finite game that stops as soon as a vertex repeats; the payoff
/// is read on the closed cycle (on the whole path for `Inf`/`Sup`).
pub fn cycle_forming_value(g: &Arena, p: PayoffKind) -> Result<Q> {
    cycle_forming_value_with_budget(g, p, DEFAULT_BUDGET)
}

pub fn cycle_forming_value_with_budget(g: &Arena, p: PayoffKind, budget: usize) -> Result<Q> {
    let succ: Vec<Vec<usize>> = (0..g.len()).map(|v| g.out(v).iter().map(|&e| g.edge(e).dst).collect()).collect();
    let mut cf = CycleForming { g, p, comp: components(g.len(), &succ), memo: HashMap::new(), steps: 0, budget };
    let v = g.initial();
    cf.value(&mut vec![v], &mut Vec::new())
}

struct CycleForming<'a> {
    g: &'a Arena,
    p: PayoffKind,
    comp: Vec<usize>,
    memo: HashMap<(Vec<usize>, Option<Q>), Q>,
    steps: usize,
    budget: usize,
}

impl CycleForming<'_> {
    fn value(&mut self, path: &mut Vec<usize>, edges: &mut Vec<usize>) -> Result<Q> {
        self.steps += 1;
        if self.steps > self.budget {
            return Err(Error::Budget("cycle-forming search".into()));
        }
        let v = *path.last().unwrap();
        // only the part of the path inside the current component can still close a cycle
        let start = path.iter().rposition(|&u| self.comp[u] != self.comp[v]).map_or(0, |i| i + 1);
        let prefix_ext = match self.p {
            PayoffKind::Inf | PayoffKind::Sup if start > 0 => {
                Some(cycle_value(self.p, &edges[..start].iter().map(|&e| self.g.edge(e).weight.clone()).collect::<Vec<_>>()))
            }
            _ => None,
        };
        let mut key_path = vec![path[start]];
        key_path.extend(&edges[start..]);
        let key = (key_path, prefix_ext);
        if let Some(x) = self.memo.get(&key) {
            return Ok(x.clone());
        }
        let mut best: Option<Q> = None;
        for &e in self.g.out(v) {
            let d = self.g.edge(e).dst;
            edges.push(e);
            let val = if let Some(j) = path.iter().position(|&u| u == d) {
                let from = if matches!(self.p, PayoffKind::Inf | PayoffKind::Sup) { 0 } else { j };
                let ws: Vec<Q> = edges[from..].iter().map(|&f| self.g.edge(f).weight.clone()).collect();
                cycle_value(self.p, &ws)
            } else {
                path.push(d);
                let r = self.value(path, edges);
                path.pop();
                r?
            };
            edges.pop();
            best = Some(match (best, self.g.owner(v)) {
                (None, _) => val,
                (Some(b), Player::Eve) => b.max(val),
                (Some(b), Player::Adam) => b.min(val),
            });
        }
        let best = best.unwrap();
        self.memo.insert(key, best.clone());
        Ok(best)
    }
}

/// Simple cycles (as edge lists) of a small multigraph, each listed once.
fn simple_cycles(n: usize, edges: &[(usize, usize, Q)], budget: usize) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut count = 0usize;
    for s in 0..n {
        let mut stack: Vec<(usize, usize)> = vec![(s, 0)];
        let mut path_e: Vec<usize> = Vec::new();
        let mut on = vec![false; n];
        on[s] = true;
        while let Some(&mut (u, ref mut i)) = stack.last_mut() {
            count += 1;
            if count > budget {
                return Err(Error::Budget("simple cycle enumeration".into()));
            }
            // next edge out of u
            let next = (*i..edges.len()).find(|&e| edges[e].0 == u);
            match next {
                None => {
                    stack.pop();
                    on[u] = false;
                    path_e.pop();
                }
                Some(e) => {
                    *i = e + 1;
                    let d = edges[e].1;
                    if d == s {
                        let mut c = path_e.clone();
                        c.push(e);
                        out.push(c);
                    } else if d > s && !on[d] {
                        on[d] = true;
                        path_e.push(e);
                        stack.push((d, 0));
                    }
                }
            }
        }
    }
    Ok(out)
}

fn reachable(n: usize, edges: &[(usize, usize, Q)], from: usize) -> Vec<bool> {
    let mut seen = vec![false; n];
    seen[from] = true;
    let mut changed = true;
    while changed {
        changed = false;
        for (u, v, _) in edges {
            if seen[*u] && !seen[*v] {
                seen[*v] = true;
                changed = true;
            }
        }
    }
    seen
}

/// Best (or worst) prefix-independent payoff over infinite paths from `from`,
/// read off the reachable simple cycles.
fn extremal_play(n: usize, edges: &[(usize, usize, Q)], from: usize, p: PayoffKind, maximize: bool) -> Result<Q> {
    let reach = reachable(n, edges, from);
    let mut best: Option<Q> = None;
    for c in simple_cycles(n, edges, DEFAULT_BUDGET)? {
        if !reach[edges[c[0]].0] {
            continue;
        }
        let ws: Vec<Q> = c.iter().map(|&e| edges[e].2.clone()).collect();
        let v = cycle_value(p, &ws);
        best = Some(match best {
            None => v,
            Some(b) if maximize => b.max(v),
            Some(b) => b.min(v),
        });
    }
    best.ok_or_else(|| Error::invalid("no reachable cycle"))
}

/// Minimal regret over positional Eve strategies, each evaluated by the best
/// deviation at a reachable Eve vertex against the worst continuation.
pub fn brute_regret_any(g: &Arena, p: PayoffKind) -> Result<Q> {
    if !p.is_prefix_independent() {
        return Err(Error::invalid("brute_regret_any needs a prefix-independent payoff"));
    }
    let n = g.len();
    let all: Vec<(usize, usize, Q)> = g.edges().iter().map(|e| (e.src, e.dst, e.weight.clone())).collect();
    let cval: Vec<Q> = (0..n).map(|v| extremal_play(n, &all, v, p, true)).collect::<Result<_>>()?;
    let eve: Vec<usize> = (0..n).filter(|&v| g.owner(v) == Player::Eve).collect();
    let mut idx = vec![0usize; eve.len()];
    let mut best: Option<Q> = None;
    loop {
        let choice: HashMap<usize, usize> = eve.iter().zip(&idx).map(|(&v, &i)| (v, g.out(v)[i])).collect();
        let sub: Vec<(usize, usize, Q)> = g
            .edges()
            .iter()
            .enumerate()
            .filter(|(i, e)| choice.get(&e.src).is_none_or(|c| c == i))
            .map(|(_, e)| (e.src, e.dst, e.weight.clone()))
            .collect();
        let reach = reachable(n, &sub, g.initial());
        let mut reg = Q::from_integer(BigInt::from(0));
        for &u in &eve {
            if !reach[u] {
                continue;
            }
            let worst = extremal_play(n, &sub, u, p, false)?;
            for &f in g.out(u) {
                if f != choice[&u] {
                    reg = reg.max(&cval[g.edge(f).dst] - &worst);
                }
            }
        }
        best = Some(match best {
            None => reg,
            Some(b) => b.min(reg),
        });
        let mut i = 0;
        while i < eve.len() {
            idx[i] += 1;
            if idx[i] < g.out(eve[i]).len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
        if i == eve.len() {
            return Ok(best.unwrap());
        }
    }
}

/// Scaled integer view of an automaton's weights.
struct IntAut {
    /// per (state, letter): (target, weight)
    succ: Vec<Vec<Vec<(usize, i64)>>>,
    weights: Vec<i64>,
    scale: BigInt,
}

impl IntAut {
    fn new(a: &Automaton) -> Self {
        let scale = lcm_denominators(a.transitions().iter().map(|t| &t.weight));
        let succ = (0..a.len())
            .map(|q| {
                (0..a.letters())
                    .map(|l| {
                        a.succ(q, l).iter().map(|&t| (a.transition(t).dst, scaled_i64(&a.transition(t).weight, &scale))).collect()
                    })
                    .collect()
            })
            .collect();
        let mut weights: Vec<i64> = a.transitions().iter().map(|t| scaled_i64(&t.weight, &scale)).collect();
        weights.sort();
        weights.dedup();
        IntAut { succ, weights, scale }
    }

    fn unscale(&self, x: Q) -> Q {
        x / Q::from_integer(self.scale.clone())
    }

    /// Supremum over runs from `q` at word position `pos`.
    fn best(&self, p: PayoffKind, w: &LassoWord, q: usize, pos: usize) -> Q {
        let nq = self.succ.len();
        let len = w.positions();
        let id = |q: usize, i: usize| q * len + i;
        let n = nq * len;
        let mut edges: Vec<(usize, usize, i64)> = Vec::new();
        for s in 0..nq {
            for i in 0..len {
                for &(d, wt) in &self.succ[s][w.letter(i)] {
                    edges.push((id(s, i), id(d, w.next_pos(i)), wt));
                }
            }
        }
        let reach_from = |start: &[usize], keep: &dyn Fn(i64) -> bool| -> Vec<bool> {
            let mut seen = vec![false; n];
            let mut stack: Vec<usize> = start.to_vec();
            for &s in start {
                seen[s] = true;
            }
            let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
            for (k, e) in edges.iter().enumerate() {
                if keep(e.2) {
                    out[e.0].push(k);
                }
            }
            while let Some(u) = stack.pop() {
                for &k in &out[u] {
                    let v = edges[k].1;
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
            seen
        };
        let start = id(q, pos);
        let reach = reach_from(&[start], &|_| true);
        // nodes with an infinite path inside edges kept by `keep`
        let live = |keep: &dyn Fn(i64) -> bool| -> Vec<bool> {
            let mut alive = vec![true; n];
            loop {
                let mut changed = false;
                for v in 0..n {
                    if alive[v] && !edges.iter().any(|e| e.0 == v && keep(e.2) && alive[e.1]) {
                        alive[v] = false;
                        changed = true;
                    }
                }
                if !changed {
                    return alive;
                }
            }
        };
        let on_cycle = |k: usize, keep: &dyn Fn(i64) -> bool| -> bool {
            let (u, v, _) = edges[k];
            reach_from(&[v], keep)[u]
        };
        let desc: Vec<i64> = self.weights.iter().rev().copied().collect();
        let as_q = |x: i64| self.unscale(Q::from_integer(BigInt::from(x)));
        match p {
            PayoffKind::Sup => as_q(edges.iter().filter(|e| reach[e.0]).map(|e| e.2).max().unwrap()),
            PayoffKind::LimSup => as_q(
                (0..edges.len())
                    .filter(|&k| reach[edges[k].0] && on_cycle(k, &|_| true))
                    .map(|k| edges[k].2)
                    .max()
                    .unwrap(),
            ),
            PayoffKind::Inf => {
                for x in desc {
                    let keep = move |y: i64| y >= x;
                    let alive = live(&keep);
                    if alive[start] {
                        return as_q(x);
                    }
                }
                unreachable!("total automaton has a run")
            }
            PayoffKind::LimInf => {
                for x in desc {
                    let keep = move |y: i64| y >= x;
                    let alive = live(&keep);
                    if (0..n).any(|v| reach[v] && alive[v]) {
                        return as_q(x);
                    }
                }
                unreachable!("total automaton has a run")
            }
            PayoffKind::MPInf | PayoffKind::MPSup => self.best_mean(w, q, pos),
        }
    }

    /// Mean payoff through lap matrices: every cycle of the product passes the
    /// first cycle position, so cycles are closed walks of whole laps.
    fn best_mean(&self, w: &LassoWord, q: usize, pos: usize) -> Q {
        let nq = self.succ.len();
        let c0 = w.stem.len();
        let c = w.cycle.len();
        const NEG: i128 = i128::MIN / 4;
        // states at position c0 reachable from (q, pos)
        let mut cur = vec![false; nq];
        cur[q] = true;
        let mut i = pos;
        let mut first = true;
        while first || i != c0 {
            if i == c0 && !first {
                break;
            }
            if i == c0 && first && pos == c0 {
                break;
            }
            first = false;
            let mut nxt = vec![false; nq];
            for s in 0..nq {
                if cur[s] {
                    for &(d, _) in &self.succ[s][w.letter(i)] {
                        nxt[d] = true;
                    }
                }
            }
            cur = nxt;
            i = w.next_pos(i);
        }
        // one lap matrix
        let mut lap = vec![vec![NEG; nq]; nq];
        for s in 0..nq {
            let mut row = vec![NEG; nq];
            row[s] = 0;
            for k in 0..c {
                let l = w.letter(c0 + k);
                let mut nr = vec![NEG; nq];
                for x in 0..nq {
                    if row[x] == NEG {
                        continue;
                    }
                    for &(d, wt) in &self.succ[x][l] {
                        nr[d] = nr[d].max(row[x] + wt as i128);
                    }
                }
                row = nr;
            }
            lap[s] = row;
        }
        // states at c0 reachable after any number of laps
        let mut reach = cur;
        loop {
            let mut changed = false;
            for s in 0..nq {
                if reach[s] {
                    for d in 0..nq {
                        if lap[s][d] != NEG && !reach[d] {
                            reach[d] = true;
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let mut best: Option<Q> = None;
        let mut m = lap.clone();
        for k in 1..=nq {
            for s in 0..nq {
                if reach[s] && m[s][s] != NEG {
                    let v = Q::new(BigInt::from(m[s][s]), BigInt::from((k * c) as i64));
                    if best.as_ref().is_none_or(|b| v > *b) {
                        best = Some(v);
                    }
                }
            }
            let mut nm = vec![vec![NEG; nq]; nq];
            for a in 0..nq {
                for b in 0..nq {
                    if m[a][b] == NEG {
                        continue;
                    }
                    for d in 0..nq {
                        if lap[b][d] != NEG {
                            nm[a][d] = nm[a][d].max(m[a][b] + lap[b][d]);
                        }
                    }
                }
            }
            m = nm;
        }
        self.unscale(best.expect("total automaton has a lasso run"))
    }
}

/// Value of the lasso word: supremum over runs of the payoff.
pub fn lasso_automaton_value(a: &Automaton, p: PayoffKind, w: &LassoWord) -> Q {
    IntAut::new(a).best(p, w, a.initial(), 0)
}

/// Every canonical lasso word with `stem + cycle <= max_len`.
pub fn all_lassos(letters: usize, max_len: usize) -> Vec<LassoWord> {
    let mut set = HashSet::new();
    for total in 1..=max_len {
        let count = letters.pow(total as u32);
        for code in 0..count {
            let mut x = code;
            let word: Vec<usize> = (0..total)
                .map(|_| {
                    let l = x % letters;
                    x /= letters;
                    l
                })
                .collect();
            for s in 0..total {
                set.insert(LassoWord::new(word[..s].to_vec(), word[s..].to_vec()).canonical());
            }
        }
    }
    let mut v: Vec<LassoWord> = set.into_iter().collect();
    v.sort_by(|a, b| (a.positions(), &a.stem, &a.cycle).cmp(&(b.positions(), &b.stem, &b.cycle)));
    v
}

/// Membership of a lasso word in a threshold monitor, by cycle search in the
/// product of the monitor with the word's positions.
pub fn lasso_monitor_accepts(m: &Monitor, w: &LassoWord) -> bool {
    let a = &m.automaton;
    let len = w.positions();
    let n = a.len() * len;
    let id = |q: usize, i: usize| q * len + i;
    // (target, marked)
    let mut succ: Vec<Vec<(usize, bool)>> = vec![Vec::new(); n];
    for q in 0..a.len() {
        for i in 0..len {
            for &t in a.succ(q, w.letter(i)) {
                succ[id(q, i)].push((id(a.transition(t).dst, w.next_pos(i)), m.marked[t]));
            }
        }
    }
    let reach_from = |s: usize, only_marked: bool| {
        let mut seen = vec![false; n];
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(u) = stack.pop() {
            for &(v, mk) in &succ[u] {
                if (mk || !only_marked) && !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    };
    let live = reach_from(id(a.initial(), 0), false);
    match m.kind {
        Acceptance::Buchi => (0..n).filter(|&u| live[u]).any(|u| {
            succ[u].iter().any(|&(v, mk)| mk && reach_from(v, false)[u])
        }),
        Acceptance::CoBuchi => (0..n).filter(|&u| live[u]).any(|u| {
            succ[u].iter().any(|&(v, mk)| mk && reach_from(v, true)[u])
        }),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordBounds {
    pub upper: Q,
    pub lower: Q,
}

/// Letter-driven finite-memory strategy: choice per (state, letter, memory),
/// memory update per (memory, letter).
#[derive(Clone, Debug)]
struct LetterStrategy {
    choice: Vec<usize>,
    update: Vec<usize>,
}

/// Bounds on the word-variant regret: `upper` from the best letter-driven
/// strategy with at most `m` memory states against all lassos up to length
/// `max_len`; `lower` from an adaptive Eve against the same word set, told the
/// word once it is the only one left.
pub fn brute_regret_word(a: &Automaton, p: PayoffKind, m: usize, max_len: usize) -> Result<WordBounds> {
    brute_regret_word_with_budget(a, p, m, max_len, DEFAULT_BUDGET * 40)
}

pub fn brute_regret_word_with_budget(
    a: &Automaton,
    p: PayoffKind,
    m: usize,
    max_len: usize,
    budget: usize,
) -> Result<WordBounds> {
    if m == 0 {
        return Err(Error::invalid("memory bound must be positive"));
    }
    let (aut, p) = match p {
        PayoffKind::Inf => (record_automaton(a, Extremum::Min).automaton, PayoffKind::LimInf),
        PayoffKind::Sup => (record_automaton(a, Extremum::Max).automaton, PayoffKind::LimSup),
        _ => (a.clone(), p),
    };
    let a = &aut;
    let ia = IntAut::new(a);
    let words = all_lassos(a.letters(), max_len);
    let vals: Vec<Q> = words.par_iter().map(|w| ia.best(p, w, a.initial(), 0)).collect();

    // upper bound
    let k = a.letters();
    let slots: Vec<(usize, usize, usize)> = (0..m)
        .flat_map(|mem| (0..a.len()).flat_map(move |q| (0..k).map(move |l| (q, l, mem))))
        .collect();
    let radix: Vec<usize> = slots
        .iter()
        .map(|&(q, l, _)| a.succ(q, l).len())
        .chain(std::iter::repeat_n(m, m * k))
        .collect();
    let total: f64 = radix.iter().map(|&r| r as f64).product();
    if total * words.len() as f64 > budget as f64 {
        return Err(Error::Budget(format!("{total} strategies x {} words", words.len())));
    }
    let total = total as usize;
    let best: Mutex<Option<Q>> = Mutex::new(None);
    (0..total).into_par_iter().for_each(|code| {
        let mut x = code;
        let digits: Vec<usize> = radix
            .iter()
            .map(|&r| {
                let d = x % r;
                x /= r;
                d
            })
            .collect();
        let choice: Vec<usize> = slots.iter().zip(&digits).map(|(&(q, l, _), &d)| a.succ(q, l)[d]).collect();
        let s = LetterStrategy { choice, update: digits[slots.len()..].to_vec() };
        let mut gap: Option<Q> = None;
        for (w, v) in words.iter().zip(&vals) {
            let run = run_value(a, p, &s, w);
            let g = v - run;
            if gap.as_ref().is_none_or(|x| g > *x) {
                gap = Some(g);
                let cur = best.lock().unwrap().clone();
                if cur.is_some_and(|b| *gap.as_ref().unwrap() >= b) {
                    return;
                }
            }
        }
        let gap = gap.unwrap();
        let mut b = best.lock().unwrap();
        if b.as_ref().is_none_or(|x| gap < *x) {
            *b = Some(gap);
        }
    });
    let upper = best.into_inner().unwrap().unwrap();

    // lower bound
    let mut memo: HashMap<(Vec<usize>, usize), Q> = HashMap::new();
    let idx: Vec<usize> = (0..words.len()).collect();
    let mut steps = 0usize;
    let lower = trie_value(a, &ia, p, &words, &vals, &idx, 0, a.initial(), &mut Vec::new(), &mut memo, &mut steps, budget)?;
    Ok(WordBounds { upper, lower })
}

fn run_value(a: &Automaton, p: PayoffKind, s: &LetterStrategy, w: &LassoWord) -> Q {
    let k = a.letters();
    let nq = a.len();
    let mut seen: HashMap<(usize, usize, usize), usize> = HashMap::new();
    let mut ws: Vec<Q> = Vec::new();
    let (mut q, mut mem, mut i) = (a.initial(), 0usize, 0usize);
    loop {
        if let Some(&j) = seen.get(&(q, mem, i)) {
            let cycle = ws.split_off(j);
            return lasso_value(&Lasso::new(ws, cycle), p).expect("non-empty cycle");
        }
        seen.insert((q, mem, i), ws.len());
        let l = w.letter(i);
        let t = a.transition(s.choice[(mem * nq + q) * k + l]);
        ws.push(t.weight.clone());
        q = t.dst;
        mem = s.update[mem * k + l];
        i = w.next_pos(i);
    }
}

#[allow(clippy::too_many_arguments)]
fn trie_value(
    a: &Automaton,
    ia: &IntAut,
    p: PayoffKind,
    words: &[LassoWord],
    vals: &[Q],
    set: &[usize],
    depth: usize,
    q: usize,
    prefix: &mut Vec<usize>,
    memo: &mut HashMap<(Vec<usize>, usize), Q>,
    steps: &mut usize,
    budget: usize,
) -> Result<Q> {
    *steps += 1;
    if *steps > budget {
        return Err(Error::Budget("word trie search".into()));
    }
    if set.len() == 1 {
        let w = &words[set[0]];
        // position of `depth` inside the lasso
        let pos = if depth < w.stem.len() { depth } else { w.stem.len() + (depth - w.stem.len()) % w.cycle.len() };
        return Ok(&vals[set[0]] - ia.best(p, w, q, pos));
    }
    let key = (prefix.clone(), q);
    if let Some(v) = memo.get(&key) {
        return Ok(v.clone());
    }
    let mut by_letter: Vec<Vec<usize>> = vec![Vec::new(); a.letters()];
    for &i in set {
        let w = &words[i];
        let pos = if depth < w.stem.len() { depth } else { w.stem.len() + (depth - w.stem.len()) % w.cycle.len() };
        by_letter[w.letter(pos)].push(i);
    }
    let mut best: Option<Q> = None;
    for (l, sub) in by_letter.iter().enumerate() {
        if sub.is_empty() {
            continue;
        }
        let mut eve: Option<Q> = None;
        prefix.push(l);
        for &t in a.succ(q, l) {
            let v = trie_value(a, ia, p, words, vals, sub, depth + 1, a.transition(t).dst, prefix, memo, steps, budget)?;
            eve = Some(match eve {
                None => v,
                Some(e) => e.min(v),
            });
        }
        prefix.pop();
        let eve = eve.expect("total automaton");
        best = Some(match best {
            None => eve,
            Some(b) => b.max(eve),
        });
    }
    let best = best.unwrap();
    memo.insert(key, best.clone());
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{parse_arena, parse_automaton};
    use crate::rational::{frac, q};

    const G0: &str = include_str!("../../../fixtures/g0.arena");
    const G1: &str = include_str!("../../../fixtures/g1.arena");
    const A0: &str = include_str!("../../../fixtures/a0.aut");

    #[test]
    fn cycle_forming_fixtures() {
        let g1 = parse_arena(G1).unwrap();
        assert_eq!(cycle_forming_value(&g1, PayoffKind::MPInf).unwrap(), q(1));
        let g0 = parse_arena(G0).unwrap();
        assert_eq!(cycle_forming_value(&g0, PayoffKind::MPInf).unwrap(), frac(1, 2));
        let l = parse_arena("arena\nvertex a adam\nedge a a -4/3\ninit a\n").unwrap();
        for p in PayoffKind::ALL {
            assert_eq!(cycle_forming_value(&l, p).unwrap(), frac(-4, 3));
        }
    }

    #[test]
    fn brute_any_fixtures() {
        assert_eq!(brute_regret_any(&parse_arena(G0).unwrap(), PayoffKind::MPInf).unwrap(), q(1));
        assert_eq!(brute_regret_any(&parse_arena(G1).unwrap(), PayoffKind::MPInf).unwrap(), q(1));
        let one = parse_arena("arena\nvertex a eve\nvertex b adam\nedge a b 1\nedge b a 0\nedge b b 2\ninit a\n").unwrap();
        assert_eq!(brute_regret_any(&one, PayoffKind::LimInf).unwrap(), q(0));
    }

    #[test]
    fn lasso_values_on_a0() {
        let a = parse_automaton(A0).unwrap();
        let aa = LassoWord::new(vec![0], vec![0]);
        assert_eq!(lasso_automaton_value(&a, PayoffKind::MPInf, &aa), q(2));
        let bb = LassoWord::new(vec![], vec![1]);
        assert_eq!(lasso_automaton_value(&a, PayoffKind::MPInf, &bb), frac(1, 2));
        assert_eq!(lasso_automaton_value(&a, PayoffKind::LimInf, &bb), frac(1, 2));
        assert_eq!(lasso_automaton_value(&a, PayoffKind::Sup, &bb), q(1));
    }

    #[test]
    fn word_bounds_on_a0() {
        let a = parse_automaton(A0).unwrap();
        // every step reads a letter, so (ab)^w hides each a at v1 and the
        // positional optimum is 1; an unbounded Eve can wait out any lasso bound
        let b = brute_regret_word(&a, PayoffKind::MPInf, 1, 6).unwrap();
        assert_eq!(b, WordBounds { upper: q(1), lower: frac(1, 2) });
        let b = brute_regret_word(&a, PayoffKind::LimInf, 2, 12).unwrap();
        assert_eq!(b, WordBounds { upper: q(1), lower: frac(1, 2) });
        let b = brute_regret_word(&a, PayoffKind::LimSup, 2, 8).unwrap();
        assert_eq!(b, WordBounds { upper: q(0), lower: q(0) });
    }

    #[test]
    fn ab_spoils_always_v2() {
        let a = parse_automaton(A0).unwrap();
        // transitions 0 and 1 are v1 -> v2 on a and b
        let s = crate::model::strategy::explore_word(&a, (), |q, l, _| {
            a.succ(q, l).iter().copied().find(|&t| q != 0 || t <= 1).unwrap()
        }, |_, _| ());
        let ab = LassoWord::new(vec![], vec![0, 1]);
        let run = crate::model::strategy::word_run_lasso(&a, &s, &ab).unwrap();
        assert_eq!(lasso_value(&run, PayoffKind::MPInf).unwrap(), q(0));
        assert_eq!(lasso_automaton_value(&a, PayoffKind::MPInf, &ab), q(1));
    }

    #[test]
    fn lasso_enumeration_is_canonical() {
        let ws = all_lassos(2, 3);
        // a^w, b^w, (ab)^w, a b^w, b a^w, and longer forms
        assert!(ws.iter().all(|w| *w == w.canonical()));
        assert!(ws.contains(&LassoWord::new(vec![], vec![0, 1])));
    }
}
