//! One-player analysis of weighted directed graphs: SCCs, optimal lassos,
//! maximum cycle mean and threshold emptiness.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::model::Arena;
use crate::payoffs::PayoffKind;
use crate::rational::{lcm_denominators, scaled_i64, Q};

#[derive(Clone, Debug, Default)]
pub struct WGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize, Q)>,
    pub out: Vec<Vec<usize>>,
}

/// Witness path: `stem` then `cycle` repeated, as edge indices. Every stem vertex
/// is distinct and only the last one touches the cycle, so a positional strategy
/// can follow it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeLasso {
    pub stem: Vec<usize>,
    pub cycle: Vec<usize>,
}

impl WGraph {
    pub fn new(n: usize) -> Self {
        WGraph { n, edges: Vec::new(), out: vec![Vec::new(); n] }
    }

    pub fn add_edge(&mut self, u: usize, v: usize, w: Q) -> usize {
        self.edges.push((u, v, w));
        self.out[u].push(self.edges.len() - 1);
        self.edges.len() - 1
    }

    pub fn from_arena(g: &Arena) -> Self {
        let mut h = WGraph::new(g.len());
        for e in g.edges() {
            h.add_edge(e.src, e.dst, e.weight.clone());
        }
        h
    }

    /// Graph keeping only the edges selected by `keep` (edge ids are preserved
    /// through `map`).
    fn filtered(&self, keep: &dyn Fn(usize) -> bool) -> (WGraph, Vec<usize>) {
        let mut h = WGraph::new(self.n);
        let mut map = Vec::new();
        for (i, (u, v, w)) in self.edges.iter().enumerate() {
            if keep(i) {
                h.add_edge(*u, *v, w.clone());
                map.push(i);
            }
        }
        (h, map)
    }

    pub fn reachable(&self, from: usize) -> Vec<bool> {
        let mut seen = vec![false; self.n];
        seen[from] = true;
        let mut stack = vec![from];
        while let Some(u) = stack.pop() {
            for &e in &self.out[u] {
                let v = self.edges[e].1;
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    }

    /// Strongly connected component id per vertex (Tarjan, iterative).
    pub fn scc(&self) -> (Vec<usize>, usize) {
        let n = self.n;
        let mut index = vec![usize::MAX; n];
        let mut low = vec![0; n];
        let mut on = vec![false; n];
        let mut comp = vec![usize::MAX; n];
        let mut stack = Vec::new();
        let mut next = 0;
        let mut ncomp = 0;
        for root in 0..n {
            if index[root] != usize::MAX {
                continue;
            }
            let mut call: Vec<(usize, usize)> = vec![(root, 0)];
            index[root] = next;
            low[root] = next;
            next += 1;
            stack.push(root);
            on[root] = true;
            while let Some(&mut (u, ref mut i)) = call.last_mut() {
                if *i < self.out[u].len() {
                    let v = self.edges[self.out[u][*i]].1;
                    *i += 1;
                    if index[v] == usize::MAX {
                        index[v] = next;
                        low[v] = next;
                        next += 1;
                        stack.push(v);
                        on[v] = true;
                        call.push((v, 0));
                    } else if on[v] {
                        low[u] = low[u].min(index[v]);
                    }
                } else {
                    call.pop();
                    if let Some(&(p, _)) = call.last() {
                        low[p] = low[p].min(low[u]);
                    }
                    if low[u] == index[u] {
                        loop {
                            let w = stack.pop().unwrap();
                            on[w] = false;
                            comp[w] = ncomp;
                            if w == u {
                                break;
                            }
                        }
                        ncomp += 1;
                    }
                }
            }
        }
        (comp, ncomp)
    }

    /// Edges whose endpoints share a component, i.e. edges lying on some cycle.
    pub fn cyclic_edges(&self) -> Vec<bool> {
        let (comp, _) = self.scc();
        self.edges.iter().map(|(u, v, _)| comp[*u] == comp[*v]).collect()
    }

    /// Shortest path (edge ids) from `from` to any vertex in `goal`, using only
    /// edges allowed by `ok`.
    pub fn path_to(&self, from: usize, goal: &[bool], ok: &dyn Fn(usize) -> bool) -> Option<Vec<usize>> {
        let mut pred: Vec<Option<usize>> = vec![None; self.n];
        let mut seen = vec![false; self.n];
        seen[from] = true;
        let mut q = VecDeque::from([from]);
        while let Some(u) = q.pop_front() {
            if goal[u] {
                let mut path = Vec::new();
                let mut x = u;
                while let Some(e) = pred[x] {
                    path.push(e);
                    x = self.edges[e].0;
                }
                path.reverse();
                return Some(path);
            }
            for &e in &self.out[u] {
                let v = self.edges[e].1;
                if ok(e) && !seen[v] {
                    seen[v] = true;
                    pred[v] = Some(e);
                    q.push_back(v);
                }
            }
        }
        None
    }

    /// A cycle through edge `e` using only edges allowed by `ok`.
    pub fn cycle_through(&self, e: usize, ok: &dyn Fn(usize) -> bool) -> Option<Vec<usize>> {
        let (u, v, _) = &self.edges[e];
        let mut goal = vec![false; self.n];
        goal[*u] = true;
        let back = self.path_to(*v, &goal, ok)?;
        let mut c = vec![e];
        c.extend(back);
        Some(c)
    }

    pub fn lasso_to_cycle(&self, from: usize, cycle: Vec<usize>, ok: &dyn Fn(usize) -> bool) -> Option<EdgeLasso> {
        let mut goal = vec![false; self.n];
        for &e in &cycle {
            goal[self.edges[e].0] = true;
        }
        let stem = self.path_to(from, &goal, ok)?;
        let entry = stem.last().map(|&e| self.edges[e].1).unwrap_or(from);
        let mut cycle = cycle;
        let k = cycle.iter().position(|&e| self.edges[e].0 == entry).unwrap();
        cycle.rotate_left(k);
        Some(EdgeLasso { stem, cycle })
    }

    pub fn lasso_weights(&self, l: &EdgeLasso) -> crate::payoffs::Lasso {
        let w = |v: &Vec<usize>| v.iter().map(|&e| self.edges[e].2.clone()).collect();
        crate::payoffs::Lasso::new(w(&l.stem), w(&l.cycle))
    }

    fn weights_desc(&self) -> Vec<Q> {
        let mut ws: Vec<Q> = self.edges.iter().map(|e| e.2.clone()).collect();
        ws.sort();
        ws.dedup();
        ws.reverse();
        ws
    }

    /// Best lasso from `from` for the payoff when one player controls every
    /// vertex. With `maximize` false the worst lasso is returned.
    pub fn best_lasso(&self, from: usize, p: PayoffKind, maximize: bool) -> Option<(Q, EdgeLasso)> {
        if !maximize {
            let neg = WGraph {
                n: self.n,
                edges: self.edges.iter().map(|(u, v, w)| (*u, *v, -w.clone())).collect(),
                out: self.out.clone(),
            };
            let dual = match p {
                PayoffKind::Inf => PayoffKind::Sup,
                PayoffKind::Sup => PayoffKind::Inf,
                PayoffKind::LimInf => PayoffKind::LimSup,
                PayoffKind::LimSup => PayoffKind::LimInf,
                mp => mp,
            };
            return neg.best_lasso(from, dual, true).map(|(v, l)| (-v, l));
        }
        let all = |_: usize| true;
        match p {
            PayoffKind::MPInf | PayoffKind::MPSup => {
                let (v, cycle) = self.max_cycle_mean(from)?;
                Some((v, self.lasso_to_cycle(from, cycle, &all)?))
            }
            PayoffKind::LimSup => {
                let reach = self.reachable(from);
                let cyc = self.cyclic_edges();
                let e = (0..self.edges.len())
                    .filter(|&e| cyc[e] && reach[self.edges[e].0])
                    .max_by(|&a, &b| self.edges[a].2.cmp(&self.edges[b].2).then(b.cmp(&a)))?;
                let cycle = self.cycle_through(e, &all)?;
                Some((self.edges[e].2.clone(), self.lasso_to_cycle(from, cycle, &all)?))
            }
            PayoffKind::LimInf | PayoffKind::Inf => {
                for x in self.weights_desc() {
                    let ok = |e: usize| self.edges[e].2 >= x;
                    let (h, map) = self.filtered(&ok);
                    let cyc = h.cyclic_edges();
                    let reach = if p == PayoffKind::Inf { h.reachable(from) } else { self.reachable(from) };
                    if let Some(he) = (0..h.edges.len()).find(|&e| cyc[e] && reach[h.edges[e].0]) {
                        let hc = h.cycle_through(he, &|_| true).unwrap();
                        let cycle: Vec<usize> = hc.into_iter().map(|e| map[e]).collect();
                        let value = cycle.iter().map(|&e| self.edges[e].2.clone()).min().unwrap();
                        let lasso = if p == PayoffKind::Inf {
                            self.lasso_to_cycle(from, cycle, &ok)?
                        } else {
                            self.lasso_to_cycle(from, cycle, &all)?
                        };
                        let value = if p == PayoffKind::Inf {
                            lasso.stem.iter().map(|&e| self.edges[e].2.clone()).fold(value, |a, b| a.min(b))
                        } else {
                            value
                        };
                        return Some((value, lasso));
                    }
                }
                None
            }
            PayoffKind::Sup => {
                let reach = self.reachable(from);
                let e = (0..self.edges.len())
                    .filter(|&e| reach[self.edges[e].0])
                    .max_by(|&a, &b| self.edges[a].2.cmp(&self.edges[b].2).then(b.cmp(&a)))?;
                let (a, b, _) = self.edges[e].clone();
                let mut goal = vec![false; self.n];
                goal[a] = true;
                let to_a = self.path_to(from, &goal, &all)?;
                if let Some(cycle) = self.cycle_through(e, &all) {
                    // b reaches a: close the cycle through e
                    let l = self.lasso_to_cycle(from, cycle, &all)?;
                    return Some((self.edges[e].2.clone(), l));
                }
                let _ = to_a;
                // b cannot reach a: go to a, take e, then reach any cycle
                let cyc = self.cyclic_edges();
                let rb = self.reachable(b);
                let ce = (0..self.edges.len()).find(|&c| cyc[c] && rb[self.edges[c].0])?;
                let cycle = self.cycle_through(ce, &all)?;
                let tail = self.lasso_to_cycle(b, cycle, &all)?;
                let mut stem = self.path_to(from, &goal, &all)?;
                stem.push(e);
                stem.extend(tail.stem);
                Some((self.edges[e].2.clone(), EdgeLasso { stem, cycle: tail.cycle }))
            }
        }
    }

    /// Maximum mean over cycles reachable from `from`, with a witness cycle.
    pub fn max_cycle_mean(&self, from: usize) -> Option<(Q, Vec<usize>)> {
        let reach = self.reachable(from);
        let (comp, ncomp) = self.scc();
        let mut best: Option<(Q, Vec<usize>)> = None;
        for c in 0..ncomp {
            let verts: Vec<usize> = (0..self.n).filter(|&v| comp[v] == c && reach[v]).collect();
            if verts.is_empty() {
                continue;
            }
            let inner: Vec<usize> = (0..self.edges.len())
                .filter(|&e| comp[self.edges[e].0] == c && comp[self.edges[e].1] == c)
                .collect();
            if inner.is_empty() {
                continue;
            }
            let (m, cyc) = self.karp(&verts, &inner);
            if best.as_ref().is_none_or(|(b, _)| m > *b) {
                best = Some((m, cyc));
            }
        }
        best
    }

    /// Karp's algorithm on one strongly connected component, then a witness
    /// from the tight subgraph under longest-path potentials.
    fn karp(&self, verts: &[usize], inner: &[usize]) -> (Q, Vec<usize>) {
        let scale = lcm_denominators(inner.iter().map(|&e| &self.edges[e].2));
        let k = verts.len();
        let mut local = vec![usize::MAX; self.n];
        for (i, &v) in verts.iter().enumerate() {
            local[v] = i;
        }
        let es: Vec<(usize, usize, i64)> = inner
            .iter()
            .map(|&e| (local[self.edges[e].0], local[self.edges[e].1], scaled_i64(&self.edges[e].2, &scale)))
            .collect();
        const NEG: i128 = i128::MIN / 4;
        let mut d = vec![vec![NEG; k]; k + 1];
        d[0][0] = 0;
        for i in 1..=k {
            for &(u, v, w) in &es {
                if d[i - 1][u] > NEG {
                    let c = d[i - 1][u] + w as i128;
                    if c > d[i][v] {
                        d[i][v] = c;
                    }
                }
            }
        }
        let mut best: Option<Q> = None;
        for v in 0..k {
            if d[k][v] == NEG {
                continue;
            }
            let mut worst: Option<Q> = None;
            for i in 0..k {
                if d[i][v] == NEG {
                    continue;
                }
                let m = Q::new(BigInt::from(d[k][v] - d[i][v]), BigInt::from((k - i) as i64));
                if worst.as_ref().is_none_or(|x| m < *x) {
                    worst = Some(m);
                }
            }
            if let Some(wv) = worst {
                if best.as_ref().is_none_or(|b| wv > *b) {
                    best = Some(wv);
                }
            }
        }
        let lam = best.expect("component has a cycle");
        // w' = den*w - num*... in scaled units: cycles have sum(w*den - num) <= 0
        let (num, den) = (lam.numer().clone(), lam.denom().clone());
        let wp: Vec<BigInt> = es.iter().map(|&(_, _, w)| BigInt::from(w) * &den - &num).collect();
        let mut pot = vec![BigInt::zero(); k];
        for _ in 0..k {
            let mut changed = false;
            for (i, &(u, v, _)) in es.iter().enumerate() {
                let c = &pot[u] + &wp[i];
                if c > pot[v] {
                    pot[v] = c;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let tight: Vec<bool> = es.iter().enumerate().map(|(i, &(u, v, _))| &pot[u] + &wp[i] == pot[v]).collect();
        // any cycle among tight edges
        let cyc = find_cycle(k, &es.iter().map(|&(u, v, _)| (u, v)).collect::<Vec<_>>(), &tight)
            .expect("tight subgraph has a cycle");
        let cycle = cyc.into_iter().map(|i| inner[i]).collect();
        (lam / Q::from_integer(scale), cycle)
    }
}

/// Some cycle among the allowed edges, as edge positions in `es`.
fn find_cycle(n: usize, es: &[(usize, usize)], ok: &[bool]) -> Option<Vec<usize>> {
    let mut out = vec![Vec::new(); n];
    for (i, &(u, _)) in es.iter().enumerate() {
        if ok[i] {
            out[u].push(i);
        }
    }
    // walk: from every vertex, follow edges until a repeat; any vertex with a
    // tight out-edge leading back eventually. Use colour DFS.
    let mut colour = vec![0u8; n];
    let mut via: Vec<Option<usize>> = vec![None; n];
    for s in 0..n {
        if colour[s] != 0 {
            continue;
        }
        let mut stack: Vec<(usize, usize)> = vec![(s, 0)];
        colour[s] = 1;
        while let Some(&mut (u, ref mut i)) = stack.last_mut() {
            if *i < out[u].len() {
                let e = out[u][*i];
                *i += 1;
                let v = es[e].1;
                if colour[v] == 0 {
                    colour[v] = 1;
                    via[v] = Some(e);
                    stack.push((v, 0));
                } else if colour[v] == 1 {
                    let mut cyc = vec![e];
                    let mut x = u;
                    while x != v {
                        let pe = via[x].unwrap();
                        cyc.push(pe);
                        x = es[pe].0;
                    }
                    cyc.reverse();
                    return Some(cyc);
                }
            } else {
                colour[u] = 2;
                stack.pop();
            }
        }
    }
    None
}

/// Whether some lasso from `from` has payoff at least `bound` (strictly above
/// when `strict`), with a witness.
pub fn weighted_graph_nonempty(
    g: &WGraph,
    from: usize,
    p: PayoffKind,
    bound: &Q,
    strict: bool,
) -> Option<EdgeLasso> {
    let (v, l) = g.best_lasso(from, p, true)?;
    let ok = if strict { v > *bound } else { v >= *bound };
    ok.then_some(l)
}
