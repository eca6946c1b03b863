//! Word strategies with a fixed memory bound: exact regret of a given strategy
//! and enumeration of all strategies up to a memory size.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::model::strategy::word_run_lasso;
use crate::model::{Automaton, Extremum, MooreStrategy};
use crate::oracle::lasso_automaton_value;
use crate::payoffs::{lasso_value, LassoWord, PayoffKind};
use crate::rational::Q;
use crate::solvers::WGraph;
use crate::word::Spoiler;

pub const DEFAULT_SEARCH_BUDGET: usize = 200_000;

/// Synchronous product of an unconstrained run and the run of `sigma` on the same word.
struct Product {
    graph: WGraph,
    letter: Vec<usize>,
    alt: Vec<Q>,
    mine: Vec<Q>,
}

type Node = (usize, usize, usize, Option<Q>, Option<Q>);

fn product(a: &Automaton, p: PayoffKind, sigma: &MooreStrategy) -> Result<Product> {
    let k = a.letters();
    let rec = match p {
        PayoffKind::Inf => Some(Extremum::Min),
        PayoffKind::Sup => Some(Extremum::Max),
        _ => None,
    };
    let x0 = rec.map(|m| m.start(a.w_max()));
    let start: Node = (a.initial(), a.initial(), sigma.initial_memory, x0.clone(), x0);
    let mut ids: HashMap<Node, usize> = HashMap::from([(start.clone(), 0)]);
    let mut nodes = vec![start];
    let mut edges = Vec::new();
    let (mut letter, mut alt, mut mine) = (Vec::new(), Vec::new(), Vec::new());
    let mut i = 0;
    while i < nodes.len() {
        let (qa, qs, m, xa, xs) = nodes[i].clone();
        for l in 0..k {
            let s = sigma
                .choose(qs * k + l, m)
                .ok_or_else(|| Error::invalid(format!("strategy undefined at {} on {}", a.state_name(qs), a.alphabet()[l])))?;
            let ts = a.transitions().get(s).filter(|t| t.src == qs && t.sym == l).ok_or_else(|| {
                Error::invalid(format!("strategy picks an illegal transition at {} on {}", a.state_name(qs), a.alphabet()[l]))
            })?;
            let m2 = sigma.next(m, s);
            for &t in a.succ(qa, l) {
                let ta = a.transition(t);
                let (wa, ws, ya, ys) = match rec {
                    Some(e) => {
                        let ya = e.combine(xa.as_ref().unwrap(), &ta.weight);
                        let ys = e.combine(xs.as_ref().unwrap(), &ts.weight);
                        (ya.clone(), ys.clone(), Some(ya), Some(ys))
                    }
                    None => (ta.weight.clone(), ts.weight.clone(), None, None),
                };
                let key: Node = (ta.dst, ts.dst, m2, ya, ys);
                let j = *ids.entry(key.clone()).or_insert_with(|| {
                    nodes.push(key);
                    nodes.len() - 1
                });
                edges.push((i, j, &wa - &ws));
                letter.push(l);
                alt.push(wa);
                mine.push(ws);
            }
        }
        i += 1;
    }
    let mut graph = WGraph::new(nodes.len());
    for (u, v, w) in edges {
        graph.add_edge(u, v, w);
    }
    Ok(Product { graph, letter, alt, mine })
}

/// Subgraph of the edges allowed by `keep`; returns it with the original edge ids.
fn sub(g: &WGraph, keep: impl Fn(usize) -> bool) -> (WGraph, Vec<usize>) {
    let mut h = WGraph::new(g.n);
    let mut ids = Vec::new();
    for (e, (u, v, w)) in g.edges.iter().enumerate() {
        if keep(e) {
            h.add_edge(*u, *v, w.clone());
            ids.push(e);
        }
    }
    (h, ids)
}

/// Among the cyclic edges of `keep`'s subgraph reachable from the start, finds
/// the SCC maximizing `score(scc edges)`, returning the score and the edge to cycle through.
fn best_component(
    pr: &Product,
    reach: &[bool],
    keep: impl Fn(usize) -> bool,
    score: impl Fn(&[usize]) -> (Q, usize),
) -> Option<(Q, usize)> {
    let (h, ids) = sub(&pr.graph, keep);
    let (comp, ncomp) = h.scc();
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); ncomp];
    for (i, (u, v, _)) in h.edges.iter().enumerate() {
        if comp[*u] == comp[*v] && reach[*u] {
            groups[comp[*u]].push(ids[i]);
        }
    }
    groups.into_iter().filter(|g| !g.is_empty()).map(|g| score(&g)).max_by(|a, b| a.0.cmp(&b.0))
}

/// Exact regret of the word strategy `sigma`, with a spoiler when it is positive.
pub fn fixed_memory_regret(a: &Automaton, p: PayoffKind, sigma: &MooreStrategy) -> Result<(Q, Option<Spoiler>)> {
    let pr = product(a, p, sigma)?;
    let g = &pr.graph;
    let reach = g.reachable(0);
    let (value, cycle) = if p.is_mean_payoff() {
        let (v, c) = g.max_cycle_mean(0).expect("total product has a cycle");
        (v, c)
    } else {
        let limsup = matches!(p, PayoffKind::Sup | PayoffKind::LimSup);
        let (alt, mine) = (&pr.alt, &pr.mine);
        let mut thresholds: Vec<Q> = if limsup { pr.mine.clone() } else { pr.alt.clone() };
        thresholds.sort();
        thresholds.dedup();
        let mut best: Option<(Q, usize, Vec<usize>)> = None;
        for x in &thresholds {
            let (keep, found): (Box<dyn Fn(usize) -> bool>, _) = if limsup {
                // Eve's run stays at or below x, the other run peaks as high as it can
                let keep = move |e: usize| mine[e] <= *x;
                let found = best_component(&pr, &reach, &keep, |es| {
                    let e = *es.iter().max_by(|&&e, &&f| pr.alt[e].cmp(&pr.alt[f])).unwrap();
                    (&pr.alt[e] - x, e)
                });
                (Box::new(keep), found)
            } else {
                // the other run stays at or above x, Eve's run dips as low as it can
                let keep = move |e: usize| alt[e] >= *x;
                let found = best_component(&pr, &reach, &keep, |es| {
                    let e = *es.iter().min_by(|&&e, &&f| pr.mine[e].cmp(&pr.mine[f])).unwrap();
                    (x - &pr.mine[e], e)
                });
                (Box::new(keep), found)
            };
            if let Some((v, e)) = found {
                if best.as_ref().is_none_or(|b| v > b.0) {
                    let c = g.cycle_through(e, &|f| keep(f)).expect("edge lies in a component");
                    best = Some((v, e, c));
                }
            }
        }
        let (v, _, c) = best.expect("total product has a cycle");
        (v, c)
    };
    if value <= Q::from_integer(0.into()) {
        return Ok((Q::from_integer(0.into()), None));
    }
    let lasso = g.lasso_to_cycle(0, cycle, &|_| true).expect("cycle is reachable");
    let letters = |es: &[usize]| es.iter().map(|&e| pr.letter[e]).collect::<Vec<_>>();
    let word = LassoWord::new(letters(&lasso.stem), letters(&lasso.cycle));
    let best = lasso_automaton_value(a, p, &word);
    let run = word_run_lasso(a, sigma, &word).expect("strategy is total");
    let achieved = lasso_value(&run, p)?;
    Ok((value, Some(Spoiler { word: word.canonical(), best, achieved })))
}

#[derive(Clone, Debug)]
pub struct FixedCheck {
    pub holds: bool,
    pub regret: Q,
    pub spoiler: Option<Spoiler>,
}

/// Whether `sigma` keeps the regret at most `r` (below `r` with `strict`).
pub fn fixed_memory_regret_check(a: &Automaton, p: PayoffKind, sigma: &MooreStrategy, r: &Q, strict: bool) -> Result<FixedCheck> {
    let (regret, spoiler) = fixed_memory_regret(a, p, sigma)?;
    let holds = if strict { regret < *r } else { regret <= *r };
    Ok(FixedCheck { holds, spoiler: if holds { None } else { spoiler }, regret })
}

/// Calls `visit` on every word strategy with at most `m` memory states, up to
/// renaming of memory states and choices at unreachable positions. Stops early
/// when `visit` returns true; errors once more than `budget` strategies were visited.
pub fn for_each_strategy(
    a: &Automaton,
    m: usize,
    budget: usize,
    visit: &mut dyn FnMut(&MooreStrategy) -> Result<bool>,
) -> Result<bool> {
    if m == 0 {
        return Err(Error::invalid("memory bound must be positive"));
    }
    struct Walk<'a> {
        a: &'a Automaton,
        m: usize,
        budget: usize,
        count: usize,
        order: Vec<(usize, usize)>,
        seen: HashMap<(usize, usize), ()>,
        s: MooreStrategy,
        used: usize,
    }
    impl Walk<'_> {
        fn go(&mut self, slot: usize, visit: &mut dyn FnMut(&MooreStrategy) -> Result<bool>) -> Result<bool> {
            let k = self.a.letters();
            if slot == self.order.len() * k {
                self.count += 1;
                if self.count > self.budget {
                    return Err(Error::Budget(format!("more than {} strategies", self.budget)));
                }
                self.s.memory = self.used;
                return visit(&self.s);
            }
            let (q, mem) = self.order[slot / k];
            let l = slot % k;
            let succ = self.a.succ(q, l).to_vec();
            for t in succ {
                for m2 in 0..self.m.min(self.used + 1) {
                    let key = (self.a.transition(t).dst, m2);
                    let fresh = !self.seen.contains_key(&key);
                    let (old_used, old_len) = (self.used, self.order.len());
                    self.used = self.used.max(m2 + 1);
                    if fresh {
                        self.seen.insert(key, ());
                        self.order.push(key);
                    }
                    self.s.choice.insert((q * k + l, mem), t);
                    if m2 != mem {
                        self.s.update.insert((mem, t), m2);
                    }
                    let done = self.go(slot + 1, visit)?;
                    self.s.choice.remove(&(q * k + l, mem));
                    self.s.update.remove(&(mem, t));
                    if fresh {
                        self.seen.remove(&key);
                        self.order.truncate(old_len);
                    }
                    self.used = old_used;
                    if done {
                        return Ok(true);
                    }
                }
            }
            Ok(false)
        }
    }
    let start = (a.initial(), 0);
    let mut w = Walk {
        a,
        m,
        budget,
        count: 0,
        order: vec![start],
        seen: HashMap::from([(start, ())]),
        s: MooreStrategy { memory: 1, ..Default::default() },
        used: 1,
    };
    w.go(0, visit)
}

/// Some strategy with at most `m` memory states whose regret is at most `r`
/// (below `r` with `strict`), or `None` when every such strategy fails.
pub fn fixed_memory_regret_search(
    a: &Automaton,
    p: PayoffKind,
    m: usize,
    r: &Q,
    strict: bool,
    budget: usize,
) -> Result<Option<MooreStrategy>> {
    let mut found = None;
    for_each_strategy(a, m, budget, &mut |s| {
        let ok = fixed_memory_regret_check(a, p, s, r, strict)?.holds;
        if ok {
            found = Some(s.clone());
        }
        Ok(ok)
    })?;
    Ok(found)
}

/// Least regret over strategies with at most `m` memory states, with an optimal strategy.
pub fn fixed_memory_regret_value(a: &Automaton, p: PayoffKind, m: usize, budget: usize) -> Result<(Q, MooreStrategy)> {
    let mut best: Option<(Q, MooreStrategy)> = None;
    for_each_strategy(a, m, budget, &mut |s| {
        let (v, _) = fixed_memory_regret(a, p, s)?;
        let zero = v == Q::from_integer(0.into());
        if best.as_ref().is_none_or(|b| v < b.0) {
            best = Some((v, s.clone()));
        }
        Ok(zero)
    })?;
    Ok(best.expect("at least one strategy"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_automaton;
    use crate::model::strategy::{explore_word, is_legal_word};
    use crate::oracle::brute_regret_word;
    use crate::rational::{frac, q};

    const A0: &str = include_str!("../../../../fixtures/a0.aut");

    fn always(a: &Automaton, via: usize) -> MooreStrategy {
        // transitions 0,1 go v1 -> v2 and 2,3 go v1 -> v3
        explore_word(a, (), |q, l, _| a.succ(q, l).iter().copied().find(|&t| q != 0 || t / 2 == via).unwrap(), |_, _| ())
    }

    #[test]
    fn always_v2_on_a0() {
        let a = parse_automaton(A0).unwrap();
        let s = always(&a, 0);
        let (v, sp) = fixed_memory_regret(&a, PayoffKind::MPInf, &s).unwrap();
        assert_eq!(v, q(1));
        let sp = sp.unwrap();
        assert_eq!(&sp.best - &sp.achieved, q(1));
        let c = fixed_memory_regret_check(&a, PayoffKind::MPInf, &s, &frac(1, 2), false).unwrap();
        assert!(!c.holds);
        assert_eq!(c.spoiler.unwrap().word, LassoWord::new(vec![], vec![0, 1]));
        let c = fixed_memory_regret_check(&a, PayoffKind::MPInf, &s, &frac(1, 4), false).unwrap();
        assert!(!c.holds);
        assert!(fixed_memory_regret_check(&a, PayoffKind::MPInf, &s, &q(1), false).unwrap().holds);
        assert!(!fixed_memory_regret_check(&a, PayoffKind::MPInf, &s, &q(1), true).unwrap().holds);
    }

    #[test]
    fn a0_positional_search() {
        let a = parse_automaton(A0).unwrap();
        assert!(fixed_memory_regret_search(&a, PayoffKind::MPInf, 1, &frac(1, 2), false, 1000).unwrap().is_none());
        assert!(fixed_memory_regret_search(&a, PayoffKind::MPInf, 1, &frac(1, 4), false, 1000).unwrap().is_none());
        let s = fixed_memory_regret_search(&a, PayoffKind::MPInf, 1, &q(1), false, 1000).unwrap().unwrap();
        assert!(is_legal_word(&a, &s));
        let (v, _) = fixed_memory_regret_value(&a, PayoffKind::MPInf, 1, 1000).unwrap();
        assert_eq!(v, q(1));
        for p in PayoffKind::ALL {
            let (v, _) = fixed_memory_regret_value(&a, p, 1, 1000).unwrap();
            assert_eq!(v, brute_regret_word(&a, p, 1, 6).unwrap().upper, "{p}");
        }
    }

    #[test]
    fn deterministic_has_zero_regret() {
        let a = parse_automaton("automaton\nalphabet a b\nstate p\nstate r\ninit p\ntrans p a r 3\ntrans p b p 0\ntrans r a r 1\ntrans r b p 2\n").unwrap();
        for p in PayoffKind::ALL {
            let s = fixed_memory_regret_search(&a, p, 1, &q(0), false, 10).unwrap().unwrap();
            assert!(fixed_memory_regret_check(&a, p, &s, &q(0), false).unwrap().holds);
        }
    }

    #[test]
    fn budget_is_reported() {
        let a = parse_automaton(A0).unwrap();
        assert!(matches!(fixed_memory_regret_search(&a, PayoffKind::MPInf, 2, &q(0), false, 3), Err(Error::Budget(_))));
    }

    #[test]
    fn illegal_strategy_rejected() {
        let a = parse_automaton(A0).unwrap();
        let s = MooreStrategy::positional([(0, 5)]);
        assert!(matches!(fixed_memory_regret(&a, PayoffKind::MPInf, &s), Err(Error::Invalid(_))));
    }

    mod props {
        use super::*;
        use crate::testgen::random_automaton;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(40))]
            #[test]
            fn spoilers_certify_and_bound_the_oracle(seed in any::<u64>(), n in 1usize..=3, pi in 0usize..6) {
                let p = PayoffKind::ALL[pi];
                let a = random_automaton(n, 2, 2, -1, 1, seed);
                let mut seen = 0;
                for_each_strategy(&a, 1, 10_000, &mut |s| {
                    let (v, sp) = fixed_memory_regret(&a, p, s)?;
                    if let Some(sp) = sp {
                        assert!(&sp.best - &sp.achieved >= v);
                    }
                    seen += 1;
                    Ok(false)
                }).unwrap();
                prop_assert!(seen > 0);
                let (v, _) = fixed_memory_regret_value(&a, p, 1, 10_000).unwrap();
                // the oracle only sees short spoilers
                prop_assert!(v >= brute_regret_word(&a, p, 1, 6).unwrap().upper);
            }
        }
    }
}
