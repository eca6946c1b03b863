//! Regret against positional Adam strategies. Vertices of the belief arena pair
//! a vertex with the set of edges Adam may still use.

use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::error::Result;
use crate::model::strategy::{explore_arena, play_lasso};
use crate::model::{Arena, ArenaBuilder, Extremum, MooreStrategy, Player};
use crate::payoffs::PayoffKind;
use crate::rational::{q, Q};
use crate::regret_any::RegretResult;
use crate::solvers::values::{antagonistic_value, lasso_choices};
use crate::solvers::WGraph;

#[derive(Clone, Debug)]
pub struct BeliefArena {
    pub arena: Arena,
    /// vertex -> (original vertex, belief id, recorded extremum)
    pub origin: Vec<(usize, usize, Option<Q>)>,
    /// belief id -> sorted edge list
    pub beliefs: Vec<Vec<usize>>,
    /// cooperative value of the restricted game, per belief
    pub cval_cache: BTreeMap<Vec<usize>, Q>,
    /// edge -> original edge
    pub edge_origin: Vec<usize>,
    /// payoff under which the arena is solved
    pub payoff: PayoffKind,
}

impl BeliefArena {
    pub fn belief_of(&self, v: usize) -> &[usize] {
        &self.beliefs[self.origin[v].1]
    }

    pub fn lookup(&self, v: usize, belief: usize, x: &Option<Q>) -> Option<usize> {
        self.origin.iter().position(|(u, b, y)| *u == v && *b == belief && y == x)
    }

    pub fn lift_edge(&self, r: usize, e: usize) -> Option<usize> {
        self.arena.out(r).iter().copied().find(|&f| self.edge_origin[f] == e)
    }
}

/// Best value of a play from the initial vertex of `g` using only `edges`.
fn restricted_cval(g: &Arena, edges: &[usize], p: PayoffKind) -> Q {
    let mut w = WGraph::new(g.len());
    for &e in edges {
        let ed = g.edge(e);
        w.add_edge(ed.src, ed.dst, ed.weight.clone());
    }
    w.best_lasso(g.initial(), p, true).expect("beliefs keep every vertex total").0
}

/// Belief arena for a prefix-independent payoff.
pub fn build_belief_arena(g: &Arena, p: PayoffKind) -> BeliefArena {
    build(g, p, None)
}

/// Belief arena that also records the running minimum (Inf) or maximum (Sup);
/// solved as LimInf or LimSup respectively.
pub fn build_belief_arena_tilde(g: &Arena, p: PayoffKind) -> BeliefArena {
    let mode = if p == PayoffKind::Inf { Extremum::Min } else { Extremum::Max };
    build(g, p, Some(mode))
}

fn build(g: &Arena, p: PayoffKind, mode: Option<Extremum>) -> BeliefArena {
    let solve_p = if mode.is_some() { p.limit_version() } else { p };
    let mut beliefs: Vec<Vec<usize>> = Vec::new();
    let mut belief_ids: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut cval_cache = BTreeMap::new();
    let mut intern = |c: Vec<usize>, beliefs: &mut Vec<Vec<usize>>, cval_cache: &mut BTreeMap<Vec<usize>, Q>| -> usize {
        if let Some(&i) = belief_ids.get(&c) {
            return i;
        }
        cval_cache.insert(c.clone(), restricted_cval(g, &c, p));
        beliefs.push(c.clone());
        belief_ids.insert(c, beliefs.len() - 1);
        beliefs.len() - 1
    };
    let all: Vec<usize> = (0..g.edges().len()).collect();
    let b0 = intern(all, &mut beliefs, &mut cval_cache);
    let x0 = mode.map(|m| m.start(g.w_max()));

    let mut builder = ArenaBuilder::new();
    let mut ids: HashMap<(usize, usize, Option<Q>), usize> = HashMap::new();
    let mut origin = Vec::new();
    let mut pending: Vec<(usize, usize, Q)> = Vec::new();
    let mut edge_origin = Vec::new();
    let mut add = |key: (usize, usize, Option<Q>),
                   builder: &mut ArenaBuilder,
                   origin: &mut Vec<(usize, usize, Option<Q>)>,
                   queue: &mut VecDeque<usize>|
     -> usize {
        if let Some(&i) = ids.get(&key) {
            return i;
        }
        let name = match &key.2 {
            Some(x) => format!("{}#{}#{}", g.name(key.0), key.1, x),
            None => format!("{}#{}", g.name(key.0), key.1),
        };
        let i = builder.vertex(name, g.owner(key.0));
        ids.insert(key.clone(), i);
        origin.push(key);
        queue.push_back(i);
        i
    };
    let mut queue = VecDeque::new();
    let start = add((g.initial(), b0, x0), &mut builder, &mut origin, &mut queue);
    builder.initial(start);
    while let Some(r) = queue.pop_front() {
        let (u, c, x) = origin[r].clone();
        let cur = beliefs[c].clone();
        for &e in g.out(u) {
            if cur.binary_search(&e).is_err() {
                continue;
            }
            let ed = g.edge(e);
            let d = if g.owner(u) == Player::Adam {
                let next: Vec<usize> = cur.iter().copied().filter(|&f| f == e || g.edge(f).src != u).collect();
                intern(next, &mut beliefs, &mut cval_cache)
            } else {
                c
            };
            let nx = match (mode, &x) {
                (Some(m), Some(x)) => Some(m.combine(x, &ed.weight)),
                _ => None,
            };
            let base = nx.clone().unwrap_or_else(|| ed.weight.clone());
            let weight = base - &cval_cache[&beliefs[d]];
            let t = add((ed.dst, d, nx), &mut builder, &mut origin, &mut queue);
            pending.push((r, t, weight));
            edge_origin.push(e);
        }
    }
    for (r, t, w) in pending {
        builder.edge(r, t, w);
    }
    let arena = builder.build().expect("belief arena is total");
    BeliefArena { arena, origin, beliefs, cval_cache, edge_origin, payoff: solve_p }
}

/// Minimal regret Eve can ensure against positional Adam strategies.
pub fn regret_memoryless(g: &Arena, p: PayoffKind) -> Result<RegretResult> {
    let ba = match p {
        PayoffKind::Inf | PayoffKind::Sup => build_belief_arena_tilde(g, p),
        _ => build_belief_arena(g, p),
    };
    let val = antagonistic_value(&ba.arena, ba.payoff, ba.arena.initial())?;
    let regret = -val.value.clone();
    let eve_strategy = lift_eve(g, &ba, &val.eve_strategy);
    let adam_witness = if regret > q(0) {
        Some(adam_witness(g, p, &ba, &val.eve_strategy, &val.adam_strategy))
    } else {
        None
    };
    Ok(RegretResult { regret, eve_strategy, adam_witness })
}

/// Eve strategy on `g` whose memory is the belief (and recorded extremum).
/// Histories no positional Adam can produce fall into a default memory state.
fn lift_eve(g: &Arena, ba: &BeliefArena, s: &MooreStrategy) -> MooreStrategy {
    let (_, b0, x0) = ba.origin[ba.arena.initial()].clone();
    let at = |v: usize, b: usize, x: &Option<Q>| ba.lookup(v, b, x).expect("belief vertex reachable");
    explore_arena(
        g,
        Player::Eve,
        Some((b0, x0, s.initial_memory)),
        |v, mem| match mem {
            Some((b, x, m)) => ba.edge_origin[s.choose(at(v, *b, x), *m).expect("optimal strategy is total")],
            None => g.out(v)[0],
        },
        |mem, e| {
            let (b, x, m) = mem.as_ref()?;
            let r = at(g.edge(e).src, *b, x);
            let f = ba.lift_edge(r, e)?;
            let (_, nb, nx) = ba.origin[ba.arena.edge(f).dst].clone();
            Some((nb, nx, s.next(*m, f)))
        },
    )
}

/// Positional Adam strategy that follows the belief reached by the optimal plays
/// and cooperates inside it.
fn adam_witness(g: &Arena, p: PayoffKind, ba: &BeliefArena, eve: &MooreStrategy, adam: &MooreStrategy) -> MooreStrategy {
    let (_, cycle) = play_lasso(&ba.arena, eve, adam).expect("optimal strategies are total");
    let last = ba.arena.edge(cycle[0]).src;
    let limit = ba.belief_of(last).to_vec();
    let mut w = WGraph::new(g.len());
    for &e in &limit {
        let ed = g.edge(e);
        w.add_edge(ed.src, ed.dst, ed.weight.clone());
    }
    let (_, lasso) = w.best_lasso(g.initial(), p, true).expect("limit belief is total");
    let mut l = lasso.clone();
    l.stem = lasso.stem.iter().map(|&i| limit[i]).collect();
    l.cycle = lasso.cycle.iter().map(|&i| limit[i]).collect();
    let on = lasso_choices(g, &l);
    MooreStrategy::positional((0..g.len()).filter(|&v| g.owner(v) == Player::Adam).map(|v| {
        let e = on[v].unwrap_or_else(|| *limit.iter().find(|&&e| g.edge(e).src == v).expect("total"));
        (v, e)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_arena;
    use crate::payoffs::{lasso_value, Lasso};
    use crate::rational::frac;

    const G0: &str = include_str!("../../../fixtures/g0.arena");
    const G1: &str = include_str!("../../../fixtures/g1.arena");

    fn edge_weight(ba: &BeliefArena, g: &Arena, from: (&str, &[usize]), to: (&str, &[usize])) -> Option<Q> {
        let find = |(n, c): (&str, &[usize])| {
            (0..ba.arena.len()).find(|&r| g.name(ba.origin[r].0) == n && ba.belief_of(r) == c)
        };
        let (a, b) = (find(from)?, find(to)?);
        ba.arena.out(a).iter().map(|&e| ba.arena.edge(e)).find(|e| e.dst == b).map(|e| e.weight.clone())
    }

    #[test]
    fn g1_belief_arena_golden() {
        let g = parse_arena(G1).unwrap();
        let ba = build_belief_arena(&g, PayoffKind::MPInf);
        let all: Vec<usize> = (0..6).collect();
        let xu: Vec<usize> = vec![0, 1, 2, 3, 5];
        let xv: Vec<usize> = vec![0, 1, 2, 3, 4];
        assert_eq!(ba.beliefs.len(), 3);
        assert_eq!(ba.arena.len(), 9);
        assert_eq!(ba.arena.edges().len(), 16);
        let cases: Vec<((&str, &[usize]), (&str, &[usize]), Q)> = vec![
            (("u", &all), ("u", &all), q(-1)),
            (("u", &all), ("v", &all), q(-2)),
            (("v", &all), ("u", &all), q(-2)),
            (("v", &all), ("x", &all), q(-2)),
            (("x", &all), ("u", &xu), q(4)),
            (("x", &all), ("v", &xv), q(-1)),
            (("u", &xu), ("u", &xu), q(-1)),
            (("u", &xu), ("v", &xu), q(-2)),
            (("v", &xu), ("u", &xu), q(-2)),
            (("v", &xu), ("x", &xu), q(-2)),
            (("x", &xu), ("u", &xu), q(4)),
            (("u", &xv), ("u", &xv), q(0)),
            (("u", &xv), ("v", &xv), q(-1)),
            (("v", &xv), ("u", &xv), q(-1)),
            (("v", &xv), ("x", &xv), q(-1)),
            (("x", &xv), ("v", &xv), q(-1)),
        ];
        for (a, b, w) in cases {
            assert_eq!(edge_weight(&ba, &g, a, b), Some(w), "{a:?} -> {b:?}");
        }
        assert_eq!(regret_memoryless(&g, PayoffKind::MPInf).unwrap().regret, q(0));
    }

    #[test]
    fn g0_and_trivial() {
        let g = parse_arena(G0).unwrap();
        assert_eq!(regret_memoryless(&g, PayoffKind::MPInf).unwrap().regret, q(0));
        let l = parse_arena("arena\nvertex a eve\nedge a a 3\ninit a\n").unwrap();
        for p in PayoffKind::ALL {
            assert_eq!(regret_memoryless(&l, p).unwrap().regret, q(0));
        }
    }

    #[test]
    fn no_adam_keeps_full_belief() {
        let g = parse_arena("arena\nvertex a eve\nvertex b eve\nedge a b 1\nedge b a 0\nedge a a 2\ninit a\n").unwrap();
        let ba = build_belief_arena(&g, PayoffKind::LimSup);
        assert_eq!(ba.beliefs.len(), 1);
        for (i, e) in ba.arena.edges().iter().enumerate() {
            assert_eq!(e.weight, &g.edge(ba.edge_origin[i]).weight - q(2));
        }
    }

    #[test]
    fn tilde_records_extremum() {
        let g = parse_arena("arena\nvertex a eve\nedge a a 5\ninit a\n").unwrap();
        let ba = build_belief_arena_tilde(&g, PayoffKind::Inf);
        assert_eq!(ba.arena.len(), 1);
        assert_eq!(ba.arena.edge(0).weight, q(0));
        let g = parse_arena("arena\nvertex a eve\nvertex b eve\nvertex c eve\nedge a b 3\nedge b c 1\nedge c c 1\ninit a\n").unwrap();
        let ba = build_belief_arena_tilde(&g, PayoffKind::Inf);
        let xs: Vec<Q> = ba.origin.iter().map(|o| o.2.clone().unwrap()).collect();
        assert_eq!(xs, vec![q(3), q(3), q(1)]);
    }

    #[test]
    fn g0_inf_matches_oracle() {
        let g = parse_arena(G0).unwrap();
        for p in [PayoffKind::Inf, PayoffKind::Sup] {
            let ba = build_belief_arena_tilde(&g, p);
            let cf = crate::oracle::cycle_forming_value(&ba.arena, ba.payoff).unwrap();
            assert_eq!(regret_memoryless(&g, p).unwrap().regret, -cf);
        }
    }

    /// Regret of `sigma` against a positional `tau`.
    fn gap(g: &Arena, p: PayoffKind, sigma: &MooreStrategy, tau: &MooreStrategy) -> Q {
        let (stem, cycle) = play_lasso(g, sigma, tau).unwrap();
        let wt = |v: &[usize]| v.iter().map(|&e| g.edge(e).weight.clone()).collect();
        let own = lasso_value(&Lasso::new(wt(&stem), wt(&cycle)), p).unwrap();
        let keep: Vec<bool> = (0..g.edges().len())
            .map(|e| g.owner(g.edge(e).src) == Player::Eve || tau.choose(g.edge(e).src, 0) == Some(e))
            .collect();
        let sub = g.restrict(|e| keep[e]).unwrap();
        let best = WGraph::from_arena(&sub).best_lasso(g.initial(), p, true).unwrap().0;
        best - own
    }

    #[test]
    fn witness_on_g0_inf() {
        let g = parse_arena(G0).unwrap();
        let r = regret_memoryless(&g, PayoffKind::LimInf).unwrap();
        if let Some(t) = &r.adam_witness {
            assert_eq!(gap(&g, PayoffKind::LimInf, &r.eve_strategy, t), r.regret);
        }
        assert!(r.regret >= q(0) && r.regret <= frac(4, 1));
    }

    mod props {
        use super::*;
        use crate::oracle::cycle_forming_value_with_budget;
        use crate::regret_any::regret_any;
        use proptest::prelude::*;

        fn arena() -> impl Strategy<Value = Arena> {
            (1usize..=4).prop_flat_map(|n| {
                (
                    proptest::collection::vec(any::<bool>(), n),
                    proptest::collection::vec(proptest::collection::vec((0..n, -2i64..=2), 1..=2), n),
                )
                    .prop_map(move |(eve, out)| {
                        let mut b = ArenaBuilder::new();
                        for (i, &e) in eve.iter().enumerate() {
                            b.vertex(format!("s{i}"), if e { Player::Eve } else { Player::Adam });
                        }
                        b.initial(0);
                        for (u, es) in out.iter().enumerate() {
                            let mut seen = Vec::new();
                            for &(v, w) in es {
                                if !seen.contains(&v) {
                                    seen.push(v);
                                    b.edge(u, v, q(w));
                                }
                            }
                        }
                        b.build().unwrap()
                    })
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(150))]
            #[test]
            fn belief_value_matches_cycle_forming(g in arena(), pi in 0usize..6) {
                let p = PayoffKind::ALL[pi];
                let r = regret_memoryless(&g, p).unwrap();
                let ba = match p {
                    PayoffKind::Inf | PayoffKind::Sup => build_belief_arena_tilde(&g, p),
                    _ => build_belief_arena(&g, p),
                };
                if ba.arena.len() <= 40 {
                    if let Ok(cf) = cycle_forming_value_with_budget(&ba.arena, ba.payoff, 2_000_000) {
                        prop_assert_eq!(&r.regret, &-cf);
                    }
                }
                prop_assert!(r.regret >= q(0));
                prop_assert!(r.regret <= q(2) * g.w_max());
                prop_assert!(r.regret <= regret_any(&g, p).unwrap().regret);
                if let Some(t) = &r.adam_witness {
                    prop_assert_eq!(gap(&g, p, &r.eve_strategy, t), r.regret.clone());
                }
                // beliefs shrink only on Adam moves
                for e in ba.arena.edges() {
                    let (c, d) = (ba.belief_of(e.src), ba.belief_of(e.dst));
                    prop_assert!(d.iter().all(|x| c.contains(x)));
                    if g.owner(ba.origin[e.src].0) == Player::Eve {
                        prop_assert_eq!(c, d);
                    }
                }
            }
        }
    }
}
