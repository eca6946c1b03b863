//! Regret against an unrestricted Adam, computed as the antagonistic value of a
//! derived arena with one copy of the game per deviation bound.

use std::collections::HashMap;

use crate::error::Result;
use crate::model::strategy::explore_arena;
use crate::model::{record_extremum_transform, Arena, ArenaBuilder, Extremum, MooreStrategy, Player};
use crate::payoffs::PayoffKind;
use crate::rational::{q, Q};
use crate::solvers::values::{antagonistic_value, cooperative_values, lasso_choices};
use crate::solvers::WGraph;

#[derive(Clone, Debug)]
pub struct RegretResult {
    pub regret: Q,
    pub eve_strategy: MooreStrategy,
    /// Adam strategy attaining the regret against `eve_strategy`, when it is positive.
    pub adam_witness: Option<MooreStrategy>,
}

/// Per edge, the best cooperative value Eve could get by taking a sibling edge
/// instead; `None` stands for minus infinity.
pub fn deviation_weights(g: &Arena, p: PayoffKind) -> Vec<Option<Q>> {
    let cval = cooperative_values(g, p);
    g.edges()
        .iter()
        .enumerate()
        .map(|(i, e)| {
            if g.owner(e.src) == Player::Adam {
                return None;
            }
            g.out(e.src).iter().filter(|&&f| f != i).map(|&f| cval[g.edge(f).dst].clone()).max()
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct GHat {
    pub arena: Arena,
    /// `(b, copy)` where `copy[v]` is the vertex of `v` in the layer of deviation
    /// bound `b`; `None` is the layer where Eve has not yet passed up an alternative.
    pub layers: Vec<(Option<Q>, Vec<usize>)>,
    /// original edge of each layer edge
    pub edge_origin: Vec<Option<usize>>,
}

impl GHat {
    fn layer_of(&self, b: &Option<Q>) -> usize {
        self.layers.iter().position(|(x, _)| x == b).expect("bound has a layer")
    }
}

/// Arena whose antagonistic value is minus the regret. Each layer remembers the
/// best alternative Eve has passed up so far; within layer `b` edges weigh
/// `w(e) - b`, and the layer without alternatives weighs nothing. `p` must be
/// prefix-independent.
pub fn build_ghat_any(g: &Arena, p: PayoffKind) -> GHat {
    let wp = deviation_weights(g, p);
    let mut bounds: Vec<Option<Q>> = wp.iter().flatten().cloned().map(Some).collect();
    bounds.push(None);
    bounds.sort();
    bounds.dedup();
    let mut b = ArenaBuilder::new();
    let v0 = b.vertex("v0", Player::Adam);
    b.initial(v0);
    b.edge(v0, v0, q(0));
    let mut origin = vec![None];
    let layers: Vec<(Option<Q>, Vec<usize>)> = bounds
        .iter()
        .map(|bound| {
            let tag = bound.as_ref().map_or("-inf".to_string(), |x| x.to_string());
            (bound.clone(), (0..g.len()).map(|v| b.vertex(format!("{}@{tag}", g.name(v)), g.owner(v))).collect())
        })
        .collect();
    b.edge(v0, layers[0].1[g.initial()], q(0));
    origin.push(None);
    for (bound, copy) in &layers {
        for (i, ed) in g.edges().iter().enumerate() {
            let next = bound.clone().max(wp[i].clone());
            let to = &layers.iter().find(|(x, _)| *x == next).expect("bound has a layer").1;
            let w = next.as_ref().map_or(q(0), |x| &ed.weight - x);
            b.edge(copy[ed.src], to[ed.dst], w);
            origin.push(Some(i));
        }
    }
    let arena = b.build().expect("layers are total");
    GHat { arena, layers, edge_origin: origin }
}

/// Minimal regret Eve can ensure against any Adam strategy.
pub fn regret_any(g: &Arena, p: PayoffKind) -> Result<RegretResult> {
    match p {
        PayoffKind::Inf | PayoffKind::Sup => {
            let (mode, lim) = if p == PayoffKind::Inf {
                (Extremum::Min, PayoffKind::LimInf)
            } else {
                (Extremum::Max, PayoffKind::LimSup)
            };
            let rec = record_extremum_transform(g, mode);
            let r = regret_any_prefix_independent(&rec.arena, lim)?;
            Ok(RegretResult {
                regret: r.regret,
                eve_strategy: rec.lift_strategy(g, Player::Eve, &r.eve_strategy),
                adam_witness: r.adam_witness.map(|t| rec.lift_strategy(g, Player::Adam, &t)),
            })
        }
        _ => regret_any_prefix_independent(g, p),
    }
}

fn regret_any_prefix_independent(g: &Arena, p: PayoffKind) -> Result<RegretResult> {
    let gh = build_ghat_any(g, p);
    let val = antagonistic_value(&gh.arena, p, gh.arena.initial())?;
    let regret = -val.value;
    let wp = deviation_weights(g, p);
    let s = &val.eve_strategy;
    let eve_strategy = explore_arena(
        g,
        Player::Eve,
        0usize,
        |v, &l| gh.edge_origin[s.choose(gh.layers[l].1[v], 0).expect("positional strategy is total")].unwrap(),
        |&l, e| gh.layer_of(&gh.layers[l].0.clone().max(wp[e].clone())),
    );
    let adam_witness = if regret > q(0) { adam_witness(g, p, &eve_strategy) } else { None };
    Ok(RegretResult { regret, eve_strategy, adam_witness })
}

/// Three-phase Adam strategy against `sigma`: reach the point where deviating
/// pays most, then punish Eve's actual move and cooperate with the alternative.
/// Adam tracks the phase and `sigma`'s memory.
pub fn adam_witness(g: &Arena, p: PayoffKind, sigma: &MooreStrategy) -> Option<MooreStrategy> {
    let cval = cooperative_values(g, p);
    // plays consistent with sigma, on (vertex, memory) pairs
    let mut ids: HashMap<(usize, usize), usize> = HashMap::from([((g.initial(), sigma.initial_memory), 0)]);
    let mut pos = vec![(g.initial(), sigma.initial_memory)];
    let mut h_edge = Vec::new();
    let mut i = 0;
    while i < pos.len() {
        let (v, m) = pos[i];
        let moves: Vec<usize> = match g.owner(v) {
            Player::Eve => vec![sigma.choose(v, m)?],
            Player::Adam => g.out(v).to_vec(),
        };
        for e in moves {
            let key = (g.edge(e).dst, sigma.next(m, e));
            let j = *ids.entry(key).or_insert_with(|| {
                pos.push(key);
                pos.len() - 1
            });
            h_edge.push((i, j, e));
        }
        i += 1;
    }
    let mut h = WGraph::new(pos.len());
    for (u, v, e) in &h_edge {
        h.add_edge(*u, *v, g.edge(*e).weight.clone());
    }
    let mut best: Option<(Q, usize, usize)> = None;
    for (x, &(u, m)) in pos.iter().enumerate() {
        if g.owner(u) != Player::Eve {
            continue;
        }
        let own = sigma.choose(u, m)?;
        let (worst, _) = h.best_lasso(x, p, false)?;
        for &f in g.out(u) {
            let gap = &cval[g.edge(f).dst] - &worst;
            if f != own && best.as_ref().is_none_or(|b| gap > b.0) {
                best = Some((gap, x, f));
            }
        }
    }
    let (gap, x, alt) = best?;
    if gap <= q(0) {
        return None;
    }
    let mut goal = vec![false; pos.len()];
    goal[x] = true;
    let path = h.path_to(0, &goal, &|_| true)?;
    let (_, punish) = h.best_lasso(x, p, false)?;
    let by_source = |es: &mut dyn Iterator<Item = &usize>| -> HashMap<usize, usize> {
        es.map(|&k| (h_edge[k].0, h_edge[k].2)).collect()
    };
    let reach_map = by_source(&mut path.iter());
    let punish_map = by_source(&mut punish.stem.iter().chain(&punish.cycle));
    let (_, coop) = WGraph::from_arena(g).best_lasso(g.edge(alt).dst, p, true)?;
    let coop = lasso_choices(g, &coop);
    let at = pos[x];
    let own = sigma.choose(at.0, at.1)?;
    Some(explore_arena(
        g,
        Player::Adam,
        (0u8, sigma.initial_memory),
        |v, &(phase, m)| {
            let here = ids.get(&(v, m));
            let pick = match phase {
                0 => here.and_then(|k| reach_map.get(k)),
                1 => here.and_then(|k| punish_map.get(k)),
                _ => coop[v].as_ref(),
            };
            pick.copied().unwrap_or(g.out(v)[0])
        },
        |&(phase, m), e| {
            let next = if phase == 0 && (g.edge(e).src, m) == at {
                if e == own {
                    1
                } else {
                    2
                }
            } else {
                phase
            };
            (next, sigma.next(m, e))
        },
    ))
}
