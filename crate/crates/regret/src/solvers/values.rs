//! Cooperative and antagonistic values of weighted arenas.

use crate::error::{Error, Result};
use crate::model::{Arena, MooreStrategy, Player};
use crate::payoffs::PayoffKind;
use crate::rational::{lcm_denominators, scaled_i64, Q};
use crate::solvers::game::{full, Game, Mask, Strat};
use crate::solvers::graph::{EdgeLasso, WGraph};
use crate::solvers::meanpayoff::IntGame;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameValueResult {
    pub value: Q,
    pub eve_strategy: MooreStrategy,
    pub adam_strategy: MooreStrategy,
}

fn check_vertex(g: &Arena, v: usize) -> Result<()> {
    if v >= g.len() {
        return Err(Error::invalid(format!("unknown vertex {v}")));
    }
    Ok(())
}

/// Positional strategies for both players from per-vertex choices,
/// defaulting to the first outgoing edge.
fn split(g: &Arena, choice: impl Fn(usize) -> Option<usize>) -> (MooreStrategy, MooreStrategy) {
    let mut eve = Vec::new();
    let mut adam = Vec::new();
    for v in 0..g.len() {
        let e = choice(v).unwrap_or(g.out(v)[0]);
        match g.owner(v) {
            Player::Eve => eve.push((v, e)),
            Player::Adam => adam.push((v, e)),
        }
    }
    (MooreStrategy::positional(eve), MooreStrategy::positional(adam))
}

pub fn lasso_choices(g: &Arena, l: &EdgeLasso) -> Vec<Option<usize>> {
    let mut c = vec![None; g.len()];
    for &e in l.stem.iter().chain(&l.cycle) {
        c[g.edge(e).src] = Some(e);
    }
    c
}

/// Best payoff over all plays from `v`, with strategies realising it.
pub fn cooperative_value(g: &Arena, p: PayoffKind, v: usize) -> Result<GameValueResult> {
    check_vertex(g, v)?;
    let (value, lasso) = WGraph::from_arena(g).best_lasso(v, p, true).expect("total arena has a cycle");
    let c = lasso_choices(g, &lasso);
    let (eve_strategy, adam_strategy) = split(g, |x| c[x]);
    Ok(GameValueResult { value, eve_strategy, adam_strategy })
}

/// Cooperative value only, from every vertex, for one payoff.
pub fn cooperative_values(g: &Arena, p: PayoffKind) -> Vec<Q> {
    let w = WGraph::from_arena(g);
    (0..g.len()).map(|v| w.best_lasso(v, p, true).expect("total arena").0).collect()
}

/// Game with every arena edge `e` routed through vertex `n + e`; original edge
/// ids are kept on the first half.
fn split_game(g: &Arena) -> Game {
    let n = g.len();
    let m = g.edges().len();
    let mut owner = g.owners().to_vec();
    owner.extend(std::iter::repeat_n(Player::Eve, m));
    let mut game = Game::with_owners(owner);
    for e in g.edges() {
        let id = game.edge_count;
        game.add_edge(e.src, n + id);
    }
    for e in g.edges() {
        game.add_edge(n + game.edge_count - m, e.dst);
    }
    game
}

/// Outcome of one threshold game: whether Eve wins from `v`, and the winner's
/// positional choices.
fn threshold(g: &Arena, game: &Game, p: PayoffKind, v: usize, x: &Q) -> (bool, Strat) {
    let n = g.len();
    let total = game.len();
    let mark = |pred: &dyn Fn(&Q) -> bool| -> Mask {
        (0..total).map(|i| i >= n && pred(&g.edge(i - n).weight)).collect()
    };
    let all = full(total);
    match p {
        PayoffKind::Sup => {
            let (a, s) = game.attractor(Player::Eve, &mark(&|w| w >= x), &all);
            if a[v] {
                (true, s)
            } else {
                let s = (0..total).map(|u| if a[u] { None } else { game.stay(u, &crate::solvers::game::minus(&all, &a)) }).collect();
                (false, s)
            }
        }
        PayoffKind::Inf => {
            let (a, s) = game.attractor(Player::Adam, &mark(&|w| w < x), &all);
            if a[v] {
                (false, s)
            } else {
                let safe = crate::solvers::game::minus(&all, &a);
                (true, (0..total).map(|u| game.stay(u, &safe)).collect())
            }
        }
        PayoffKind::LimSup => {
            let (w, se, sa) = game.buchi(Player::Eve, &mark(&|w| w >= x), &all);
            if w[v] { (true, se) } else { (false, sa) }
        }
        PayoffKind::LimInf => {
            let (w, sa, se) = game.buchi(Player::Adam, &mark(&|w| w < x), &all);
            if w[v] { (false, sa) } else { (true, se) }
        }
        _ => unreachable!(),
    }
}

/// Value Eve can guarantee from `v` against every Adam strategy, with optimal
/// positional strategies for both players.
pub fn antagonistic_value(g: &Arena, p: PayoffKind, v: usize) -> Result<GameValueResult> {
    check_vertex(g, v)?;
    if p.is_mean_payoff() {
        return Ok(mean_payoff_value(g, v));
    }
    let game = split_game(g);
    let ws = g.weight_set();
    // largest index whose threshold Eve wins; index 0 always wins
    let (mut lo, mut hi) = (0usize, ws.len());
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if threshold(g, &game, p, v, &ws[mid]).0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (won, eve) = threshold(g, &game, p, v, &ws[lo]);
    debug_assert!(won);
    let adam = if lo + 1 < ws.len() {
        threshold(g, &game, p, v, &ws[lo + 1]).1
    } else {
        vec![None; game.len()]
    };
    let (eve_strategy, adam_strategy) = split(g, |u| match g.owner(u) {
        Player::Eve => eve[u],
        Player::Adam => adam[u],
    });
    Ok(GameValueResult { value: ws[lo].clone(), eve_strategy, adam_strategy })
}

fn mean_payoff_value(g: &Arena, v: usize) -> GameValueResult {
    let scale = lcm_denominators(g.edges().iter().map(|e| &e.weight));
    let ig = IntGame::new(
        g.owners().to_vec(),
        g.edges().iter().map(|e| (e.src, e.dst, scaled_i64(&e.weight, &scale))).collect(),
    );
    let s = ig.solve(v);
    let (eve_strategy, adam_strategy) = split(g, |u| match g.owner(u) {
        Player::Eve => s.eve[u],
        Player::Adam => s.adam[u],
    });
    GameValueResult { value: s.value / Q::from_integer(scale), eve_strategy, adam_strategy }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_arena;
    use crate::model::strategy::{edge_weights, play_lasso};
    use crate::payoffs::{lasso_value, Lasso};
    use crate::rational::{frac, q};

    const G0: &str = include_str!("../../../../fixtures/g0.arena");
    const G1: &str = include_str!("../../../../fixtures/g1.arena");

    fn realised(g: &Arena, r: &GameValueResult, p: PayoffKind) -> Q {
        let (s, c) = play_lasso(g, &r.eve_strategy, &r.adam_strategy).unwrap();
        lasso_value(&Lasso::new(edge_weights(g, &s), edge_weights(g, &c)), p).unwrap()
    }

    #[test]
    fn g0_values() {
        let g = parse_arena(G0).unwrap();
        let c = cooperative_value(&g, PayoffKind::MPInf, 0).unwrap();
        assert_eq!(c.value, q(2));
        assert_eq!(realised(&g, &c, PayoffKind::MPInf), q(2));
        let a = antagonistic_value(&g, PayoffKind::MPInf, 0).unwrap();
        assert_eq!(a.value, frac(1, 2));
        assert_eq!(realised(&g, &a, PayoffKind::MPInf), frac(1, 2));
    }

    #[test]
    fn g1_values() {
        let g = parse_arena(G1).unwrap();
        assert_eq!(cooperative_value(&g, PayoffKind::MPInf, 0).unwrap().value, q(2));
        assert_eq!(antagonistic_value(&g, PayoffKind::MPInf, 0).unwrap().value, q(1));
    }

    #[test]
    fn every_kind_realised() {
        for text in [G0, G1] {
            let g = parse_arena(text).unwrap();
            for p in PayoffKind::ALL {
                for v in 0..g.len() {
                    let g = g.with_initial(v);
                    let a = antagonistic_value(&g, p, v).unwrap();
                    let c = cooperative_value(&g, p, v).unwrap();
                    assert!(a.value <= c.value, "{p} {v}");
                    assert_eq!(realised(&g, &a, p), a.value, "{p} {v}");
                    assert_eq!(realised(&g, &c, p), c.value, "{p} {v}");
                }
            }
        }
    }

    #[test]
    fn single_loop() {
        let g = parse_arena("arena\nvertex a eve\nedge a a 7/3\ninit a\n").unwrap();
        for p in PayoffKind::ALL {
            assert_eq!(antagonistic_value(&g, p, 0).unwrap().value, frac(7, 3));
            assert_eq!(cooperative_value(&g, p, 0).unwrap().value, frac(7, 3));
        }
        assert!(antagonistic_value(&g, PayoffKind::Inf, 3).is_err());
    }
}
