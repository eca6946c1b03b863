//! Two-player game graphs on vertices, attractors, and Büchi/parity solving.

use crate::model::Player;

/// Game graph. Out-lists hold `(edge id, target)` so strategies can name edges.
#[derive(Clone, Debug, Default)]
pub struct Game {
    pub owner: Vec<Player>,
    pub out: Vec<Vec<(usize, usize)>>,
    pub inn: Vec<Vec<(usize, usize)>>,
    pub edge_count: usize,
}

pub type Mask = Vec<bool>;
/// Edge chosen at each vertex, if any.
pub type Strat = Vec<Option<usize>>;

pub fn full(n: usize) -> Mask {
    vec![true; n]
}

pub fn and(a: &Mask, b: &Mask) -> Mask {
    a.iter().zip(b).map(|(x, y)| *x && *y).collect()
}

pub fn minus(a: &Mask, b: &Mask) -> Mask {
    a.iter().zip(b).map(|(x, y)| *x && !*y).collect()
}

pub fn any(a: &Mask) -> bool {
    a.iter().any(|&x| x)
}

impl Game {
    pub fn with_owners(owner: Vec<Player>) -> Self {
        let n = owner.len();
        Game { owner, out: vec![Vec::new(); n], inn: vec![Vec::new(); n], edge_count: 0 }
    }

    pub fn add_vertex(&mut self, p: Player) -> usize {
        self.owner.push(p);
        self.out.push(Vec::new());
        self.inn.push(Vec::new());
        self.owner.len() - 1
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> usize {
        let id = self.edge_count;
        self.edge_count += 1;
        self.out[u].push((id, v));
        self.inn[v].push((id, u));
        id
    }

    pub fn len(&self) -> usize {
        self.owner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.owner.is_empty()
    }

    /// Attractor of `target` for `who` inside `within`, with the attracting choices.
    pub fn attractor(&self, who: Player, target: &Mask, within: &Mask) -> (Mask, Strat) {
        let n = self.len();
        let mut attr = and(target, within);
        let mut strat: Strat = vec![None; n];
        let mut count: Vec<usize> = (0..n)
            .map(|v| self.out[v].iter().filter(|&&(_, d)| within[d]).count())
            .collect();
        let mut queue: Vec<usize> = (0..n).filter(|&v| attr[v]).collect();
        while let Some(v) = queue.pop() {
            for &(e, u) in &self.inn[v] {
                if !within[u] || attr[u] {
                    continue;
                }
                if self.owner[u] == who {
                    attr[u] = true;
                    strat[u] = Some(e);
                    queue.push(u);
                } else {
                    count[u] -= 1;
                    if count[u] == 0 {
                        attr[u] = true;
                        queue.push(u);
                    }
                }
            }
        }
        (attr, strat)
    }

    /// First edge (lowest index in the out-list) that stays inside `region`.
    pub fn stay(&self, v: usize, region: &Mask) -> Option<usize> {
        self.out[v].iter().find(|&&(_, d)| region[d]).map(|&(e, _)| e)
    }

    /// Büchi game for `who` with target `target` inside `within`.
    /// Returns `who`'s winning region and strategies for both players on their regions.
    pub fn buchi(&self, who: Player, target: &Mask, within: &Mask) -> (Mask, Strat, Strat) {
        let n = self.len();
        let opp = who.opponent();
        let mut w = within.clone();
        let mut s_opp: Strat = vec![None; n];
        loop {
            let (a, _) = self.attractor(who, &and(target, &w), &w);
            let trap = minus(&w, &a);
            if !any(&trap) {
                break;
            }
            let (b, bs) = self.attractor(opp, &trap, &w);
            for v in 0..n {
                if b[v] && self.owner[v] == opp {
                    s_opp[v] = if trap[v] { self.stay(v, &trap) } else { bs[v] };
                }
            }
            w = minus(&w, &b);
        }
        let (_, a_str) = self.attractor(who, &and(target, &w), &w);
        let mut s_who: Strat = vec![None; n];
        for v in 0..n {
            if w[v] && self.owner[v] == who {
                s_who[v] = if target[v] { self.stay(v, &w) } else { a_str[v] };
            }
        }
        (w, s_who, s_opp)
    }

    /// Min-parity game on vertex priorities, odd priorities good for Eve.
    /// Returns Eve's winning region and a strategy that is winning for the owner
    /// of each vertex on that owner's region.
    pub fn parity(&self, prio: &[usize], within: &Mask) -> (Mask, Strat) {
        let n = self.len();
        let mut strat: Strat = vec![None; n];
        let weve = self.zielonka(prio, within, &mut strat);
        for v in 0..n {
            if within[v] && strat[v].is_none() {
                strat[v] = self.stay(v, within);
            }
        }
        (weve, strat)
    }

    fn zielonka(&self, prio: &[usize], g: &Mask, strat: &mut Strat) -> Mask {
        let n = self.len();
        let Some(p) = (0..n).filter(|&v| g[v]).map(|v| prio[v]).min() else {
            return vec![false; n];
        };
        let me = if p % 2 == 1 { Player::Eve } else { Player::Adam };
        let opp = me.opponent();
        let top: Mask = (0..n).map(|v| g[v] && prio[v] == p).collect();
        let (a, a_str) = self.attractor(me, &top, g);
        let rest = minus(g, &a);
        let w1_eve = self.zielonka(prio, &rest, strat);
        let w1_opp: Mask = (0..n).map(|v| rest[v] && (w1_eve[v] == (opp == Player::Eve))).collect();
        if !any(&w1_opp) {
            for v in 0..n {
                if a[v] && self.owner[v] == me {
                    strat[v] = if top[v] { self.stay(v, g) } else { a_str[v] };
                }
            }
            return if me == Player::Eve { g.clone() } else { vec![false; n] };
        }
        let (b, b_str) = self.attractor(opp, &w1_opp, g);
        for v in 0..n {
            if b[v] && !w1_opp[v] && self.owner[v] == opp {
                strat[v] = b_str[v];
            }
        }
        let rest2 = minus(g, &b);
        let w2_eve = self.zielonka(prio, &rest2, strat);
        (0..n)
            .map(|v| {
                if opp == Player::Eve {
                    b[v] || w2_eve[v]
                } else {
                    w2_eve[v]
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn attractor_counts_opponent() {
        // 0 (adam) -> 1, 0 -> 2 ; 1 target ; 2 -> 2
        let mut g = Game::with_owners(vec![Player::Adam, Player::Eve, Player::Eve]);
        g.add_edge(0, 1);
        g.add_edge(0, 2);
        g.add_edge(1, 1);
        g.add_edge(2, 2);
        let (a, _) = g.attractor(Player::Eve, &vec![false, true, false], &full(3));
        assert_eq!(a, vec![false, true, false]);
        let (a, s) = g.attractor(Player::Adam, &vec![false, true, false], &full(3));
        assert_eq!(a, vec![true, true, false]);
        assert_eq!(s[0], Some(0));
    }

    #[test]
    fn single_loops() {
        let mut g = Game::with_owners(vec![Player::Eve]);
        g.add_edge(0, 0);
        assert_eq!(g.parity(&[1], &full(1)).0, vec![true]);
        let mut g = Game::with_owners(vec![Player::Adam]);
        g.add_edge(0, 0);
        assert_eq!(g.parity(&[2], &full(1)).0, vec![false]);
    }
}
