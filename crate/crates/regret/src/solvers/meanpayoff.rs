//! Mean-payoff games on integer weights: value iteration for candidate values,
//! energy games (progress measures) for exact verification and strategies.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::model::Player;
use crate::rational::{nearest_fractions, Q};

#[derive(Clone, Debug)]
pub struct IntGame {
    pub owner: Vec<Player>,
    /// `(source, target, weight)`
    pub edges: Vec<(usize, usize, i64)>,
    out: Vec<Vec<usize>>,
    inn: Vec<Vec<usize>>,
}

#[derive(Clone, Debug)]
pub struct MpSolution {
    pub value: Q,
    /// Edge per vertex for its owner; optimal from the queried vertex.
    pub eve: Vec<Option<usize>>,
    pub adam: Vec<Option<usize>>,
}

impl IntGame {
    pub fn new(owner: Vec<Player>, edges: Vec<(usize, usize, i64)>) -> Self {
        let n = owner.len();
        let mut out = vec![Vec::new(); n];
        let mut inn = vec![Vec::new(); n];
        for (i, &(u, v, _)) in edges.iter().enumerate() {
            out[u].push(i);
            inn[v].push(i);
        }
        IntGame { owner, edges, out, inn }
    }

    fn n(&self) -> usize {
        self.owner.len()
    }

    fn w_max(&self) -> i64 {
        self.edges.iter().map(|e| e.2.abs()).max().unwrap_or(0)
    }

    /// Progress measure for `who` keeping the energy level non-negative under
    /// weights `b*w - a` (for Eve) or `a - b*w` (for Adam). Returns the winning
    /// mask and the energy player's choices.
    pub fn energy(&self, who: Player, a: i128, b: i128) -> (Vec<bool>, Vec<Option<usize>>) {
        let n = self.n();
        let wt: Vec<i128> = self
            .edges
            .iter()
            .map(|e| {
                let x = b * e.2 as i128 - a;
                if who == Player::Eve { x } else { -x }
            })
            .collect();
        let top: i128 = wt.iter().filter(|&&x| x < 0).map(|x| -x).max().unwrap_or(0) * n as i128 + 1;
        const INF: i128 = i128::MAX;
        let mut f = vec![0i128; n];
        let step = |f: &[i128], e: usize| -> i128 {
            let d = f[self.edges[e].1];
            if d == INF {
                INF
            } else {
                let r = (d - wt[e]).max(0);
                if r >= top { INF } else { r }
            }
        };
        let lift = |f: &[i128], v: usize| -> i128 {
            let it = self.out[v].iter().map(|&e| step(f, e));
            if self.owner[v] == who { it.min().unwrap_or(INF) } else { it.max().unwrap_or(INF) }
        };
        let mut queued = vec![true; n];
        let mut queue: std::collections::VecDeque<usize> = (0..n).collect();
        while let Some(v) = queue.pop_front() {
            queued[v] = false;
            let nv = lift(&f, v);
            if nv > f[v] {
                f[v] = nv;
                for &e in &self.inn[v] {
                    let u = self.edges[e].0;
                    if !queued[u] && f[u] != INF {
                        queued[u] = true;
                        queue.push_back(u);
                    }
                }
            }
        }
        let win: Vec<bool> = f.iter().map(|&x| x != INF).collect();
        let strat = (0..n)
            .map(|v| {
                if self.owner[v] != who {
                    return None;
                }
                self.out[v].iter().copied().min_by_key(|&e| (step(&f, e), e))
            })
            .collect();
        (win, strat)
    }

    fn fill(&self, s: &mut [Option<usize>], p: Player) {
        for v in 0..self.n() {
            if self.owner[v] == p && s[v].is_none() {
                s[v] = self.out[v].first().copied();
            }
        }
    }

    /// Both threshold checks at `a/b`; strategies when the value at `v` is exactly `a/b`.
    fn verify(&self, v: usize, c: &Q) -> Option<MpSolution> {
        let a = c.numer().to_i128()?;
        let b = c.denom().to_i128()?;
        let (we, mut se) = self.energy(Player::Eve, a, b);
        if !we[v] {
            return None;
        }
        let (wa, mut sa) = self.energy(Player::Adam, a, b);
        if !wa[v] {
            return None;
        }
        self.fill(&mut se, Player::Eve);
        self.fill(&mut sa, Player::Adam);
        Some(MpSolution { value: c.clone(), eve: se, adam: sa })
    }

    /// Exact value from `v` with optimal positional strategies.
    pub fn solve(&self, v: usize) -> MpSolution {
        let n = self.n() as i128;
        let w = self.w_max() as i128;
        let mut val = vec![0i128; self.n()];
        let mut k: i128 = 0;
        let mut next_check = n;
        let limit = 4 * n * n * n * w.max(1);
        let mut tried: Vec<Q> = Vec::new();
        let mut prev = (0i128, 0i128);
        loop {
            let mut nv = vec![0i128; self.n()];
            for u in 0..self.n() {
                let it = self.out[u].iter().map(|&e| self.edges[e].2 as i128 + val[self.edges[e].1]);
                nv[u] = if self.owner[u] == Player::Eve { it.max().unwrap() } else { it.min().unwrap() };
            }
            val = nv;
            k += 1;
            if k == next_check || k >= limit {
                // the slope since the last check cancels the transient offset
                let mut cands = nearest_fractions(val[v] - prev.0, k - prev.1, n as i64, 2);
                cands.extend(nearest_fractions(val[v], k, n as i64, 2));
                prev = (val[v], k);
                for c in cands {
                    if tried.contains(&c) {
                        continue;
                    }
                    if let Some(s) = self.verify(v, &c) {
                        return s;
                    }
                    tried.push(c);
                }
                if k >= limit {
                    break;
                }
                next_check = (next_check * 2).min(limit);
            }
        }
        self.bisect(v, val[v], k)
    }

    /// Fallback: all fractions with small denominators near the estimate, searched
    /// by the monotone Eve threshold check.
    fn bisect(&self, v: usize, est: i128, k: i128) -> MpSolution {
        let n = self.n() as i128;
        let w = self.w_max() as i128;
        let radius = 2 * n * w + 1;
        let mut cands: Vec<Q> = Vec::new();
        for d in 1..=n {
            let lo = num_integer::Integer::div_floor(&((est - radius) * d), &k);
            let hi = num_integer::Integer::div_floor(&((est + radius) * d), &k) + 1;
            for p in lo..=hi {
                cands.push(Q::new(BigInt::from(p), BigInt::from(d)));
            }
        }
        cands.sort();
        cands.dedup();
        // largest candidate Eve can guarantee
        let (mut lo, mut hi) = (0usize, cands.len());
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            let a = cands[mid].numer().to_i128().unwrap();
            let b = cands[mid].denom().to_i128().unwrap();
            if self.energy(Player::Eve, a, b).0[v] {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        self.verify(v, &cands[lo]).expect("mean-payoff value not found among candidates")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, q};

    #[test]
    fn loops_and_choices() {
        let g = IntGame::new(vec![Player::Eve], vec![(0, 0, -3)]);
        assert_eq!(g.solve(0).value, q(-3));
        // Adam at 0: loop 1 or go to 1 (loop 5)
        let g = IntGame::new(vec![Player::Adam, Player::Eve], vec![(0, 0, 1), (0, 1, 0), (1, 1, 5)]);
        let s = g.solve(0);
        assert_eq!(s.value, q(1));
        assert_eq!(s.adam[0], Some(0));
    }

    #[test]
    fn fractional_cycle() {
        // Eve chooses between a 2-cycle of mean 1/2 and a loop of 0
        let g = IntGame::new(vec![Player::Eve, Player::Eve], vec![(0, 1, 1), (1, 0, 0), (0, 0, 0)]);
        let s = g.solve(0);
        assert_eq!(s.value, frac(1, 2));
        assert_eq!(s.eve[0], Some(0));
    }

    #[test]
    fn energy_threshold() {
        let g = IntGame::new(vec![Player::Eve, Player::Eve], vec![(0, 1, 1), (1, 0, 0), (0, 0, 0)]);
        assert!(g.energy(Player::Eve, 1, 2).0[0]);
        assert!(!g.energy(Player::Eve, 2, 3).0[0]);
        assert!(g.energy(Player::Adam, 2, 3).0[0]);
    }
}
