//! Deterministic LimInf automaton equivalent to a nondeterministic one.

use std::collections::{HashMap, VecDeque};

use crate::model::Automaton;
use crate::payoffs::{lasso_value, Lasso, LassoWord, PayoffKind};
use crate::rational::Q;

/// Deterministic, total weighted automaton.
#[derive(Clone, Debug)]
pub struct DetWeighted {
    pub initial: usize,
    pub letters: usize,
    /// `state * letters + letter` -> (successor, weight)
    pub delta: Vec<(usize, Q)>,
}

impl DetWeighted {
    pub fn len(&self) -> usize {
        self.delta.len() / self.letters.max(1)
    }

    pub fn is_empty(&self) -> bool {
        self.delta.is_empty()
    }

    pub fn step(&self, s: usize, a: usize) -> &(usize, Q) {
        &self.delta[s * self.letters + a]
    }

    /// Value of the unique run on `w`.
    pub fn value(&self, w: &LassoWord, p: PayoffKind) -> Q {
        let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
        let mut ws = Vec::new();
        let (mut s, mut i) = (self.initial, 0usize);
        loop {
            if let Some(&j) = seen.get(&(s, i)) {
                let cycle = ws.split_off(j);
                return lasso_value(&Lasso::new(ws, cycle), p).expect("nonempty cycle");
            }
            seen.insert((s, i), ws.len());
            let (t, x) = self.step(s, w.letter(i));
            ws.push(x.clone());
            s = *t;
            i = w.next_pos(i);
        }
    }
}

/// Reachable-set plus one breakpoint obligation set per weight threshold.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct State {
    reach: u64,
    owe: Vec<u64>,
}

fn post(a: &Automaton, set: u64, l: usize, min: Option<&Q>) -> u64 {
    let mut out = 0u64;
    let mut s = set;
    while s != 0 {
        let q = s.trailing_zeros() as usize;
        s &= s - 1;
        for &t in a.succ(q, l) {
            let tr = a.transition(t);
            if min.is_none_or(|x| tr.weight >= *x) {
                out |= 1 << tr.dst;
            }
        }
    }
    out
}

/// For threshold `x_i` the obligation set follows the runs that have used only
/// weights `>= x_i` since its last reset; a word has value `>= x_i` iff it resets
/// finitely often. Each step emits the threshold just below the least one that
/// resets, so the liminf of the output is the largest threshold reset finitely often.
pub fn determinize_liminf(a: &Automaton) -> DetWeighted {
    assert!(a.len() <= 64, "automaton too large");
    let xs = a.weight_set();
    let k = a.letters();
    let init = State { reach: 1 << a.initial(), owe: vec![0; xs.len()] };
    let mut ids: HashMap<State, usize> = HashMap::from([(init.clone(), 0)]);
    let mut states = vec![init];
    let mut delta: Vec<(usize, Q)> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    let mut rows: Vec<Vec<(usize, Q)>> = vec![Vec::new()];
    while let Some(i) = queue.pop_front() {
        let mut row = Vec::new();
        for l in 0..k {
            let s = &states[i];
            let reach = post(a, s.reach, l, None);
            let mut owe = Vec::with_capacity(xs.len());
            let mut first_reset = None;
            for (j, x) in xs.iter().enumerate() {
                if s.owe[j] == 0 {
                    first_reset.get_or_insert(j);
                    owe.push(post(a, s.reach, l, Some(x)));
                } else {
                    owe.push(post(a, s.owe[j], l, Some(x)));
                }
            }
            let out = match first_reset {
                None => xs[xs.len() - 1].clone(),
                Some(0) => xs[0].clone(),
                Some(j) => xs[j - 1].clone(),
            };
            let t = State { reach, owe };
            let id = match ids.get(&t) {
                Some(&id) => id,
                None => {
                    states.push(t.clone());
                    rows.push(Vec::new());
                    ids.insert(t, states.len() - 1);
                    queue.push_back(states.len() - 1);
                    states.len() - 1
                }
            };
            row.push((id, out));
        }
        rows[i] = row;
    }
    for r in rows {
        delta.extend(r);
    }
    DetWeighted { initial: 0, letters: k, delta }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_automaton;
    use crate::oracle::{all_lassos, lasso_automaton_value};
    use crate::rational::{frac, q};

    const A0: &str = include_str!("../../../../fixtures/a0.aut");

    fn agree(a: &Automaton, len: usize) {
        let d = determinize_liminf(a);
        for w in all_lassos(a.letters(), len) {
            assert_eq!(d.value(&w, PayoffKind::LimInf), lasso_automaton_value(a, PayoffKind::LimInf, &w), "{w:?}");
        }
    }

    #[test]
    fn a0_values() {
        let a = parse_automaton(A0).unwrap();
        let d = determinize_liminf(&a);
        assert_eq!(d.value(&LassoWord::new(vec![], vec![0, 1]), PayoffKind::LimInf), q(1));
        assert_eq!(d.value(&LassoWord::new(vec![], vec![1]), PayoffKind::LimInf), frac(1, 2));
        agree(&a, 8);
    }

    #[test]
    fn deterministic_input() {
        let a = parse_automaton("automaton\nalphabet a b\nstate p\nstate r\ninit p\ntrans p a r 3\ntrans p b p 0\ntrans r a r 1\ntrans r b p 2\n").unwrap();
        agree(&a, 8);
    }

    mod props {
        use super::*;
        use crate::testgen::random_automaton;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(60))]
            #[test]
            fn matches_oracle(seed in any::<u64>(), n in 1usize..=4) {
                let a = random_automaton(n, 2, 2, -1, 1, seed);
                let d = determinize_liminf(&a);
                for w in all_lassos(2, 6) {
                    prop_assert_eq!(d.value(&w, PayoffKind::LimInf), lasso_automaton_value(&a, PayoffKind::LimInf, &w));
                }
            }
        }
    }
}
