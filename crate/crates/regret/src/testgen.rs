//! Instance generators: random arenas, automata and formulas, and the
//! hardness gadgets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{Arena, ArenaBuilder, Automaton, Player, Transition};
use crate::payoffs::PayoffKind;
use crate::rational::{frac, q, Q};

/// Random total arena. Every vertex gets between 1 and `max_outdeg` edges with
/// integer weights in `wmin..=wmax`; each vertex belongs to Eve with probability `eve_fraction`.
pub fn random_arena(n: usize, max_outdeg: usize, wmin: i64, wmax: i64, eve_fraction: f64, seed: u64) -> Arena {
    assert!(n > 0 && max_outdeg > 0 && wmin <= wmax);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = ArenaBuilder::new();
    for v in 0..n {
        let owner = if rng.random_bool(eve_fraction.clamp(0.0, 1.0)) { Player::Eve } else { Player::Adam };
        b.vertex(format!("v{v}"), owner);
    }
    for v in 0..n {
        for _ in 0..rng.random_range(1..=max_outdeg) {
            let u = rng.random_range(0..n);
            b.edge(v, u, q(rng.random_range(wmin..=wmax)));
        }
    }
    b.initial(0);
    b.build().expect("every vertex has an edge")
}

/// Random total automaton with `letters` letters named `a`, `b`, ...; every
/// (state, letter) gets between 1 and `max_per_letter` transitions.
pub fn random_automaton(n: usize, letters: usize, max_per_letter: usize, wmin: i64, wmax: i64, seed: u64) -> Automaton {
    assert!(n > 0 && letters > 0 && letters <= 26 && max_per_letter > 0 && wmin <= wmax);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trans = Vec::new();
    for src in 0..n {
        for sym in 0..letters {
            for _ in 0..rng.random_range(1..=max_per_letter) {
                let dst = rng.random_range(0..n);
                trans.push(Transition { src, sym, dst, weight: q(rng.random_range(wmin..=wmax)) });
            }
        }
    }
    let states = (0..n).map(|i| format!("q{i}")).collect();
    let alphabet = (0..letters).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    Automaton::from_parts(states, alphabet, trans, 0).expect("generated automaton is total")
}

fn fresh(b: &ArenaBuilder, base: &str) -> String {
    let mut name = base.to_string();
    while b.has_vertex(&name) {
        name.push('\'');
    }
    name
}

/// `g` behind a new Eve vertex that may instead enter a two-way Adam gadget
/// with loops `W+1` and `-3W-2`, so that `aVal(g) = W+1 - regret(result)`,
/// `W` being the largest absolute weight of `g`.
pub fn lemma4_gadget(g: &Arena, p: PayoffKind) -> Arena {
    let w = g.w_max().clone();
    let one = q(1);
    let n1 = &w + &one;
    let n2 = -(q(3) * &w) - q(2);
    // entry weights must not cap the gadget's extreme loops
    let l = match p {
        PayoffKind::Inf => n1.clone(),
        PayoffKind::Sup => n2.clone(),
        _ => q(0),
    };
    let mut b = ArenaBuilder::new();
    for v in 0..g.len() {
        b.vertex(g.name(v), g.owner(v));
    }
    for e in g.edges() {
        b.labeled_edge(e.src, e.dst, e.weight.clone(), e.label.clone());
    }
    let start = b.vertex(fresh(&b, "start"), Player::Eve);
    let split = b.vertex(fresh(&b, "split"), Player::Adam);
    let hi = b.vertex(fresh(&b, "high"), Player::Eve);
    let lo = b.vertex(fresh(&b, "low"), Player::Eve);
    b.edge(start, g.initial(), l.clone());
    b.edge(start, split, l.clone());
    b.edge(split, hi, l.clone());
    b.edge(split, lo, l);
    b.edge(hi, hi, n1);
    b.edge(lo, lo, n2);
    b.initial(start);
    b.build().expect("gadget is total")
}

/// CNF formula; literal `k > 0` is variable `k`, `-k` its negation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cnf {
    pub vars: usize,
    pub clauses: Vec<Vec<i32>>,
}

impl Cnf {
    pub fn new(clauses: Vec<Vec<i32>>) -> Result<Cnf> {
        if clauses.is_empty() || clauses.iter().any(|c| c.is_empty() || c.contains(&0)) {
            return Err(Error::invalid("formula needs nonempty clauses of nonzero literals"));
        }
        let vars = clauses.iter().flatten().map(|l| l.unsigned_abs() as usize).max().unwrap();
        Ok(Cnf { vars, clauses })
    }

    /// DIMACS text; the `p cnf` header is optional.
    pub fn parse(text: &str) -> Result<Cnf> {
        let mut clauses = Vec::new();
        let mut cur = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') || line.starts_with('p') {
                continue;
            }
            for tok in line.split_whitespace() {
                let l: i32 = tok.parse().map_err(|_| Error::parse(i + 1, format!("bad literal `{tok}`")))?;
                if l == 0 {
                    clauses.push(std::mem::take(&mut cur));
                } else {
                    cur.push(l);
                }
            }
        }
        if !cur.is_empty() {
            clauses.push(cur);
        }
        Cnf::new(clauses)
    }

    pub fn to_dimacs(&self) -> String {
        let mut s = format!("p cnf {} {}\n", self.vars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                s.push_str(&format!("{l} "));
            }
            s.push_str("0\n");
        }
        s
    }

    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|&l| assignment[l.unsigned_abs() as usize - 1] == (l > 0)))
    }
}

pub fn random_cnf(vars: usize, clauses: usize, width: usize, seed: u64) -> Cnf {
    assert!(vars > 0 && clauses > 0 && width > 0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cs = (0..clauses)
        .map(|_| {
            (0..width)
                .map(|_| {
                    let v = rng.random_range(1..=vars) as i32;
                    if rng.random_bool(0.5) {
                        v
                    } else {
                        -v
                    }
                })
                .collect()
        })
        .collect();
    let mut f = Cnf::new(cs).unwrap();
    f.vars = vars;
    f
}

/// Truth-table satisfiability.
pub fn brute_sat(f: &Cnf) -> Result<bool> {
    if f.vars > 20 {
        return Err(Error::invalid("too many variables for a truth table"));
    }
    Ok((0u32..1 << f.vars).any(|bits| {
        let a: Vec<bool> = (0..f.vars).map(|i| bits >> i & 1 == 1).collect();
        f.satisfied_by(&a)
    }))
}

/// Automaton in which a positional Eve keeps her regret below 1 iff `f` is
/// satisfiable. Adam spells `hash y i hash i` to challenge clause `i`: one branch
/// reaches a sink worth 1 deterministically, Eve picks a variable of clause `i`
/// and a truth value for it and reaches a sink worth 1/2 iff the literal lies in clause `i`.
/// With `Sup` the gadget transitions weigh 0 instead of 1.
pub fn sat_reduction(f: &Cnf, p: PayoffKind) -> Automaton {
    let n = f.clauses.len();
    let mut alphabet = vec!["bail".to_string(), "hash".to_string()];
    alphabet.extend((1..=n).map(|i| i.to_string()));
    let k = alphabet.len();
    let (bail, hash) = (0usize, 1usize);
    let clause = |i: usize| i + 2;
    let one = if p == PayoffKind::Sup { q(0) } else { q(1) };
    let zero = q(0);

    let mut states: Vec<String> = Vec::new();
    let mut st = |name: String| {
        states.push(name);
        states.len() - 1
    };
    let vi = st("init".into());
    let linter = st("left".into());
    let rinter = st("right".into());
    let bot0 = st("bot0".into());
    let bot1 = st("bot1".into());
    let bot_half = st("bot_half".into());
    let bot2 = st("bot2".into());
    let top = st("clauses".into());
    let picked: Vec<usize> = (1..=n).map(|i| st(format!("c{i}"))).collect();
    let hashed: Vec<usize> = (1..=n).map(|i| st(format!("c{i}h"))).collect();
    let q0 = st("q0".into());
    let xs: Vec<usize> = (1..=f.vars).map(|j| st(format!("x{j}"))).collect();
    let pos: Vec<usize> = (1..=f.vars).map(|j| st(format!("{j}_true"))).collect();
    let neg: Vec<usize> = (1..=f.vars).map(|j| st(format!("{j}_false"))).collect();

    let mut trans = Vec::new();
    let mut t = |src: usize, sym: usize, dst: usize, weight: &Q| trans.push(Transition { src, sym, dst, weight: weight.clone() });
    for (s, w) in [(bot0, zero.clone()), (bot1, q(1)), (bot_half, frac(1, 2)), (bot2, q(2))] {
        for l in 0..k {
            t(s, l, s, &w);
        }
    }
    for l in 0..k {
        if l == hash {
            t(vi, l, linter, &one);
            t(vi, l, rinter, &one);
        } else {
            t(vi, l, bot0, &zero);
        }
        if l == bail {
            t(linter, l, bot0, &zero);
            t(rinter, l, bot2, &one);
        } else {
            t(linter, l, top, &one);
            t(rinter, l, q0, &one);
        }
    }
    for i in 0..n {
        let vars: std::collections::BTreeSet<usize> = f.clauses[i].iter().map(|l| l.unsigned_abs() as usize - 1).collect();
        for l in 0..k {
            t(top, l, if l == clause(i) { picked[i] } else { bot0 }, if l == clause(i) { &one } else { &zero });
            t(picked[i], l, if l == hash { hashed[i] } else { bot0 }, if l == hash { &one } else { &zero });
            t(hashed[i], l, if l == clause(i) { bot1 } else { bot0 }, if l == clause(i) { &one } else { &zero });
        }
        for &j in &vars {
            t(q0, clause(i), xs[j], &one);
        }
    }
    for l in [bail, hash] {
        t(q0, l, bot0, &zero);
    }
    for j in 0..f.vars {
        for l in 0..k {
            if l == hash {
                t(xs[j], l, pos[j], &one);
                t(xs[j], l, neg[j], &one);
            } else {
                t(xs[j], l, bot0, &zero);
            }
        }
        for (b, s) in [(true, pos[j]), (false, neg[j])] {
            for l in 0..k {
                let hit = l >= 2 && f.clauses[l - 2].iter().any(|&x| x.unsigned_abs() as usize == j + 1 && (x > 0) == b);
                t(s, l, if hit { bot_half } else { bot0 }, if hit { &one } else { &zero });
            }
        }
    }
    Automaton::from_parts(states, alphabet, trans, vi).expect("reduction automaton is total")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{brute_regret_any, cycle_forming_value};
    use crate::regret_any::regret_any;
    use crate::solvers::{antagonistic_value, cooperative_value};
    use crate::word::{fixed_memory_regret_search, fixed_memory_regret_value};
    use crate::model::parse_arena;

    const G0: &str = include_str!("../../../fixtures/g0.arena");
    const G1: &str = include_str!("../../../fixtures/g1.arena");

    fn two_clause() -> Cnf {
        Cnf::new(vec![vec![1, 2], vec![-1, 2], vec![-1, -2]]).unwrap()
    }

    #[test]
    fn random_arena_is_deterministic() {
        assert_eq!(random_arena(4, 2, -2, 2, 0.5, 7), random_arena(4, 2, -2, 2, 0.5, 7));
        let one = random_arena(1, 1, 0, 0, 1.0, 99);
        assert_eq!(one.len(), 1);
        assert_eq!(one.edges().len(), 1);
        assert_eq!(one.edge(0).dst, 0);
        assert_eq!(one.owner(0), Player::Eve);
    }

    #[test]
    fn random_arenas_are_sane() {
        for seed in 0..50 {
            let g = random_arena(4, 2, -2, 2, 0.5, seed);
            let g2 = parse_arena(&g.to_text()).unwrap();
            assert_eq!(g, g2);
            for p in [PayoffKind::LimInf, PayoffKind::LimSup, PayoffKind::MPInf, PayoffKind::MPSup] {
                let a = antagonistic_value(&g, p, g.initial()).unwrap().value;
                let c = cooperative_value(&g, p, g.initial()).unwrap().value;
                assert!(a <= c);
            }
        }
    }

    #[test]
    fn gadget_on_fixtures() {
        let single = parse_arena("arena\nvertex a eve\nedge a a 0\ninit a\n").unwrap();
        let g = lemma4_gadget(&single, PayoffKind::MPInf);
        assert_eq!(g.len(), 5);
        assert_eq!(regret_any(&g, PayoffKind::MPInf).unwrap().regret, q(1));
        let g1 = parse_arena(G1).unwrap();
        let w = g1.w_max().clone();
        let r = regret_any(&lemma4_gadget(&g1, PayoffKind::MPInf), PayoffKind::MPInf).unwrap().regret;
        assert_eq!(r, &w + q(1) - q(1));
        let g0 = parse_arena(G0).unwrap();
        let w = g0.w_max().clone();
        let r = regret_any(&lemma4_gadget(&g0, PayoffKind::MPInf), PayoffKind::MPInf).unwrap().regret;
        assert_eq!(r, &w + q(1) - frac(1, 2));
        assert_eq!(brute_regret_any(&lemma4_gadget(&g0, PayoffKind::MPInf), PayoffKind::MPInf).unwrap(), r);
    }

    #[test]
    fn cnf_basics() {
        assert!(brute_sat(&Cnf::new(vec![vec![1]]).unwrap()).unwrap());
        assert!(!brute_sat(&Cnf::new(vec![vec![1], vec![-1]]).unwrap()).unwrap());
        assert!(brute_sat(&two_clause()).unwrap());
        assert!(two_clause().satisfied_by(&[false, true]));
        assert_eq!(Cnf::parse(&two_clause().to_dimacs()).unwrap(), two_clause());
        assert!(Cnf::new(vec![vec![]]).is_err());
        assert!(Cnf::parse("1 x 0").is_err());
    }

    #[test]
    fn sat_reduction_examples() {
        let a = sat_reduction(&two_clause(), PayoffKind::MPInf);
        assert_eq!(crate::model::parse_automaton(&a.to_text()).unwrap(), a);
        let (v, s) = fixed_memory_regret_value(&a, PayoffKind::MPInf, 1, 100_000).unwrap();
        assert_eq!(v, frac(1, 2));
        // x1 false, x2 true
        let k = a.letters();
        let x = |j: usize| a.states().iter().position(|n| *n == format!("x{j}")).unwrap();
        let dst = |q: usize| a.state_name(a.transition(s.choose(q * k + 1, 0).unwrap()).dst).to_string();
        assert_eq!(dst(x(1)), "1_false");
        assert_eq!(dst(x(2)), "2_true");

        let unsat = sat_reduction(&Cnf::new(vec![vec![1], vec![-1]]).unwrap(), PayoffKind::MPInf);
        assert_eq!(fixed_memory_regret_value(&unsat, PayoffKind::MPInf, 1, 100_000).unwrap().0, q(1));

        let single = sat_reduction(&Cnf::new(vec![vec![1]]).unwrap(), PayoffKind::LimInf);
        let s = fixed_memory_regret_search(&single, PayoffKind::LimInf, 1, &q(1), true, 100_000).unwrap().unwrap();
        let x1 = single.states().iter().position(|n| n == "x1").unwrap();
        assert_eq!(single.state_name(single.transition(s.choose(x1 * single.letters() + 1, 0).unwrap()).dst), "1_true");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(50))]
            #[test]
            fn lemma4_roundtrip(seed in any::<u64>(), n in 1usize..=5, pi in 0usize..6) {
                let p = PayoffKind::ALL[pi];
                let g = random_arena(n, 2, -2, 2, 0.5, seed);
                let w = g.w_max().clone();
                let aval = if p.is_prefix_independent() {
                    cycle_forming_value(&g, p).unwrap()
                } else {
                    antagonistic_value(&g, p, g.initial()).unwrap().value
                };
                let r = regret_any(&lemma4_gadget(&g, p), p).unwrap().regret;
                prop_assert_eq!(aval, &w + q(1) - r);
            }
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(20))]
            #[test]
            fn sat_agreement(seed in any::<u64>(), vars in 1usize..=4, clauses in 1usize..=4) {
                let f = random_cnf(vars, clauses, 3, seed);
                let sat = brute_sat(&f).unwrap();
                for p in [PayoffKind::Inf, PayoffKind::Sup, PayoffKind::LimInf, PayoffKind::LimSup, PayoffKind::MPInf] {
                    let a = sat_reduction(&f, p);
                    let found = fixed_memory_regret_search(&a, p, 1, &q(1), true, 1_000_000).unwrap();
                    prop_assert_eq!(found.is_some(), sat, "{} {:?}", p, f);
                }
            }
        }
    }
}
