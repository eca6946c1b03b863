use std::collections::HashMap;
use std::fmt::Write;

use crate::error::{Error, Result};
use crate::model::arena::lines;
use crate::rational::{parse_q, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transition {
    pub src: usize,
    pub sym: usize,
    pub dst: usize,
    pub weight: Q,
}

/// Nondeterministic weighted automaton, total on (state, symbol).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automaton {
    states: Vec<String>,
    alphabet: Vec<String>,
    trans: Vec<Transition>,
    // (state, symbol) -> transition indices
    by: Vec<Vec<Vec<usize>>>,
    initial: usize,
    w_max: Q,
}

impl Automaton {
    pub fn from_parts(
        states: Vec<String>,
        alphabet: Vec<String>,
        trans: Vec<Transition>,
        initial: usize,
    ) -> Result<Automaton> {
        let (n, k) = (states.len(), alphabet.len());
        if initial >= n {
            return Err(Error::invalid("initial state out of range"));
        }
        if k == 0 {
            return Err(Error::invalid("empty alphabet"));
        }
        let mut by = vec![vec![Vec::new(); k]; n];
        for (i, t) in trans.iter().enumerate() {
            if t.src >= n || t.dst >= n || t.sym >= k {
                return Err(Error::invalid(format!("transition {i} out of range")));
            }
            by[t.src][t.sym].push(i);
        }
        for q in 0..n {
            for a in 0..k {
                if by[q][a].is_empty() {
                    return Err(Error::invalid(format!(
                        "no transition from {} on {}",
                        states[q], alphabet[a]
                    )));
                }
            }
        }
        let w_max = crate::rational::max_abs(trans.iter().map(|t| &t.weight));
        Ok(Automaton { states, alphabet, trans, by, initial, w_max })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state_name(&self, q: usize) -> &str {
        &self.states[q]
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn letters(&self) -> usize {
        self.alphabet.len()
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.trans
    }

    pub fn transition(&self, t: usize) -> &Transition {
        &self.trans[t]
    }

    /// Transitions leaving `q` on `a`.
    pub fn succ(&self, q: usize, a: usize) -> &[usize] {
        &self.by[q][a]
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn w_max(&self) -> &Q {
        &self.w_max
    }

    pub fn is_deterministic(&self) -> bool {
        self.by.iter().all(|row| row.iter().all(|ts| ts.len() == 1))
    }

    pub fn weight_set(&self) -> Vec<Q> {
        let mut ws: Vec<Q> = self.trans.iter().map(|t| t.weight.clone()).collect();
        ws.sort();
        ws.dedup();
        ws
    }

    pub fn with_weights(&self, f: impl Fn(usize, &Transition) -> Q) -> Automaton {
        let trans = self
            .trans
            .iter()
            .enumerate()
            .map(|(i, t)| Transition { weight: f(i, t), ..t.clone() })
            .collect();
        Automaton::from_parts(self.states.clone(), self.alphabet.clone(), trans, self.initial).unwrap()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::from("automaton\nalphabet");
        for a in &self.alphabet {
            write!(s, " {a}").unwrap();
        }
        s.push('\n');
        for q in &self.states {
            writeln!(s, "state {q}").unwrap();
        }
        writeln!(s, "init {}", self.states[self.initial]).unwrap();
        for t in &self.trans {
            writeln!(
                s,
                "trans {} {} {} {}",
                self.states[t.src], self.alphabet[t.sym], self.states[t.dst], t.weight
            )
            .unwrap();
        }
        s
    }
}

pub fn parse_automaton(text: &str) -> Result<Automaton> {
    let mut it = lines(text);
    match it.next() {
        Some((_, t)) if t == ["automaton"] => {}
        Some((l, _)) => return Err(Error::parse(l, "expected header `automaton`")),
        None => return Err(Error::parse(1, "empty input")),
    }
    let mut alphabet: Vec<String> = Vec::new();
    let mut sym_ix: HashMap<String, usize> = HashMap::new();
    let mut states: Vec<String> = Vec::new();
    let mut state_ix: HashMap<String, usize> = HashMap::new();
    let mut decl_line = Vec::new();
    let mut init: Option<(usize, String)> = None;
    let mut pending = Vec::new();
    let mut alpha_line = None;
    let mut last = 1;
    for (l, t) in it {
        last = l;
        match t[0] {
            "alphabet" => {
                if alpha_line.is_some() {
                    return Err(Error::parse(l, "duplicate alphabet"));
                }
                if t.len() < 2 {
                    return Err(Error::parse(l, "empty alphabet"));
                }
                alpha_line = Some(l);
                for s in &t[1..] {
                    if sym_ix.insert(s.to_string(), alphabet.len()).is_some() {
                        return Err(Error::parse(l, format!("duplicate symbol `{s}`")));
                    }
                    alphabet.push(s.to_string());
                }
            }
            "state" => {
                if t.len() != 2 {
                    return Err(Error::parse(l, "expected `state <id>`"));
                }
                if state_ix.insert(t[1].to_string(), states.len()).is_some() {
                    return Err(Error::parse(l, format!("duplicate state `{}`", t[1])));
                }
                states.push(t[1].to_string());
                decl_line.push(l);
            }
            "init" => {
                if t.len() != 2 {
                    return Err(Error::parse(l, "expected `init <id>`"));
                }
                if init.is_some() {
                    return Err(Error::parse(l, "duplicate init"));
                }
                init = Some((l, t[1].to_string()));
            }
            "trans" => {
                if t.len() != 5 {
                    return Err(Error::parse(l, "expected `trans <src> <sym> <dst> <weight>`"));
                }
                let w = parse_q(t[4]).ok_or_else(|| Error::parse(l, format!("bad weight `{}`", t[4])))?;
                pending.push((l, t[1].to_string(), t[2].to_string(), t[3].to_string(), w));
            }
            k => return Err(Error::parse(l, format!("unknown directive `{k}`"))),
        }
    }
    if alpha_line.is_none() {
        return Err(Error::parse(last, "missing alphabet"));
    }
    let mut trans = Vec::new();
    for (l, s, a, d, w) in pending {
        let src = *state_ix.get(&s).ok_or_else(|| Error::parse(l, format!("unknown state `{s}`")))?;
        let sym = *sym_ix.get(&a).ok_or_else(|| Error::parse(l, format!("unknown symbol `{a}`")))?;
        let dst = *state_ix.get(&d).ok_or_else(|| Error::parse(l, format!("unknown state `{d}`")))?;
        trans.push(Transition { src, sym, dst, weight: w });
    }
    let (il, iname) = init.ok_or_else(|| Error::parse(last, "missing init"))?;
    let initial = *state_ix.get(&iname).ok_or_else(|| Error::parse(il, format!("unknown init state `{iname}`")))?;
    let mut seen = vec![vec![false; alphabet.len()]; states.len()];
    for t in &trans {
        seen[t.src][t.sym] = true;
    }
    for q in 0..states.len() {
        for a in 0..alphabet.len() {
            if !seen[q][a] {
                return Err(Error::parse(
                    decl_line[q],
                    format!("state `{}` has no transition on `{}` (automaton not total)", states[q], alphabet[a]),
                ));
            }
        }
    }
    Automaton::from_parts(states, alphabet, trans, initial)
}
