use std::collections::HashMap;
use std::fmt::Write;

use crate::error::{Error, Result};
use crate::rational::{parse_q, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Player {
    Eve,
    Adam,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Eve => Player::Adam,
            Player::Adam => Player::Eve,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub weight: Q,
    pub label: Option<String>,
}

/// Finite weighted game graph. Vertices and edges keep declaration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arena {
    names: Vec<String>,
    owner: Vec<Player>,
    edges: Vec<Edge>,
    out: Vec<Vec<usize>>,
    initial: usize,
    w_max: Q,
}

#[derive(Default, Clone, Debug)]
pub struct ArenaBuilder {
    names: Vec<String>,
    owner: Vec<Player>,
    index: HashMap<String, usize>,
    edges: Vec<Edge>,
    initial: Option<usize>,
}

impl ArenaBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(&mut self, name: impl Into<String>, owner: Player) -> usize {
        let name = name.into();
        if let Some(&i) = self.index.get(&name) {
            return i;
        }
        let i = self.names.len();
        self.index.insert(name.clone(), i);
        self.names.push(name);
        self.owner.push(owner);
        i
    }

    pub fn has_vertex(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn lookup(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn edge(&mut self, src: usize, dst: usize, weight: Q) -> usize {
        self.edges.push(Edge { src, dst, weight, label: None });
        self.edges.len() - 1
    }

    pub fn labeled_edge(&mut self, src: usize, dst: usize, weight: Q, label: Option<String>) {
        self.edges.push(Edge { src, dst, weight, label });
    }

    pub fn initial(&mut self, v: usize) {
        self.initial = Some(v);
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn build(self) -> Result<Arena> {
        let initial = self.initial.ok_or_else(|| Error::invalid("missing init"))?;
        Arena::from_parts(self.names, self.owner, self.edges, initial)
    }
}

impl Arena {
    pub fn from_parts(
        names: Vec<String>,
        owner: Vec<Player>,
        edges: Vec<Edge>,
        initial: usize,
    ) -> Result<Arena> {
        let n = names.len();
        if initial >= n {
            return Err(Error::invalid("initial vertex out of range"));
        }
        let mut out = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            if e.src >= n || e.dst >= n {
                return Err(Error::invalid(format!("edge {i} has an unknown endpoint")));
            }
            out[e.src].push(i);
        }
        if let Some(v) = (0..n).find(|&v| out[v].is_empty()) {
            return Err(Error::invalid(format!("vertex {} has no outgoing edge", names[v])));
        }
        let w_max = crate::rational::max_abs(edges.iter().map(|e| &e.weight));
        Ok(Arena { names, owner, edges, out, initial, w_max })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn owner(&self, v: usize) -> Player {
        self.owner[v]
    }

    pub fn owners(&self) -> &[Player] {
        &self.owner
    }

    pub fn is_eve(&self, v: usize) -> bool {
        self.owner[v] == Player::Eve
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn out(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    /// Largest absolute weight.
    pub fn w_max(&self) -> &Q {
        &self.w_max
    }

    pub fn with_initial(&self, v: usize) -> Arena {
        let mut a = self.clone();
        a.initial = v;
        a
    }

    /// Distinct weights in increasing order.
    pub fn weight_set(&self) -> Vec<Q> {
        let mut ws: Vec<Q> = self.edges.iter().map(|e| e.weight.clone()).collect();
        ws.sort();
        ws.dedup();
        ws
    }

    /// Same arena keeping only the edges selected by `keep`. Fails if the result is not total.
    pub fn restrict(&self, keep: impl Fn(usize) -> bool) -> Result<Arena> {
        let edges = (0..self.edges.len())
            .filter(|&e| keep(e))
            .map(|e| self.edges[e].clone())
            .collect();
        Arena::from_parts(self.names.clone(), self.owner.clone(), edges, self.initial)
    }

    /// Vertices reachable from `from`.
    pub fn reachable(&self, from: usize) -> Vec<bool> {
        let mut seen = vec![false; self.len()];
        let mut stack = vec![from];
        seen[from] = true;
        while let Some(v) = stack.pop() {
            for &e in &self.out[v] {
                let d = self.edges[e].dst;
                if !seen[d] {
                    seen[d] = true;
                    stack.push(d);
                }
            }
        }
        seen
    }

    pub fn to_text(&self) -> String {
        let mut s = String::from("arena\n");
        for v in 0..self.len() {
            let o = match self.owner[v] {
                Player::Eve => "eve",
                Player::Adam => "adam",
            };
            writeln!(s, "vertex {} {}", self.names[v], o).unwrap();
        }
        writeln!(s, "init {}", self.names[self.initial]).unwrap();
        for e in &self.edges {
            write!(s, "edge {} {} {}", self.names[e.src], self.names[e.dst], e.weight).unwrap();
            if let Some(l) = &e.label {
                write!(s, " {l}").unwrap();
            }
            s.push('\n');
        }
        s
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

pub(crate) fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, strip_comment(l).split_whitespace().collect::<Vec<_>>()))
        .filter(|(_, t)| !t.is_empty())
}

pub fn parse_arena(text: &str) -> Result<Arena> {
    let mut it = lines(text);
    match it.next() {
        Some((_, t)) if t == ["arena"] => {}
        Some((l, _)) => return Err(Error::parse(l, "expected header `arena`")),
        None => return Err(Error::parse(1, "empty input")),
    }
    let mut b = ArenaBuilder::new();
    let mut decl_line = Vec::new();
    let mut init: Option<(usize, String)> = None;
    let mut pending = Vec::new();
    let mut last = 1;
    for (l, t) in it {
        last = l;
        match t[0] {
            "vertex" => {
                if t.len() != 3 {
                    return Err(Error::parse(l, "expected `vertex <id> eve|adam`"));
                }
                let owner = match t[2] {
                    "eve" => Player::Eve,
                    "adam" => Player::Adam,
                    o => return Err(Error::parse(l, format!("unknown owner `{o}`"))),
                };
                if b.has_vertex(t[1]) {
                    return Err(Error::parse(l, format!("duplicate vertex `{}`", t[1])));
                }
                b.vertex(t[1], owner);
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
            "edge" => {
                if t.len() != 4 && t.len() != 5 {
                    return Err(Error::parse(l, "expected `edge <src> <dst> <weight> [<label>]`"));
                }
                let w = parse_q(t[3])
                    .ok_or_else(|| Error::parse(l, format!("bad weight `{}`", t[3])))?;
                pending.push((l, t[1].to_string(), t[2].to_string(), w, t.get(4).map(|s| s.to_string())));
            }
            k => return Err(Error::parse(l, format!("unknown directive `{k}`"))),
        }
    }
    for (l, s, d, w, label) in pending {
        let src = b.lookup(&s).ok_or_else(|| Error::parse(l, format!("unknown endpoint `{s}`")))?;
        let dst = b.lookup(&d).ok_or_else(|| Error::parse(l, format!("unknown endpoint `{d}`")))?;
        b.labeled_edge(src, dst, w, label);
    }
    let (il, iname) = init.ok_or_else(|| Error::parse(last, "missing init"))?;
    let iv = b.lookup(&iname).ok_or_else(|| Error::parse(il, format!("unknown init vertex `{iname}`")))?;
    b.initial(iv);
    let mut has_out = vec![false; b.len()];
    for e in &b.edges {
        has_out[e.src] = true;
    }
    if let Some(v) = has_out.iter().position(|h| !h) {
        return Err(Error::parse(decl_line[v], format!("vertex `{}` has no outgoing edge (arena not total)", b.names[v])));
    }
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, q};

    const G0: &str = include_str!("../../../../fixtures/g0.arena");

    #[test]
    fn parses_g0() {
        let a = parse_arena(G0).unwrap();
        assert_eq!(a.len(), 5);
        assert_eq!(a.edges().len(), 8);
        assert_eq!(a.w_max(), &q(2));
        assert_eq!(a.edge(4).weight, frac(1, 2));
        assert_eq!(a.name(a.initial()), "v1");
    }

    #[test]
    fn smallest_arena() {
        let a = parse_arena("arena\nvertex a eve\ninit a\nedge a a 0\n").unwrap();
        assert_eq!(a.w_max(), &q(0));
    }

    #[test]
    fn errors_carry_lines() {
        let e = parse_arena("arena\nvertex a eve\nvertex b adam\ninit a\nedge a b 1\n").unwrap_err();
        assert_eq!(e, Error::Parse { line: 3, msg: "vertex `b` has no outgoing edge (arena not total)".into() });
        let e = parse_arena("arena\nvertex a eve\nvertex a adam\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }));
        let e = parse_arena("arena\nvertex a eve\ninit a\nedge a c 1\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 4, .. }));
        let e = parse_arena("arena\nvertex a eve\nedge a a 1\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, ref msg } if msg == "missing init"));
        let e = parse_arena("arena\nvertex a eve\ninit a\nedge a a 1/x\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 4, .. }));
    }

    #[test]
    fn roundtrip_g0() {
        let a = parse_arena(G0).unwrap();
        let b = parse_arena(&a.to_text()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_text(), b.to_text());
    }
}
