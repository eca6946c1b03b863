//! Payoff functions evaluated on ultimately periodic sequences.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::rational::Q;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PayoffKind {
    Inf,
    Sup,
    LimInf,
    LimSup,
    MPInf,
    MPSup,
}

impl PayoffKind {
    pub const ALL: [PayoffKind; 6] = [
        PayoffKind::Inf,
        PayoffKind::Sup,
        PayoffKind::LimInf,
        PayoffKind::LimSup,
        PayoffKind::MPInf,
        PayoffKind::MPSup,
    ];

    pub fn is_prefix_independent(self) -> bool {
        !matches!(self, PayoffKind::Inf | PayoffKind::Sup)
    }

    pub fn is_mean_payoff(self) -> bool {
        matches!(self, PayoffKind::MPInf | PayoffKind::MPSup)
    }

    /// Prefix-independent counterpart used after recording the running extremum.
    pub fn limit_version(self) -> PayoffKind {
        match self {
            PayoffKind::Inf => PayoffKind::LimInf,
            PayoffKind::Sup => PayoffKind::LimSup,
            p => p,
        }
    }

    pub fn cli_name(self) -> &'static str {
        match self {
            PayoffKind::Inf => "inf",
            PayoffKind::Sup => "sup",
            PayoffKind::LimInf => "liminf",
            PayoffKind::LimSup => "limsup",
            PayoffKind::MPInf => "mp-inf",
            PayoffKind::MPSup => "mp-sup",
        }
    }
}

impl fmt::Display for PayoffKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.cli_name())
    }
}

impl FromStr for PayoffKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PayoffKind::ALL
            .into_iter()
            .find(|p| p.cli_name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown payoff `{s}`")))
    }
}

/// The weight sequence `stem · cycle^ω`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lasso {
    pub stem: Vec<Q>,
    pub cycle: Vec<Q>,
}

impl Lasso {
    pub fn new(stem: Vec<Q>, cycle: Vec<Q>) -> Self {
        Lasso { stem, cycle }
    }
}

/// An ultimately periodic word over letter indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LassoWord {
    pub stem: Vec<usize>,
    pub cycle: Vec<usize>,
}

impl LassoWord {
    pub fn new(stem: Vec<usize>, cycle: Vec<usize>) -> Self {
        LassoWord { stem, cycle }
    }

    pub fn letter(&self, i: usize) -> usize {
        if i < self.stem.len() {
            self.stem[i]
        } else {
            self.cycle[(i - self.stem.len()) % self.cycle.len()]
        }
    }

    /// Position reached after reading letter `i`, folded onto `stem.len() + cycle.len()` slots.
    pub fn next_pos(&self, i: usize) -> usize {
        let n = self.stem.len() + self.cycle.len();
        if i + 1 < n {
            i + 1
        } else {
            self.stem.len()
        }
    }

    pub fn positions(&self) -> usize {
        self.stem.len() + self.cycle.len()
    }

    /// Shortest representation of the same infinite word.
    pub fn canonical(&self) -> LassoWord {
        let mut cycle = self.cycle.clone();
        let n = cycle.len();
        for d in 1..=n {
            if n % d == 0 && (0..n).all(|i| cycle[i] == cycle[i % d]) {
                cycle.truncate(d);
                break;
            }
        }
        let mut stem = self.stem.clone();
        while let Some(&l) = stem.last() {
            if l != *cycle.last().unwrap() {
                break;
            }
            stem.pop();
            cycle.rotate_right(1);
        }
        LassoWord { stem, cycle }
    }

    pub fn render(&self, alphabet: &[String]) -> String {
        let s: Vec<&str> = self.stem.iter().map(|&a| alphabet[a].as_str()).collect();
        let c: Vec<&str> = self.cycle.iter().map(|&a| alphabet[a].as_str()).collect();
        format!("{} ({})^w", s.join(" "), c.join(" ")).trim_start().to_string()
    }
}

pub fn lasso_value(l: &Lasso, p: PayoffKind) -> Result<Q> {
    if l.cycle.is_empty() {
        return Err(Error::invalid("lasso with empty cycle"));
    }
    let all = || l.stem.iter().chain(l.cycle.iter());
    Ok(match p {
        PayoffKind::Inf => all().min().unwrap().clone(),
        PayoffKind::Sup => all().max().unwrap().clone(),
        PayoffKind::LimInf => l.cycle.iter().min().unwrap().clone(),
        PayoffKind::LimSup => l.cycle.iter().max().unwrap().clone(),
        PayoffKind::MPInf | PayoffKind::MPSup => {
            let s: Q = l.cycle.iter().sum();
            s / Q::from_integer(BigInt::from(l.cycle.len()))
        }
    })
}
