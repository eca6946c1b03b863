//! Regret against word strategies: Adam commits to an infinite word and Eve
//! resolves the nondeterminism of a weighted automaton letter by letter.

pub mod fixed;
pub mod games;
pub mod liminf;
pub mod monitor;

use crate::error::{Error, Result};
use crate::model::strategy::{explore_word, word_run_lasso};
use crate::model::{record_automaton, Automaton, Extremum, MooreStrategy};
use crate::oracle::lasso_automaton_value;
use crate::payoffs::{lasso_value, LassoWord, PayoffKind};
use crate::rational::Q;

pub use fixed::{
    fixed_memory_regret, fixed_memory_regret_check, fixed_memory_regret_search, fixed_memory_regret_value, FixedCheck,
    DEFAULT_SEARCH_BUDGET,
};
pub use games::{build_parity_regret_game, build_streett_regret_game};
pub use liminf::{determinize_liminf, DetWeighted};
pub use monitor::{determinize_buchi_to_parity, threshold_monitor, Acceptance, Dpa, Monitor};

use games::GameAnswer;

/// A word on which Eve's run falls short: `best` is the word's value, `achieved` her run's.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spoiler {
    pub word: LassoWord,
    pub best: Q,
    pub achieved: Q,
}

#[derive(Clone, Debug)]
pub struct WordRegretCertificate {
    pub answer: bool,
    /// present iff `answer`
    pub eve_strategy: Option<MooreStrategy>,
    /// present iff not `answer`
    pub spoiler: Option<Spoiler>,
}

fn refuse_mean_payoff(p: PayoffKind) -> Result<()> {
    if p.is_mean_payoff() {
        return Err(Error::Undecidable(format!("word regret for {p} needs a memory bound")));
    }
    Ok(())
}

/// Pulls a strategy on the record automaton back to `a`.
fn unrecord(a: &Automaton, rec: &crate::model::RecordAutomaton, s: &MooreStrategy) -> MooreStrategy {
    let r = &rec.automaton;
    let k = a.letters();
    explore_word(
        a,
        (r.initial(), s.initial_memory),
        |_, l, &(q, m)| rec.trans_origin[s.choose(q * k + l, m).expect("strategy covers reachable states")],
        |&(q, m), t| {
            let l = a.transition(t).sym;
            let rt = *r.succ(q, l).iter().find(|&&u| rec.trans_origin[u] == t).expect("record copy of transition");
            (r.transition(rt).dst, s.next(m, rt))
        },
    )
}

/// Decides whether Eve has a word strategy with regret at most `r` (below `r` with `strict`).
pub fn regret_word_threshold(a: &Automaton, p: PayoffKind, r: &Q, strict: bool) -> Result<WordRegretCertificate> {
    refuse_mean_payoff(p)?;
    let rec = match p {
        PayoffKind::Inf => Some(record_automaton(a, Extremum::Min)),
        PayoffKind::Sup => Some(record_automaton(a, Extremum::Max)),
        _ => None,
    };
    let g = rec.as_ref().map_or(a, |x| &x.automaton);
    let answer = match p.limit_version() {
        PayoffKind::LimInf => {
            let d = determinize_liminf(g);
            games::solve_parity_regret(g, &build_parity_regret_game(g, &d, r, strict))
        }
        _ => games::solve_streett_regret(g, &build_streett_regret_game(g, r, strict)),
    };
    Ok(match answer {
        GameAnswer::Eve(s) => {
            let s = rec.as_ref().map_or(s.clone(), |x| unrecord(a, x, &s));
            WordRegretCertificate { answer: true, eve_strategy: Some(s), spoiler: None }
        }
        GameAnswer::Adam(rounds, at) => {
            let letters: Vec<usize> = rounds.iter().map(|x| x.0).collect();
            let word = LassoWord::new(letters[..at].to_vec(), letters[at..].to_vec());
            // replay the losing run in `a`
            let ts: Vec<usize> = rounds.iter().map(|x| rec.as_ref().map_or(x.1, |y| y.trans_origin[x.1])).collect();
            let run = explore_word(a, 0usize, |_, _, &i| ts[i.min(ts.len() - 1)], |&i, _| if i + 1 < ts.len() { i + 1 } else { at });
            let achieved = lasso_value(&word_run_lasso(a, &run, &word).expect("play is a run"), p)?;
            let best = lasso_automaton_value(a, p, &word);
            WordRegretCertificate { answer: false, eve_strategy: None, spoiler: Some(Spoiler { word: word.canonical(), best, achieved }) }
        }
    })
}

/// Candidate regret values: differences of weights, after recording extrema for Inf and Sup.
fn candidates(a: &Automaton, p: PayoffKind) -> Vec<Q> {
    let ws = match p {
        PayoffKind::Inf => record_automaton(a, Extremum::Min).automaton.weight_set(),
        PayoffKind::Sup => record_automaton(a, Extremum::Max).automaton.weight_set(),
        _ => a.weight_set(),
    };
    let zero = Q::from_integer(0.into());
    let mut c: Vec<Q> = ws.iter().flat_map(|x| ws.iter().map(move |y| x - y)).filter(|d| *d >= zero).collect();
    c.push(zero);
    c.sort();
    c.dedup();
    c
}

/// Least regret Eve can ensure with a word strategy, with a strategy achieving it.
pub fn regret_word_value(a: &Automaton, p: PayoffKind) -> Result<(Q, MooreStrategy)> {
    refuse_mean_payoff(p)?;
    let c = candidates(a, p);
    // the largest candidate is the full weight spread, always enough
    let (mut lo, mut hi) = (0usize, c.len() - 1);
    let mut best = regret_word_threshold(a, p, &c[hi], false)?;
    while lo < hi {
        let mid = (lo + hi) / 2;
        let cert = regret_word_threshold(a, p, &c[mid], false)?;
        if cert.answer {
            hi = mid;
            best = cert;
        } else {
            lo = mid + 1;
        }
    }
    let s = best.eve_strategy.expect("largest candidate always succeeds");
    Ok((c[hi].clone(), s))
}

/// Whether Eve can resolve the nondeterminism online within `alpha` of the word's value.
pub fn is_good_for_games(a: &Automaton, p: PayoffKind, alpha: &Q, strict: bool) -> Result<bool> {
    Ok(regret_word_threshold(a, p, alpha, strict)?.answer)
}

/// Whether pruning a refinement of `a` by `k` boolean memory bits stays within `alpha`.
pub fn is_dbp(a: &Automaton, p: PayoffKind, alpha: &Q, k: u32, strict: bool, budget: usize) -> Result<bool> {
    let m = 1usize.checked_shl(k).ok_or_else(|| Error::invalid("too many memory bits"))?;
    Ok(fixed_memory_regret_search(a, p, m, alpha, strict, budget)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_automaton;
    use crate::model::strategy::is_legal_word;
    use crate::rational::{frac, q};

    const A0: &str = include_str!("../../../../fixtures/a0.aut");
    const DET: &str = "automaton\nalphabet a b\nstate p\nstate r\ninit p\ntrans p a r 3\ntrans p b p 0\ntrans r a r 1\ntrans r b p 2\n";

    #[test]
    fn a0_liminf_thresholds() {
        let a = parse_automaton(A0).unwrap();
        let yes = regret_word_threshold(&a, PayoffKind::LimInf, &frac(3, 2), true).unwrap();
        assert!(yes.answer);
        assert!(is_legal_word(&a, yes.eve_strategy.as_ref().unwrap()));
        let no = regret_word_threshold(&a, PayoffKind::LimInf, &frac(1, 2), true).unwrap();
        assert!(!no.answer);
        let sp = no.spoiler.unwrap();
        assert!(&sp.best - &sp.achieved >= frac(1, 2));
        assert!(regret_word_threshold(&a, PayoffKind::LimInf, &q(1), false).unwrap().answer);
        assert!(!regret_word_threshold(&a, PayoffKind::LimInf, &q(1), true).unwrap().answer);
    }

    #[test]
    fn a0_values() {
        let a = parse_automaton(A0).unwrap();
        assert_eq!(regret_word_value(&a, PayoffKind::LimSup).unwrap().0, q(0));
        assert_eq!(regret_word_value(&a, PayoffKind::LimInf).unwrap().0, q(1));
        assert_eq!(regret_word_value(&a, PayoffKind::Inf).unwrap().0, q(0));
        assert_eq!(regret_word_value(&a, PayoffKind::Sup).unwrap().0, q(0));
        assert!(regret_word_threshold(&a, PayoffKind::LimSup, &frac(1, 4), false).unwrap().answer);
        assert!(is_good_for_games(&a, PayoffKind::LimSup, &q(0), false).unwrap());
        assert!(!is_good_for_games(&a, PayoffKind::LimInf, &frac(1, 2), false).unwrap());
    }

    #[test]
    fn mean_payoff_refused() {
        let a = parse_automaton(A0).unwrap();
        for p in [PayoffKind::MPInf, PayoffKind::MPSup] {
            let e = regret_word_threshold(&a, p, &q(1), true).unwrap_err();
            assert!(e.to_string().starts_with("UNDECIDABLE_REQUEST"));
            assert!(matches!(regret_word_value(&a, p), Err(Error::Undecidable(_))));
        }
    }

    #[test]
    fn deterministic_is_free() {
        let a = parse_automaton(DET).unwrap();
        for p in [PayoffKind::Inf, PayoffKind::Sup, PayoffKind::LimInf, PayoffKind::LimSup] {
            assert!(regret_word_threshold(&a, p, &q(0), false).unwrap().answer);
            assert_eq!(regret_word_value(&a, p).unwrap().0, q(0));
            assert!(is_good_for_games(&a, p, &q(0), false).unwrap());
        }
        for p in PayoffKind::ALL {
            assert!(is_dbp(&a, p, &q(0), 0, false, 100).unwrap());
        }
    }

    #[test]
    fn same_letter_gap_is_exactly_one() {
        let a = parse_automaton("automaton\nalphabet a\nstate s\ninit s\ntrans s a s 0\ntrans s a s 1\n").unwrap();
        assert!(regret_word_threshold(&a, PayoffKind::LimSup, &q(1), false).unwrap().answer);
        assert!(regret_word_threshold(&a, PayoffKind::LimSup, &q(0), false).unwrap().answer);
        assert!(!regret_word_threshold(&a, PayoffKind::LimSup, &q(0), true).unwrap().answer);
        assert_eq!(regret_word_value(&a, PayoffKind::LimSup).unwrap().0, q(0));
        // always taking the 0 loop
        let low = MooreStrategy::positional([(0, 0)]);
        assert!(fixed_memory_regret_check(&a, PayoffKind::LimSup, &low, &q(1), false).unwrap().holds);
        assert!(!fixed_memory_regret_check(&a, PayoffKind::LimSup, &low, &q(1), true).unwrap().holds);
    }

    #[test]
    fn a0_dbp() {
        let a = parse_automaton(A0).unwrap();
        assert!(!is_dbp(&a, PayoffKind::MPInf, &frac(1, 2), 0, false, 1000).unwrap());
        assert!(!is_dbp(&a, PayoffKind::MPInf, &frac(1, 4), 0, false, 1000).unwrap());
        assert!(is_dbp(&a, PayoffKind::MPInf, &q(1), 0, false, 1000).unwrap());
    }

    mod props {
        use super::*;
        use crate::oracle::brute_regret_word;
        use crate::testgen::random_automaton;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(40))]
            #[test]
            fn certificates_check_out(seed in any::<u64>(), n in 1usize..=3, pi in 0usize..4) {
                let p = [PayoffKind::Inf, PayoffKind::Sup, PayoffKind::LimInf, PayoffKind::LimSup][pi];
                let a = random_automaton(n, 2, 2, -1, 1, seed);
                let (v, s) = regret_word_value(&a, p).unwrap();
                prop_assert!(is_legal_word(&a, &s));
                prop_assert!(fixed_memory_regret_check(&a, p, &s, &v, false).unwrap().holds);
                let b = brute_regret_word(&a, p, 1, 5).unwrap();
                prop_assert!(b.lower <= v);
                prop_assert!(v <= fixed_memory_regret_value(&a, p, 1, 100_000).unwrap().0);
                for r in candidates(&a, p) {
                    for strict in [false, true] {
                        let c = regret_word_threshold(&a, p, &r, strict).unwrap();
                        prop_assert_eq!(c.answer, if strict { v < r } else { v <= r });
                        if let Some(sp) = c.spoiler {
                            let gap = &sp.best - &sp.achieved;
                            let certified = if strict { gap >= r } else { gap > r };
                            prop_assert!(certified);
                        }
                        if let Some(s) = c.eve_strategy {
                            prop_assert!(fixed_memory_regret_check(&a, p, &s, &r, strict).unwrap().holds);
                        }
                    }
                }
            }
        }
    }
}
