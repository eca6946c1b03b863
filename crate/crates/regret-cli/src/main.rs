//! `regret` command-line front end.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use regret::model::{parse_arena, parse_automaton, Arena, Automaton, MooreStrategy, Player};
use regret::oracle::{brute_regret_any, brute_regret_word, cycle_forming_value};
use regret::rational::parse_q;
use regret::regret_any::regret_any;
use regret::regret_memoryless::regret_memoryless;
use regret::solvers::{antagonistic_value, cooperative_value};
use regret::testgen::{brute_sat, lemma4_gadget, random_arena, random_automaton, random_cnf, sat_reduction, Cnf};
use regret::word::{
    fixed_memory_regret_search, fixed_memory_regret_value, regret_word_threshold, regret_word_value,
    DEFAULT_SEARCH_BUDGET,
};
use regret::{Error, PayoffKind, Q};

#[derive(Parser)]
#[command(name = "regret", version, about = "Regret of quantitative games and weighted automata")]
struct Cli {
    /// worker threads for parallel subproblems (0 = all cores)
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Minimal regret Eve can ensure.
    Value(ValueArgs),
    /// Is the minimal regret at most (below, with --strict) a bound?
    Threshold(ThresholdArgs),
    /// Antagonistic or cooperative value.
    Classic(ClassicArgs),
    /// Brute-force reference computations.
    #[command(subcommand)]
    Oracle(OracleCmd),
    /// Generate instances.
    #[command(subcommand)]
    Gen(GenCmd),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Variant {
    Any,
    Memoryless,
    Word,
}

#[derive(Clone, Copy, ValueEnum)]
enum What {
    Aval,
    Cval,
}

#[derive(Clone, Copy, ValueEnum)]
enum RandomKind {
    Arena,
    Automaton,
    Cnf,
}

fn payoff(s: &str) -> Result<PayoffKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn rational(s: &str) -> Result<Q, String> {
    parse_q(s).ok_or_else(|| format!("not a rational: `{s}`"))
}

#[derive(Args)]
struct Common {
    #[arg(long, value_enum)]
    variant: Variant,
    #[arg(long, value_parser = payoff)]
    payoff: PayoffKind,
    /// memory bound on Eve's word strategy
    #[arg(long)]
    memory: Option<usize>,
    /// strategies enumerated at most, with --memory
    #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
    budget: usize,
    file: PathBuf,
}

#[derive(Args)]
struct ValueArgs {
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct ThresholdArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_parser = rational)]
    bound: Q,
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct ClassicArgs {
    #[arg(long, value_enum)]
    what: What,
    #[arg(long, value_parser = payoff)]
    payoff: PayoffKind,
    file: PathBuf,
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Value of the cycle-forming game.
    CycleForming {
        #[arg(long, value_parser = payoff)]
        payoff: PayoffKind,
        file: PathBuf,
    },
    /// Regret against any Adam by exhaustive search.
    RegretAny {
        #[arg(long, value_parser = payoff)]
        payoff: PayoffKind,
        file: PathBuf,
    },
    /// Bounds on word regret from lassos up to a length.
    RegretWord {
        #[arg(long, value_parser = payoff)]
        payoff: PayoffKind,
        #[arg(long, default_value_t = 1)]
        memory: usize,
        #[arg(long, default_value_t = 6)]
        max_len: usize,
        file: PathBuf,
    },
    /// Satisfiability of a DIMACS formula.
    Sat { file: PathBuf },
}

#[derive(Subcommand)]
enum GenCmd {
    /// Automaton whose memory-1 regret tells whether a CNF is satisfiable.
    Sat {
        #[arg(long, value_parser = payoff)]
        payoff: PayoffKind,
        file: PathBuf,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Arena whose regret encodes the antagonistic value of the input.
    Lemma4 {
        #[arg(long, value_parser = payoff)]
        payoff: PayoffKind,
        file: PathBuf,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    Random {
        #[arg(long, value_enum)]
        kind: RandomKind,
        /// vertices, states or variables
        #[arg(long, default_value_t = 4)]
        size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        outdeg: usize,
        #[arg(long, default_value_t = 2)]
        letters: usize,
        #[arg(long, default_value_t = -2, allow_hyphen_values = true)]
        wmin: i64,
        #[arg(long, default_value_t = 2, allow_hyphen_values = true)]
        wmax: i64,
        #[arg(long, default_value_t = 0.5)]
        eve_fraction: f64,
        #[arg(long, default_value_t = 3)]
        clauses: usize,
        #[arg(long, default_value_t = 3)]
        width: usize,
        #[arg(short)]
        o: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum Fail {
    Lib(Error),
    Io(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

type Out = Result<Vec<String>, Fail>;

fn read(path: &Path) -> Result<String, Fail> {
    fs::read_to_string(path).map_err(|e| Fail::Io(format!("{}: {e}", path.display())))
}

fn arena(path: &Path) -> Result<Arena, Fail> {
    Ok(parse_arena(&read(path)?)?)
}

fn automaton(path: &Path) -> Result<Automaton, Fail> {
    Ok(parse_automaton(&read(path)?)?)
}

fn arena_strategy(g: &Arena, who: Player, s: &MooreStrategy, out: &mut Vec<String>) {
    let tag = if who == Player::Eve { "eve" } else { "adam" };
    for (&(v, m), &e) in &s.choice {
        let dst = g.edge(e).dst;
        out.push(format!("strategy {tag} {} {m} -> {} {}", g.name(v), g.name(dst), s.next(m, e)));
    }
}

fn word_strategy(a: &Automaton, s: &MooreStrategy, out: &mut Vec<String>) {
    let k = a.letters();
    for (&(pos, m), &t) in &s.choice {
        let (q, l) = (pos / k, pos % k);
        out.push(format!("strategy eve {}/{} {m} -> {t} {}", a.state_name(q), a.alphabet()[l], s.next(m, t)));
    }
}

fn undecidable_guard(c: &Common) -> Result<(), Fail> {
    if c.variant == Variant::Word && c.payoff.is_mean_payoff() && c.memory.is_none() {
        return Err(Error::Undecidable(format!(
            "regret against word strategies is undecidable for {}; pass --memory",
            c.payoff
        ))
        .into());
    }
    Ok(())
}

fn arena_regret(c: &Common) -> Result<(Arena, Q, MooreStrategy), Fail> {
    let g = arena(&c.file)?;
    let r = match c.variant {
        Variant::Any => regret_any(&g, c.payoff)?,
        _ => regret_memoryless(&g, c.payoff)?,
    };
    Ok((g, r.regret, r.eve_strategy))
}

fn cmd_value(args: &ValueArgs) -> Out {
    let c = &args.common;
    undecidable_guard(c)?;
    let mut out = Vec::new();
    if c.variant == Variant::Word {
        let a = automaton(&c.file)?;
        let (v, s) = match c.memory {
            Some(m) => fixed_memory_regret_value(&a, c.payoff, m, c.budget)?,
            None => regret_word_value(&a, c.payoff)?,
        };
        out.push(format!("value {v}"));
        word_strategy(&a, &s, &mut out);
    } else {
        let (g, v, s) = arena_regret(c)?;
        out.push(format!("value {v}"));
        arena_strategy(&g, Player::Eve, &s, &mut out);
    }
    Ok(out)
}

fn verdict(yes: bool) -> String {
    format!("result {}", if yes { "YES" } else { "NO" })
}

fn cmd_threshold(args: &ThresholdArgs) -> Out {
    let c = &args.common;
    undecidable_guard(c)?;
    let mut out = Vec::new();
    if c.variant != Variant::Word {
        let (g, v, s) = arena_regret(c)?;
        let yes = if args.strict { v < args.bound } else { v <= args.bound };
        out.push(verdict(yes));
        if yes {
            arena_strategy(&g, Player::Eve, &s, &mut out);
        }
        return Ok(out);
    }
    let a = automaton(&c.file)?;
    if let Some(m) = c.memory {
        let found = fixed_memory_regret_search(&a, c.payoff, m, &args.bound, args.strict, c.budget)?;
        out.push(verdict(found.is_some()));
        if let Some(s) = found {
            word_strategy(&a, &s, &mut out);
        }
        return Ok(out);
    }
    let cert = regret_word_threshold(&a, c.payoff, &args.bound, args.strict)?;
    out.push(verdict(cert.answer));
    if let Some(s) = &cert.eve_strategy {
        word_strategy(&a, s, &mut out);
    }
    if let Some(sp) = &cert.spoiler {
        out.push(format!("spoiler {}", sp.word.render(a.alphabet())));
        out.push(format!("best {}", sp.best));
        out.push(format!("achieved {}", sp.achieved));
    }
    Ok(out)
}

fn cmd_classic(args: &ClassicArgs) -> Out {
    let g = arena(&args.file)?;
    let r = match args.what {
        What::Aval => antagonistic_value(&g, args.payoff, g.initial())?,
        What::Cval => cooperative_value(&g, args.payoff, g.initial())?,
    };
    let mut out = vec![format!("value {}", r.value)];
    arena_strategy(&g, Player::Eve, &r.eve_strategy, &mut out);
    arena_strategy(&g, Player::Adam, &r.adam_strategy, &mut out);
    Ok(out)
}

fn cmd_oracle(cmd: &OracleCmd) -> Out {
    Ok(match cmd {
        OracleCmd::CycleForming { payoff, file } => vec![format!("value {}", cycle_forming_value(&arena(file)?, *payoff)?)],
        OracleCmd::RegretAny { payoff, file } => vec![format!("value {}", brute_regret_any(&arena(file)?, *payoff)?)],
        OracleCmd::RegretWord { payoff, memory, max_len, file } => {
            let b = brute_regret_word(&automaton(file)?, *payoff, *memory, *max_len)?;
            vec![format!("upper {}", b.upper), format!("lower {}", b.lower)]
        }
        OracleCmd::Sat { file } => {
            let sat = brute_sat(&Cnf::parse(&read(file)?)?)?;
            vec![format!("result {}", if sat { "SAT" } else { "UNSAT" })]
        }
    })
}

fn emit(text: String, o: &Option<PathBuf>) -> Out {
    match o {
        Some(p) => {
            fs::write(p, text).map_err(|e| Fail::Io(format!("{}: {e}", p.display())))?;
            Ok(Vec::new())
        }
        None => Ok(text.lines().map(str::to_string).collect()),
    }
}

fn cmd_gen(cmd: &GenCmd) -> Out {
    match cmd {
        GenCmd::Sat { payoff, file, o } => {
            let f = Cnf::parse(&read(file)?)?;
            emit(sat_reduction(&f, *payoff).to_text(), o)
        }
        GenCmd::Lemma4 { payoff, file, o } => emit(lemma4_gadget(&arena(file)?, *payoff).to_text(), o),
        GenCmd::Random { kind, size, seed, outdeg, letters, wmin, wmax, eve_fraction, clauses, width, o } => {
            if wmin > wmax || *size == 0 || *outdeg == 0 || !(1..=26).contains(letters) || *width == 0 || *clauses == 0 {
                return Err(Error::invalid("sizes must be positive, at most 26 letters, --wmin <= --wmax").into());
            }
            let text = match kind {
                RandomKind::Arena => random_arena(*size, *outdeg, *wmin, *wmax, *eve_fraction, *seed).to_text(),
                RandomKind::Automaton => random_automaton(*size, *letters, *outdeg, *wmin, *wmax, *seed).to_text(),
                RandomKind::Cnf => random_cnf(*size, *clauses, *width, *seed).to_dimacs(),
            };
            emit(text, o)
        }
    }
}

fn run(cli: &Cli) -> Out {
    match &cli.cmd {
        Cmd::Value(a) => cmd_value(a),
        Cmd::Threshold(a) => cmd_threshold(a),
        Cmd::Classic(a) => cmd_classic(a),
        Cmd::Oracle(c) => cmd_oracle(c),
        Cmd::Gen(c) => cmd_gen(c),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.jobs > 0 {
        // only fails if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global();
    }
    match run(&cli) {
        Ok(lines) => {
            let mut w = std::io::stdout().lock();
            // a closed pipe downstream is not our failure
            let _ = lines.iter().try_for_each(|l| writeln!(w, "{l}"));
            ExitCode::SUCCESS
        }
        Err(f) => {
            let (code, msg) = match f {
                Fail::Io(m) => (2, m),
                Fail::Lib(e) => {
                    let code = match e {
                        Error::Parse { .. } | Error::Invalid(_) => 2,
                        Error::Undecidable(_) => 3,
                        Error::Budget(_) => 4,
                    };
                    (code, e.to_string())
                }
            };
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
