mod selftest;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;

use ds_core::ackermann::{ack, ack_diag, alpha, alpha_diag, DEFAULT_BIT_BUDGET};
use ds_core::chains::{eta_exact, zeta_exact, SolverLimits};
use ds_core::constructions::{
    build_g_with_budget, build_xs, recurrences, verify_annotated, AnnotatedSequence,
    DEFAULT_MAX_LENGTH,
};
use ds_core::oracle::{max_letters_alt, max_letters_formation, witness, OracleResult, SearchLimits, Status};
use ds_core::seq::{avoids_alternation, contains_formation, is_r_sparse, occurrence_profile};
use ds_core::text::{
    format_chains, format_labeled_chains, parse_annotated, parse_chain_lines, parse_sequence,
};
use ds_core::transforms::{chains_to_seq, check_equality_f_eta, seq_to_chains, LabeledChainCollection};
use ds_core::Error;

#[derive(Parser)]
#[command(name = "dsx", version, about = "Generalized Davenport-Schinzel sequences and interval chains")]
struct Cli {
    /// Worker threads for the chain solvers
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print X_s(m): m blocks, every letter s times, no alternation of length s + 1
    GenXs {
        #[arg(long)]
        s: usize,
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Print G_d(m) with its special blocks marked `*`
    GenG {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        m: usize,
        /// Refuse to build anything longer than this
        #[arg(long, default_value_t = DEFAULT_MAX_LENGTH)]
        max_len: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Check a sequence file against the requested properties
    Verify {
        file: PathBuf,
        /// No alternation of this length
        #[arg(long)]
        alt: Option<usize>,
        /// No (r,s)-formation, given as `r,s`
        #[arg(long, value_name = "R,S")]
        formation: Option<Pair>,
        /// Every letter occurs exactly this often
        #[arg(long)]
        occ_exact: Option<usize>,
        /// Every letter occurs at least this often
        #[arg(long)]
        occ_min: Option<usize>,
        /// Any r consecutive letters are distinct
        #[arg(long)]
        sparse: Option<usize>,
        /// Number of blocks
        #[arg(long)]
        blocks: Option<usize>,
        /// Full structural check of G_d(m), given as `d,m`
        #[arg(long, value_name = "D,M")]
        g: Option<Pair>,
    },
    /// Convert a sequence into labeled k-chains, or a chain file into a sequence
    Convert {
        file: PathBuf,
        /// Chain order; required when the input is a sequence
        #[arg(long)]
        k: Option<usize>,
        #[command(flatten)]
        out: Output,
    },
    /// Minimum number of s-tuples stabbing every k-chain on [1, m]
    Zeta {
        #[arg(long)]
        s: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: u32,
        #[command(flatten)]
        solver: Solver,
        /// Write a minimum stabbing collection here
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Maximum k-chains on [1, m] with no r of them stabbed by one s-tuple
    Eta {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: u32,
        #[command(flatten)]
        solver: Solver,
        /// Write a maximum chain collection here
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Exhaustive maximum letters on m blocks, k occurrences each, no alternation of length s
    OracleA {
        #[arg(long)]
        s: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        search: Search,
    },
    /// Exhaustive maximum letters on m blocks, k occurrences each, no (r,s)-formation
    OracleF {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        search: Search,
    },
    /// CSV of the G_d(m) size recurrences
    Recur {
        #[arg(long)]
        dmax: u32,
        #[arg(long)]
        mmax: u32,
        #[arg(long, default_value_t = 1_000_000)]
        bits: u64,
        #[command(flatten)]
        out: Output,
    },
    /// A_k(n), or A(n) = A_n(3) without --k
    Ack {
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = DEFAULT_BIT_BUDGET)]
        bits: u64,
    },
    /// alpha_k(x), or the diagonal inverse without --k; x may be written 2^e
    Alpha {
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        x: Number,
    },
    /// Compare eta(r,s,k,m) with F(r,s+1,k+1,m+1) computed independently
    EqualityCheck {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        solver: Solver,
        #[command(flatten)]
        search: Search,
    },
    /// Run the built-in checks at reduced scale
    Selftest {
        /// Keep generated sequences here and check the stored copies
        #[arg(long)]
        dir: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Output {
    /// Write to this file instead of stdout
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct Solver {
    #[arg(long, default_value_t = SolverLimits::default().node_budget)]
    solver_nodes: u64,
    #[arg(long, default_value_t = SolverLimits::default().max_incidence)]
    max_incidence: usize,
}

#[derive(Args)]
struct Search {
    #[arg(long, default_value_t = SearchLimits::default().max_total_length)]
    max_len: usize,
    #[arg(long, default_value_t = SearchLimits::default().node_budget)]
    nodes: u64,
    /// Wall-clock limit in seconds; results then depend on machine speed
    #[arg(long)]
    timeout: Option<u64>,
    /// Write the extremal sequence here
    #[arg(long)]
    witness: Option<PathBuf>,
}

#[derive(Clone, Copy)]
struct Pair(usize, usize);

impl FromStr for Pair {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s.split_once(',').ok_or("expected two numbers `a,b`")?;
        let num = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("`{t}`: {e}"));
        Ok(Pair(num(a)?, num(b)?))
    }
}

#[derive(Clone)]
struct Number(BigUint);

impl FromStr for Number {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if let Some(e) = s.strip_prefix("2^") {
            let e: u64 = e.parse().map_err(|err| format!("`{s}`: {err}"))?;
            return Ok(Number(BigUint::from(1u32) << e));
        }
        s.parse().map(Number).map_err(|err| format!("`{s}`: {err}"))
    }
}

/// Why a command stopped early; each maps to an exit status.
enum Failure {
    Check(String),
    Invalid(String),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ResourceLimit(m) => Failure::Budget(m),
            other => Failure::Invalid(other.to_string()),
        }
    }
}

type Run = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn in_file(path: &Path) -> impl Fn(Error) -> Failure + '_ {
    move |e| match e {
        Error::ResourceLimit(m) => Failure::Budget(m),
        other => Failure::Invalid(format!("{}: {other}", path.display())),
    }
}

fn write_to(path: &Path, text: &str) -> Run {
    std::fs::write(path, text).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn emit(out: &Output, mut text: String) -> Run {
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &out.output {
        Some(p) => write_to(p, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn solver_limits(s: &Solver, threads: usize) -> SolverLimits {
    SolverLimits {
        max_incidence: s.max_incidence,
        node_budget: s.solver_nodes,
        threads,
    }
}

fn search_limits(s: &Search) -> SearchLimits {
    SearchLimits {
        max_total_length: s.max_len,
        node_budget: s.nodes,
        wall_clock_budget: s.timeout.map(Duration::from_secs),
        ..SearchLimits::default()
    }
}

fn verify(file: &Path, cmd: &Command) -> Run {
    let Command::Verify {
        alt,
        formation,
        occ_exact,
        occ_min,
        sparse,
        blocks,
        g,
        ..
    } = cmd
    else {
        unreachable!()
    };
    let (seq, special) = parse_annotated(&read(file)?).map_err(in_file(file))?;
    let profile = occurrence_profile(&seq);
    let mut lines = Vec::new();
    let mut check = |ok: bool, what: String| lines.push((ok, what));
    if let Some(s) = *alt {
        check(avoids_alternation(&seq, s), format!("no alternation of length {s}"));
    }
    if let Some(Pair(r, s)) = *formation {
        check(!contains_formation(&seq, r, s), format!("no ({r},{s})-formation"));
    }
    if let Some(k) = *occ_exact {
        check(profile.all_exactly(k), format!("every letter occurs exactly {k} times"));
    }
    if let Some(k) = *occ_min {
        let ok = profile.min_count().is_none_or(|c| c >= k);
        check(ok, format!("every letter occurs at least {k} times"));
    }
    if let Some(r) = *sparse {
        check(is_r_sparse(&seq, r), format!("{r}-sparse"));
    }
    if let Some(b) = *blocks {
        check(seq.block_count() == b, format!("{b} blocks (found {})", seq.block_count()));
    }
    if let Some(Pair(d, m)) = *g {
        let report = verify_annotated(&AnnotatedSequence::new(seq.clone(), special)?, d, m);
        for c in report.checks {
            check(c.passed, format!("{}: {}", c.name, c.detail));
        }
    }
    if lines.is_empty() {
        return Err(Failure::Invalid("nothing to verify; pass at least one check flag".into()));
    }
    let mut failed = 0;
    for (ok, what) in &lines {
        println!("{} {what}", if *ok { "PASS" } else { "FAIL" });
        failed += usize::from(!ok);
    }
    if failed > 0 {
        return Err(Failure::Check(format!("{failed} of {} checks failed", lines.len())));
    }
    Ok(())
}

fn convert(file: &Path, k: Option<usize>, out: &Output) -> Run {
    let text = read(file)?;
    let is_chains = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .is_some_and(|l| l.starts_with("m="));
    if is_chains {
        let (m, order, lines) = parse_chain_lines(&text).map_err(in_file(file))?;
        // unlabeled chains get labels past the largest explicit one
        let mut next = lines.iter().filter_map(|l| l.label).max().map_or(0, |l| l + 1);
        let mut entries = Vec::new();
        for line in lines {
            match line.label {
                Some(_) if line.multiplicity != 1 => {
                    return Err(Failure::Invalid("a labeled chain cannot have a multiplicity".into()))
                }
                Some(l) => entries.push((l, line.chain)),
                None => {
                    for _ in 0..line.multiplicity {
                        entries.push((next, line.chain.clone()));
                        next += 1;
                    }
                }
            }
        }
        let coll = LabeledChainCollection::new(m, order, entries).map_err(in_file(file))?;
        emit(out, chains_to_seq(&coll).to_string())
    } else {
        let k = k.ok_or_else(|| Failure::Invalid("converting a sequence needs --k".into()))?;
        let seq = parse_sequence(&text).map_err(in_file(file))?;
        let coll = seq_to_chains(&seq, k)?;
        let entries = coll.entries().iter().map(|(l, c)| (*l, c));
        emit(out, format_labeled_chains(coll.domain(), coll.order(), entries))
    }
}

fn report_oracle(res: &OracleResult, search: &Search) -> Run {
    match res.status {
        Status::Proven => println!("value={} status=proven nodes={}", res.value, res.nodes),
        Status::BudgetExhausted { best_found } => println!(
            "value>={best_found} status=budget-exhausted nodes={}",
            res.nodes
        ),
    }
    if let Some(path) = &search.witness {
        match witness(res) {
            Some(w) => write_to(path, &format!("{w}\n"))?,
            None => println!("no witness"),
        }
    }
    match res.status {
        Status::Proven => Ok(()),
        Status::BudgetExhausted { .. } => Err(Failure::Budget("search budget exhausted".into())),
    }
}

fn run(cli: Cli) -> Run {
    let threads = cli.threads.max(1);
    match &cli.command {
        Command::GenXs { s, m, out } => emit(out, build_xs(*s, *m)?.to_string()),
        Command::GenG { d, m, max_len, out } => {
            emit(out, build_g_with_budget(*d, *m, *max_len)?.to_string())
        }
        cmd @ Command::Verify { file, .. } => verify(file, cmd),
        Command::Convert { file, k, out } => convert(file, *k, out),
        Command::Zeta {
            s,
            k,
            m,
            solver,
            witness,
        } => {
            let sol = zeta_exact(*s, *k, *m, &solver_limits(solver, threads))?;
            println!("zeta({s},{k},{m}) = {}", sol.value);
            if let Some(path) = witness {
                let mut text = format!("# s={s} k={k} m={m}\n");
                for t in &sol.cover {
                    let _ = writeln!(text, "{t}");
                }
                write_to(path, &text)?;
            }
            Ok(())
        }
        Command::Eta {
            r,
            s,
            k,
            m,
            solver,
            witness,
        } => {
            let sol = eta_exact(*r, *s, *k, *m, &solver_limits(solver, threads))?;
            println!("eta({r},{s},{k},{m}) = {}", sol.value);
            if let (Some(path), Some(ms)) = (witness, &sol.collection) {
                write_to(path, &format_chains(ms))?;
            }
            Ok(())
        }
        Command::OracleA { s, k, m, search } => {
            if *s < 2 || *k < 1 || *m < 1 {
                return Err(Failure::Invalid("need s >= 2, k >= 1, m >= 1".into()));
            }
            report_oracle(&max_letters_alt(*s, *k, *m, &search_limits(search)), search)
        }
        Command::OracleF { r, s, k, m, search } => {
            if *r < 1 || *s < 1 || *k < 1 || *m < 1 {
                return Err(Failure::Invalid("need r, s, k, m >= 1".into()));
            }
            report_oracle(&max_letters_formation(*r, *s, *k, *m, &search_limits(search)), search)
        }
        Command::Recur { dmax, mmax, bits, out } => {
            if *dmax == 0 || *mmax == 0 {
                return Err(Failure::Invalid("need dmax, mmax >= 1".into()));
            }
            emit(out, recurrences(*dmax, *mmax, *bits).to_csv())
        }
        Command::Ack { k, n, bits } => {
            let v = match k {
                Some(0) => return Err(Failure::Invalid("levels start at k = 1".into())),
                Some(k) => ack(*k, *n, *bits),
                None => {
                    let n = u32::try_from(*n).ok().filter(|&n| n >= 1);
                    let n = n.ok_or_else(|| Failure::Invalid("A(n) needs 1 <= n < 2^32".into()))?;
                    ack_diag(n, *bits)
                }
            };
            println!("{v}");
            Ok(())
        }
        Command::Alpha { k, x } => {
            match k {
                Some(0) => return Err(Failure::Invalid("levels start at k = 1".into())),
                Some(k) => println!("{}", alpha(*k, &x.0)),
                None => println!("{}", alpha_diag(&x.0)),
            }
            Ok(())
        }
        Command::EqualityCheck {
            r,
            s,
            k,
            m,
            solver,
            search,
        } => {
            let rep = check_equality_f_eta(
                *r,
                *s,
                *k,
                *m,
                &solver_limits(solver, threads),
                &search_limits(search),
            )?;
            println!("{rep}");
            match rep.agrees() {
                Some(true) => Ok(()),
                Some(false) => Err(Failure::Check("counterexample".into())),
                None => Err(Failure::Budget("oracle budget exhausted".into())),
            }
        }
        Command::Selftest { dir } => {
            if selftest::run(dir.as_deref(), threads) {
                Ok(())
            } else {
                Err(Failure::Check("selftest failed".into()))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("budget: {msg}");
            ExitCode::from(3)
        }
    }
}
