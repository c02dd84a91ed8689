use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;

use factoromata::algebra::minimal_polynomial;
use factoromata::automata::{
    enumerate_accepted, read_automaton, write_dfa, AutomatonFile, Dfa, NumberTuple,
    DEFAULT_STATE_CAP,
};
use factoromata::golden;
use factoromata::linrep::{reduce, sbar_representation, LinearRepresentation};
use factoromata::oracle::{density_profile, scan_members, theta_direct, triple_counts};
use factoromata::query::{
    parse, seed_registry, Compiler, PredicateRegistry, GAPS_QUERY, SGAPS_QUERY,
};
use factoromata::seed::{gamma_parity_dfa, theta_dfa, window_parity_dfa, ThetaTriple, WindowSpec};
use factoromata::verify::{Convention, Level, Verifier};

const MAX_STATES_VAR: &str = "FACTOROMATA_MAX_STATES";

#[derive(Parser)]
#[command(
    name = "factoromata",
    version,
    about = "Automata for factorials that are not sums of three squares"
)]
struct Cli {
    /// How automaton sizes are counted.
    #[arg(long, value_enum, global = true, default_value_t = ConventionArg::Trim)]
    convention: ConventionArg,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    /// Complete automaton including the rejecting sink.
    Sink,
    /// States that cannot reach acceptance removed.
    Trim,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Sink => Convention::Sink,
            ConventionArg::Trim => Convention::Trim,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Quick,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum SetArg {
    #[value(name = "S")]
    S,
    #[value(name = "Sbar")]
    Sbar,
}

#[derive(Subcommand)]
enum Command {
    /// Write the seed automata and the counting representation.
    Seed {
        #[arg(long, default_value = "seed")]
        out: PathBuf,
    },
    /// Run an automaton file on decimal inputs, one per track.
    Eval { file: PathBuf, values: Vec<String> },
    /// Exact count of n' <= n whose factorial is not a sum of three squares.
    Count { n: String },
    /// Gap lengths between consecutive members of S or S̄.
    Gaps {
        set: SetArg,
        #[arg(long, default_value_t = 64)]
        limit: u64,
        /// Write the gap automaton here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compile a query and list accepted tuples with every entry <= limit.
    Query {
        text: String,
        #[arg(long, default_value_t = 64)]
        limit: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Minimal polynomial of the digit-0 matrix, constant term first.
    Minpoly {
        /// linrep/1 file; the built-in representation by default.
        #[arg(long)]
        file: Option<PathBuf>,
        /// Use the reduced representation.
        #[arg(long)]
        reduced: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the check suite; exits nonzero if any check fails.
    Verify {
        #[arg(long, value_enum, default_value_t = LevelArg::Quick)]
        level: LevelArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// sup |S̄(n) − n/8| / √n over [2^10, limit] and deviations at powers of two.
    ScanDensity {
        #[arg(long, default_value_t = 1 << 20)]
        limit: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Θ(n) = (γ, α₃, α₅) mod 2; with --limit, counts per class up to limit.
    Theta {
        n: Option<u64>,
        #[arg(long)]
        limit: Option<u64>,
    },
}

fn state_cap() -> Result<usize> {
    match std::env::var(MAX_STATES_VAR) {
        Ok(v) => v
            .parse()
            .with_context(|| format!("{MAX_STATES_VAR} must be a positive integer, got `{v}`")),
        Err(_) => Ok(DEFAULT_STATE_CAP),
    }
}

fn parse_natural(s: &str) -> Result<BigUint> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        bail!("`{s}` is not a decimal natural number");
    }
    Ok(s.parse()?)
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Seed predicates plus `gaps`/`sgaps` restricted to gaps of length >= 1.
fn full_registry(needs_gaps: bool) -> Result<PredicateRegistry> {
    let mut reg = seed_registry();
    if needs_gaps {
        let cap = state_cap()?;
        let mut extra = Vec::new();
        for (name, text) in [("gaps", GAPS_QUERY), ("sgaps", SGAPS_QUERY)] {
            let f = parse(&format!("{text} & r >= 1"))?;
            extra.push((
                name,
                Compiler::new(&reg)
                    .with_state_cap(cap)
                    .compile_with_order(&f, &["n", "r"])?,
            ));
        }
        for (name, d) in extra {
            reg.insert(name, d);
        }
    }
    Ok(reg)
}

fn compile(text: &str) -> Result<Dfa> {
    let f = parse(text)
        .map_err(|e| anyhow::anyhow!("{e}\n  {text}\n  {:>width$}", "^", width = e.pos + 1))?;
    let reg = full_registry(text.contains("gaps("))?;
    Ok(Compiler::new(&reg)
        .with_state_cap(state_cap()?)
        .compile(&f)?)
}

fn enumeration(d: &Dfa, limit: u64) -> String {
    let tuples = enumerate_accepted(d, limit);
    if d.arity() == 1 {
        let line = tuples
            .iter()
            .map(|t| t[0].to_string())
            .collect::<Vec<_>>()
            .join(" ");
        format!("{line}\n")
    } else {
        let mut out = String::new();
        for t in tuples {
            let _ = writeln!(
                out,
                "{}",
                t.iter().map(u64::to_string).collect::<Vec<_>>().join("\t")
            );
        }
        out
    }
}

fn cmd_seed(out: &Path, convention: Convention) -> Result<()> {
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let mut files: Vec<(String, Dfa)> = vec![
        ("gamma.aut".into(), gamma_parity_dfa()),
        ("a3.aut".into(), window_parity_dfa(&WindowSpec::alpha3())),
        ("a5.aut".into(), window_parity_dfa(&WindowSpec::alpha5())),
        ("factauto.aut".into(), theta_dfa(ThetaTriple::NON_SUM)),
    ];
    for t in ThetaTriple::all() {
        files.push((format!("theta_{}.aut", t.code()), theta_dfa(t)));
    }
    for (name, d) in &files {
        fs::write(out.join(name), write_dfa(d))?;
        println!("{name}\t{} states", convention.count(d));
    }
    let rep = sbar_representation(&seed_registry())?;
    fs::write(out.join("sbar.linrep"), rep.to_text())?;
    let red = reduce(&rep);
    fs::write(out.join("sbar_reduced.linrep"), red.to_text())?;
    println!("sbar.linrep\tdim {}", rep.dim());
    println!("sbar_reduced.linrep\tdim {}", red.dim());
    Ok(())
}

fn cmd_eval(file: &Path, values: &[String]) -> Result<()> {
    let text = fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let tuple = NumberTuple(
        values
            .iter()
            .map(|v| parse_natural(v))
            .collect::<Result<_>>()?,
    );
    let accepted = match read_automaton(&text)? {
        AutomatonFile::Dfa(d) => d.accepts(&tuple)?,
        AutomatonFile::Nfa(a) => a.accepts(&tuple)?,
    };
    println!("{}", if accepted { "accept" } else { "reject" });
    Ok(())
}

fn cmd_minpoly(file: Option<&Path>, reduced: bool, out: Option<&Path>) -> Result<()> {
    let rep = match file {
        Some(path) => {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            LinearRepresentation::<factoromata::algebra::BigRat>::from_text(&text)?
        }
        None => sbar_representation(&seed_registry())?.to_rational(),
    };
    let rep = if reduced { reduce(&rep) } else { rep };
    let p = minimal_polynomial(&rep.m0_matrix())?;
    eprintln!("dim {}: {p}", rep.dim());
    let d = p.x_valuation();
    eprintln!(
        "divides x^{d}(x-1)(x-2)(x^24-4096): {}",
        p.divides(&golden::spectral_envelope(d))?
    );
    write_or_print(out, &format!("{}\n", p.to_coefficient_line()))
}

fn cmd_scan_density(limit: u64, out: Option<&Path>) -> Result<()> {
    let floor = 1 << 10;
    if limit < floor {
        bail!("--limit must be at least {floor}");
    }
    let scan = scan_members(limit);
    let p = density_profile(&scan, floor, limit);
    let mut text = String::new();
    let _ = writeln!(
        text,
        "# sup {:.6} at n = {} (8*S(n) - n = {})",
        p.sup, p.argmax, p.deviation_at_argmax
    );
    let _ = writeln!(text, "n\tcount\tdeviation");
    for (n, dev) in &p.table {
        let _ = writeln!(text, "{n}\t{}\t{dev}", scan.count(*n));
    }
    write_or_print(out, &text)
}

fn cmd_theta(n: Option<u64>, limit: Option<u64>) -> Result<()> {
    if n.is_none() && limit.is_none() {
        bail!("give n, --limit, or both");
    }
    if let Some(n) = n {
        let t = theta_direct(n);
        let status = if t == ThetaTriple::NON_SUM {
            "not a sum of three squares"
        } else {
            "sum of three squares"
        };
        println!("{n}\t{t}\t{status}");
    }
    if let Some(limit) = limit {
        println!("triple\tcount");
        let counts = triple_counts(limit);
        for t in ThetaTriple::all() {
            println!("{}\t{}", t.code(), counts[t.index()]);
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    let convention: Convention = cli.convention.into();
    match cli.command {
        Command::Seed { out } => cmd_seed(&out, convention)?,
        Command::Eval { file, values } => cmd_eval(&file, &values)?,
        Command::Count { n } => {
            let n = parse_natural(&n)?;
            println!("{}", sbar_representation(&seed_registry())?.eval(&n));
        }
        Command::Gaps { set, limit, out } => {
            let name = match set {
                SetArg::S => "sgaps",
                SetArg::Sbar => "gaps",
            };
            let d = compile(&format!("E n ${name}(n, r)"))?;
            if let Some(path) = out {
                fs::write(&path, write_dfa(&d))?;
            }
            print!("{}", enumeration(&d, limit));
        }
        Command::Query { text, limit, out } => {
            let d = compile(&text)?;
            eprintln!(
                "tracks ({}), {} states",
                d.tracks().join(", "),
                convention.count(&d)
            );
            if let Some(path) = out {
                fs::write(&path, write_dfa(&d))?;
            }
            print!("{}", enumeration(&d, limit));
        }
        Command::Minpoly { file, reduced, out } => {
            cmd_minpoly(file.as_deref(), reduced, out.as_deref())?
        }
        Command::Verify { level, out } => {
            let mut v = Verifier::new(match level {
                LevelArg::Quick => Level::Quick,
                LevelArg::Full => Level::Full,
            });
            v.convention = convention;
            v.state_cap = state_cap()?;
            let report = v.run()?;
            write_or_print(out.as_deref(), &report.to_tsv())?;
            let failed: Vec<String> = report.failures().map(|c| c.id.clone()).collect();
            if !failed.is_empty() {
                eprintln!("{} failing checks: {}", failed.len(), failed.join(", "));
                return Ok(ExitCode::from(1));
            }
        }
        Command::ScanDensity { limit, out } => cmd_scan_density(limit, out.as_deref())?,
        Command::Theta { n, limit } => cmd_theta(n, limit)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
