use std::fs;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use loctest::automaton::{parse_dfa, parse_dfa_many, Dfa};
use loctest::decide::{decide_graph, decide_semigroup, oracle, verify_witness, Instance, PropertyId, Verdict};
use loctest::graph::{GraphError, GraphLimits, DEFAULT_PRODUCT_CAP};
use loctest::harness::{
    canonical_exhaustive, canonical_random, cross_validate, enumerate_dfas, random_dfa, CrossOptions,
    GenSpec, ReportFormat,
};
use loctest::par::{self, Exec};
use loctest::semigroup::{parse_cayley, transition_semigroup, FiniteSemigroup, SemigroupError};

const EXIT_FAILS: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CAP: u8 = 3;

#[derive(Parser)]
#[command(name = "loctest", version, about = "Decide local testability and local idempotency of automata and finite semigroups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Caps {
    /// Maximum order of a generated transition semigroup.
    #[arg(long, env = "LOCTEST_CAP", default_value_t = loctest::semigroup::DEFAULT_SEMIGROUP_CAP)]
    cap: usize,
    /// Maximum number of product-graph nodes.
    #[arg(long, default_value_t = DEFAULT_PRODUCT_CAP)]
    product_cap: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Decide one property of one instance; exit 0 if it holds, 1 if not.
    Check {
        #[arg(long)]
        property: PropertyId,
        #[arg(long, value_enum)]
        route: RouteArg,
        /// Automaton or Cayley-table file, `-` for standard input.
        #[arg(long)]
        input: String,
        /// Print the verdict as JSON.
        #[arg(long)]
        json: bool,
        /// Print the witness of a failing verdict.
        #[arg(long)]
        witness: bool,
        #[command(flatten)]
        caps: Caps,
    },
    /// Print the transition semigroup of an automaton as a Cayley table.
    SemigroupOf {
        #[arg(long)]
        input: String,
        #[arg(long, env = "LOCTEST_CAP", default_value_t = loctest::semigroup::DEFAULT_SEMIGROUP_CAP)]
        cap: usize,
    },
    /// Print seeded random automata.
    Gen {
        #[arg(long)]
        states: usize,
        #[arg(long)]
        letters: usize,
        #[arg(long, default_value_t = 1.0)]
        completeness: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// Print every automaton with the given numbers of states and letters.
    Enumerate {
        #[arg(long)]
        states: usize,
        #[arg(long)]
        letters: usize,
        #[arg(long)]
        complete_only: bool,
    },
    /// Run all routes on a suite and cross-check them; exit 1 on any
    /// disagreement or rejected witness.
    CrossValidate {
        /// Built-in suite.
        #[arg(long, value_enum, conflicts_with = "input")]
        suite: Option<Suite>,
        /// File of concatenated automata, `-` for standard input.
        #[arg(long)]
        input: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Evaluate instances one at a time.
        #[arg(long)]
        sequential: bool,
        /// Include wall-clock timings (output then varies between runs).
        #[arg(long)]
        timings: bool,
        #[command(flatten)]
        caps: Caps,
    },
    /// Re-check the witness of a JSON verdict against an instance.
    VerifyWitness {
        #[arg(long)]
        input: String,
        #[arg(long)]
        verdict: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RouteArg {
    Graph,
    Semigroup,
    Oracle,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Exhaustive,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl ToString) -> Self {
        Failure { code: EXIT_USAGE, message: message.to_string() }
    }

    fn cap(message: impl ToString) -> Self {
        Failure { code: EXIT_CAP, message: message.to_string() }
    }
}

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Self {
        Failure::cap(e)
    }
}

impl From<SemigroupError> for Failure {
    fn from(e: SemigroupError) -> Self {
        match e {
            SemigroupError::CapExceeded { .. } | SemigroupError::TableTooLarge { .. } => Failure::cap(e),
            other => Failure::usage(other),
        }
    }
}

enum Loaded {
    Dfa(Dfa),
    Semigroup(FiniteSemigroup),
}

fn read_input(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut text = String::new();
        io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Failure::usage(format!("reading standard input: {e}")))?;
        Ok(text)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::usage(format!("{path}: {e}")))
    }
}

/// Loads an instance, choosing the parser by the first token of the file.
fn load(path: &str) -> Result<Loaded, Failure> {
    let text = read_input(path)?;
    let header = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .unwrap_or("");
    match header {
        "dfa" => parse_dfa(&text)
            .map(Loaded::Dfa)
            .map_err(|e| Failure::usage(format!("{path}: {e}"))),
        "semigroup" => parse_cayley(&text)
            .map(Loaded::Semigroup)
            .map_err(|e| Failure::usage(format!("{path}: {e}"))),
        other => Err(Failure::usage(format!(
            "{path}: expected a `dfa` or `semigroup` header, found {other:?}"
        ))),
    }
}

fn check(
    property: PropertyId,
    route: RouteArg,
    input: &str,
    json: bool,
    show_witness: bool,
    caps: Caps,
) -> Result<u8, Failure> {
    let instance = load(input)?;
    let limits = GraphLimits { product_cap: caps.product_cap };
    let verdict = match (&instance, route) {
        (Loaded::Dfa(d), RouteArg::Graph) => decide_graph(d, property, limits, Exec::Sequential)?,
        (Loaded::Semigroup(_), RouteArg::Graph) => {
            return Err(Failure::usage("the graph route needs an automaton, not a semigroup"))
        }
        (Loaded::Dfa(d), RouteArg::Semigroup | RouteArg::Oracle) => {
            let s = transition_semigroup(d, caps.cap)?;
            match route {
                RouteArg::Semigroup => decide_semigroup(&s, property),
                _ => oracle(&s, property),
            }
        }
        (Loaded::Semigroup(s), RouteArg::Semigroup) => decide_semigroup(s, property),
        (Loaded::Semigroup(s), RouteArg::Oracle) => oracle(s, property),
    };
    print_verdict(&verdict, json, show_witness);
    Ok(if verdict.holds { 0 } else { EXIT_FAILS })
}

fn print_verdict(v: &Verdict, json: bool, show_witness: bool) {
    if json {
        println!("{}", v.to_json());
        return;
    }
    println!(
        "{}: {} (route {})",
        v.property,
        if v.holds { "holds" } else { "fails" },
        v.route
    );
    if show_witness {
        if let Some(w) = &v.witness {
            println!("witness: {w}");
        }
    }
}

fn semigroup_of(input: &str, cap: usize) -> Result<u8, Failure> {
    let Loaded::Dfa(d) = load(input)? else {
        return Err(Failure::usage("semigroup-of needs an automaton"));
    };
    let s = transition_semigroup(&d, cap)?;
    let table = s.to_cayley()?;
    let mut out = table.to_text();
    for (i, w) in s.words().iter().enumerate() {
        let letters: Vec<String> = w.iter().map(|&a| d.letter_label(a)).collect();
        out.push_str(&format!("# word {i}: {}\n", letters.join(" ")));
    }
    print!("{out}");
    Ok(0)
}

fn emit_all(dfas: impl Iterator<Item = Dfa>) -> Result<u8, Failure> {
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    for d in dfas {
        if let Err(e) = out.write_all(d.to_text().as_bytes()) {
            // a closed pipe ends the stream quietly
            return if e.kind() == io::ErrorKind::BrokenPipe { Ok(0) } else { Err(Failure::usage(e)) };
        }
    }
    out.flush().map_err(Failure::usage)?;
    Ok(0)
}

fn generate(spec: GenSpec) -> Result<u8, Failure> {
    spec.validate().map_err(Failure::usage)?;
    emit_all(random_dfa(&spec))
}

fn enumerate(states: usize, letters: usize, complete_only: bool) -> Result<u8, Failure> {
    if states == 0 || letters == 0 {
        return Err(Failure::usage("states and letters must be positive"));
    }
    let base = if complete_only { states } else { states + 1 } as u128;
    if base.checked_pow((states * letters) as u32).is_none_or(|n| n > u64::MAX as u128) {
        return Err(Failure::cap("enumeration too large"));
    }
    emit_all(enumerate_dfas(states, letters, complete_only))
}

fn cross(
    suite: Option<Suite>,
    input: Option<&str>,
    format: Format,
    jobs: usize,
    sequential: bool,
    timings: bool,
    caps: Caps,
) -> Result<u8, Failure> {
    let instances = match (suite, input) {
        (Some(Suite::Exhaustive), _) => canonical_exhaustive(),
        (Some(Suite::Random), _) => canonical_random(),
        (None, Some(path)) => parse_dfa_many(&read_input(path)?).map_err(|e| Failure::usage(format!("{path}: {e}")))?,
        (None, None) => return Err(Failure::usage("cross-validate needs --suite or --input")),
    };
    let opts = CrossOptions {
        semigroup_cap: caps.cap,
        limits: GraphLimits { product_cap: caps.product_cap },
        exec: if sequential { Exec::Sequential } else { Exec::default() },
        timings,
    };
    let report = par::with_threads(jobs, || cross_validate(instances, &opts));
    let format = match format {
        Format::Text => ReportFormat::Text,
        Format::Json => ReportFormat::Json,
        Format::Csv => ReportFormat::Csv,
    };
    print!("{}", report.render(format));
    let s = &report.summary;
    for d in &report.disagreements {
        eprintln!("disagreement on instance {}:\n{}", d.index, d.dfa);
    }
    let clean = s.disagreements == 0
        && s.witness_failures == 0
        && s.hierarchy_violations == 0
        && s.duality_violations == 0;
    if !clean {
        eprintln!(
            "cross-validation failed: {} disagreements, {} rejected witnesses, {} hierarchy and {} duality violations",
            s.disagreements, s.witness_failures, s.hierarchy_violations, s.duality_violations
        );
    }
    Ok(if clean { 0 } else { EXIT_FAILS })
}

fn verify(input: &str, verdict_path: &str) -> Result<u8, Failure> {
    let instance = load(input)?;
    let text = read_input(verdict_path)?;
    let verdict = Verdict::from_json(text.trim()).map_err(|e| Failure::usage(format!("{verdict_path}: {e}")))?;
    let result = match &instance {
        // semigroup-route witnesses carry element words, checked on the automaton
        Loaded::Dfa(d) => verify_witness(Instance::Dfa(d), &verdict),
        Loaded::Semigroup(s) => verify_witness(Instance::Semigroup(s), &verdict),
    };
    match result {
        Ok(true) => {
            println!("witness valid");
            Ok(0)
        }
        Ok(false) => {
            println!("witness invalid");
            Ok(EXIT_FAILS)
        }
        Err(e) => Err(Failure::usage(e)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check { property, route, input, json, witness, caps } => {
            check(property, route, &input, json, witness, caps)
        }
        Command::SemigroupOf { input, cap } => semigroup_of(&input, cap),
        Command::Gen { states, letters, completeness, seed, count } => {
            generate(GenSpec { states, letters, completeness, seed, count })
        }
        Command::Enumerate { states, letters, complete_only } => enumerate(states, letters, complete_only),
        Command::CrossValidate { suite, input, format, jobs, sequential, timings, caps } => {
            cross(suite, input.as_deref(), format, jobs, sequential, timings, caps)
        }
        Command::VerifyWitness { input, verdict } => verify(&input, &verdict),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("loctest: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
