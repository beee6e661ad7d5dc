use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qsets::commutator::{commutator_algebra, commutator_finite, commutator_kernel};
use qsets::eval::{Evaluator, SemanticsMode};
use qsets::formula::parse;
use qsets::harness::{reproduce_counterexample, Suite, SuiteConfig};
use qsets::universe::{support_many, HFSet};
use qsets::{Environment, Error, Projection};

#[derive(Parser)]
#[command(
    name = "qsets",
    version,
    about = "Exact quantum set theory over rational projection lattices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a closed Delta0 formula.
    Eval(EvalArgs),
    /// Guided demonstrations.
    Demo {
        #[command(subcommand)]
        which: Demo,
    },
    /// Run a property suite.
    Check(CheckArgs),
    /// Commutator of the joint support of some quantum sets.
    Commutator(CommutatorArgs),
    /// Print the check embedding of the von Neumann ordinal n.
    Embed {
        n: usize,
        /// Ambient dimension of the (irrelevant) projection lattice.
        #[arg(long, default_value_t = 1)]
        dim: usize,
    },
    /// Restrict a quantum set by a projection.
    Restrict(RestrictArgs),
}

#[derive(Subcommand)]
enum Demo {
    /// Failure of De Morgan's law for bounded quantifiers under Takeuti's
    /// membership clause, and its repair.
    Counterexample,
}

#[derive(Clone, Copy, ValueEnum)]
enum Semantics {
    Reformed,
    Takeuti,
}

impl From<Semantics> for SemanticsMode {
    fn from(s: Semantics) -> Self {
        match s {
            Semantics::Reformed => SemanticsMode::Reformed,
            Semantics::Takeuti => SemanticsMode::Takeuti,
        }
    }
}

#[derive(Args)]
struct UniverseArg {
    /// Universe file; without it only check:n constants exist.
    #[arg(long)]
    universe: Option<PathBuf>,
    /// Ambient dimension when no universe file is given.
    #[arg(long, default_value_t = 2)]
    dim: usize,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    universe: UniverseArg,
    /// Formula text, or @name for an entry of the universe's formula table.
    #[arg(long)]
    formula: String,
    #[arg(long, value_enum, default_value_t = Semantics::Reformed)]
    semantics: Semantics,
    /// Also print the canonical basis of the truth value.
    #[arg(long)]
    show_span: bool,
    /// Also print the name of a declared projection equal to the value.
    #[arg(long)]
    show_name: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Summary,
}

#[derive(Args)]
struct CheckArgs {
    /// demorgan, restriction, transfer, eqv, kernel or range.
    suite: String,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Number of cases (suite default if omitted).
    #[arg(long)]
    cases: Option<usize>,
    /// Dimension or dimension range, e.g. 3 or 2-4.
    #[arg(long, default_value = "2-4")]
    dim: String,
    /// Rank cap for generated quantum sets.
    #[arg(long, default_value_t = 2)]
    rank: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Transfer suite: also try the contrapositive and relevance conditionals.
    #[arg(long)]
    conditionals: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Finite,
    Kernel,
    Algebra,
}

#[derive(Args)]
struct CommutatorArgs {
    #[command(flatten)]
    universe: UniverseArg,
    /// Comma-separated quantum set names.
    #[arg(long, value_delimiter = ',', required = true)]
    sets: Vec<String>,
    #[arg(long, value_enum, default_value_t = Method::Finite)]
    method: Method,
}

#[derive(Args)]
struct RestrictArgs {
    #[command(flatten)]
    universe: UniverseArg,
    #[arg(long)]
    set: String,
    /// Projection name, `full` or `zero`.
    #[arg(long)]
    proj: String,
    /// Name for the restricted set (default `<set>_r`).
    #[arg(long)]
    name: Option<String>,
    /// Evaluate this formula afterwards, with the new name bound.
    #[arg(long)]
    formula: Option<String>,
    /// Write the extended universe file here instead of printing it.
    #[arg(long)]
    output: Option<PathBuf>,
}

const EXIT_FAIL: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_NOT_DELTA0: u8 = 3;
const EXIT_UNIVERSE: u8 = 4;

struct Failed(u8, String);

impl From<Error> for Failed {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotDelta0(_) => EXIT_NOT_DELTA0,
            Error::Syntax { .. } | Error::UnboundVariable(_) | Error::UnknownConstant(_) => {
                EXIT_PARSE
            }
            _ => EXIT_UNIVERSE,
        };
        Failed(code, e.to_string())
    }
}

type Outcome = Result<u8, Failed>;

fn load(arg: &UniverseArg) -> Result<Environment, Failed> {
    let env = match &arg.universe {
        Some(path) => Environment::load(path),
        None => Environment::new(arg.dim),
    };
    env.map_err(|e| Failed(EXIT_UNIVERSE, e.to_string()))
}

fn print_value(env: &Environment, value: &Projection, span: bool, name: bool) {
    println!("{}", value.classify());
    if span {
        println!("span: {value}");
    }
    if name {
        if let Some(n) = env.name_of_projection(value) {
            println!("name: {n}");
        }
    }
}

fn cmd_eval(args: &EvalArgs) -> Outcome {
    let env = load(&args.universe)?;
    let text = match args.formula.strip_prefix('@') {
        Some(name) => env
            .formulas()
            .get(name)
            .cloned()
            .ok_or_else(|| Failed(EXIT_PARSE, format!("no formula named `{name}`")))?,
        None => args.formula.clone(),
    };
    let f = parse(&text)?;
    let value = Evaluator::new(&env, args.semantics.into()).eval(&f)?;
    print_value(&env, &value, args.show_span, args.show_name);
    Ok(0)
}

fn cmd_demo_counterexample() -> Outcome {
    let v = reproduce_counterexample()?;
    println!("dimension 2, P = {}, Q = {}", v.p, v.q);
    println!("u = {{<check:0, P>}}, v = {{<check:0, Q>}}, phi(x) = !(x in v)");
    println!();
    println!(
        "{:<10} {:<26} {:<26}",
        "semantics", "[[E x in u . !phi(x)]]", "[[!(A x in u . phi(x))]]"
    );
    for (mode, e, n) in [
        ("takeuti", &v.takeuti_exists, &v.takeuti_not_forall),
        ("reformed", &v.reformed_exists, &v.reformed_not_forall),
    ] {
        println!("{:<10} {:<26} {:<26}", mode, label(e, &v), label(n, &v));
    }
    println!();
    println!("takeuti: P ^ Q = 0 < P = P * Q, so De Morgan fails strictly");
    println!("reformed: both sides are P * Q = P");
    if v.reproduced() {
        println!("counterexample reproduced");
        Ok(0)
    } else {
        println!("counterexample NOT reproduced");
        Ok(EXIT_FAIL)
    }
}

fn label(x: &Projection, v: &qsets::harness::CounterexampleValues) -> String {
    if *x == v.p {
        format!("P = {x}")
    } else {
        x.to_string()
    }
}

fn parse_dims(s: &str) -> Result<(usize, usize), Failed> {
    let bad = || Failed(EXIT_PARSE, format!("bad dimension range `{s}`"));
    let (lo, hi) = match s.split_once(['-', ':']) {
        Some((a, b)) => (a.trim().parse(), b.trim().parse()),
        None => (s.trim().parse(), s.trim().parse()),
    };
    let (lo, hi): (usize, usize) = (lo.map_err(|_| bad())?, hi.map_err(|_| bad())?);
    if lo == 0 || lo > hi || hi > qsets::MAX_DIMENSION {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn cmd_check(args: &CheckArgs) -> Outcome {
    let suite: Suite = args.suite.parse().map_err(|e| Failed(EXIT_PARSE, e))?;
    let (lo, hi) = parse_dims(&args.dim)?;
    let mut cfg = SuiteConfig::new(args.seed, args.cases.unwrap_or(suite.default_cases()))
        .dims(lo, hi)
        .rank(args.rank);
    cfg.conditionals = args.conditionals;
    if args.rank > qsets::generate::MAX_GEN_RANK {
        return Err(Error::GeneratorCaps(format!("rank {}", args.rank)).into());
    }
    let report = suite.run(&cfg);
    match args.format {
        Format::Text => print!("{report}"),
        Format::Summary => println!("{}", report.summary()),
    }
    Ok(if report.passed() { 0 } else { EXIT_FAIL })
}

fn resolve_set(env: &Environment, name: &str) -> Result<qsets::QSet, Failed> {
    env.qset(name)
        .ok_or_else(|| Failed(EXIT_PARSE, format!("unknown quantum set `{name}`")))
}

fn cmd_commutator(args: &CommutatorArgs) -> Outcome {
    let env = load(&args.universe)?;
    let sets = args
        .sets
        .iter()
        .map(|n| resolve_set(&env, n))
        .collect::<Result<Vec<_>, _>>()?;
    let support: Vec<Projection> = support_many(&sets).into_iter().collect();
    let value = match args.method {
        Method::Finite => commutator_finite(&support)?,
        Method::Kernel => commutator_kernel(&support)?,
        Method::Algebra => commutator_algebra(&support)?,
    };
    print_value(&env, &value, true, true);
    Ok(0)
}

fn cmd_embed(n: usize, dim: usize) -> Outcome {
    if n > qsets::env::MAX_CHECK_ORDINAL {
        return Err(Failed(
            EXIT_PARSE,
            format!("ordinal {n} exceeds {}", qsets::env::MAX_CHECK_ORDINAL),
        ));
    }
    let env = Environment::new(dim).map_err(|e| Failed(EXIT_UNIVERSE, e.to_string()))?;
    let u = env.universe().check_ordinal(n);
    println!("check:{n} = {u}");
    println!("rank: {}", u.rank());
    println!("nodes: {}", u.node_count());
    if n <= 4 {
        println!("hf: {}", HFSet::ordinal(n));
    }
    Ok(0)
}

fn cmd_restrict(args: &RestrictArgs) -> Outcome {
    let mut env = load(&args.universe)?;
    let u = resolve_set(&env, &args.set)?;
    let p = env
        .projection(&args.proj)
        .ok_or_else(|| Failed(EXIT_PARSE, format!("unknown projection `{}`", args.proj)))?;
    let r = env.universe().restrict(&u, &p)?;
    let name = args
        .name
        .clone()
        .unwrap_or_else(|| format!("{}_r", args.set.replace(':', "_")));
    env.add_qset(&name, r.clone())
        .map_err(|e| Failed(EXIT_PARSE, e.to_string()))?;
    println!("{name} = {r}");
    if let Some(text) = &args.formula {
        let f = parse(text)?;
        let value = Evaluator::new(&env, SemanticsMode::Reformed).eval(&f)?;
        print_value(&env, &value, true, false);
    }
    let json = env.to_file().to_json();
    match &args.output {
        Some(path) => fs::write(path, json + "\n")
            .map_err(|e| Failed(EXIT_UNIVERSE, format!("{}: {e}", path.display())))?,
        None if args.formula.is_none() => println!("{json}"),
        None => {}
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Eval(a) => cmd_eval(a),
        Command::Demo {
            which: Demo::Counterexample,
        } => cmd_demo_counterexample(),
        Command::Check(a) => cmd_check(a),
        Command::Commutator(a) => cmd_commutator(a),
        Command::Embed { n, dim } => cmd_embed(*n, *dim),
        Command::Restrict(a) => cmd_restrict(a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(Failed(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
