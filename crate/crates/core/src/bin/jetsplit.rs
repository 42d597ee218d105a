//! Command-line front end. Exit codes: 0 success, 2 usage or parameter
//! error, 3 verification failure.

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use jetsplit::binomsys::{build_system, gluing_row, solve_system};
use jetsplit::report::{run_suite, split_report, table_report, Suite};
use jetsplit::{untwisted_transition, Error, FieldSpec, JetParams, LaurentMatrix, ModuleSide};

#[derive(Parser)]
#[command(name = "jetsplit", version, about = "Splitting types of principal-parts bundles on P^1")]
struct Cli {
    #[arg(long, value_enum, global = true, default_value = "text")]
    format: Format,
    /// Seed for the randomized unimodular trials.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SideArg {
    Left,
    Right,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Print a transition matrix.
    Transition {
        #[arg(long)]
        n: i64,
        #[arg(long, default_value_t = 1)]
        k: i64,
        #[arg(long = "char", default_value_t = 0)]
        characteristic: u64,
        #[arg(long, default_value = "left")]
        side: ModuleSide,
        /// The untwisted principal parts `P^k` (ignores `--n` and `--side`).
        #[arg(long)]
        untwisted: bool,
    },
    /// Compute a certified splitting type.
    Split {
        #[arg(long)]
        n: i64,
        #[arg(long, default_value_t = 1)]
        k: i64,
        #[arg(long = "char", default_value_t = 0)]
        characteristic: u64,
        #[arg(long, default_value = "left")]
        side: ModuleSide,
    },
    /// Solve the binomial system `A_r x = b_r`.
    Solve {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        k: i64,
        #[arg(long)]
        r: i64,
        #[arg(long = "char", default_value_t = 0)]
        characteristic: u64,
    },
    /// Sweep splitting types over `n` and characteristics.
    Table {
        #[arg(long, default_value_t = 1)]
        k: i64,
        #[arg(long)]
        n_min: i64,
        #[arg(long)]
        n_max: i64,
        #[arg(long, value_delimiter = ',', default_value = "0,2,3,5")]
        chars: Vec<u64>,
        /// Defaults to both sides when `k = 1`, the left side otherwise.
        #[arg(long, value_enum)]
        side: Option<SideArg>,
    },
    /// Run the verification suites.
    Verify {
        #[arg(long, default_value = "all")]
        suite: Suite,
    },
}

enum Failure {
    Usage(Error),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParams(_)
            | Error::NotPrime(_)
            | Error::Parse(_)
            | Error::CharacteristicDividesN { .. } => Failure::Usage(e),
            other => Failure::Verification(other.to_string()),
        }
    }
}

fn matrix_json(m: &LaurentMatrix) -> serde_json::Value {
    json!(m.canonical_rows())
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let json = cli.format == Format::Json;
    match &cli.command {
        &Command::Transition { n, k, characteristic, side, untwisted } => {
            let field = FieldSpec::new(characteristic)?;
            let m = if untwisted {
                untwisted_transition(k, field)?
            } else {
                JetParams::new(n, k, field, side)?.transition()
            };
            if json {
                let params = json!({ "n": n, "k": k, "characteristic": characteristic, "side": side, "untwisted": untwisted });
                println!("{}", json!({ "params": params, "matrix": matrix_json(&m) }));
            } else {
                println!("{m}");
            }
        }
        &Command::Split { n, k, characteristic, side } => {
            let params = JetParams::new(n, k, FieldSpec::new(characteristic)?, side)?;
            let report = split_report(&params)?;
            if json {
                println!("{}", serde_json::to_string(&report).expect("serializable"));
            } else {
                println!("{report}");
            }
        }
        &Command::Solve { n, k, r, characteristic } => {
            let field = FieldSpec::new(characteristic)?;
            let sys = build_system(n, k, r, field)?;
            let sol = solve_system(&sys);
            let strs = |v: &[jetsplit::FieldElement]| v.iter().map(ToString::to_string).collect::<Vec<_>>();
            let a: Vec<Vec<String>> = sys.a.iter().map(|row| strs(row)).collect();
            let row = sol.is_unique().then(|| strs(&gluing_row(n, k, &sol.x, field)));
            if json {
                let params = json!({ "n": n, "k": k, "r": r, "characteristic": characteristic });
                let out = json!({
                    "params": params,
                    "a": a,
                    "b": strs(&sys.b),
                    "status": sol.status,
                    "x": strs(&sol.x),
                    "gluing_row": row,
                });
                println!("{out}");
            } else {
                println!("A_{r} over {field}:");
                for line in &a {
                    println!("  [{}]", line.join(", "));
                }
                println!("b_{r} = ({})", strs(&sys.b).join(", "));
                println!(
                    "status: {}",
                    serde_json::to_value(sol.status).expect("enum").as_str().unwrap_or("")
                );
                if sol.is_unique() {
                    println!("x = ({})", strs(&sol.x).join(", "));
                    if sol.last().is_some_and(|x| x.is_zero()) {
                        println!("note: x_{{{r},{r}}} = 0");
                    }
                }
                if let Some(row) = row {
                    println!("c^{r}_0..c^{r}_{k} = ({})", row.join(", "));
                }
            }
        }
        Command::Table { k, n_min, n_max, chars, side } => {
            let side = side.unwrap_or(if *k == 1 { SideArg::Both } else { SideArg::Left });
            let sides = match side {
                SideArg::Left => vec![ModuleSide::Left],
                SideArg::Right => vec![ModuleSide::Right],
                SideArg::Both => vec![ModuleSide::Left, ModuleSide::Right],
            };
            let table = table_report(*k, *n_min, *n_max, chars, &sides)?;
            if json {
                println!("{}", serde_json::to_string(&table).expect("serializable"));
            } else {
                println!("{table}");
            }
        }
        &Command::Verify { suite } => {
            let outcomes = run_suite(suite, cli.seed);
            let passed = outcomes.iter().all(|o| o.passed());
            if json {
                println!("{}", json!({ "passed": passed, "checks": outcomes }));
            } else {
                for o in &outcomes {
                    println!("{o}");
                }
                println!("{}", if passed { "all checks passed" } else { "verification FAILED" });
            }
            if !passed {
                return Err(Failure::Verification("verification failed".into()));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
