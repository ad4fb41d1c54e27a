use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use esakia_core::abomination::{abomination_truncation, canonical_coloring, ladder_truncation};
use esakia_core::coloring::{first_violation, is_n_colorable, Coloring, DEFAULT_BUDGET};
use esakia_core::probe::{kc_probe, quotient_census, quotient_census_sampled};
use esakia_core::reduction::{coarsest_reduction, trace_json};
use esakia_core::verify::{run_paper_suite, Outcome};
use esakia_core::{Error, Poset};

const THREADS_VAR: &str = "ESAKIA_KIT_THREADS";

#[derive(Parser)]
#[command(name = "esakia-kit", version, about = "Finite Esakia duality toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Levels 0..=depth of the abomination space over n.
    GenAbomination {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        depth: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Print the canonical (n+1)-coloring instead of the poset.
        #[arg(long)]
        canonical_coloring: bool,
    },
    /// Levels 0..=depth of the ladder over n.
    GenLadder {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        depth: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Checks whether a coloring is weak and whether it is strict. Without
    /// `--coloring`, searches for an n-coloring instead.
    CheckColoring {
        #[arg(long)]
        poset: PathBuf,
        #[arg(long, required_unless_present = "n")]
        coloring: Option<PathBuf>,
        #[arg(long, conflicts_with = "coloring")]
        n: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// The coarsest color-respecting reduction of a colored poset.
    Reduce {
        #[arg(long)]
        poset: PathBuf,
        #[arg(long)]
        coloring: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Colorable quotients reachable from weak n-colorings.
    Census {
        #[arg(long)]
        poset: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Sample this many colorings instead of choosing automatically.
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Largest one-generated SI algebra satisfying ~x | ~~x = 1.
    KcProbe {
        #[arg(long, default_value_t = 6)]
        max_size: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Runs a verification suite.
    Verify {
        #[arg(long, default_value = "paper")]
        suite: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Re-encodes a JSON poset.
    Convert {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "dot")]
        format: Format,
    },
}

/// A failure and its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Falsified(_) => 1,
            Error::BudgetExceeded(_) => 3,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn read_poset(path: &Path) -> Result<Poset, Failure> {
    Ok(Poset::from_json(&read(path)?)?)
}

fn read_coloring(path: &Path, p: &Poset) -> Result<Coloring, Failure> {
    let c = Coloring::from_json(&read(path)?)?;
    if c.len() != p.len() {
        return Err(usage(format!(
            "coloring has {} entries for a poset with {} elements",
            c.len(),
            p.len()
        )));
    }
    Ok(c)
}

fn render_poset(p: &Poset, format: Format) -> Result<String, Failure> {
    match format {
        Format::Json => Ok(p.to_json() + "\n"),
        Format::Dot => Ok(p.to_dot()),
        Format::Csv => {
            let mut out = String::from("lower,upper\n");
            for (x, y) in p.covers() {
                out.push_str(&format!("{x},{y}\n"));
            }
            Ok(out)
        }
        Format::Text => Err(usage("posets are written as json, dot or csv")),
    }
}

fn only(format: Format, allowed: &[Format]) -> Result<(), Failure> {
    if allowed.contains(&format) {
        Ok(())
    } else {
        Err(usage("format not supported by this command"))
    }
}

/// Output text, and an exit code for completed runs.
fn run(cmd: Command) -> Result<(String, u8), Failure> {
    match cmd {
        Command::GenAbomination {
            n,
            depth,
            format,
            canonical_coloring: coloring,
        } => {
            let t = abomination_truncation(n, depth)?;
            if coloring {
                only(format, &[Format::Json])?;
                return Ok((canonical_coloring(&t)?.to_json() + "\n", 0));
            }
            Ok((render_poset(&t.poset, format)?, 0))
        }
        Command::GenLadder { n, depth, format } => Ok((
            render_poset(&ladder_truncation(n, depth)?.poset, format)?,
            0,
        )),
        Command::CheckColoring {
            poset,
            coloring,
            n,
            budget,
        } => {
            let p = read_poset(&poset)?;
            let Some(coloring) = coloring else {
                let n = n.expect("clap requires --n without --coloring");
                let found = is_n_colorable(&p, n, budget)?;
                let report = serde_json::json!({
                    "n": n,
                    "colorable": found.is_some(),
                    "witness": found.map(|c| serde_json::from_str::<serde_json::Value>(&c.to_json())
                        .expect("valid json")),
                });
                return Ok((report.to_string() + "\n", 0));
            };
            let c = read_coloring(&coloring, &p)?;
            c.check_weak(&p)?;
            let violation = first_violation(&p, &c);
            let report = serde_json::json!({
                "weak": true,
                "strict": violation.is_none(),
                "violation": violation.map(|(x, y)| [x, y]),
            });
            Ok((report.to_string() + "\n", 0))
        }
        Command::Reduce {
            poset,
            coloring,
            format,
        } => {
            only(format, &[Format::Json, Format::Dot])?;
            let p = read_poset(&poset)?;
            let c = read_coloring(&coloring, &p)?;
            let r = coarsest_reduction(&p, &c)?;
            if format == Format::Dot {
                return Ok((r.quotient.to_dot(), 0));
            }
            let report = serde_json::json!({
                "kernel": serde_json::from_str::<serde_json::Value>(&r.kernel.to_json())
                    .expect("valid json"),
                "steps": serde_json::from_str::<serde_json::Value>(&trace_json(&r.steps))
                    .expect("valid json"),
                "quotient": serde_json::from_str::<serde_json::Value>(&r.quotient.to_json())
                    .expect("valid json"),
            });
            Ok((report.to_string() + "\n", 0))
        }
        Command::Census {
            poset,
            n,
            budget,
            samples,
            seed,
            format,
        } => {
            only(format, &[Format::Json, Format::Csv])?;
            let p = read_poset(&poset)?;
            let census = match samples {
                Some(s) => quotient_census_sampled(&p, n, s, seed)?,
                None => quotient_census(&p, n, budget)?,
            };
            let out = match format {
                Format::Csv => census.to_csv(),
                _ => census.to_json() + "\n",
            };
            Ok((out, 0))
        }
        Command::KcProbe { max_size, format } => {
            only(format, &[Format::Json, Format::Csv])?;
            let r = kc_probe(max_size)?;
            let out = if format == Format::Csv {
                let mut out = String::from("poset_size,algebra_size\n");
                for (p, a) in &r.qualifying {
                    out.push_str(&format!("{p},{a}\n"));
                }
                out
            } else {
                serde_json::to_string(&r).expect("serializable") + "\n"
            };
            Ok((out, 0))
        }
        Command::Verify {
            suite,
            seed,
            format,
        } => {
            if suite != "paper" {
                return Err(usage(format!("unknown suite {suite:?} (available: paper)")));
            }
            only(format, &[Format::Text, Format::Json])?;
            let report = run_paper_suite(seed);
            let outcomes: Vec<Outcome> = report.results.iter().map(|r| r.outcome).collect();
            let code = if outcomes
                .iter()
                .any(|o| matches!(o, Outcome::Fail | Outcome::Error))
            {
                1
            } else if outcomes.contains(&Outcome::Budget) {
                3
            } else {
                0
            };
            let out = match format {
                Format::Json => report.to_json() + "\n",
                _ => report.render(),
            };
            Ok((out, code))
        }
        Command::Convert { input, format } => Ok((render_poset(&read_poset(&input)?, format)?, 0)),
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = value.parse().map_err(|_| {
        usage(format!(
            "{THREADS_VAR} must be a thread count, got {value:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| usage(e.to_string()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match configure_threads().and_then(|()| run(cli.command)) {
        Ok((out, code)) => {
            print!("{out}");
            if code == 1 {
                eprintln!("FALSIFIED: a verified property failed, see the report above");
            }
            ExitCode::from(code)
        }
        Err(f) => {
            if f.code == 1 {
                eprintln!("FALSIFIED: {}", f.message);
            } else {
                eprintln!("error: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}
