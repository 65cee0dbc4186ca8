use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use braidword::braid::{self, BraidWord};
use braidword::config::{Config, OutputMode};
use braidword::diagram::{parse_diagram, serialize_diagram, Diagram};
use braidword::rewrite::{bridge_normalize_with_path, equiv_search, Verdict};
use braidword::{construct, invariants, oracle, orient, render};

// A closed pipe (`braidword render x | head`) is not worth a panic.
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = write!(std::io::stdout(), $($t)*);
    }};
}

macro_rules! outln {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout(), $($t)*);
    }};
}

const EXIT_ERROR: u8 = 1;
const EXIT_UNKNOWN: u8 = 3;
const EXIT_NOT_EQUAL: u8 = 4;

/// String diagrams for oriented knots in free braided monoidal categories.
#[derive(Parser)]
#[command(name = "braidword", version)]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Config file; defaults to $BRAIDWORD_CONFIG.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Typecheck a diagram and print its level words.
    Check { file: PathBuf },
    /// Writhe, turning number, cap-cup cycle, components and bridge data.
    Invariants { file: PathBuf },
    /// ASCII picture of a diagram.
    Render { file: PathBuf },
    /// Orient an unoriented closed knot diagram (`cap @ k`, `cup @ k`).
    Orient {
        file: PathBuf,
        /// Flip every orientation.
        #[arg(long)]
        reverse: bool,
    },
    /// Build the word-problem instance for a knot.
    Reduce {
        file: PathBuf,
        /// Directory for `<stem>.lhs.bmc`, `<stem>.rhs.bmc` and `<stem>.manifest.json`.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Move every cap above every cup.
    Bridge { file: PathBuf },
    /// Search for a rewrite path between two diagrams.
    Equiv {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Braid group computations.
    Braid {
        #[command(subcommand)]
        command: BraidCommand,
    },
    /// Writhe-normalized Kauffman bracket of a closed diagram.
    Oracle {
        file: PathBuf,
        #[arg(long)]
        crossing_limit: Option<usize>,
    },
}

#[derive(Args)]
struct BudgetArgs {
    #[arg(long)]
    max_states: Option<usize>,
    #[arg(long)]
    max_slices: Option<usize>,
}

#[derive(Subcommand)]
enum BraidCommand {
    /// Decide whether two words denote the same braid.
    Equal {
        #[arg(short = 'n', long = "strands")]
        n: usize,
        u: String,
        v: String,
        #[arg(long)]
        fuse: Option<u64>,
    },
}

type Failure = Box<dyn std::error::Error>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()).into())
}

fn load(path: &Path) -> Result<Diagram, Failure> {
    parse_diagram(&read(path)?).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn print_json(v: &impl serde::Serialize) -> Result<(), Failure> {
    outln!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let mut config = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::from_env()?,
    };
    if cli.json {
        config.output = OutputMode::Json;
    }
    let json = config.output == OutputMode::Json;
    match cli.command {
        Command::Check { file } => {
            let d = load(&file)?;
            let levels = d.levels();
            if json {
                print_json(&json!({
                    "domain": d.domain().to_string(),
                    "codomain": d.codomain().to_string(),
                    "slices": d.len(),
                    "closed": d.is_closed(),
                    "levels": levels.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
                }))?;
            } else {
                outln!("dom: {}", d.domain());
                outln!("cod: {}", d.codomain());
                for (i, l) in levels.iter().enumerate() {
                    outln!("level {i}: {l}");
                }
            }
        }
        Command::Invariants { file } => print_json(&invariants::report(&load(&file)?)?)?,
        Command::Render { file } => out!("{}", render::render(&load(&file)?)),
        Command::Orient { file, reverse } => {
            let d = orient::orient_knot(&read(&file)?, reverse)?;
            out!("{}", serialize_diagram(&d));
        }
        Command::Reduce { file, out_dir } => {
            let inst = construct::build_instance(&load(&file)?)?;
            let stem = file.file_stem().and_then(|s| s.to_str()).unwrap_or("instance");
            std::fs::create_dir_all(&out_dir)?;
            let manifest = inst.manifest();
            let lhs = out_dir.join(format!("{stem}.lhs.bmc"));
            let rhs = out_dir.join(format!("{stem}.rhs.bmc"));
            std::fs::write(&lhs, inst.lhs_text())?;
            std::fs::write(&rhs, inst.rhs_text())?;
            let doc = json!({
                "lhs": lhs.display().to_string(),
                "rhs": rhs.display().to_string(),
                "lhs_slices": inst.lhs.len(),
                "rhs_slices": inst.rhs.len(),
                "manifest": manifest,
            });
            std::fs::write(
                out_dir.join(format!("{stem}.manifest.json")),
                serde_json::to_string_pretty(&doc)?,
            )?;
            print_json(&doc)?;
        }
        Command::Bridge { file } => {
            let d = load(&file)?;
            let (normal, path) = bridge_normalize_with_path(&d);
            if json {
                print_json(&json!({ "diagram": serialize_diagram(&normal), "path": path }))?;
            } else {
                out!("{}", serialize_diagram(&normal));
            }
        }
        Command::Equiv { a, b, budget } => {
            let mut bud = config.budget();
            bud.max_states = budget.max_states.unwrap_or(bud.max_states);
            bud.max_slices = budget.max_slices.or(bud.max_slices);
            let result = equiv_search(&load(&a)?, &load(&b)?, bud)?;
            if json {
                print_json(&result)?;
            } else {
                match &result.verdict {
                    Verdict::Equal { path } => {
                        outln!("equal: {} moves, {} states", path.len(), result.stats.states_visited);
                        for mv in path {
                            outln!("{}", serde_json::to_string(mv)?);
                        }
                    }
                    Verdict::Unknown => {
                        outln!("unknown: budget exhausted after {} states", result.stats.states_visited)
                    }
                }
            }
            return Ok(if result.is_equal() { 0 } else { EXIT_UNKNOWN });
        }
        Command::Braid {
            command: BraidCommand::Equal { n, u, v, fuse },
        } => {
            let (u, v) = (BraidWord::parse(n, &u)?, BraidWord::parse(n, &v)?);
            let equal = braid::braid_equal_with_fuse(&u, &v, fuse.unwrap_or(config.braid_fuse))?;
            if json {
                print_json(&json!({ "u": u.to_string(), "v": v.to_string(), "equal": equal }))?;
            } else {
                outln!("{}", if equal { "equal" } else { "not equal" });
            }
            return Ok(if equal { 0 } else { EXIT_NOT_EQUAL });
        }
        Command::Oracle { file, crossing_limit } => {
            let d = load(&file)?;
            let limit = crossing_limit.unwrap_or(config.crossing_limit);
            let inv = oracle::normalized_invariant_with_limit(&d, limit)?;
            let verdict = oracle::verdict(&inv);
            if json {
                print_json(&json!({ "invariant": inv, "verdict": verdict }))?;
            } else {
                let terms: Vec<String> = inv.terms().map(|(e, c)| format!("{e}:{c}")).collect();
                outln!("{}", terms.join(" "));
                outln!("{verdict}");
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_ERROR } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
