use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use tunnelmeet::enumeration::{phi, rational_pair, ENUMERATION_VERSION};
use tunnelmeet::graph::{InfiniteBinaryTree, InfiniteGrid, InfiniteLine};
use tunnelmeet::rational::fmt_q;
use tunnelmeet::rendezvous::{parse_route_dump, tunnel_check, Limits, DEFAULT_STEP_BUDGET};
use tunnelmeet::scenario::{read_text, route_dump, run_scenario_file, Overrides, ScenarioError, World};

const ENUM_ENV: &str = "TUNNELMEET_ENUM_VERSION";

#[derive(Parser)]
#[command(
    name = "tunnelmeet",
    version,
    about = "Asynchronous rendezvous routes and adversary runs"
)]
struct Cli {
    /// Write the output here instead of stdout (atomically, nothing on error).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a scenario and print its verdict-v1 report.
    Run {
        scenario: PathBuf,
        /// Run this single seed instead of the scenario's list.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        phase_cap: Option<u64>,
        #[arg(long)]
        step_budget: Option<usize>,
        /// Add decimal approximations next to exact fractions.
        #[arg(long)]
        float: bool,
    },
    /// Dump the route of one agent.
    Route {
        /// Graph, terrain or scenario file.
        #[arg(long, conflicts_with = "generator", required_unless_present = "generator")]
        world: Option<PathBuf>,
        /// infinite_line, infinite_grid or infinite_binary_tree.
        #[arg(long)]
        generator: Option<String>,
        /// Node name, or `x y` on a terrain.
        #[arg(long, allow_hyphen_values = true)]
        start: String,
        #[arg(long)]
        label: u64,
        #[arg(long, default_value_t = 1)]
        phase_cap: u64,
        #[arg(long, default_value_t = DEFAULT_STEP_BUDGET)]
        step_budget: usize,
    },
    /// Shortest tunnel between two route dumps.
    Tunnel { first: PathBuf, second: PathBuf },
    /// List the quadruple enumeration (or rational pairs) as TSV.
    Enumerate {
        #[arg(long, default_value_t = 100)]
        count: u64,
        #[arg(long, default_value_t = 1)]
        from: u64,
        /// List rational pairs (the terrain port offsets) instead.
        #[arg(long)]
        rationals: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(cli: Cli) -> Result<u8, ScenarioError> {
    if let Ok(pinned) = std::env::var(ENUM_ENV) {
        if pinned != ENUMERATION_VERSION {
            return Err(ScenarioError::Version(format!(
                "{ENUM_ENV}={pinned}, but this build enumerates `{ENUMERATION_VERSION}`"
            )));
        }
    }
    let (text, code) = match cli.cmd {
        Cmd::Run {
            scenario,
            seed,
            phase_cap,
            step_budget,
            float,
        } => {
            let o = Overrides {
                seed,
                phase_cap,
                step_budget,
            };
            let v = run_scenario_file(&scenario, &o)?;
            (v.to_json(float), v.exit_code() as u8)
        }
        Cmd::Route {
            world,
            generator,
            start,
            label,
            phase_cap,
            step_budget,
        } => {
            let w = match (world, generator) {
                (Some(path), _) => World::from_file(&path)?,
                (None, Some(name)) => generator_world(&name)?,
                (None, None) => unreachable!("clap requires one of them"),
            };
            let limits = Limits::phases(phase_cap).with_budget(step_budget);
            (route_dump(&w, &start, label, &limits)?, 0)
        }
        Cmd::Tunnel { first, second } => {
            let r1 = parse_route_dump(&read_text(&first)?)?;
            let r2 = parse_route_dump(&read_text(&second)?)?;
            match tunnel_check(&r1, &r2) {
                Some(c) => (format!("tunnel n={}\n", c.n), 0),
                None => ("none\n".to_string(), 1),
            }
        }
        Cmd::Enumerate { count, from, rationals } => (enumerate(from, count, rationals)?, 0),
    };
    emit(cli.out.as_deref(), &text)?;
    Ok(code)
}

fn generator_world(name: &str) -> Result<World, ScenarioError> {
    Ok(match name {
        "infinite_line" => World::Line(InfiniteLine::default()),
        "infinite_grid" => World::Grid(InfiniteGrid::default()),
        "infinite_binary_tree" => World::Tree(InfiniteBinaryTree::default()),
        other => return Err(ScenarioError::Invalid(format!("unknown generator `{other}`"))),
    })
}

fn enumerate(from: u64, count: u64, rationals: bool) -> Result<String, ScenarioError> {
    if from == 0 {
        return Err(ScenarioError::Invalid("enumeration indices start at 1".into()));
    }
    let join = |s: &[u64]| s.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
    let mut out = String::new();
    writeln!(out, "# tunnelmeet enumeration {ENUMERATION_VERSION}").unwrap();
    let end = from.saturating_add(count);
    for k in from..end {
        if rationals {
            let z = rational_pair(k).map_err(|e| ScenarioError::Invalid(e.to_string()))?;
            writeln!(out, "{k}\t{}\t{}", fmt_q(&z.q1), fmt_q(&z.q2)).unwrap();
        } else {
            let q = phi(k).map_err(|e| ScenarioError::Invalid(e.to_string()))?;
            writeln!(
                out,
                "{k}\t{}\t{}\t{}\t{}",
                q.i,
                q.j,
                join(&q.s_prime),
                join(&q.s_dprime)
            )
            .unwrap();
        }
    }
    Ok(out)
}

/// Prints to stdout, or writes a sibling temp file and renames it over `path`.
fn emit(path: Option<&Path>, text: &str) -> Result<(), ScenarioError> {
    let io_err = |p: &Path, e: io::Error| ScenarioError::Io {
        path: p.display().to_string(),
        reason: e.to_string(),
    };
    let Some(path) = path else {
        io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| io_err(Path::new("<stdout>"), e))?;
        return Ok(());
    };
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let tmp = path.with_file_name(format!(".{name}.{}.tmp", std::process::id()));
    fs::write(&tmp, text).map_err(|e| io_err(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        io_err(path, e)
    })
}
