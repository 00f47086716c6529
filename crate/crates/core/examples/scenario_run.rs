//! Runs a shipped scenario file (default `scenarios/k2.json`) and prints its verdict.

use std::path::PathBuf;

use tunnelmeet::scenario::{run_scenario_file, Overrides};

fn main() {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios/k2.json"));
    match run_scenario_file(&path, &Overrides::default()) {
        Ok(v) => {
            print!("{}", v.to_json(true));
            std::process::exit(v.exit_code());
        }
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(e.exit_code());
        }
    }
}
