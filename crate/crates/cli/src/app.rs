//! Argument parsing and command dispatch.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use granule_core::factorize::{controller_canonical, Decomposer};
use granule_core::fragments::hasse_dot;
use granule_core::granules::GranuleTable;
use granule_core::trellis::is_reduced;
use granule_core::{compute_behavior, reduce, BehaviorBundle, Realization};
use serde_json::json;

use crate::document::{parse_trajectory, RealizationDocument};
use crate::dot::{canonical_dot, trellis_dot};
use crate::report::AnalysisReport;
use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "granule",
    version,
    about = "Controller-granule analysis of tail-biting trellis realizations"
)]
pub struct Cli {
    /// Trim unused states and branches before analysis.
    #[arg(long, global = true)]
    pub reduce: bool,
    /// Write the DOT diagram to this file instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub dot_out: Option<PathBuf>,
    /// Emit JSON where the command would otherwise print text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full analysis report as JSON.
    Analyze { path: PathBuf },
    /// Hasse diagram of the fragment poset for length `n`.
    Hasse { n: usize },
    /// Trellis diagram of a realization.
    Trellis { path: PathBuf },
    /// Controller canonical realization: atomic trellises and their product.
    Canonical { path: PathBuf },
    /// Split a trajectory into granule representatives. The trajectory is a
    /// comma-separated residue list: all symbols, then all states.
    Decompose { path: PathBuf, trajectory: String },
    /// Check every theorem on one realization; exit 1 if any fails.
    Check { path: PathBuf },
}

/// What a successful command prints, and its exit code.
#[derive(Debug, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub code: i32,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Self { stdout, code: 0 }
    }
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Analyze { path } => {
            let loaded = load(path, cli.reduce)?;
            let report = AnalysisReport::build(&loaded.realization, &loaded.bundle, loaded.reduced_on_load)?;
            emit_dot(cli, false, || trellis_dot(&loaded.realization))?;
            Ok(Output::ok(to_json(&report)))
        }
        Command::Hasse { n } => {
            if *n == 0 {
                return Err(CliError::Malformed("length must be at least 1".into()));
            }
            Ok(Output::ok(emit_dot(cli, true, || hasse_dot(*n))?))
        }
        Command::Trellis { path } => {
            let loaded = load(path, cli.reduce)?;
            Ok(Output::ok(emit_dot(cli, true, || trellis_dot(&loaded.realization))?))
        }
        Command::Canonical { path } => canonical(cli, path),
        Command::Decompose { path, trajectory } => decompose(cli, path, trajectory),
        Command::Check { path } => check(cli, path),
    }
}

struct Loaded {
    realization: Realization,
    bundle: BehaviorBundle,
    reduced_on_load: bool,
}

fn load(path: &Path, apply_reduce: bool) -> Result<Loaded, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Malformed(format!("{}: {e}", path.display())))?;
    let r = RealizationDocument::parse(&text)?.to_realization()?;
    let r = if apply_reduce { reduce(&r) } else { r };
    let bundle = compute_behavior(&r);
    if !is_reduced(&r, &bundle) {
        return Err(CliError::NotReduced);
    }
    Ok(Loaded {
        realization: r,
        bundle,
        reduced_on_load: apply_reduce,
    })
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

/// Writes the diagram to `--dot-out` if given. Otherwise, when `inline` is
/// set, returns it for stdout (wrapped in JSON under `--json`).
fn emit_dot(cli: &Cli, inline: bool, render: impl FnOnce() -> String) -> Result<String, CliError> {
    match &cli.dot_out {
        Some(file) => {
            write_file(file, &render())?;
            Ok(String::new())
        }
        None if !inline => Ok(String::new()),
        None if cli.json => Ok(to_json(&json!({ "dot": render() }))),
        None => Ok(render()),
    }
}

fn canonical(cli: &Cli, path: &Path) -> Result<Output, CliError> {
    let loaded = load(path, cli.reduce)?;
    let table = GranuleTable::build(&loaded.bundle);
    let ct = controller_canonical(&loaded.realization, &loaded.bundle, &table).map_err(CliError::from_core)?;
    let n = ct.n();
    let dot = canonical_dot(&ct);
    if cli.json {
        let atoms: Vec<_> = ct
            .atoms
            .iter()
            .map(|a| {
                json!({
                    "fragment": a.fragment.to_string(),
                    "order": a.order(),
                    "state_counts": (0..n).map(|j| a.state_count(j)).collect::<Vec<_>>(),
                })
            })
            .collect();
        let mut value = json!({
            "atoms": atoms,
            "state_counts": ct.state_counts(),
            "branch_counts": ct.branch_counts(),
            "is_homomorphic": granule_core::factorize::is_homomorphic(&ct),
        });
        match &cli.dot_out {
            Some(file) => write_file(file, &dot)?,
            None => value["dot"] = json!(dot),
        }
        return Ok(Output::ok(to_json(&value)));
    }
    let mut listing = String::new();
    for a in &ct.atoms {
        let counts: Vec<_> = (0..n).map(|j| a.state_count(j)).collect();
        listing.push_str(&format!(
            "atom {} order {} states {:?}\n",
            a.fragment,
            a.order(),
            counts
        ));
    }
    listing.push_str(&format!(
        "aggregate states {:?} branches {:?}\n",
        ct.state_counts(),
        ct.branch_counts()
    ));
    match &cli.dot_out {
        Some(file) => {
            write_file(file, &dot)?;
            Ok(Output::ok(listing))
        }
        None => {
            let comments: String = listing.lines().map(|l| format!("// {l}\n")).collect();
            Ok(Output::ok(comments + &dot))
        }
    }
}

fn write_file(file: &Path, text: &str) -> Result<(), CliError> {
    fs::write(file, text).map_err(|e| CliError::Internal(format!("{}: {e}", file.display())))
}

fn decompose(cli: &Cli, path: &Path, trajectory: &str) -> Result<Output, CliError> {
    let loaded = load(path, cli.reduce)?;
    let t = parse_trajectory(trajectory)?;
    let table = GranuleTable::build(&loaded.bundle);
    let decomposer = Decomposer::new(&table).map_err(CliError::from_core)?;
    let d = decomposer.decompose(&t).map_err(|e| match e {
        granule_core::Error::MalformedElement(m) => CliError::Trajectory(m),
        granule_core::Error::NotATrajectory => CliError::Trajectory("not in the behavior".into()),
        other => CliError::from_core(other),
    })?;
    let parts: Vec<_> = d
        .parts
        .iter()
        .map(|(f, x)| {
            json!({
                "fragment": f.to_string(),
                "node": f.node_name(),
                "level": f.level(),
                "representative": x.residues(),
            })
        })
        .collect();
    let value = json!({
        "trajectory": t.residues(),
        "parts": parts,
        "nonzero_parts": d.nonzero().count(),
        "reconstruction_ok": d.sum(&loaded.bundle.layout) == t,
    });
    Ok(Output::ok(to_json(&value)))
}

fn check(cli: &Cli, path: &Path) -> Result<Output, CliError> {
    let loaded = load(path, cli.reduce)?;
    let report = AnalysisReport::build(&loaded.realization, &loaded.bundle, loaded.reduced_on_load)?;
    let checks = report.checks();
    let failed = checks.iter().filter(|(_, ok)| !ok).count();
    let stdout = if cli.json {
        let list: Vec<_> = checks
            .iter()
            .map(|(name, ok)| json!({ "name": name, "passed": ok }))
            .collect();
        to_json(&json!({ "checks": list, "passed": failed == 0 }))
    } else {
        let mut s: String = checks
            .iter()
            .map(|(name, ok)| format!("{} {}\n", if *ok { "PASS" } else { "FAIL" }, name))
            .collect();
        s.push_str(&format!(
            "{} of {} checks passed\n",
            checks.len() - failed,
            checks.len()
        ));
        s
    };
    Ok(Output {
        stdout,
        code: if failed == 0 { 0 } else { 1 },
    })
}
