//! `msl`: build and verify matroid arrangements from the command line.
//!
//! Exit codes: 0 pass, 1 verification failure, 2 input error, 3 internal
//! invariant violation.

mod config;

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use msl_core::arrangement::{
    build_arrangement, predict_union_betti, standard_generator, union_betti, verify_conditions, wedge_hypotheses,
    Arrangement, ArrangementJson,
};
use msl_core::morse::{critical_census, joinup_matching, verify_collapse};
use msl_core::{betti, GeometricLattice, SimplicialComplex};
use serde::Serialize;
use serde_json::{json, Value};

use config::{parse_ell, parse_fields, parse_json, parse_matroid, parse_space, read, standard_kind, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] msl_core::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(msl_core::Error::Invariant(_)) => 3,
            _ => 2,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Input(_) | CliError::Core(msl_core::Error::Input(_)) => "input",
            CliError::Core(msl_core::Error::Domain(_)) => "domain",
            CliError::Core(msl_core::Error::NotAMatroid(_)) => "not_a_matroid",
            CliError::Core(msl_core::Error::Invariant(_)) => "invariant",
        }
    }
}

#[derive(Parser)]
#[command(name = "msl", version, about = "Build and verify topological representations of matroids")]
struct Cli {
    /// Coefficient field: Q, GF2 or both [default: Q].
    #[arg(long, env = "MSL_FIELD", global = true)]
    field: Option<String>,

    /// Progress notes on stderr.
    #[arg(short, long, global = true)]
    verbose: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the arrangement for a matroid, an ℓ-map and a model space.
    Build {
        #[command(flatten)]
        input: InputArgs,
        /// Where to write the arrangement JSON (stdout if omitted).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Verify an arrangement file, or one built from the given inputs.
    Verify {
        /// Arrangement JSON produced by `build`.
        arrangement: Option<PathBuf>,
        #[command(flatten)]
        input: InputArgs,
        /// Where to write the report (stdout if omitted).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Discrete Morse matchings.
    Morse {
        #[command(subcommand)]
        command: MorseCommand,
    },
    /// Reduced Betti numbers of a space, an arrangement or its union.
    Betti {
        /// Model space spec or complex JSON.
        #[arg(long, conflicts_with = "arrangement")]
        space: Option<String>,
        /// Arrangement JSON produced by `build`.
        #[arg(long)]
        arrangement: Option<PathBuf>,
        /// Use the union of the atom complexes instead of Y.
        #[arg(long, requires = "arrangement")]
        union: bool,
    },
    /// Predicted Betti numbers of the union of the arrangement.
    Predict {
        #[arg(long)]
        matroid: String,
        #[arg(long)]
        space: String,
    },
}

#[derive(Subcommand)]
enum MorseCommand {
    /// The join matching on copies of a space.
    Joinup {
        #[arg(long)]
        space: String,
        #[arg(long, default_value_t = 2)]
        copies: usize,
        /// One basepoint vertex index per copy, comma separated.
        #[arg(long, value_delimiter = ',')]
        basepoints: Option<Vec<u32>>,
    },
    /// Check the wedge hypotheses on the diagram over M minus its bottom.
    Hypotheses {
        #[command(flatten)]
        input: InputArgs,
    },
}

#[derive(Args, Clone, Default)]
struct InputArgs {
    /// builtin:fano, uniform:r,n, boolean:n, gfp:p:[[…]] or a JSON file.
    #[arg(long)]
    matroid: Option<String>,
    /// points:k, cycle:k, sphere:d or a JSON file.
    #[arg(long)]
    space: Option<String>,
    /// default or flag:[[…],…] (flats of a maximal flag).
    #[arg(long)]
    ell: Option<String>,
    /// JSON run configuration; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

struct Resolved {
    matroid: GeometricLattice,
    space: SimplicialComplex,
    ell: msl_core::EllMap,
    output: Option<PathBuf>,
    field: Option<String>,
    verbose: bool,
}

impl InputArgs {
    fn resolve(&self) -> Result<Resolved, CliError> {
        let cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        let matroid_spec = self.matroid.clone().or(cfg.matroid).ok_or_else(|| CliError::Input("--matroid is required".into()))?;
        let space_spec = self.space.clone().or(cfg.space).ok_or_else(|| CliError::Input("--space is required".into()))?;
        let matroid = parse_matroid(&matroid_spec)?;
        let space = parse_space(&space_spec)?;
        let ell = parse_ell(self.ell.as_deref().or(cfg.ell.as_deref()).unwrap_or("default"), &matroid)?;
        Ok(Resolved { matroid, space, ell, output: cfg.output, field: cfg.field, verbose: cfg.verbose.unwrap_or(false) })
    }
}

fn emit(value: &impl Serialize, output: Option<&Path>) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Input(e.to_string()))? + "\n";
    match output {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display()))),
        None => match std::io::stdout().lock().write_all(text.as_bytes()) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Input(format!("cannot write to stdout: {e}"))),
            _ => Ok(()),
        },
    }
}

fn betti_json(b: &msl_core::BettiVector) -> Value {
    serde_json::to_value(b.to_json()).expect("Betti JSON is serializable")
}

fn load_arrangement(path: &Path) -> Result<Arrangement, CliError> {
    let json: ArrangementJson = parse_json(&read(path)?, "arrangement")?;
    Ok(Arrangement::from_json(&json)?)
}

fn note(verbose: bool, msg: impl FnOnce() -> String) {
    if verbose {
        eprintln!("msl: {}", msg());
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let field_spec = cli.field.clone();
    let fields_or = |fallback: Option<String>| parse_fields(field_spec.clone().or(fallback).as_deref().unwrap_or("Q"));
    let fields = fields_or(None)?;
    match cli.command {
        Command::Build { input, output } => {
            let r = input.resolve()?;
            let fields = fields_or(r.field.clone())?;
            let arr = build_arrangement(&r.matroid, &r.ell, &r.space)?;
            note(cli.verbose || r.verbose, || format!("built Y with {} cells", arr.y().len()));
            let output = output.or(r.output);
            emit(&arr.to_json(), output.as_deref())?;
            if let Some(path) = output {
                let summary = json!({
                    "output": path.display().to_string(),
                    "cells": arr.y().len(),
                    "dim": arr.y().dim(),
                    "atoms": arr.subcomplexes().len(),
                    "betti": fields.iter().map(|&f| betti(arr.y(), f).map(|b| betti_json(&b))).collect::<Result<Vec<_>, _>>()?,
                });
                emit(&summary, None)?;
            }
            Ok(0)
        }
        Command::Verify { arrangement, input, output } => {
            let (arr, output) = match arrangement {
                Some(path) => (load_arrangement(&path)?, output),
                None => {
                    let r = input.resolve()?;
                    (build_arrangement(&r.matroid, &r.ell, &r.space)?, output.or(r.output))
                }
            };
            let generator = standard_kind(arr.space()).and_then(standard_generator);
            note(cli.verbose, || format!("verifying {} cells, free action generator {generator:?}", arr.y().len()));
            let report = verify_conditions(&arr, generator.as_deref())?;
            emit(&report, output.as_deref())?;
            Ok(if report.passed { 0 } else { 1 })
        }
        Command::Morse { command: MorseCommand::Joinup { space, copies, basepoints } } => {
            let x = parse_space(&space)?;
            if copies == 0 {
                return Err(CliError::Input("--copies must be at least 1".into()));
            }
            let (join, j) = joinup_matching(&vec![x; copies], basepoints.as_deref())?;
            let b = betti(join.as_cell_complex(), fields[0])?;
            let census = critical_census(join.as_cell_complex(), &j.matching, &b);
            let key = |s: &msl_core::Simplex| join.simplex_label(s);
            let passed = census.euler_matches() && census.morse_inequalities_hold;
            let value = json!({
                "space": space,
                "copies": copies,
                "arrows": j.matching.arrows.iter().map(|(u, d)| [key(u), key(d)]).collect::<Vec<_>>(),
                "critical": j.matching.critical.iter().map(key).collect::<Vec<_>>(),
                "critical_vertex": key(&j.critical_vertex),
                "census": census.counts,
                "euler": {"cells": census.euler_from_cells, "complex": census.euler_of_complex},
                "morse_inequalities_hold": census.morse_inequalities_hold,
                "betti": betti_json(&b),
                "z_cells": j.z.len(),
                "z_collapsible": verify_collapse(&j.z, &j.z_arrows, &j.critical_vertex).passed(),
                "passed": passed,
            });
            emit(&value, None)?;
            Ok(if passed { 0 } else { 1 })
        }
        Command::Morse { command: MorseCommand::Hypotheses { input } } => {
            let r = input.resolve()?;
            let arr = build_arrangement(&r.matroid, &r.ell, &r.space)?;
            let entries = wedge_hypotheses(&arr)?;
            let passed = entries.iter().all(|e| e.passed);
            emit(&json!({ "entries": entries, "passed": passed }), r.output.as_deref())?;
            Ok(if passed { 0 } else { 1 })
        }
        Command::Betti { space, arrangement, union } => {
            let mut out = BTreeMap::new();
            for f in &fields {
                let b = match (&space, &arrangement) {
                    (Some(s), None) => betti(parse_space(s)?.as_cell_complex(), *f)?,
                    (None, Some(path)) => {
                        let arr = load_arrangement(path)?;
                        if union {
                            union_betti(&arr, *f)?
                        } else {
                            betti(arr.y(), *f)?
                        }
                    }
                    _ => return Err(CliError::Input("give exactly one of --space or --arrangement".into())),
                };
                out.insert(f.to_string(), betti_json(&b));
            }
            emit(&out, None)?;
            Ok(0)
        }
        Command::Predict { matroid, space } => {
            let m = parse_matroid(&matroid)?;
            let x = parse_space(&space)?;
            let out: BTreeMap<String, Value> = fields
                .iter()
                .map(|&f| predict_union_betti(&m, &x, f).map(|b| (f.to_string(), betti_json(&b))))
                .collect::<Result<_, _>>()?;
            emit(&out, None)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("{}", json!({ "error": e.kind(), "message": e.to_string() }));
            ExitCode::from(e.exit_code())
        }
    }
}
