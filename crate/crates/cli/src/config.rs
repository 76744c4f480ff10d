//! Parsing of matroid, space and ℓ specifications and of run configs.

use std::fs;
use std::path::{Path, PathBuf};

use msl_core::matroid::MatroidJson;
use msl_core::simplicial::ComplexJson;
use msl_core::{ell_default, ell_flag, EllMap, Field, GeometricLattice, SimplicialComplex, StandardSpace};
use serde::Deserialize;

use crate::CliError;

/// A run configuration file; every key is optional and command-line flags
/// take precedence.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub matroid: Option<String>,
    pub space: Option<String>,
    pub ell: Option<String>,
    pub field: Option<String>,
    pub output: Option<PathBuf>,
    pub verbose: Option<bool>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = read(path)?;
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
    }
}

pub fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

pub fn parse_json<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Input(format!("bad {what} JSON: {e}")))
}

/// `builtin:fano`, `uniform:r,n`, `boolean:n`, `gfp:p:[[…],…]` or a path to
/// a matroid JSON file.
pub fn parse_matroid(spec: &str) -> Result<GeometricLattice, CliError> {
    let spec = spec.trim();
    let (kind, arg) = spec.split_once(':').unwrap_or((spec, ""));
    let number = |s: &str| s.trim().parse::<usize>().map_err(|_| CliError::Input(format!("bad number {s:?} in {spec:?}")));
    let m = match kind {
        "builtin" | "fano" if arg == "fano" || kind == "fano" => GeometricLattice::fano(),
        "uniform" => {
            let (r, n) = arg.split_once(',').ok_or_else(|| CliError::Input(format!("expected uniform:r,n, got {spec:?}")))?;
            GeometricLattice::uniform(number(r)?, number(n)?)?
        }
        "boolean" => GeometricLattice::boolean(number(arg)?)?,
        "gfp" => {
            let (p, cols) = arg.split_once(':').ok_or_else(|| CliError::Input(format!("expected gfp:p:[[…]], got {spec:?}")))?;
            let cols: Vec<Vec<u64>> = parse_json(cols, "column")?;
            GeometricLattice::from_matrix_gfp(&cols, number(p)? as u64)?
        }
        "builtin" => return Err(CliError::Input(format!("unknown builtin matroid {arg:?}"))),
        _ => {
            let json: MatroidJson = parse_json(&read(Path::new(spec))?, "matroid")?;
            GeometricLattice::from_json(&json)?
        }
    };
    Ok(m)
}

/// `points:k`, `cycle:k`, `sphere:d` or a path to a complex JSON file.
pub fn parse_space(spec: &str) -> Result<SimplicialComplex, CliError> {
    match spec.parse::<StandardSpace>() {
        Ok(s) => Ok(SimplicialComplex::standard(s)?),
        Err(_) if Path::new(spec).exists() => {
            let json: ComplexJson = parse_json(&read(Path::new(spec))?, "complex")?;
            Ok(SimplicialComplex::from_json(&json)?)
        }
        Err(e) => Err(e.into()),
    }
}

/// The standard space equal to `x`, labels included.
pub fn standard_kind(x: &SimplicialComplex) -> Option<StandardSpace> {
    let n = x.num_vertices();
    let mut candidates = vec![StandardSpace::Points(n)];
    if n >= 3 {
        candidates.push(StandardSpace::Cycle(n));
    }
    if n >= 2 {
        candidates.push(StandardSpace::Sphere(n - 2));
    }
    candidates.into_iter().find(|&c| SimplicialComplex::standard(c).is_ok_and(|s| s == *x))
}

/// `default` or `flag:[[…],[…],…]` listing the flats of a maximal flag by
/// ground elements; `a..b` inside a list stands for a, a+1, …, b.
pub fn parse_ell(spec: &str, m: &GeometricLattice) -> Result<EllMap, CliError> {
    let spec = spec.trim();
    if spec == "default" {
        return Ok(ell_default(m));
    }
    let body = spec
        .strip_prefix("flag:")
        .ok_or_else(|| CliError::Input(format!("expected `default` or `flag:[…]`, got {spec:?}")))?;
    let lists = parse_nested(body)?;
    let flag = lists
        .iter()
        .map(|set| {
            let flat = set.iter().copied().collect();
            m.index_of(&flat).ok_or_else(|| CliError::Input(format!("{set:?} is not a flat of the matroid")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ell_flag(m, &flag)?)
}

fn parse_nested(body: &str) -> Result<Vec<Vec<u32>>, CliError> {
    let bad = || CliError::Input(format!("bad flag list {body:?}"));
    let inner = body.trim().strip_prefix('[').and_then(|s| s.strip_suffix(']')).ok_or_else(bad)?;
    let mut out = Vec::new();
    let mut rest = inner.trim();
    while !rest.is_empty() {
        let open = rest.strip_prefix('[').ok_or_else(bad)?;
        let close = open.find(']').ok_or_else(bad)?;
        let mut items = Vec::new();
        for tok in open[..close].split(',').map(str::trim).filter(|t| !t.is_empty()) {
            match tok.split_once("..") {
                Some((a, b)) => {
                    let (a, b): (u32, u32) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
                    items.extend(a..=b);
                }
                None => items.push(tok.parse().map_err(|_| bad())?),
            }
        }
        out.push(items);
        rest = open[close + 1..].trim_start();
        rest = rest.strip_prefix(',').unwrap_or(rest).trim_start();
    }
    Ok(out)
}

/// `Q`, `GF2` or `both`.
pub fn parse_fields(spec: &str) -> Result<Vec<Field>, CliError> {
    if spec.eq_ignore_ascii_case("both") {
        Ok(Field::ALL.to_vec())
    } else {
        Ok(vec![spec.parse()?])
    }
}
