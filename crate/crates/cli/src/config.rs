//! Command-line flags, the JSON config file, and their merge into a
//! validated [`RunConfig`]. Flags override file values.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use nuradial_core::potential::{preset, InversePolyPotential};
use nuradial_core::{BranchPolicy, BranchSign, R0Policy};

use crate::error::CliError;

pub const N_MAX_LIMIT: usize = 50;
pub const GRID_LIMIT: usize = 100_000;
pub const DEFAULT_N_MAX: usize = 2;
pub const DEFAULT_ORACLE_TOL: f64 = 1e-6;
pub const DEFAULT_GRID_POINTS: usize = 400;

#[derive(Debug, Parser)]
#[command(
    name = "nuradial",
    version,
    about = "Closed-form bound states of inverse-polynomial radial potentials, with a finite-difference cross-check"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Zeros and extrema of V(r).
    Analyze(CommonArgs),
    /// Closed-form eigenvalues for n = 0..=n-max.
    Spectrum(CommonArgs),
    /// Normalized U(r) of one state sampled on a grid.
    Wavefunction(WaveArgs),
    /// Closed form against the finite-difference oracle.
    Validate(ValidateArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Analyze(_) => "analyze",
            Command::Spectrum(_) => "spectrum",
            Command::Wavefunction(_) => "wavefunction",
            Command::Validate(_) => "validate",
        }
    }

    pub fn common(&self) -> &CommonArgs {
        match self {
            Command::Analyze(c) | Command::Spectrum(c) => c,
            Command::Wavefunction(w) => &w.common,
            Command::Validate(v) => &v.common,
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Named potential: magnetic, neutrino or coulomb.
    #[arg(long)]
    pub preset: Option<String>,
    /// Raw coefficients A0,A-1,A-2,...
    #[arg(long, allow_hyphen_values = true)]
    pub coeffs: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long = "A", allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long = "B", allow_hyphen_values = true)]
    pub b: Option<f64>,
    #[arg(long = "C", allow_hyphen_values = true)]
    pub c: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<i32>,
    #[arg(long, allow_hyphen_values = true)]
    pub eps: Option<i32>,
    #[arg(long)]
    pub ell: Option<u32>,
    /// Expansion point: a positive number or `auto`.
    #[arg(long, allow_hyphen_values = true)]
    pub r0: Option<String>,
    #[arg(long)]
    pub n_max: Option<usize>,
    /// plus, minus or both.
    #[arg(long)]
    pub branch: Option<String>,
    /// csv or json.
    #[arg(long)]
    pub format: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    pub oracle_tol: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct WaveArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Quantum number of the state.
    #[arg(long)]
    pub n: Option<usize>,
    /// `lin`, `log`, or `lin|log:<lo>:<hi>:<count>`.
    #[arg(long)]
    pub grid: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Adds this amount to every closed-form λ² before the comparison.
    #[arg(long, hide = true, allow_hyphen_values = true)]
    pub corrupt_lambda2: Option<f64>,
}

// ---------------------------------------------------------------------------
// Config file

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default)]
    pub potential: PotentialSection,
    #[serde(default)]
    pub expansion: ExpansionSection,
    #[serde(default)]
    pub spectrum: SpectrumSection,
    #[serde(default)]
    pub oracle: OracleSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialSection {
    pub preset: Option<String>,
    pub coefficients: Option<Vec<f64>>,
    pub alpha: Option<f64>,
    #[serde(rename = "A")]
    pub a: Option<f64>,
    #[serde(rename = "B")]
    pub b: Option<f64>,
    #[serde(rename = "C")]
    pub c: Option<f64>,
    pub k: Option<i32>,
    pub eps: Option<i32>,
    pub ell: Option<u32>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpansionSection {
    pub r0: Option<R0Value>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum R0Value {
    Number(f64),
    Text(String),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumSection {
    pub n_max: Option<usize>,
    pub branch: Option<String>,
    pub n: Option<usize>,
    pub grid: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSection {
    pub tol: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub format: Option<String>,
    pub path: Option<PathBuf>,
}

pub fn read_config_file(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("config: cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("config: {}: {e}", path.display())))
}

// ---------------------------------------------------------------------------
// Validated configuration

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

/// Sampling grid for the wavefunction; `None` bounds are chosen from the
/// state's support.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub spacing: Spacing,
    pub range: Option<(f64, f64)>,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub potential: InversePolyPotential,
    /// Human-readable origin of the potential, e.g. `preset coulomb`.
    pub source: String,
    pub r0: R0Policy,
    pub n_max: usize,
    pub branch: BranchPolicy,
    pub n: usize,
    pub grid: GridSpec,
    pub oracle_tol: f64,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub corrupt_lambda2: Option<f64>,
}

impl RunConfig {
    /// The single branch a wavefunction refers to.
    pub fn single_branch(&self) -> Result<BranchSign, CliError> {
        match self.branch {
            BranchPolicy::Plus => Ok(BranchSign::Plus),
            BranchPolicy::Minus => Ok(BranchSign::Minus),
            BranchPolicy::Both => Err(CliError::Config(
                "branch: wavefunction needs a single branch (plus or minus)".into(),
            )),
        }
    }
}

/// Merges flags over the optional config file and validates the result.
pub fn parse_config(command: &Command) -> Result<RunConfig, CliError> {
    let args = command.common();
    let file = match &args.config {
        Some(path) => read_config_file(path)?,
        None => FileConfig::default(),
    };
    let (wave_n, wave_grid) = match command {
        Command::Wavefunction(w) => (w.n, w.grid.clone()),
        _ => (None, None),
    };
    let corrupt = match command {
        Command::Validate(v) => v.corrupt_lambda2,
        _ => None,
    };

    let flag_potential = PotentialSection {
        preset: args.preset.clone(),
        coefficients: match &args.coeffs {
            Some(s) => Some(parse_coeff_list(s)?),
            None => None,
        },
        alpha: args.alpha,
        a: args.a,
        b: args.b,
        c: args.c,
        k: args.k,
        eps: args.eps,
        ell: args.ell,
    };
    let (potential, source) = build_potential(merge_potential(&flag_potential, &file.potential)?)?;

    let r0 = match (&args.r0, &file.expansion.r0) {
        (Some(flag), _) => parse_r0(flag)?,
        (None, Some(R0Value::Text(s))) => parse_r0(s)?,
        (None, Some(R0Value::Number(x))) => explicit_r0(*x)?,
        // The expansion point only matters when there are h ≥ 3 terms.
        (None, None) if potential.h_max() >= 3 => R0Policy::Auto,
        (None, None) => R0Policy::Explicit(1.0),
    };

    let n_max = args.n_max.or(file.spectrum.n_max).unwrap_or(DEFAULT_N_MAX);
    if n_max > N_MAX_LIMIT {
        return Err(CliError::Config(format!(
            "n_max: {n_max} exceeds the limit {N_MAX_LIMIT}"
        )));
    }
    let branch = match args.branch.as_deref().or(file.spectrum.branch.as_deref()) {
        None | Some("plus") => BranchPolicy::Plus,
        Some("minus") => BranchPolicy::Minus,
        Some("both") => BranchPolicy::Both,
        Some(other) => {
            return Err(CliError::Config(format!(
                "branch: expected plus, minus or both, got `{other}`"
            )))
        }
    };
    let n = wave_n.or(file.spectrum.n).unwrap_or(0);
    if n > N_MAX_LIMIT {
        return Err(CliError::Config(format!("n: {n} exceeds the limit {N_MAX_LIMIT}")));
    }
    let grid = parse_grid(wave_grid.as_deref().or(file.spectrum.grid.as_deref()).unwrap_or("lin"))?;

    let oracle_tol = args.oracle_tol.or(file.oracle.tol).unwrap_or(DEFAULT_ORACLE_TOL);
    if !(oracle_tol.is_finite() && oracle_tol > 0.0) {
        return Err(CliError::Config(format!(
            "oracle.tol: must be positive and finite, got {oracle_tol}"
        )));
    }
    let format = match args.format.as_deref().or(file.output.format.as_deref()) {
        None | Some("csv") => Format::Csv,
        Some("json") => Format::Json,
        Some(other) => return Err(CliError::Config(format!("format: expected csv or json, got `{other}`"))),
    };
    if let Some(x) = corrupt {
        if !x.is_finite() {
            return Err(CliError::Config("corrupt-lambda2: must be finite".into()));
        }
    }

    Ok(RunConfig {
        potential,
        source,
        r0,
        n_max,
        branch,
        n,
        grid,
        oracle_tol,
        format,
        out: args.out.clone().or(file.output.path),
        corrupt_lambda2: corrupt,
    })
}

fn merge_potential(flags: &PotentialSection, file: &PotentialSection) -> Result<PotentialSection, CliError> {
    for (layer, p) in [("flags", flags), ("config potential", file)] {
        if p.preset.is_some() && p.coefficients.is_some() {
            return Err(CliError::Config(format!(
                "potential.coefficients: conflicts with potential.preset in {layer}; give exactly one"
            )));
        }
    }
    // A potential source on the command line replaces the file's section.
    if flags.preset.is_some() || flags.coefficients.is_some() {
        return Ok(flags.clone());
    }
    Ok(PotentialSection {
        preset: file.preset.clone(),
        coefficients: file.coefficients.clone(),
        alpha: flags.alpha.or(file.alpha),
        a: flags.a.or(file.a),
        b: flags.b.or(file.b),
        c: flags.c.or(file.c),
        k: flags.k.or(file.k),
        eps: flags.eps.or(file.eps),
        ell: flags.ell.or(file.ell),
    })
}

fn build_potential(p: PotentialSection) -> Result<(InversePolyPotential, String), CliError> {
    let given: Vec<&str> = [
        ("alpha", p.alpha.is_some()),
        ("A", p.a.is_some()),
        ("B", p.b.is_some()),
        ("C", p.c.is_some()),
        ("k", p.k.is_some()),
        ("eps", p.eps.is_some()),
        ("ell", p.ell.is_some()),
    ]
    .iter()
    .filter(|(_, set)| *set)
    .map(|(name, _)| *name)
    .collect();
    for (name, v) in [("alpha", p.alpha), ("A", p.a), ("B", p.b), ("C", p.c)] {
        if let Some(x) = v {
            if !x.is_finite() {
                return Err(CliError::Config(format!("potential.{name}: must be finite")));
            }
        }
    }

    match (p.preset, p.coefficients) {
        (Some(_), Some(_)) => unreachable!("rejected while merging"),
        (None, None) => Err(CliError::Config(
            "potential: no source; give --preset or --coeffs (or potential.preset / potential.coefficients)".into(),
        )),
        (None, Some(coeffs)) => {
            if let Some(name) = given.first() {
                return Err(CliError::Config(format!(
                    "potential.{name}: preset parameters cannot be combined with potential.coefficients"
                )));
            }
            if coeffs.len() < 2 {
                return Err(CliError::Config(
                    "potential.coefficients: need at least A0 and A-1".into(),
                ));
            }
            if let Some(i) = coeffs.iter().position(|c| !c.is_finite()) {
                return Err(CliError::Config(format!(
                    "potential.coefficients: entry {i} is not finite"
                )));
            }
            let pot = InversePolyPotential::from_flat(&coeffs)
                .map_err(|e| CliError::Config(format!("potential.coefficients: {e}")))?;
            Ok((pot, "coefficients".into()))
        }
        (Some(name), None) => {
            let allowed: &[&str] = match name.as_str() {
                "magnetic" => &["alpha", "A", "B", "C"],
                "neutrino" => &["k", "eps"],
                "coulomb" => &["alpha", "ell"],
                other => {
                    return Err(CliError::Config(format!(
                        "potential.preset: unknown preset `{other}` (expected magnetic, neutrino or coulomb)"
                    )))
                }
            };
            if let Some(bad) = given.iter().find(|g| !allowed.contains(g)) {
                return Err(CliError::Config(format!(
                    "potential.{bad}: not a parameter of preset {name}"
                )));
            }
            let pot = preset(&name, p.alpha, [p.a, p.b, p.c], p.k, p.eps, p.ell)
                .map_err(|e| CliError::Config(format!("potential.preset: {e}")))?;
            Ok((pot, format!("preset {name}")))
        }
    }
}

fn parse_coeff_list(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Config(format!("coeffs: `{}` is not a number", t.trim())))
        })
        .collect()
}

fn parse_r0(s: &str) -> Result<R0Policy, CliError> {
    if s == "auto" {
        return Ok(R0Policy::Auto);
    }
    let x: f64 = s
        .parse()
        .map_err(|_| CliError::Config(format!("r0: expected a positive number or `auto`, got `{s}`")))?;
    explicit_r0(x)
}

fn explicit_r0(x: f64) -> Result<R0Policy, CliError> {
    if x.is_finite() && x > 0.0 {
        Ok(R0Policy::Explicit(x))
    } else {
        Err(CliError::Config(format!("r0: must be positive and finite, got {x}")))
    }
}

pub fn parse_grid(s: &str) -> Result<GridSpec, CliError> {
    let bad = |why: &str| CliError::Config(format!("grid: {why} (got `{s}`)"));
    let parts: Vec<&str> = s.split(':').collect();
    let spacing = match parts[0] {
        "lin" => Spacing::Linear,
        "log" => Spacing::Log,
        _ => return Err(bad("expected lin or log")),
    };
    match parts.len() {
        1 => Ok(GridSpec {
            spacing,
            range: None,
            count: DEFAULT_GRID_POINTS,
        }),
        4 => {
            let num = |t: &str| t.parse::<f64>().map_err(|_| bad("bounds must be numbers"));
            let (lo, hi) = (num(parts[1])?, num(parts[2])?);
            let count: usize = parts[3].parse().map_err(|_| bad("count must be a positive integer"))?;
            if !(lo.is_finite() && hi.is_finite() && lo >= 0.0 && lo < hi) {
                return Err(bad("need 0 <= lo < hi"));
            }
            if spacing == Spacing::Log && lo <= 0.0 {
                return Err(bad("log spacing needs lo > 0"));
            }
            if !(2..=GRID_LIMIT).contains(&count) {
                return Err(bad(&format!("count must be between 2 and {GRID_LIMIT}")));
            }
            Ok(GridSpec {
                spacing,
                range: Some((lo, hi)),
                count,
            })
        }
        _ => Err(bad("expected lin|log or lin|log:<lo>:<hi>:<count>")),
    }
}

/// Sample points of a grid over `[lo, hi]`.
pub fn grid_points(spacing: Spacing, lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let last = (count - 1) as f64;
    (0..count)
        .map(|i| {
            let t = i as f64 / last;
            if i == 0 {
                return lo;
            }
            if i + 1 == count {
                return hi;
            }
            match spacing {
                Spacing::Linear => lo + (hi - lo) * t,
                Spacing::Log => (lo.ln() + (hi.ln() - lo.ln()) * t).exp(),
            }
        })
        .collect()
}
