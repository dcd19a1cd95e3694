//! The four subcommands. Each turns a [`RunConfig`] into a [`Table`] plus
//! an exit code.

use nuradial_core::oracle::{validate, OracleSettings};
use nuradial_core::potential::{landscape, LandscapeReport};
use nuradial_core::spectrum::{eigenfunction, resolve_r0, state};
use nuradial_core::{solve_spectrum, EigenState, R0Policy};

use crate::config::{grid_points, Command, RunConfig, Spacing};
use crate::error::{CliError, EXIT_OK, EXIT_VALIDATION};
use crate::table::{Cell, Table};

/// Rendered result of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub table: Table,
    pub exit_code: i32,
}

impl Outcome {
    fn ok(table: Table) -> Self {
        Self {
            table,
            exit_code: EXIT_OK,
        }
    }
}

pub fn run(command: &Command, cfg: &RunConfig) -> Result<Outcome, CliError> {
    match command {
        Command::Analyze(_) => Ok(Outcome::ok(analyze(cfg))),
        Command::Spectrum(_) => spectrum(cfg).map(Outcome::ok),
        Command::Wavefunction(_) => wavefunction(cfg).map(Outcome::ok),
        Command::Validate(_) => validate_cmd(cfg),
    }
}

fn potential_meta(table: &mut Table, cfg: &RunConfig) {
    table.meta.push(("source", Cell::text(cfg.source.clone())));
    let coeffs: Vec<String> = cfg
        .potential
        .flat()
        .iter()
        .map(|c| crate::table::format_f64(*c))
        .collect();
    table.meta.push(("coefficients", Cell::text(coeffs.join(","))));
}

pub fn analyze(cfg: &RunConfig) -> Table {
    let report = landscape(&cfg.potential);
    let mut table = Table::new("analyze", &["r", "V", "kind"]);
    for (r, v, kind) in landscape_rows(&report, cfg) {
        table.push(vec![Cell::Num(r), Cell::Num(v), Cell::text(kind)]);
    }
    potential_meta(&mut table, cfg);
    table.meta.push(("method", Cell::text(report.method.as_str())));
    table
}

/// Zeros and extrema merged by radius; a zero precedes an extremum at the
/// same point.
fn landscape_rows(report: &LandscapeReport, cfg: &RunConfig) -> Vec<(f64, f64, &'static str)> {
    let mut rows: Vec<(f64, f64, &'static str)> = report
        .zeros
        .iter()
        .map(|&r| (r, cfg.potential.evaluate(r).unwrap_or(f64::NAN), "zero"))
        .chain(report.extrema.iter().map(|e| (e.r, e.value, e.kind.as_str())))
        .collect();
    rows.sort_by(|a, b| a.0.total_cmp(&b.0).then((a.2 != "zero").cmp(&(b.2 != "zero"))));
    rows
}

fn states(cfg: &RunConfig) -> Result<(f64, Vec<EigenState>), CliError> {
    let r0 = resolve_r0(&cfg.potential, cfg.r0)?;
    let states = solve_spectrum(&cfg.potential, R0Policy::Explicit(r0), cfg.n_max, cfg.branch)?;
    Ok((r0, states))
}

fn expansion_meta(table: &mut Table, cfg: &RunConfig, r0: f64) {
    let how = match cfg.r0 {
        R0Policy::Auto => "auto",
        R0Policy::Explicit(_) => "explicit",
    };
    table.meta.push(("r0", Cell::Num(r0)));
    table.meta.push(("r0_policy", Cell::text(how)));
    table.meta.push((
        "laguerre_argument",
        Cell::text("2*sqrt(z)*r (Rodrigues-consistent scaling, not the bare r)"),
    ));
}

pub fn spectrum(cfg: &RunConfig) -> Result<Table, CliError> {
    let (r0, states) = states(cfg)?;
    let mut table = Table::new(
        "spectrum",
        &["n", "branch", "lambda2", "q", "w", "z", "r0", "normalizable"],
    );
    for s in &states {
        table.push(vec![
            Cell::Int(s.n as i64),
            Cell::text(s.branch.symbol().to_string()),
            Cell::Num(s.lambda2),
            Cell::Num(s.q),
            Cell::Num(s.w),
            Cell::Num(s.z),
            Cell::Num(s.r0),
            Cell::Bool(s.normalizable()),
        ]);
    }
    potential_meta(&mut table, cfg);
    expansion_meta(&mut table, cfg, r0);
    if !states.iter().any(EigenState::normalizable) {
        return Err(CliError::NoPhysicalResult(format!(
            "spectrum: no normalizable state for n <= {} on the requested branch(es)",
            cfg.n_max
        )));
    }
    Ok(table)
}

pub fn wavefunction(cfg: &RunConfig) -> Result<Table, CliError> {
    let sign = cfg.single_branch()?;
    let r0 = resolve_r0(&cfg.potential, cfg.r0)?;
    let s = state(&cfg.potential, r0, cfg.n, sign)?;
    let u = eigenfunction(&s)?;
    let (lo, hi) = match (cfg.grid.range, cfg.grid.spacing) {
        (Some(range), _) => range,
        (None, Spacing::Linear) => (0.0, s.cutoff.unwrap_or_else(|| u.support(1e-12).1)),
        (None, Spacing::Log) => u.support(1e-12),
    };
    let mut table = Table::new("wavefunction", &["r", "U"]);
    for r in grid_points(cfg.grid.spacing, lo, hi, cfg.grid.count) {
        table.push(vec![Cell::Num(r), Cell::Num(u.eval(r))]);
    }
    potential_meta(&mut table, cfg);
    expansion_meta(&mut table, cfg, r0);
    table.meta.push(("n", Cell::Int(s.n as i64)));
    table.meta.push(("branch", Cell::text(s.branch.symbol().to_string())));
    table.meta.push(("lambda2", Cell::Num(s.lambda2)));
    table.meta.push(("norm_constant", Cell::Num(u.norm_constant())));
    if let Some(c) = s.cutoff {
        table.meta.push(("norm_cutoff", Cell::Num(c)));
    }
    Ok(table)
}

pub fn validate_cmd(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let (r0, mut states) = states(cfg)?;
    if !states.iter().any(EigenState::normalizable) {
        return Err(CliError::NoPhysicalResult(format!(
            "validate: no normalizable state for n <= {} to compare",
            cfg.n_max
        )));
    }
    if let Some(delta) = cfg.corrupt_lambda2 {
        for s in &mut states {
            s.lambda2 += delta;
        }
    }
    let settings = OracleSettings::with_tol(cfg.oracle_tol);
    let report = validate(&cfg.potential, &states, &settings)?;
    let mut table = Table::new(
        "validate",
        &[
            "n",
            "branch",
            "lambda2_nu",
            "lambda2_eff_oracle",
            "eff_agreement",
            "lambda2_true_oracle",
            "gap",
            "converged",
        ],
    );
    for row in &report.rows {
        table.push(vec![
            Cell::Int(row.n as i64),
            Cell::text(row.branch.symbol().to_string()),
            Cell::Num(row.lambda2_nu),
            Cell::Num(row.lambda2_eff_oracle),
            Cell::text(row.eff_agreement.as_str()),
            Cell::Num(row.lambda2_true_oracle),
            Cell::Num(row.gap),
            Cell::Bool(row.converged),
        ]);
    }
    potential_meta(&mut table, cfg);
    expansion_meta(&mut table, cfg, r0);
    table.meta.push(("eff_tolerance", Cell::Num(report.eff_tolerance)));
    table.meta.push(("oracle_tol", Cell::Num(cfg.oracle_tol)));
    let exit_code = if report.all_pass() { EXIT_OK } else { EXIT_VALIDATION };
    Ok(Outcome { table, exit_code })
}
