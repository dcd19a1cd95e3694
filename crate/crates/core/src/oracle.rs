//! Finite-difference eigensolver for `−U″ + V(r)U = λ²U` with Dirichlet
//! ends, independent of the closed form.
//!
//! The three-point Laplacian on a uniform grid gives a symmetric tridiagonal
//! matrix (diagonal `2/h² + V(rᵢ)`, off-diagonal `−1/h²`). Its lowest
//! eigenvalues are isolated by Sturm-sequence bisection, so no dense
//! eigensolver is involved.

use crate::error::{Error, Result};
use crate::potential::InversePolyPotential;
use crate::spectrum::{BranchSign, EigenState};

/// Uniform grid with `m` interior points strictly inside `(r_min, r_max)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid {
    pub r_min: f64,
    pub r_max: f64,
    pub m: usize,
}

impl RadialGrid {
    pub fn new(r_min: f64, r_max: f64, m: usize) -> Result<Self> {
        if !(r_min >= 0.0 && r_min < r_max && r_max.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "grid needs 0 <= r_min < r_max, got [{r_min}, {r_max}]"
            )));
        }
        if m < 100 {
            return Err(Error::InvalidInput(format!(
                "grid needs m >= 100 interior points, got {m}"
            )));
        }
        Ok(Self { r_min, r_max, m })
    }

    pub fn h(&self) -> f64 {
        (self.r_max - self.r_min) / (self.m + 1) as f64
    }

    /// `i`-th interior point, `i ∈ 1..=m`.
    pub fn point(&self, i: usize) -> f64 {
        self.r_min + i as f64 * self.h()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    /// Lowest eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    pub grid: RadialGrid,
    pub converged: bool,
    /// Relative tolerance the convergence flag refers to.
    pub tolerance: f64,
}

/// Symmetric tridiagonal matrix with a constant off-diagonal.
#[derive(Debug, Clone)]
pub struct Tridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl Tridiagonal {
    /// Number of eigenvalues strictly below `x` (negative LDLᵀ pivots).
    pub fn sturm_count(&self, x: f64) -> usize {
        let mut count = 0;
        let mut d = self.diag[0] - x;
        if d < 0.0 {
            count += 1;
        }
        for i in 1..self.diag.len() {
            let pivot = if d == 0.0 {
                f64::EPSILON * (self.off[i - 1].abs() + 1e-300)
            } else {
                d
            };
            d = self.diag[i] - x - self.off[i - 1] * self.off[i - 1] / pivot;
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.diag.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    /// The `k`-th smallest eigenvalue (0-based) by bisection inside `[lo, hi]`.
    pub fn bisect_eigenvalue(&self, k: usize, mut lo: f64, mut hi: f64) -> f64 {
        for _ in 0..400 {
            let mid = 0.5 * (lo + hi);
            if hi - lo <= 1e-12 * lo.abs().max(hi.abs()).max(1e-300) || mid <= lo || mid >= hi {
                break;
            }
            if self.sturm_count(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// The `j` smallest eigenvalues, ascending.
    pub fn lowest(&self, j: usize) -> Vec<f64> {
        let (glo, ghi) = self.gershgorin();
        let mut out: Vec<f64> = Vec::with_capacity(j);
        for k in 0..j {
            let lo = out.last().copied().unwrap_or(glo).min(ghi);
            out.push(self.bisect_eigenvalue(k, lo, ghi));
        }
        out
    }

    /// Eigenvector for an eigenvalue estimate, by inverse iteration.
    pub fn eigenvector(&self, lambda: f64) -> Vec<f64> {
        let n = self.diag.len();
        let shift = lambda + 1e-10 * lambda.abs().max(1e-8);
        let mut x = vec![1.0; n];
        for _ in 0..3 {
            x = self.solve_shifted(shift, &x);
            let norm = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if norm > 0.0 && norm.is_finite() {
                x.iter_mut().for_each(|v| *v /= norm);
            }
        }
        x
    }

    /// Thomas algorithm for `(T − shift·I) x = b`.
    fn solve_shifted(&self, shift: f64, b: &[f64]) -> Vec<f64> {
        let n = self.diag.len();
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        let guard = |p: f64| if p == 0.0 { 1e-300 } else { p };
        let mut piv = guard(self.diag[0] - shift);
        c[0] = if n > 1 { self.off[0] / piv } else { 0.0 };
        d[0] = b[0] / piv;
        for i in 1..n {
            piv = guard(self.diag[i] - shift - self.off[i - 1] * c[i - 1]);
            c[i] = if i + 1 < n { self.off[i] / piv } else { 0.0 };
            d[i] = (b[i] - self.off[i - 1] * d[i - 1]) / piv;
        }
        for i in (0..n - 1).rev() {
            d[i] -= c[i] * d[i + 1];
        }
        d
    }
}

fn assemble(v: &impl Fn(f64) -> f64, grid: &RadialGrid) -> Result<Tridiagonal> {
    let h = grid.h();
    let kinetic = 2.0 / (h * h);
    let mut diag = Vec::with_capacity(grid.m);
    for i in 1..=grid.m {
        let r = grid.point(i);
        let vr = v(r);
        if !vr.is_finite() {
            return Err(Error::Oracle(format!("V({r}) is not finite")));
        }
        diag.push(kinetic + vr);
    }
    Ok(Tridiagonal {
        diag,
        off: vec![-1.0 / (h * h); grid.m - 1],
    })
}

/// Lowest `j` eigenvalues of `−d²/dr² + V` on `grid`.
pub fn solve_fd(v: impl Fn(f64) -> f64, grid: RadialGrid, j: usize) -> Result<OracleResult> {
    if j == 0 || j > grid.m / 4 {
        return Err(Error::Oracle(format!(
            "requested {j} eigenvalues; must be between 1 and m/4 = {}",
            grid.m / 4
        )));
    }
    let t = assemble(&v, &grid)?;
    Ok(OracleResult {
        eigenvalues: t.lowest(j),
        grid,
        converged: false,
        tolerance: f64::NAN,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleSettings {
    /// Relative change of the `j`-th eigenvalue that counts as converged.
    pub tol: f64,
    /// Characteristic length; the potential is frozen inside `1e−4·length_scale`.
    pub length_scale: f64,
    /// Starting outer radius; grown until the `j`-th eigenvector has decayed.
    pub r_max: Option<f64>,
    pub start_m: usize,
    pub max_doublings: u32,
}

impl Default for OracleSettings {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            length_scale: 1.0,
            r_max: None,
            start_m: 2000,
            max_doublings: 6,
        }
    }
}

impl OracleSettings {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }
}

const TAIL_AMPLITUDE: f64 = 1e-10;

/// [`converge_with`] using default settings and the given tolerance.
pub fn converge(v: impl Fn(f64) -> f64, j: usize, tol: f64) -> Result<OracleResult> {
    converge_with(v, j, &OracleSettings::with_tol(tol))
}

/// Grid-refined eigenvalues with one Richardson step on the final pair.
///
/// `converged` is false when the grid sequence does not settle within
/// `max_doublings`, when no outer radius contains the `j`-th eigenvector, or
/// when halving the short-distance cutoff moves the result by more than the
/// tolerance.
pub fn converge_with(v: impl Fn(f64) -> f64, j: usize, settings: &OracleSettings) -> Result<OracleResult> {
    if !(settings.tol > 0.0) || !(settings.length_scale > 0.0) {
        return Err(Error::InvalidInput(
            "oracle tol and length scale must be positive".into(),
        ));
    }
    if j == 0 {
        return Err(Error::Oracle("requested zero eigenvalues".into()));
    }
    // The Dirichlet wall sits at the origin; the potential is only ever
    // sampled at interior points. Its short-distance form is held constant
    // inside a cutoff radius, and halving that radius must not move the result.
    let cutoff = 1e-4 * settings.length_scale;
    let v = &v;
    let floored = |rc: f64| move |r: f64| v(r.max(rc));
    let (r_max, contained) = choose_r_max(&floored(cutoff), j, settings)?;
    let primary = refine(&floored(cutoff), r_max, j, settings)?;
    let alt = refine(&floored(0.5 * cutoff), r_max, j, settings)?;
    let cutoff_stable = primary
        .eigenvalues
        .iter()
        .zip(&alt.eigenvalues)
        .all(|(a, b)| (a - b).abs() <= settings.tol * a.abs().max(b.abs()).max(1e-300));
    Ok(OracleResult {
        converged: primary.converged && contained && cutoff_stable,
        ..primary
    })
}

fn choose_r_max(v: &impl Fn(f64) -> f64, j: usize, settings: &OracleSettings) -> Result<(f64, bool)> {
    let mut r_max = settings.r_max.unwrap_or(40.0 * settings.length_scale);
    let m = settings.start_m.max(4 * j).max(100);
    for _ in 0..40 {
        let grid = RadialGrid::new(0.0, r_max, m)?;
        let t = assemble(v, &grid)?;
        let vals = t.lowest(j);
        let vec = t.eigenvector(vals[j - 1]);
        let peak = vec.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        let tail_start = m - m / 10;
        let tail = vec[tail_start..].iter().fold(0.0f64, |a, x| a.max(x.abs()));
        if peak > 0.0 && tail <= TAIL_AMPLITUDE * peak {
            return Ok((r_max, true));
        }
        r_max *= 1.5;
    }
    Ok((r_max, false))
}

fn refine(v: &impl Fn(f64) -> f64, r_max: f64, j: usize, settings: &OracleSettings) -> Result<OracleResult> {
    let mut m = settings.start_m.max(4 * j).max(100);
    let mut levels: Vec<(f64, Vec<f64>, RadialGrid)> = Vec::new();
    let mut extrapolated: Vec<Vec<f64>> = Vec::new();
    let mut converged = false;
    for _ in 0..=settings.max_doublings {
        let grid = RadialGrid::new(0.0, r_max, m)?;
        let res = solve_fd(v, grid, j)?;
        if let Some((h_prev, e_prev, _)) = levels.last() {
            extrapolated.push(richardson(*h_prev, e_prev, grid.h(), &res.eigenvalues));
        }
        levels.push((grid.h(), res.eigenvalues, grid));
        // Converged once successive extrapolated values of the j-th level settle.
        if extrapolated.len() >= 2 {
            let a = extrapolated[extrapolated.len() - 2][j - 1];
            let b = extrapolated[extrapolated.len() - 1][j - 1];
            if (a - b).abs() <= settings.tol * a.abs().max(b.abs()).max(1e-300) {
                converged = true;
                break;
            }
        }
        m *= 2;
    }
    let (_, last, grid) = levels.last().cloned().expect("at least one level");
    Ok(OracleResult {
        eigenvalues: extrapolated.last().cloned().unwrap_or(last),
        grid,
        converged,
        tolerance: settings.tol,
    })
}

/// Removes the `h²` error term from a pair of grid results.
fn richardson(h1: f64, e1: &[f64], h2: f64, e2: &[f64]) -> Vec<f64> {
    let (a, b) = (h1 * h1, h2 * h2);
    e1.iter().zip(e2).map(|(x1, x2)| (a * x2 - b * x1) / (a - b)).collect()
}

/// Outcome of the effective-potential comparison for one state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Agreement {
    Pass,
    Fail,
    /// No oracle counterpart (non-normalizable, or a minus-branch state that
    /// a Dirichlet condition at the origin does not select).
    Skipped,
}

impl Agreement {
    pub fn as_str(&self) -> &'static str {
        match self {
            Agreement::Pass => "pass",
            Agreement::Fail => "fail",
            Agreement::Skipped => "skip",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapRow {
    pub n: usize,
    pub branch: BranchSign,
    pub lambda2_nu: f64,
    pub lambda2_eff_oracle: f64,
    pub eff_agreement: Agreement,
    pub lambda2_true_oracle: f64,
    /// `|λ²_NU − λ²_oracle(true V)|`.
    pub gap: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapReport {
    pub rows: Vec<GapRow>,
    /// Relative tolerance of the effective-potential check.
    pub eff_tolerance: f64,
}

impl GapReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.eff_agreement != Agreement::Fail)
    }
}

/// Relative tolerance for closed form vs oracle on the effective potential.
pub fn eff_tolerance(settings: &OracleSettings) -> f64 {
    settings.tol.max(1e-5)
}

/// Whether two values of `λ²` agree; differences are measured against
/// `max(|λ²|, z)` so that levels near zero are not judged by a vanishing scale.
pub fn agrees(nu: f64, oracle: f64, z: f64, rel: f64) -> bool {
    (nu - oracle).abs() <= rel * nu.abs().max(oracle.abs()).max(z.abs())
}

/// Compares closed-form states against the oracle on the effective potential
/// (an exactness check) and on the true potential (the expansion gap).
pub fn validate(p: &InversePolyPotential, states: &[EigenState], settings: &OracleSettings) -> Result<GapReport> {
    let checked: Vec<&EigenState> = states
        .iter()
        .filter(|s| s.normalizable() && s.branch == BranchSign::Plus)
        .collect();
    let j = checked.iter().map(|s| s.n + 1).max().unwrap_or(0);
    let rel = eff_tolerance(settings);

    let (eff, truth) = if let Some(first) = checked.first() {
        let t = **first;
        let length = t.r0.min(1.0 / t.rate);
        let s = OracleSettings {
            length_scale: length,
            ..*settings
        };
        let eff = converge_with(|r| t.effective_potential(r), j, &s)?;
        let truth = converge_with(
            |r| p.value(r),
            j,
            &OracleSettings {
                length_scale: t.r0.min(length),
                ..*settings
            },
        )?;
        (Some(eff), Some(truth))
    } else {
        (None, None)
    };

    let rows = states
        .iter()
        .map(|s| {
            let included = s.normalizable() && s.branch == BranchSign::Plus;
            match (&eff, &truth, included) {
                (Some(eff), Some(truth), true) => {
                    let e = eff.eigenvalues[s.n];
                    let t = truth.eigenvalues[s.n];
                    GapRow {
                        n: s.n,
                        branch: s.branch,
                        lambda2_nu: s.lambda2,
                        lambda2_eff_oracle: e,
                        eff_agreement: if agrees(s.lambda2, e, s.z, rel) {
                            Agreement::Pass
                        } else {
                            Agreement::Fail
                        },
                        lambda2_true_oracle: t,
                        gap: (s.lambda2 - t).abs(),
                        converged: eff.converged && truth.converged,
                    }
                }
                _ => GapRow {
                    n: s.n,
                    branch: s.branch,
                    lambda2_nu: s.lambda2,
                    lambda2_eff_oracle: f64::NAN,
                    eff_agreement: Agreement::Skipped,
                    lambda2_true_oracle: f64::NAN,
                    gap: f64::NAN,
                    converged: false,
                },
            }
        })
        .collect();
    Ok(GapReport {
        rows,
        eff_tolerance: rel,
    })
}
