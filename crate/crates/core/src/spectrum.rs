//! Closed-form bound states of `U″ + [λ² − V(r)]U = 0` for inverse-polynomial
//! potentials, through the effective form `q/r² − w/r + z_pot`.
//!
//! With `s = √(q + ¼)` and `D = (2n + 1) ± 2s` the quantization condition
//! gives `z = w²/D²` and
//!
//! ```text
//! λ² = z_pot − w²/D²
//! U(r) = Nₙ · r^(½ ± s) · exp(−√z·r) · Lₙ^(±2s)(2√z·r)
//! ```
//!
//! The Laguerre argument is `2√z·r`: the Rodrigues formula with weight
//! `r^(2s)·exp(−2√z·r)` produces polynomials in that scaled variable.

use std::fmt;

use crate::error::{Error, Result};
use crate::nu_engine::NUProblem;
use crate::potential::{auto_r0, expansion_coeffs, ExpansionTriple, InversePolyPotential};
use crate::specfun::{decay_cutoff, integrate_decaying, laguerre_unchecked};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BranchSign {
    Plus,
    Minus,
}

impl BranchSign {
    pub fn factor(self) -> f64 {
        match self {
            BranchSign::Plus => 1.0,
            BranchSign::Minus => -1.0,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            BranchSign::Plus => '+',
            BranchSign::Minus => '-',
        }
    }
}

impl fmt::Display for BranchSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum R0Policy {
    /// Innermost minimum of `V` (or innermost zero), see [`auto_r0`].
    Auto,
    Explicit(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchPolicy {
    Plus,
    Minus,
    Both,
}

impl BranchPolicy {
    pub fn signs(self) -> &'static [BranchSign] {
        match self {
            BranchPolicy::Plus => &[BranchSign::Plus],
            BranchPolicy::Minus => &[BranchSign::Minus],
            BranchPolicy::Both => &[BranchSign::Plus, BranchSign::Minus],
        }
    }
}

/// A fully populated eigenstate. Non-normalizable states keep their
/// formal parameters but carry `norm = None`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenState {
    pub n: usize,
    pub branch: BranchSign,
    pub lambda2: f64,
    pub q: f64,
    pub w: f64,
    /// `z_pot − λ²`.
    pub z: f64,
    pub z_pot: f64,
    pub r0: f64,
    /// Exponent of `r` in `U`.
    pub power: f64,
    /// Decay rate `√z`.
    pub rate: f64,
    pub laguerre_order: f64,
    pub norm: Option<f64>,
    /// Radius where the normalization integral was truncated.
    pub cutoff: Option<f64>,
}

impl EigenState {
    pub fn normalizable(&self) -> bool {
        self.norm.is_some()
    }

    /// `(2n + 1) ± 2√(q + ¼)`.
    pub fn denominator(&self) -> f64 {
        denominator(self.q, self.n, self.branch)
    }

    /// Argument scale of the Laguerre factor, `2√z`.
    pub fn laguerre_scale(&self) -> f64 {
        2.0 * self.rate
    }

    /// `q/r² − w/r + z_pot`, the potential this state solves exactly.
    pub fn effective_potential(&self, r: f64) -> f64 {
        self.q / (r * r) - self.w / r + self.z_pot
    }
}

fn index_root(q: f64) -> Result<f64> {
    let arg = q + 0.25;
    if arg < 0.0 {
        return Err(Error::ComplexIndex(arg));
    }
    Ok(arg.sqrt())
}

fn denominator(q: f64, n: usize, sign: BranchSign) -> f64 {
    (2 * n + 1) as f64 + 2.0 * sign.factor() * (q + 0.25).max(0.0).sqrt()
}

/// `z = w²/D²` for the given triple.
fn closed_form_z(t: &ExpansionTriple, n: usize, sign: BranchSign) -> Result<f64> {
    index_root(t.q)?;
    let d = denominator(t.q, n, sign);
    if d.abs() <= 1e-12 * (2 * n + 1) as f64 {
        return Err(Error::SingularBranch { n });
    }
    Ok(t.w * t.w / (d * d))
}

pub fn eigenvalue_from_triple(t: &ExpansionTriple, n: usize, sign: BranchSign) -> Result<f64> {
    Ok(t.z_pot - closed_form_z(t, n, sign)?)
}

/// `λ² = z_pot − w² / [(2n + 1) ± 2√(q + ¼)]²` with `(q, w, z_pot)` expanded about `r0`.
pub fn eigenvalue(p: &InversePolyPotential, r0: f64, n: usize, sign: BranchSign) -> Result<f64> {
    eigenvalue_from_triple(&expansion_coeffs(p, r0)?, n, sign)
}

/// `λ²` through the generic engine: find `√z > 0` such that the physical
/// branch at the lower (plus) or upper (minus) `k` satisfies `λ̃ = λ̃ₙ`.
pub fn eigenvalue_via_engine(t: &ExpansionTriple, n: usize, sign: BranchSign) -> Result<f64> {
    index_root(t.q)?;
    let residual = |root_z: f64| -> Result<f64> {
        let prob = NUProblem::radial(t.q, t.w, root_z * root_z)?;
        let ks = prob.k_candidates()?;
        let k = match (sign, ks.len()) {
            (BranchSign::Plus, _) => ks[0],
            (BranchSign::Minus, 2) => ks[1],
            _ => return Err(Error::NoBranch("k candidates collapsed".into())),
        };
        let branch = prob
            .branches(k)?
            .into_iter()
            .find(|b| b.physical)
            .ok_or_else(|| Error::NoBranch(format!("no physical branch at k = {k}")))?;
        Ok(prob.quantize(&branch, n).residual())
    };

    // The residual starts at w for √z → 0⁺ and falls linearly; bracket the crossing.
    let (mut lo, mut hi) = (1.0f64, 1.0f64);
    let f_one = residual(1.0)?;
    if f_one > 0.0 {
        while residual(hi)? > 0.0 {
            hi *= 2.0;
            if hi > 1e150 {
                return Err(Error::NonNormalizable(
                    "quantization condition has no positive root".into(),
                ));
            }
        }
    } else {
        while residual(lo)? <= 0.0 {
            lo *= 0.5;
            if lo < 1e-150 {
                return Err(Error::NonNormalizable(
                    "quantization condition has no positive root".into(),
                ));
            }
        }
    }
    let f_lo = residual(lo)?;
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = residual(mid)?;
        if fm == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if fm.signum() == f_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let root_z = 0.5 * (lo + hi);
    Ok(t.z_pot - root_z * root_z)
}

/// Builds the state for `(n, sign)` from an expansion triple, including the
/// normalization constant when the state is bound.
pub fn state_from_triple(t: &ExpansionTriple, n: usize, sign: BranchSign) -> Result<EigenState> {
    let s = index_root(t.q)?;
    let z = closed_form_z(t, n, sign)?;
    let d = denominator(t.q, n, sign);
    let mut state = EigenState {
        n,
        branch: sign,
        lambda2: t.z_pot - z,
        q: t.q,
        w: t.w,
        z,
        z_pot: t.z_pot,
        r0: t.r0,
        power: 0.5 + sign.factor() * s,
        rate: z.sqrt(),
        laguerre_order: 2.0 * sign.factor() * s,
        norm: None,
        cutoff: None,
    };
    let bound = z > 0.0 && t.w > 0.0 && d > 0.0 && state.power > 0.5 && state.laguerre_order > -1.0;
    if bound {
        let (norm, cutoff) = normalize(&state)?;
        state.norm = Some(norm);
        state.cutoff = Some(cutoff);
    }
    Ok(state)
}

pub fn state(p: &InversePolyPotential, r0: f64, n: usize, sign: BranchSign) -> Result<EigenState> {
    state_from_triple(&expansion_coeffs(p, r0)?, n, sign)
}

/// Unnormalized `U` in the scaled variable `x = √z·r`.
fn shape(state: &EigenState, r: f64) -> f64 {
    let x = state.rate * r;
    x.powf(state.power) * (-x).exp() * laguerre_unchecked(state.n, state.laguerre_order, 2.0 * x)
}

fn normalize(state: &EigenState) -> Result<(f64, f64)> {
    let length = 1.0 / state.rate;
    // Peak of x^(2p) e^(−2x) sits near x = p; the Laguerre factor spreads it by ~n.
    let x_peak = state.power.max(0.5) + state.n as f64;
    let mag = shape_peak(state, length * x_peak * 4.0);
    let tol = 1e-13 * mag * length * (1.0 + x_peak);
    let tail = integrate_decaying(|r| shape(state, r).powi(2), 0.0, length, tol)?;
    Ok((1.0 / tail.value.sqrt(), tail.cutoff))
}

fn shape_peak(state: &EigenState, r_hi: f64) -> f64 {
    (1..=400)
        .map(|i| shape(state, r_hi * i as f64 / 400.0).powi(2))
        .fold(0.0, f64::max)
}

/// Normalized `U(r)` of a bound state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigenfunction {
    state: EigenState,
    norm: f64,
}

impl Eigenfunction {
    pub fn state(&self) -> &EigenState {
        &self.state
    }

    pub fn eval(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return 0.0;
        }
        self.norm * shape(&self.state, r)
    }

    /// Normalization in the original variable: `U = N·r^p·e^(−√z r)·L(2√z r)`.
    pub fn norm_constant(&self) -> f64 {
        self.norm * self.state.rate.powf(self.state.power)
    }

    /// Sign changes of `U` over the region where `|U|` exceeds `1e−12` of
    /// its maximum, on a log-spaced grid.
    pub fn node_count(&self, samples: usize) -> usize {
        let (lo, hi) = self.support(1e-12);
        let samples = samples.max(2);
        let ratio = (hi / lo).ln();
        let mut count = 0;
        let mut prev = 0.0f64;
        for i in 0..samples {
            let r = lo * (ratio * i as f64 / (samples - 1) as f64).exp();
            let u = self.eval(r);
            if u != 0.0 {
                if prev != 0.0 && prev.signum() != u.signum() {
                    count += 1;
                }
                prev = u;
            }
        }
        count
    }

    /// Radial interval where `|U| > rel·max|U|`.
    pub fn support(&self, rel: f64) -> (f64, f64) {
        let length = 1.0 / self.state.rate;
        let hi = decay_cutoff(|r| self.eval(r), 0.0, length, rel).unwrap_or(1e4 * length);
        let lo_scan = 1e-16 * length;
        let points = 20_000;
        let ratio = (hi / lo_scan).ln();
        let grid: Vec<f64> = (0..points)
            .map(|i| lo_scan * (ratio * i as f64 / (points - 1) as f64).exp())
            .collect();
        let max = grid.iter().map(|&r| self.eval(r).abs()).fold(0.0, f64::max);
        let lo = grid
            .iter()
            .copied()
            .find(|&r| self.eval(r).abs() > rel * max)
            .unwrap_or(lo_scan);
        (lo, hi)
    }
}

pub fn eigenfunction(state: &EigenState) -> Result<Eigenfunction> {
    match state.norm {
        Some(norm) => Ok(Eigenfunction { state: *state, norm }),
        None => Err(Error::NonNormalizable(format!(
            "n = {}, branch {} (z = {}, w = {}, power = {})",
            state.n, state.branch, state.z, state.w, state.power
        ))),
    }
}

pub fn node_count(state: &EigenState, samples: usize) -> Result<usize> {
    Ok(eigenfunction(state)?.node_count(samples))
}

/// Resolves the expansion point for a potential.
pub fn resolve_r0(p: &InversePolyPotential, policy: R0Policy) -> Result<f64> {
    match policy {
        R0Policy::Auto => auto_r0(p),
        R0Policy::Explicit(r0) if r0 > 0.0 && r0.is_finite() => Ok(r0),
        R0Policy::Explicit(r0) => Err(Error::Domain(format!("r0 must be > 0, got {r0}"))),
    }
}

/// All states `n = 0..=n_max` for the requested branches, sorted by `λ²`.
///
/// A branch whose denominator vanishes is kept as a non-normalizable entry
/// with `λ² = NaN`.
pub fn solve_spectrum(
    p: &InversePolyPotential,
    r0: R0Policy,
    n_max: usize,
    branches: BranchPolicy,
) -> Result<Vec<EigenState>> {
    let r0 = resolve_r0(p, r0)?;
    let t = expansion_coeffs(p, r0)?;
    index_root(t.q)?;
    let mut out = Vec::with_capacity((n_max + 1) * branches.signs().len());
    for n in 0..=n_max {
        for &sign in branches.signs() {
            match state_from_triple(&t, n, sign) {
                Ok(s) => out.push(s),
                Err(Error::SingularBranch { .. }) => out.push(EigenState {
                    n,
                    branch: sign,
                    lambda2: f64::NAN,
                    q: t.q,
                    w: t.w,
                    z: f64::NAN,
                    z_pot: t.z_pot,
                    r0,
                    power: 0.5 + sign.factor() * (t.q + 0.25).sqrt(),
                    rate: f64::NAN,
                    laguerre_order: 2.0 * sign.factor() * (t.q + 0.25).sqrt(),
                    norm: None,
                    cutoff: None,
                }),
                Err(e) => return Err(e),
            }
        }
    }
    out.sort_by(|a, b| {
        a.lambda2
            .total_cmp(&b.lambda2)
            .then(a.n.cmp(&b.n))
            .then(a.branch.cmp(&b.branch))
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nu_engine::{phi_factor, rho_weight};
    use crate::potential::Preset;
    use crate::specfun::integrate;

    fn coulomb(alpha: f64, ell: u32) -> InversePolyPotential {
        Preset::Coulomb { alpha, ell }.build().unwrap()
    }

    #[test]
    fn hydrogen_values() {
        let e = eigenvalue(&coulomb(-1.0, 0), 1.0, 0, BranchSign::Plus).unwrap();
        assert!((e + 0.25).abs() < 1e-15);
        let e = eigenvalue(&coulomb(-1.0, 1), 1.0, 0, BranchSign::Plus).unwrap();
        assert!((e + 1.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn constant_shift_moves_every_level() {
        let p = Preset::Magnetic {
            alpha: -1.0,
            a: 1.0,
            b: 0.1,
            c: 0.01,
        }
        .build()
        .unwrap();
        let shifted = p.with_a0(5.0).unwrap();
        for n in 0..4 {
            let a = eigenvalue(&p, 2.0, n, BranchSign::Plus).unwrap();
            let b = eigenvalue(&shifted, 2.0, n, BranchSign::Plus).unwrap();
            assert!((b - a - 5.0).abs() < 1e-12);
        }
    }

    #[test]
    fn errors() {
        // q = −1 < −¼
        let p = InversePolyPotential::new(0.0, vec![-1.0, -1.0]).unwrap();
        assert!(matches!(
            eigenvalue(&p, 1.0, 0, BranchSign::Plus),
            Err(Error::ComplexIndex(_))
        ));
        // ℓ = 0: (2n + 1) − 2·½ vanishes at n = 0.
        assert!(matches!(
            eigenvalue(&coulomb(-1.0, 0), 1.0, 0, BranchSign::Minus),
            Err(Error::SingularBranch { n: 0 })
        ));
    }

    #[test]
    fn branch_consistency_closes() {
        let p = Preset::Magnetic {
            alpha: -1.0,
            a: 1.0,
            b: 0.1,
            c: 0.01,
        }
        .build()
        .unwrap();
        let t = expansion_coeffs(&p, 2.0).unwrap();
        for n in 0..5 {
            let l2 = eigenvalue_from_triple(&t, n, BranchSign::Plus).unwrap();
            let z = t.z_pot - l2;
            let d = denominator(t.q, n, BranchSign::Plus);
            assert!((z - t.w * t.w / (d * d)).abs() <= 1e-12 * z);
        }
    }

    #[test]
    fn engine_route_agrees() {
        let t = ExpansionTriple {
            q: 2.3,
            w: 1.7,
            z_pot: 0.4,
            r0: 1.0,
        };
        for n in 0..4 {
            let a = eigenvalue_from_triple(&t, n, BranchSign::Plus).unwrap();
            let b = eigenvalue_via_engine(&t, n, BranchSign::Plus).unwrap();
            assert!((a - b).abs() < 1e-12 * a.abs().max(1.0), "{a} {b}");
        }
        // Minus branch with q ∈ (−¼, 0): D = 2n + 1 − 2s > 0.
        let t = ExpansionTriple {
            q: -0.1,
            w: 0.8,
            z_pot: 0.0,
            r0: 1.0,
        };
        let a = eigenvalue_from_triple(&t, 1, BranchSign::Minus).unwrap();
        let b = eigenvalue_via_engine(&t, 1, BranchSign::Minus).unwrap();
        assert!((a - b).abs() < 1e-12 * a.abs());
    }

    #[test]
    fn state_matches_engine_factors() {
        let t = ExpansionTriple {
            q: 2.0,
            w: 1.0,
            z_pot: 0.0,
            r0: 1.0,
        };
        let st = state_from_triple(&t, 1, BranchSign::Plus).unwrap();
        let prob = NUProblem::radial(st.q, st.w, st.z).unwrap();
        let k = prob.k_candidates().unwrap()[0];
        let b = prob.branches(k).unwrap().into_iter().find(|b| b.physical).unwrap();
        let phi = phi_factor(&b, prob.sigma()).unwrap();
        let rho = rho_weight(&b, prob.sigma()).unwrap();
        // U = r·φ·Y
        assert!((phi.power + 1.0 - st.power).abs() < 1e-12);
        assert!((phi.rate + st.rate).abs() < 1e-12);
        assert!((rho.power - st.laguerre_order).abs() < 1e-12);
        assert!((rho.rate + st.laguerre_scale()).abs() < 1e-12);
    }

    #[test]
    fn hydrogen_ground_state_shape() {
        let st = state(&coulomb(-1.0, 0), 1.0, 0, BranchSign::Plus).unwrap();
        assert!((st.rate - 0.5).abs() < 1e-15 && (st.power - 1.0).abs() < 1e-15);
        let u = eigenfunction(&st).unwrap();
        assert!((u.norm_constant() - 0.5f64.sqrt()).abs() < 1e-9);
        let exact = 2.0 * (-1.0f64).exp() / 2f64.sqrt();
        assert!((u.eval(2.0) - exact).abs() < 1e-9);
        assert_eq!(u.eval(0.0), 0.0);
        let norm = integrate(|r| u.eval(r).powi(2), 0.0, 120.0, 1e-12).unwrap();
        assert!((norm - 1.0).abs() < 1e-8);
    }

    #[test]
    fn node_counts() {
        let p = coulomb(-1.0, 0);
        for n in 0..=3 {
            let st = state(&p, 1.0, n, BranchSign::Plus).unwrap();
            assert_eq!(node_count(&st, 2000).unwrap(), n);
        }
        // n = 1: the node sits where 2√z·r = 2.
        let st = state(&p, 1.0, 1, BranchSign::Plus).unwrap();
        let u = eigenfunction(&st).unwrap();
        let node = 1.0 / st.rate;
        assert!(u.eval(0.99 * node) * u.eval(1.01 * node) < 0.0);
    }

    #[test]
    fn non_normalizable_states_are_refused() {
        // Repulsive Coulomb: w < 0.
        let st = state(&coulomb(1.0, 0), 1.0, 0, BranchSign::Plus).unwrap();
        assert!(!st.normalizable());
        assert!(matches!(eigenfunction(&st), Err(Error::NonNormalizable(_))));
        assert!(node_count(&st, 100).is_err());
        // Minus branch with q ≥ 0 has power ≤ ½.
        let st = state(&coulomb(-1.0, 2), 1.0, 0, BranchSign::Minus).unwrap();
        assert!(!st.normalizable());
    }

    #[test]
    fn spectrum_batches() {
        let s = solve_spectrum(&coulomb(-1.0, 0), R0Policy::Explicit(1.0), 2, BranchPolicy::Plus).unwrap();
        let want = [-0.25, -1.0 / 16.0, -1.0 / 36.0];
        assert_eq!(s.len(), 3);
        for (st, w) in s.iter().zip(want) {
            assert!((st.lambda2 - w).abs() < 1e-15);
        }

        let nu = Preset::Neutrino { k: 1, eps: 1 }.build().unwrap();
        let s = solve_spectrum(&nu, R0Policy::Explicit(1.0), 0, BranchPolicy::Plus).unwrap();
        assert_eq!((s[0].q, s[0].w, s[0].z_pot), (20.0, 20.0, 7.0));
        assert!((s[0].lambda2 - 3.0).abs() < 1e-12);

        let s = solve_spectrum(&nu, R0Policy::Explicit(1.0), 0, BranchPolicy::Both).unwrap();
        assert_eq!(s.len(), 2);
        // Coulomb ℓ = 0 minus branch is singular at n = 0 and kept with NaN.
        let s = solve_spectrum(&coulomb(-1.0, 0), R0Policy::Explicit(1.0), 0, BranchPolicy::Both).unwrap();
        assert_eq!(s.len(), 2);
        assert!(s[1].lambda2.is_nan() && !s[1].normalizable());

        assert_eq!(
            solve_spectrum(&coulomb(-1.0, 0), R0Policy::Auto, 1, BranchPolicy::Plus),
            Err(Error::NoStructure)
        );
    }
}
