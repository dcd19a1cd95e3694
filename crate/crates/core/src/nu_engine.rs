//! Nikiforov-Uvarov reduction of hypergeometric-type equations
//!
//! ```text
//! Ψ″ + (τ̃/σ) Ψ′ + (σ̃/σ²) Ψ = 0,   deg σ, σ̃ ≤ 2,  deg τ̃ ≤ 1
//! ```
//!
//! Writing `Ψ = φ·Y` with `φ′/φ = π/σ` leaves a hypergeometric equation
//! `σY″ + τY′ + λ̃Y = 0`, `τ = τ̃ + 2π`, provided
//!
//! ```text
//! π = (σ′ − τ̃)/2 ± sqrt( ((σ′ − τ̃)/2)² − σ̃ + kσ ),    λ̃ = k + π′
//! ```
//!
//! is a polynomial. That happens only for the values of `k` that make the
//! quadratic under the root a perfect square. Polynomial solutions then
//! exist when `λ̃ = λ̃ₙ = −nτ′ − n(n−1)σ″/2`.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::polycubic::quadratic_roots;

const DEGREE_EPS: f64 = 1e-14;
const SQUARE_TOL: f64 = 1e-9;

/// `c0 + c1·s + c2·s²`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LowPoly {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
}

impl LowPoly {
    pub const fn new(c0: f64, c1: f64, c2: f64) -> Self {
        Self { c0, c1, c2 }
    }

    pub const fn constant(c0: f64) -> Self {
        Self::new(c0, 0.0, 0.0)
    }

    pub const fn linear(c0: f64, c1: f64) -> Self {
        Self::new(c0, c1, 0.0)
    }

    /// Effective degree; coefficients with magnitude ≤ 1e−14 count as zero.
    pub fn degree(&self) -> usize {
        if self.c2.abs() > DEGREE_EPS {
            2
        } else if self.c1.abs() > DEGREE_EPS {
            1
        } else {
            0
        }
    }

    pub fn eval(&self, s: f64) -> f64 {
        (self.c2 * s + self.c1) * s + self.c0
    }

    pub fn derivative(&self) -> LowPoly {
        LowPoly::linear(self.c1, 2.0 * self.c2)
    }

    /// Value of the (constant) first derivative of a polynomial of degree ≤ 1.
    pub fn slope(&self) -> f64 {
        self.c1
    }

    /// Constant second derivative.
    pub fn curvature(&self) -> f64 {
        2.0 * self.c2
    }

    pub fn scale(&self, k: f64) -> LowPoly {
        LowPoly::new(k * self.c0, k * self.c1, k * self.c2)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.c0.abs().max(self.c1.abs()).max(self.c2.abs())
    }
}

impl Add for LowPoly {
    type Output = LowPoly;
    fn add(self, o: LowPoly) -> LowPoly {
        LowPoly::new(self.c0 + o.c0, self.c1 + o.c1, self.c2 + o.c2)
    }
}

impl Sub for LowPoly {
    type Output = LowPoly;
    fn sub(self, o: LowPoly) -> LowPoly {
        LowPoly::new(self.c0 - o.c0, self.c1 - o.c1, self.c2 - o.c2)
    }
}

impl Neg for LowPoly {
    type Output = LowPoly;
    fn neg(self) -> LowPoly {
        self.scale(-1.0)
    }
}

/// Product of two polynomials whose degrees sum to at most 2.
impl Mul for LowPoly {
    type Output = LowPoly;
    fn mul(self, o: LowPoly) -> LowPoly {
        debug_assert!(
            self.degree() + o.degree() <= 2,
            "product exceeds degree 2: {self:?} * {o:?}"
        );
        LowPoly::new(
            self.c0 * o.c0,
            self.c0 * o.c1 + self.c1 * o.c0,
            self.c0 * o.c2 + self.c1 * o.c1 + self.c2 * o.c0,
        )
    }
}

/// The three polynomials `σ`, `τ̃`, `σ̃` of a hypergeometric-type equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NUProblem {
    sigma: LowPoly,
    tau_tilde: LowPoly,
    sigma_tilde: LowPoly,
}

impl NUProblem {
    pub fn new(sigma: LowPoly, tau_tilde: LowPoly, sigma_tilde: LowPoly) -> Result<Self> {
        for p in [sigma, tau_tilde, sigma_tilde] {
            if ![p.c0, p.c1, p.c2].iter().all(|c| c.is_finite()) {
                return Err(Error::InvalidInput(format!("non-finite coefficient in {p:?}")));
            }
        }
        if tau_tilde.degree() > 1 {
            return Err(Error::InvalidInput("tau_tilde must have degree <= 1".into()));
        }
        if sigma.max_abs_coeff() <= DEGREE_EPS {
            return Err(Error::InvalidInput("sigma must not vanish identically".into()));
        }
        Ok(Self {
            sigma,
            tau_tilde,
            sigma_tilde,
        })
    }

    /// The radial family `σ = s`, `τ̃ = 2`, `σ̃ = −q + w·s − z·s²`.
    pub fn radial(q: f64, w: f64, z: f64) -> Result<Self> {
        Self::new(
            LowPoly::linear(0.0, 1.0),
            LowPoly::constant(2.0),
            LowPoly::new(-q, w, -z),
        )
    }

    pub fn sigma(&self) -> LowPoly {
        self.sigma
    }

    pub fn tau_tilde(&self) -> LowPoly {
        self.tau_tilde
    }

    pub fn sigma_tilde(&self) -> LowPoly {
        self.sigma_tilde
    }

    /// `(σ′ − τ̃)/2`, the part of π outside the square root.
    pub fn half_drift(&self) -> LowPoly {
        (self.sigma.derivative() - self.tau_tilde).scale(0.5)
    }

    /// `((σ′ − τ̃)/2)² − σ̃ + kσ`.
    pub fn under_root(&self, k: f64) -> LowPoly {
        let g = self.half_drift();
        g * g - self.sigma_tilde + self.sigma.scale(k)
    }

    /// Discriminant (in `s`) of the quadratic under the root.
    pub fn under_root_discriminant(&self, k: f64) -> f64 {
        let p = self.under_root(k);
        p.c1 * p.c1 - 4.0 * p.c2 * p.c0
    }

    fn square_tolerance(&self, k: f64) -> f64 {
        let p = self.under_root(k);
        SQUARE_TOL * 1f64.max(p.c1 * p.c1).max((4.0 * p.c2 * p.c0).abs())
    }

    /// Coefficients `[A, B, C]` of `disc(k) = A·k² + B·k + C`.
    fn discriminant_in_k(&self) -> [f64; 3] {
        let g = self.half_drift();
        let base = g * g - self.sigma_tilde;
        let s = self.sigma;
        [
            s.c1 * s.c1 - 4.0 * s.c2 * s.c0,
            2.0 * base.c1 * s.c1 - 4.0 * (base.c2 * s.c0 + base.c0 * s.c2),
            base.c1 * base.c1 - 4.0 * base.c2 * base.c0,
        ]
    }

    /// Every real `k` that turns the under-root quadratic into a perfect
    /// square, ascending.
    pub fn k_candidates(&self) -> Result<Vec<f64>> {
        let [a, b, c] = self.discriminant_in_k();
        let scale = a.abs().max(b.abs()).max(c.abs());
        let mut ks = if a.abs() <= DEGREE_EPS * scale.max(1.0) && b.abs() <= DEGREE_EPS * scale.max(1.0) {
            if c.abs() > SQUARE_TOL * scale.max(1.0) {
                return Err(Error::NoBranch("under-root quadratic is never a perfect square".into()));
            }
            // disc(k) ≡ 0: the under-root part is a perfect square for every
            // admissible k. Take the k that zeroes its lowest k-dependent
            // coefficient.
            let base = self.under_root(0.0);
            let s = self.sigma;
            let k = if s.c0.abs() > DEGREE_EPS {
                -base.c0 / s.c0
            } else if s.c1.abs() > DEGREE_EPS {
                -base.c1 / s.c1
            } else {
                -base.c2 / s.c2
            };
            vec![k]
        } else {
            let roots = quadratic_roots(if a.abs() <= DEGREE_EPS * scale { 0.0 } else { a }, b, c)
                .map_err(|e| Error::NoBranch(e.to_string()))?;
            roots
                .into_iter()
                .filter(|z| z.im.abs() <= 1e-9 * (1.0 + z.re.abs()))
                .map(|z| z.re)
                .collect()
        };
        if ks.is_empty() {
            return Err(Error::NoBranch(
                "no real k makes the under-root part a perfect square".into(),
            ));
        }

        // One Newton step on disc(k) = 0.
        for k in ks.iter_mut() {
            let d = (a * *k + b) * *k + c;
            let dd = 2.0 * a * *k + b;
            if dd != 0.0 {
                let next = *k - d / dd;
                if next.is_finite() && ((a * next + b) * next + c).abs() <= d.abs() {
                    *k = next;
                }
            }
        }
        ks.sort_by(f64::total_cmp);
        ks.dedup_by(|x, y| (*x - *y).abs() <= 1e-12 * (1.0 + x.abs()));
        Ok(ks)
    }

    /// The sign branches of π at a certified `k`.
    pub fn branches(&self, k: f64) -> Result<Vec<NUBranch>> {
        let disc = self.under_root_discriminant(k);
        if !k.is_finite() || disc.abs() > self.square_tolerance(k) {
            return Err(Error::InvalidK { k, disc });
        }
        let p = self.under_root(k);
        let tol = self.square_tolerance(k);
        // (α s + β)² = p
        let flat = DEGREE_EPS * p.max_abs_coeff().max(1.0);
        let (alpha, beta) = if p.c2 > flat {
            let alpha = p.c2.sqrt();
            (alpha, p.c1 / (2.0 * alpha))
        } else if p.c2 >= -flat {
            if p.c0 < -tol {
                return Err(Error::NoBranch(format!(
                    "under-root constant {} is negative at k = {k}",
                    p.c0
                )));
            }
            (0.0, p.c0.max(0.0).sqrt())
        } else {
            return Err(Error::NoBranch(format!(
                "under-root quadratic opens downward (leading {}) at k = {k}",
                p.c2
            )));
        };

        let root = LowPoly::linear(beta, alpha);
        let g = self.half_drift();
        let signs: &[i8] = if alpha == 0.0 && beta == 0.0 { &[1] } else { &[-1, 1] };
        Ok(signs
            .iter()
            .map(|&sign| {
                let pi = g + root.scale(sign as f64);
                let tau = self.tau_tilde + pi.scale(2.0);
                NUBranch {
                    k,
                    pi,
                    sign,
                    tau,
                    lambda_tilde: k + pi.slope(),
                    physical: tau.slope() < 0.0,
                }
            })
            .collect())
    }

    /// All branches for all candidate `k`, ordered by `k` then sign.
    pub fn all_branches(&self) -> Result<Vec<NUBranch>> {
        let mut out = Vec::new();
        for k in self.k_candidates()? {
            out.extend(self.branches(k)?);
        }
        Ok(out)
    }

    /// `σ̄ = σ̃ + π² + π(τ̃ − σ′) + π′σ`; equals `λ̃·σ` on a valid branch.
    pub fn sigma_bar(&self, branch: &NUBranch) -> LowPoly {
        let pi = branch.pi;
        self.sigma_tilde + pi * pi + pi * (self.tau_tilde - self.sigma.derivative()) + self.sigma.scale(pi.slope())
    }

    /// `λ̃ₙ = −nτ′ − n(n−1)σ″/2`.
    pub fn lambda_n(&self, branch: &NUBranch, n: usize) -> f64 {
        let n = n as f64;
        -n * branch.tau.slope() - 0.5 * n * (n - 1.0) * self.sigma.curvature()
    }

    pub fn quantize(&self, branch: &NUBranch, n: usize) -> QuantizationEquation {
        QuantizationEquation {
            n,
            lambda_tilde: branch.lambda_tilde,
            lambda_n: self.lambda_n(branch, n),
        }
    }
}

/// One `(k, π, τ, λ̃)` solution branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NUBranch {
    pub k: f64,
    pub pi: LowPoly,
    /// Sign in front of the square root: `π = (σ′ − τ̃)/2 + sign·(αs + β)`, `α ≥ 0`.
    pub sign: i8,
    pub tau: LowPoly,
    pub lambda_tilde: f64,
    /// `τ′ < 0`.
    pub physical: bool,
}

/// `λ̃ = λ̃ₙ`, with `λ̃ = k + π′` on the left and the polynomial-solution
/// condition on the right.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantizationEquation {
    pub n: usize,
    pub lambda_tilde: f64,
    pub lambda_n: f64,
}

impl QuantizationEquation {
    pub fn residual(&self) -> f64 {
        self.lambda_tilde - self.lambda_n
    }
}

/// `f(s) = s^power · exp(rate·s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormFactor {
    pub power: f64,
    pub rate: f64,
}

impl ClosedFormFactor {
    pub fn eval(&self, s: f64) -> f64 {
        let base = if self.power == 0.0 { 1.0 } else { s.powf(self.power) };
        base * (self.rate * s).exp()
    }
}

fn linear_through_origin(sigma: LowPoly) -> Result<f64> {
    if sigma.c0.abs() > DEGREE_EPS || sigma.c2.abs() > DEGREE_EPS || sigma.c1.abs() <= DEGREE_EPS {
        return Err(Error::UnsupportedSigma);
    }
    Ok(sigma.c1)
}

/// Solves `φ′/φ = π/σ` for `σ = c·s`.
pub fn phi_factor(branch: &NUBranch, sigma: LowPoly) -> Result<ClosedFormFactor> {
    let c = linear_through_origin(sigma)?;
    Ok(ClosedFormFactor {
        power: branch.pi.c0 / c,
        rate: branch.pi.c1 / c,
    })
}

/// Solves `ρ′/ρ = (τ − σ′)/σ` for `σ = c·s`.
pub fn rho_weight(branch: &NUBranch, sigma: LowPoly) -> Result<ClosedFormFactor> {
    let c = linear_through_origin(sigma)?;
    let num = branch.tau - sigma.derivative();
    Ok(ClosedFormFactor {
        power: num.c0 / c,
        rate: num.c1 / c,
    })
}
