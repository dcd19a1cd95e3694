//! Inverse-polynomial potentials `V(r) = A₀ + Σₕ A₋ₕ r⁻ʰ`.
//!
//! Besides evaluation this module locates the zeros and extrema of `V` and
//! builds the second-order expansion that turns the radial equation into
//! the exactly solvable effective form `q/r² − w/r + z_pot`.

use std::fmt;

use crate::error::{ensure_finite, Error, Result};
use crate::polycubic::low_degree_roots;

/// `A₀ + A₋₁/r + A₋₂/r² + … + A₋H/r^H`.
#[derive(Debug, Clone, PartialEq)]
pub struct InversePolyPotential {
    a0: f64,
    inv_coeffs: Vec<f64>,
}

impl InversePolyPotential {
    /// `inv_coeffs[i]` multiplies `r^-(i+1)`. Trailing zeros are dropped,
    /// keeping at least one entry.
    pub fn new(a0: f64, inv_coeffs: Vec<f64>) -> Result<Self> {
        ensure_finite("A0", a0)?;
        for (i, c) in inv_coeffs.iter().enumerate() {
            ensure_finite(&format!("A-{}", i + 1), *c)?;
        }
        let mut inv_coeffs = inv_coeffs;
        while inv_coeffs.len() > 1 && inv_coeffs.last() == Some(&0.0) {
            inv_coeffs.pop();
        }
        if inv_coeffs.is_empty() {
            inv_coeffs.push(0.0);
        }
        Ok(Self { a0, inv_coeffs })
    }

    /// Parses the flat layout `[A₀, A₋₁, A₋₂, …]`.
    pub fn from_flat(coeffs: &[f64]) -> Result<Self> {
        match coeffs.split_first() {
            Some((a0, rest)) => Self::new(*a0, rest.to_vec()),
            None => Err(Error::InvalidInput("empty coefficient list".into())),
        }
    }

    pub fn a0(&self) -> f64 {
        self.a0
    }

    pub fn inv_coeffs(&self) -> &[f64] {
        &self.inv_coeffs
    }

    pub fn h_max(&self) -> usize {
        self.inv_coeffs.len()
    }

    /// `A₋ₕ`, zero beyond `h_max`. `coeff(0)` is `A₀`.
    pub fn coeff(&self, h: usize) -> f64 {
        if h == 0 {
            self.a0
        } else {
            self.inv_coeffs.get(h - 1).copied().unwrap_or(0.0)
        }
    }

    /// `[A₀, A₋₁, …]`.
    pub fn flat(&self) -> Vec<f64> {
        std::iter::once(self.a0)
            .chain(self.inv_coeffs.iter().copied())
            .collect()
    }

    /// The same potential with `A₀` replaced.
    pub fn with_a0(&self, a0: f64) -> Result<Self> {
        Self::new(a0, self.inv_coeffs.clone())
    }

    pub fn evaluate(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(Error::Domain(format!("V(r) needs r > 0, got {r}")));
        }
        Ok(self.value(r))
    }

    pub(crate) fn value(&self, r: f64) -> f64 {
        let u = 1.0 / r;
        let tail = self.inv_coeffs.iter().rev().fold(0.0, |acc, &c| (acc + c) * u);
        self.a0 + tail
    }

    /// `dV/dr = −Σ h A₋ₕ r^-(h+1)`.
    pub fn derivative(&self, r: f64) -> f64 {
        let u = 1.0 / r;
        let s = self
            .inv_coeffs
            .iter()
            .enumerate()
            .rev()
            .fold(0.0, |acc, (i, &c)| (acc + (i + 1) as f64 * c) * u);
        -s * u
    }

    /// `|A₀| + Σ |A₋ₕ| r⁻ʰ`, the magnitude scale for residual checks of `V`.
    pub fn value_scale(&self, r: f64) -> f64 {
        let u = 1.0 / r;
        self.a0.abs() + self.inv_coeffs.iter().rev().fold(0.0, |acc, &c| (acc + c.abs()) * u)
    }

    /// Magnitude scale for residual checks of `V′`.
    pub fn derivative_scale(&self, r: f64) -> f64 {
        let u = 1.0 / r;
        self.inv_coeffs
            .iter()
            .enumerate()
            .rev()
            .fold(0.0, |acc, (i, &c)| (acc + (i + 1) as f64 * c.abs()) * u)
            * u
    }

    /// Pointwise sum of two potentials.
    pub fn add(&self, other: &Self) -> Result<Self> {
        let n = self.h_max().max(other.h_max());
        let inv = (1..=n).map(|h| self.coeff(h) + other.coeff(h)).collect();
        Self::new(self.a0 + other.a0, inv)
    }
}

impl fmt::Display for InversePolyPotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.a0)?;
        for (i, c) in self.inv_coeffs.iter().enumerate() {
            write!(f, " + {}/r^{}", c, i + 1)?;
        }
        Ok(())
    }
}

/// Named potential families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Preset {
    /// `α/r + A/r² + B/r³ + C/r⁴`.
    Magnetic { alpha: f64, a: f64, b: f64, c: f64 },
    /// `k(k+1)/r² + 2ε(k+1)/r³ + 1/r⁴`, `k = ±(j + ½)`, `ε = ±1`.
    Neutrino { k: i32, eps: i32 },
    /// `α/r + ℓ(ℓ+1)/r²`.
    Coulomb { alpha: f64, ell: u32 },
}

impl Preset {
    pub const NAMES: [&'static str; 3] = ["magnetic", "neutrino", "coulomb"];

    pub fn name(&self) -> &'static str {
        match self {
            Preset::Magnetic { .. } => "magnetic",
            Preset::Neutrino { .. } => "neutrino",
            Preset::Coulomb { .. } => "coulomb",
        }
    }

    pub fn build(&self) -> Result<InversePolyPotential> {
        match *self {
            Preset::Magnetic { alpha, a, b, c } => InversePolyPotential::new(0.0, vec![alpha, a, b, c]),
            Preset::Neutrino { k, eps } => {
                if k == 0 {
                    return Err(Error::InvalidInput(
                        "neutrino: k = ±(j + 1/2) with half-integer j must be a nonzero integer".into(),
                    ));
                }
                if eps != 1 && eps != -1 {
                    return Err(Error::InvalidInput(format!(
                        "neutrino: eps must be +1 or -1, got {eps}"
                    )));
                }
                let k = k as f64;
                let eps = eps as f64;
                InversePolyPotential::new(0.0, vec![0.0, k * (k + 1.0), 2.0 * eps * (k + 1.0), 1.0])
            }
            Preset::Coulomb { alpha, ell } => {
                let l = ell as f64;
                InversePolyPotential::new(0.0, vec![alpha, l * (l + 1.0)])
            }
        }
    }
}

/// Builds a preset by name from optional parameters.
pub fn preset(
    name: &str,
    alpha: Option<f64>,
    abc: [Option<f64>; 3],
    k: Option<i32>,
    eps: Option<i32>,
    ell: Option<u32>,
) -> Result<InversePolyPotential> {
    let missing = |p: &str| Error::InvalidInput(format!("preset `{name}` requires `{p}`"));
    let p = match name {
        "magnetic" => Preset::Magnetic {
            alpha: alpha.unwrap_or(0.0),
            a: abc[0].unwrap_or(0.0),
            b: abc[1].unwrap_or(0.0),
            c: abc[2].unwrap_or(0.0),
        },
        "neutrino" => Preset::Neutrino {
            k: k.ok_or_else(|| missing("k"))?,
            eps: eps.ok_or_else(|| missing("eps"))?,
        },
        "coulomb" => Preset::Coulomb {
            alpha: alpha.ok_or_else(|| missing("alpha"))?,
            ell: ell.unwrap_or(0),
        },
        other => return Err(Error::UnknownPreset(other.to_string())),
    };
    p.build()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtremumKind {
    Minimum,
    Maximum,
    Inflection,
}

impl ExtremumKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExtremumKind::Minimum => "minimum",
            ExtremumKind::Maximum => "maximum",
            ExtremumKind::Inflection => "inflection",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    pub r: f64,
    pub value: f64,
    pub kind: ExtremumKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LandscapeMethod {
    ClosedFormCubic,
    NumericBracketing,
}

impl LandscapeMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            LandscapeMethod::ClosedFormCubic => "closed-form-cubic",
            LandscapeMethod::NumericBracketing => "numeric-bracketing",
        }
    }
}

/// Positive zeros and extrema of a potential, sorted by `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct LandscapeReport {
    pub zeros: Vec<f64>,
    pub extrema: Vec<Extremum>,
    pub method: LandscapeMethod,
}

const RESIDUAL_TOL: f64 = 1e-8;
// Roots this close to the real axis are Newton-polished before acceptance.
const NEAR_REAL: f64 = 1e-6;

pub fn landscape(p: &InversePolyPotential) -> LandscapeReport {
    let (zeros, critical, method) = if p.a0 == 0.0 && p.h_max() <= 4 {
        // V·r⁴ = A₋₁r³ + A₋₂r² + A₋₃r + A₋₄,  −V′·r⁵ = A₋₁r³ + 2A₋₂r² + 3A₋₃r + 4A₋₄
        let c = |h: usize| p.coeff(h);
        let zero_poly = [c(1), c(2), c(3), c(4)];
        let slope_poly = [c(1), 2.0 * c(2), 3.0 * c(3), 4.0 * c(4)];
        let zeros = positive_real_roots(&zero_poly, |r| p.value(r), |r| p.value_scale(r));
        let crit = positive_real_roots(&slope_poly, |r| p.derivative(r), |r| p.derivative_scale(r));
        (zeros, crit, LandscapeMethod::ClosedFormCubic)
    } else {
        let zeros = bracket_roots(|r| p.value(r));
        let crit = bracket_roots(|r| p.derivative(r));
        (zeros, crit, LandscapeMethod::NumericBracketing)
    };

    let extrema = critical
        .into_iter()
        .map(|r| Extremum {
            r,
            value: p.value(r),
            kind: classify(p, r),
        })
        .collect();
    LandscapeReport { zeros, extrema, method }
}

fn classify(p: &InversePolyPotential, r: f64) -> ExtremumKind {
    let step = 1e-5 * r;
    let second = (p.value(r + step) - 2.0 * p.value(r) + p.value(r - step)) / (step * step);
    // Roundoff floor of the central difference, relative to the local magnitude.
    let noise = 1e-6 * p.value_scale(r) / (r * r);
    if second > noise {
        ExtremumKind::Minimum
    } else if second < -noise {
        ExtremumKind::Maximum
    } else {
        ExtremumKind::Inflection
    }
}

/// Positive real roots of a polynomial (highest power first), deduplicated
/// and checked against the residual `f(r) ≤ 1e−8·scale(r)`.
fn positive_real_roots(poly: &[f64], f: impl Fn(f64) -> f64, scale: impl Fn(f64) -> f64) -> Vec<f64> {
    let Ok(roots) = low_degree_roots(poly) else {
        return Vec::new();
    };
    let dpoly: Vec<f64> = {
        let n = poly.len() - 1;
        poly[..n].iter().enumerate().map(|(i, c)| c * (n - i) as f64).collect()
    };
    let eval = |c: &[f64], x: f64| c.iter().fold(0.0, |acc, &k| acc * x + k);

    let mut out: Vec<f64> = Vec::new();
    for z in roots {
        if z.im.abs() > NEAR_REAL * (1.0 + z.re.abs()) || z.re <= 0.0 {
            continue;
        }
        let mut r = z.re;
        for _ in 0..3 {
            let d = eval(&dpoly, r);
            if d == 0.0 {
                break;
            }
            let next = r - eval(poly, r) / d;
            if next > 0.0 && eval(poly, next).abs() < eval(poly, r).abs() {
                r = next;
            } else {
                break;
            }
        }
        if f(r).abs() > RESIDUAL_TOL * scale(r) {
            continue;
        }
        if !out.iter().any(|&x| (x - r).abs() <= 1e-6 * r) {
            out.push(r);
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

/// Sign changes on a log-spaced grid over `[1e−4, 1e4]`, refined by bisection.
fn bracket_roots(f: impl Fn(f64) -> f64) -> Vec<f64> {
    const POINTS: usize = 4000;
    let (lo, hi) = (1e-4f64.ln(), 1e4f64.ln());
    let grid: Vec<f64> = (0..=POINTS)
        .map(|i| (lo + (hi - lo) * i as f64 / POINTS as f64).exp())
        .collect();
    let mut out = Vec::new();
    let mut prev = (grid[0], f(grid[0]));
    for &r in &grid[1..] {
        let fr = f(r);
        if fr == 0.0 {
            out.push(r);
        } else if prev.1 != 0.0 && prev.1.signum() != fr.signum() {
            out.push(bisect(&f, prev.0, r, prev.1));
        }
        prev = (r, fr);
    }
    out
}

fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    while (b - a) > 1e-12 * b {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Coefficients of the effective equation `U″ + [λ² − (q/r² − w/r + z_pot)]U = 0`
/// obtained by expanding the `h ≥ 3` inverse powers about `r0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionTriple {
    pub q: f64,
    pub w: f64,
    pub z_pot: f64,
    pub r0: f64,
}

impl ExpansionTriple {
    /// `q/r² − w/r + z_pot`.
    pub fn effective_potential(&self, r: f64) -> f64 {
        self.q / (r * r) - self.w / r + self.z_pot
    }
}

pub fn expansion_coeffs(p: &InversePolyPotential, r0: f64) -> Result<ExpansionTriple> {
    if !(r0 > 0.0 && r0.is_finite()) {
        return Err(Error::Domain(format!("expansion point r0 must be > 0, got {r0}")));
    }
    let mut q = p.coeff(2);
    let mut w = -p.coeff(1);
    let mut z_pot = p.a0;
    for h in 1..=p.h_max().saturating_sub(2) {
        let a = p.coeff(h + 2);
        let hf = h as f64;
        let r0h = r0.powi(h as i32);
        q += 0.5 * (hf + 2.0) * (hf + 1.0) * a / r0h;
        w += hf * (hf + 2.0) * a / (r0h * r0);
        z_pot += 0.5 * hf * (hf + 1.0) * a / (r0h * r0 * r0);
    }
    Ok(ExpansionTriple { q, w, z_pot, r0 })
}

/// Innermost local minimum of `V`, else its innermost positive zero.
pub fn auto_r0(p: &InversePolyPotential) -> Result<f64> {
    let report = landscape(p);
    report
        .extrema
        .iter()
        .find(|e| e.kind == ExtremumKind::Minimum)
        .map(|e| e.r)
        .or_else(|| report.zeros.first().copied())
        .ok_or(Error::NoStructure)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pot(a0: f64, inv: &[f64]) -> InversePolyPotential {
        InversePolyPotential::new(a0, inv.to_vec()).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(pot(0.0, &[-1.0]).evaluate(2.0).unwrap(), -0.5);
        assert_eq!(pot(0.0, &[0.0, 1.0, -2.0, 1.0]).evaluate(1.0).unwrap(), 0.0);
        let nu = Preset::Neutrino { k: 1, eps: 1 }.build().unwrap();
        assert_eq!(nu.evaluate(1.0).unwrap(), 7.0);
        assert!(matches!(nu.evaluate(0.0), Err(Error::Domain(_))));
        assert!(matches!(nu.evaluate(-1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let p = pot(0.3, &[-1.0, 1.0, 0.1, 0.01, -0.002]);
        for r in [0.3, 1.0, 2.7, 10.0] {
            let h = 1e-6 * r;
            let fd = (p.value(r + h) - p.value(r - h)) / (2.0 * h);
            assert!((fd - p.derivative(r)).abs() < 1e-7 * p.derivative_scale(r));
        }
    }

    #[test]
    fn rejects_non_finite() {
        assert!(InversePolyPotential::new(f64::NAN, vec![1.0]).is_err());
        assert!(InversePolyPotential::new(0.0, vec![1.0, f64::INFINITY]).is_err());
        assert!(InversePolyPotential::from_flat(&[]).is_err());
    }

    #[test]
    fn presets() {
        let m = Preset::Magnetic {
            alpha: -1.0,
            a: 1.0,
            b: 0.1,
            c: 0.01,
        }
        .build()
        .unwrap();
        assert_eq!(m.inv_coeffs(), &[-1.0, 1.0, 0.1, 0.01]);
        let n = Preset::Neutrino { k: 1, eps: 1 }.build().unwrap();
        assert_eq!(n.inv_coeffs(), &[0.0, 2.0, 4.0, 1.0]);
        let c = Preset::Coulomb { alpha: -1.0, ell: 0 }.build().unwrap();
        assert_eq!(c.inv_coeffs(), &[-1.0]);
        assert_eq!(c.h_max(), 1);

        assert!(Preset::Neutrino { k: 0, eps: 1 }.build().is_err());
        assert!(Preset::Neutrino { k: 1, eps: 2 }.build().is_err());
        assert!(matches!(
            preset("yukawa", None, [None; 3], None, None, None),
            Err(Error::UnknownPreset(_))
        ));
        assert!(preset("neutrino", None, [None; 3], Some(1), None, None).is_err());
        assert_eq!(
            preset("coulomb", Some(-1.0), [None; 3], None, None, Some(1))
                .unwrap()
                .inv_coeffs(),
            &[-1.0, 2.0]
        );
    }

    #[test]
    fn landscape_double_well_fixture() {
        // V = (r − 1)²/r⁴, V′ = −2(r − 1)(r − 2)/r⁵
        let rep = landscape(&pot(0.0, &[0.0, 1.0, -2.0, 1.0]));
        assert_eq!(rep.method, LandscapeMethod::ClosedFormCubic);
        assert_eq!(rep.zeros.len(), 1);
        assert!((rep.zeros[0] - 1.0).abs() < 1e-8);
        assert_eq!(rep.extrema.len(), 2);
        let (lo, hi) = (rep.extrema[0], rep.extrema[1]);
        assert!((lo.r - 1.0).abs() < 1e-8 && lo.value.abs() < 1e-8);
        assert_eq!(lo.kind, ExtremumKind::Minimum);
        assert!((hi.r - 2.0).abs() < 1e-8 && (hi.value - 0.0625).abs() < 1e-8);
        assert_eq!(hi.kind, ExtremumKind::Maximum);
    }

    #[test]
    fn landscape_coulomb_is_empty() {
        let rep = landscape(&Preset::Coulomb { alpha: -1.0, ell: 0 }.build().unwrap());
        assert!(rep.zeros.is_empty() && rep.extrema.is_empty());
    }

    #[test]
    fn landscape_neutrino_minus() {
        let p = Preset::Neutrino { k: 1, eps: -1 }.build().unwrap();
        let rep = landscape(&p);
        let s = 0.5f64.sqrt();
        assert_eq!(rep.zeros.len(), 2);
        assert!((rep.zeros[0] - (1.0 - s)).abs() < 1e-12);
        assert!((rep.zeros[1] - (1.0 + s)).abs() < 1e-12);
        for z in rep.zeros {
            assert!(p.value(z).abs() < 1e-8 * p.value_scale(z));
        }
    }

    #[test]
    fn landscape_bracketing_fallback() {
        // A₀ ≠ 0 forces the numeric path: V = −1 + 1/r² has a zero at r = 1.
        let rep = landscape(&pot(-1.0, &[0.0, 1.0]));
        assert_eq!(rep.method, LandscapeMethod::NumericBracketing);
        assert_eq!(rep.zeros.len(), 1);
        assert!((rep.zeros[0] - 1.0).abs() < 1e-10);

        // Degree-5 tail: the shifted double well still has its maximum at r = 2.
        let rep = landscape(&pot(0.5, &[0.0, 1.0, -2.0, 1.0]));
        assert_eq!(rep.extrema.len(), 2);
        assert!((rep.extrema[1].r - 2.0).abs() < 1e-10);
        assert_eq!(rep.extrema[1].kind, ExtremumKind::Maximum);
    }

    #[test]
    fn expansion_examples() {
        let t = expansion_coeffs(&pot(0.0, &[0.0, 0.0, 1.0]), 1.0).unwrap();
        assert_eq!((t.q, t.w, t.z_pot), (3.0, 3.0, 1.0));

        for r0 in [0.5, 1.0, 7.0] {
            let t = expansion_coeffs(&pot(0.0, &[-0.7, 6.0]), r0).unwrap();
            assert_eq!((t.q, t.w, t.z_pot), (6.0, 0.7, 0.0));
        }

        let c = 0.37;
        let t = expansion_coeffs(&pot(0.0, &[0.0, 0.0, 0.0, c]), 2.0).unwrap();
        assert!((t.q - 6.0 * c / 4.0).abs() < 1e-15);
        assert!((t.w - 8.0 * c / 8.0).abs() < 1e-15);
        assert!((t.z_pot - 3.0 * c / 16.0).abs() < 1e-15);

        assert!(matches!(
            expansion_coeffs(&pot(0.0, &[1.0]), 0.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn auto_r0_examples() {
        assert!((auto_r0(&pot(0.0, &[0.0, 1.0, -2.0, 1.0])).unwrap() - 1.0).abs() < 1e-10);
        let coulomb = Preset::Coulomb { alpha: -1.0, ell: 0 }.build().unwrap();
        assert_eq!(auto_r0(&coulomb), Err(Error::NoStructure));
        let nu = Preset::Neutrino { k: 1, eps: 1 }.build().unwrap();
        assert_eq!(auto_r0(&nu), Err(Error::NoStructure));
        // No minimum but a zero: 1/r − 1/r² crosses zero at r = 1, peaks at r = 2.
        assert!((auto_r0(&pot(0.0, &[1.0, -1.0])).unwrap() - 1.0).abs() < 1e-12);
    }
}
