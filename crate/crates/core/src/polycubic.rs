//! Closed-form roots of real quadratics and cubics.
//!
//! Cubics go through the depressed form `y³ + F·y + H = 0` (with
//! `r = y + shift`) and Cardano's formula
//!
//! ```text
//! roots = { -a - b,  -a·ω² - b·ω,  -a·ω - b·ω² },   ω = exp(2πi/3)
//! 2a³ = H + sqrt(H² + 4F³/27),   2b³ = H - sqrt(H² + 4F³/27)
//! ```
//!
//! The pair `(a, b)` is tied by `a·b = -F/3`, so `b` is derived from `a`
//! instead of taking an independent cube root.

use num_complex::Complex64;

use crate::error::{ensure_finite, Error, Result};

/// `a3·r³ + a2·r² + a1·r + a0` with `a3 ≠ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealCubic {
    a3: f64,
    a2: f64,
    a1: f64,
    a0: f64,
}

impl RealCubic {
    pub fn new(a3: f64, a2: f64, a1: f64, a0: f64) -> Result<Self> {
        for (name, x) in [("a3", a3), ("a2", a2), ("a1", a1), ("a0", a0)] {
            ensure_finite(name, x)?;
        }
        if a3 == 0.0 {
            return Err(Error::InvalidInput(
                "leading coefficient a3 is zero; not a cubic".into(),
            ));
        }
        Ok(Self { a3, a2, a1, a0 })
    }

    /// Coefficients ordered from the cubic term down.
    pub fn coefficients(&self) -> [f64; 4] {
        [self.a3, self.a2, self.a1, self.a0]
    }

    pub fn eval(&self, r: f64) -> f64 {
        ((self.a3 * r + self.a2) * r + self.a1) * r + self.a0
    }

    pub fn eval_complex(&self, r: Complex64) -> Complex64 {
        ((r * self.a3 + self.a2) * r + self.a1) * r + self.a0
    }

    /// Depressed form and its roots in the original variable.
    pub fn roots(&self) -> CubicRoots {
        cardano_roots(&depress(self))
    }
}

/// `y³ + f·y + h = 0` where the original variable is `r = y + shift`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DepressedCubic {
    pub f: f64,
    pub h: f64,
    pub shift: f64,
}

impl DepressedCubic {
    /// Monic coefficients `[1, b, c, d]` of the cubic in the original variable.
    pub fn monic_coefficients(&self) -> [f64; 4] {
        // (r - s)³ + F (r - s) + H
        let s = self.shift;
        [1.0, -3.0 * s, 3.0 * s * s + self.f, -s * s * s - self.f * s + self.h]
    }
}

/// Three roots of a real cubic, ordered by (real part, imaginary part).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicRoots {
    roots: [Complex64; 3],
    real: [bool; 3],
}

impl CubicRoots {
    pub fn roots(&self) -> &[Complex64; 3] {
        &self.roots
    }

    pub fn is_real(&self, i: usize) -> bool {
        self.real[i]
    }

    /// Real parts of the roots flagged real, in ascending order.
    pub fn real_roots(&self) -> Vec<f64> {
        self.roots
            .iter()
            .zip(self.real)
            .filter(|(_, is_real)| *is_real)
            .map(|(z, _)| z.re)
            .collect()
    }

    /// Monic coefficients `[1, c2, c1, c0]` of `Π (r - rootᵢ)`.
    pub fn monic_coefficients(&self) -> [Complex64; 4] {
        let [x, y, z] = self.roots;
        let one = Complex64::new(1.0, 0.0);
        [one, -(x + y + z), x * y + y * z + z * x, -(x * y * z)]
    }
}

/// Imaginary-part threshold under which a root is reported as real.
pub fn tol_imag(max_abs_root: f64) -> f64 {
    1e-9 * (1.0 + max_abs_root)
}

pub fn depress(cubic: &RealCubic) -> DepressedCubic {
    let b = cubic.a2 / cubic.a3;
    let c = cubic.a1 / cubic.a3;
    let d = cubic.a0 / cubic.a3;
    DepressedCubic {
        f: c - b * b / 3.0,
        h: 2.0 * b * b * b / 27.0 - b * c / 3.0 + d,
        shift: -b / 3.0,
    }
}

pub fn cardano_roots(d: &DepressedCubic) -> CubicRoots {
    let f = Complex64::new(d.f, 0.0);
    let h = Complex64::new(d.h, 0.0);
    let disc = h * h + f * f * f * (4.0 / 27.0);
    let mut sq = disc.sqrt();
    // Larger |H ± sqrt| for `a`; the smaller one is recovered through a·b = -F/3.
    if (h + sq).norm() < (h - sq).norm() {
        sq = -sq;
    }
    let a = ((h + sq) * 0.5).powf(1.0 / 3.0);
    let b = if a.norm() > 0.0 {
        -f / (a * 3.0)
    } else {
        ((h - sq) * 0.5).powf(1.0 / 3.0)
    };

    let omega = Complex64::new(-0.5, 3f64.sqrt() / 2.0);
    let omega2 = omega.conj();
    let shift = Complex64::new(d.shift, 0.0);
    let mut roots = [
        -a - b + shift,
        -a * omega2 - b * omega + shift,
        -a * omega - b * omega2 + shift,
    ];

    let max_abs = roots.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let tol = tol_imag(max_abs);
    let mut real = [false; 3];
    for (z, flag) in roots.iter_mut().zip(real.iter_mut()) {
        if z.im.abs() <= tol {
            z.im = 0.0;
            *flag = true;
        }
    }
    // A real cubic has either three real roots or one real root and a conjugate pair.
    if real.iter().filter(|x| **x).count() == 1 {
        let pair: Vec<usize> = (0..3).filter(|&i| !real[i]).collect();
        let (i, j) = (pair[0], pair[1]);
        let re = 0.5 * (roots[i].re + roots[j].re);
        let im = 0.5 * (roots[i].im.abs() + roots[j].im.abs());
        roots[i] = Complex64::new(re, im);
        roots[j] = Complex64::new(re, -im);
    }

    let mut idx = [0usize, 1, 2];
    idx.sort_by(|&i, &j| {
        roots[i]
            .re
            .total_cmp(&roots[j].re)
            .then(roots[i].im.total_cmp(&roots[j].im))
    });
    CubicRoots {
        roots: idx.map(|i| roots[i]),
        real: idx.map(|i| real[i]),
    }
}

/// Roots of `a·x² + b·x + c`, falling back to the linear case when `a = 0`.
pub fn quadratic_roots(a: f64, b: f64, c: f64) -> Result<Vec<Complex64>> {
    for (name, x) in [("a", a), ("b", b), ("c", c)] {
        ensure_finite(name, x)?;
    }
    if a == 0.0 {
        if b == 0.0 {
            return Err(Error::Degenerate(
                "quadratic with a = b = 0 has no roots to solve for".into(),
            ));
        }
        return Ok(vec![Complex64::new(-c / b, 0.0)]);
    }
    let disc = b * b - 4.0 * a * c;
    let mut roots = if disc >= 0.0 {
        let sq = disc.sqrt();
        // q = -(b + sign(b)·sqrt(disc))/2 avoids cancellation.
        let q = -0.5 * (b + b.signum() * sq);
        if q == 0.0 {
            // b = 0 and disc = 0, so c = 0: double root at the origin.
            vec![Complex64::new(0.0, 0.0); 2]
        } else {
            vec![Complex64::new(q / a, 0.0), Complex64::new(c / q, 0.0)]
        }
    } else {
        let re = -b / (2.0 * a);
        let im = (-disc).sqrt() / (2.0 * a.abs());
        vec![Complex64::new(re, im), Complex64::new(re, -im)]
    };
    roots.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    Ok(roots)
}

/// All roots of a real polynomial of degree at most 3, coefficients given
/// from the highest power down. Leading zeros are stripped first.
pub fn low_degree_roots(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let first = coeffs.iter().position(|&c| c != 0.0);
    let trimmed = match first {
        Some(i) => &coeffs[i..],
        None => return Err(Error::Degenerate("zero polynomial".into())),
    };
    match trimmed.len() {
        1 => Ok(Vec::new()),
        2 => quadratic_roots(0.0, trimmed[0], trimmed[1]),
        3 => quadratic_roots(trimmed[0], trimmed[1], trimmed[2]),
        4 => {
            let cubic = RealCubic::new(trimmed[0], trimmed[1], trimmed[2], trimmed[3])?;
            Ok(cubic.roots().roots().to_vec())
        }
        n => Err(Error::InvalidInput(format!(
            "degree {} exceeds the closed-form limit of 3",
            n - 1
        ))),
    }
}

/// Horner evaluation with coefficients from the highest power down.
pub fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().fold(0.0, |acc, &c| acc * x + c)
}
