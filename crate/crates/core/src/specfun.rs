//! Associated Laguerre polynomials and adaptive quadrature.

use crate::error::{Error, Result};

/// `Lₙᵃ(x)` by the upward three-term recurrence
/// `(k+1)Lₖ₊₁ = (2k + 1 + a − x)Lₖ − (k + a)Lₖ₋₁`.
pub fn laguerre(n: usize, a: f64, x: f64) -> Result<f64> {
    if !(a > -1.0) {
        return Err(Error::Domain(format!("Laguerre order must exceed -1, got {a}")));
    }
    Ok(laguerre_unchecked(n, a, x))
}

pub(crate) fn laguerre_unchecked(n: usize, a: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 1.0 + a - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + a - x) * cur - (kf + a) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Relative deviation between the Rodrigues form
/// `(1/n!) x^(−a) eˣ dⁿ/dxⁿ[x^(n+a) e^(−x)]`, differentiated numerically,
/// and [`laguerre`]. Intended as a test oracle for `n ≤ 5`.
pub fn rodrigues_check(n: usize, a: f64, x: f64) -> Result<f64> {
    rodrigues_check_scaled(n, a, 1.0, x)
}

/// As [`rodrigues_check`] but in the unscaled radial variable: the weight is
/// `r^a e^(−rate·r)` and the comparison is against `Lₙᵃ(rate·r)`.
pub fn rodrigues_check_scaled(n: usize, a: f64, rate: f64, r: f64) -> Result<f64> {
    if n > 5 {
        return Err(Error::InvalidInput(format!("rodrigues_check supports n <= 5, got {n}")));
    }
    if !(r > 0.0 && rate > 0.0) {
        return Err(Error::Domain("rodrigues_check needs r > 0 and rate > 0".into()));
    }
    let expected = laguerre(n, a, rate * r)?;
    if n == 0 {
        return Ok(0.0);
    }
    let nf = n as f64;
    let g = |t: f64| t.powf(nf + a) * (-rate * t).exp();
    let base = f64::EPSILON.powf(1.0 / (nf + 4.0)) * r.max(1.0 / rate);
    let h = base.min(r / (nf + 1.0));
    let coarse = central_nth_derivative(g, r, n, h);
    let fine = central_nth_derivative(g, r, n, 0.5 * h);
    let deriv = (4.0 * fine - coarse) / 3.0;
    let factorial: f64 = (1..=n).map(|k| k as f64).product();
    let y = deriv * r.powf(-a) * (rate * r).exp() / factorial;
    Ok((y - expected).abs() / expected.abs().max(1.0))
}

fn central_nth_derivative(g: impl Fn(f64) -> f64, x: f64, n: usize, h: f64) -> f64 {
    let mut binom = 1.0;
    let mut sum = 0.0;
    for k in 0..=n {
        let offset = (n as f64 / 2.0 - k as f64) * h;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * binom * g(x + offset);
        binom = binom * (n - k) as f64 / (k + 1) as f64;
    }
    sum / h.powi(n as i32)
}

const MAX_DEPTH: u32 = 30;

/// Adaptive composite Simpson on `[lo, hi]` to absolute tolerance `tol`.
pub fn integrate(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) || !(tol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "integrate needs finite lo < hi and tol > 0 (got [{lo}, {hi}], tol {tol})"
        )));
    }
    let m = 0.5 * (lo + hi);
    let (flo, fm, fhi) = (f(lo), f(m), f(hi));
    let whole = (hi - lo) / 6.0 * (flo + 4.0 * fm + fhi);
    simpson_step(&f, lo, hi, flo, fm, fhi, whole, tol, 0)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    if !(flm.is_finite() && frm.is_finite()) {
        return Err(Error::Integration { lo: a, hi: b });
    }
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let diff = left + right - whole;
    let roundoff = 64.0 * f64::EPSILON * (left.abs() + right.abs());
    if diff.abs() <= 15.0 * tol || diff.abs() <= roundoff {
        return Ok(left + right + diff / 15.0);
    }
    if depth >= MAX_DEPTH {
        return Err(Error::Integration { lo: a, hi: b });
    }
    Ok(simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1)?
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1)?)
}

/// Result of an integral over `[lo, ∞)` truncated at `cutoff`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailIntegral {
    pub value: f64,
    pub cutoff: f64,
}

/// `∫_lo^∞ f` for a non-negative integrand that decays at infinity. The
/// range is cut where `f` stays below `1e−16` of its running peak; `scale`
/// is a characteristic length used to start the outward scan.
pub fn integrate_decaying(f: impl Fn(f64) -> f64, lo: f64, scale: f64, tol: f64) -> Result<TailIntegral> {
    if !(scale > 0.0) {
        return Err(Error::InvalidInput(format!("scale must be positive, got {scale}")));
    }
    let cutoff = decay_cutoff(&f, lo, scale, 1e-16).ok_or(Error::Integration { lo, hi: f64::INFINITY })?;
    // Split the range so the adaptive rule sees the bulk of the integrand.
    let pieces = 16;
    let mut value = 0.0;
    for i in 0..pieces {
        let a = lo + (cutoff - lo) * i as f64 / pieces as f64;
        let b = lo + (cutoff - lo) * (i + 1) as f64 / pieces as f64;
        value += integrate(&f, a, b, tol / pieces as f64)?;
    }
    Ok(TailIntegral { value, cutoff })
}

/// First point past the peak where `|f|` drops below `rel·peak` and stays
/// there for several consecutive samples of a geometric scan.
pub(crate) fn decay_cutoff(f: impl Fn(f64) -> f64, lo: f64, scale: f64, rel: f64) -> Option<f64> {
    const RUN: usize = 12;
    let mut x = lo + 1e-3 * scale;
    let mut peak = 0.0f64;
    let mut below = 0usize;
    let mut first_below = None;
    for _ in 0..4000 {
        let v = f(x).abs();
        if !v.is_finite() {
            return None;
        }
        if v > peak {
            peak = v;
        }
        if peak > 0.0 && v < rel * peak {
            if below == 0 {
                first_below = Some(x);
            }
            below += 1;
            if below >= RUN {
                return first_below;
            }
        } else {
            below = 0;
        }
        x = lo + (x - lo) * 1.05 + 1e-3 * scale;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laguerre_examples() {
        for a in [0.0, 0.5, 7.3] {
            for x in [0.0, 1.0, 40.0] {
                assert_eq!(laguerre(0, a, x).unwrap(), 1.0);
            }
        }
        assert_eq!(laguerre(1, 0.5, 2.0).unwrap(), -0.5);
        // L₂⁰(x) = (x² − 4x + 2)/2
        assert!((laguerre(2, 0.0, 1.0).unwrap() + 0.5).abs() < 1e-15);
        assert!(matches!(laguerre(3, -1.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(laguerre(3, -2.5, 1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn rodrigues_examples() {
        assert_eq!(rodrigues_check(0, 0.3, 1.0).unwrap(), 0.0);
        assert!(rodrigues_check(1, 1.0, 0.5).unwrap() < 1e-6);
        let a = 2.0 * (2.0f64 + 0.25).sqrt();
        assert!(rodrigues_check(3, a, 1.0).unwrap() < 1e-5);
        for n in 1..=5 {
            let dev = rodrigues_check(n, 0.75, 2.5).unwrap();
            assert!(dev < 1e-5, "n = {n}: {dev}");
        }
        // The radial-variable Rodrigues form lands on the scaled argument 2√z·r.
        let (a, sqrt_z, r) = (3.0, 0.35, 1.7);
        assert!(rodrigues_check_scaled(2, a, 2.0 * sqrt_z, r).unwrap() < 1e-6);
        assert!(rodrigues_check(6, 0.0, 1.0).is_err());
    }

    #[test]
    fn integrate_examples() {
        let v = integrate(|x| x * x, 0.0, 1.0, 1e-12).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-12);

        let v = integrate(|x| x * x * (-x).exp(), 0.0, 50.0, 1e-10).unwrap();
        assert!((v - 2.0).abs() < 1e-8);

        let t = integrate_decaying(|r| (r * (-r / 2.0).exp()).powi(2), 0.0, 1.0, 1e-10).unwrap();
        assert!((t.value - 2.0).abs() < 1e-8, "{t:?}");
        assert!(t.cutoff > 30.0 && t.cutoff < 100.0);
    }

    #[test]
    fn integrate_errors() {
        assert!(integrate(|x| x, 1.0, 0.0, 1e-8).is_err());
        assert!(integrate(|x| x, 0.0, 1.0, 0.0).is_err());
        // 1/x diverges at the lower end.
        assert!(matches!(
            integrate(|x| 1.0 / x, 0.0, 1.0, 1e-12),
            Err(Error::Integration { .. })
        ));
    }
}
