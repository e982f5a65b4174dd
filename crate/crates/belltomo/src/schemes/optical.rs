//! Optical (homodyne) tomograms and correlations of the GHZ-type state,
//! with the threshold binning Y = [x, inf), Z = (-inf, x).

use std::f64::consts::PI;

use super::GhzState;
use crate::error::Result;
use crate::quad;
use crate::specfun::erf;

/// Quadrature tomogram of the GHZ-type state at quadrature values `xs`
/// and local-oscillator phases `thetas`:
///
///   p(X, theta) = [1 + 2^n prod X_i^2
///                    + 2^((n+2)/2) prod X_i cos(theta_1 + ... + theta_n)]
///                 * exp(-sum X_i^2) / (2 pi^(n/2)).
pub fn optical_tomogram(state: &GhzState, xs: &[f64], thetas: &[f64]) -> f64 {
    let n = state.parties();
    assert_eq!(xs.len(), n);
    assert_eq!(thetas.len(), n);
    let sum_sq: f64 = xs.iter().map(|x| x * x).sum();
    let prod: f64 = xs.iter().product();
    let theta_sum: f64 = thetas.iter().sum();
    let bracket = 1.0
        + (2.0f64).powi(n as i32) * prod * prod
        + (2.0f64).powf((n as f64 + 2.0) / 2.0) * prod * theta_sum.cos();
    bracket * (-sum_sq).exp() / (2.0 * PI.powf(n as f64 / 2.0))
}

/// The three threshold moments of the binned single-mode distributions:
/// a0 = -erf(x)/2, a1 = -erf(x)/2 + x exp(-x^2)/sqrt(pi),
/// b0 = exp(-x^2)/sqrt(2 pi).
pub fn optical_ab(x: f64) -> (f64, f64, f64) {
    let a0 = -0.5 * erf(x);
    let a1 = a0 + x * (-x * x).exp() / PI.sqrt();
    let b0 = (-x * x).exp() / (2.0 * PI).sqrt();
    (a0, a1, b0)
}

/// Closed-form correlation of the binned outcomes at a common threshold x:
///   E(theta) = 2^(n-1) (a0^n + a1^n) + 2^n b0^n cos(theta_1 + ... + theta_n).
pub fn optical_correlation(state: &GhzState, thetas: &[f64], x: f64) -> f64 {
    let n = state.parties() as i32;
    assert_eq!(thetas.len(), state.parties());
    let (a0, a1, b0) = optical_ab(x);
    let theta_sum: f64 = thetas.iter().sum();
    (2.0f64).powi(n - 1) * (a0.powi(n) + a1.powi(n))
        + (2.0f64).powi(n) * b0.powi(n) * theta_sum.cos()
}

/// Maximal value of the Mermin combination of optical correlations as a
/// function of the threshold x:
///
///   f_n(x) = 2^n |a0^n + a1^n| + 2^(n + (n+1)/2) |b0^n|   (n odd)
///   f_n(x) = 2^n |a0^n + a1^n| + 2^(n + n/2)     |b0^n|   (n even)
pub fn optical_fn(n: usize, x: f64) -> Result<f64> {
    if n < 2 {
        return Err(crate::error::Error::invalid(
            "the threshold scan starts at n = 2",
        ));
    }
    let (a0, a1, b0) = optical_ab(x);
    let ni = n as i32;
    let first = (2.0f64).powi(ni) * (a0.powi(ni) + a1.powi(ni)).abs();
    let cos_exp = if n % 2 == 1 {
        n as f64 + (n as f64 + 1.0) / 2.0
    } else {
        n as f64 + n as f64 / 2.0
    };
    Ok(first + (2.0f64).powf(cos_exp) * b0.powi(ni).abs())
}

/// Generic correlation path: integrate the tomogram over every signed
/// orthant of the threshold binning with adaptive quadrature and form the
/// signed sum. The Gaussian envelope confines the mass to |X| < 7 + |x|
/// far below the requested tolerance.
pub fn correlation_by_quadrature(state: &GhzState, thetas: &[f64], x: f64) -> Result<f64> {
    let n = state.parties();
    let limit = 7.0 + x.abs();
    let mut acc = 0.0;
    // Probability of each sign pattern; bit set = Z side (outcome -1).
    for code in 0..1usize << n {
        let p = orthant_probability(state, thetas, x, code, limit)?;
        let sign = if code.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * p;
    }
    Ok(acc)
}

fn orthant_probability(
    state: &GhzState,
    thetas: &[f64],
    x: f64,
    code: usize,
    limit: f64,
) -> Result<f64> {
    let n = state.parties();
    let ranges: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            if code >> (n - 1 - k) & 1 == 0 {
                (x, limit) // Y side
            } else {
                (-limit, x) // Z side
            }
        })
        .collect();
    let mut xs = vec![0.0f64; n];
    nested_integral(state, thetas, &ranges, 0, &mut xs, 1e-8)
}

fn nested_integral(
    state: &GhzState,
    thetas: &[f64],
    ranges: &[(f64, f64)],
    axis: usize,
    xs: &mut Vec<f64>,
    tol: f64,
) -> Result<f64> {
    let (a, b) = ranges[axis];
    if axis + 1 == ranges.len() {
        let q = quad::integrate(
            |x| {
                xs[axis] = x;
                optical_tomogram(state, xs, thetas)
            },
            a,
            b,
            tol,
        )?;
        Ok(q.value)
    } else {
        // Inner failures are stashed and re-raised so the closure can stay
        // infallible for the integrator.
        let mut inner_err: Option<crate::error::Error> = None;
        let q = quad::integrate(
            |x| {
                xs[axis] = x;
                let mut inner = xs.clone();
                match nested_integral(state, thetas, ranges, axis + 1, &mut inner, tol / 4.0) {
                    Ok(v) => v,
                    Err(e) => {
                        inner_err.get_or_insert(e);
                        0.0
                    }
                }
            },
            a,
            b,
            tol,
        )?;
        if let Some(e) = inner_err {
            return Err(e);
        }
        Ok(q.value)
    }
}
