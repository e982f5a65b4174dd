//! Small quadrature toolbox: an adaptive Gauss-Kronrod integrator for the
//! oracle paths and orthant integrals, Gauss-Legendre node generation for
//! the rotation-group quadrature, and uniform trapezoid nodes for periodic
//! axes.

use crate::error::{Error, Result};

/// Outcome of an adaptive integration.
#[derive(Clone, Copy, Debug)]
pub struct Quadrature {
    pub value: f64,
    /// Conservative absolute error estimate.
    pub error: f64,
    pub evaluations: usize,
}

// 7-point Gauss / 15-point Kronrod pair on [-1, 1].
const XGK: [f64; 15] = [
    -0.991455371120813,
    -0.949107912342759,
    -0.864864423359769,
    -0.741531185599394,
    -0.586087235467691,
    -0.405845151377397,
    -0.207784955007898,
    0.0,
    0.207784955007898,
    0.405845151377397,
    0.586087235467691,
    0.741531185599394,
    0.864864423359769,
    0.949107912342759,
    0.991455371120813,
];
const WGK: [f64; 15] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
    0.204432940075298,
    0.190350578064785,
    0.169004726639267,
    0.140653259715525,
    0.104790010322250,
    0.063092092629979,
    0.022935322010529,
];
const WG: [f64; 7] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
    0.381830050505119,
    0.279705391489277,
    0.129484966168870,
];

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut kronrod = 0.0;
    let mut gauss = 0.0;
    for (i, (&x, &wk)) in XGK.iter().zip(WGK.iter()).enumerate() {
        let v = f(mid + half * x);
        kronrod += wk * v;
        if i % 2 == 1 {
            gauss += WG[i / 2] * v;
        }
    }
    let value = kronrod * half;
    let err = ((kronrod - gauss) * half).abs();
    (value, err)
}

/// Hard cap on integrand evaluations per axis (2^15).
pub const MAX_EVALS_PER_AXIS: usize = 1 << 15;

/// Adaptive integration of `f` over `[a, b]` to absolute tolerance `tol`
/// by bisection of the worst subinterval.
///
/// Failure to converge within the evaluation cap is reported as an
/// accuracy error carrying the achieved bound, never silently accepted.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> Result<Quadrature> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::invalid("integration bounds must be finite"));
    }
    if a == b {
        return Ok(Quadrature {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        });
    }

    struct Segment {
        a: f64,
        b: f64,
        value: f64,
        error: f64,
    }

    let (value, error) = gk15(&mut f, a, b);
    let mut evals = 15usize;
    let mut segments = vec![Segment { a, b, value, error }];

    loop {
        let total_err: f64 = segments.iter().map(|s| s.error).sum();
        if total_err <= tol {
            return Ok(Quadrature {
                value: segments.iter().map(|s| s.value).sum(),
                error: total_err,
                evaluations: evals,
            });
        }
        if evals + 30 > MAX_EVALS_PER_AXIS {
            return Err(Error::Accuracy {
                context: format!("adaptive quadrature on [{a}, {b}] hit the evaluation cap"),
                achieved: total_err,
            });
        }
        // Split the segment with the largest error estimate.
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .expect("nonempty segment list");
        let Segment { a: sa, b: sb, .. } = segments.swap_remove(worst);
        let mid = 0.5 * (sa + sb);
        let (v1, e1) = gk15(&mut f, sa, mid);
        let (v2, e2) = gk15(&mut f, mid, sb);
        evals += 30;
        segments.push(Segment {
            a: sa,
            b: mid,
            value: v1,
            error: e1,
        });
        segments.push(Segment {
            a: mid,
            b: sb,
            value: v2,
            error: e2,
        });
    }
}

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// Legendre recurrence. Exact for polynomials of degree <= 2 nodes - 1.
pub fn gauss_legendre(nodes: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if nodes < 2 {
        return Err(Error::invalid("Gauss-Legendre rule needs at least 2 nodes"));
    }
    let n = nodes;
    let mut xs = vec![0.0f64; n];
    let mut ws = vec![0.0f64; n];
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess for the i-th root of P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            // Evaluate P_n and P_n' by upward recurrence.
            let (mut p0, mut p1) = (1.0f64, x);
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (mut p0, mut p1) = (1.0f64, x);
        for k in 2..=n {
            let k = k as f64;
            let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        xs[i] = -x;
        ws[i] = w;
        xs[n - 1 - i] = x;
        ws[n - 1 - i] = w;
    }
    Ok((xs, ws))
}

/// Uniform nodes with equal weights summing to the period; spectrally
/// accurate for smooth periodic integrands over a full period.
pub fn trapezoid_periodic(nodes: usize, period: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if nodes < 2 {
        return Err(Error::invalid("periodic rule needs at least 2 nodes"));
    }
    let h = period / nodes as f64;
    Ok((
        (0..nodes).map(|i| i as f64 * h).collect(),
        vec![h; nodes],
    ))
}
