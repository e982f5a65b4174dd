//! Deterministic maximization of Bell-expression values over tomographic
//! setting parameters: a coarse grid scan, optional seeded sampling, then
//! fixed-schedule simplex refinement from the best grid points. Includes
//! the numerical check of the cosine-sum bound attained by the Mermin
//! coefficients.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::inequalities::BellInequality;
use crate::multiindex::decode_setting;
use crate::schemes::{correlation, GhzState, PartySetting, SchemeConfig};
use crate::specfun::EulerAngles;

/// One search axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    /// Grid nodes on this axis.
    pub nodes: usize,
    /// Periodic axes spread nodes over the half-open period; bounded axes
    /// include both endpoints and clamp refinement steps.
    pub periodic: bool,
}

impl Axis {
    pub fn periodic(lo: f64, hi: f64, nodes: usize) -> Self {
        Axis {
            lo,
            hi,
            nodes,
            periodic: true,
        }
    }

    pub fn bounded(lo: f64, hi: f64, nodes: usize) -> Self {
        Axis {
            lo,
            hi,
            nodes,
            periodic: false,
        }
    }

    fn node(&self, i: usize) -> f64 {
        if self.periodic {
            self.lo + (self.hi - self.lo) * i as f64 / self.nodes as f64
        } else if self.nodes == 1 {
            0.5 * (self.lo + self.hi)
        } else {
            self.lo + (self.hi - self.lo) * i as f64 / (self.nodes - 1) as f64
        }
    }

    fn clamp(&self, x: f64) -> f64 {
        if self.periodic {
            let period = self.hi - self.lo;
            self.lo + (x - self.lo).rem_euclid(period)
        } else {
            x.clamp(self.lo, self.hi)
        }
    }
}

/// Search configuration: per-dimension boxes, grid resolution (carried by
/// the axes), refinement budget, optional extra seeded samples, seed, and
/// worker cap (0 = all available cores).
#[derive(Clone, Debug)]
pub struct SearchSpace {
    pub axes: Vec<Axis>,
    pub refine_iters: usize,
    pub extra_samples: usize,
    pub seed: u64,
    pub threads: usize,
}

impl SearchSpace {
    pub fn new(axes: Vec<Axis>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::invalid("search space needs at least one axis"));
        }
        for a in &axes {
            if !(a.lo.is_finite() && a.hi.is_finite()) || a.lo >= a.hi || a.nodes == 0 {
                return Err(Error::invalid(format!("degenerate axis {a:?}")));
            }
        }
        Ok(SearchSpace {
            axes,
            refine_iters: 500,
            extra_samples: 0,
            seed: 0,
            threads: 0,
        })
    }

    /// Default box for a scheme: spin searches (phi, psi) per setting with
    /// an 8-node phi grid for two parties and 4 nodes beyond (psi always 3
    /// nodes on [0, pi]); optical searches one phase per setting; photon
    /// number searches (re, im) per setting on [-box, box].
    pub fn for_scheme(scheme: &SchemeConfig, n: usize, grid: Option<usize>, half_width: f64) -> Result<Self> {
        use std::f64::consts::{PI, TAU};
        let mut axes = Vec::new();
        match scheme {
            SchemeConfig::Spin => {
                let g = grid.unwrap_or(if n <= 2 { 8 } else { 4 });
                for _ in 0..n {
                    for _ in 0..2 {
                        axes.push(Axis::periodic(0.0, TAU, g));
                        axes.push(Axis::bounded(0.0, PI, 3));
                    }
                }
            }
            SchemeConfig::Optical { .. } => {
                let g = grid.unwrap_or(8);
                for _ in 0..2 * n {
                    axes.push(Axis::periodic(0.0, TAU, g));
                }
            }
            SchemeConfig::PhotonNumber { .. } => {
                let g = grid.unwrap_or(3);
                for _ in 0..4 * n {
                    axes.push(Axis::bounded(-half_width, half_width, g));
                }
            }
        }
        SearchSpace::new(axes)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_extra_samples(mut self, samples: usize) -> Self {
        self.extra_samples = samples;
        self
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }

    fn dims(&self) -> usize {
        self.axes.len()
    }

    fn grid_len(&self) -> usize {
        self.axes.iter().map(|a| a.nodes).product()
    }

    fn grid_point(&self, mut idx: usize) -> Vec<f64> {
        let mut p = vec![0.0; self.dims()];
        for (k, axis) in self.axes.iter().enumerate().rev() {
            p[k] = axis.node(idx % axis.nodes);
            idx /= axis.nodes;
        }
        p
    }

    fn clamp(&self, params: &mut [f64]) {
        for (x, a) in params.iter_mut().zip(&self.axes) {
            *x = a.clamp(*x);
        }
    }
}

/// Outcome of a search. Identical configuration (including seed) yields a
/// bit-identical result.
#[derive(Clone, Debug)]
pub struct SearchResult {
    pub best_params: Vec<f64>,
    pub best_value: f64,
    pub evaluations: u64,
    pub skipped: u64,
    pub converged: bool,
}

/// Builds the two per-party settings encoded in a parameter vector.
pub fn settings_from_params(
    scheme: &SchemeConfig,
    n: usize,
    params: &[f64],
) -> Result<Vec<[PartySetting; 2]>> {
    let per_party = match scheme {
        SchemeConfig::Spin => 4,
        SchemeConfig::Optical { .. } => 2,
        SchemeConfig::PhotonNumber { .. } => 4,
    };
    if params.len() != per_party * n {
        return Err(Error::invalid(format!(
            "expected {} parameters, got {}",
            per_party * n,
            params.len()
        )));
    }
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let chunk = &params[per_party * k..per_party * (k + 1)];
        let pair = match scheme {
            SchemeConfig::Spin => [
                PartySetting::Spin(EulerAngles::new(chunk[0], chunk[1], 0.0)),
                PartySetting::Spin(EulerAngles::new(chunk[2], chunk[3], 0.0)),
            ],
            SchemeConfig::Optical { .. } => [
                PartySetting::Optical { theta: chunk[0] },
                PartySetting::Optical { theta: chunk[1] },
            ],
            SchemeConfig::PhotonNumber { .. } => [
                PartySetting::PhotonNumber {
                    alpha: num_complex::Complex64::new(chunk[0], chunk[1]),
                },
                PartySetting::PhotonNumber {
                    alpha: num_complex::Complex64::new(chunk[2], chunk[3]),
                },
            ],
        };
        out.push(pair);
    }
    Ok(out)
}

/// |sum_j a_j E(settings_j)| for the inequality's coefficient vector at
/// the settings encoded in `params`. `None` when any correlation
/// evaluation fails.
pub fn bell_value(
    scheme: &SchemeConfig,
    state: &GhzState,
    ineq: &BellInequality,
    params: &[f64],
) -> Option<f64> {
    let n = state.parties();
    let pairs = settings_from_params(scheme, n, params).ok()?;
    let mut acc = 0.0;
    for (j, &coeff) in ineq.coeffs().iter().enumerate() {
        if coeff == 0.0 {
            continue;
        }
        let digits = decode_setting(j + 1, n).ok()?;
        let settings: Vec<PartySetting> = digits
            .iter()
            .enumerate()
            .map(|(k, &jk)| pairs[k][(jk - 1) as usize])
            .collect();
        acc += coeff * correlation(scheme, state, &settings).ok()?;
    }
    Some(acc.abs())
}

/// Maximize the Bell expression of `ineq` over the setting parameters in
/// `space`: full grid scan, plus `extra_samples` seeded uniform samples,
/// then simplex refinement (reflection 1, expansion 2, contraction 0.5,
/// shrink 0.5, up to `refine_iters` iterations) from the eight best
/// starts. Reports a lower bound on the true maximum.
pub fn maximize_bell(
    scheme: &SchemeConfig,
    n: usize,
    ineq: &BellInequality,
    space: &SearchSpace,
) -> Result<SearchResult> {
    if ineq.n() != n {
        return Err(Error::invalid(format!(
            "inequality is for n = {}, search asked n = {n}",
            ineq.n()
        )));
    }
    let state = GhzState::new(n)?;
    let scheme = *scheme;
    let ineq = ineq.clone();
    let objective = move |params: &[f64]| bell_value(&scheme, &state, &ineq, params);
    search(&objective, space)
}

/// Search driver shared by the Bell maximization and the cosine-sum
/// verification.
fn search<F>(objective: &F, space: &SearchSpace) -> Result<SearchResult>
where
    F: Fn(&[f64]) -> Option<f64> + Sync,
{
    const TOP_K: usize = 8;
    let grid_len = space.grid_len();
    let total = grid_len + space.extra_samples;

    // Seeded sample coordinates are drawn up front so that threading
    // cannot reorder the stream.
    let samples: Vec<Vec<f64>> = {
        let mut rng = ChaCha20Rng::seed_from_u64(space.seed);
        (0..space.extra_samples)
            .map(|_| {
                space
                    .axes
                    .iter()
                    .map(|a| rng.gen_range(a.lo..a.hi))
                    .collect()
            })
            .collect()
    };

    let workers = if space.threads > 0 {
        space.threads
    } else {
        std::thread::available_parallelism().map_or(1, |v| v.get())
    }
    .min(total.max(1));

    // Each worker returns its local top-K (value desc, index asc) plus a
    // skip count; the merge is index-deterministic.
    let chunk = total.div_ceil(workers);
    let mut tops: Vec<(f64, usize)> = Vec::new();
    let mut skipped = 0u64;
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for w in 0..workers {
            let lo = w * chunk;
            let hi = ((w + 1) * chunk).min(total);
            let samples = &samples;
            handles.push(scope.spawn(move || {
                let mut local: Vec<(f64, usize)> = Vec::new();
                let mut skips = 0u64;
                for idx in lo..hi {
                    let point = if idx < grid_len {
                        space.grid_point(idx)
                    } else {
                        samples[idx - grid_len].clone()
                    };
                    match objective(&point) {
                        Some(v) if v.is_finite() => {
                            local.push((v, idx));
                            local.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
                            local.truncate(TOP_K);
                        }
                        _ => skips += 1,
                    }
                }
                (local, skips)
            }));
        }
        for h in handles {
            let (local, skips) = h.join().expect("search worker panicked");
            tops.extend(local);
            skipped += skips;
        }
    });
    tops.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    tops.truncate(TOP_K);
    if tops.is_empty() {
        return Err(Error::Search(
            "every scanned point failed to evaluate".into(),
        ));
    }

    let mut evaluations = total as u64;
    let mut best_params = if tops[0].1 < grid_len {
        space.grid_point(tops[0].1)
    } else {
        samples[tops[0].1 - grid_len].clone()
    };
    let mut best_value = tops[0].0;
    let mut converged = false;

    for &(_, idx) in &tops {
        let start = if idx < grid_len {
            space.grid_point(idx)
        } else {
            samples[idx - grid_len].clone()
        };
        let (params, value, evals, conv) = nelder_mead(objective, space, &start);
        evaluations += evals;
        if value > best_value || (value == best_value && params < best_params) {
            best_value = value;
            best_params = params;
            converged = conv;
        }
    }

    // Soundness: the reported value must reproduce from the reported
    // parameters.
    let check = objective(&best_params)
        .ok_or_else(|| Error::Search("best point failed re-evaluation".into()))?;
    evaluations += 1;
    if (check - best_value).abs() > 1e-12 * best_value.abs().max(1.0) {
        return Err(Error::Consistency(format!(
            "re-evaluation drift: {best_value} vs {check}"
        )));
    }

    // Report angles inside their primary period.
    space.clamp(&mut best_params);
    let final_value = objective(&best_params)
        .ok_or_else(|| Error::Search("clamped best point failed re-evaluation".into()))?;
    evaluations += 1;
    if (final_value - best_value).abs() > 1e-9 * best_value.abs().max(1.0) {
        return Err(Error::Consistency(
            "period reduction changed the objective".into(),
        ));
    }

    Ok(SearchResult {
        best_params,
        best_value,
        evaluations,
        skipped,
        converged,
    })
}

/// Fixed-schedule Nelder-Mead ascent (internally minimizes the negated
/// objective). Failed evaluations act as infinitely bad points.
fn nelder_mead<F>(
    objective: &F,
    space: &SearchSpace,
    start: &[f64],
) -> (Vec<f64>, f64, u64, bool)
where
    F: Fn(&[f64]) -> Option<f64> + Sync,
{
    const ALPHA: f64 = 1.0; // reflection
    const GAMMA: f64 = 2.0; // expansion
    const RHO: f64 = 0.5; // contraction
    const SIGMA: f64 = 0.5; // shrink

    let d = space.dims();
    let mut evals = 0u64;
    let mut eval = |p: &[f64]| -> f64 {
        evals += 1;
        let mut q = p.to_vec();
        space.clamp(&mut q);
        match objective(&q) {
            Some(v) if v.is_finite() => -v,
            _ => f64::INFINITY,
        }
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(d + 1);
    let f0 = eval(start);
    simplex.push((start.to_vec(), f0));
    for k in 0..d {
        let mut p = start.to_vec();
        let step = (space.axes[k].hi - space.axes[k].lo) / (2.0 * space.axes[k].nodes as f64);
        p[k] += step.max(1e-3);
        let f = eval(&p);
        simplex.push((p, f));
    }

    let mut converged = false;
    for _ in 0..space.refine_iters {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread = simplex[d].1 - simplex[0].1;
        if spread.abs() < 1e-13 {
            converged = true;
            break;
        }

        let centroid: Vec<f64> = (0..d)
            .map(|k| simplex[..d].iter().map(|(p, _)| p[k]).sum::<f64>() / d as f64)
            .collect();
        let worst = simplex[d].clone();
        let reflected: Vec<f64> = (0..d)
            .map(|k| centroid[k] + ALPHA * (centroid[k] - worst.0[k]))
            .collect();
        let fr = eval(&reflected);

        if fr < simplex[0].1 {
            let expanded: Vec<f64> = (0..d)
                .map(|k| centroid[k] + GAMMA * (reflected[k] - centroid[k]))
                .collect();
            let fe = eval(&expanded);
            simplex[d] = if fe < fr {
                (expanded, fe)
            } else {
                (reflected, fr)
            };
        } else if fr < simplex[d - 1].1 {
            simplex[d] = (reflected, fr);
        } else {
            let contracted: Vec<f64> = (0..d)
                .map(|k| centroid[k] + RHO * (worst.0[k] - centroid[k]))
                .collect();
            let fc = eval(&contracted);
            if fc < worst.1 {
                simplex[d] = (contracted, fc);
            } else {
                let best = simplex[0].0.clone();
                for entry in simplex.iter_mut().skip(1) {
                    let p: Vec<f64> = (0..d)
                        .map(|k| best[k] + SIGMA * (entry.0[k] - best[k]))
                        .collect();
                    let f = eval(&p);
                    *entry = (p, f);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let mut best = simplex[0].0.clone();
    space.clamp(&mut best);
    (best, -simplex[0].1, evals, converged)
}

/// Maximize `(1/2^n) |sum_j a_j cos(theta-sums)|` over the 2n phase
/// parameters, with the canonical (H c) coefficients of `ineq`. For the
/// Mermin family the maximum is 2^((n-1)/2), attained on a known angle
/// family that seeds the refinement.
pub fn verify_appendix_lemma(ineq: &BellInequality, seed: u64) -> Result<SearchResult> {
    use std::f64::consts::{PI, TAU};
    let n = ineq.n();
    let dim = 1usize << n;
    let coeffs: Vec<f64> = ineq.hc().iter().map(|&v| v as f64).collect();
    let scale = 1.0 / dim as f64;

    let objective = move |params: &[f64]| -> Option<f64> {
        let mut acc = 0.0;
        for (j, &a) in coeffs.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            let mut angle = 0.0;
            let mut rem = j; // bits MSB-first give the digits
            for k in 0..n {
                let bit = rem >> (n - 1 - k) & 1;
                angle += params[2 * k + bit];
                let _ = &mut rem;
            }
            acc += a * angle.cos();
        }
        Some((acc * scale).abs())
    };

    let axes = vec![Axis::periodic(0.0, TAU, 3); 2 * n];
    let mut space = SearchSpace::new(axes)?.with_seed(seed);
    space.refine_iters = 800;

    // Analytic optimum families used as refinement seeds.
    let mut starts: Vec<Vec<f64>> = Vec::new();
    if n % 2 == 1 {
        let a = PI / (2.0 * n as f64);
        starts.push((0..2 * n).map(|i| if i % 2 == 0 { a } else { a - PI / 2.0 }).collect());
    } else {
        let mut s = Vec::with_capacity(2 * n);
        for _ in 0..n - 1 {
            s.push(0.0);
            s.push(PI / 2.0);
        }
        let last = if n % 4 == 2 { PI / 4.0 } else { 3.0 * PI / 4.0 };
        s.push(-last);
        s.push(last);
        starts.push(s);
    }
    starts.push(vec![0.0; 2 * n]);
    {
        let mut rng = ChaCha20Rng::seed_from_u64(seed ^ 0x1e44a);
        for _ in 0..24 {
            starts.push((0..2 * n).map(|_| rng.gen_range(0.0..TAU)).collect());
        }
    }

    let mut result = search(&objective, &space)?;
    for start in &starts {
        let (params, value, evals, conv) = nelder_mead(&objective, &space, start);
        result.evaluations += evals;
        if value > result.best_value {
            result.best_value = value;
            result.best_params = params;
            result.converged = conv;
        }
    }
    Ok(result)
}

/// Tabulate the optical threshold response `f_n(x)` on a uniform grid and
/// report the maximum (first occurrence on ties).
#[derive(Clone, Debug)]
pub struct ScanTable {
    pub rows: Vec<(f64, f64)>,
    pub max_value: f64,
    pub argmax: f64,
}

pub fn scan_fn(n: usize, x_min: f64, x_max: f64, steps: usize) -> Result<ScanTable> {
    if steps < 2 {
        return Err(Error::invalid("scan needs at least 2 steps"));
    }
    if !(x_min < x_max) {
        return Err(Error::invalid("scan range must satisfy x_min < x_max"));
    }
    let mut rows = Vec::with_capacity(steps);
    let mut max_value = f64::NEG_INFINITY;
    let mut argmax = x_min;
    for i in 0..steps {
        let x = x_min + (x_max - x_min) * i as f64 / (steps - 1) as f64;
        let f = crate::schemes::optical_fn(n, x)?;
        if f > max_value {
            max_value = f;
            argmax = x;
        }
        rows.push((x, f));
    }
    Ok(ScanTable {
        rows,
        max_value,
        argmax,
    })
}
