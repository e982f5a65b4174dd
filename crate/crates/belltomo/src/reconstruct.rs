//! Density-matrix reconstruction from spin tomograms: the dequantizer
//! kernel built from Wigner 3j symbols and rotation matrix elements, and
//! the quadrature over the rotation group that inverts the tomographic
//! map.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad::{gauss_legendre, trapezoid_periodic};
use crate::specfun::{wigner_3j, wigner_k, wigner_small_d, EulerAngles, HalfInt};

/// A (2j+1)-dimensional density matrix in the spin-projection basis,
/// rows and columns ordered by increasing projection -j..=+j.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    data: Array2<Complex64>,
}

/// How far a matrix sits from the density-matrix axioms.
#[derive(Clone, Copy, Debug)]
pub struct DensityResiduals {
    /// max |rho - rho^dagger| over entries.
    pub hermiticity: f64,
    /// |tr(rho) - 1|.
    pub trace_deviation: f64,
    /// Smallest eigenvalue of the Hermitian part.
    pub min_eigenvalue: f64,
}

impl DensityMatrix {
    pub fn from_matrix(data: Array2<Complex64>) -> Result<Self> {
        if data.nrows() != data.ncols() || data.nrows() == 0 {
            return Err(Error::invalid("density matrix must be square and nonempty"));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::invalid("density matrix entries must be finite"));
        }
        Ok(DensityMatrix { data })
    }

    /// Projector onto a pure state given by its amplitudes.
    pub fn pure(amplitudes: &[Complex64]) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if norm <= 0.0 {
            return Err(Error::invalid("zero state vector"));
        }
        let d = amplitudes.len();
        let mut m = Array2::from_elem((d, d), Complex64::new(0.0, 0.0));
        for r in 0..d {
            for c in 0..d {
                m[[r, c]] = amplitudes[r] * amplitudes[c].conj() / norm;
            }
        }
        Ok(DensityMatrix { data: m })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let mut m = Array2::from_elem((dim, dim), Complex64::new(0.0, 0.0));
        for i in 0..dim {
            m[[i, i]] = Complex64::new(1.0 / dim as f64, 0.0);
        }
        DensityMatrix { data: m }
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn entry(&self, r: usize, c: usize) -> Complex64 {
        self.data[[r, c]]
    }

    pub fn as_array(&self) -> &Array2<Complex64> {
        &self.data
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.data[[i, i]]).sum()
    }

    pub fn residuals(&self) -> DensityResiduals {
        let d = self.dim();
        let mut herm = 0.0f64;
        for r in 0..d {
            for c in 0..d {
                herm = herm.max((self.data[[r, c]] - self.data[[c, r]].conj()).norm());
            }
        }
        DensityResiduals {
            hermiticity: herm,
            trace_deviation: (self.trace() - Complex64::new(1.0, 0.0)).norm(),
            min_eigenvalue: self.eigenvalues().into_iter().fold(f64::INFINITY, f64::min),
        }
    }

    /// Eigenvalues of the Hermitian part, via cyclic Jacobi on the real
    /// symmetric embedding [[X, -Y], [Y, X]] of H = X + iY (each
    /// eigenvalue of H appears twice in the embedding).
    pub fn eigenvalues(&self) -> Vec<f64> {
        let d = self.dim();
        let mut s = vec![vec![0.0f64; 2 * d]; 2 * d];
        for r in 0..d {
            for c in 0..d {
                let h = 0.5 * (self.data[[r, c]] + self.data[[c, r]].conj());
                s[r][c] = h.re;
                s[r + d][c + d] = h.re;
                s[r][c + d] = -h.im;
                s[r + d][c] = h.im;
            }
        }
        let mut eig = symmetric_eigenvalues(s);
        eig.sort_by(f64::total_cmp);
        // Doubled spectrum: take every other entry.
        eig.into_iter().step_by(2).collect()
    }

    /// Overlap <psi| rho |psi> with a pure state.
    pub fn fidelity_pure(&self, amplitudes: &[Complex64]) -> Result<f64> {
        if amplitudes.len() != self.dim() {
            return Err(Error::invalid("state dimension mismatch"));
        }
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        let mut acc = Complex64::new(0.0, 0.0);
        for r in 0..self.dim() {
            for c in 0..self.dim() {
                acc += amplitudes[r].conj() * self.data[[r, c]] * amplitudes[c];
            }
        }
        Ok(acc.re / norm)
    }
}

fn symmetric_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..64 {
        let mut off = 0.0f64;
        for r in 0..n {
            for c in r + 1..n {
                off = off.max(a[r][c].abs());
            }
        }
        if off < 1e-14 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).collect()
}

/// Node counts for the rotation-group quadrature. The psi axis uses a
/// Gauss-Legendre rule in cos(psi), absorbing the sin(psi) measure weight
/// (exact for polynomial degree <= 2 nodes - 1); phi and theta use uniform
/// periodic rules.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadratureSpec {
    pub phi_nodes: usize,
    pub psi_nodes: usize,
    pub theta_nodes: usize,
}

impl QuadratureSpec {
    pub fn new(phi_nodes: usize, psi_nodes: usize, theta_nodes: usize) -> Result<Self> {
        if phi_nodes < 2 || psi_nodes < 2 || theta_nodes < 2 {
            return Err(Error::invalid("node counts must be at least 2 per axis"));
        }
        Ok(QuadratureSpec {
            phi_nodes,
            psi_nodes,
            theta_nodes,
        })
    }

    pub fn cubic(nodes: usize) -> Result<Self> {
        Self::new(nodes, nodes, nodes)
    }
}

/// Matrix element <j, n| D(s, Omega) |j, m> of the dequantizer.
///
/// The double sum runs over j3 = 0..2j with weight (2 j3 + 1)^2 and over
/// the j3 projections k, combining the rotation element
/// <j3, 0| K(Omega) |j3, k> with the two 3j symbols (j j j3; n -m k) and
/// (j j j3; s -s 0); the first selection rule keeps only k = m - n. The
/// leading sign is (-1)^((j-m) + (j-s)), which reduces to (-1)^(s+m) on
/// integer-spin lattices.
pub fn dequantizer_element(
    j: HalfInt,
    n: HalfInt,
    m: HalfInt,
    s: HalfInt,
    omega: &EulerAngles,
) -> Result<Complex64> {
    for (name, p) in [("n", n), ("m", m), ("s", s)] {
        if p.abs().twice() > j.twice() || !p.same_lattice(j) {
            return Err(Error::invalid(format!(
                "projection {name} = {p} invalid for j = {j}"
            )));
        }
    }
    let phase = m.phase_diff(j) * s.phase_diff(j);
    let mut acc = Complex64::new(0.0, 0.0);
    for tj3 in 0..=(2 * j.twice()).max(0) {
        if tj3 % 2 != 0 {
            continue; // j3 runs over integers 0..=2j
        }
        let j3 = HalfInt::new(tj3);
        let weight = (f64::from(tj3) + 1.0).powi(2);
        let t3j_s = wigner_3j(j, j, j3, s, -s, HalfInt::ZERO);
        if t3j_s == 0.0 {
            continue;
        }
        for k in j3.projections() {
            let t3j_nm = wigner_3j(j, j, j3, n, -m, k);
            if t3j_nm == 0.0 {
                continue;
            }
            let kelem = wigner_k(j3, HalfInt::ZERO, k, omega)?;
            acc += weight * t3j_nm * t3j_s * kelem;
        }
    }
    Ok(acc * phase / (8.0 * std::f64::consts::PI * std::f64::consts::PI))
}

/// Reconstruct a spin-j density matrix from its tomogram
/// `p(s, Omega)` by quadrature of `sum_s int p(s, Omega) D(s, Omega) dnu`
/// over phi, theta in [0, 2pi] and psi in [0, pi] with measure
/// sin(psi) dphi dpsi dtheta.
///
/// The theta axis is integrated explicitly even though neither a valid
/// tomogram nor the kernel depends on it.
///
/// Fails with an accuracy error when the result's Hermiticity residual
/// exceeds 1e-6 (an under-resolved or inconsistent input).
pub fn reconstruct_spin<F>(tomogram: F, j: HalfInt, spec: &QuadratureSpec) -> Result<DensityMatrix>
where
    F: Fn(HalfInt, &EulerAngles) -> f64,
{
    if j.twice() <= 0 {
        return Err(Error::invalid("j must be positive"));
    }
    let dim = (j.twice() + 1) as usize;
    let projections: Vec<HalfInt> = j.projections().collect();

    let (phi_nodes, phi_w) = trapezoid_periodic(spec.phi_nodes, 2.0 * std::f64::consts::PI)?;
    let (theta_nodes, theta_w) = trapezoid_periodic(spec.theta_nodes, 2.0 * std::f64::consts::PI)?;
    let (u_nodes, u_w) = gauss_legendre(spec.psi_nodes)?;

    // Precompute the 3j tables. k is pinned to m - n by the selection rule.
    let max_tj3 = 2 * j.twice();
    let t3j_s: Vec<Vec<f64>> = (0..=max_tj3 / 2)
        .map(|i| {
            let j3 = HalfInt::from_int(i);
            projections
                .iter()
                .map(|&s| wigner_3j(j, j, j3, s, -s, HalfInt::ZERO))
                .collect()
        })
        .collect();
    let t3j_nm: Vec<Array2<f64>> = (0..=max_tj3 / 2)
        .map(|i| {
            let j3 = HalfInt::from_int(i);
            let mut t = Array2::zeros((dim, dim));
            for (a, &pn) in projections.iter().enumerate() {
                for (b, &pm) in projections.iter().enumerate() {
                    t[[a, b]] = wigner_3j(j, j, j3, pn, -pm, pm - pn);
                }
            }
            t
        })
        .collect();

    let inv_cell = 1.0 / (8.0 * std::f64::consts::PI * std::f64::consts::PI);
    let mut rho = Array2::from_elem((dim, dim), Complex64::new(0.0, 0.0));

    for (iu, &u) in u_nodes.iter().enumerate() {
        let psi = u.clamp(-1.0, 1.0).acos();
        // Reduced rotation elements d^{j3}_{0, k}(psi) per j3.
        let d0k: Vec<Vec<f64>> = (0..=max_tj3 / 2)
            .map(|i| {
                let j3 = HalfInt::from_int(i);
                j3.projections()
                    .map(|k| wigner_small_d(j3, HalfInt::ZERO, k, psi).expect("valid projection"))
                    .collect()
            })
            .collect();
        for (ip, &phi) in phi_nodes.iter().enumerate() {
            for (it, &theta) in theta_nodes.iter().enumerate() {
                let omega = EulerAngles::new(phi, psi, theta);
                let w = u_w[iu] * phi_w[ip] * theta_w[it];
                for (is, &s) in projections.iter().enumerate() {
                    let p = tomogram(s, &omega);
                    if p == 0.0 {
                        continue;
                    }
                    let s_phase = s.phase_diff(j);
                    for (a, &pn) in projections.iter().enumerate() {
                        for (b, &pm) in projections.iter().enumerate() {
                            let k = pm - pn;
                            let kf = k.value();
                            let mut elem = Complex64::new(0.0, 0.0);
                            for i3 in 0..=(max_tj3 / 2) as usize {
                                if k.abs().twice() > 2 * i3 as i32 {
                                    continue;
                                }
                                let tw = (2.0 * i3 as f64 + 1.0).powi(2);
                                let c3s = t3j_s[i3][is];
                                let c3nm = t3j_nm[i3][[a, b]];
                                if c3s == 0.0 || c3nm == 0.0 {
                                    continue;
                                }
                                let kidx = (k.twice() / 2 + i3 as i32) as usize;
                                elem += Complex64::from_polar(1.0, kf * phi)
                                    * (tw * c3s * c3nm * d0k[i3][kidx]);
                            }
                            let phase = pm.phase_diff(j) * s_phase;
                            rho[[a, b]] += elem * (phase * inv_cell * w * p);
                        }
                    }
                }
            }
        }
    }

    let out = DensityMatrix::from_matrix(rho)?;
    let res = out.residuals();
    if res.hermiticity > 1e-6 {
        return Err(Error::Accuracy {
            context: "reconstruction Hermiticity residual above 1e-6".into(),
            achieved: res.hermiticity,
        });
    }
    Ok(out)
}

/// Forward tomogram of an arbitrary density matrix,
/// `p(s, Omega) = <j, s| K(Omega) rho K(Omega)^dagger |j, s>`.
pub fn tomogram_of_density(
    rho: &DensityMatrix,
    j: HalfInt,
    s: HalfInt,
    omega: &EulerAngles,
) -> Result<f64> {
    let dim = (j.twice() + 1) as usize;
    if rho.dim() != dim {
        return Err(Error::invalid("density matrix dimension does not match j"));
    }
    let projections: Vec<HalfInt> = j.projections().collect();
    let mut acc = Complex64::new(0.0, 0.0);
    for (a, &pa) in projections.iter().enumerate() {
        let ka = wigner_k(j, s, pa, omega)?;
        for (b, &pb) in projections.iter().enumerate() {
            let kb = wigner_k(j, s, pb, omega)?;
            acc += ka * rho.entry(a, b) * kb.conj();
        }
    }
    Ok(acc.re)
}
