use num_complex::Complex64;
use std::f64::consts::TAU;

use super::{factorial, jacobi, HalfInt};
use crate::error::{Error, Result};

/// Euler angles (phi, psi, theta) parameterizing a rotation.
///
/// Any finite values are accepted; trigonometric evaluation is periodic.
/// `canonicalized` reduces to phi, theta in [0, 2pi) and psi folded into
/// [0, pi] for reporting and quadrature grids.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EulerAngles {
    pub phi: f64,
    pub psi: f64,
    pub theta: f64,
}

impl EulerAngles {
    pub fn new(phi: f64, psi: f64, theta: f64) -> Self {
        EulerAngles { phi, psi, theta }
    }

    pub const ZERO: EulerAngles = EulerAngles {
        phi: 0.0,
        psi: 0.0,
        theta: 0.0,
    };

    pub fn canonicalized(&self) -> EulerAngles {
        let mut psi = self.psi.rem_euclid(TAU);
        let mut phi = self.phi;
        // psi in (pi, 2pi) is equivalent to (2pi - psi) with phi shifted by pi.
        if psi > std::f64::consts::PI {
            psi = TAU - psi;
            phi += std::f64::consts::PI;
        }
        EulerAngles {
            phi: phi.rem_euclid(TAU),
            psi,
            theta: self.theta.rem_euclid(TAU),
        }
    }
}

/// Rotation matrix element <j, s| K(Omega) |j, s'>.
///
/// The element factorizes as exp(i(s theta + s' phi)) d(j, s, s'; psi) with
/// the real reduced matrix d given by the Jacobi-polynomial closed form.
pub fn wigner_k(j: HalfInt, s: HalfInt, sp: HalfInt, omega: &EulerAngles) -> Result<Complex64> {
    let d = wigner_small_d(j, s, sp, omega.psi)?;
    let phase = Complex64::from_polar(
        1.0,
        s.value() * omega.theta + sp.value() * omega.phi,
    );
    Ok(phase * d)
}

/// Reduced rotation matrix d(j, s, s'; psi) = <j, s| exp(-i psi J_y) |j, s'>.
///
/// The closed form
///   sqrt((j+s')!(j-s')!/((j+s)!(j-s)!)) cos^(s+s')(psi/2) sin^(s'-s)(psi/2)
///     P_(j-s')^((s'-s, s'+s))(cos psi)
/// has nonnegative exponents only for s' >= |s|; the remaining index regions
/// are reached through the exact symmetries
///   d(s, s') = (-1)^(s'-s) d(s', s) = (-1)^(s'-s) d(-s, -s').
pub fn wigner_small_d(j: HalfInt, s: HalfInt, sp: HalfInt, psi: f64) -> Result<f64> {
    if j.twice() < 0 {
        return Err(Error::invalid(format!("negative angular momentum j = {j}")));
    }
    for (name, m) in [("s", s), ("s'", sp)] {
        if m.abs().twice() > j.twice() {
            return Err(Error::invalid(format!(
                "projection {name} = {m} outside -{j}..{j}"
            )));
        }
        if !m.same_lattice(j) {
            return Err(Error::invalid(format!(
                "projection {name} = {m} off the lattice of j = {j}"
            )));
        }
    }

    let value = if sp.twice() >= s.abs().twice() {
        d_region(j, s, sp, psi)
    } else if -sp.twice() >= s.abs().twice() {
        sp.phase_diff(s) * d_region(j, -s, -sp, psi)
    } else if s.twice() >= sp.abs().twice() {
        sp.phase_diff(s) * d_region(j, sp, s, psi)
    } else {
        d_region(j, -sp, -s, psi)
    };
    Ok(value)
}

/// The closed form on its native region s' >= |s|.
fn d_region(j: HalfInt, s: HalfInt, sp: HalfInt, psi: f64) -> f64 {
    let jps = ((j + s).twice() / 2) as u32;
    let jms = ((j - s).twice() / 2) as u32;
    let jpsp = ((j + sp).twice() / 2) as u32;
    let jmsp = ((j - sp).twice() / 2) as u32;
    let ratio = (factorial(jpsp) * factorial(jmsp) / (factorial(jps) * factorial(jms))).sqrt();

    let cos_pow = ((s + sp).twice() / 2) as i32;
    let sin_pow = ((sp - s).twice() / 2) as i32;
    debug_assert!(cos_pow >= 0 && sin_pow >= 0);

    let half = psi / 2.0;
    ratio
        * half.cos().powi(cos_pow)
        * half.sin().powi(sin_pow)
        * jacobi(jmsp, sin_pow as f64, cos_pow as f64, psi.cos())
}
