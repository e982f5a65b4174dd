//! Tomogram and correlation-function evaluation for the GHZ-type state
//! (|0...0> + |1...1>)/sqrt(2) under spin, optical and photon-number
//! tomography, with configurable outcome binnings.

mod optical;
mod photon;
mod spin;

pub use optical::{optical_ab, optical_correlation, optical_fn, optical_tomogram};
pub use photon::{pn_correlation, pn_correlation_closed2, pn_correlation_closed3, pn_tomogram};
pub use spin::{
    product_spin_tomogram, qubit_tomogram, spin_correlation, spin_tomogram, PureQubit,
    SpinProjection,
};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::multiindex::MAX_PARTIES;
use crate::specfun::EulerAngles;

/// The n-party GHZ-type state (|0...0> + |1...1>)/sqrt(2).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GhzState {
    n: usize,
}

impl GhzState {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_PARTIES {
            return Err(Error::invalid(format!(
                "party count {n} outside 1..={MAX_PARTIES}"
            )));
        }
        Ok(GhzState { n })
    }

    pub fn parties(&self) -> usize {
        self.n
    }
}

/// One tomographic scheme together with its outcome binning (Y, Z).
///
/// * Spin: outcomes are the two projections, binned Y = {+1/2} -> +1,
///   Z = {-1/2} -> -1; settings are Euler angles.
/// * Optical: outcomes are quadrature values, binned Y = [x, inf) -> +1,
///   Z = (-inf, x) -> -1; settings are rotation phases.
/// * Photon number: outcomes are photon counts, binned Z = {0, ..., m} -> -1,
///   Y = {m+1, ...} -> +1; settings are displacement amplitudes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SchemeConfig {
    Spin,
    Optical { threshold: f64 },
    PhotonNumber { cutoff: u32 },
}

impl SchemeConfig {
    pub fn name(&self) -> &'static str {
        match self {
            SchemeConfig::Spin => "spin",
            SchemeConfig::Optical { .. } => "optical",
            SchemeConfig::PhotonNumber { .. } => "pn",
        }
    }
}

/// One party's measurement setting, matching its scheme's parameter type.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PartySetting {
    Spin(EulerAngles),
    Optical { theta: f64 },
    PhotonNumber { alpha: Complex64 },
}

/// The generic correlation path of the binned +-1 variables: assemble the
/// 2^n joint probabilities from the tomogram (finite summation for spin
/// and photon number, adaptive orthant quadrature for optical) and form
/// `sum_eps p_eps eps_1 ... eps_n`.
///
/// Every closed-form correlation in this module is tested against this
/// path. Quadrature non-convergence and photon-number truncation shortfall
/// surface as accuracy errors.
pub fn correlation_from_tomogram(
    scheme: &SchemeConfig,
    state: &GhzState,
    settings: &[PartySetting],
) -> Result<f64> {
    let n = state.parties();
    if settings.len() != n {
        return Err(Error::invalid(format!(
            "{} settings supplied for {n} parties",
            settings.len()
        )));
    }
    match scheme {
        SchemeConfig::Spin => {
            let omegas = settings
                .iter()
                .map(|s| match s {
                    PartySetting::Spin(o) => Ok(*o),
                    other => Err(Error::invalid(format!(
                        "spin scheme got a {other:?} setting"
                    ))),
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(spin::spin_correlation(state, &omegas))
        }
        SchemeConfig::Optical { threshold } => {
            let thetas = settings
                .iter()
                .map(|s| match s {
                    PartySetting::Optical { theta } => Ok(*theta),
                    other => Err(Error::invalid(format!(
                        "optical scheme got a {other:?} setting"
                    ))),
                })
                .collect::<Result<Vec<_>>>()?;
            optical::correlation_by_quadrature(state, &thetas, *threshold)
        }
        SchemeConfig::PhotonNumber { cutoff } => {
            let alphas = settings
                .iter()
                .map(|s| match s {
                    PartySetting::PhotonNumber { alpha } => Ok(*alpha),
                    other => Err(Error::invalid(format!(
                        "photon-number scheme got a {other:?} setting"
                    ))),
                })
                .collect::<Result<Vec<_>>>()?;
            photon::correlation_by_summation(state, &alphas, *cutoff)
        }
    }
}

/// Fast closed-form (or summation) correlation used by the optimizer;
/// falls back to the generic path where no closed form exists.
pub fn correlation(
    scheme: &SchemeConfig,
    state: &GhzState,
    settings: &[PartySetting],
) -> Result<f64> {
    let n = state.parties();
    if settings.len() != n {
        return Err(Error::invalid(format!(
            "{} settings supplied for {n} parties",
            settings.len()
        )));
    }
    match scheme {
        SchemeConfig::Spin => correlation_from_tomogram(scheme, state, settings),
        SchemeConfig::Optical { threshold } => {
            let thetas: Vec<f64> = settings
                .iter()
                .map(|s| match s {
                    PartySetting::Optical { theta } => Ok(*theta),
                    other => Err(Error::invalid(format!(
                        "optical scheme got a {other:?} setting"
                    ))),
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(optical::optical_correlation(state, &thetas, *threshold))
        }
        SchemeConfig::PhotonNumber { cutoff } => {
            let alphas: Vec<Complex64> = settings
                .iter()
                .map(|s| match s {
                    PartySetting::PhotonNumber { alpha } => Ok(*alpha),
                    other => Err(Error::invalid(format!(
                        "photon-number scheme got a {other:?} setting"
                    ))),
                })
                .collect::<Result<Vec<_>>>()?;
            photon::pn_correlation(state, &alphas, *cutoff)
        }
    }
}
