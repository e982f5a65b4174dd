//! Spin tomograms and correlations of the GHZ-type state.

use num_complex::Complex64;

use super::GhzState;
use crate::specfun::{wigner_k, EulerAngles, HalfInt};

/// A spin-1/2 outcome. The binning is fixed: +1/2 maps to +1, -1/2 to -1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpinProjection {
    Up,
    Down,
}

impl SpinProjection {
    pub fn half_int(self) -> HalfInt {
        match self {
            SpinProjection::Up => HalfInt::HALF,
            SpinProjection::Down => HalfInt::MINUS_HALF,
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            SpinProjection::Up => 1.0,
            SpinProjection::Down => -1.0,
        }
    }

    /// Outcome tuple for the bits of `code`, party-major, bit set = Down.
    pub fn tuple_from_code(code: usize, n: usize) -> Vec<SpinProjection> {
        (0..n)
            .map(|k| {
                if code >> (n - 1 - k) & 1 == 0 {
                    SpinProjection::Up
                } else {
                    SpinProjection::Down
                }
            })
            .collect()
    }
}

fn k_element(s: SpinProjection, column: HalfInt, omega: &EulerAngles) -> Complex64 {
    wigner_k(HalfInt::HALF, s.half_int(), column, omega)
        .expect("spin-1/2 projections are always valid")
}

/// Tomogram of the GHZ-type state: the probability of observing the
/// projection tuple `s` after rotating party j by `omega_j`,
///   p = |prod_j <s_j|K(O_j)|-1/2> + prod_j <s_j|K(O_j)|+1/2>|^2 / 2.
///
/// The value does not depend on any party's theta angle: the row phase
/// exp(i s theta) drops out of the modulus.
pub fn spin_tomogram(
    state: &GhzState,
    s: &[SpinProjection],
    omegas: &[EulerAngles],
) -> f64 {
    assert_eq!(s.len(), state.parties());
    assert_eq!(omegas.len(), state.parties());
    let mut amp_down = Complex64::new(1.0, 0.0);
    let mut amp_up = Complex64::new(1.0, 0.0);
    for (sj, omega) in s.iter().zip(omegas) {
        amp_down *= k_element(*sj, HalfInt::MINUS_HALF, omega);
        amp_up *= k_element(*sj, HalfInt::HALF, omega);
    }
    (amp_down + amp_up).norm_sqr() / 2.0
}

/// Correlation function of the binned +-1 outcomes, computed from the
/// tomogram by direct summation over all 2^n projection tuples.
pub fn spin_correlation(state: &GhzState, omegas: &[EulerAngles]) -> f64 {
    let n = state.parties();
    let mut acc = 0.0;
    for code in 0..1usize << n {
        let tuple = SpinProjection::tuple_from_code(code, n);
        let sign = if code.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * spin_tomogram(state, &tuple, omegas);
    }
    acc
}

/// A pure single-qubit state by its amplitudes on |-1/2> and |+1/2>.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PureQubit {
    pub down: Complex64,
    pub up: Complex64,
}

impl PureQubit {
    /// Normalizes the supplied amplitudes.
    pub fn new(down: Complex64, up: Complex64) -> Self {
        let norm = (down.norm_sqr() + up.norm_sqr()).sqrt();
        assert!(norm > 0.0, "zero state vector");
        PureQubit {
            down: down / norm,
            up: up / norm,
        }
    }

    /// Bloch-sphere form cos(t/2)|-1/2> + sin(t/2) e^(i p)|+1/2>.
    pub fn from_bloch(polar: f64, azimuth: f64) -> Self {
        PureQubit {
            down: Complex64::new((polar / 2.0).cos(), 0.0),
            up: Complex64::from_polar((polar / 2.0).sin(), azimuth),
        }
    }
}

/// Single-party tomogram of a pure qubit: |<s|K(Omega)|chi>|^2.
pub fn qubit_tomogram(chi: &PureQubit, s: SpinProjection, omega: &EulerAngles) -> f64 {
    let amp = k_element(s, HalfInt::MINUS_HALF, omega) * chi.down
        + k_element(s, HalfInt::HALF, omega) * chi.up;
    amp.norm_sqr()
}

/// Joint tomogram of a product of pure qubit states; factorizes exactly
/// into the single-party tomograms.
pub fn product_spin_tomogram(
    states: &[PureQubit],
    s: &[SpinProjection],
    omegas: &[EulerAngles],
) -> f64 {
    assert_eq!(states.len(), s.len());
    assert_eq!(states.len(), omegas.len());
    states
        .iter()
        .zip(s.iter().zip(omegas))
        .map(|(chi, (sj, omega))| qubit_tomogram(chi, *sj, omega))
        .product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use std::f64::consts::{PI, TAU};

    fn rng() -> rand_chacha::ChaCha8Rng {
        rand_chacha::ChaCha8Rng::seed_from_u64(0xb311)
    }

    fn random_omega(rng: &mut impl Rng) -> EulerAngles {
        EulerAngles::new(
            rng.gen_range(0.0..TAU),
            rng.gen_range(0.0..PI),
            rng.gen_range(0.0..TAU),
        )
    }

    /// Closed form for n = 2:
    /// p(s1, s2) = (1 + s1 s2 (cos a1 cos a2 + sin a1 sin a2 cos(f1+f2)))/4
    /// in the signs of the projections.
    fn tomogram2_closed(s1: f64, s2: f64, o1: &EulerAngles, o2: &EulerAngles) -> f64 {
        (1.0 + s1
            * s2
            * (o1.psi.cos() * o2.psi.cos()
                + o1.psi.sin() * o2.psi.sin() * (o1.phi + o2.phi).cos()))
            / 4.0
    }

    #[test]
    fn identity_rotation_values() {
        let ghz = GhzState::new(2).unwrap();
        let id = [EulerAngles::ZERO, EulerAngles::ZERO];
        use SpinProjection::*;
        assert!((spin_tomogram(&ghz, &[Up, Up], &id) - 0.5).abs() < 1e-14);
        assert!(spin_tomogram(&ghz, &[Up, Down], &id).abs() < 1e-14);
        assert!(spin_tomogram(&ghz, &[Down, Up], &id).abs() < 1e-14);
        assert!((spin_tomogram(&ghz, &[Down, Down], &id) - 0.5).abs() < 1e-14);
    }

    #[test]
    fn matches_two_party_closed_form() {
        let ghz = GhzState::new(2).unwrap();
        let mut rng = rng();
        for _ in 0..50 {
            let o1 = random_omega(&mut rng);
            let o2 = random_omega(&mut rng);
            for code in 0..4 {
                let tuple = SpinProjection::tuple_from_code(code, 2);
                let got = spin_tomogram(&ghz, &tuple, &[o1, o2]);
                let want = tomogram2_closed(tuple[0].sign(), tuple[1].sign(), &o1, &o2);
                assert!((got - want).abs() < 1e-12, "{got} vs {want}");
            }
        }
    }

    #[test]
    fn normalization() {
        let mut rng = rng();
        for n in 1..=4usize {
            let ghz = GhzState::new(n).unwrap();
            for _ in 0..20 {
                let omegas: Vec<EulerAngles> =
                    (0..n).map(|_| random_omega(&mut rng)).collect();
                let total: f64 = (0..1usize << n)
                    .map(|code| {
                        spin_tomogram(&ghz, &SpinProjection::tuple_from_code(code, n), &omegas)
                    })
                    .sum();
                assert!((total - 1.0).abs() < 1e-10, "n={n}: {total}");
            }
        }
    }

    #[test]
    fn theta_independence() {
        let ghz = GhzState::new(3).unwrap();
        let mut rng = rng();
        for _ in 0..30 {
            let base: Vec<EulerAngles> = (0..3).map(|_| random_omega(&mut rng)).collect();
            let shifted: Vec<EulerAngles> = base
                .iter()
                .map(|o| EulerAngles::new(o.phi, o.psi, rng.gen_range(0.0..TAU)))
                .collect();
            for code in 0..8 {
                let tuple = SpinProjection::tuple_from_code(code, 3);
                let a = spin_tomogram(&ghz, &tuple, &base);
                let b = spin_tomogram(&ghz, &tuple, &shifted);
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn correlation_closed_forms() {
        let mut rng = rng();
        let ghz2 = GhzState::new(2).unwrap();
        for _ in 0..100 {
            let o: Vec<EulerAngles> = (0..2).map(|_| random_omega(&mut rng)).collect();
            let got = spin_correlation(&ghz2, &o);
            let want = o[0].psi.cos() * o[1].psi.cos()
                + o[0].psi.sin() * o[1].psi.sin() * (o[0].phi + o[1].phi).cos();
            assert!((got - want).abs() < 1e-10, "{got} vs {want}");
        }

        let ghz3 = GhzState::new(3).unwrap();
        for _ in 0..100 {
            let o: Vec<EulerAngles> = (0..3).map(|_| random_omega(&mut rng)).collect();
            let got = spin_correlation(&ghz3, &o);
            let want = -o[0].psi.sin()
                * o[1].psi.sin()
                * o[2].psi.sin()
                * (o[0].phi + o[1].phi + o[2].phi).cos();
            assert!((got - want).abs() < 1e-10, "{got} vs {want}");
        }
    }

    #[test]
    fn correlation_simple_points() {
        let ghz = GhzState::new(2).unwrap();
        let o = [
            EulerAngles::new(0.4, 0.0, 0.0),
            EulerAngles::new(1.1, 0.0, 0.0),
        ];
        assert!((spin_correlation(&ghz, &o) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn chsh_angles_reach_two_sqrt_two() {
        let ghz = GhzState::new(2).unwrap();
        let phi1 = 0.73; // arbitrary, drops out of the sums
        let s1 = [
            EulerAngles::new(phi1, -PI / 8.0, 0.0),
            EulerAngles::new(phi1, 3.0 * PI / 8.0, 0.0),
        ];
        let s2 = [
            EulerAngles::new(-phi1, PI / 8.0, 0.0),
            EulerAngles::new(-phi1, -3.0 * PI / 8.0, 0.0),
        ];
        let e = |a: usize, b: usize| spin_correlation(&ghz, &[s1[a], s2[b]]);
        let chsh = e(0, 0) + e(0, 1) + e(1, 0) - e(1, 1);
        assert!((chsh - 2.0 * 2.0f64.sqrt()).abs() < 1e-10, "{chsh}");
    }

    #[test]
    fn mermin_angles_reach_four() {
        let ghz = GhzState::new(3).unwrap();
        let setting = |phi: f64| EulerAngles::new(phi, PI / 2.0, 0.0);
        let s1 = [setting(5.0 * PI / 6.0), setting(PI / 3.0)];
        let e = |a: usize, b: usize, c: usize| {
            spin_correlation(&ghz, &[s1[a], s1[b], s1[c]])
        };
        let mermin = e(1, 0, 0) + e(0, 1, 0) + e(0, 0, 1) - e(1, 1, 1);
        assert!((mermin.abs() - 4.0).abs() < 1e-10, "{mermin}");
    }

    #[test]
    fn product_states_factorize() {
        let mut rng = rng();
        for _ in 0..30 {
            let states: Vec<PureQubit> = (0..3)
                .map(|_| {
                    PureQubit::from_bloch(rng.gen_range(0.0..PI), rng.gen_range(0.0..TAU))
                })
                .collect();
            let omegas: Vec<EulerAngles> = (0..3).map(|_| random_omega(&mut rng)).collect();
            for code in 0..8 {
                let tuple = SpinProjection::tuple_from_code(code, 3);
                let joint = product_spin_tomogram(&states, &tuple, &omegas);
                let factored: f64 = (0..3)
                    .map(|k| qubit_tomogram(&states[k], tuple[k], &omegas[k]))
                    .product();
                assert!((joint - factored).abs() < 1e-12);
            }
            // And the single-party tomograms are normalized.
            for k in 0..3 {
                let total = qubit_tomogram(&states[k], SpinProjection::Up, &omegas[k])
                    + qubit_tomogram(&states[k], SpinProjection::Down, &omegas[k]);
                assert!((total - 1.0).abs() < 1e-12);
            }
        }
    }
}
