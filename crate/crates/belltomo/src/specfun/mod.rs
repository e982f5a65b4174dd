//! Special functions needed by the tomographic schemes: error function,
//! factorials, Jacobi polynomials, Wigner rotation-matrix elements and
//! Wigner 3j symbols.

mod erf;
mod halfint;
mod jacobi;
mod threej;
mod wigner;

pub use erf::erf;
pub use halfint::HalfInt;
pub use jacobi::jacobi;
pub use threej::wigner_3j;
pub use wigner::{wigner_k, wigner_small_d, EulerAngles};

use std::sync::LazyLock;

/// Factorials 0!..170! in floating point; 171! overflows f64.
static FACTORIALS: LazyLock<[f64; 171]> = LazyLock::new(|| {
    let mut t = [1.0f64; 171];
    for n in 1..171 {
        t[n] = t[n - 1] * n as f64;
    }
    t
});

/// n! as f64 for n <= 170.
///
/// Panics for larger arguments; callers in this crate stay far below the cap.
pub fn factorial(n: u32) -> f64 {
    FACTORIALS[n as usize]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorial_small_values() {
        assert_eq!(factorial(0), 1.0);
        assert_eq!(factorial(5), 120.0);
        assert_eq!(factorial(12), 479_001_600.0);
    }

    #[test]
    fn factorial_large_is_finite() {
        assert!(factorial(170).is_finite());
    }
}
