use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::HalfInt;

/// Wigner 3j symbol by the Racah single-sum formula, with every
/// intermediate kept as an exact big-integer rational; the only rounding
/// is the final conversion to f64.
///
/// Selection-rule violations (m1+m2+m3 != 0, triangle failure, |m| > j,
/// off-lattice projections) return 0 rather than an error.
pub fn wigner_3j(
    j1: HalfInt,
    j2: HalfInt,
    j3: HalfInt,
    m1: HalfInt,
    m2: HalfInt,
    m3: HalfInt,
) -> f64 {
    let (tj1, tj2, tj3) = (j1.twice(), j2.twice(), j3.twice());
    let (tm1, tm2, tm3) = (m1.twice(), m2.twice(), m3.twice());

    if tm1 + tm2 + tm3 != 0 {
        return 0.0;
    }
    if tj1 < 0 || tj2 < 0 || tj3 < 0 {
        return 0.0;
    }
    if tm1.abs() > tj1 || tm2.abs() > tj2 || tm3.abs() > tj3 {
        return 0.0;
    }
    // Projections must sit on their j's lattice, and the perimeter must be
    // an integer.
    if (tj1 - tm1) % 2 != 0 || (tj2 - tm2) % 2 != 0 || (tj3 - tm3) % 2 != 0 {
        return 0.0;
    }
    if (tj1 + tj2 + tj3) % 2 != 0 {
        return 0.0;
    }
    if tj3 < (tj1 - tj2).abs() || tj3 > tj1 + tj2 {
        return 0.0;
    }

    let t1 = (tj1 + tj2 - tj3) / 2;
    let t2 = (tj1 - tj2 + tj3) / 2;
    let t3 = (-tj1 + tj2 + tj3) / 2;
    let perimeter = (tj1 + tj2 + tj3) / 2 + 1;

    let k_min = [0, (tj2 - tj3 - tm1) / 2, (tj1 - tj3 + tm2) / 2]
        .into_iter()
        .max()
        .unwrap();
    let k_max = [t1, (tj1 - tm1) / 2, (tj2 + tm2) / 2]
        .into_iter()
        .min()
        .unwrap();
    if k_min > k_max {
        return 0.0;
    }

    let mut sum = BigRational::zero();
    for k in k_min..=k_max {
        let denom = big_fact(k)
            * big_fact(t1 - k)
            * big_fact((tj1 - tm1) / 2 - k)
            * big_fact((tj2 + tm2) / 2 - k)
            * big_fact((tj3 - tj2 + tm1) / 2 + k)
            * big_fact((tj3 - tj1 - tm2) / 2 + k);
        let term = BigRational::new(BigInt::one(), denom);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    if sum.is_zero() {
        return 0.0;
    }

    // value^2 = sum^2 * triangle coefficient * product of (j +- m)!
    let triangle = BigRational::new(big_fact(t1) * big_fact(t2) * big_fact(t3), big_fact(perimeter));
    let jm_product = big_fact((tj1 + tm1) / 2)
        * big_fact((tj1 - tm1) / 2)
        * big_fact((tj2 + tm2) / 2)
        * big_fact((tj2 - tm2) / 2)
        * big_fact((tj3 + tm3) / 2)
        * big_fact((tj3 - tm3) / 2);
    let squared = sum.clone() * sum.clone() * triangle * BigRational::from_integer(jm_product);

    let mut sign = if sum.is_negative() { -1.0 } else { 1.0 };
    // (-1)^(j1 - j2 - m3): the exponent is an integer by the lattice checks.
    if ((tj1 - tj2 - tm3) / 2).rem_euclid(2) == 1 {
        sign = -sign;
    }
    sign * squared.to_f64().expect("3j magnitude fits in f64").sqrt()
}

fn big_fact(n: i32) -> BigInt {
    debug_assert!(n >= 0, "negative factorial argument {n}");
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= i;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(t: i32) -> HalfInt {
        HalfInt::new(t)
    }

    #[test]
    fn selection_rules_give_zero() {
        // m1 + m2 + m3 != 0
        assert_eq!(wigner_3j(h(1), h(1), h(2), h(1), h(1), h(0)), 0.0);
        // triangle failure
        assert_eq!(wigner_3j(h(1), h(1), h(6), h(1), h(-1), h(0)), 0.0);
        // |m| > j
        assert_eq!(wigner_3j(h(2), h(2), h(2), h(4), h(-2), h(-2)), 0.0);
        // odd perimeter
        assert_eq!(wigner_3j(h(1), h(2), h(2), h(1), h(0), h(-1)), 0.0);
    }

    #[test]
    fn half_half_zero() {
        let v = wigner_3j(h(1), h(1), h(0), h(1), h(-1), h(0));
        assert!((v - 0.5f64.sqrt()).abs() < 1e-15, "{v}");
        let w = wigner_3j(h(1), h(1), h(0), h(-1), h(1), h(0));
        assert!((w + 0.5f64.sqrt()).abs() < 1e-15, "{w}");
    }

    #[test]
    fn one_one_zero() {
        let v = wigner_3j(h(2), h(2), h(0), h(0), h(0), h(0));
        assert!((v + 1.0 / 3.0f64.sqrt()).abs() < 1e-15, "{v}");
    }

    #[test]
    fn textbook_values() {
        // Stretched cases, signs from the closed form for j3 = j1 + j2.
        // (1 1 2; 1 1 -2) = 1/sqrt(5)
        let v = wigner_3j(h(2), h(2), h(4), h(2), h(2), h(-4));
        assert!((v - 1.0 / 5.0f64.sqrt()).abs() < 1e-15, "{v}");
        // (1/2 1/2 1; 1/2 1/2 -1) = -1/sqrt(3)
        let w = wigner_3j(h(1), h(1), h(2), h(1), h(1), h(-2));
        assert!((w + 1.0 / 3.0f64.sqrt()).abs() < 1e-15, "{w}");
        // (1/2 1/2 1; 1/2 -1/2 0) = 1/sqrt(6)
        let u = wigner_3j(h(1), h(1), h(2), h(1), h(-1), h(0));
        assert!((u - 1.0 / 6.0f64.sqrt()).abs() < 1e-15, "{u}");
    }

    #[test]
    fn orthogonality() {
        // sum_{m1,m2} (2 j3 + 1) (3j)^2 = 1 for every valid (j1, j2, j3)
        // with all j <= 2.
        for tj1 in 0..=4 {
            for tj2 in 0..=4 {
                for tj3 in (tj1 - tj2).abs()..=(tj1 + tj2).min(4) {
                    if (tj1 + tj2 + tj3) % 2 != 0 {
                        continue;
                    }
                    for tm3 in (-tj3..=tj3).step_by(2) {
                        let mut acc = 0.0;
                        for tm1 in (-tj1..=tj1).step_by(2) {
                            let tm2 = -tm3 - tm1;
                            if tm2.abs() > tj2 {
                                continue;
                            }
                            let v = wigner_3j(h(tj1), h(tj2), h(tj3), h(tm1), h(tm2), h(tm3));
                            acc += (tj3 + 1) as f64 * v * v;
                        }
                        assert!(
                            (acc - 1.0).abs() < 1e-13,
                            "tj=({tj1},{tj2},{tj3}) tm3={tm3}: {acc}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn exactness_at_j_ten() {
        // Column orthogonality again but at the largest supported scale,
        // j1 = j2 = 10, j3 = 7: big-integer arithmetic keeps this exact.
        let (tj1, tj2, tj3) = (20, 20, 14);
        let mut acc = 0.0;
        for tm1 in (-tj1..=tj1).step_by(2) {
            let tm2 = -tm1;
            let v = wigner_3j(h(tj1), h(tj2), h(tj3), h(tm1), h(tm2), h(0));
            acc += (tj3 + 1) as f64 * v * v;
        }
        assert!((acc - 1.0).abs() < 1e-12, "{acc}");
    }
}
