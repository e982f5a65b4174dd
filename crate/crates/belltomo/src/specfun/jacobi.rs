/// Jacobi polynomial P_n^(alpha,beta)(x) by the three-term recurrence.
///
/// The recurrence is applied upward from the n = 0 and n = 1 closed forms;
/// its leading coefficient 2n(n+a+b)(2n+a+b-2) is nonzero for all n >= 2
/// when a, b > -1, which covers every use in this crate (rotation matrix
/// elements call it with nonnegative integer parameters).
pub fn jacobi(n: u32, alpha: f64, beta: f64, x: f64) -> f64 {
    match n {
        0 => 1.0,
        1 => (alpha + 1.0) + (alpha + beta + 2.0) * (x - 1.0) / 2.0,
        _ => {
            let mut p_prev = 1.0;
            let mut p = (alpha + 1.0) + (alpha + beta + 2.0) * (x - 1.0) / 2.0;
            for k in 2..=n {
                let k = f64::from(k);
                let c = 2.0 * k + alpha + beta;
                let a1 = 2.0 * k * (k + alpha + beta) * (c - 2.0);
                let a2 = (c - 1.0) * (alpha * alpha - beta * beta);
                let a3 = (c - 2.0) * (c - 1.0) * c;
                let a4 = 2.0 * (k + alpha - 1.0) * (k + beta - 1.0) * c;
                let next = ((a2 + a3 * x) * p - a4 * p_prev) / a1;
                p_prev = p;
                p = next;
            }
            p
        }
    }
}
