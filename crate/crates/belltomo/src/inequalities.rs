//! The family of Bell inequalities `(e, H_{2^n} c) <= 2^n` over sign
//! vectors `c`, the Mermin subfamily, membership and violation tests on
//! correlation vectors, and the brute-force classical-polytope oracle.

use crate::error::{Error, Result};
use crate::multiindex::{decode_setting, encode_setting, hadamard, MAX_PARTIES};

/// Largest `n` for which the full inequality family (2^(2^n) members) is
/// enumerated.
pub const MAX_ENUMERATION_PARTIES: usize = 4;

/// The 2^n-component vector of correlation functions `E(j_1, ..., j_n)`,
/// stored in setting-index order.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationVector {
    n: usize,
    entries: Vec<f64>,
}

impl CorrelationVector {
    /// Build from entries in setting-index order. Each correlation function
    /// is bounded by one in absolute value; a small tolerance absorbs
    /// floating-point evaluation noise.
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        let len = entries.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::invalid(format!(
                "correlation vector length {len} is not a power of two"
            )));
        }
        let n = len.trailing_zeros() as usize;
        if n == 0 || n > MAX_PARTIES {
            return Err(Error::invalid(format!("unsupported party count {n}")));
        }
        for (i, &v) in entries.iter().enumerate() {
            if !v.is_finite() || v.abs() > 1.0 + 1e-9 {
                return Err(Error::invalid(format!(
                    "correlation entry {i} = {v} outside [-1, 1]"
                )));
            }
        }
        Ok(CorrelationVector { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// Entry for the given setting digits.
    pub fn at(&self, digits: &[u8]) -> Result<f64> {
        Ok(self.entries[encode_setting(digits)? - 1])
    }
}

/// One Bell inequality `sum_j coeff_j E(j) <= bound`.
///
/// Every member of the family is generated by a sign vector `c`: the
/// canonical coefficients are `H_{2^n} c` with bound `2^n`, and `scale`
/// records the positive factor dividing both to reach the stored form
/// (1 for inequalities built directly from `c`; a power of two for the
/// Mermin normalization).
#[derive(Clone, Debug, PartialEq)]
pub struct BellInequality {
    n: usize,
    c: Vec<i8>,
    hc: Vec<i64>,
    coeffs: Vec<f64>,
    bound: f64,
    scale: f64,
}

impl BellInequality {
    pub fn n(&self) -> usize {
        self.n
    }

    /// The generating sign vector.
    pub fn c(&self) -> &[i8] {
        &self.c
    }

    /// Stored coefficient vector (length 2^n, setting-index order).
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// `H c` in exact integer arithmetic.
    pub fn hc(&self) -> &[i64] {
        &self.hc
    }

    /// A trivial inequality is `+-E(j) <= 1` for a single setting
    /// combination: exactly one nonzero canonical coefficient, of magnitude
    /// 2^n.
    pub fn is_trivial(&self) -> bool {
        let dim = 1i64 << self.n;
        let mut nonzero = 0usize;
        let mut ok = true;
        for &v in &self.hc {
            if v != 0 {
                nonzero += 1;
                ok &= v.abs() == dim;
            }
        }
        ok && nonzero == 1
    }
}

/// Sign vector for enumeration index `idx` in `0..2^len`: bit 0 of the
/// most-significant position maps to +1 (the same base-2 digit convention
/// as the multi-index codecs).
pub fn c_from_index(idx: usize, len: usize) -> Vec<i8> {
    (0..len)
        .map(|t| if idx >> (len - 1 - t) & 1 == 0 { 1 } else { -1 })
        .collect()
}

/// Enumeration index of a sign vector; inverse of [`c_from_index`].
pub fn c_to_index(c: &[i8]) -> usize {
    c.iter()
        .fold(0usize, |acc, &s| acc * 2 + if s == 1 { 0 } else { 1 })
}

/// Build the inequality generated by the sign vector `c`.
///
/// The coefficients are computed from the defining sum
/// `a_j = sum_eps c(eps) eps_1^(j_1-1) ... eps_n^(j_n-1)` and verified at
/// construction against the Hadamard product `H c`.
pub fn inequality_from_c(c: &[i8], n: usize) -> Result<BellInequality> {
    if n == 0 || n > MAX_PARTIES {
        return Err(Error::invalid(format!("unsupported party count {n}")));
    }
    let dim = 1usize << n;
    if c.len() != dim {
        return Err(Error::invalid(format!(
            "sign vector length {} does not match 2^{n}",
            c.len()
        )));
    }
    if let Some(bad) = c.iter().find(|&&s| s != 1 && s != -1) {
        return Err(Error::invalid(format!("sign vector entry {bad} not +-1")));
    }

    // Defining sum over eps tuples.
    let mut a = vec![0i64; dim];
    for (j, slot) in a.iter_mut().enumerate() {
        let digits = decode_setting(j + 1, n)?;
        let mut acc = 0i64;
        for (idx, &ci) in c.iter().enumerate() {
            let eps = c_from_index(idx, n);
            let mut prod = 1i64;
            for (k, &jk) in digits.iter().enumerate() {
                if jk == 2 {
                    prod *= i64::from(eps[k]);
                }
            }
            acc += i64::from(ci) * prod;
        }
        *slot = acc;
    }

    // Cross-check against H c.
    let h = hadamard(n)?;
    for j in 0..dim {
        let mut acc = 0i64;
        for (t, &ci) in c.iter().enumerate() {
            acc += i64::from(h.get(j, t)) * i64::from(ci);
        }
        if acc != a[j] {
            return Err(Error::Consistency(format!(
                "coefficient transform disagrees with H c at row {j}"
            )));
        }
    }

    Ok(BellInequality {
        n,
        c: c.to_vec(),
        coeffs: a.iter().map(|&v| v as f64).collect(),
        hc: a,
        bound: dim as f64,
        scale: 1.0,
    })
}

/// All 2^(2^n) inequalities, one per sign vector, in enumeration order.
pub fn all_inequalities(n: usize) -> Result<Vec<BellInequality>> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    if n > MAX_ENUMERATION_PARTIES {
        return Err(Error::capacity(format!(
            "enumerating 2^(2^{n}) inequalities is out of range (n <= {MAX_ENUMERATION_PARTIES})"
        )));
    }
    let dim = 1usize << n;
    (0..1usize << dim)
        .map(|idx| inequality_from_c(&c_from_index(idx, dim), n))
        .collect()
}

/// Signed slack `(e, H c) - 2^n` of `e` against one inequality, divided by
/// the inequality's scale; positive means violation. The integer part
/// `H c` is exact, floating point enters only through `e`.
pub fn margin(e: &CorrelationVector, ineq: &BellInequality) -> Result<f64> {
    if e.n() != ineq.n {
        return Err(Error::invalid(format!(
            "dimension mismatch: vector has n = {}, inequality n = {}",
            e.n(),
            ineq.n
        )));
    }
    let dot: f64 = ineq
        .hc
        .iter()
        .zip(e.entries())
        .map(|(&h, &v)| h as f64 * v)
        .sum();
    Ok(dot / ineq.scale - ineq.bound)
}

/// Result of a polytope membership test.
#[derive(Clone, Debug)]
pub struct MembershipReport {
    pub member: bool,
    /// Enumeration index of the worst inequality (lowest index on ties).
    pub worst_index: usize,
    pub worst_inequality: BellInequality,
    pub worst_margin: f64,
}

/// Test `e` against all 2^(2^n) inequalities.
///
/// Member means every margin is <= 0. The report carries the maximal-margin
/// inequality, with ties resolved toward the smallest enumeration index.
pub fn is_member(e: &CorrelationVector) -> Result<MembershipReport> {
    let n = e.n();
    if n > MAX_ENUMERATION_PARTIES {
        return Err(Error::capacity(format!(
            "membership sweep limited to n <= {MAX_ENUMERATION_PARTIES}"
        )));
    }
    let dim = 1usize << n;
    let h = hadamard(n)?;
    let mut worst: Option<(usize, f64)> = None;
    for idx in 0..1usize << dim {
        let c = c_from_index(idx, dim);
        let mut dot = 0.0f64;
        for j in 0..dim {
            let mut hc = 0i64;
            for (t, &ci) in c.iter().enumerate() {
                hc += i64::from(h.get(j, t)) * i64::from(ci);
            }
            dot += hc as f64 * e.entries()[j];
        }
        let m = dot - dim as f64;
        if worst.map_or(true, |(_, w)| m > w) {
            worst = Some((idx, m));
        }
    }
    let (worst_index, worst_margin) = worst.expect("at least one inequality");
    Ok(MembershipReport {
        member: worst_margin <= 0.0,
        worst_index,
        worst_inequality: inequality_from_c(&c_from_index(worst_index, dim), n)?,
        worst_margin,
    })
}

/// The Mermin inequality on n parties, in its conventional normalization.
///
/// Odd n: coefficients +-1 on the multi-indices containing an odd number
/// of 2s (sign (-1)^l for 2l+1 twos), zero elsewhere, bound 2^((n-1)/2).
/// Even n: the recursive two-block combination of the (n-1)-party form and
/// its setting-swapped partner, bound 2^(n/2); for n = 2 this is exactly
/// the CHSH inequality with signs (+, +, +, -).
///
/// Multiplying the coefficients by 2^((n+1)/2) (odd) or 2^(n/2) (even)
/// reaches the canonical `H c` form; the generating `c` is recovered and
/// stored at construction.
pub fn mermin_inequality(n: usize) -> Result<BellInequality> {
    if n < 2 {
        return Err(Error::invalid("the Mermin family starts at n = 2"));
    }
    if n > MAX_PARTIES {
        return Err(Error::capacity(format!("n = {n} exceeds {MAX_PARTIES}")));
    }
    let dim = 1usize << n;
    let coeffs = mermin_coeffs(n);
    let (bound_exp, scale_exp) = if n % 2 == 1 {
        ((n - 1) / 2, (n + 1) / 2)
    } else {
        (n / 2, n / 2)
    };
    let scale = (1u64 << scale_exp) as f64;
    let scaled: Vec<f64> = coeffs.iter().map(|&m| f64::from(m) * scale).collect();
    let c = recover_c(&scaled, n)?.ok_or_else(|| {
        Error::Consistency("scaled Mermin coefficients are not in the Bell family".into())
    })?;

    let canonical = inequality_from_c(&c, n)?;
    debug_assert!((0..dim).all(|j| canonical.hc[j] as f64 == scaled[j]));
    Ok(BellInequality {
        n,
        c,
        hc: canonical.hc,
        coeffs: coeffs.iter().map(|&m| f64::from(m)).collect(),
        bound: (1u64 << bound_exp) as f64,
        scale,
    })
}

/// Integer Mermin coefficients in setting-index order.
fn mermin_coeffs(n: usize) -> Vec<i8> {
    debug_assert!(n >= 1);
    if n % 2 == 1 {
        // Odd n, including the degenerate n = 1 base (single term E(2)).
        let dim = 1usize << n;
        let mut m = vec![0i8; dim];
        for (j, slot) in m.iter_mut().enumerate() {
            let twos = j.count_ones() as usize; // bit set <=> digit 2
            if twos % 2 == 1 {
                *slot = if ((twos - 1) / 2) % 2 == 0 { 1 } else { -1 };
            }
        }
        m
    } else {
        // Even n: coefficients of
        //   M'(n) = M_swap(n-1) (A_n(1) + A_n(2)) + M(n-1) (A_n(1) - A_n(2)),
        // where M(n-1) is the odd form and M_swap its setting-swapped
        // partner; their supports are disjoint, so every entry is +-1.
        let sub = mermin_coeffs(n - 1);
        let sub_dim = sub.len();
        let mut m = vec![0i8; 2 * sub_dim];
        for jp in 0..sub_dim {
            let modd = sub[jp];
            // Swapping digits 1 <-> 2 complements the bits of jp.
            let mswap = sub[!jp & (sub_dim - 1)];
            m[2 * jp] = mswap + modd; // j_n = 1
            m[2 * jp + 1] = mswap - modd; // j_n = 2
        }
        m
    }
}

/// Invert the coefficient transform: the unique `c` with `H c = a`, if its
/// entries are all +-1; `None` otherwise.
pub fn recover_c(a: &[f64], n: usize) -> Result<Option<Vec<i8>>> {
    let dim = 1usize << n;
    if a.len() != dim {
        return Err(Error::invalid(format!(
            "coefficient vector length {} does not match 2^{n}",
            a.len()
        )));
    }
    let h = hadamard(n)?;
    let mut c = Vec::with_capacity(dim);
    for t in 0..dim {
        let mut acc = 0.0;
        for (j, &aj) in a.iter().enumerate() {
            acc += f64::from(h.get(t, j)) * aj;
        }
        let v = acc / dim as f64;
        if (v - 1.0).abs() < 1e-9 {
            c.push(1i8);
        } else if (v + 1.0).abs() < 1e-9 {
            c.push(-1i8);
        } else {
            return Ok(None);
        }
    }
    Ok(Some(c))
}

/// One deterministic local strategy: a +-1 answer per party and setting,
/// with the correlation vector it induces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrategyVertex {
    /// Per party, the answers (q_k(1), q_k(2)).
    pub assignment: Vec<(i8, i8)>,
    /// Exact entries of the induced correlation vector.
    pub entries: Vec<i8>,
}

impl StrategyVertex {
    pub fn correlation_vector(&self) -> CorrelationVector {
        CorrelationVector::new(self.entries.iter().map(|&v| f64::from(v)).collect())
            .expect("vertex entries are +-1")
    }
}

/// All 2^(2n) deterministic strategies with their correlation vectors.
pub fn strategy_vertices(n: usize) -> Result<Vec<StrategyVertex>> {
    if n == 0 || n > 5 {
        return Err(Error::invalid(format!(
            "vertex enumeration supported for 1 <= n <= 5, got {n}"
        )));
    }
    let dim = 1usize << n;
    let mut out = Vec::with_capacity(1 << (2 * n));
    for code in 0..1usize << (2 * n) {
        let assignment: Vec<(i8, i8)> = (0..n)
            .map(|k| {
                let b1 = code >> (2 * (n - 1 - k)) & 1;
                let b2 = code >> (2 * (n - 1 - k) + 1) & 1;
                (
                    if b1 == 0 { 1i8 } else { -1 },
                    if b2 == 0 { 1i8 } else { -1 },
                )
            })
            .collect();
        let mut entries = vec![1i8; dim];
        for (j, entry) in entries.iter_mut().enumerate() {
            let digits = decode_setting(j + 1, n)?;
            let mut prod = 1i8;
            for (k, &jk) in digits.iter().enumerate() {
                let (q1, q2) = assignment[k];
                prod *= if jk == 1 { q1 } else { q2 };
            }
            *entry = prod;
        }
        out.push(StrategyVertex { assignment, entries });
    }
    Ok(out)
}

/// Deduplicated classical correlation vectors (the polytope vertices),
/// sorted for a deterministic order. For every n these are exactly the
/// +- columns of `H_{2^n}`.
pub fn classical_vertices(n: usize) -> Result<Vec<CorrelationVector>> {
    let mut seen: Vec<Vec<i8>> = strategy_vertices(n)?
        .into_iter()
        .map(|v| v.entries)
        .collect();
    seen.sort();
    seen.dedup();
    seen.into_iter()
        .map(|v| CorrelationVector::new(v.into_iter().map(f64::from).collect()))
        .collect()
}

/// Correlation vector of a separable model: a convex mixture of product
/// strategies with per-party single-setting biases `q_k(j) in [-1, 1]`.
///
/// `terms[i]` holds party-ordered pairs `(q_k(1), q_k(2))` for mixture
/// component `i`. The result is guaranteed to lie in the classical
/// polytope.
pub fn separable_e(weights: &[f64], terms: &[Vec<(f64, f64)>]) -> Result<CorrelationVector> {
    if weights.is_empty() || weights.len() != terms.len() {
        return Err(Error::invalid(
            "weights and terms must be nonempty and of equal length",
        ));
    }
    let n = terms[0].len();
    if n == 0 || n > MAX_PARTIES {
        return Err(Error::invalid(format!("unsupported party count {n}")));
    }
    let total: f64 = weights.iter().sum();
    if weights.iter().any(|&w| w < -1e-12) || (total - 1.0).abs() > 1e-9 {
        return Err(Error::invalid(
            "weights must be nonnegative and sum to one",
        ));
    }
    let dim = 1usize << n;
    let mut e = vec![0.0f64; dim];
    for (w, qs) in weights.iter().zip(terms) {
        if qs.len() != n {
            return Err(Error::invalid("inconsistent party count across terms"));
        }
        for &(q1, q2) in qs {
            if q1.abs() > 1.0 + 1e-12 || q2.abs() > 1.0 + 1e-12 {
                return Err(Error::invalid(format!(
                    "bias ({q1}, {q2}) outside [-1, 1]"
                )));
            }
        }
        // Kronecker product of the per-party bias pairs.
        let mut kron = vec![1.0f64];
        for &(q1, q2) in qs {
            let mut next = Vec::with_capacity(kron.len() * 2);
            for &v in &kron {
                next.push(v * q1);
                next.push(v * q2);
            }
            kron = next;
        }
        for (slot, v) in e.iter_mut().zip(kron) {
            *slot += w * v;
        }
    }
    CorrelationVector::new(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn chsh_from_sign_vector() {
        // c(-1,-1) = -1, others +1; eps order (+,+), (+,-), (-,+), (-,-).
        let ineq = inequality_from_c(&[1, 1, 1, -1], 2).unwrap();
        assert_eq!(ineq.hc(), &[2, 2, 2, -2]);
        assert_eq!(ineq.bound(), 4.0);
        assert!(!ineq.is_trivial());
    }

    #[test]
    fn constant_sign_vector() {
        let ineq = inequality_from_c(&[1, 1, 1, 1], 2).unwrap();
        assert_eq!(ineq.hc(), &[4, 0, 0, 0]);
        assert!(ineq.is_trivial());
    }

    #[test]
    fn hadamard_columns_are_trivial() {
        let h = hadamard(2).unwrap();
        for t in 0..4 {
            let c: Vec<i8> = (0..4).map(|r| h.get(r, t) as i8).collect();
            let ineq = inequality_from_c(&c, 2).unwrap();
            assert!(ineq.is_trivial(), "column {t}");
            let nonzero: Vec<i64> = ineq.hc().iter().copied().filter(|&v| v != 0).collect();
            assert_eq!(nonzero.len(), 1);
            assert_eq!(nonzero[0].abs(), 4);
        }
    }

    #[test]
    fn rejects_bad_sign_vectors() {
        assert!(inequality_from_c(&[1, 1, 1], 2).is_err());
        assert!(inequality_from_c(&[1, 1, 0, 1], 2).is_err());
    }

    #[test]
    fn family_counts() {
        let one = all_inequalities(1).unwrap();
        assert_eq!(one.len(), 4);
        assert!(one.iter().all(|q| q.is_trivial()));

        let two = all_inequalities(2).unwrap();
        assert_eq!(two.len(), 16);
        assert_eq!(two.iter().filter(|q| q.is_trivial()).count(), 8);
        // The other eight are CHSH-type: |hc| = (2,2,2,2) in some order.
        for q in two.iter().filter(|q| !q.is_trivial()) {
            let mut mags: Vec<i64> = q.hc().iter().map(|v| v.abs()).collect();
            mags.sort();
            assert_eq!(mags, vec![2, 2, 2, 2]);
        }

        let three = all_inequalities(3).unwrap();
        assert_eq!(three.len(), 256);
        assert_eq!(three.iter().filter(|q| q.is_trivial()).count(), 16);

        assert!(all_inequalities(5).is_err());
    }

    #[test]
    fn margin_on_hadamard_columns() {
        let h = hadamard(2).unwrap();
        for j in 0..4 {
            let e = CorrelationVector::new((0..4).map(|r| h.get(r, j) as f64).collect()).unwrap();
            let mut any_tight = false;
            for idx in 0..16 {
                let ineq = inequality_from_c(&c_from_index(idx, 4), 2).unwrap();
                let m = margin(&e, &ineq).unwrap();
                assert!(m <= 1e-12, "column {j} idx {idx}: margin {m}");
                any_tight |= m.abs() < 1e-12;
            }
            assert!(any_tight);
        }
    }

    #[test]
    fn margin_of_zero_vector() {
        let e = CorrelationVector::new(vec![0.0; 8]).unwrap();
        for idx in [0usize, 3, 100, 255] {
            let ineq = inequality_from_c(&c_from_index(idx, 8), 3).unwrap();
            assert_eq!(margin(&e, &ineq).unwrap(), -8.0);
        }
    }

    #[test]
    fn margin_dimension_mismatch() {
        let e = CorrelationVector::new(vec![0.0; 4]).unwrap();
        let ineq = inequality_from_c(&c_from_index(0, 8), 3).unwrap();
        assert!(margin(&e, &ineq).is_err());
    }

    #[test]
    fn quantum_point_violates_chsh() {
        let s = 0.5f64.sqrt();
        let e = CorrelationVector::new(vec![s, s, s, -s]).unwrap();
        let report = is_member(&e).unwrap();
        assert!(!report.member);
        // Worst margin 2(2 sqrt(2) - 2) = 4 sqrt(2) - 4.
        let expect = 4.0 * 2.0f64.sqrt() - 4.0;
        assert!((report.worst_margin - expect).abs() < 1e-12);
        let chsh = inequality_from_c(&[1, 1, 1, -1], 2).unwrap();
        assert!((margin(&e, &chsh).unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn vertices_are_members_with_tightness() {
        for n in 1..=3 {
            for v in classical_vertices(n).unwrap() {
                let report = is_member(&v).unwrap();
                assert!(report.member);
                assert!(report.worst_margin.abs() < 1e-12, "vertex is tight");
            }
        }
    }

    #[test]
    fn vertex_counts_and_hadamard_columns() {
        for n in 1..=3usize {
            let verts = classical_vertices(n).unwrap();
            assert_eq!(verts.len(), 1 << (n + 1));
            let h = hadamard(n).unwrap();
            let dim = 1usize << n;
            for v in &verts {
                let found = (0..dim).any(|t| {
                    let col: Vec<f64> = (0..dim).map(|r| h.get(r, t) as f64).collect();
                    let plus = col.iter().zip(v.entries()).all(|(a, b)| a == b);
                    let minus = col.iter().zip(v.entries()).all(|(a, b)| -a == *b);
                    plus || minus
                });
                assert!(found, "vertex is a +- Hadamard column");
            }
        }
    }

    #[test]
    fn exterior_points_are_rejected() {
        // Push past each facet along its normal: x = (1 + eps) H c / 2^n
        // violates the c-inequality.
        for n in 1..=3usize {
            let dim = 1usize << n;
            for idx in 0..1usize << dim {
                let ineq = inequality_from_c(&c_from_index(idx, dim), n).unwrap();
                if ineq.is_trivial() {
                    // Trivial facets coincide with the [-1, 1] cube faces;
                    // their exterior lies outside the correlation domain.
                    continue;
                }
                let e: Vec<f64> = ineq
                    .hc()
                    .iter()
                    .map(|&v| 1.0001 * v as f64 / dim as f64)
                    .collect();
                let e = CorrelationVector::new(e).unwrap();
                assert!(margin(&e, &ineq).unwrap() > 0.0);
                assert!(!is_member(&e).unwrap().member);
            }
        }
    }

    #[test]
    fn mermin_two_is_chsh() {
        let m = mermin_inequality(2).unwrap();
        assert_eq!(m.coeffs(), &[1.0, 1.0, 1.0, -1.0]);
        assert_eq!(m.bound(), 2.0);
        assert_eq!(m.scale(), 2.0);
        assert_eq!(m.hc(), &[2, 2, 2, -2]);
        assert_eq!(m.c(), &[1, 1, 1, -1]);
    }

    #[test]
    fn mermin_three_explicit() {
        let m = mermin_inequality(3).unwrap();
        // +E(2,1,1) +E(1,2,1) +E(1,1,2) -E(2,2,2), bound 2.
        let mut expect = vec![0.0; 8];
        expect[encode_setting(&[2, 1, 1]).unwrap() - 1] = 1.0;
        expect[encode_setting(&[1, 2, 1]).unwrap() - 1] = 1.0;
        expect[encode_setting(&[1, 1, 2]).unwrap() - 1] = 1.0;
        expect[encode_setting(&[2, 2, 2]).unwrap() - 1] = -1.0;
        assert_eq!(m.coeffs(), expect.as_slice());
        assert_eq!(m.bound(), 2.0);
    }

    /// Expansion oracle: coefficients of Im prod_k (A_k(1) + i A_k(2)) and
    /// of the even-n two-block combination, extracted numerically by
    /// monomial projection over all +-1 assignments.
    fn mermin_coeff_oracle(n: usize) -> Vec<f64> {
        let dim = 1usize << n;
        let assignments = 1usize << (2 * n);
        let mut coeffs = vec![0.0f64; dim];
        for code in 0..assignments {
            let a: Vec<(f64, f64)> = (0..n)
                .map(|k| {
                    let b1 = code >> (2 * (n - 1 - k)) & 1;
                    let b2 = code >> (2 * (n - 1 - k) + 1) & 1;
                    (
                        if b1 == 0 { 1.0 } else { -1.0 },
                        if b2 == 0 { 1.0 } else { -1.0 },
                    )
                })
                .collect();
            let m_odd = |xs: &[(f64, f64)], swap: bool| -> f64 {
                let mut z = num_complex::Complex64::new(1.0, 0.0);
                for &(q1, q2) in xs {
                    let (u, v) = if swap { (q2, q1) } else { (q1, q2) };
                    z *= num_complex::Complex64::new(u, v);
                }
                z.im
            };
            let value = if n % 2 == 1 {
                m_odd(&a, false)
            } else {
                let (head, tail) = a.split_at(n - 1);
                let (qn1, qn2) = tail[0];
                m_odd(head, true) * (qn1 + qn2) + m_odd(head, false) * (qn1 - qn2)
            };
            for j in 0..dim {
                let digits = decode_setting(j + 1, n).unwrap();
                let mut mono = 1.0;
                for (k, &jk) in digits.iter().enumerate() {
                    mono *= if jk == 1 { a[k].0 } else { a[k].1 };
                }
                coeffs[j] += value * mono;
            }
        }
        coeffs.iter_mut().for_each(|v| *v /= assignments as f64);
        coeffs
    }

    #[test]
    fn mermin_matches_expansion_oracle() {
        for n in 2..=5usize {
            let m = mermin_inequality(n).unwrap();
            let oracle = mermin_coeff_oracle(n);
            for (j, (&got, &want)) in m.coeffs().iter().zip(&oracle).enumerate() {
                assert!((got - want).abs() < 1e-12, "n={n} j={j}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn mermin_five_support_and_signs() {
        let m = mermin_inequality(5).unwrap();
        for (j, &coeff) in m.coeffs().iter().enumerate() {
            let digits = decode_setting(j + 1, 5).unwrap();
            let twos = digits.iter().filter(|&&d| d == 2).count();
            if twos % 2 == 1 {
                let expect = if ((twos - 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
                assert_eq!(coeff, expect, "index {j}");
            } else {
                assert_eq!(coeff, 0.0, "index {j}");
            }
        }
        assert_eq!(m.bound(), 4.0);
    }

    #[test]
    fn mermin_is_tight_on_vertices() {
        // max over deterministic strategies equals the classical bound.
        for n in 2..=5usize {
            let m = mermin_inequality(n).unwrap();
            let mut best = f64::NEG_INFINITY;
            for v in strategy_vertices(n).unwrap() {
                let val: f64 = m
                    .coeffs()
                    .iter()
                    .zip(&v.entries)
                    .map(|(&a, &q)| a * f64::from(q))
                    .sum();
                best = best.max(val.abs());
            }
            assert!(
                (best - m.bound()).abs() < 1e-12,
                "n={n}: classical max {best} vs bound {}",
                m.bound()
            );
        }
    }

    #[test]
    fn recover_c_on_scaled_mermin() {
        for n in 2..=5usize {
            let m = mermin_inequality(n).unwrap();
            let scaled: Vec<f64> = m.coeffs().iter().map(|&v| v * m.scale()).collect();
            let c = recover_c(&scaled, n).unwrap();
            assert!(c.is_some(), "n={n}");
            assert_eq!(c.unwrap(), m.c());
        }
    }

    #[test]
    fn recover_c_failure() {
        let mut a = vec![0.0; 4];
        a[0] = 1.0;
        assert!(recover_c(&a, 2).unwrap().is_none());
    }

    #[test]
    fn global_sign_flip_pairs() {
        for n in 1..=3usize {
            let dim = 1usize << n;
            for idx in 0..1usize << dim {
                let c = c_from_index(idx, dim);
                let neg: Vec<i8> = c.iter().map(|&s| -s).collect();
                let a = inequality_from_c(&c, n).unwrap();
                let b = inequality_from_c(&neg, n).unwrap();
                let flipped: Vec<i64> = a.hc().iter().map(|&v| -v).collect();
                assert_eq!(b.hc(), flipped.as_slice());
            }
        }
    }

    #[test]
    fn separable_all_ones() {
        let e = separable_e(&[1.0], &[vec![(1.0, 1.0), (1.0, 1.0)]]).unwrap();
        assert_eq!(e.entries(), &[1.0, 1.0, 1.0, 1.0]);
        let all_plus = inequality_from_c(&[1, 1, 1, 1], 2).unwrap();
        assert_eq!(margin(&e, &all_plus).unwrap(), 0.0);
        assert!(is_member(&e).unwrap().member);
    }

    #[test]
    fn separable_cancellation() {
        let e = separable_e(
            &[0.5, 0.5],
            &[
                vec![(1.0, 1.0), (1.0, 1.0)],
                vec![(-1.0, -1.0), (1.0, 1.0)],
            ],
        )
        .unwrap();
        assert!(e.entries().iter().all(|&v| v == 0.0));
        assert!(is_member(&e).unwrap().member);
    }

    #[test]
    fn separable_rejects_bad_weights() {
        assert!(separable_e(&[0.5, 0.6], &[vec![(0.0, 0.0)], vec![(0.0, 0.0)]]).is_err());
        assert!(separable_e(&[-0.1, 1.1], &[vec![(0.0, 0.0)], vec![(0.0, 0.0)]]).is_err());
        assert!(separable_e(&[1.0], &[vec![(1.5, 0.0)]]).is_err());
    }

    #[test]
    fn random_separable_mixtures_are_members() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for n in 2..=3usize {
            for _ in 0..200 {
                let terms: Vec<Vec<(f64, f64)>> = (0..3)
                    .map(|_| {
                        (0..n)
                            .map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                            .collect()
                    })
                    .collect();
                let mut w: Vec<f64> = (0..3).map(|_| rng.gen_range(0.0..1.0)).collect();
                let total: f64 = w.iter().sum();
                w.iter_mut().for_each(|v| *v /= total);
                let e = separable_e(&w, &terms).unwrap();
                assert!(is_member(&e).unwrap().member);
            }
        }
    }

    proptest! {
        #[test]
        fn recover_round_trips_every_c(idx in 0usize..256) {
            let c = c_from_index(idx, 8);
            let ineq = inequality_from_c(&c, 3).unwrap();
            let a: Vec<f64> = ineq.hc().iter().map(|&v| v as f64).collect();
            let back = recover_c(&a, 3).unwrap().unwrap();
            prop_assert_eq!(back, c);
        }

        #[test]
        fn c_index_round_trip(idx in 0usize..(1 << 16)) {
            let c = c_from_index(idx, 16);
            prop_assert_eq!(c_to_index(&c), idx);
        }
    }
}
