//! Binary multi-index codecs and the correlation-matrix algebra: the
//! Hadamard matrices `H_{2^n}`, the coefficient matrix `E_n` relating
//! correlation vectors to joint probabilities, and the block matrix `A_n`
//! appearing in its factorization `E_n = H A_n` (after column arrangement).
//!
//! Conventions fixed here and relied on everywhere else:
//!
//! * Setting digits take values 1 and 2. A digit tuple `(j_1, ..., j_n)`
//!   encodes to `j = (j_1 - 1) 2^(n-1) + ... + (j_{n-1} - 1) 2 + j_n`,
//!   a bijection onto `1..=2^n`.
//! * Outcome digits take values +1 and -1 and are ordered party-major:
//!   `(i_1(1), i_1(2), i_2(1), i_2(2), ..., i_n(1), i_n(2))`. Value +1 sits
//!   in the first digit position and -1 in the second of the positional
//!   base-2 expansion, mirroring the setting encoding.
//!
//! The outcome convention is not arbitrary: it is the one under which the
//! column rearrangement of `E_n` into `(H, -H, ..., H, -H)` exists in the
//! interleaved form computed by [`block_permutation`], and that function
//! re-verifies the factorization entry by entry on every call.

use ndarray::Array2;

use crate::error::{Error, Result};

/// Matrices over {-1, 0, +1}. Hadamard and coefficient matrices use only
/// +-1 entries; the block matrix `A_n` also contains zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignMatrix(Array2<i32>);

impl SignMatrix {
    fn from_array(a: Array2<i32>) -> Self {
        debug_assert!(a.iter().all(|&v| (-1..=1).contains(&v)));
        SignMatrix(a)
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn get(&self, r: usize, c: usize) -> i32 {
        self.0[[r, c]]
    }

    pub fn as_array(&self) -> &Array2<i32> {
        &self.0
    }

    /// True when every entry is exactly +-1 (no zeros).
    pub fn is_pm_one(&self) -> bool {
        self.0.iter().all(|&v| v == 1 || v == -1)
    }

    /// Matrix product with another sign matrix, in plain integer arithmetic.
    pub fn matmul(&self, rhs: &SignMatrix) -> Array2<i32> {
        let (m, k) = (self.rows(), self.cols());
        let n = rhs.cols();
        assert_eq!(k, rhs.rows());
        let mut out = Array2::zeros((m, n));
        for i in 0..m {
            for j in 0..n {
                let mut acc = 0;
                for t in 0..k {
                    acc += self.0[[i, t]] * rhs.0[[t, j]];
                }
                out[[i, j]] = acc;
            }
        }
        out
    }
}

/// Largest supported party count. `E_6` is 64 x 4096, already past every
/// use in this crate; larger `n` only burns memory.
pub const MAX_PARTIES: usize = 6;

fn check_parties(n: usize) -> Result<()> {
    if n > MAX_PARTIES {
        Err(Error::capacity(format!(
            "n = {n} exceeds the supported maximum of {MAX_PARTIES} parties"
        )))
    } else {
        Ok(())
    }
}

/// A tuple of setting digits in {1, 2} together with its linear encoding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SettingIndex {
    digits: Vec<u8>,
    linear: usize,
}

impl SettingIndex {
    pub fn from_digits(digits: &[u8]) -> Result<Self> {
        let linear = encode_setting(digits)?;
        Ok(SettingIndex {
            digits: digits.to_vec(),
            linear,
        })
    }

    pub fn from_linear(linear: usize, n: usize) -> Result<Self> {
        let digits = decode_setting(linear, n)?;
        Ok(SettingIndex { digits, linear })
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    /// One-based linear index in `1..=2^n`.
    pub fn linear(&self) -> usize {
        self.linear
    }
}

/// A tuple of 2n outcome digits in {+1, -1}, party-major, with its linear
/// encoding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutcomeIndex {
    digits: Vec<i8>,
    linear: usize,
}

impl OutcomeIndex {
    pub fn from_digits(digits: &[i8]) -> Result<Self> {
        let linear = encode_outcome(digits)?;
        Ok(OutcomeIndex {
            digits: digits.to_vec(),
            linear,
        })
    }

    pub fn from_linear(linear: usize, n: usize) -> Result<Self> {
        let digits = decode_outcome(linear, n)?;
        Ok(OutcomeIndex { digits, linear })
    }

    pub fn digits(&self) -> &[i8] {
        &self.digits
    }

    /// One-based linear index in `1..=2^(2n)`.
    pub fn linear(&self) -> usize {
        self.linear
    }

    /// The outcome value `i_k(j)` for party `k` (zero-based) and setting
    /// digit `j` in {1, 2}.
    pub fn value(&self, party: usize, setting: u8) -> i8 {
        self.digits[2 * party + (setting - 1) as usize]
    }
}

/// Encode setting digits in {1, 2} to the linear index in `1..=2^n`.
pub fn encode_setting(digits: &[u8]) -> Result<usize> {
    if digits.is_empty() {
        return Err(Error::invalid("empty setting tuple"));
    }
    check_parties(digits.len())?;
    let mut acc = 0usize;
    for &d in digits {
        if d != 1 && d != 2 {
            return Err(Error::invalid(format!("setting digit {d} not in {{1, 2}}")));
        }
        acc = acc * 2 + (d - 1) as usize;
    }
    Ok(acc + 1)
}

/// Decode the linear index in `1..=2^n` back to setting digits.
pub fn decode_setting(linear: usize, n: usize) -> Result<Vec<u8>> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    check_parties(n)?;
    let cap = 1usize << n;
    if linear < 1 || linear > cap {
        return Err(Error::invalid(format!(
            "linear setting index {linear} outside 1..={cap}"
        )));
    }
    let mut rem = linear - 1;
    let mut digits = vec![1u8; n];
    for k in (0..n).rev() {
        digits[k] = (rem % 2) as u8 + 1;
        rem /= 2;
    }
    Ok(digits)
}

/// Encode 2n outcome digits (+-1, party-major) to the linear index in
/// `1..=2^(2n)`. Value +1 maps to binary digit 0, value -1 to 1.
pub fn encode_outcome(digits: &[i8]) -> Result<usize> {
    if digits.is_empty() || digits.len() % 2 != 0 {
        return Err(Error::invalid(format!(
            "outcome tuple length {} is not 2n",
            digits.len()
        )));
    }
    check_parties(digits.len() / 2)?;
    let mut acc = 0usize;
    for &d in digits {
        let bit = match d {
            1 => 0usize,
            -1 => 1usize,
            _ => {
                return Err(Error::invalid(format!(
                    "outcome digit {d} not in {{+1, -1}}"
                )))
            }
        };
        acc = acc * 2 + bit;
    }
    Ok(acc + 1)
}

/// Decode the linear index in `1..=2^(2n)` back to 2n outcome digits.
pub fn decode_outcome(linear: usize, n: usize) -> Result<Vec<i8>> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    check_parties(n)?;
    let cap = 1usize << (2 * n);
    if linear < 1 || linear > cap {
        return Err(Error::invalid(format!(
            "linear outcome index {linear} outside 1..={cap}"
        )));
    }
    let mut rem = linear - 1;
    let mut digits = vec![1i8; 2 * n];
    for k in (0..2 * n).rev() {
        digits[k] = if rem % 2 == 0 { 1 } else { -1 };
        rem /= 2;
    }
    Ok(digits)
}

/// The 2^n x 2^n Hadamard matrix `H_2 (x) ... (x) H_2` (n factors);
/// `hadamard(0)` is the 1 x 1 identity.
pub fn hadamard(n: usize) -> Result<SignMatrix> {
    check_parties(n)?;
    let dim = 1usize << n;
    let mut h = Array2::from_elem((dim, dim), 1i32);
    for r in 0..dim {
        for c in 0..dim {
            // Entry is (-1)^(popcount(r & c)) in 0-based indexing.
            if ((r & c).count_ones() & 1) == 1 {
                h[[r, c]] = -1;
            }
        }
    }
    Ok(SignMatrix::from_array(h))
}

/// The 2^n x 2^(2n) coefficient matrix with entry
/// `(j, i) -> i_1(j_1) ... i_n(j_n)` in the module's index conventions.
pub fn emat(n: usize) -> Result<SignMatrix> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    check_parties(n)?;
    let rows = 1usize << n;
    let cols = 1usize << (2 * n);
    let mut e = Array2::from_elem((rows, cols), 1i32);
    for i in 0..cols {
        let outcome = decode_outcome(i + 1, n)?;
        for j in 0..rows {
            let setting = decode_setting(j + 1, n)?;
            let mut prod = 1i32;
            for (k, &jk) in setting.iter().enumerate() {
                prod *= i32::from(outcome[2 * k + (jk - 1) as usize]);
            }
            e[[j, i]] = prod;
        }
    }
    Ok(SignMatrix::from_array(e))
}

/// The 2^n x 2^(2n) block matrix `(I, -I, I, -I, ...)` with 2^n identity
/// blocks of size 2^n.
pub fn amat(n: usize) -> Result<SignMatrix> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    check_parties(n)?;
    let dim = 1usize << n;
    let mut a = Array2::zeros((dim, dim * dim));
    for block in 0..dim {
        let sign = if block % 2 == 0 { 1 } else { -1 };
        for r in 0..dim {
            a[[r, block * dim + r]] = sign;
        }
    }
    Ok(SignMatrix::from_array(a))
}

/// Column arrangement carrying `emat(n)` into the block form
/// `(H, -H, ..., H, -H)`.
///
/// The returned vector `perm` is zero-based and satisfies
/// `emat[.., perm[c]] == block_form[.., c]`, i.e. column `c` of the block
/// form is column `perm[c]` of `E_n`. Construction: a column of `E_n`
/// decomposes per party into a sign `s_k = i_k(1)` and a pattern digit
/// `r_k` (1 when the party's outcome pair is constant, 2 when it flips),
/// giving the column as `(prod_k s_k) . H[.., r]`; columns are then routed
/// to the alternating blocks by the parity of `prod s_k`, with the sign
/// tuples of each parity class enumerated in their encoding order.
///
/// The factorization is re-verified entry by entry before returning; a
/// failure signals a broken digit-mapping convention, not bad input.
pub fn block_permutation(n: usize) -> Result<Vec<usize>> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    check_parties(n)?;
    let dim = 1usize << n;
    let cols = dim * dim;

    // Group columns by the sign tuple (s_1, ..., s_n); within a tuple,
    // index by the pattern digits r. Sign tuples are ranked inside their
    // parity class by the same base-2 encoding as settings (+1 -> 0).
    let mut plus_rank = vec![usize::MAX; dim];
    let mut minus_rank = vec![usize::MAX; dim];
    {
        let (mut np, mut nm) = (0, 0);
        for code in 0..dim {
            if (code.count_ones() & 1) == 0 {
                plus_rank[code] = np;
                np += 1;
            } else {
                minus_rank[code] = nm;
                nm += 1;
            }
        }
    }

    let mut perm = vec![usize::MAX; cols];
    for i in 0..cols {
        let outcome = decode_outcome(i + 1, n)?;
        let mut sign_code = 0usize; // bit k set when s_k = -1
        let mut r_digits = vec![1u8; n];
        for k in 0..n {
            let v1 = outcome[2 * k];
            let v2 = outcome[2 * k + 1];
            if v1 == -1 {
                sign_code |= 1 << (n - 1 - k);
            }
            r_digits[k] = if v1 == v2 { 1 } else { 2 };
        }
        let r = encode_setting(&r_digits)? - 1;
        let block = if (sign_code.count_ones() & 1) == 0 {
            2 * plus_rank[sign_code]
        } else {
            2 * minus_rank[sign_code] + 1
        };
        perm[block * dim + r] = i;
    }
    debug_assert!(perm.iter().all(|&p| p != usize::MAX));

    // Entry-wise verification against (H, -H, ..., H, -H).
    let e = emat(n)?;
    let h = hadamard(n)?;
    for c in 0..cols {
        let block = c / dim;
        let within = c % dim;
        let sign = if block % 2 == 0 { 1 } else { -1 };
        for row in 0..dim {
            if e.get(row, perm[c]) != sign * h.get(row, within) {
                return Err(Error::Consistency(format!(
                    "block arrangement mismatch at row {row}, column {c}"
                )));
            }
        }
    }
    Ok(perm)
}
