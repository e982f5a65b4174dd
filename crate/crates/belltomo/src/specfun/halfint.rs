use std::fmt;
use std::ops::Neg;

/// A half-integer stored as its exact doubled value, so that spin
/// projections can be indexed and compared without floating point.
///
/// `HalfInt::new(3)` is 3/2, `HalfInt::from_int(2)` is 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInt(i32);

impl HalfInt {
    /// Construct from the doubled value: `new(2j)` represents `j`.
    pub const fn new(twice: i32) -> Self {
        HalfInt(twice)
    }

    pub const fn from_int(v: i32) -> Self {
        HalfInt(2 * v)
    }

    pub const ZERO: HalfInt = HalfInt(0);
    pub const HALF: HalfInt = HalfInt(1);
    pub const MINUS_HALF: HalfInt = HalfInt(-1);
    pub const ONE: HalfInt = HalfInt(2);

    /// The doubled value `2j`.
    pub const fn twice(self) -> i32 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub const fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// True when `self` and `other` differ by an integer, i.e. live on the
    /// same projection lattice.
    pub const fn same_lattice(self, other: HalfInt) -> bool {
        (self.0 - other.0) % 2 == 0
    }

    pub const fn abs(self) -> HalfInt {
        HalfInt(self.0.abs())
    }

    /// Projections `-j, -j+1, ..., j` for `self = j`.
    pub fn projections(self) -> impl Iterator<Item = HalfInt> {
        let tj = self.0;
        (0..=tj.max(0)).map(move |i| HalfInt(-tj + 2 * i))
    }

    /// (-1)^(self - other), defined whenever the difference is an integer.
    pub fn phase_diff(self, other: HalfInt) -> f64 {
        debug_assert!(self.same_lattice(other));
        if ((self.0 - other.0) / 2) % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl std::ops::Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl std::ops::Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 - rhs.0)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}
