//! Exact dyadic rationals: `num / 2^exp` with an arbitrary-precision numerator.
//!
//! Values are kept normalized (odd numerator, or `exp == 0`), so structural
//! equality coincides with numeric equality.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: BigInt,
    exp: u64,
}

impl Dyadic {
    pub fn new(num: BigInt, exp: u64) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let tz = num.trailing_zeros().unwrap_or(0);
        let shift = tz.min(exp);
        Self {
            num: num >> shift,
            exp: exp - shift,
        }
    }

    pub fn zero() -> Self {
        Self {
            num: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn from_integer(v: i64) -> Self {
        Self {
            num: BigInt::from(v),
            exp: 0,
        }
    }

    /// `2^-d`.
    pub fn pow2_neg(d: u64) -> Self {
        Self {
            num: BigInt::one(),
            exp: d,
        }
    }

    /// `2 - 2^-d`.
    pub fn two_minus_pow2_neg(d: u64) -> Self {
        if d == 0 {
            return Self::from_integer(1);
        }
        // (2^(d+1) - 1) / 2^d is already odd over 2^d.
        let num = (BigInt::one() << (d + 1)) - BigInt::one();
        Self { num, exp: d }
    }

    pub fn numerator(&self) -> &BigInt {
        &self.num
    }

    /// Exponent `e` of the reduced denominator `2^e`.
    pub fn denominator_exponent(&self) -> u64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.exp == 0
    }

    pub fn to_integer(&self) -> Option<i64> {
        if self.exp == 0 {
            self.num.to_i64()
        } else {
            None
        }
    }

    pub fn signum(&self) -> Ordering {
        if self.num.is_positive() {
            Ordering::Greater
        } else if self.num.is_negative() {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }

    /// Nearest-ish `f64`; for display and plotting only.
    pub fn to_f64(&self) -> f64 {
        let bits = self.num.bits();
        let (num, exp) = if bits > 64 {
            let s = bits - 64;
            (&self.num >> s, self.exp as i128 - s as i128)
        } else {
            (self.num.clone(), self.exp as i128)
        };
        let mantissa = num.to_f64().unwrap_or(0.0);
        let exp = exp.clamp(-2000, 2000) as i32;
        mantissa * 2f64.powi(-exp)
    }

    fn aligned(&self, exp: u64) -> BigInt {
        &self.num << (exp - self.exp)
    }
}

impl Default for Dyadic {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for Dyadic {
    fn from(v: i64) -> Self {
        Self::from_integer(v)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if self.exp == other.exp {
            return self.num.cmp(&other.num);
        }
        let e = self.exp.max(other.exp);
        self.aligned(e).cmp(&other.aligned(e))
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        let e = self.exp.max(rhs.exp);
        Dyadic::new(self.aligned(e) + rhs.aligned(e), e)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        let e = self.exp.max(rhs.exp);
        Dyadic::new(self.aligned(e) - rhs.aligned(e), e)
    }
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        &self + &rhs
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: Dyadic) -> Dyadic {
        &self - &rhs
    }
}

impl AddAssign<&Dyadic> for Dyadic {
    fn add_assign(&mut self, rhs: &Dyadic) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Dyadic> for Dyadic {
    fn sub_assign(&mut self, rhs: &Dyadic) {
        *self = &*self - rhs;
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            num: -self.num,
            exp: self.exp,
        }
    }
}

impl Sum for Dyadic {
    fn sum<I: Iterator<Item = Dyadic>>(iter: I) -> Self {
        iter.fold(Dyadic::zero(), |acc, x| &acc + &x)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/2^{}", self.num, self.exp)
        }
    }
}
