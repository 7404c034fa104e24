//! Exact rational helpers shared by every norm computation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

/// Exact rational number, always kept in reduced form with positive denominator.
pub type Rat = BigRational;

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_u(num: u128, den: u128) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: u128) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Binomial coefficient as a 128-bit integer. Panics on overflow.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

pub fn binomial_i(n: i64, k: i64) -> u128 {
    if n < 0 || k < 0 || k > n {
        0
    } else {
        binomial(n as u64, k as u64)
    }
}

/// `base^exp` for a signed exponent, exact.
pub fn pow(base: &Rat, exp: i64) -> Rat {
    if exp >= 0 {
        num_traits::pow(base.clone(), exp as usize)
    } else {
        num_traits::pow(base.recip(), (-exp) as usize)
    }
}

pub fn to_f64(r: &Rat) -> f64 {
    match r.to_f64() {
        Some(v) if v != 0.0 || r.is_zero() => v,
        _ => 2f64.powf(log2(r)),
    }
}

/// Base-2 logarithm of a positive rational, accurate to roughly f64 precision
/// even when the value under- or overflows f64.
pub fn log2(r: &Rat) -> f64 {
    assert!(r.is_positive(), "log2 of non-positive rational");
    fn log2_int(n: &BigInt) -> f64 {
        let bits = n.bits();
        if bits <= 1000 {
            n.to_f64().unwrap().log2()
        } else {
            let shift = bits - 64;
            let top = (n >> shift).to_f64().unwrap();
            top.log2() + shift as f64
        }
    }
    log2_int(r.numer()) - log2_int(r.denom())
}

/// Smallest rational of the form `m / 2^bits` (with `m >= 1`) whose `2^levels`-th
/// power is at least `target`.
pub fn dyadic_root_ceil(target: &Rat, levels: u32, bits: u32) -> Rat {
    let den = BigInt::one() << bits;
    let exp = 1i64 << levels;
    let guess = if target.is_positive() {
        (2f64.powf(log2(target) / exp as f64) * 2f64.powi(bits as i32)).ceil()
    } else {
        1.0
    };
    let mut m = BigInt::from(guess.max(1.0) as u64);
    let ok = |m: &BigInt| &pow(&Rat::new(m.clone(), den.clone()), exp) >= target;
    while !ok(&m) {
        m += 1;
    }
    while m > BigInt::one() && ok(&(&m - 1)) {
        m -= 1;
    }
    Rat::new(m, den)
}

pub fn gcd_u128(a: u128, b: u128) -> u128 {
    a.gcd(&b)
}

/// JSON form `{"num": .., "den": ..}`; integers that do not fit an i64 are
/// written as decimal strings.
pub struct RatJson<'a>(pub &'a Rat);

impl Serialize for RatJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Rat", 2)?;
        match (self.0.numer().to_i64(), self.0.denom().to_i64()) {
            (Some(n), Some(d)) => {
                st.serialize_field("num", &n)?;
                st.serialize_field("den", &d)?;
            }
            _ => {
                st.serialize_field("num", &self.0.numer().to_string())?;
                st.serialize_field("den", &self.0.denom().to_string())?;
            }
        }
        st.end()
    }
}

pub(crate) mod serde_rat {
    use super::{Rat, RatJson};
    use serde::{Serialize, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        RatJson(r).serialize(s)
    }
}

/// A rational that may be `+inf` (minimum over an empty candidate set).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Extended {
    Finite(Rat),
    Infinite,
}

impl Extended {
    pub fn finite(&self) -> Option<&Rat> {
        match self {
            Extended::Finite(r) => Some(r),
            Extended::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Extended::Infinite)
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Extended::Finite(r) => r.is_positive(),
            Extended::Infinite => true,
        }
    }
}

impl Serialize for Extended {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Extended::Finite(r) => RatJson(r).serialize(s),
            Extended::Infinite => s.serialize_str("inf"),
        }
    }
}

impl std::fmt::Display for Extended {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Extended::Finite(r) => write!(f, "{r}"),
            Extended::Infinite => write!(f, "inf"),
        }
    }
}
