//! Exact integer helpers and high-precision evaluation of expressions of
//! the form `p + q·√r` with rational `p`, `q`, `r`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Bits of fractional precision used for the square root.
const SQRT_BITS: u32 = 160;

/// Guard band subtracted before taking a ceiling of a real lower bound.
pub const CEIL_GUARD: f64 = 1e-9;

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    u64::try_from(acc).expect("binomial overflows u64")
}

pub fn big_binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(x: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(x.into())
}

/// `p + q·√r`, exact until evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct Surd {
    pub p: BigRational,
    pub q: BigRational,
    pub r: BigRational,
}

impl Surd {
    pub fn new(p: BigRational, q: BigRational, r: BigRational) -> Self {
        assert!(!r.is_negative(), "negative radicand");
        Self { p, q, r }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self { p: &self.p * c, q: &self.q * c, r: self.r.clone() }
    }

    /// Rational approximation with absolute error below `|q|·2^-SQRT_BITS`.
    pub fn approx(&self) -> BigRational {
        &self.p + &self.q * sqrt_rational(&self.r)
    }

    pub fn to_f64(&self) -> f64 {
        self.approx().to_f64().expect("finite")
    }

    /// Exact sign of the value: `-1`, `0` or `1`.
    pub fn signum(&self) -> i32 {
        // p + q√r  vs 0, with √r ≥ 0
        let sp = sign(&self.p);
        let sq = if self.r.is_zero() { 0 } else { sign(&self.q) };
        if sq == 0 {
            return sp;
        }
        if sp == 0 || sp == sq {
            return if sp == 0 { sq } else { sp };
        }
        // opposite signs: compare p² with q²r
        let lhs = &self.p * &self.p;
        let rhs = &self.q * &self.q * &self.r;
        match lhs.cmp(&rhs) {
            std::cmp::Ordering::Greater => sp,
            std::cmp::Ordering::Less => sq,
            std::cmp::Ordering::Equal => 0,
        }
    }
}

fn sign(x: &BigRational) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Floor-truncated square root to `SQRT_BITS` fractional bits.
fn sqrt_rational(r: &BigRational) -> BigRational {
    let (num, den) = (r.numer(), r.denom());
    // √(a/b) = √(a·b) / b
    let scaled: BigInt = (num * den) << (2 * SQRT_BITS);
    let root = scaled.sqrt();
    BigRational::new(root, den << SQRT_BITS)
}

/// `⌈x − guard⌉`, clamped at zero.
pub fn guarded_ceil(x: f64) -> u64 {
    let c = (x - CEIL_GUARD).ceil();
    if c <= 0.0 {
        0
    } else {
        c as u64
    }
}
