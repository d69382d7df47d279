//! Log-range scalar helpers.
//!
//! Normalization constants like `β_p` grow past `e^{2500}` for the mode
//! ranges the experiments sweep, so everything that multiplies or divides
//! them is carried either as `ln`-magnitudes or as [`ScaledF64`] values
//! `m · 2^e` with `m` in normal `f64` range. Scaling by powers of two is
//! exact, so no precision is lost relative to plain `f64` where the plain
//! value is representable.

use alloc::vec::Vec;
use num_traits::Float;

/// A real number `m * 2^e` with the mantissa kept in normal range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledF64 {
    pub m: f64,
    pub e: i32,
}

impl ScaledF64 {
    pub const ZERO: Self = ScaledF64 { m: 0.0, e: 0 };

    pub fn new(m: f64, e: i32) -> Self {
        ScaledF64 { m, e }
    }

    /// Collapse to `f64`, under/overflowing gracefully.
    pub fn to_f64(self) -> f64 {
        libm::scalbn(self.m, self.e)
    }

    /// Natural log of the absolute value (`-inf` for zero).
    pub fn ln_abs(self) -> f64 {
        if self.m == 0.0 {
            f64::NEG_INFINITY
        } else {
            self.m.abs().ln() + self.e as f64 * core::f64::consts::LN_2
        }
    }

    pub fn signum(self) -> f64 {
        if self.m == 0.0 {
            0.0
        } else {
            self.m.signum()
        }
    }

    /// Exact ratio `self / other` as `f64`; both operands scaled, the
    /// exponent difference applied by `scalbn` (exact).
    pub fn ratio(self, other: ScaledF64) -> f64 {
        libm::scalbn(self.m / other.m, self.e - other.e)
    }
}

/// `ln(Σ exp(x_i))` over a slice, stable against overflow.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let mut hi = f64::NEG_INFINITY;
    for &x in xs {
        if x > hi {
            hi = x;
        }
    }
    if hi == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let mut acc = 0.0;
    for &x in xs {
        acc += (x - hi).exp();
    }
    hi + acc.ln()
}

/// Two-term `log_sum_exp`.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// Running maximum of an iterator of floats, `-inf` when empty.
pub fn max_of(xs: impl Iterator<Item = f64>) -> f64 {
    xs.fold(f64::NEG_INFINITY, f64::max)
}

/// Collects `f(i)` for `i` in `0..n` into a vector (small convenience used
/// by table builders).
pub fn tabulate(n: usize, f: impl Fn(usize) -> f64) -> Vec<f64> {
    (0..n).map(f).collect()
}
