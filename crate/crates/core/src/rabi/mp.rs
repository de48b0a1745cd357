//! Multiprecision helpers for the Braak engine.
//!
//! The G-series and the Fock-space reconstruction cancel roughly `1.2 g^2`
//! decimal digits in deep-strong coupling, which double precision cannot
//! absorb past g ~ 3. Everything on the root-polishing and reconstruction
//! path therefore runs in binary floats of adaptive width.

use dashu_float::round::mode::HalfEven;
use dashu_float::ops::{Abs, EstimatedLog2};
use dashu_float::FBig;

pub(crate) type Mp = FBig<HalfEven, 2>;

pub(crate) fn mp(x: f64, prec: usize) -> Mp {
    Mp::try_from(x).expect("finite f64").with_precision(prec).value()
}

pub(crate) fn mp_int(n: usize, prec: usize) -> Mp {
    Mp::from(n as u64).with_precision(prec).value()
}

pub(crate) fn to_f64(x: &Mp) -> f64 {
    x.to_f64().value()
}

pub(crate) fn abs(x: &Mp) -> Mp {
    x.clone().abs()
}

/// `log2 |x|` to within a fraction of a bit; `-inf` for zero. Unlike
/// `to_f64` this neither underflows nor overflows.
pub(crate) fn log2_abs(x: &Mp) -> f64 {
    x.log2_est() as f64
}

pub(crate) fn is_negative(x: &Mp) -> bool {
    *x < Mp::ZERO
}

/// Working precision in bits for coupling `g`: enough digits to survive
/// the cancellation at large g and the `g^-n` amplification at small g.
pub fn working_precision(g: f64) -> usize {
    let small_g = if g > 0.0 { (1.0 / g).log10().max(0.0) } else { 0.0 };
    let digits = 24.0 + 1.25 * g * g + 8.0 * small_g;
    let bits = (digits * std::f64::consts::LOG2_10).ceil() as usize;
    bits.div_ceil(64) * 64
}
