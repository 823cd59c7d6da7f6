//! Fixed-point decimal rendering of exact rationals.
//!
//! Reports compare at a handful of decimal places, so the library renders
//! exact rationals itself instead of going through `f64`: scale, divide,
//! and round the remainder half-to-even.

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Signed;
use std::cmp::Ordering;

/// Renders `x` with exactly `decimals` digits after the point, rounding
/// ties to the even last digit.
pub fn decimal_string(x: &BigRational, decimals: usize) -> String {
    let num = x.numer().abs().to_biguint().expect("abs is nonnegative");
    let den = x.denom().abs().to_biguint().expect("abs is nonnegative");
    let scale = BigUint::from(10u32).pow(decimals as u32);
    let (mut q, r) = (num * scale).div_rem(&den);
    match (&r + &r).cmp(&den) {
        Ordering::Greater => q += 1u32,
        Ordering::Equal if q.is_odd() => q += 1u32,
        _ => {}
    }
    let sign = if x.is_negative() { "-" } else { "" };
    let mut digits = q.to_string();
    if decimals == 0 {
        return format!("{sign}{digits}");
    }
    if digits.len() <= decimals {
        digits = format!("{:0>width$}", digits, width = decimals + 1);
    }
    let split = digits.len() - decimals;
    format!("{sign}{}.{}", &digits[..split], &digits[split..])
}

/// Renders `x` as a percentage (`x * 100`) with `decimals` digits.
pub fn percent_string(x: &BigRational, decimals: usize) -> String {
    decimal_string(&(x * BigRational::from_integer(100.into())), decimals)
}

/// Exact-rational to `f64`, for metric computations and report columns.
pub fn to_f64(x: &BigRational) -> f64 {
    num_traits::ToPrimitive::to_f64(x).unwrap_or(f64::NAN)
}
