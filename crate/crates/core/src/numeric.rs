//! Exact rational helpers: decimal rounding, formatting and parsing, powers
//! with rational exponents, and a rigorous enclosure of e².
//!
//! High-precision reals are carried as `BigRational` values. A value "at
//! precision d" is a rational that has been rounded to d significant decimal
//! digits, so every printed decimal converts back to the same rational.

use num::bigint::Sign;
use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub fn pow10(k: u32) -> BigInt {
    num::pow(BigInt::from(10u32), k as usize)
}

/// 10^e as a rational, for any sign of e.
pub fn ten_to(e: i64) -> BigRational {
    if e >= 0 {
        BigRational::from_integer(pow10(e as u32))
    } else {
        BigRational::new(BigInt::one(), pow10((-e) as u32))
    }
}

pub fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// floor(log10 |q|). Panics on zero.
pub fn floor_log10(q: &BigRational) -> i64 {
    assert!(!q.is_zero(), "floor_log10 of zero");
    let q = q.abs();
    let bits = q.numer().bits() as i64 - q.denom().bits() as i64;
    let mut e = (bits as f64 * std::f64::consts::LOG10_2).floor() as i64;
    loop {
        if q < ten_to(e) {
            e -= 1;
        } else if q >= ten_to(e + 1) {
            e += 1;
        } else {
            return e;
        }
    }
}

/// Nearest multiple of 10^-scale, ties away from zero.
pub fn round_to_scale(q: &BigRational, scale: i64) -> BigRational {
    let factor = ten_to(scale);
    BigRational::from_integer((q * &factor).round().to_integer()) / factor
}

/// Round to `digits` significant decimal digits.
pub fn round_sig(q: &BigRational, digits: u32) -> BigRational {
    if q.is_zero() {
        return BigRational::zero();
    }
    let scale = digits as i64 - 1 - floor_log10(q);
    round_to_scale(q, scale)
}

/// Decimal rendering with at most `digits` significant digits.
///
/// Positional notation is used for decimal exponents in [-7, 21), scientific
/// (`1.25e-52`) otherwise. Trailing zeros are trimmed, so values that are
/// exactly representable print in their shortest form.
pub fn to_decimal_string(q: &BigRational, digits: u32) -> String {
    let r = round_sig(q, digits.max(1));
    if r.is_zero() {
        return "0".to_string();
    }
    let e = floor_log10(&r);
    let mut scale = digits.max(1) as i64 - 1 - e;
    let mut mantissa = (&r * ten_to(scale)).to_integer();
    let ten = BigInt::from(10u32);
    while (&mantissa % &ten).is_zero() {
        mantissa /= &ten;
        scale -= 1;
    }
    let negative = mantissa.sign() == Sign::Minus;
    let ds = mantissa.abs().to_string();
    let lead_exp = ds.len() as i64 - 1 - scale;
    let body = if (-7..21).contains(&lead_exp) {
        if scale <= 0 {
            format!("{}{}", ds, "0".repeat((-scale) as usize))
        } else if ds.len() as i64 > scale {
            let split = ds.len() - scale as usize;
            format!("{}.{}", &ds[..split], &ds[split..])
        } else {
            format!("0.{}{}", "0".repeat(scale as usize - ds.len()), ds)
        }
    } else if ds.len() > 1 {
        format!("{}.{}e{}", &ds[..1], &ds[1..], lead_exp)
    } else {
        format!("{}e{}", ds, lead_exp)
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

/// Canonical exact rendering: "p/q" in lowest terms, or an integer.
pub fn rational_to_string(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parse "p/q", an integer, or a decimal with optional exponent, exactly.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let all = format!("{whole}{frac}");
    if all.is_empty() || !all.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = all.parse().map_err(|_| bad())?;
    let value = BigRational::from_integer(digits) * ten_to(exponent - frac.len() as i64);
    Ok(if negative { -value } else { value })
}

/// x^k for an integer exponent of either sign. x must be nonzero when k < 0.
pub fn int_pow(x: &BigRational, k: i64) -> BigRational {
    let k32 = i32::try_from(k).expect("exponent out of range");
    x.pow(k32)
}

/// x^e for x > 0.
///
/// Exact for integer e. For non-integer e = p/q the q-th root is taken on an
/// integer grid chosen so the result carries `digits` + 1 correct significant
/// digits (truncation, relative error below 10^-digits).
pub fn pow_positive(x: &BigRational, e: &BigRational, digits: u32) -> BigRational {
    debug_assert!(x.is_positive());
    if e.is_integer() {
        return int_pow(x, e.to_integer().to_i64().expect("exponent out of range"));
    }
    let p = e.numer().to_i64().expect("exponent numerator out of range");
    let q = e.denom().to_u32().expect("exponent denominator out of range");
    nth_root(&int_pow(x, p), q, digits)
}

/// a^(1/q) for a > 0, relative error below 10^-digits.
pub fn nth_root(a: &BigRational, q: u32, digits: u32) -> BigRational {
    debug_assert!(a.is_positive());
    if q == 1 {
        return a.clone();
    }
    let magnitude = floor_log10(a).div_euclid(q as i64);
    // root ~ 10^magnitude; keep digits + 2 digits below the leading one.
    let scale = digits as i64 + 2 - magnitude;
    let grid = (a * ten_to(scale * q as i64)).floor().to_integer();
    BigRational::new(grid.nth_root(q), BigInt::one()) / ten_to(scale)
}

/// Rigorous rational enclosure [lo, hi] of e² with hi - lo < 10^-digits.
pub fn exp2_enclosure(digits: u32) -> (BigRational, BigRational) {
    let tol = ten_to(-(digits as i64) - 1);
    let two = int(2);
    let mut sum = BigRational::zero();
    let mut term = BigRational::one();
    let mut k: u64 = 0;
    loop {
        sum += &term;
        k += 1;
        term = term * &two / int(k as i64);
        // Tail from index k on is bounded by term / (1 - 2/(k+1)) <= 2 term for k >= 3.
        if k >= 3 && term < tol {
            let tail = &term * &two;
            return (sum.clone(), sum + tail);
        }
    }
}

/// Sign of a rational as -1, 0, 1.
pub fn sign(q: &BigRational) -> i8 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_formatting() {
        assert_eq!(to_decimal_string(&int(5), 50), "5");
        assert_eq!(to_decimal_string(&ratio(1, 8), 50), "0.125");
        assert_eq!(to_decimal_string(&ratio(-1, 3), 5), "-0.33333");
        assert_eq!(to_decimal_string(&ratio(2, 3), 3), "0.667");
        assert_eq!(to_decimal_string(&ten_to(-52), 10), "1e-52");
        assert_eq!(to_decimal_string(&(ratio(3, 2) * ten_to(-40)), 10), "1.5e-40");
        assert_eq!(to_decimal_string(&int(5184), 3), "5180");
        assert_eq!(to_decimal_string(&(int(7) * ten_to(30)), 5), "7e30");
        assert_eq!(to_decimal_string(&BigRational::zero(), 5), "0");
    }

    #[test]
    fn parse_accepts_all_forms() {
        assert_eq!(parse_rational("1/220").unwrap(), ratio(1, 220));
        assert_eq!(parse_rational("-4").unwrap(), int(-4));
        assert_eq!(parse_rational("2.618034").unwrap(), ratio(2618034, 1000000));
        assert_eq!(parse_rational("1.5e-3").unwrap(), ratio(15, 10000));
        assert_eq!(parse_rational("4e2").unwrap(), int(400));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1.2.3").is_err());
    }

    #[test]
    fn floor_log10_boundaries() {
        assert_eq!(floor_log10(&int(1)), 0);
        assert_eq!(floor_log10(&int(10)), 1);
        assert_eq!(floor_log10(&int(9)), 0);
        assert_eq!(floor_log10(&ratio(1, 10)), -1);
        assert_eq!(floor_log10(&ratio(99, 1000)), -2);
        assert_eq!(floor_log10(&int(-1000)), 3);
    }

    #[test]
    fn rational_powers() {
        assert_eq!(pow_positive(&int(2), &int(3), 10), int(8));
        assert_eq!(pow_positive(&int(2), &int(-2), 10), ratio(1, 4));
        let r = pow_positive(&int(2), &ratio(1, 2), 40);
        // sqrt(2) = 1.41421356237309504880168872420969807856967187537694...
        let want = parse_rational("1.4142135623730950488016887242096980785696").unwrap();
        assert!((r - want).abs() < ten_to(-39));
        let r = pow_positive(&ratio(1, 1000), &ratio(1, 3), 30);
        assert!((r - ratio(1, 10)).abs() < ten_to(-31));
    }

    #[test]
    fn e_squared_enclosure() {
        let (lo, hi) = exp2_enclosure(40);
        // e^2 = 7.389056098930650227230427460575007813180315570551847...
        let want = parse_rational("7.38905609893065022723042746057500781318031557").unwrap();
        assert!(lo <= want && want <= hi);
        assert!(&hi - &lo < ten_to(-40));
    }

    proptest::proptest! {
        #[test]
        fn decimal_round_trip(p in -10_000_000i64..10_000_000, q in 1i64..100_000, digits in 1u32..60) {
            let x = ratio(p, q);
            let s = to_decimal_string(&x, digits);
            let back = parse_rational(&s).unwrap();
            proptest::prop_assert_eq!(back, round_sig(&x, digits));
        }
    }
}
