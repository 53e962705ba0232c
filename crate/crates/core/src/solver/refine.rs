//! Root refinement to a requested number of decimal digits.
//!
//! Strategy: exact rational-root test, bisection down to a thousandth of the
//! isolating interval, then Newton iteration on a fixed decimal grid. A
//! Newton result is only accepted after an exact sign-change check around
//! it; otherwise pure bisection finishes the job.

use num::{BigInt, BigRational, Integer, Signed, ToPrimitive, Zero};

use super::sturm::{bisect, positive_core, IsolatingInterval};
use crate::error::{Error, Result};
use crate::numeric::{floor_log10, int, round_to_scale, sign, ten_to};
use crate::sparse_system::GUARD_DIGITS;
use crate::univariate::UniPoly;

const NEWTON_CAP: usize = 200;
/// Rational-root candidates are only enumerated when both the constant and
/// the leading integer coefficient are below this bound.
const DIVISOR_SEARCH_LIMIT: u64 = 1_000_000_000_000;

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Positive rational roots u/v of `p`, found by testing u | a_0, v | a_d on
/// the integer canonical form. Empty when the coefficients are too large to
/// enumerate divisors.
pub fn rational_positive_roots(p: &UniPoly) -> Vec<BigRational> {
    let core = p.strip_zero_roots();
    let ints = core.integer_coeffs();
    let (Some(a0), Some(ad)) = (ints.first(), ints.last()) else {
        return Vec::new();
    };
    let (Some(a0), Some(ad)) = (a0.abs().to_u64(), ad.abs().to_u64()) else {
        return Vec::new();
    };
    if a0 == 0 || a0 > DIVISOR_SEARCH_LIMIT || ad > DIVISOR_SEARCH_LIMIT {
        return Vec::new();
    }
    let mut roots = Vec::new();
    for u in divisors(a0) {
        for v in divisors(ad) {
            if u.gcd(&v) != 1 {
                continue;
            }
            let x = BigRational::new(BigInt::from(u), BigInt::from(v));
            if core.eval(&x).is_zero() {
                roots.push(x);
            }
        }
    }
    roots.sort();
    roots
}

/// Refine the root of `p` inside `interval` to `precision` significant
/// digits (plus guard digits). Rational roots are returned exactly.
pub fn refine_root(p: &UniPoly, interval: &IsolatingInterval, precision: u32) -> Result<BigRational> {
    let core = positive_core(p)?;
    let (lo, hi) = (interval.lo.clone(), interval.hi.clone());
    let (s_lo, s_hi) = (sign(&core.eval(&lo)), sign(&core.eval(&hi)));
    if !lo.is_positive() || lo >= hi || s_lo == 0 || s_hi == 0 || s_lo == s_hi {
        return Err(Error::Domain(format!(
            "({lo}, {hi}) is not an isolating interval of {p}"
        )));
    }

    if let Some(r) = rational_positive_roots(&core)
        .into_iter()
        .find(|r| interval.contains(r))
    {
        return Ok(r);
    }

    let scale = precision as i64 + GUARD_DIGITS as i64 + (-floor_log10(&lo)).max(0);
    let (a, b) = bisect(&core, lo.clone(), hi.clone(), &(interval.width() / int(1000)));
    if a == b {
        return Ok(a);
    }
    if let Some(x) = newton(&core, &a, &b, scale) {
        return Ok(x);
    }
    let (a, b) = bisect(&core, a, b, &ten_to(-scale));
    Ok(round_to_scale(&((a + b) / int(2)), scale))
}

fn newton(core: &UniPoly, lo: &BigRational, hi: &BigRational, scale: i64) -> Option<BigRational> {
    let deriv = core.derivative();
    let step_tol = ten_to(1 - scale);
    let mut x = round_to_scale(&((lo + hi) / int(2)), scale);
    let mut converged = false;
    for _ in 0..NEWTON_CAP {
        let d = deriv.eval(&x);
        if d.is_zero() {
            return None;
        }
        let next = round_to_scale(&(&x - core.eval(&x) / d), scale);
        if &next < lo || &next > hi {
            return None;
        }
        let step = (&next - &x).abs();
        x = next;
        if step <= step_tol {
            converged = true;
            break;
        }
    }
    if !converged {
        return None;
    }
    if core.eval(&x).is_zero() {
        return Some(x);
    }
    let delta = ten_to(2 - scale);
    let a = (&x - &delta).max(lo.clone());
    let b = (&x + &delta).min(hi.clone());
    (sign(&core.eval(&a)) * sign(&core.eval(&b)) < 0).then_some(x)
}

/// Tolerance-free check used by tests: does a sign change of `p` bracket `x`
/// within 10^-digits?
pub fn brackets_root(p: &UniPoly, x: &BigRational, digits: u32) -> bool {
    let core = match positive_core(p) {
        Ok(c) => c,
        Err(_) => return false,
    };
    if core.eval(x).is_zero() {
        return true;
    }
    let delta = ten_to(-(digits as i64));
    sign(&core.eval(&(x - &delta))) * sign(&core.eval(&(x + &delta))) < 0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::parse_rational;
    use crate::solver::isolate_positive_roots;

    #[test]
    fn golden_ratio_square_to_fifty_digits() {
        let p = UniPoly::from_ints(&[1, -3, 1]);
        let iv = isolate_positive_roots(&p).unwrap();
        let r = refine_root(&p, &iv[1], 50).unwrap();
        // (3 + √5)/2
        let want = parse_rational("2.6180339887498948482045868343656381177203091798057628621").unwrap();
        assert!((&r - want).abs() < ten_to(-55));
        assert!((r - parse_rational("2.618034").unwrap()).abs() < ten_to(-6));
    }

    #[test]
    fn rational_roots_short_circuit() {
        let p = UniPoly::from_ints(&[2, -3, 1]);
        let iv = isolate_positive_roots(&p).unwrap();
        assert_eq!(refine_root(&p, &iv[0], 50).unwrap(), int(1));
        assert_eq!(refine_root(&p, &iv[1], 50).unwrap(), int(2));
        assert_eq!(
            rational_positive_roots(&UniPoly::from_ints(&[-1, 4, -4, 1])),
            vec![int(1)]
        );
        assert_eq!(
            rational_positive_roots(&UniPoly::from_ints(&[-3, 2])),
            vec![crate::numeric::ratio(3, 2)]
        );
    }

    #[test]
    fn quartic_smallest_root() {
        let p = UniPoly::from_ints(&[8, -220, 1768, -3520, 1760]);
        let iv = isolate_positive_roots(&p).unwrap();
        let r = refine_root(&p, &iv[0], 50).unwrap();
        assert!((&r - parse_rational("0.076645").unwrap()).abs() < ten_to(-6));
        assert!(brackets_root(&p, &r, 58));
    }

    #[test]
    fn rejects_non_isolating_interval() {
        let p = UniPoly::from_ints(&[2, -3, 1]);
        let bad = IsolatingInterval { lo: int(3), hi: int(4), sign_change: false };
        assert!(refine_root(&p, &bad, 20).is_err());
    }

    #[test]
    fn irrational_roots_of_random_cubics_are_bracketed() {
        // x³ − 2, x³ − 7x + 3, 5x³ − x − 1
        for coeffs in [[-2, 0, 0, 1], [3, -7, 0, 1], [-1, -1, 0, 5]] {
            let p = UniPoly::from_ints(&coeffs);
            for iv in isolate_positive_roots(&p).unwrap() {
                let r = refine_root(&p, &iv, 40).unwrap();
                assert!(iv.contains(&r));
                assert!(brackets_root(&p, &r, 45));
            }
        }
    }
}
