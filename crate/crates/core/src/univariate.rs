//! Dense univariate polynomials over the rationals.
//!
//! Coefficients are stored in ascending degree order with no trailing zeros;
//! the zero polynomial has an empty coefficient vector.

use std::fmt;

use num::{BigInt, BigRational, Integer, One, Signed, Zero};

use crate::numeric::{int, rational_to_string};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<BigRational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * int(i as i64))
                .collect(),
        )
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let d = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - d];
        for i in (0..quot.len()).rev() {
            let q = &rem[i + d] / lead;
            if q.is_zero() {
                continue;
            }
            for (j, c) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= &q * c;
            }
            quot[i] = q;
        }
        rem.truncate(d);
        (Self::new(quot), Self::new(rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => self.scale(&(BigRational::one() / l)),
            None => Self::zero(),
        }
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// p / gcd(p, p'): same distinct roots, all simple.
    pub fn squarefree_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree().unwrap_or(0) == 0
    }

    /// Divide out the largest power of x; positive roots are unchanged.
    pub fn strip_zero_roots(&self) -> Self {
        let k = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        Self::new(self.coeffs[k..].to_vec())
    }

    /// Integer coefficients with gcd 1 and positive leading coefficient.
    /// Two polynomials agree up to a nonzero scalar iff their canonical forms
    /// are equal.
    pub fn canonical(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if ints.last().unwrap().is_negative() { -BigInt::one() } else { BigInt::one() };
        Self::new(
            ints.into_iter()
                .map(|c| BigRational::from_integer(c / &g * &sign))
                .collect(),
        )
    }

    /// Every root z satisfies |z| < 1 + max |a_i / a_d| (Cauchy).
    pub fn cauchy_bound(&self) -> BigRational {
        let lead = self.leading().expect("cauchy bound of the zero polynomial").abs();
        let d = self.coeffs.len() - 1;
        let m = self.coeffs[..d]
            .iter()
            .map(|c| c.abs() / &lead)
            .max()
            .unwrap_or_else(BigRational::zero);
        m + BigRational::one()
    }

    /// Coefficients of the integer canonical form, ascending.
    pub fn integer_coeffs(&self) -> Vec<BigInt> {
        self.canonical().coeffs.iter().map(|c| c.to_integer()).collect()
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(rational_to_string).collect()
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            let coeff = if a.is_integer() { a.to_string() } else { format!("({a})") };
            match (i, a.is_one()) {
                (0, _) => write!(f, "{coeff}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{coeff}*x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{coeff}*x^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::ratio;

    #[test]
    fn division_and_gcd() {
        // (x−1)(x²−3x+1) = x³ − 4x² + 4x − 1
        let p = UniPoly::from_ints(&[-1, 4, -4, 1]);
        let (q, r) = p.div_rem(&UniPoly::from_ints(&[-1, 1]));
        assert_eq!(q, UniPoly::from_ints(&[1, -3, 1]));
        assert!(r.is_zero());
        let g = p.gcd(&UniPoly::from_ints(&[-1, 0, 1]));
        assert_eq!(g, UniPoly::from_ints(&[-1, 1]));
    }

    #[test]
    fn squarefree_part_drops_multiplicity() {
        // (x−1)²(x−2) = x³ − 4x² + 5x − 2
        let p = UniPoly::from_ints(&[-2, 5, -4, 1]);
        assert!(!p.is_squarefree());
        assert_eq!(p.squarefree_part().monic(), UniPoly::from_ints(&[2, -3, 1]));
    }

    #[test]
    fn canonical_form() {
        let monic = UniPoly::new(vec![ratio(1, 220), ratio(-1, 8), ratio(221, 220), int(-2), int(1)]);
        assert_eq!(monic.canonical(), UniPoly::from_ints(&[2, -55, 442, -880, 440]));
        assert_eq!(UniPoly::from_ints(&[8, -220, 1768, -3520, 1760]).canonical(), monic.canonical());
        assert_eq!(UniPoly::from_ints(&[2, 0, -4]).canonical(), UniPoly::from_ints(&[-1, 0, 2]));
    }

    #[test]
    fn display() {
        assert_eq!(UniPoly::from_ints(&[-1, 4, -4, 1]).to_string(), "x^3 - 4*x^2 + 4*x - 1");
        assert_eq!(UniPoly::zero().to_string(), "0");
    }
}
