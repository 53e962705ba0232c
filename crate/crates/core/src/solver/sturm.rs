//! Exact positive-root counting and isolation with Sturm sequences.

use num::{BigRational, One, Zero};

use crate::error::{Error, Result};
use crate::numeric::{int, ratio, sign};
use crate::univariate::UniPoly;

/// Open rational interval (lo, hi), 0 < lo < hi, holding exactly one
/// distinct root of its polynomial; neither endpoint is a root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolatingInterval {
    pub lo: BigRational,
    pub hi: BigRational,
    /// Whether the original polynomial changes sign across the interval
    /// (false exactly when the enclosed root has even multiplicity).
    pub sign_change: bool,
}

impl IsolatingInterval {
    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo < x && x < &self.hi
    }
}

/// The part of `p` whose roots are exactly the distinct nonzero roots of `p`,
/// each simple: strip powers of x, then take the squarefree part.
pub(crate) fn positive_core(p: &UniPoly) -> Result<UniPoly> {
    if p.is_zero() {
        return Err(Error::Domain("root counting on the zero polynomial".into()));
    }
    Ok(p.strip_zero_roots().squarefree_part())
}

pub struct SturmSequence {
    chain: Vec<UniPoly>,
}

impl SturmSequence {
    /// Standard Sturm chain p, p', −rem(p_{i−1}, p_i), ... for squarefree p.
    pub fn new(p: &UniPoly) -> Self {
        let mut chain = vec![p.clone()];
        let d = p.derivative();
        if !d.is_zero() {
            chain.push(d);
            loop {
                let n = chain.len();
                let r = chain[n - 2].rem(&chain[n - 1]).neg();
                if r.is_zero() {
                    break;
                }
                chain.push(r);
            }
        }
        SturmSequence { chain }
    }

    fn variations(signs: impl Iterator<Item = i8>) -> usize {
        let nonzero: Vec<i8> = signs.filter(|&s| s != 0).collect();
        nonzero.windows(2).filter(|w| w[0] != w[1]).count()
    }

    pub fn variations_at(&self, x: &BigRational) -> usize {
        Self::variations(self.chain.iter().map(|p| sign(&p.eval(x))))
    }

    pub fn variations_at_infinity(&self) -> usize {
        Self::variations(self.chain.iter().map(|p| sign(p.leading().unwrap())))
    }

    /// Distinct roots in (a, b] for a < b.
    pub fn count_between(&self, a: &BigRational, b: &BigRational) -> usize {
        self.variations_at(a) - self.variations_at(b)
    }
}

/// Number of distinct roots of `p` in (0, ∞).
pub fn sturm_positive_count(p: &UniPoly) -> Result<usize> {
    let core = positive_core(p)?;
    if core.degree() == Some(0) {
        return Ok(0);
    }
    let seq = SturmSequence::new(&core);
    Ok(seq.variations_at(&BigRational::zero()) - seq.variations_at_infinity())
}

/// One isolating interval per distinct positive root, in increasing order.
pub fn isolate_positive_roots(p: &UniPoly) -> Result<Vec<IsolatingInterval>> {
    let core = positive_core(p)?;
    if core.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let seq = SturmSequence::new(&core);
    let hi = core.cauchy_bound();
    // Positive roots exceed 1 / cauchy_bound(reversed core).
    let reversed = UniPoly::new(core.coeffs().iter().rev().cloned().collect());
    let lo = BigRational::one() / reversed.cauchy_bound();

    let mut out = Vec::new();
    let mut stack = vec![(lo.clone(), hi.clone(), seq.variations_at(&lo), seq.variations_at(&hi))];
    while let Some((a, b, va, vb)) = stack.pop() {
        match va - vb {
            0 => {}
            1 => out.push((a, b)),
            _ => {
                let m = split_point(&core, &a, &b);
                let vm = seq.variations_at(&m);
                stack.push((m.clone(), b, vm, vb));
                stack.push((a, m, va, vm));
            }
        }
    }
    out.sort_by(|x, y| x.0.cmp(&y.0));
    Ok(out
        .into_iter()
        .map(|(lo, hi)| {
            let sign_change = sign(&p.eval(&lo)) * sign(&p.eval(&hi)) < 0;
            IsolatingInterval { lo, hi, sign_change }
        })
        .collect())
}

/// A point strictly inside (a, b) that is not a root of `p`: the midpoint,
/// else the first of a + (b − a)·k/(2k+1), k = 1, 2, ... that avoids the roots.
fn split_point(p: &UniPoly, a: &BigRational, b: &BigRational) -> BigRational {
    let width = b - a;
    let mid = a + &width * ratio(1, 2);
    if !p.eval(&mid).is_zero() {
        return mid;
    }
    (1..)
        .map(|k| a + &width * ratio(k, 2 * k + 1))
        .find(|m| !p.eval(m).is_zero())
        .unwrap()
}

/// Bisect (lo, hi) for a squarefree `p` with p(lo)·p(hi) < 0 until the
/// width is at most `width`.
pub(crate) fn bisect(
    p: &UniPoly,
    mut lo: BigRational,
    mut hi: BigRational,
    width: &BigRational,
) -> (BigRational, BigRational) {
    let two = int(2);
    let mut s_lo = sign(&p.eval(&lo));
    debug_assert!(s_lo != 0);
    while &(&hi - &lo) > width {
        let mid = (&lo + &hi) / &two;
        let s = sign(&p.eval(&mid));
        if s == 0 {
            return (mid.clone(), mid);
        }
        if s == s_lo {
            lo = mid;
            s_lo = s;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::parse_rational;
    use num::Signed;

    #[test]
    fn counts_on_named_polynomials() {
        assert_eq!(sturm_positive_count(&UniPoly::from_ints(&[-1, 4, -4, 1])).unwrap(), 3);
        assert_eq!(sturm_positive_count(&UniPoly::from_ints(&[2, -3, 1])).unwrap(), 2);
        assert_eq!(
            sturm_positive_count(&UniPoly::from_ints(&[8, -220, 1768, -3520, 1760])).unwrap(),
            4
        );
        assert_eq!(sturm_positive_count(&UniPoly::from_ints(&[1, 0, 1])).unwrap(), 0);
        assert_eq!(sturm_positive_count(&UniPoly::from_ints(&[5])).unwrap(), 0);
    }

    #[test]
    fn counts_ignore_multiplicity_zero_and_negative_roots() {
        // x²(x−1)³(x+2)(x−3)
        let mut p = UniPoly::from_ints(&[0, 0, 1]);
        for f in [[-1, 1], [-1, 1], [-1, 1], [2, 1], [-3, 1]] {
            p = mul(&p, &UniPoly::from_ints(&f));
        }
        assert_eq!(sturm_positive_count(&p).unwrap(), 2);
        let iv = isolate_positive_roots(&p).unwrap();
        assert_eq!(iv.len(), 2);
        assert!(iv[0].contains(&int(1)) && iv[1].contains(&int(3)));
        assert!(iv[0].sign_change, "odd multiplicity root changes sign");
    }

    #[test]
    fn zero_polynomial_is_a_domain_error() {
        assert!(matches!(sturm_positive_count(&UniPoly::zero()), Err(Error::Domain(_))));
        assert!(matches!(isolate_positive_roots(&UniPoly::zero()), Err(Error::Domain(_))));
    }

    #[test]
    fn isolates_golden_ratio_roots() {
        let iv = isolate_positive_roots(&UniPoly::from_ints(&[1, -3, 1])).unwrap();
        assert_eq!(iv.len(), 2);
        assert!(iv[0].contains(&parse_rational("0.381966").unwrap()));
        assert!(iv[1].contains(&parse_rational("2.618034").unwrap()));
        for i in &iv {
            assert!(i.lo.is_positive() && i.lo < i.hi);
        }
    }

    #[test]
    fn isolates_integer_roots_and_nothing_for_x2_plus_1() {
        let iv = isolate_positive_roots(&UniPoly::from_ints(&[2, -3, 1])).unwrap();
        assert_eq!(iv.len(), 2);
        assert!(iv[0].contains(&int(1)) && iv[1].contains(&int(2)));
        assert!(isolate_positive_roots(&UniPoly::from_ints(&[1, 0, 1])).unwrap().is_empty());
    }

    #[test]
    fn isolates_close_roots_of_quartic() {
        let iv = isolate_positive_roots(&UniPoly::from_ints(&[8, -220, 1768, -3520, 1760])).unwrap();
        assert_eq!(iv.len(), 4);
        assert!(iv[0].contains(&parse_rational("0.076645").unwrap()));
        assert!(iv[1].contains(&parse_rational("0.084513").unwrap()));
        assert!(iv.windows(2).all(|w| w[0].hi <= w[1].lo));
    }

    fn mul(a: &UniPoly, b: &UniPoly) -> UniPoly {
        let mut c = vec![BigRational::zero(); a.coeffs().len() + b.coeffs().len() - 1];
        for (i, x) in a.coeffs().iter().enumerate() {
            for (j, y) in b.coeffs().iter().enumerate() {
                c[i + j] += x * y;
            }
        }
        UniPoly::new(c)
    }
}
