//! Sparse polynomials with exact rational coefficients and exact rational
//! exponents, and square systems built from them.
//!
//! Terms are kept in canonical order (descending graded lexicographic on the
//! exponent vectors) so that equality and serialization are deterministic.

mod json;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num::{BigRational, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::{self, Matrix};
use crate::numeric::{self, pow_positive};

pub use json::{PolynomialFile, SystemFile, TermFile};

/// Extra decimal digits carried when a rational power has to be rounded.
pub(crate) const GUARD_DIGITS: u32 = 10;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExponentVector(Vec<BigRational>);

impl ExponentVector {
    pub fn new(entries: Vec<BigRational>) -> Self {
        ExponentVector(entries)
    }

    pub fn zero(len: usize) -> Self {
        ExponentVector(vec![BigRational::zero(); len])
    }

    pub fn from_ints(entries: &[i64]) -> Self {
        ExponentVector(entries.iter().map(|&e| numeric::int(e)).collect())
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zero(len);
        v.0[i] = BigRational::one();
        v
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn degree(&self) -> BigRational {
        self.0.iter().sum()
    }

    fn add(&self, other: &Self) -> Self {
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn scaled(&self, k: &BigRational) -> Self {
        ExponentVector(self.0.iter().map(|a| a * k).collect())
    }
}

impl Ord for ExponentVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for ExponentVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coefficient: BigRational,
    pub exponent: ExponentVector,
}

impl Term {
    pub fn new(coefficient: BigRational, exponent: ExponentVector) -> Self {
        Term {
            coefficient,
            exponent,
        }
    }
}

/// A polynomial with distinct exponent vectors and nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsePolynomial {
    arity: usize,
    terms: Vec<Term>,
}

impl SparsePolynomial {
    /// Strict constructor: rejects zero coefficients, repeated exponent
    /// vectors, and exponent vectors of the wrong length.
    pub fn new(arity: usize, terms: Vec<Term>) -> Result<Self> {
        if arity == 0 {
            return Err(Error::Shape("polynomial arity must be positive".into()));
        }
        let mut seen = BTreeSet::new();
        for t in &terms {
            if t.exponent.len() != arity {
                return Err(Error::Shape(format!(
                    "exponent vector of length {} in a polynomial of arity {arity}",
                    t.exponent.len()
                )));
            }
            if t.coefficient.is_zero() {
                return Err(Error::Domain("term with zero coefficient".into()));
            }
            if !seen.insert(t.exponent.clone()) {
                return Err(Error::Domain("repeated exponent vector in polynomial".into()));
            }
        }
        let mut p = SparsePolynomial { arity, terms };
        p.terms.sort_by(|a, b| b.exponent.cmp(&a.exponent));
        Ok(p)
    }

    /// Sums like terms and drops zeros. Exponent lengths must equal `arity`.
    pub fn from_terms(arity: usize, terms: impl IntoIterator<Item = Term>) -> Self {
        let mut acc: BTreeMap<ExponentVector, BigRational> = BTreeMap::new();
        for t in terms {
            debug_assert_eq!(t.exponent.len(), arity);
            *acc.entry(t.exponent).or_insert_with(BigRational::zero) += t.coefficient;
        }
        let terms = acc
            .into_iter()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| Term::new(c, e))
            .collect();
        SparsePolynomial { arity, terms }
    }

    /// Builds from (coefficient, integer exponents) pairs; like terms are summed.
    pub fn from_int_terms(arity: usize, terms: &[(BigRational, &[i64])]) -> Self {
        Self::from_terms(
            arity,
            terms
                .iter()
                .map(|(c, e)| Term::new(c.clone(), ExponentVector::from_ints(e))),
        )
    }

    pub fn zero(arity: usize) -> Self {
        SparsePolynomial {
            arity,
            terms: Vec::new(),
        }
    }

    pub fn constant(arity: usize, c: BigRational) -> Self {
        Self::from_terms(arity, [Term::new(c, ExponentVector::zero(arity))])
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_terms(self.arity, self.terms.iter().chain(&other.terms).cloned())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                out.push(Term::new(
                    &a.coefficient * &b.coefficient,
                    a.exponent.add(&b.exponent),
                ));
            }
        }
        Self::from_terms(self.arity, out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.arity, BigRational::one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn mul_term(&self, t: &Term) -> Self {
        Self::from_terms(
            self.arity,
            self.terms.iter().map(|s| {
                Term::new(&s.coefficient * &t.coefficient, s.exponent.add(&t.exponent))
            }),
        )
    }

    /// Whether variable `var` occurs with a nonzero exponent.
    pub fn involves(&self, var: usize) -> bool {
        self.terms.iter().any(|t| !t.exponent.0[var].is_zero())
    }

    /// Formal partial derivative: c·x^e ↦ c·e_j·x^(e − δ_j).
    pub fn derivative(&self, var: usize) -> Self {
        Self::from_terms(
            self.arity,
            self.terms.iter().filter(|t| !t.exponent.0[var].is_zero()).map(|t| {
                let mut e = t.exponent.clone();
                let c = &t.coefficient * &e.0[var];
                e.0[var] -= BigRational::one();
                Term::new(c, e)
            }),
        )
    }

    /// Replace `var` by `numerator / denominator` where the denominator is a
    /// single nonzero term, then multiply through by the denominator monomial
    /// (without its coefficient) raised to the largest power of `var` that
    /// occurred. On the positive orthant the result vanishes exactly where the
    /// substituted polynomial does.
    ///
    /// Every exponent of `var` must be a nonnegative integer.
    pub fn substitute(
        &self,
        var: usize,
        numerator: &SparsePolynomial,
        denominator: &Term,
    ) -> Result<Self> {
        if denominator.coefficient.is_zero() {
            return Err(Error::MalformedRecipe("substitution denominator is zero".into()));
        }
        let mut max_power = 0u32;
        for t in &self.terms {
            let e = &t.exponent.0[var];
            if !e.is_integer() || e.is_negative() {
                return Err(Error::MalformedRecipe(format!(
                    "cannot substitute into a term with exponent {e} in the eliminated variable"
                )));
            }
            max_power = max_power.max(e.to_integer().try_into().unwrap_or(u32::MAX));
        }
        let mut out = Vec::new();
        let mut powers: Vec<SparsePolynomial> = vec![Self::constant(self.arity, BigRational::one())];
        for t in &self.terms {
            let k: u32 = t.exponent.0[var].to_integer().try_into().unwrap();
            while powers.len() <= k as usize {
                let next = powers.last().unwrap().mul(numerator);
                powers.push(next);
            }
            let mut rest = t.exponent.clone();
            rest.0[var] = BigRational::zero();
            // c · rest · N^k · D^(max - k), D taken as a bare monomial except
            // for its coefficient, which divides the N^k part.
            let shift = denominator
                .exponent
                .scaled(&BigRational::from_integer((max_power - k).into()));
            let coeff = &t.coefficient
                / numeric::int_pow(&denominator.coefficient, i64::from(k));
            let mono = Term::new(coeff, rest.add(&shift));
            out.extend(powers[k as usize].mul_term(&mono).terms);
        }
        Ok(Self::from_terms(self.arity, out))
    }

    fn check_point(&self, point: &[BigRational]) -> Result<()> {
        if point.len() != self.arity {
            return Err(Error::Shape(format!(
                "point has {} coordinates, polynomial has arity {}",
                point.len(),
                self.arity
            )));
        }
        if let Some(i) = point.iter().position(|x| !x.is_positive()) {
            return Err(Error::Domain(format!(
                "coordinate {i} is not strictly positive ({})",
                point[i]
            )));
        }
        Ok(())
    }
}

/// Σ c·Π x_i^(e_i) at a strictly positive point.
///
/// Exact when every exponent occurring with a nonzero value is an integer;
/// otherwise each rational power is rounded to `precision` + guard digits.
pub fn evaluate(poly: &SparsePolynomial, point: &[BigRational], precision: u32) -> Result<BigRational> {
    poly.check_point(point)?;
    Ok(evaluate_unchecked(poly, point, precision))
}

fn evaluate_unchecked(poly: &SparsePolynomial, point: &[BigRational], precision: u32) -> BigRational {
    let digits = precision + GUARD_DIGITS;
    poly.terms
        .iter()
        .map(|t| {
            let mut v = t.coefficient.clone();
            for (x, e) in point.iter().zip(&t.exponent.0) {
                if !e.is_zero() {
                    v *= pow_positive(x, e, digits);
                }
            }
            v
        })
        .sum()
}

/// Evaluation where coordinates the polynomial does not involve may be
/// arbitrary (used during back-substitution).
pub(crate) fn evaluate_partial(
    poly: &SparsePolynomial,
    point: &[Option<BigRational>],
    precision: u32,
) -> Result<BigRational> {
    let filled: Vec<BigRational> = point
        .iter()
        .enumerate()
        .map(|(i, x)| match x {
            Some(v) => Ok(v.clone()),
            None if !poly.involves(i) => Ok(BigRational::one()),
            None => Err(Error::MalformedRecipe(format!(
                "substitution depends on variable {i}, which is not yet known"
            ))),
        })
        .collect::<Result<_>>()?;
    evaluate(poly, &filled, precision)
}

/// Metadata attached to a system; a sorted string-keyed JSON map.
pub type Metadata = BTreeMap<String, serde_json::Value>;

#[derive(Clone, Debug, PartialEq)]
pub struct SparseSystem {
    variables: Vec<String>,
    polynomials: Vec<SparsePolynomial>,
    metadata: Metadata,
}

impl SparseSystem {
    pub fn new(variables: Vec<String>, polynomials: Vec<SparsePolynomial>) -> Result<Self> {
        let distinct: BTreeSet<&String> = variables.iter().collect();
        if distinct.len() != variables.len() {
            return Err(Error::Shape("variable names must be distinct".into()));
        }
        if let Some(p) = polynomials.iter().find(|p| p.arity != variables.len()) {
            return Err(Error::Shape(format!(
                "polynomial of arity {} in a system with {} variables",
                p.arity,
                variables.len()
            )));
        }
        Ok(SparseSystem {
            variables,
            polynomials,
            metadata: Metadata::new(),
        })
    }

    pub fn with_metadata(mut self, metadata: Metadata) -> Self {
        self.metadata = metadata;
        self
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn polynomials(&self) -> &[SparsePolynomial] {
        &self.polynomials
    }

    pub fn metadata(&self) -> &Metadata {
        &self.metadata
    }

    pub fn metadata_mut(&mut self) -> &mut Metadata {
        &mut self.metadata
    }

    pub fn num_variables(&self) -> usize {
        self.variables.len()
    }

    pub fn is_square(&self) -> bool {
        self.polynomials.len() == self.variables.len()
    }

    pub fn variable_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }

    /// Renders polynomial `i` as text, e.g. `x^2*y - 4*x^2 - 1`.
    pub fn format_polynomial(&self, i: usize) -> String {
        format_polynomial(&self.polynomials[i], &self.variables)
    }
}

impl fmt::Display for SparseSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.polynomials.len() {
            writeln!(f, "{} = 0", self.format_polynomial(i))?;
        }
        Ok(())
    }
}

fn format_polynomial(p: &SparsePolynomial, names: &[String]) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (idx, t) in p.terms.iter().enumerate() {
        let negative = t.coefficient.is_negative();
        let c = t.coefficient.abs();
        if idx == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let mut factors = Vec::new();
        if !c.is_one() || t.exponent.is_zero() {
            factors.push(if c.is_integer() { c.to_string() } else { format!("({c})") });
        }
        for (name, e) in names.iter().zip(&t.exponent.0) {
            if e.is_zero() {
                continue;
            }
            if e.is_one() {
                factors.push(name.clone());
            } else if e.is_integer() && e.is_positive() {
                factors.push(format!("{name}^{e}"));
            } else {
                factors.push(format!("{name}^({e})"));
            }
        }
        out.push_str(&factors.join("*"));
    }
    out
}

/// Union of the exponent vectors of all polynomials, deduplicated exactly.
pub fn support(system: &SparseSystem) -> BTreeSet<ExponentVector> {
    system
        .polynomials
        .iter()
        .flat_map(|p| p.terms.iter().map(|t| t.exponent.clone()))
        .collect()
}

/// Matrix of partial derivatives ∂f_i/∂x_j at a positive point.
pub fn jacobian(system: &SparseSystem, point: &[BigRational], precision: u32) -> Result<Matrix> {
    let n = system.num_variables();
    if let Some(p) = system.polynomials.first() {
        p.check_point(point)?;
    }
    Ok(system
        .polynomials
        .iter()
        .map(|p| {
            (0..n)
                .map(|j| evaluate_unchecked(&p.derivative(j), point, precision))
                .collect()
        })
        .collect())
}

pub fn jacobian_det(system: &SparseSystem, point: &[BigRational], precision: u32) -> Result<BigRational> {
    if !system.is_square() {
        return Err(Error::Shape(format!(
            "jacobian determinant needs a square system, got {} equations in {} variables",
            system.polynomials.len(),
            system.num_variables()
        )));
    }
    Ok(matrix::determinant(&jacobian(system, point, precision)?))
}

/// Dimension of the affine span of a nonempty set of exponent vectors.
pub fn affine_span_dim<'a>(supp: impl IntoIterator<Item = &'a ExponentVector>) -> Result<usize> {
    let mut iter = supp.into_iter();
    let base = iter
        .next()
        .ok_or_else(|| Error::Domain("affine span of an empty support".into()))?;
    let diffs: Matrix = iter
        .map(|v| v.0.iter().zip(&base.0).map(|(a, b)| a - b).collect())
        .collect();
    Ok(if diffs.is_empty() { 0 } else { matrix::rank(&diffs) })
}

/// Monomial change of variables: every exponent vector e becomes A·e.
pub fn monomial_substitution(system: &SparseSystem, a: &Matrix) -> Result<SparseSystem> {
    let n = system.num_variables();
    if a.len() != n || !matrix::is_square(a) {
        return Err(Error::InvalidTransform(format!(
            "transform must be {n}x{n} for a system in {n} variables"
        )));
    }
    if matrix::determinant(a).is_zero() {
        return Err(Error::InvalidTransform("matrix is singular".into()));
    }
    let polynomials = system
        .polynomials
        .iter()
        .map(|p| {
            SparsePolynomial::from_terms(
                n,
                p.terms.iter().map(|t| {
                    Term::new(
                        t.coefficient.clone(),
                        ExponentVector(matrix::mat_vec(a, &t.exponent.0)),
                    )
                }),
            )
        })
        .collect();
    Ok(SparseSystem {
        variables: system.variables.clone(),
        polynomials,
        metadata: Metadata::new(),
    })
}

/// Image of a positive point under the transform matching
/// [`monomial_substitution`]: x'_i = Π_j x_j^((A⁻¹)_ji), each power rounded to
/// `precision` + guard significant digits.
pub fn transform_point(point: &[BigRational], a: &Matrix, precision: u32) -> Result<Vec<BigRational>> {
    let inv = matrix::inverse(a).ok_or_else(|| Error::InvalidTransform("matrix is singular".into()))?;
    if point.len() != a.len() {
        return Err(Error::Shape("point and transform sizes differ".into()));
    }
    if point.iter().any(|x| !x.is_positive()) {
        return Err(Error::Domain("point must be strictly positive".into()));
    }
    let digits = precision + 2 * GUARD_DIGITS;
    Ok((0..a.len())
        .map(|i| {
            point
                .iter()
                .enumerate()
                .map(|(j, x)| pow_positive(x, &inv[j][i], digits))
                .product()
        })
        .collect())
}
