//! Certification of positive solutions.
//!
//! Block systems are solved through their eliminant: exact Sturm isolation
//! of its positive roots, refinement, and back-substitution through the
//! elimination schedule. Assembled systems are solved as Cartesian products
//! of their block solutions, and every product point is re-certified against
//! the full system.

mod refine;
mod sturm;

use std::collections::HashMap;
use std::sync::Arc;

use num::{BigRational, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::blocks::{BlockRecipe, BlockRegistry};
use crate::construct::ConstructionPlan;
use crate::error::{Error, Result};
use crate::matrix;
use crate::numeric::{parse_rational, round_sig, ten_to, to_decimal_string};
use crate::sparse_system::{evaluate, jacobian, SparseSystem};

pub use refine::{brackets_root, rational_positive_roots, refine_root};
pub use sturm::{isolate_positive_roots, sturm_positive_count, IsolatingInterval, SturmSequence};

pub const DEFAULT_PRECISION: u32 = 50;

/// |det J| must exceed this multiple of the product of the row max-norms of J.
pub fn nondegeneracy_ratio() -> BigRational {
    ten_to(-8)
}

/// Solutions closer than this in every coordinate are treated as the same.
pub fn distinctness_tolerance() -> BigRational {
    ten_to(-10)
}

/// Residual bound 10^(4 − precision) required of every certified solution.
pub fn residual_tolerance(precision: u32) -> BigRational {
    ten_to(4 - precision as i64)
}

/// A positive point with its residual and Jacobian determinant.
#[derive(Clone, Debug, PartialEq)]
pub struct CertifiedSolution {
    /// Strictly positive, rounded to `working_precision` significant digits.
    pub coordinates: Vec<BigRational>,
    pub residual_norm: BigRational,
    pub jacobian_det: BigRational,
    pub working_precision: u32,
}

impl CertifiedSolution {
    /// Half a unit in the last kept digit of the largest coordinate, plus the
    /// same again for refinement error.
    pub fn error_bound(&self) -> BigRational {
        let largest = self
            .coordinates
            .iter()
            .map(|x| x.abs())
            .max()
            .unwrap_or_else(BigRational::zero);
        if largest.is_zero() {
            return ten_to(-(self.working_precision as i64));
        }
        ten_to(crate::numeric::floor_log10(&largest) + 1 - self.working_precision as i64)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolutionSet {
    pub solutions: Vec<CertifiedSolution>,
    pub count_claimed: usize,
}

impl SolutionSet {
    fn new(solutions: Vec<CertifiedSolution>) -> Self {
        let count_claimed = solutions.len();
        SolutionSet {
            solutions,
            count_claimed,
        }
    }

    pub fn len(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub is_positive: bool,
    /// max_i |f_i(x)|; `None` when the point is not positive.
    pub residual_norm: Option<BigRational>,
    pub jacobian_det: Option<BigRational>,
    /// Product of row max-norms of the Jacobian.
    pub det_scale: Option<BigRational>,
    pub is_nondegenerate: bool,
}

impl Certificate {
    pub fn passes(&self, tolerance: &BigRational) -> bool {
        self.is_positive
            && self.is_nondegenerate
            && self.residual_norm.as_ref().is_some_and(|r| r < tolerance)
    }
}

/// Residual, Jacobian determinant, and positivity / nondegeneracy flags.
pub fn certify(system: &SparseSystem, point: &[BigRational], precision: u32) -> Result<Certificate> {
    if point.len() != system.num_variables() {
        return Err(Error::Shape(format!(
            "point has {} coordinates, system has {} variables",
            point.len(),
            system.num_variables()
        )));
    }
    if point.iter().any(|x| !x.is_positive()) {
        return Ok(Certificate {
            is_positive: false,
            residual_norm: None,
            jacobian_det: None,
            det_scale: None,
            is_nondegenerate: false,
        });
    }
    let residual = system
        .polynomials()
        .iter()
        .map(|p| evaluate(p, point, precision).map(|v| v.abs()))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .max()
        .unwrap_or_else(BigRational::zero);
    let (det, scale, nondegenerate) = if system.is_square() {
        let j = jacobian(system, point, precision)?;
        let det = matrix::determinant(&j);
        let scale: BigRational = matrix::row_max_norms(&j).into_iter().product();
        let nondegenerate = det.abs() > &scale * nondegeneracy_ratio();
        (Some(det), Some(scale), nondegenerate)
    } else {
        (None, None, false)
    };
    Ok(Certificate {
        is_positive: true,
        residual_norm: Some(residual),
        jacobian_det: det,
        det_scale: scale,
        is_nondegenerate: nondegenerate,
    })
}

fn certified(
    system: &SparseSystem,
    coordinates: Vec<BigRational>,
    precision: u32,
) -> Result<CertifiedSolution> {
    let cert = certify(system, &coordinates, precision)?;
    let tol = residual_tolerance(precision);
    if !cert.passes(&tol) {
        return Err(Error::Certification(format!(
            "point {} failed: positive={}, residual={}, nondegenerate={}",
            format_point(&coordinates, 12),
            cert.is_positive,
            cert.residual_norm
                .as_ref()
                .map_or("n/a".to_string(), |r| to_decimal_string(r, 6)),
            cert.is_nondegenerate
        )));
    }
    Ok(CertifiedSolution {
        coordinates,
        residual_norm: round_sig(&cert.residual_norm.unwrap(), precision),
        jacobian_det: round_sig(&cert.jacobian_det.unwrap(), precision),
        working_precision: precision,
    })
}

fn format_point(p: &[BigRational], digits: u32) -> String {
    let parts: Vec<String> = p.iter().map(|x| to_decimal_string(x, digits)).collect();
    format!("({})", parts.join(", "))
}

/// True when every pair of points differs by more than the distinctness
/// tolerance in some coordinate.
pub fn pairwise_distinct(points: &[Vec<BigRational>]) -> bool {
    let tol = distinctness_tolerance();
    points.iter().enumerate().all(|(i, a)| {
        points[i + 1..]
            .iter()
            .all(|b| a.iter().zip(b).any(|(x, y)| (x - y).abs() > tol))
    })
}

/// All positive solutions of a block, certified at `precision` digits.
pub fn solve_block(recipe: &BlockRecipe, precision: u32) -> Result<SolutionSet> {
    let eliminant = recipe.eliminant();
    let mut solutions = Vec::new();
    for interval in isolate_positive_roots(eliminant)? {
        let root = refine_root(eliminant, &interval, precision)?;
        let point = recipe.back_substitute(&root, precision)?;
        if point.iter().any(|x| !x.is_positive()) {
            continue;
        }
        let coords = point.iter().map(|x| round_sig(x, precision)).collect();
        solutions.push(certified(recipe.system(), coords, precision)?);
    }
    if solutions.len() != recipe.expected_count() {
        return Err(Error::Certification(format!(
            "block {} has {} certified positive solutions, expected {}",
            recipe.id(),
            solutions.len(),
            recipe.expected_count()
        )));
    }
    let points: Vec<_> = solutions.iter().map(|s| s.coordinates.clone()).collect();
    if !pairwise_distinct(&points) {
        return Err(Error::Certification(format!(
            "block {} produced coincident solutions",
            recipe.id()
        )));
    }
    Ok(SolutionSet::new(solutions))
}

/// Solutions of an assembled system: the Cartesian product of its block
/// solutions with every slack coordinate equal to 1, each point re-certified
/// against the full system. Products are enumerated with the first block
/// varying slowest.
pub fn solve_assembled(
    system: &SparseSystem,
    registry: &BlockRegistry,
    precision: u32,
) -> Result<SolutionSet> {
    let plan = ConstructionPlan::from_system(system, registry)?;
    let mut cache: HashMap<&str, Arc<SolutionSet>> = HashMap::new();
    let mut per_block = Vec::with_capacity(plan.blocks().len());
    for block in plan.blocks() {
        let set = match cache.get(block.id()) {
            Some(s) => s.clone(),
            None => {
                let s = Arc::new(solve_block(block, precision)?);
                cache.insert(block.id(), s.clone());
                s
            }
        };
        per_block.push(set);
    }
    let sizes: Vec<usize> = per_block.iter().map(|s| s.len()).collect();
    let total: usize = sizes.iter().product();
    let n = plan.n();
    let m = plan.m();

    let solutions = (0..total)
        .into_par_iter()
        .map(|index| {
            let mut point = vec![BigRational::from_integer(1.into()); n];
            let mut rest = index;
            for b in (0..sizes.len()).rev() {
                let choice = rest % sizes[b];
                rest /= sizes[b];
                let coords = &per_block[b].solutions[choice].coordinates;
                point[b * m..(b + 1) * m].clone_from_slice(coords);
            }
            certified(system, point, precision)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SolutionSet::new(solutions))
}

/// On-disk solution list: decimals at the working precision.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolutionsFile {
    pub count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<u32>,
    pub solutions: Vec<SolutionRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifest: Option<serde_json::Value>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolutionRecord {
    pub coords: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jacobian_det: Option<String>,
}

impl SolutionsFile {
    pub fn from_set(set: &SolutionSet, precision: u32) -> Self {
        SolutionsFile {
            count: set.len(),
            precision: Some(precision),
            solutions: set
                .solutions
                .iter()
                .map(|s| SolutionRecord {
                    coords: s
                        .coordinates
                        .iter()
                        .map(|x| to_decimal_string(x, precision))
                        .collect(),
                    residual: Some(to_decimal_string(&s.residual_norm, precision)),
                    jacobian_det: Some(to_decimal_string(&s.jacobian_det, precision)),
                })
                .collect(),
            manifest: None,
        }
    }

    /// Coordinates parsed back into exact rationals.
    pub fn points(&self) -> Result<Vec<Vec<BigRational>>> {
        self.solutions
            .iter()
            .map(|s| s.coords.iter().map(|c| parse_rational(c)).collect())
            .collect()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("solutions serialization cannot fail");
        s.push('\n');
        s
    }
}

/// Outcome of re-certifying a list of points against a system.
#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    /// Indices of points that are not positive, exceed the tolerance, or are
    /// degenerate.
    pub failures: Vec<usize>,
    pub distinct: bool,
    pub count: usize,
}

impl VerifyReport {
    pub fn certified(&self) -> bool {
        self.failures.is_empty() && self.distinct
    }
}

pub fn verify_points(
    system: &SparseSystem,
    points: &[Vec<BigRational>],
    precision: u32,
    tolerance: &BigRational,
) -> Result<VerifyReport> {
    let certs = points
        .par_iter()
        .map(|p| certify(system, p, precision))
        .collect::<Result<Vec<_>>>()?;
    let failures = certs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.passes(tolerance))
        .map(|(i, _)| i)
        .collect();
    Ok(VerifyReport {
        failures,
        distinct: pairwise_distinct(points),
        count: points.len(),
    })
}
