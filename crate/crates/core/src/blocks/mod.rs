//! Seed blocks: m equations in m variables with m+2 monomials (one of them
//! the constant) and m+1 nondegenerate positive solutions.
//!
//! Each block carries an elimination schedule that rewrites it into a single
//! univariate eliminant. Shipped blocks live in `data/blocks/*.json`; further
//! blocks can be added to a [`BlockRegistry`], which verifies every recipe
//! before accepting it.

mod file;

use std::collections::BTreeSet;
use std::sync::Arc;

use num::{BigRational, Signed, Zero};

use crate::error::{Error, Result};
use crate::solver::{self, DEFAULT_PRECISION};
use crate::sparse_system::{evaluate_partial, support, SparsePolynomial, SparseSystem, Term};
use crate::univariate::UniPoly;

pub use file::{BlockFile, StepFile};

const BUILTIN_M1: &str = include_str!("../../data/blocks/bihan_m1.json");
const BUILTIN_M2: &str = include_str!("../../data/blocks/bihan_m2.json");
const BUILTIN_M3: &str = include_str!("../../data/blocks/bihan_m3.json");

/// Solve equation `equation` for `variable`: variable = numerator / denominator.
#[derive(Clone, Debug, PartialEq)]
pub struct EliminationStep {
    pub equation: usize,
    pub variable: usize,
    pub numerator: SparsePolynomial,
    /// A single term; it never vanishes on the positive orthant.
    pub denominator: Term,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlockRecipe {
    id: String,
    version: u32,
    system: SparseSystem,
    schedule: Vec<EliminationStep>,
    eliminant: UniPoly,
    expected_count: usize,
}

impl BlockRecipe {
    /// Structural checks only; full verification happens in
    /// [`BlockRegistry::register`].
    pub fn new(
        id: impl Into<String>,
        version: u32,
        system: SparseSystem,
        schedule: Vec<EliminationStep>,
        eliminant: UniPoly,
        expected_count: usize,
    ) -> Result<Self> {
        let m = system.num_variables();
        if m == 0 {
            return Err(Error::MalformedRecipe("block has no variables".into()));
        }
        if schedule.len() + 1 != m {
            return Err(Error::MalformedRecipe(format!(
                "a block in {m} variables needs {} elimination steps, got {}",
                m - 1,
                schedule.len()
            )));
        }
        let mut equations = BTreeSet::new();
        let mut variables = BTreeSet::new();
        for (s, step) in schedule.iter().enumerate() {
            if step.equation >= system.polynomials().len() || step.variable >= m {
                return Err(Error::MalformedRecipe(format!("step {s} is out of range")));
            }
            if !equations.insert(step.equation) || !variables.insert(step.variable) {
                return Err(Error::MalformedRecipe(format!(
                    "step {s} reuses an equation or variable"
                )));
            }
            if step.numerator.arity() != m || step.denominator.exponent.len() != m {
                return Err(Error::MalformedRecipe(format!("step {s} has the wrong arity")));
            }
            if step.denominator.coefficient.is_zero() {
                return Err(Error::MalformedRecipe(format!(
                    "step {s} has an identically zero denominator"
                )));
            }
            let depends_on_eliminated = |v: usize| {
                step.numerator.involves(v) || !step.denominator.exponent.entries()[v].is_zero()
            };
            if variables.iter().any(|&v| depends_on_eliminated(v)) {
                return Err(Error::MalformedRecipe(format!(
                    "step {s} refers to a variable that is already eliminated"
                )));
            }
        }
        Ok(BlockRecipe {
            id: id.into(),
            version,
            system,
            schedule,
            eliminant,
            expected_count,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn version(&self) -> u32 {
        self.version
    }

    /// Block dimension m.
    pub fn m(&self) -> usize {
        self.system.num_variables()
    }

    pub fn system(&self) -> &SparseSystem {
        &self.system
    }

    pub fn schedule(&self) -> &[EliminationStep] {
        &self.schedule
    }

    pub fn eliminant(&self) -> &UniPoly {
        &self.eliminant
    }

    pub fn expected_count(&self) -> usize {
        self.expected_count
    }

    /// The variable left over after the schedule runs.
    pub fn eliminant_variable(&self) -> usize {
        let used: BTreeSet<usize> = self.schedule.iter().map(|s| s.variable).collect();
        (0..self.m()).find(|v| !used.contains(v)).unwrap()
    }

    /// Coordinates of the block solution lying over a root of the eliminant,
    /// obtained by evaluating the schedule's substitutions in reverse.
    pub fn back_substitute(&self, root: &BigRational, precision: u32) -> Result<Vec<BigRational>> {
        let mut values: Vec<Option<BigRational>> = vec![None; self.m()];
        values[self.eliminant_variable()] = Some(root.clone());
        for step in self.schedule.iter().rev() {
            let numer = evaluate_partial(&step.numerator, &values, precision)?;
            let denom_poly =
                SparsePolynomial::from_terms(self.m(), [step.denominator.clone()]);
            let denom = evaluate_partial(&denom_poly, &values, precision)?;
            values[step.variable] = Some(numer / denom);
        }
        Ok(values.into_iter().map(Option::unwrap).collect())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: BlockFile = serde_json::from_str(text)?;
        file.try_into()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&BlockFile::from(self))
            .expect("block serialization cannot fail");
        s.push('\n');
        s
    }
}

/// Run the schedule: substitute each step into the remaining equations,
/// clearing monomial denominators, and return the last remaining equation as
/// a univariate polynomial in canonical integer form.
pub fn eliminate(recipe: &BlockRecipe) -> Result<UniPoly> {
    let mut remaining: Vec<Option<SparsePolynomial>> =
        recipe.system.polynomials().iter().cloned().map(Some).collect();
    for (s, step) in recipe.schedule.iter().enumerate() {
        let equation = remaining[step.equation]
            .take()
            .ok_or_else(|| Error::MalformedRecipe(format!("step {s} reuses an equation")))?;
        let linear = equation.terms().iter().all(|t| {
            let e = &t.exponent.entries()[step.variable];
            e.is_zero() || *e == BigRational::from_integer(1.into())
        });
        if !linear || !equation.involves(step.variable) {
            return Err(Error::MalformedRecipe(format!(
                "step {s}: equation {} is not linear in {}",
                step.equation,
                recipe.system.variables()[step.variable]
            )));
        }
        if !equation
            .substitute(step.variable, &step.numerator, &step.denominator)?
            .is_zero()
        {
            return Err(Error::MalformedRecipe(format!(
                "step {s}: the substitution does not solve equation {}",
                step.equation
            )));
        }
        for eq in remaining.iter_mut().flatten() {
            *eq = eq.substitute(step.variable, &step.numerator, &step.denominator)?;
        }
    }
    let last: Vec<SparsePolynomial> = remaining.into_iter().flatten().collect();
    let [last] = last.as_slice() else {
        return Err(Error::MalformedRecipe(format!(
            "{} equations remain after elimination",
            last.len()
        )));
    };
    to_univariate(last, recipe.eliminant_variable())
}

fn to_univariate(p: &SparsePolynomial, var: usize) -> Result<UniPoly> {
    if p.is_zero() {
        return Err(Error::MalformedRecipe("the eliminant vanishes identically".into()));
    }
    let mut exps = Vec::new();
    for t in p.terms() {
        for (i, e) in t.exponent.entries().iter().enumerate() {
            if i != var && !e.is_zero() {
                return Err(Error::MalformedRecipe(
                    "the remaining equation is not univariate".into(),
                ));
            }
        }
        exps.push(t.exponent.entries()[var].clone());
    }
    let min = exps.iter().min().unwrap().clone();
    let mut coeffs: Vec<BigRational> = Vec::new();
    for (t, e) in p.terms().iter().zip(exps) {
        let shifted = e - &min;
        if !shifted.is_integer() || shifted.is_negative() {
            return Err(Error::MalformedRecipe(
                "the eliminant has non-integer exponents".into(),
            ));
        }
        let d: usize = shifted
            .to_integer()
            .try_into()
            .map_err(|_| Error::MalformedRecipe("eliminant degree too large".into()))?;
        if coeffs.len() <= d {
            coeffs.resize(d + 1, BigRational::zero());
        }
        coeffs[d] += &t.coefficient;
    }
    Ok(UniPoly::new(coeffs).canonical())
}

/// The shipped recipe of dimension m ∈ {1, 2, 3}, parsed but not verified.
pub fn builtin_block(m: usize) -> Result<BlockRecipe> {
    let text = match m {
        1 => BUILTIN_M1,
        2 => BUILTIN_M2,
        3 => BUILTIN_M3,
        _ => return Err(Error::UnsupportedBlock { m }),
    };
    BlockRecipe::from_json(text)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockHandle {
    pub id: String,
    pub m: usize,
}

/// Append-only collection of verified blocks.
#[derive(Clone, Debug, Default)]
pub struct BlockRegistry {
    blocks: Vec<Arc<BlockRecipe>>,
}

impl BlockRegistry {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Registry holding the shipped blocks for m = 1, 2, 3.
    pub fn with_builtins() -> Result<Self> {
        let mut reg = Self::empty();
        for m in 1..=3 {
            reg.register(builtin_block(m)?)?;
        }
        Ok(reg)
    }

    /// Verify `recipe` and add it. Checks, in order: square system, monomial
    /// census (m+2 monomials including the constant), the m+1 ceiling on
    /// nondegenerate positive solutions, eliminant recomputation, squarefree
    /// eliminant with exactly m+1 positive roots, and full certification.
    pub fn register(&mut self, recipe: BlockRecipe) -> Result<BlockHandle> {
        let reject = |invariant: &'static str, detail: String| Error::RecipeRejected { invariant, detail };
        let m = recipe.m();
        if self.get(recipe.id()).is_some() {
            return Err(reject("unique id", format!("{} is already registered", recipe.id())));
        }
        if !recipe.system.is_square() {
            return Err(reject("square system", format!("{} equations", recipe.system.polynomials().len())));
        }
        let supp = support(&recipe.system);
        if supp.len() != m + 2 {
            return Err(reject(
                "monomial census",
                format!("{} distinct monomials, a block of dimension {m} needs {}", supp.len(), m + 2),
            ));
        }
        if !supp.iter().any(|e| e.is_zero()) {
            return Err(reject("monomial census", "no constant monomial".into()));
        }
        if recipe.expected_count > m + 1 {
            return Err(reject(
                "positive solution bound",
                format!(
                    "claims {} solutions; with m+2 monomials there are at most {} nondegenerate positive ones",
                    recipe.expected_count,
                    m + 1
                ),
            ));
        }
        if recipe.expected_count < m + 1 {
            return Err(reject(
                "expected count",
                format!("blocks must attain m+1 = {} solutions, recipe claims {}", m + 1, recipe.expected_count),
            ));
        }
        let recomputed = eliminate(&recipe).map_err(|e| reject("elimination schedule", e.to_string()))?;
        if recomputed != recipe.eliminant.canonical() {
            return Err(reject(
                "eliminant",
                format!("schedule yields {recomputed}, recipe stores {}", recipe.eliminant),
            ));
        }
        if !recipe.eliminant.is_squarefree() {
            return Err(reject("eliminant", "eliminant is not squarefree".into()));
        }
        let roots = solver::sturm_positive_count(&recipe.eliminant)?;
        if roots != recipe.expected_count {
            return Err(reject(
                "positive roots",
                format!("eliminant has {roots} positive roots, expected {}", recipe.expected_count),
            ));
        }
        solver::solve_block(&recipe, DEFAULT_PRECISION).map_err(|e| reject("certification", e.to_string()))?;

        let handle = BlockHandle { id: recipe.id.clone(), m };
        self.blocks.push(Arc::new(recipe));
        Ok(handle)
    }

    pub fn get(&self, id: &str) -> Option<Arc<BlockRecipe>> {
        self.blocks.iter().find(|b| b.id == id).cloned()
    }

    /// First registered block of dimension m.
    pub fn by_dimension(&self, m: usize) -> Option<Arc<BlockRecipe>> {
        self.blocks.iter().find(|b| b.m() == m).cloned()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Arc<BlockRecipe>> {
        self.blocks.iter()
    }
}
