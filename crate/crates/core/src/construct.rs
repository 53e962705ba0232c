//! Assembly of systems with n equations, n variables, n+k+1 monomials and
//! ⌊(n+k)/k⌋^k positive solutions.
//!
//! Write n = k·m + j with 0 ≤ j < k. Take k copies of an m-variable block on
//! disjoint variables (all sharing the constant monomial) and add j slack
//! equations x_i − 1 = 0. Block b's local variable i becomes x_{b·m+i+1};
//! the slacks take the trailing indices.

use std::sync::Arc;

use num::BigUint;
use serde::{Deserialize, Serialize};

use crate::blocks::{BlockRecipe, BlockRegistry};
use crate::error::{Error, Result};
use crate::numeric::int;
use crate::sparse_system::{
    affine_span_dim, support, ExponentVector, Metadata, SparsePolynomial, SparseSystem, Term,
};

/// Metadata key under which an assembled system stores its plan.
pub const PLAN_KEY: &str = "plan";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayoutEntry {
    pub global: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub block: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub local: Option<String>,
}

/// Serialized form of a plan, as embedded in system metadata.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanRecord {
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub j: usize,
    pub block_ids: Vec<String>,
    /// Decimal string; the claim a solver run is checked against.
    pub predicted_count: String,
    pub beyond_stated_range: bool,
    pub variable_layout: Vec<LayoutEntry>,
}

#[derive(Clone, Debug)]
pub struct ConstructionPlan {
    n: usize,
    k: usize,
    m: usize,
    j: usize,
    blocks: Vec<Arc<BlockRecipe>>,
}

/// ⌊(n+k)/k⌋^k for n ≥ k ≥ 1.
pub fn predicted_count(n: usize, k: usize) -> Result<BigUint> {
    if k == 0 || n < k {
        return Err(Error::Domain(format!("need n >= k >= 1, got n={n}, k={k}")));
    }
    Ok(num::pow(BigUint::from((n + k) / k), k))
}

/// Plan using the first registered block of dimension ⌊n/k⌋ for every copy.
pub fn plan(n: usize, k: usize, registry: &BlockRegistry) -> Result<ConstructionPlan> {
    let m = check_dimensions(n, k)?;
    let block = registry.by_dimension(m).ok_or(Error::UnsupportedBlock { m })?;
    ConstructionPlan::new(n, k, vec![block; k])
}

/// Plan with an explicit block per copy, all of dimension ⌊n/k⌋.
pub fn plan_with_blocks(
    n: usize,
    k: usize,
    block_ids: &[String],
    registry: &BlockRegistry,
) -> Result<ConstructionPlan> {
    check_dimensions(n, k)?;
    let blocks = block_ids
        .iter()
        .map(|id| {
            registry
                .get(id)
                .ok_or_else(|| Error::Domain(format!("block {id:?} is not registered")))
        })
        .collect::<Result<Vec<_>>>()?;
    ConstructionPlan::new(n, k, blocks)
}

fn check_dimensions(n: usize, k: usize) -> Result<usize> {
    if n == 0 || k == 0 {
        return Err(Error::Domain(format!("n and k must be positive, got n={n}, k={k}")));
    }
    if n < k {
        return Err(Error::Domain(format!("n must be at least k, got n={n}, k={k}")));
    }
    Ok(n / k)
}

impl ConstructionPlan {
    fn new(n: usize, k: usize, blocks: Vec<Arc<BlockRecipe>>) -> Result<Self> {
        let m = check_dimensions(n, k)?;
        if blocks.len() != k {
            return Err(Error::Domain(format!("plan needs {k} blocks, got {}", blocks.len())));
        }
        if let Some(b) = blocks.iter().find(|b| b.m() != m) {
            return Err(Error::Domain(format!(
                "block {} has dimension {}, the plan needs {m}",
                b.id(),
                b.m()
            )));
        }
        Ok(ConstructionPlan { n, k, m, j: n - k * m, blocks })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn j(&self) -> usize {
        self.j
    }

    pub fn blocks(&self) -> &[Arc<BlockRecipe>] {
        &self.blocks
    }

    /// n = k lies outside the stated n > k range of the lower bound; the
    /// construction still goes through with the m = 1 block.
    pub fn beyond_stated_range(&self) -> bool {
        self.n == self.k
    }

    pub fn predicted_count(&self) -> BigUint {
        num::pow(BigUint::from(self.m + 1), self.k)
    }

    pub fn variable_names(&self) -> Vec<String> {
        (1..=self.n).map(|i| format!("x{i}")).collect()
    }

    pub fn variable_layout(&self) -> Vec<LayoutEntry> {
        let names = self.variable_names();
        let mut out = Vec::with_capacity(self.n);
        for (b, block) in self.blocks.iter().enumerate() {
            for (i, local) in block.system().variables().iter().enumerate() {
                out.push(LayoutEntry {
                    global: names[b * self.m + i].clone(),
                    block: Some(b),
                    local: Some(local.clone()),
                });
            }
        }
        for name in &names[self.k * self.m..] {
            out.push(LayoutEntry { global: name.clone(), block: None, local: None });
        }
        out
    }

    pub fn to_record(&self) -> PlanRecord {
        PlanRecord {
            n: self.n,
            k: self.k,
            m: self.m,
            j: self.j,
            block_ids: self.blocks.iter().map(|b| b.id().to_string()).collect(),
            predicted_count: self.predicted_count().to_string(),
            beyond_stated_range: self.beyond_stated_range(),
            variable_layout: self.variable_layout(),
        }
    }

    /// Rebuild a plan from its record. The claimed `predicted_count` is not
    /// checked here; callers compare it against what they certify.
    pub fn from_record(record: &PlanRecord, registry: &BlockRegistry) -> Result<Self> {
        let plan = plan_with_blocks(record.n, record.k, &record.block_ids, registry)?;
        if plan.m != record.m || plan.j != record.j {
            return Err(Error::Domain(format!(
                "plan record has m={}, j={} but n={}, k={} gives m={}, j={}",
                record.m, record.j, record.n, record.k, plan.m, plan.j
            )));
        }
        if plan.variable_layout() != record.variable_layout {
            return Err(Error::Domain("plan record has a non-standard variable layout".into()));
        }
        Ok(plan)
    }

    /// The plan embedded in an assembled system's metadata.
    pub fn from_system(system: &SparseSystem, registry: &BlockRegistry) -> Result<Self> {
        let record = plan_record(system)?;
        let plan = Self::from_record(&record, registry)?;
        if system.variables() != plan.variable_names().as_slice() {
            return Err(Error::Domain(
                "system variables do not match its construction plan".into(),
            ));
        }
        if system.polynomials().len() != plan.n {
            return Err(Error::Domain(format!(
                "plan describes {} equations, system has {}",
                plan.n,
                system.polynomials().len()
            )));
        }
        Ok(plan)
    }
}

pub fn plan_record(system: &SparseSystem) -> Result<PlanRecord> {
    let value = system
        .metadata()
        .get(PLAN_KEY)
        .ok_or_else(|| Error::Domain("system carries no construction plan".into()))?;
    Ok(serde_json::from_value(value.clone())?)
}

/// Instantiate the plan: blocks on disjoint variables, then slack equations.
pub fn assemble(plan: &ConstructionPlan) -> SparseSystem {
    let n = plan.n;
    let embed = |offset: usize, e: &ExponentVector| {
        let mut v = ExponentVector::zero(n).entries().to_vec();
        for (i, x) in e.entries().iter().enumerate() {
            v[offset + i] = x.clone();
        }
        ExponentVector::new(v)
    };
    let mut polynomials = Vec::with_capacity(n);
    for (b, block) in plan.blocks.iter().enumerate() {
        for p in block.system().polynomials() {
            polynomials.push(SparsePolynomial::from_terms(
                n,
                p.terms()
                    .iter()
                    .map(|t| Term::new(t.coefficient.clone(), embed(b * plan.m, &t.exponent))),
            ));
        }
    }
    for i in plan.k * plan.m..n {
        polynomials.push(SparsePolynomial::from_terms(
            n,
            [
                Term::new(int(1), ExponentVector::unit(n, i)),
                Term::new(int(-1), ExponentVector::zero(n)),
            ],
        ));
    }
    let mut metadata = Metadata::new();
    metadata.insert(
        PLAN_KEY.into(),
        serde_json::to_value(plan.to_record()).expect("plan serializes"),
    );
    SparseSystem::new(plan.variable_names(), polynomials)
        .expect("assembled system is well formed")
        .with_metadata(metadata)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Census {
    pub monomials: usize,
    /// `None` for an empty support.
    pub affine_span_dim: Option<usize>,
}

pub fn census(system: &SparseSystem) -> Census {
    let supp = support(system);
    Census {
        monomials: supp.len(),
        affine_span_dim: affine_span_dim(&supp).ok(),
    }
}
