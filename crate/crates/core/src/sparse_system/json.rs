//! JSON system format:
//!
//! ```text
//! { "variables": ["x1", ...],
//!   "polynomials": [ { "terms": [ { "coeff": "p/q", "exponents": ["p/q", ...] } ] } ],
//!   "metadata": { ... } }
//! ```
//!
//! Rationals are written in lowest terms as "p/q" or as plain integers.

use serde::{Deserialize, Serialize};

use super::{ExponentVector, Metadata, SparsePolynomial, SparseSystem, Term};
use crate::error::{Error, Result};
use crate::numeric::{parse_rational, rational_to_string};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TermFile {
    pub coeff: String,
    pub exponents: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolynomialFile {
    pub terms: Vec<TermFile>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SystemFile {
    pub variables: Vec<String>,
    pub polynomials: Vec<PolynomialFile>,
    #[serde(default, skip_serializing_if = "Metadata::is_empty")]
    pub metadata: Metadata,
}

impl From<&Term> for TermFile {
    fn from(t: &Term) -> Self {
        TermFile {
            coeff: rational_to_string(&t.coefficient),
            exponents: t.exponent.entries().iter().map(rational_to_string).collect(),
        }
    }
}

impl From<&SparsePolynomial> for PolynomialFile {
    fn from(p: &SparsePolynomial) -> Self {
        PolynomialFile {
            terms: p.terms().iter().map(TermFile::from).collect(),
        }
    }
}

impl PolynomialFile {
    pub fn to_polynomial(&self, arity: usize) -> Result<SparsePolynomial> {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let exponents = t
                    .exponents
                    .iter()
                    .map(|e| parse_rational(e))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Term::new(parse_rational(&t.coeff)?, ExponentVector::new(exponents)))
            })
            .collect::<Result<Vec<_>>>()?;
        SparsePolynomial::new(arity, terms)
    }
}

impl From<&SparseSystem> for SystemFile {
    fn from(s: &SparseSystem) -> Self {
        SystemFile {
            variables: s.variables.clone(),
            polynomials: s.polynomials.iter().map(PolynomialFile::from).collect(),
            metadata: s.metadata.clone(),
        }
    }
}

impl TryFrom<SystemFile> for SparseSystem {
    type Error = Error;

    fn try_from(f: SystemFile) -> Result<Self> {
        let n = f.variables.len();
        let polys = f
            .polynomials
            .iter()
            .map(|p| p.to_polynomial(n))
            .collect::<Result<Vec<_>>>()?;
        Ok(SparseSystem::new(f.variables, polys)?.with_metadata(f.metadata))
    }
}

impl SparseSystem {
    /// Canonical pretty-printed JSON, newline-terminated.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&SystemFile::from(self))
            .expect("system serialization cannot fail");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SystemFile = serde_json::from_str(text)?;
        file.try_into()
    }
}
