//! Block JSON: the system format plus `schedule` and `eliminant`.
//! The recipe's id, version and expected count sit in `metadata`.

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{BlockRecipe, EliminationStep};
use crate::error::{Error, Result};
use crate::numeric::parse_rational;
use crate::sparse_system::{PolynomialFile, SparseSystem, SystemFile, TermFile};
use crate::univariate::UniPoly;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StepFile {
    pub equation: usize,
    pub variable: String,
    pub numerator: PolynomialFile,
    pub denominator: TermFile,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BlockFile {
    #[serde(flatten)]
    pub system: SystemFile,
    pub schedule: Vec<StepFile>,
    /// Ascending coefficients.
    pub eliminant: Vec<String>,
}

impl From<&BlockRecipe> for BlockFile {
    fn from(r: &BlockRecipe) -> Self {
        let mut system = SystemFile::from(&r.system);
        system.metadata.insert("id".into(), json!(r.id));
        system.metadata.insert("version".into(), json!(r.version));
        system
            .metadata
            .insert("expected_count".into(), json!(r.expected_count));
        let names = r.system.variables();
        BlockFile {
            system,
            schedule: r
                .schedule
                .iter()
                .map(|s| StepFile {
                    equation: s.equation,
                    variable: names[s.variable].clone(),
                    numerator: PolynomialFile::from(&s.numerator),
                    denominator: TermFile::from(&s.denominator),
                })
                .collect(),
            eliminant: r.eliminant.to_strings(),
        }
    }
}

impl TryFrom<BlockFile> for BlockRecipe {
    type Error = Error;

    fn try_from(f: BlockFile) -> Result<Self> {
        let meta = &f.system.metadata;
        let field = |key: &str| {
            meta.get(key)
                .ok_or_else(|| Error::Parse(format!("block metadata lacks {key:?}")))
        };
        let id = field("id")?
            .as_str()
            .ok_or_else(|| Error::Parse("block id must be a string".into()))?
            .to_string();
        let version = field("version")?
            .as_u64()
            .ok_or_else(|| Error::Parse("block version must be an integer".into()))? as u32;
        let expected_count = field("expected_count")?
            .as_u64()
            .ok_or_else(|| Error::Parse("expected_count must be an integer".into()))?
            as usize;

        let mut system_file = f.system.clone();
        system_file.metadata.clear();
        let system = SparseSystem::try_from(system_file)?;
        let m = system.num_variables();
        let schedule = f
            .schedule
            .iter()
            .map(|s| {
                let variable = system
                    .variable_index(&s.variable)
                    .ok_or_else(|| Error::MalformedRecipe(format!("unknown variable {:?}", s.variable)))?;
                let denominator = PolynomialFile { terms: vec![s.denominator.clone()] }
                    .to_polynomial(m)
                    .map_err(|e| Error::MalformedRecipe(format!("denominator: {e}")))?;
                let [denominator] = denominator.terms() else {
                    unreachable!("one term in, one term out")
                };
                Ok(EliminationStep {
                    equation: s.equation,
                    variable,
                    numerator: s.numerator.to_polynomial(m)?,
                    denominator: denominator.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let eliminant = UniPoly::new(
            f.eliminant
                .iter()
                .map(|c| parse_rational(c))
                .collect::<Result<Vec<_>>>()?,
        );
        BlockRecipe::new(id, version, system, schedule, eliminant, expected_count)
    }
}
