//! The JSON realization document.

use granule_core::{GroupElement, ProductGroup, Realization};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// A realization as written on disk.
///
/// Each generator is a flat residue vector over `S_j x A_j x S_{j+1}`. An
/// empty moduli list denotes the trivial group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RealizationDocument {
    pub length: usize,
    pub symbol_alphabets: Vec<Vec<u32>>,
    pub state_alphabets: Vec<Vec<u32>>,
    pub constraint_generators: Vec<Vec<Vec<u32>>>,
}

impl RealizationDocument {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Malformed(format!("document: {e}")))
    }

    pub fn to_realization(&self) -> Result<Realization, CliError> {
        let n = self.length;
        if n == 0 {
            return Err(CliError::Malformed("length must be at least 1".into()));
        }
        for (what, len) in [
            ("symbol_alphabets", self.symbol_alphabets.len()),
            ("state_alphabets", self.state_alphabets.len()),
            ("constraint_generators", self.constraint_generators.len()),
        ] {
            if len != n {
                return Err(CliError::Malformed(format!("{what} has {len} entries, length is {n}")));
            }
        }
        let groups = |lists: &[Vec<u32>]| -> Result<Vec<ProductGroup>, CliError> {
            lists
                .iter()
                .map(|m| ProductGroup::new(m.clone()).map_err(CliError::from_core))
                .collect()
        };
        let generators = self
            .constraint_generators
            .iter()
            .map(|gens| gens.iter().map(|g| GroupElement::new(g.clone())).collect())
            .collect();
        Realization::from_generators(
            groups(&self.symbol_alphabets)?,
            groups(&self.state_alphabets)?,
            generators,
        )
        .map_err(CliError::from_core)
    }

    /// A document for a realization whose alphabets are full groups,
    /// listing every nonzero branch as a generator.
    pub fn from_realization(r: &Realization) -> Self {
        let layout = r.layout();
        let n = r.n();
        Self {
            length: n,
            symbol_alphabets: (0..n).map(|j| layout.symbol_group(j).moduli().to_vec()).collect(),
            state_alphabets: (0..n).map(|j| layout.state_group(j).moduli().to_vec()).collect(),
            constraint_generators: (0..n)
                .map(|j| {
                    r.constraint(j)
                        .elements()
                        .iter()
                        .filter(|x| !x.is_zero())
                        .map(|x| x.residues().to_vec())
                        .collect()
                })
                .collect(),
        }
    }
}

/// Parses `1,1,2,0,1,1` into a trajectory.
pub fn parse_trajectory(text: &str) -> Result<GroupElement, CliError> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(GroupElement::new(Vec::new()));
    }
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<u32>()
                .map_err(|e| CliError::Trajectory(format!("{part:?}: {e}")))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(GroupElement::new)
}
