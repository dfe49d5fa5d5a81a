use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::HermitianOperator;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Min,
    Max,
}

/// Shape of one variable block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Block {
    /// Complex Hermitian PSD block of the given dimension.
    Hermitian(usize),
    /// Vector of non-negative scalars.
    Diagonal(usize),
}

impl Block {
    pub fn dim(&self) -> usize {
        match *self {
            Block::Hermitian(n) | Block::Diagonal(n) => n,
        }
    }
}

/// Coefficient data on one block.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockData {
    Hermitian(HermitianOperator),
    Diagonal(Vec<f64>),
}

/// `Σ_b ⟨terms_b, X_b⟩ = rhs`; blocks absent from `terms` have zero coefficient.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub terms: Vec<(usize, BlockData)>,
    pub rhs: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SdpProblem {
    pub blocks: Vec<Block>,
    /// One entry per block; `None` means a zero cost on that block.
    pub objective: Vec<Option<BlockData>>,
    pub constraints: Vec<Constraint>,
    pub sense: Sense,
}

impl SdpProblem {
    pub fn new(blocks: Vec<Block>, sense: Sense) -> Self {
        let objective = vec![None; blocks.len()];
        Self {
            blocks,
            objective,
            constraints: Vec::new(),
            sense,
        }
    }

    pub fn set_objective(&mut self, block: usize, data: BlockData) {
        self.objective[block] = Some(data);
    }

    pub fn add_constraint(&mut self, terms: Vec<(usize, BlockData)>, rhs: f64) {
        self.constraints.push(Constraint { terms, rhs });
    }

    fn check_data(&self, block: usize, data: &BlockData) -> Result<()> {
        let shape = self.blocks.get(block).ok_or_else(|| {
            Error::DimensionMismatch(format!("reference to missing block {block}"))
        })?;
        let ok = match (shape, data) {
            (Block::Hermitian(n), BlockData::Hermitian(h)) => h.dim() == *n,
            (Block::Diagonal(n), BlockData::Diagonal(v)) => v.len() == *n,
            _ => false,
        };
        if !ok {
            return Err(Error::DimensionMismatch(format!(
                "coefficient on block {block} does not match its shape {shape:?}"
            )));
        }
        Ok(())
    }

    /// Checks block shapes and the constraint count.
    pub fn validate(&self) -> Result<()> {
        if self.blocks.iter().any(|b| b.dim() == 0) {
            return Err(Error::InvalidParameter("empty block".into()));
        }
        if self.objective.len() != self.blocks.len() {
            return Err(Error::DimensionMismatch(
                "objective must list every block".into(),
            ));
        }
        for (b, data) in self.objective.iter().enumerate() {
            if let Some(d) = data {
                self.check_data(b, d)?;
            }
        }
        for con in &self.constraints {
            for (b, d) in &con.terms {
                self.check_data(*b, d)?;
            }
            if !con.rhs.is_finite() {
                return Err(Error::NonFinite);
            }
        }
        let real_dim: usize = self
            .blocks
            .iter()
            .map(|b| match *b {
                Block::Hermitian(n) => n * n,
                Block::Diagonal(n) => n,
            })
            .sum();
        if self.constraints.len() > real_dim {
            return Err(Error::InvalidParameter(format!(
                "{} constraints exceed the {real_dim} real degrees of freedom",
                self.constraints.len()
            )));
        }
        Ok(())
    }
}
